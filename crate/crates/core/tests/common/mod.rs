#![allow(dead_code)]

use nalgebra::Vector3;
use spinvdw::{MaterialModel, PairContext, SpinningSphere};

pub const RADIUS: f64 = 60e-9;
pub const SEPARATION: f64 = 180e-9;

pub fn pair(material: MaterialModel, temperature: f64) -> PairContext {
    let s = SpinningSphere::at_rest(RADIUS, material, temperature).unwrap();
    PairContext::new(s, s, SEPARATION, Vector3::z()).unwrap()
}

pub fn bst_pair(temperature: f64) -> PairContext {
    pair(MaterialModel::bst(), temperature)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
