//! Sweep configuration files and named presets.
//!
//! A configuration is a TOML file with flat (dotted) keys. Every key is
//! optional; missing keys take the defaults shown below.
//!
//! ```toml
//! arrangement = "rr"            # rr | uu | ur | uo | general
//! temperature_K = 300.0
//! radius_a_m = 60e-9
//! radius_b_m = 60e-9
//! separation_m = 180e-9
//! rel_tol = 1e-8
//! abs_tol = 1e-12               # reduced energy units
//! # axis_a = [0, 0, 1]          # general arrangement only
//! # axis_b = [0, 0, 1]
//! # direction = [1, 0, 0]
//!
//! material.f0 = 12.2
//! material.omega_tilde0_rad_s = 5.7e9
//! material.gamma0_rad_s = 2.8e8
//! # material_b.* as material.*; defaults to material
//!
//! omega_a.from_over_omega0 = 0.0
//! omega_a.to_over_omega0 = 4.0
//! omega_a.points = 200
//! # omega_a.values_rad_s = [...] replaces the linear grid
//!
//! omega_b.rule = "fixed"        # fixed | ratio | grid
//! omega_b.value_rad_s = 0.0     # fixed
//! # omega_b.ratio = 0.5         # ratio: Ω_B = ±ρ Ω_A
//! # omega_b.sign = "both"       # co | counter | both
//! # omega_b.values_rad_s = [...] # grid: every Ω_B for every Ω_A
//!
//! # output.path = "sweep.csv"
//! output.format = "csv"         # csv | json
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::configurations::{Arrangement, ArrangementKind};
use crate::error::{Error, Result};
use crate::response::{MaterialModel, SpinningSphere};
use crate::spectral::{PairContext, Tolerances};

pub const DEFAULT_RADIUS: f64 = 60e-9;
pub const DEFAULT_SEPARATION: f64 = 180e-9;
pub const DEFAULT_TEMPERATURE: f64 = 300.0;
pub const DEFAULT_POINTS: usize = 200;

pub const PRESETS: [&str; 6] = ["fig1_300K", "fig1_1500K", "fig2a", "fig2b", "fig2c", "baseline_static"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::config("output.format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// Values of `Ω_A` visited by a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `points` values evenly spaced in `[from, to]`, in units of `ω₀(A)`.
    Linear { from: f64, to: f64, points: usize },
    /// Explicit values in rad/s.
    Values(Vec<f64>),
}

impl Grid {
    pub fn resolve(&self, omega0: f64) -> Vec<f64> {
        match self {
            Grid::Linear { from, to, points } => {
                if *points == 1 {
                    return vec![from * omega0];
                }
                let step = (to - from) / (*points - 1) as f64;
                (0..*points).map(|i| (from + step * i as f64) * omega0).collect()
            }
            Grid::Values(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioSign {
    /// `Ω_B = ρ Ω_A`
    Co,
    /// `Ω_B = −ρ Ω_A`
    Counter,
    /// Both, co-rotating rows first.
    Both,
}

impl RatioSign {
    fn name(self) -> &'static str {
        match self {
            Self::Co => "co",
            Self::Counter => "counter",
            Self::Both => "both",
        }
    }
}

/// How `Ω_B` follows `Ω_A`.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaBRule {
    Fixed(f64),
    Ratio { ratio: f64, sign: RatioSign },
    Grid(Vec<f64>),
}

impl fmt::Display for OmegaBRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaBRule::Fixed(v) => write!(f, "fixed {v} rad/s"),
            OmegaBRule::Ratio { ratio, sign } => write!(f, "ratio {ratio} ({})", sign.name()),
            OmegaBRule::Grid(v) => write!(f, "grid of {} values", v.len()),
        }
    }
}

/// A fully validated sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub arrangement: Arrangement,
    pub material_a: MaterialModel,
    pub material_b: MaterialModel,
    pub radius_a: f64,
    pub radius_b: f64,
    pub separation: f64,
    /// K, shared by both spheres.
    pub temperature: f64,
    pub tolerances: Tolerances,
    pub omega_a: Grid,
    pub omega_b: OmegaBRule,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepSpec {
    pub fn context(&self) -> Result<PairContext> {
        let a = SpinningSphere::new(self.radius_a, self.material_a, self.temperature, 0.0, self.arrangement.axis_a)?;
        let b = SpinningSphere::new(self.radius_b, self.material_b, self.temperature, 0.0, self.arrangement.axis_b)?;
        PairContext::new(a, b, self.separation, self.arrangement.direction)
    }

    pub fn omega0(&self) -> f64 {
        self.material_a.resonance_frequency()
    }

    /// `(Ω_A, Ω_B)` pairs in output order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let grid = self.omega_a.resolve(self.omega0());
        match &self.omega_b {
            OmegaBRule::Fixed(b) => grid.iter().map(|&a| (a, *b)).collect(),
            OmegaBRule::Ratio { ratio, sign } => {
                let signs: &[f64] = match sign {
                    RatioSign::Co => &[1.0],
                    RatioSign::Counter => &[-1.0],
                    RatioSign::Both => &[1.0, -1.0],
                };
                signs
                    .iter()
                    .flat_map(|s| grid.iter().map(move |&a| (a, s * ratio * a)))
                    .collect()
            }
            OmegaBRule::Grid(bs) => grid
                .iter()
                .flat_map(|&a| bs.iter().map(move |&b| (a, b)))
                .collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&RawConfig::from_spec(self)).expect("config serialises")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    f0: Option<f64>,
    omega_tilde0_rad_s: Option<f64>,
    gamma0_rad_s: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    from_over_omega0: Option<f64>,
    to_over_omega0: Option<f64>,
    points: Option<usize>,
    values_rad_s: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    rule: Option<String>,
    value_rad_s: Option<f64>,
    ratio: Option<f64>,
    sign: Option<String>,
    values_rad_s: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    arrangement: Option<String>,
    #[serde(rename = "temperature_K")]
    temperature: Option<f64>,
    radius_a_m: Option<f64>,
    radius_b_m: Option<f64>,
    separation_m: Option<f64>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    axis_a: Option<[f64; 3]>,
    axis_b: Option<[f64; 3]>,
    direction: Option<[f64; 3]>,
    material: Option<RawMaterial>,
    material_b: Option<RawMaterial>,
    omega_a: Option<RawGrid>,
    omega_b: Option<RawRule>,
    output: Option<RawOutput>,
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must be a finite positive number, got {v}")))
    }
}

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must be finite, got {v}")))
    }
}

fn finite_list(key: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::config(key, "must not be empty"));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::config(key, format!("contains non-finite value {x}")));
    }
    Ok(())
}

fn material(raw: &RawMaterial, table: &str, base: MaterialModel) -> Result<MaterialModel> {
    let key = |k: &str| format!("{table}.{k}");
    let m = MaterialModel {
        f0: raw.f0.map_or(Ok(base.f0), |v| positive(&key("f0"), v))?,
        omega_tilde0: raw
            .omega_tilde0_rad_s
            .map_or(Ok(base.omega_tilde0), |v| positive(&key("omega_tilde0_rad_s"), v))?,
        gamma0: match raw.gamma0_rad_s {
            None => base.gamma0,
            Some(v) if v.is_finite() && v >= 0.0 => v,
            Some(v) => return Err(Error::config(key("gamma0_rad_s"), format!("must be >= 0, got {v}"))),
        },
    };
    m.validate().map_err(|e| Error::config(table, e.to_string()))?;
    Ok(m)
}

fn vector(key: &str, v: [f64; 3]) -> Result<Vector3<f64>> {
    let v = Vector3::from(v);
    if !v.iter().all(|x| x.is_finite()) || (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::config(key, format!("must be a unit 3-vector, |v| = {}", v.norm())));
    }
    Ok(v)
}

impl RawConfig {
    fn into_spec(self) -> Result<SweepSpec> {
        let kind: ArrangementKind = match &self.arrangement {
            None => ArrangementKind::Rr,
            Some(s) => s.parse().map_err(|e: Error| Error::config("arrangement", e.to_string()))?,
        };
        let arrangement = if kind == ArrangementKind::General {
            let get = |key: &str, v: Option<[f64; 3]>| {
                v.ok_or_else(|| Error::config(key, "required for the general arrangement"))
                    .and_then(|v| vector(key, v))
            };
            Arrangement::general(
                get("axis_a", self.axis_a)?,
                get("axis_b", self.axis_b)?,
                get("direction", self.direction)?,
            )?
        } else {
            for (key, v) in [("axis_a", self.axis_a), ("axis_b", self.axis_b), ("direction", self.direction)] {
                if v.is_some() {
                    return Err(Error::config(key, "only allowed with arrangement = \"general\""));
                }
            }
            Arrangement::canonical(kind)?
        };

        let material_a = material(&self.material.unwrap_or_default(), "material", MaterialModel::bst())?;
        let material_b = match &self.material_b {
            None => material_a,
            Some(raw) => material(raw, "material_b", material_a)?,
        };

        let temperature = match self.temperature {
            None => DEFAULT_TEMPERATURE,
            Some(t) if t.is_finite() && t >= 0.0 => t,
            Some(t) => return Err(Error::config("temperature_K", format!("must be >= 0, got {t}"))),
        };
        let radius_a = self.radius_a_m.map_or(Ok(DEFAULT_RADIUS), |v| positive("radius_a_m", v))?;
        let radius_b = self.radius_b_m.map_or(Ok(radius_a), |v| positive("radius_b_m", v))?;
        let separation = self
            .separation_m
            .map_or(Ok(DEFAULT_SEPARATION), |v| positive("separation_m", v))?;
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            rel_tol: self.rel_tol.map_or(Ok(defaults.rel_tol), |v| positive("rel_tol", v))?,
            abs_tol: match self.abs_tol {
                None => defaults.abs_tol,
                Some(v) if v.is_finite() && v >= 0.0 => v,
                Some(v) => return Err(Error::config("abs_tol", format!("must be >= 0, got {v}"))),
            },
        };

        let g = self.omega_a.unwrap_or_default();
        let omega_a = match g.values_rad_s {
            Some(v) => {
                if g.from_over_omega0.is_some() || g.to_over_omega0.is_some() || g.points.is_some() {
                    return Err(Error::config(
                        "omega_a.values_rad_s",
                        "cannot be combined with from_over_omega0/to_over_omega0/points",
                    ));
                }
                finite_list("omega_a.values_rad_s", &v)?;
                Grid::Values(v)
            }
            None => {
                let from = finite("omega_a.from_over_omega0", g.from_over_omega0.unwrap_or(0.0))?;
                let to = finite("omega_a.to_over_omega0", g.to_over_omega0.unwrap_or(4.0))?;
                let points = g.points.unwrap_or(DEFAULT_POINTS);
                if points == 0 {
                    return Err(Error::config("omega_a.points", "must be >= 1"));
                }
                Grid::Linear { from, to, points }
            }
        };

        let r = self.omega_b.unwrap_or_default();
        let rule = r.rule.as_deref().unwrap_or("fixed");
        let unused = |key: &'static str, present: bool| {
            if present {
                Err(Error::config(format!("omega_b.{key}"), format!("not used by rule `{rule}`")))
            } else {
                Ok(())
            }
        };
        let omega_b = match rule {
            "fixed" => {
                unused("ratio", r.ratio.is_some())?;
                unused("sign", r.sign.is_some())?;
                unused("values_rad_s", r.values_rad_s.is_some())?;
                OmegaBRule::Fixed(finite("omega_b.value_rad_s", r.value_rad_s.unwrap_or(0.0))?)
            }
            "ratio" => {
                unused("value_rad_s", r.value_rad_s.is_some())?;
                unused("values_rad_s", r.values_rad_s.is_some())?;
                let ratio = r
                    .ratio
                    .ok_or_else(|| Error::config("omega_b.ratio", "required by rule `ratio`"))?;
                if !(ratio.is_finite() && ratio.abs() <= 1.0) {
                    return Err(Error::config("omega_b.ratio", format!("|ratio| must be <= 1, got {ratio}")));
                }
                let sign = match r.sign.as_deref().unwrap_or("co") {
                    "co" => RatioSign::Co,
                    "counter" => RatioSign::Counter,
                    "both" => RatioSign::Both,
                    other => {
                        return Err(Error::config(
                            "omega_b.sign",
                            format!("expected co, counter or both, got `{other}`"),
                        ))
                    }
                };
                OmegaBRule::Ratio { ratio, sign }
            }
            "grid" => {
                unused("value_rad_s", r.value_rad_s.is_some())?;
                unused("ratio", r.ratio.is_some())?;
                unused("sign", r.sign.is_some())?;
                let v = r
                    .values_rad_s
                    .ok_or_else(|| Error::config("omega_b.values_rad_s", "required by rule `grid`"))?;
                finite_list("omega_b.values_rad_s", &v)?;
                OmegaBRule::Grid(v)
            }
            other => {
                return Err(Error::config(
                    "omega_b.rule",
                    format!("expected fixed, ratio or grid, got `{other}`"),
                ))
            }
        };

        let out = self.output.unwrap_or_default();
        let format = out.format.as_deref().unwrap_or("csv").parse()?;

        let spec = SweepSpec {
            arrangement,
            material_a,
            material_b,
            radius_a,
            radius_b,
            separation,
            temperature,
            tolerances,
            omega_a,
            omega_b,
            output_path: out.path,
            format,
        };
        spec.context().map_err(|e| Error::config("geometry", e.to_string()))?;
        Ok(spec)
    }

    fn from_spec(spec: &SweepSpec) -> Self {
        let mat = |m: &MaterialModel| RawMaterial {
            f0: Some(m.f0),
            omega_tilde0_rad_s: Some(m.omega_tilde0),
            gamma0_rad_s: Some(m.gamma0),
        };
        let general = spec.arrangement.kind == ArrangementKind::General;
        let vec3 = |v: &Vector3<f64>| general.then(|| [v.x, v.y, v.z]);
        let omega_a = match &spec.omega_a {
            Grid::Linear { from, to, points } => RawGrid {
                from_over_omega0: Some(*from),
                to_over_omega0: Some(*to),
                points: Some(*points),
                values_rad_s: None,
            },
            Grid::Values(v) => RawGrid {
                values_rad_s: Some(v.clone()),
                ..Default::default()
            },
        };
        let omega_b = match &spec.omega_b {
            OmegaBRule::Fixed(v) => RawRule {
                rule: Some("fixed".into()),
                value_rad_s: Some(*v),
                ..Default::default()
            },
            OmegaBRule::Ratio { ratio, sign } => RawRule {
                rule: Some("ratio".into()),
                ratio: Some(*ratio),
                sign: Some(sign.name().into()),
                ..Default::default()
            },
            OmegaBRule::Grid(v) => RawRule {
                rule: Some("grid".into()),
                values_rad_s: Some(v.clone()),
                ..Default::default()
            },
        };
        RawConfig {
            arrangement: Some(spec.arrangement.kind.name().into()),
            temperature: Some(spec.temperature),
            radius_a_m: Some(spec.radius_a),
            radius_b_m: Some(spec.radius_b),
            separation_m: Some(spec.separation),
            rel_tol: Some(spec.tolerances.rel_tol),
            abs_tol: Some(spec.tolerances.abs_tol),
            axis_a: vec3(&spec.arrangement.axis_a),
            axis_b: vec3(&spec.arrangement.axis_b),
            direction: vec3(&spec.arrangement.direction),
            material: Some(mat(&spec.material_a)),
            material_b: Some(mat(&spec.material_b)),
            omega_a: Some(omega_a),
            omega_b: Some(omega_b),
            output: Some(RawOutput {
                path: spec.output_path.clone(),
                format: Some(spec.format.to_string()),
            }),
        }
    }
}

/// Parse and validate configuration text.
pub fn parse_config_str(text: &str) -> Result<SweepSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let key = e
            .span()
            .and_then(|s| text.get(s))
            .map(|s| s.trim().to_string())
            .unwrap_or_else(|| "<document>".into());
        Error::config(key, message)
    })?;
    raw.into_spec()
}

/// Read, parse and validate a configuration file.
pub fn parse_config(path: &Path) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

/// Configuration text of a named preset.
pub fn preset_source(name: &str) -> Result<&'static str> {
    Ok(match name {
        "fig1_300K" => FIG1_300K,
        "fig1_1500K" => FIG1_1500K,
        "fig2a" => FIG2A,
        "fig2b" => FIG2B,
        "fig2c" => FIG2C,
        "baseline_static" => BASELINE_STATIC,
        other => {
            return Err(Error::config(
                "preset",
                format!("unknown preset `{other}` (available: {})", PRESETS.join(", ")),
            ))
        }
    })
}

pub fn preset(name: &str) -> Result<SweepSpec> {
    parse_config_str(preset_source(name)?)
}

const FIG1_300K: &str = r#"
arrangement = "rr"
temperature_K = 300.0
omega_a.from_over_omega0 = 0.0
omega_a.to_over_omega0 = 4.0
omega_a.points = 200
omega_b.rule = "fixed"
omega_b.value_rad_s = 0.0
"#;

const FIG1_1500K: &str = r#"
arrangement = "rr"
temperature_K = 1500.0
omega_a.from_over_omega0 = 0.0
omega_a.to_over_omega0 = 4.0
omega_a.points = 200
omega_b.rule = "fixed"
omega_b.value_rad_s = 0.0
"#;

const FIG2A: &str = r#"
arrangement = "uu"
temperature_K = 1500.0
omega_a.from_over_omega0 = 0.0
omega_a.to_over_omega0 = 5.0
omega_a.points = 200
omega_b.rule = "ratio"
omega_b.ratio = 0.5
omega_b.sign = "both"
"#;

const FIG2B: &str = r#"
arrangement = "uu"
temperature_K = 1500.0
omega_a.from_over_omega0 = 0.0
omega_a.to_over_omega0 = 5.0
omega_a.points = 200
omega_b.rule = "ratio"
omega_b.ratio = 0.9
omega_b.sign = "both"
"#;

const FIG2C: &str = r#"
arrangement = "uu"
temperature_K = 1500.0
omega_a.from_over_omega0 = 0.0
omega_a.to_over_omega0 = 5.0
omega_a.points = 200
omega_b.rule = "ratio"
omega_b.ratio = 1.0
omega_b.sign = "both"
"#;

const BASELINE_STATIC: &str = r#"
arrangement = "rr"
temperature_K = 300.0
omega_a.values_rad_s = [0.0]
omega_b.rule = "fixed"
omega_b.value_rad_s = 0.0
"#;
