use rayon::prelude::*;

use crate::cli::config::SweepSpec;
use crate::configurations::{force_from_energy, InteractionModel};
use crate::error::{Error, Result};
use crate::units::FEMTONEWTON;

/// One grid point of a sweep. Numeric fields are NaN when `error` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub omega_a: f64,
    pub omega_b: f64,
    pub omega_a_over_omega0: f64,
    pub energy: f64,
    pub energy0: f64,
    pub delta_energy: f64,
    pub force: f64,
    /// `F − F(0, 0)` in femtonewtons.
    pub delta_force_fn: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Ordered `(key, value)` pairs describing the run.
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn metadata(spec: &SweepSpec, points: usize) -> Vec<(String, String)> {
    let m = |x: &crate::response::MaterialModel| {
        format!("f0={} omega_tilde0_rad_s={:e} gamma0_rad_s={:e}", x.f0, x.omega_tilde0, x.gamma0)
    };
    let a = &spec.arrangement;
    let mut out = vec![
        ("generator".into(), format!("spinvdw {}", env!("CARGO_PKG_VERSION"))),
        ("arrangement".into(), a.kind.name().into()),
        ("material_a".into(), m(&spec.material_a)),
        ("material_b".into(), m(&spec.material_b)),
        ("radius_a_m".into(), format!("{:e}", spec.radius_a)),
        ("radius_b_m".into(), format!("{:e}", spec.radius_b)),
        ("separation_m".into(), format!("{:e}", spec.separation)),
        ("temperature_K".into(), spec.temperature.to_string()),
        ("omega0_rad_s".into(), format!("{:e}", spec.omega0())),
        ("rel_tol".into(), format!("{:e}", spec.tolerances.rel_tol)),
        ("abs_tol".into(), format!("{:e}", spec.tolerances.abs_tol)),
        ("omega_b".into(), spec.omega_b.to_string()),
        ("points".into(), points.to_string()),
    ];
    if a.kind == crate::configurations::ArrangementKind::General {
        let v = |x: &nalgebra::Vector3<f64>| format!("[{}, {}, {}]", x.x, x.y, x.z);
        out.push(("axis_a".into(), v(&a.axis_a)));
        out.push(("axis_b".into(), v(&a.axis_b)));
        out.push(("direction".into(), v(&a.direction)));
    }
    out
}

/// Evaluate every grid point of `spec`. Point failures are recorded in the
/// row; only a failure of the reference energy `E(0, 0)` aborts the sweep.
///
/// Rows come back in grid order and are identical for any number of worker
/// threads.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let ctx = spec.context()?;
    let model = InteractionModel::new(ctx, spec.tolerances)?;
    let arrangement = spec.arrangement;
    let omega0 = spec.omega0();
    let r = spec.separation;

    let energy0 = model.energy(&arrangement, 0.0, 0.0)?;
    let force0 = force_from_energy(energy0, r);
    let points = spec.points();

    let rows = points
        .par_iter()
        .map(|&(wa, wb)| {
            let base = SweepRow {
                omega_a: wa,
                omega_b: wb,
                omega_a_over_omega0: wa / omega0,
                energy: f64::NAN,
                energy0,
                delta_energy: f64::NAN,
                force: f64::NAN,
                delta_force_fn: f64::NAN,
                error: None,
            };
            match model.energy(&arrangement, wa, wb) {
                Ok(e) => {
                    let f = force_from_energy(e, r);
                    SweepRow {
                        energy: e,
                        delta_energy: e - energy0,
                        force: f,
                        delta_force_fn: (f - force0) / FEMTONEWTON,
                        ..base
                    }
                }
                Err(err) => SweepRow {
                    error: Some(err.to_string()),
                    ..base
                },
            }
        })
        .collect();

    Ok(SweepResult {
        metadata: metadata(spec, points.len()),
        rows,
    })
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))?;
    pool.install(|| run_sweep(spec))
}
