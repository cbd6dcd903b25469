//! Quick invariant suite behind `spinvdw check`.

use crate::baseline::static_force_estimate;
use crate::cli::config::SweepSpec;
use crate::configurations::{Arrangement, ArrangementKind, InteractionModel};
use crate::error::Result;
use crate::oracle::{ratio_aux, LorentzPair};
use crate::rotation::{noneq_fdt_hadamard, spin_transform, ResponseKind};
use crate::spectral::SpectralSolver;
use crate::units::{thermal_frequency, FEMTONEWTON};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, bound: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= bound,
        detail: format!("worst {worst:.3e} (bound {bound:.0e})"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Run every check against the pair described by `spec`.
pub fn run_checks(spec: &SweepSpec) -> Result<Vec<CheckOutcome>> {
    let ctx = spec.context()?;
    let model = InteractionModel::new(ctx, spec.tolerances)?;
    let w0 = model.omega0();
    let mut out = Vec::new();

    let e0 = model.energy_at_rest()?;
    let mut worst = 0.0_f64;
    for k in ArrangementKind::CANONICAL {
        let a = Arrangement::canonical(k)?;
        worst = worst.max(rel(model.energy(&a, 0.0, 0.0)?, e0));
    }
    out.push(outcome("zero-rotation identity", worst, 1e-10));

    let base = model.energy_rr(1.1 * w0, 0.2 * w0)?;
    let mut worst = 0.0_f64;
    for d in [0.3, 1.7] {
        worst = worst.max(rel(model.energy_rr((1.1 + d) * w0, (0.2 + d) * w0)?, base));
    }
    out.push(outcome("rr shift invariance", worst, 1e-9));

    let mut worst = 0.0_f64;
    for k in ArrangementKind::CANONICAL {
        let a = Arrangement::canonical(k)?;
        let p = model.energy(&a, 0.7 * w0, -1.9 * w0)?;
        worst = worst.max(rel(model.energy(&a, -0.7 * w0, 1.9 * w0)?, p));
    }
    out.push(outcome("parity", worst, 1e-9));

    let mut worst = 0.0_f64;
    for k in ArrangementKind::CANONICAL {
        let a = Arrangement::canonical(k)?;
        let closed = model.energy(&a, 1.3 * w0, -0.4 * w0)?;
        worst = worst.max(rel(model.energy(&a.as_general(), 1.3 * w0, -0.4 * w0)?, closed));
    }
    out.push(outcome("general contraction", worst, 1e-6));

    let osc = ctx.sphere_a.oscillator();
    let mut worst = 0.0_f64;
    for t in [0.0, 300.0, 1500.0] {
        let theta = thermal_frequency(t);
        for spin in [0.0, 0.5, 1.0, 2.5] {
            for k in 0..=20 {
                let w = (-5.0 + 0.5 * k as f64 + 0.0137) * w0;
                let s = spin * w0;
                let direct = spin_transform(
                    |x| Ok(osc.hadamard(x, theta).into()),
                    s,
                    w,
                    ResponseKind::Hadamard,
                )?;
                let fdt = noneq_fdt_hadamard(
                    |x| spin_transform(|y| osc.try_alpha(y), s, x, ResponseKind::Polarizability),
                    s,
                    w,
                    theta,
                )?;
                worst = worst.max(direct.relative_difference(&fdt));
            }
        }
    }
    out.push(outcome("nonequilibrium FDT consistency", worst, 1e-12));

    let mut weak = ctx;
    weak.sphere_a.material = weak.sphere_a.material.with_damping_scaled(1e-3);
    weak.sphere_b.material = weak.sphere_b.material.with_damping_scaled(1e-3);
    weak.sphere_a.temperature = 0.0;
    weak.sphere_b.temperature = 0.0;
    let solver = SpectralSolver::new(weak, spec.tolerances)?;
    let lorentz = LorentzPair::from_context(&weak);
    let aux0 = solver.aux_energy_reduced(0.0)?.value;
    let mut worst = 0.0_f64;
    for o in [0.5, 1.5, 3.0] {
        let ratio = solver.aux_energy_reduced(o)?.value / aux0;
        worst = worst.max(rel(ratio, ratio_aux(&lorentz, o * w0)?));
    }
    out.push(outcome("weak-damping oracle", worst, 1e-2));

    let f = static_force_estimate(5e-20, 60e-9, 180e-9)?;
    out.push(outcome("static force estimate", (f.abs() / FEMTONEWTON - 4.06).abs(), 0.1));

    Ok(out)
}
