//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! status 1 if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{bst_pair, pair, rel};
use spinvdw::baseline::{naive_fdt_energy_rr, static_force_estimate};
use spinvdw::cli::config::preset;
use spinvdw::cli::sweep::{run_sweep, SweepResult};
use spinvdw::oracle::{ratio_aux, ratio_rr, ratio_uu, LorentzPair};
use spinvdw::rotation::{noneq_fdt_hadamard, spin_transform, ResponseKind};
use spinvdw::units::{thermal_frequency, FEMTONEWTON};
use spinvdw::{Arrangement, ArrangementKind, InteractionModel, MaterialModel, SpectralSolver, Tolerances};

type Outcome = Result<(bool, String), spinvdw::Error>;

struct Report {
    failed: usize,
}

impl Report {
    fn record(&mut self, n: u32, name: &str, outcome: Outcome) {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            self.failed += 1;
        }
        println!("{} criterion {n} ({name}): {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn bst_model(temperature: f64) -> InteractionModel {
    InteractionModel::new(bst_pair(temperature), Tolerances::default()).unwrap()
}

fn gamma0() -> f64 {
    MaterialModel::bst().gamma0
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> spinvdw::Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> spinvdw::Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}

/// Root of `f` in `[lo, hi]` by bisection; `f(lo)` and `f(hi)` differ in sign.
fn bisect(f: impl Fn(f64) -> spinvdw::Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> spinvdw::Result<f64> {
    let lo_sign = f(lo)? < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? < 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Local maxima of `y` rising above `threshold · max(y)`.
fn peaks(y: &[f64], threshold: f64) -> Vec<usize> {
    let top = y.iter().cloned().fold(f64::MIN, f64::max);
    (1..y.len() - 1)
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > threshold * top)
        .collect()
}

/// `(Ω_A, ΔF)` rows of one rotation sense of a sweep.
fn curve(result: &SweepResult, co: bool) -> (Vec<f64>, Vec<f64>) {
    result
        .rows
        .iter()
        .filter(|r| r.omega_a > 0.0 && (r.omega_b * r.omega_a >= 0.0) == co)
        .map(|r| (r.omega_a, r.delta_force_fn))
        .unzip()
}

/// Resonance feature of a ΔF curve inside `[lo, hi]`: center (midpoint of
/// the refined maximum and minimum) and peak-to-peak height.
fn feature(df: &dyn Fn(f64) -> spinvdw::Result<f64>, lo: f64, hi: f64, step: f64) -> spinvdw::Result<(f64, f64, f64)> {
    let n = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| df(x)).collect::<spinvdw::Result<_>>()?;
    let imax = (0..ys.len()).max_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap();
    let imin = (0..ys.len()).min_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap();
    let around = |i: usize| (xs[i.saturating_sub(1)], xs[(i + 1).min(n)]);
    let (a, b) = around(imax);
    let (xmax, ymax) = golden_max(df, a, b, 1e-5 * step)?;
    let (a, b) = around(imin);
    let (xmin, ymin) = golden_max(|x| df(x).map(|v| -v), a, b, 1e-5 * step)?;
    Ok((0.5 * (xmax + xmin), ymax + ymin, xmax))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ctx = pair(MaterialModel::bst().with_damping_scaled(1e-3), 0.0);
    let solver = SpectralSolver::new(ctx, Tolerances::default())?;
    let lorentz = LorentzPair::from_context(&ctx);
    let w0 = ctx.omega0();
    let e0 = solver.aux_energy_reduced(0.0)?.value;
    let mut worst = 0.0_f64;
    for o in [0.0, 0.5, 1.5, 3.0] {
        let ratio = solver.aux_energy_reduced(o)?.value / e0;
        worst = worst.max(rel(ratio, ratio_aux(&lorentz, o * w0)?));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst < 1e-2 && secs < 5.0,
        format!("max rel deviation {worst:.3e} (tol 1e-2), runtime {secs:.2} s (limit 5 s)"),
    ))
}

fn criterion_2() -> Outcome {
    let model = bst_model(300.0);
    let reference = 12.0 * model.aux(0.0)?;
    let mut worst = 0.0_f64;
    for k in ArrangementKind::CANONICAL {
        let a = Arrangement::canonical(k)?;
        worst = worst.max(rel(model.energy(&a, 0.0, 0.0)?, reference));
        worst = worst.max(rel(model.energy(&a.as_general(), 0.0, 0.0)?, reference));
    }
    Ok((worst < 1e-10, format!("max rel deviation from 12·E(0) {worst:.3e} (tol 1e-10)")))
}

fn criterion_3() -> Outcome {
    let model = bst_model(300.0);
    let w0 = model.omega0();
    let mut worst = 0.0_f64;
    for (a, b) in [(1.5, 0.0), (0.4, 2.9)] {
        let base = model.energy_rr(a * w0, b * w0)?;
        for d in [0.3, 1.7] {
            worst = worst.max(rel(model.energy_rr((a + d) * w0, (b + d) * w0)?, base));
        }
    }
    Ok((worst < 1e-9, format!("max rel deviation {worst:.3e} (tol 1e-9)")))
}

fn criterion_4() -> Outcome {
    let model = bst_model(300.0);
    let w0 = model.omega0();
    let mut worst = 0.0_f64;
    for k in ArrangementKind::CANONICAL {
        let a = Arrangement::canonical(k)?;
        for (x, y) in [(0.7, -1.9), (2.3, 0.4)] {
            let e = model.energy(&a, x * w0, y * w0)?;
            worst = worst.max(rel(model.energy(&a, -x * w0, -y * w0)?, e));
        }
    }
    Ok((worst < 1e-9, format!("max rel deviation {worst:.3e} (tol 1e-9)")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let model = bst_model(300.0);
    let w0 = model.omega0();
    let grid = [-3.0, -1.5, 0.0, 1.5, 3.0];
    let mut worst = 0.0_f64;
    for k in ArrangementKind::CANONICAL {
        let a = Arrangement::canonical(k)?;
        let g = a.as_general();
        for x in grid {
            for y in grid {
                let closed = model.energy(&a, x * w0, y * w0)?;
                worst = worst.max(rel(model.energy(&g, x * w0, y * w0)?, closed));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst < 1e-6 && secs < 120.0,
        format!("max rel deviation {worst:.3e} (tol 1e-6) over 4×25 points, runtime {secs:.1} s (limit 120 s)"),
    ))
}

fn criterion_6() -> Outcome {
    let w0 = MaterialModel::bst().resonance_frequency();
    let rr = ratio_rr(w0, 50.0 * w0)?;
    let uu = ratio_uu(w0, 50.0 * w0, 0.0)?;
    let (drr, duu) = ((rr - 2.0 / 3.0).abs(), (uu - 1.0 / 6.0).abs());
    Ok((
        drr <= 1e-3 && duu <= 1e-3,
        format!("E_rr/E0 = {rr:.6} (|Δ| {drr:.2e}), E_uu/E0 = {uu:.6} (|Δ| {duu:.2e}), tol 1e-3"),
    ))
}

fn criterion_7() -> Outcome {
    let g0 = gamma0();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, t) in [("fig1_300K", 300.0), ("fig1_1500K", 1500.0)] {
        let spec = preset(name)?;
        let w0 = spec.omega0();
        let result = run_sweep(&spec)?;
        let (x, y) = curve(&result, true);
        let model = InteractionModel::new(spec.context()?, spec.tolerances)?;
        let df = |w: f64| Ok(model.delta_force(&spec.arrangement, w, 0.0)? / FEMTONEWTON);

        let found = peaks(&y, 0.1);
        let top = (0..y.len()).max_by(|&i, &j| y[i].total_cmp(&y[j])).unwrap();
        let rise = (0..top).rev().find(|&i| y[i] < 0.0);
        let crossing = match rise {
            Some(i) => bisect(df, x[i], x[i + 1], 1e-6 * g0)?,
            None => f64::NAN,
        };
        let offset = (crossing - 2.0 * w0).abs();

        let far: Vec<f64> = [20.0, 40.0].iter().map(|&o| df(o * w0)).collect::<spinvdw::Result<_>>()?;
        let drift = rel(far[0], far[1]);
        let low = y.iter().zip(&x).filter(|(_, &w)| w < 0.5 * w0).map(|(v, _)| *v).fold(f64::MIN, f64::max);

        let pass = found.len() == 1
            && offset <= 2.0 * g0
            && far[1].abs() > 0.0
            && drift < 0.05
            && (t < 1000.0 || low > 0.0);
        ok &= pass;
        parts.push(format!(
            "{t} K: peaks {} (want 1), crossing {:.4} ω0 (|Δ| {:.2} γ0, tol 2 γ0), ΔF(20ω0) {:.4} fN, ΔF(40ω0) {:.4} fN (rel drift {:.1e}, tol 5e-2), max ΔF below 0.5ω0 {:.4} fN",
            found.len(),
            crossing / w0,
            offset / g0,
            far[0],
            far[1],
            drift,
            low
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn criterion_8() -> Outcome {
    let g0 = gamma0();
    let mut parts = Vec::new();
    let mut ok = true;
    let mut slowest = 0.0_f64;
    let mut max_repulsive = (f64::MIN, 0.0, "");

    for name in ["fig2a", "fig2b", "fig2c"] {
        let spec = preset(name)?;
        let start = Instant::now();
        let result = run_sweep(&spec)?;
        slowest = slowest.max(start.elapsed().as_secs_f64());
        let model = InteractionModel::new(spec.context()?, spec.tolerances)?;
        let w0 = spec.omega0();
        for co in [true, false] {
            let (x, y) = curve(&result, co);
            let ratio = result.rows.iter().find(|r| r.omega_a > 0.0 && (r.omega_b * r.omega_a >= 0.0) == co).map(|r| r.omega_b / r.omega_a).unwrap();
            let df = |w: f64| Ok(model.delta_force(&spec.arrangement, w, ratio * w)? / FEMTONEWTON);
            let top = (0..y.len()).max_by(|&i, &j| y[i].total_cmp(&y[j])).unwrap();
            let (a, b) = (x[top.saturating_sub(1)], x[(top + 1).min(x.len() - 1)]);
            let (at, value) = golden_max(df, a, b, 1e-6 * w0)?;
            if value > max_repulsive.0 {
                max_repulsive = (value, at / w0, name);
            }

            let sense = if co { "co" } else { "counter" };
            if name == "fig2a" {
                let mut heights = Vec::new();
                let mut expect = [2.0 / (1.0 + ratio.abs()), 2.0 / (1.0 - ratio.abs())];
                expect.sort_by(f64::total_cmp);
                for e in expect {
                    let expected = e * w0;
                    let (center, height, _) = feature(&df, expected - 0.3 * w0, expected + 0.3 * w0, 0.01 * w0)?;
                    let off = (center - expected).abs() / g0;
                    ok &= off <= 3.0;
                    heights.push(height);
                    parts.push(format!("ρ=0.5 {sense} peak {:.4} ω0 vs {:.4} ω0 (|Δ| {off:.2} γ0, tol 3 γ0)", center / w0, expected / w0));
                }
                let lower_stronger = heights[0] > heights[1];
                ok &= lower_stronger == co;
                parts.push(format!(
                    "ρ=0.5 {sense} heights {:.3}/{:.3} fN (stronger at {})",
                    heights[0],
                    heights[1],
                    if lower_stronger { "lower" } else { "higher" }
                ));
            }
            if name == "fig2c" {
                let found = peaks(&y, 0.25);
                let (center, _, xmax) = feature(&df, 0.5 * w0, 1.5 * w0, 0.01 * w0)?;
                let off = (xmax - w0).abs() / g0;
                ok &= found.len() == 1 && off <= 2.0;
                parts.push(format!(
                    "ρ=1 {sense}: peaks {} (want 1), maximum at {:.4} ω0 (|Δ| {off:.2} γ0, tol 2 γ0; resonance center {:.4} ω0)",
                    found.len(),
                    xmax / w0,
                    center / w0
                ));
            }
        }
    }

    let (value, at, name) = max_repulsive;
    let in_band = (6.0..=11.0).contains(&value);
    ok &= in_band && slowest < 300.0;
    parts.insert(
        0,
        format!("max repulsive ΔF {value:.3} fN at Ω_A = {at:.4} ω0 ({name}), band [6, 11] fN; slowest 200-point sweep {slowest:.1} s (limit 300 s)"),
    );
    Ok((ok, parts.join("; ")))
}

fn criterion_9() -> Outcome {
    let f = static_force_estimate(5e-20, 60e-9, 180e-9)?.abs() / FEMTONEWTON;
    let d = (f - 4.06).abs();
    Ok((d <= 0.1, format!("|F| = {f:.4} fN (target 4.06 ± 0.1 fN)")))
}

fn criterion_10() -> Outcome {
    let ctx = bst_pair(300.0);
    let osc = ctx.sphere_a.oscillator();
    let w0 = ctx.omega0();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for t in [0.0, 1.0, 300.0, 1500.0, 1e5] {
        let theta = thermal_frequency(t);
        for spin in [-1.3, 0.0, 0.5, 1.0, 2.0, 2.5] {
            let s = spin * w0;
            for k in 0..=40 {
                let w = (-6.0 + 0.3 * k as f64 + 0.0137) * w0;
                for omega in [w, s, -s, 0.0] {
                    let direct = spin_transform(|x| Ok(osc.hadamard(x, theta).into()), s, omega, ResponseKind::Hadamard)?;
                    let fdt = noneq_fdt_hadamard(
                        |x| spin_transform(|y| osc.try_alpha(y), s, x, ResponseKind::Polarizability),
                        s,
                        omega,
                        theta,
                    )?;
                    worst = worst.max(direct.relative_difference(&fdt));
                    count += 1;
                }
            }
        }
    }
    Ok((worst < 1e-12, format!("max rel deviation {worst:.3e} over {count} (ω, Ω, T) points (tol 1e-12)")))
}

fn criterion_11() -> Outcome {
    let ctx = bst_pair(300.0);
    let w0 = ctx.omega0();
    let naive = naive_fdt_energy_rr(&ctx, 1.5 * w0, 0.0)?;
    let naive_shifted = naive_fdt_energy_rr(&ctx, 2.0 * w0, 0.5 * w0)?;
    let model = bst_model(300.0);
    let e = model.energy_rr(1.5 * w0, 0.0)?;
    let e_shifted = model.energy_rr(2.0 * w0, 0.5 * w0)?;
    let (v, s) = (rel(naive_shifted, naive), rel(e_shifted, e));
    Ok((
        v > 1e-3 && s < 1e-9,
        format!("naive shift violation {v:.3e} (want > 1e-3), nonequilibrium {s:.3e} (tol 1e-9)"),
    ))
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    report.record(1, "oracle equivalence", criterion_1());
    report.record(2, "zero-rotation identity", criterion_2());
    report.record(3, "rr shift invariance", criterion_3());
    report.record(4, "parity", criterion_4());
    report.record(5, "general contraction", criterion_5());
    report.record(6, "needle limits", criterion_6());
    report.record(7, "rr sweeps", criterion_7());
    report.record(8, "uu sweeps", criterion_8());
    report.record(9, "static baseline", criterion_9());
    report.record(10, "nonequilibrium FDT", criterion_10());
    report.record(11, "naive FDT contrast", criterion_11());
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", report.failed);
        ExitCode::FAILURE
    }
}
