//! Globally adaptive Gauss–Kronrod quadrature for complex spectral integrands
//! on the real line.
//!
//! The finite window `[−W, W]` is split at the supplied breakpoints; the two
//! tails `|ω| > W` are integrated exactly through the map `ω = ±W/t`,
//! `t ∈ (0, 1]`. The panel with the largest error estimate is bisected until
//! the summed error drops below `max(abs_tol, rel_tol·|I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_675_215,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

/// Tolerances and panel layout for one spectral integral.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Points where the integrand is sharply peaked or not smooth.
    pub breakpoints: Vec<f64>,
    /// Half-width `W` of the finite window; tails beyond it are mapped.
    pub window: f64,
    /// Maximum number of bisections of any initial panel.
    pub max_depth: u32,
    /// Hard cap on the number of live panels.
    pub max_panels: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_MAX_DEPTH: u32 = 30;
    pub const DEFAULT_MAX_PANELS: usize = 100_000;

    pub fn new(rel_tol: f64, abs_tol: f64, window: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            breakpoints: Vec::new(),
            window,
            max_depth: Self::DEFAULT_MAX_DEPTH,
            max_panels: Self::DEFAULT_MAX_PANELS,
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(breakpoints);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid("rel_tol", format!("must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", format!("must be >= 0, got {}", self.abs_tol)));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(Error::invalid("window", format!("must be > 0, got {}", self.window)));
        }
        if let Some(b) = self
            .breakpoints
            .iter()
            .find(|b| !b.is_finite() || b.abs() >= self.window)
        {
            return Err(Error::invalid(
                "breakpoints",
                format!("breakpoint {b} outside the window ±{}", self.window),
            ));
        }
        Ok(())
    }

    /// Sorted, de-duplicated breakpoints inside `(lo, hi)` plus the end points.
    fn edges(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&b| b > lo && b < hi)
            .collect();
        pts.push(lo);
        pts.push(hi);
        pts.sort_by(f64::total_cmp);
        let min_gap = 1e-14 * self.window;
        let mut out: Vec<f64> = Vec::with_capacity(pts.len());
        for p in pts {
            match out.last() {
                Some(&last) if p - last <= min_gap => {
                    if p == hi {
                        *out.last_mut().unwrap() = hi;
                    }
                }
                _ => out.push(p),
            }
        }
        out
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    /// Summed error estimate of all panels.
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `ω = W/t`
    Upper(f64),
    /// `ω = −W/t`
    Lower(f64),
}

impl Map {
    #[inline]
    fn eval<F: Fn(f64) -> Complex64>(&self, f: &F, t: f64) -> Complex64 {
        match *self {
            Map::Identity => f(t),
            Map::Upper(w) => f(w / t) * (w / (t * t)),
            Map::Lower(w) => f(-w / t) * (w / (t * t)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    map: Map,
    value: Complex64,
    error: f64,
    depth: u32,
}

struct Worst {
    error: f64,
    index: usize,
}

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Worst {}
impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        e = res_asc * (200.0 * e / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// One 21-point Gauss–Kronrod panel: `(value, error estimate)`.
fn gk21<F: Fn(f64) -> Complex64>(f: &F, map: Map, lo: f64, hi: f64) -> (Complex64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];

    let fc = map.eval(f, center);
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut res_k = fc * WGK[10];
    let mut abs_re = WGK[10] * fc.re.abs();
    let mut abs_im = WGK[10] * fc.im.abs();

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = map.eval(f, center - dx);
        let f2 = map.eval(f, center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        if j % 2 == 1 {
            res_g += sum * WG[j / 2];
        }
        res_k += sum * WGK[j];
        abs_re += WGK[j] * (f1.re.abs() + f2.re.abs());
        abs_im += WGK[j] * (f1.im.abs() + f2.im.abs());
    }

    let mean = res_k * 0.5;
    let mut asc_re = WGK[10] * (fc.re - mean.re).abs();
    let mut asc_im = WGK[10] * (fc.im - mean.im).abs();
    for j in 0..10 {
        asc_re += WGK[j] * ((fv1[j].re - mean.re).abs() + (fv2[j].re - mean.re).abs());
        asc_im += WGK[j] * ((fv1[j].im - mean.im).abs() + (fv2[j].im - mean.im).abs());
    }

    let h = half.abs();
    let diff = (res_k - res_g) * half;
    let err = rescale_error(diff.re, abs_re * h, asc_re * h) + rescale_error(diff.im, abs_im * h, asc_im * h);
    (res_k * half, err)
}

fn adaptive<F: Fn(f64) -> Complex64>(f: &F, spec: &QuadratureSpec, seeds: Vec<(f64, f64, Map)>) -> Result<Integral> {
    let mut panels: Vec<Panel> = Vec::with_capacity(seeds.len() * 4);
    let mut heap = BinaryHeap::with_capacity(seeds.len() * 4);
    let mut evaluations = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;

    for (lo, hi, map) in seeds {
        let (value, error) = gk21(f, map, lo, hi);
        evaluations += 21;
        total += value;
        total_err += error;
        heap.push(Worst { error, index: panels.len() });
        panels.push(Panel { lo, hi, map, value, error, depth: 0 });
    }

    // panels too narrow to bisect keep their error but leave the heap
    let mut frozen_err = 0.0;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        let Some(Worst { index, .. }) = heap.pop() else {
            return Err(Error::NonConvergence {
                estimate: total.re,
                error: total_err,
                reason: "roundoff limit reached",
            });
        };
        let p = panels[index];
        if p.depth >= spec.max_depth {
            return Err(Error::NonConvergence {
                estimate: total.re,
                error: total_err,
                reason: "maximum bisection depth reached",
            });
        }
        if panels.len() >= spec.max_panels {
            return Err(Error::NonConvergence {
                estimate: total.re,
                error: total_err,
                reason: "panel budget exhausted",
            });
        }
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) || (p.hi - p.lo) <= 4.0 * f64::EPSILON * mid.abs() {
            frozen_err += p.error;
            if heap.is_empty() && total_err - frozen_err <= 0.0 {
                return Err(Error::NonConvergence {
                    estimate: total.re,
                    error: total_err,
                    reason: "roundoff limit reached",
                });
            }
            continue;
        }
        let (v1, e1) = gk21(f, p.map, p.lo, mid);
        let (v2, e2) = gk21(f, p.map, mid, p.hi);
        evaluations += 42;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;

        panels[index] = Panel { hi: mid, value: v1, error: e1, depth: p.depth + 1, ..p };
        heap.push(Worst { error: e1, index });
        heap.push(Worst { error: e2, index: panels.len() });
        panels.push(Panel { lo: mid, value: v2, error: e2, depth: p.depth + 1, ..p });

        if heap.len() % 256 == 0 {
            // resynchronise the running sums
            total = panels.iter().map(|p| p.value).sum();
            total_err = panels.iter().map(|p| p.error).sum();
        }
    }

    // ordered accumulation, independent of refinement history
    panels.sort_by(|a, b| map_rank(a.map).cmp(&map_rank(b.map)).then(a.lo.total_cmp(&b.lo)));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Integral { value, error, evaluations })
}

fn map_rank(m: Map) -> u8 {
    match m {
        Map::Lower(_) => 0,
        Map::Identity => 1,
        Map::Upper(_) => 2,
    }
}

/// `∫_{−∞}^{∞} f(ω) dω`.
pub fn integrate_spectrum<F: Fn(f64) -> Complex64>(f: F, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    let w = spec.window;
    let edges = spec.edges(-w, w);
    let mut seeds: Vec<(f64, f64, Map)> = edges.windows(2).map(|e| (e[0], e[1], Map::Identity)).collect();
    seeds.push((0.0, 1.0, Map::Lower(w)));
    seeds.push((0.0, 1.0, Map::Upper(w)));
    adaptive(&f, spec, seeds)
}

/// `∫_0^∞ f(ω) dω`. Breakpoints at or below zero are ignored.
pub fn integrate_half_line<F: Fn(f64) -> Complex64>(f: F, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    let w = spec.window;
    let edges = spec.edges(0.0, w);
    let mut seeds: Vec<(f64, f64, Map)> = edges.windows(2).map(|e| (e[0], e[1], Map::Identity)).collect();
    seeds.push((0.0, 1.0, Map::Upper(w)));
    adaptive(&f, spec, seeds)
}

/// `∫_a^b f(x) dx` over a finite interval.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid("interval", format!("need finite a < b, got [{a}, {b}]")));
    }
    let mut s = spec.clone();
    s.window = a.abs().max(b.abs()) * 2.0 + 1.0;
    s.validate()?;
    let edges = s.edges(a, b);
    let seeds = edges.windows(2).map(|e| (e[0], e[1], Map::Identity)).collect();
    adaptive(&f, &s, seeds)
}

/// Breakpoints graded geometrically around each centre: `c ± width·2^k` for
/// `k = −3, −2, …` while the offset stays below `span`.
pub fn graded_breakpoints(centers: &[f64], width: f64, span: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for &c in centers {
        pts.push(c);
        if !(width > 0.0) {
            continue;
        }
        let mut d = width / 8.0;
        while d <= span {
            pts.push(c - d);
            pts.push(c + d);
            d *= 2.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
