//! Adaptive quadrature for representatives and pairings.
//!
//! Globally adaptive Gauss-Kronrod 7/15: the interval with the largest local
//! error estimate is bisected until the summed estimate meets the tolerance.
//! Ties in the worklist are broken by position, so results do not depend on
//! anything but the integrand and the options.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::embedding::TestFunction;
use crate::error::{Error, Result};
use crate::gf::{Epsilon, GenFunction, GenNumber, Support};

/// Default tolerance for exact identities.
pub const IDENTITY_TOL: f64 = 1e-11;
/// Default tolerance for ε sweeps.
pub const SWEEP_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: usize = 1_000_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of intervals in the final partition.
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of intervals in the partition.
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: IDENTITY_TOL, rel_tol: 1e-13, max_subdivisions: DEFAULT_BUDGET }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { abs_tol: tol, ..Self::default() }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Error contributed by rounding alone; bisection cannot go below it.
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { x })
        }
    };
    let fc = eval(center)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Ok(Segment { a, b, value, error, floor })
}

/// `∫_a^b f` with default options and absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_with(f, a, b, &QuadOptions::with_tol(tol))
}

pub fn integrate_with(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    integrate_with_breaks(f, &[a, b], opts)
}

/// Integrates over `[points[0], points[last]]`, starting from the partition
/// given by `points` (which must be strictly increasing).
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two integration limits".into()));
    }
    if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "integration limits must be finite and strictly increasing: {points:?}"
        )));
    }
    if !(opts.abs_tol >= 0.0 && opts.rel_tol >= 0.0 && opts.abs_tol + opts.rel_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }

    let mut heap = BinaryHeap::new();
    let (mut value, mut error) = (0.0, 0.0);
    for w in points.windows(2) {
        let seg = kronrod15(&f, w[0], w[1])?;
        value += seg.value;
        error += seg.error;
        heap.push(seg);
    }
    loop {
        if error <= opts.target(value) {
            break;
        }
        if heap.len() >= opts.max_subdivisions {
            return Err(Error::BudgetExhausted { budget: opts.max_subdivisions, value, error });
        }
        let worst = heap.pop().expect("partition is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let at_floor = worst.error <= worst.floor * (1.0 + 1e-9);
        let too_narrow = (worst.b - worst.a) < 1e-14 * worst.a.abs().max(worst.b.abs());
        if at_floor || too_narrow || !(worst.a < mid && mid < worst.b) {
            return Err(Error::RoundoffLimited { a: worst.a, b: worst.b, value, error });
        }
        let left = kronrod15(&f, worst.a, mid)?;
        let right = kronrod15(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // keep the running sums honest against cancellation drift
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(QuadratureResult {
        value: segs.iter().map(|s| s.value).sum(),
        error_estimate: segs.iter().map(|s| s.error).sum(),
        subdivisions: segs.len(),
    })
}

/// `∫_a^b u_ε(x) dx`, where `a`/`b` may be infinite. Constant tails outside
/// the support of `u_ε` are integrated analytically.
pub fn integrate_representative(
    u: &GenFunction,
    eps: Epsilon,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    let f = |x: f64| u.evaluate(eps, x).unwrap_or(f64::NAN);
    let (lo, hi, left, right) = match u.support(eps) {
        Support::Constant(c) => (0.0, 0.0, c, c),
        Support::Bounded { lo, hi, left, right } => (lo, hi, left, right),
        Support::Unbounded => {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::UnboundedIntegral(format!(
                    "{u} has no bounded support hint"
                )));
            }
            return integrate_with(f, a, b, opts).map_err(|e| attach_eval_error(e, u, eps));
        }
    };

    let mut total = QuadratureResult { value: 0.0, error_estimate: 0.0, subdivisions: 0 };
    let mut tail = |from: f64, to: f64, c: f64, side: &str| -> Result<()> {
        if from < to && c != 0.0 {
            if !(from.is_finite() && to.is_finite()) {
                return Err(Error::UnboundedIntegral(format!(
                    "{u} tends to {c} on the {side}"
                )));
            }
            total.value += c * (to - from);
        }
        Ok(())
    };
    tail(a, b.min(lo), left, "left")?;
    tail(a.max(hi), b, right, "right")?;

    let (ma, mb) = (a.max(lo), b.min(hi));
    if ma < mb {
        let inner = integrate_with(f, ma, mb, opts).map_err(|e| attach_eval_error(e, u, eps))?;
        total.value += inner.value;
        total.error_estimate += inner.error_estimate;
        total.subdivisions += inner.subdivisions;
    }
    Ok(total)
}

/// ⟨u_ε, ψ⟩ = ∫ u_ε ψ over the support of ψ, split at the edges of the
/// active region of `u_ε` so cost stays flat as ε shrinks.
pub fn pair(u: &GenFunction, psi: &TestFunction, eps: Epsilon, tol: f64) -> Result<QuadratureResult> {
    pair_with(u, psi, eps, &QuadOptions::with_tol(tol))
}

pub fn pair_with(
    u: &GenFunction,
    psi: &TestFunction,
    eps: Epsilon,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    let (a, b) = psi.support();
    let f = |x: f64| u.evaluate(eps, x).map(|v| v * psi.eval(x)).unwrap_or(f64::NAN);
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    match u.support(eps) {
        Support::Constant(c) if c == 0.0 => {}
        Support::Bounded { lo, hi, left, right } => {
            let mut cuts = vec![a];
            cuts.extend([lo, hi].into_iter().filter(|p| *p > a && *p < b));
            cuts.push(b);
            cuts.dedup();
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let constant_zero = (mid < lo && left == 0.0) || (mid > hi && right == 0.0);
                if !constant_zero {
                    pieces.push((w[0], w[1]));
                }
            }
        }
        _ => pieces.push((a, b)),
    }
    let mut total = QuadratureResult { value: 0.0, error_estimate: 0.0, subdivisions: 0 };
    // Adjacent pieces are integrated together so the tolerance applies once.
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for (p, q) in pieces {
        match groups.last_mut() {
            Some(g) if *g.last().unwrap() == p => g.push(q),
            _ => groups.push(vec![p, q]),
        }
    }
    for g in groups {
        let r = integrate_with_breaks(f, &g, opts).map_err(|e| attach_eval_error(e, u, eps))?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.subdivisions += r.subdivisions;
    }
    Ok(total)
}

/// The generalized number `ε ↦ ∫_a^b u_ε`. Failures surface when sampled.
pub fn integrate_gf(u: &GenFunction, a: f64, b: f64, tol: f64) -> GenNumber {
    let u = u.clone();
    let description = format!("int[{a}, {b}] {u}");
    let opts = QuadOptions::with_tol(tol);
    GenNumber::new(description, move |eps| {
        integrate_representative(&u, eps, a, b, &opts).map(|r| r.value)
    })
}

/// The generalized number `ε ↦ ⟨u_ε, ψ⟩`.
pub fn pair_gf(u: &GenFunction, psi: &TestFunction, tol: f64) -> GenNumber {
    let (u, psi) = (u.clone(), psi.clone());
    let description = format!("<{u}, psi{}>", psi.id);
    GenNumber::new(description, move |eps| pair(&u, &psi, eps, tol).map(|r| r.value))
}

// A NaN integrand means evaluation failed; re-evaluate to report why.
fn attach_eval_error(e: Error, u: &GenFunction, eps: Epsilon) -> Error {
    match e {
        Error::NonFiniteIntegrand { x } => match u.evaluate(eps, x) {
            Err(inner) => inner,
            Ok(_) => Error::NonFiniteIntegrand { x },
        },
        other => other,
    }
}
