//! Mollifiers and the embedding of distributions as generalized functions.
//!
//! Every embedding is seeded by one normalized kernel profile ρ supported in
//! `[-R, R]`, rescaled per ε:
//!
//! * δ_ε(x) = ρ(x/ε) / ε
//! * H_ε(x) = P(x/ε), where P is the antiderivative of ρ with P(-R) = 0, P(R) = 1
//!
//! P is tabulated once per mollifier as a piecewise Chebyshev interpolant of
//! the antiderivative, accurate to roughly machine precision; evaluation only
//! rescales the argument. Derivatives of H_ε come from the profile jet, so
//! `H_ε' ≡ δ_ε` holds bit for bit.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{GenFunction, SmoothRepresentative};
use crate::jet::Jet;
use crate::quadrature::{self, QuadOptions};

const PANELS: usize = 64;
const PANEL_DEGREE: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MollifierKind {
    /// `exp(-1/(1 - t^2))`, C^∞.
    Bump,
    /// `cos^k(π t / 2)`, C^(k-1) at the support boundary.
    CosinePower { exponent: u32 },
    /// `exp(-(t - center)^2 / (2 σ^2))` cut off at `|t| = 1` and renormalized.
    /// Its value jumps at the cut, so derivatives of δ_ε are discontinuous at `±εR`.
    TruncatedGaussian { sigma: f64, center: f64 },
}

impl MollifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            MollifierKind::Bump => "bump",
            MollifierKind::CosinePower { .. } => "cosine_power",
            MollifierKind::TruncatedGaussian { .. } => "truncated_gaussian",
        }
    }

    fn is_even(&self) -> bool {
        match self {
            MollifierKind::TruncatedGaussian { center, .. } => *center == 0.0,
            _ => true,
        }
    }
}

impl fmt::Display for MollifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MollifierKind::Bump => write!(f, "bump"),
            MollifierKind::CosinePower { exponent } => write!(f, "cosine_power:exponent={exponent}"),
            MollifierKind::TruncatedGaussian { sigma, center } if *center == 0.0 => {
                write!(f, "truncated_gaussian:sigma={sigma}")
            }
            MollifierKind::TruncatedGaussian { sigma, center } => {
                write!(f, "truncated_gaussian:sigma={sigma},center={center}")
            }
        }
    }
}

/// Normalized smooth kernel with support `[-R, R]`.
#[derive(Clone)]
pub struct Mollifier {
    inner: Arc<Inner>,
}

struct Inner {
    kind: MollifierKind,
    radius: f64,
    /// Multiplies the raw profile so that it integrates to one.
    scale: f64,
    first_moment: f64,
    is_symmetric: bool,
    antiderivative: ChebyshevAntiderivative,
}

impl Mollifier {
    pub fn new(kind: MollifierKind, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidMollifier(format!("support radius must be positive, got {radius}")));
        }
        match kind {
            MollifierKind::Bump => {}
            MollifierKind::CosinePower { exponent } => {
                if exponent < 2 {
                    return Err(Error::InvalidMollifier(format!(
                        "cosine_power exponent must be at least 2, got {exponent}"
                    )));
                }
            }
            MollifierKind::TruncatedGaussian { sigma, center } => {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidMollifier(format!("sigma must be positive, got {sigma}")));
                }
                if !(center.abs() < 1.0) {
                    return Err(Error::InvalidMollifier(format!(
                        "center must lie strictly inside (-1, 1) in units of the radius, got {center}"
                    )));
                }
            }
        }

        let raw = |y: f64| raw_profile_jet(kind, radius, y, 0).value();
        // panel nodes include ±R, where the formula (not the cutoff) is wanted
        let formula = |y: f64| profile_formula_jet(kind, radius, y, 0).value();
        let table = ChebyshevAntiderivative::build(&formula, -radius, radius);
        let mass = table.total();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidMollifier(format!("profile is not normalizable (mass {mass})")));
        }
        // independent check of the tabulated mass with adaptive Gauss-Kronrod
        let opts = QuadOptions { abs_tol: 0.0, rel_tol: 5e-14, ..QuadOptions::default() };
        let check = quadrature::integrate_with(raw, -radius, radius, &opts)?;
        if (check.value - mass).abs() > 1e-12 * mass {
            return Err(Error::InvalidMollifier(format!(
                "normalization mismatch: tabulated {mass}, adaptive {}",
                check.value
            )));
        }
        let scale = 1.0 / mass;
        let moment = quadrature::integrate_with(
            |y| y * scale * raw(y),
            -radius,
            radius,
            &QuadOptions { abs_tol: 1e-13, rel_tol: 0.0, ..QuadOptions::default() },
        )?;
        let is_symmetric = kind.is_even();
        Ok(Self {
            inner: Arc::new(Inner {
                kind,
                radius,
                scale,
                first_moment: moment.value,
                is_symmetric,
                antiderivative: table.scaled(scale),
            }),
        })
    }

    pub fn bump() -> Self {
        Self::new(MollifierKind::Bump, 1.0).expect("default bump is valid")
    }

    pub fn kind(&self) -> MollifierKind {
        self.inner.kind
    }

    pub fn support_radius(&self) -> f64 {
        self.inner.radius
    }

    pub fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric
    }

    /// `∫ y ρ(y) dy`.
    pub fn first_moment(&self) -> f64 {
        self.inner.first_moment
    }

    /// ρ(y).
    pub fn profile(&self, y: f64) -> f64 {
        self.profile_jet(y, 0).value()
    }

    /// Taylor jet of ρ at `y`.
    pub fn profile_jet(&self, y: f64, order: usize) -> Jet {
        raw_profile_jet(self.inner.kind, self.inner.radius, y, order).scale(self.inner.scale)
    }

    /// P(y) = ∫_{-R}^{y} ρ.
    pub fn antiderivative(&self, y: f64) -> f64 {
        let r = self.inner.radius;
        if y <= -r {
            0.0
        } else if y >= r {
            1.0
        } else if self.inner.is_symmetric && y > 0.0 {
            1.0 - self.inner.antiderivative.eval(-y)
        } else {
            self.inner.antiderivative.eval(y)
        }
    }

    /// Taylor jet of P at `y`; coefficients beyond the value come from ρ.
    pub fn antiderivative_jet(&self, y: f64, order: usize) -> Jet {
        let mut coeffs = [0.0; crate::jet::MAX_ORDER + 1];
        coeffs[0] = self.antiderivative(y);
        if order > 0 {
            let rho = self.profile_jet(y, order - 1);
            for k in 1..=order {
                coeffs[k] = rho.coeff(k - 1) / k as f64;
            }
        }
        Jet::from_coeffs(&coeffs[..=order])
    }
}

impl fmt::Debug for Mollifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mollifier")
            .field("kind", &self.inner.kind)
            .field("radius", &self.inner.radius)
            .field("is_symmetric", &self.inner.is_symmetric)
            .finish()
    }
}

/// Convenience alias for [`Mollifier::new`].
pub fn make_mollifier(kind: MollifierKind, radius: f64) -> Result<Mollifier> {
    Mollifier::new(kind, radius)
}

fn raw_profile_jet(kind: MollifierKind, radius: f64, y: f64, order: usize) -> Jet {
    if y.abs() >= radius {
        return Jet::constant(0.0, order);
    }
    profile_formula_jet(kind, radius, y, order)
}

fn profile_formula_jet(kind: MollifierKind, radius: f64, y: f64, order: usize) -> Jet {
    let t = Jet::variable(y, order).scale(1.0 / radius);
    match kind {
        MollifierKind::Bump => {
            let q = Jet::constant(1.0, order) - t * t;
            (-q.recip()).exp()
        }
        MollifierKind::CosinePower { exponent } => {
            let (_, c) = t.scale(PI / 2.0).sin_cos();
            c.powi(exponent)
        }
        MollifierKind::TruncatedGaussian { sigma, center } => {
            let d = t - Jet::constant(center, order);
            (d * d).scale(-0.5 / (sigma * sigma)).exp()
        }
    }
}

/// Piecewise Chebyshev interpolant of `y -> ∫_{lo}^{y} f`.
struct ChebyshevAntiderivative {
    lo: f64,
    width: f64,
    panels: Vec<Vec<f64>>,
}

impl ChebyshevAntiderivative {
    fn build(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Self {
        let n = PANEL_DEGREE;
        let width = (hi - lo) / PANELS as f64;
        let nodes: Vec<f64> = (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect();
        let mut panels = Vec::with_capacity(PANELS);
        let mut cumulative = 0.0;
        for p in 0..PANELS {
            let a = lo + p as f64 * width;
            let samples: Vec<f64> = nodes.iter().map(|t| f(a + 0.5 * width * (t + 1.0))).collect();

            // interpolant coefficients on Chebyshev-Lobatto points
            let mut c = vec![0.0; n + 1];
            for (k, ck) in c.iter_mut().enumerate() {
                let mut s = 0.0;
                for (j, fj) in samples.iter().enumerate() {
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    s += w * fj * (PI * (k * j) as f64 / n as f64).cos();
                }
                *ck = 2.0 * s / n as f64;
            }
            c[0] *= 0.5;
            c[n] *= 0.5;

            // integrate term by term, in x units
            let half = 0.5 * width;
            let mut anti = vec![0.0; n + 2];
            let at = |i: usize| if i <= n { c[i] } else { 0.0 };
            anti[1] = half * (2.0 * c[0] - at(2)) / 2.0;
            for k in 2..=n + 1 {
                anti[k] = half * (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
            }
            let at_left: f64 = anti
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
                .sum();
            anti[0] = cumulative - at_left;
            cumulative = clenshaw(&anti, 1.0);
            panels.push(anti);
        }
        Self { lo, width, panels }
    }

    fn total(&self) -> f64 {
        clenshaw(self.panels.last().expect("at least one panel"), 1.0)
    }

    fn scaled(mut self, s: f64) -> Self {
        self.panels.iter_mut().flatten().for_each(|c| *c *= s);
        self
    }

    fn eval(&self, y: f64) -> f64 {
        let pos = (y - self.lo) / self.width;
        let p = (pos.floor().max(0.0) as usize).min(self.panels.len() - 1);
        let t = 2.0 * (pos - p as f64) - 1.0;
        clenshaw(&self.panels[p], t.clamp(-1.0, 1.0))
    }
}

fn clenshaw(c: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}

/// δ_ε(x) = ρ(x/ε)/ε.
pub fn embed_delta(m: &Mollifier) -> GenFunction {
    GenFunction::delta(m.clone())
}

/// H_ε(x) = P(x/ε).
pub fn embed_heaviside(m: &Mollifier) -> GenFunction {
    GenFunction::heaviside(m.clone())
}

/// The ε-independent family equal to `f` at every ε.
pub fn embed_smooth(f: SmoothRepresentative) -> GenFunction {
    GenFunction::smooth(f)
}

/// A compactly supported smooth probe `ψ(x) = poly(x) · b((x - center)/half_width)`
/// with `b(t) = exp(-1/(1 - t^2))` on `|t| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub id: usize,
    pub center: f64,
    pub half_width: f64,
    /// Weight polynomial in `x`, lowest degree first.
    pub poly: Vec<f64>,
    pub value_at_zero: f64,
    pub description: String,
}

impl TestFunction {
    pub fn new(id: usize, center: f64, half_width: f64, poly: Vec<f64>) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite() && center.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "test function needs finite center and positive half width, got {center}, {half_width}"
            )));
        }
        let mut psi = Self {
            id,
            center,
            half_width,
            poly,
            value_at_zero: 0.0,
            description: String::new(),
        };
        psi.value_at_zero = psi.eval(0.0);
        psi.description = format!(
            "psi{id}: poly{:?}(x) * bump((x - {center}) / {half_width})",
            psi.poly
        );
        Ok(psi)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.center) / self.half_width;
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let weight = self.poly.iter().rev().fold(0.0, |acc, &c| acc * x + c);
        weight * (-1.0 / (1.0 - t * t)).exp()
    }
}

/// Deterministic finite stand-in for "all test functions".
///
/// Index 0 is a nonnegative bump centered at the origin (ψ(0) > 0). When
/// `count ≥ 2` the last entry vanishes at the origin (`x` times an off-center
/// bump). The remaining entries are random quadratic weights on random bumps
/// whose support contains the origin, with ψ(0) bounded away from zero.
pub fn standard_test_suite(count: usize, seed: u64) -> Result<Vec<TestFunction>> {
    if count == 0 {
        return Err(Error::InvalidArgument("test suite needs at least one function".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = Vec::with_capacity(count);
    suite.push(TestFunction::new(0, 0.0, rng.random_range(0.6..1.0), vec![1.0])?);
    for id in 1..count.saturating_sub(1) {
        let half_width = rng.random_range(0.6..1.2);
        let center = rng.random_range(-0.4..0.4);
        let magnitude = rng.random_range(0.5..1.5);
        let constant = if rng.random_bool(0.5) { magnitude } else { -magnitude };
        let poly = vec![constant, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        suite.push(TestFunction::new(id, center, half_width, poly)?);
    }
    if count >= 2 {
        let center = rng.random_range(0.2..0.4);
        let half_width = rng.random_range(0.8..1.0);
        suite.push(TestFunction::new(count - 1, center, half_width, vec![0.0, 1.0])?);
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Epsilon;

    fn kinds() -> Vec<MollifierKind> {
        vec![
            MollifierKind::Bump,
            MollifierKind::CosinePower { exponent: 4 },
            MollifierKind::CosinePower { exponent: 2 },
            MollifierKind::TruncatedGaussian { sigma: 0.35, center: 0.0 },
            MollifierKind::TruncatedGaussian { sigma: 0.3, center: 0.2 },
        ]
    }

    fn tight() -> QuadOptions {
        QuadOptions { abs_tol: 2e-14, rel_tol: 5e-14, ..QuadOptions::default() }
    }

    #[test]
    fn normalization_and_support() {
        for kind in kinds() {
            for radius in [1.0, 0.5, 2.0] {
                let m = Mollifier::new(kind, radius).unwrap();
                let mass =
                    quadrature::integrate_with(|y| m.profile(y), -radius, radius, &tight()).unwrap();
                assert!((mass.value - 1.0).abs() < 1e-12, "{kind} R={radius}: {}", mass.value);
                assert_eq!(m.profile(radius), 0.0);
                assert_eq!(m.profile(-radius), 0.0);
                assert_eq!(m.profile(3.0 * radius), 0.0);
                if m.is_symmetric() {
                    assert!(m.first_moment().abs() < 1e-12, "{kind}: {}", m.first_moment());
                } else {
                    assert!(m.first_moment().abs() > 1e-3);
                }
            }
        }
    }

    #[test]
    fn cosine_power_vanishes_at_boundary() {
        let m = Mollifier::new(MollifierKind::CosinePower { exponent: 4 }, 1.0).unwrap();
        assert_eq!(m.profile(1.0), 0.0);
        assert_eq!(m.profile(-1.0), 0.0);
        assert!(m.profile(0.999) > 0.0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Mollifier::new(MollifierKind::Bump, 0.0).is_err());
        assert!(Mollifier::new(MollifierKind::Bump, f64::NAN).is_err());
        assert!(Mollifier::new(MollifierKind::CosinePower { exponent: 1 }, 1.0).is_err());
        assert!(
            Mollifier::new(MollifierKind::TruncatedGaussian { sigma: -1.0, center: 0.0 }, 1.0).is_err()
        );
        assert!(
            Mollifier::new(MollifierKind::TruncatedGaussian { sigma: 0.3, center: 1.0 }, 1.0).is_err()
        );
    }

    #[test]
    fn antiderivative_matches_adaptive_quadrature() {
        for kind in kinds() {
            let m = Mollifier::new(kind, 1.0).unwrap();
            assert_eq!(m.antiderivative(-1.0), 0.0);
            assert_eq!(m.antiderivative(1.0), 1.0);
            for i in 0..=40 {
                let y = -1.0 + 2.0 * i as f64 / 40.0 + 1e-3 * (i as f64).sin();
                let y = y.clamp(-1.0, 1.0);
                let oracle = if y > -1.0 {
                    quadrature::integrate_with(|s| m.profile(s), -1.0, y, &tight()).unwrap().value
                } else {
                    0.0
                };
                let got = m.antiderivative(y);
                assert!((got - oracle).abs() < 1e-12, "{kind} y={y}: {got} vs {oracle}");
            }
        }
    }

    #[test]
    fn heaviside_half_at_origin_when_symmetric() {
        for kind in kinds() {
            let m = Mollifier::new(kind, 1.0).unwrap();
            let h = embed_heaviside(&m);
            let v = h.evaluate(Epsilon::new(0.01).unwrap(), 0.0).unwrap();
            if m.is_symmetric() {
                assert!((v - 0.5).abs() < 1e-14, "{kind}: {v}");
            } else {
                assert!((v - 0.5).abs() > 1e-3);
            }
        }
    }

    #[test]
    fn heaviside_tails() {
        let m = Mollifier::bump();
        let h = embed_heaviside(&m);
        for e in [0.125, 1e-3, 1e-6] {
            let e = Epsilon::new(e).unwrap();
            for k in [1.0, 1.5, 10.0] {
                assert_eq!(h.evaluate(e, -k * e.value()).unwrap(), 0.0);
                assert_eq!(h.evaluate(e, k * e.value()).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn delta_self_similarity() {
        for kind in kinds() {
            let m = Mollifier::new(kind, 1.0).unwrap();
            let d = embed_delta(&m);
            for e in [0.125, 0.01, 2f64.powi(-16)] {
                for y in [-0.9, -0.3, 0.0, 0.25, 0.75] {
                    let v = d.evaluate(Epsilon::new(e).unwrap(), e * y).unwrap() * e;
                    let expected = m.profile(y);
                    // x/ε need not round back to y exactly
                    assert!((v - expected).abs() <= 1e-13 * expected, "{v} {expected}");
                }
            }
        }
    }

    #[test]
    fn max_of_h_minus_h_squared_is_a_quarter() {
        let m = Mollifier::new(MollifierKind::CosinePower { exponent: 4 }, 1.0).unwrap();
        let h = embed_heaviside(&m);
        let u = &h - &(&h * &h);
        for e in [0.1, 1e-4] {
            let eps = Epsilon::new(e).unwrap();
            // coarse scan then golden-section refinement
            let n = 400;
            let xs: Vec<f64> = (0..=n).map(|i| e * (-1.0 + 2.0 * i as f64 / n as f64)).collect();
            let best = xs
                .iter()
                .copied()
                .max_by(|a, b| {
                    u.evaluate(eps, *a).unwrap().total_cmp(&u.evaluate(eps, *b).unwrap())
                })
                .unwrap();
            let (mut a, mut b) = (best - 2.0 * e / n as f64, best + 2.0 * e / n as f64);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..80 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if u.evaluate(eps, c).unwrap() > u.evaluate(eps, d).unwrap() {
                    b = d;
                } else {
                    a = c;
                }
            }
            let peak = u.evaluate(eps, 0.5 * (a + b)).unwrap();
            assert!((peak - 0.25).abs() < 1e-12, "{peak}");
        }
    }

    #[test]
    fn suite_is_deterministic_and_well_formed() {
        let a = standard_test_suite(5, 1).unwrap();
        let b = standard_test_suite(5, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, standard_test_suite(5, 2).unwrap());
        assert!(a[0].value_at_zero > 0.0);
        assert_eq!(a[4].value_at_zero, 0.0);
        assert!(a.iter().filter(|p| p.value_at_zero.abs() > 0.05).count() >= 4);
        for psi in &a {
            let (lo, hi) = psi.support();
            assert!(lo < 0.0 && hi > 0.0);
            for x in [lo - 1.0, lo, hi, hi + 0.5] {
                assert_eq!(psi.eval(x), 0.0);
            }
        }
        assert!(standard_test_suite(0, 1).is_err());
        assert_eq!(standard_test_suite(1, 3).unwrap().len(), 1);
    }
}
