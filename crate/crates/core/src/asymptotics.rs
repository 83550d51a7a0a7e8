//! ε→0 behavior of generalized numbers and functions.
//!
//! Two notions of "zero" are kept apart on purpose:
//!
//! * association: every pairing `⟨u_ε, ψ⟩` tends to 0;
//! * negligibility: the sup-norm of `u_ε` itself decays (numerically: with
//!   fitted order at least `Thresholds::negligible_order`).
//!
//! `H² − H` is associated with zero but is not negligible.

use serde::{Deserialize, Serialize};

use crate::embedding::TestFunction;
use crate::error::{Error, Result};
use crate::gf::{Epsilon, GenFunction, GenNumber, Support};
use crate::quadrature::{self, QuadOptions};

/// Geometric ε sequence `eps0 · ratio^k`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid {
    eps0: f64,
    ratio: f64,
    count: usize,
}

impl EpsilonGrid {
    pub fn new(eps0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidArgument(format!("grid ratio must lie in (0, 1), got {ratio}")));
        }
        if count < 4 {
            return Err(Error::InvalidArgument(format!("grid needs at least 4 points, got {count}")));
        }
        let grid = Self { eps0, ratio, count };
        let last = eps0 * ratio.powi(count as i32 - 1);
        if !(eps0 <= Epsilon::WORKING_MAX && last >= Epsilon::WORKING_MIN) {
            return Err(Error::InvalidArgument(format!(
                "grid [{last}, {eps0}] leaves the working range [{}, {}]",
                Epsilon::WORKING_MIN,
                Epsilon::WORKING_MAX
            )));
        }
        Ok(grid)
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Strictly decreasing.
    pub fn epsilons(&self) -> Vec<Epsilon> {
        let mut out = Vec::with_capacity(self.count);
        let mut e = self.eps0;
        for _ in 0..self.count {
            out.push(Epsilon::new(e).expect("validated grid"));
            e *= self.ratio;
        }
        out
    }
}

impl Default for EpsilonGrid {
    fn default() -> Self {
        Self { eps0: 0.125, ratio: 0.5, count: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `|exponent|` at or below this counts as ε-independent at leading order.
    pub finite_exponent: f64,
    pub min_fit_quality: f64,
    pub negligible_order: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { finite_exponent: 0.1, min_fit_quality: 0.99, negligible_order: 2.0 }
    }
}

/// `(ε, value)` pairs in grid order.
pub type Samples = Vec<(f64, f64)>;

pub fn sample(g: &GenNumber, grid: &EpsilonGrid) -> Result<Samples> {
    grid.epsilons().into_iter().map(|e| Ok((e.value(), g.at(e)?))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coefficient: f64,
    /// R² of the log-log regression.
    pub fit_quality: f64,
}

/// Least-squares fit of `log|g| = log|c| + a log ε`.
pub fn fit_power_law(g: &GenNumber, grid: &EpsilonGrid) -> Result<PowerLawFit> {
    fit_power_law_samples(&sample(g, grid)?)
}

pub fn fit_power_law_samples(samples: &[(f64, f64)]) -> Result<PowerLawFit> {
    if samples.len() < 2 {
        return Err(Error::Unfit("need at least two samples".into()));
    }
    let sign = samples[0].1.signum();
    if samples.iter().any(|&(_, v)| v == 0.0 || !v.is_finite()) {
        return Err(Error::Unfit("zero or non-finite sample".into()));
    }
    if samples.iter().any(|&(_, v)| v.signum() != sign) {
        return Err(Error::Unfit("samples change sign".into()));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    // data that is constant to rounding has no variance to explain
    let fit_quality = if syy <= 1e-24 * n { 1.0 } else { 1.0 - ss_res / syy };
    Ok(PowerLawFit { exponent: slope, coefficient: sign * intercept.exp(), fit_quality })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub error: f64,
}

/// Extrapolated ε→0 limit.
pub fn limit_estimate(g: &GenNumber, grid: &EpsilonGrid) -> Result<LimitEstimate> {
    extrapolate_samples(&sample(g, grid)?)
}

/// Repeated Richardson extrapolation on a geometric grid. Each level fits its
/// own correction exponent from the two finest differences; the level whose
/// last two extrapolants agree best is returned, with that disagreement as the
/// error estimate.
pub fn extrapolate_samples(samples: &[(f64, f64)]) -> Result<LimitEstimate> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument("extrapolation needs at least three samples".into()));
    }
    let ratio = samples[1].0 / samples[0].0;
    let geometric = samples
        .windows(2)
        .all(|w| ((w[1].0 / w[0].0) - ratio).abs() <= 1e-9 * ratio);
    if !(geometric && ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument("samples must follow a decreasing geometric grid".into()));
    }
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoLimit("non-finite sample".into()));
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_diff = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let last = *values.last().unwrap();
    if max_diff <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Ok(LimitEstimate { value: last, error: max_diff });
    }
    // differences below this are treated as evaluation noise
    let noise = 1e-10 * scale;
    let tail: Vec<f64> = diffs.iter().rev().take(3).map(|d| d.abs()).collect();
    if tail.len() == 3 && tail[0] > noise && tail[0] > 1.05 * tail[1] && tail[1] > 1.05 * tail[2] {
        return Err(Error::NoLimit(format!(
            "successive differences grow toward ε→0 ({:.3e} > {:.3e} > {:.3e})",
            tail[0], tail[1], tail[2]
        )));
    }
    let (first, final_diff) = (diffs[0].abs(), tail[0]);
    if final_diff > noise && final_diff > first {
        return Err(Error::NoLimit(format!(
            "differences do not shrink ({first:.3e} at the coarsest step, {final_diff:.3e} at the finest)"
        )));
    }

    let mut best = LimitEstimate { value: last, error: diffs.last().unwrap().abs() };
    let mut column = values;
    for _level in 0..3 {
        if column.len() < 3 {
            break;
        }
        let k = column.len();
        let d_prev = column[k - 2] - column[k - 3];
        let d_last = column[k - 1] - column[k - 2];
        let rp = d_last / d_prev;
        if !(rp.is_finite() && rp > 0.0 && rp < 1.0) {
            break;
        }
        column = column.windows(2).map(|w| (w[1] - rp * w[0]) / (1.0 - rp)).collect();
        if column.len() >= 2 {
            let k = column.len();
            let err = (column[k - 1] - column[k - 2]).abs();
            if err < best.error {
                best = LimitEstimate { value: column[k - 1], error: err };
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `|g(ε)| ~ |c| ε^(-order)`.
    InfiniteOfOrder { order: f64, coefficient: f64 },
    FiniteLimit { limit: f64, error: f64 },
    /// `g(ε) ~ c ε^order → 0`.
    DecaysWithOrder { order: f64, coefficient: f64 },
    Unclassifiable { reason: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::InfiniteOfOrder { .. } => "InfiniteOfOrder",
            Verdict::FiniteLimit { .. } => "FiniteLimit",
            Verdict::DecaysWithOrder { .. } => "DecaysWithOrder",
            Verdict::Unclassifiable { .. } => "Unclassifiable",
        }
    }

    /// The limit, when one exists.
    pub fn limit(&self) -> Option<f64> {
        match self {
            Verdict::FiniteLimit { limit, .. } => Some(*limit),
            Verdict::DecaysWithOrder { .. } => Some(0.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticClass {
    pub verdict: Verdict,
    /// Absent only when the samples could not be fitted (sign change or zero).
    pub fit: Option<PowerLawFit>,
    /// Extrapolated limit, when extrapolation succeeded.
    pub limit: Option<LimitEstimate>,
    pub samples: Samples,
}

impl AsymptoticClass {
    pub fn fit_quality(&self) -> Option<f64> {
        self.fit.map(|f| f.fit_quality)
    }
}

pub fn classify(g: &GenNumber, grid: &EpsilonGrid, thresholds: &Thresholds) -> Result<AsymptoticClass> {
    Ok(classify_samples(sample(g, grid)?, thresholds))
}

/// Decision tree: a good power-law fit first; a clearly negative exponent is
/// an infinite quantity, a clearly positive one decays; otherwise (or when
/// the fit is poor or impossible) the extrapolated limit decides.
pub fn classify_samples(samples: Samples, thresholds: &Thresholds) -> AsymptoticClass {
    let fit = fit_power_law_samples(&samples).ok();
    let limit = extrapolate_samples(&samples);
    let good = |f: &PowerLawFit| f.fit_quality >= thresholds.min_fit_quality;
    let verdict = match (&fit, &limit) {
        (Some(f), _) if good(f) && f.exponent < -thresholds.finite_exponent => {
            Verdict::InfiniteOfOrder { order: -f.exponent, coefficient: f.coefficient }
        }
        (Some(f), _) if good(f) && f.exponent > thresholds.finite_exponent => {
            Verdict::DecaysWithOrder { order: f.exponent, coefficient: f.coefficient }
        }
        (_, Ok(l)) => Verdict::FiniteLimit { limit: l.value, error: l.error },
        (Some(f), Err(e)) => Verdict::Unclassifiable {
            reason: format!("exponent {:.3} near zero (R² {:.4}) but {e}", f.exponent, f.fit_quality),
        },
        (None, Err(e)) => Verdict::Unclassifiable { reason: format!("power law unfit and {e}") },
    };
    AsymptoticClass { verdict, fit, limit: limit.ok(), samples }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegligibilityReport {
    pub negligible: bool,
    pub supnorm_by_eps: Samples,
    /// Fitted decay order of the sup-norms; `None` when they vanish identically.
    pub order: Option<f64>,
}

const SUP_SAMPLES: usize = 2001;

/// Sup-norm of `u_ε` over `region`, from a dense uniform scan (plus a second
/// scan over the active interval of `u_ε`) refined by golden-section search
/// around the largest sample.
pub fn supnorm(u: &GenFunction, eps: Epsilon, region: (f64, f64)) -> Result<f64> {
    let (a, b) = region;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("region must be a finite interval, got [{a}, {b}]")));
    }
    let abs_at = |x: f64| u.evaluate(eps, x).map(f64::abs);
    let mut grids = vec![(a, b)];
    if let Support::Bounded { lo, hi, .. } = u.support(eps) {
        let (p, q) = (lo.max(a), hi.min(b));
        if p < q {
            grids.push((p, q));
        }
    }
    let (mut best_x, mut best, mut step) = (a, abs_at(a)?, b - a);
    for (p, q) in grids {
        let h = (q - p) / (SUP_SAMPLES - 1) as f64;
        for i in 0..SUP_SAMPLES {
            let x = p + h * i as f64;
            let v = abs_at(x)?;
            if v > best {
                best = v;
                best_x = x;
                step = h;
            }
        }
    }
    let (mut lo, mut hi) = ((best_x - step).max(a), (best_x + step).min(b));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if abs_at(c)? > abs_at(d)? {
            hi = d;
        } else {
            lo = c;
        }
    }
    Ok(best.max(abs_at(0.5 * (lo + hi))?))
}

pub fn is_negligible(
    u: &GenFunction,
    region: (f64, f64),
    grid: &EpsilonGrid,
    thresholds: &Thresholds,
) -> Result<NegligibilityReport> {
    let sups: Samples = grid
        .epsilons()
        .into_iter()
        .map(|e| Ok((e.value(), supnorm(u, e, region)?)))
        .collect::<Result<_>>()?;
    Ok(negligibility_from_supnorms(sups, thresholds))
}

/// The decision part of [`is_negligible`], for sup-norms computed elsewhere.
pub fn negligibility_from_supnorms(sups: Samples, thresholds: &Thresholds) -> NegligibilityReport {
    if sups.iter().all(|&(_, s)| s == 0.0) {
        return NegligibilityReport { negligible: true, supnorm_by_eps: sups, order: None };
    }
    let fit = fit_power_law_samples(&sups).ok();
    let order = fit.map(|f| f.exponent);
    let negligible = fit.is_some_and(|f| {
        f.exponent >= thresholds.negligible_order && f.fit_quality >= thresholds.min_fit_quality
    });
    NegligibilityReport { negligible, supnorm_by_eps: sups, order }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingLimit {
    pub psi_id: usize,
    pub psi_at_zero: f64,
    pub limit: Option<LimitEstimate>,
    /// Why no limit was obtained.
    pub failure: Option<String>,
    pub samples: Samples,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationReport {
    pub pairings: Vec<PairingLimit>,
    pub all_pairings_vanish: bool,
    pub supnorm_by_eps: Samples,
    pub negligible: bool,
    pub negligible_order: Option<f64>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationOptions {
    /// Limits within this distance of zero count as vanishing.
    pub limit_tol: f64,
    pub quad: QuadOptions,
    pub thresholds: Thresholds,
}

impl Default for AssociationOptions {
    fn default() -> Self {
        Self {
            limit_tol: 1e-8,
            quad: QuadOptions::default(),
            thresholds: Thresholds::default(),
        }
    }
}

/// Checks whether `u − v` pairs to zero against every ψ in `suite`, and
/// independently whether `u − v` is negligible on the hull of the supports.
pub fn is_associated(
    u: &GenFunction,
    v: &GenFunction,
    suite: &[TestFunction],
    grid: &EpsilonGrid,
    opts: &AssociationOptions,
) -> Result<AssociationReport> {
    if suite.is_empty() {
        return Err(Error::InvalidArgument("association needs a nonempty test suite".into()));
    }
    let diff = u - v;
    let mut pairings = Vec::with_capacity(suite.len());
    let mut reasons = Vec::new();
    for psi in suite {
        let samples: Result<Samples> = grid
            .epsilons()
            .into_iter()
            .map(|e| Ok((e.value(), quadrature::pair_with(&diff, psi, e, &opts.quad)?.value)))
            .collect();
        let (samples, outcome) = match samples {
            Ok(s) => {
                let l = extrapolate_samples(&s);
                (s, l)
            }
            Err(e) => (Vec::new(), Err(e)),
        };
        let (limit, failure) = match outcome {
            Ok(l) => {
                if l.value.abs() > opts.limit_tol {
                    reasons.push(format!("psi{}: limit {:.3e}", psi.id, l.value));
                }
                (Some(l), None)
            }
            Err(e) => {
                reasons.push(format!("psi{}: {e}", psi.id));
                (None, Some(e.to_string()))
            }
        };
        pairings.push(PairingLimit {
            psi_id: psi.id,
            psi_at_zero: psi.value_at_zero,
            limit,
            failure,
            samples,
        });
    }
    let all_pairings_vanish = reasons.is_empty();
    let region = suite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), psi| {
        let (p, q) = psi.support();
        (a.min(p), b.max(q))
    });
    let neg = is_negligible(&diff, region, grid, &opts.thresholds)?;
    Ok(AssociationReport {
        pairings,
        all_pairings_vanish,
        supnorm_by_eps: neg.supnorm_by_eps,
        negligible: neg.negligible,
        negligible_order: neg.order,
        reason: (!all_pairings_vanish).then(|| reasons.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{embed_delta, embed_heaviside, standard_test_suite, Mollifier};

    fn grid() -> EpsilonGrid {
        EpsilonGrid::default()
    }

    #[test]
    fn grid_validation() {
        assert!(EpsilonGrid::new(0.125, 1.0, 10).is_err());
        assert!(EpsilonGrid::new(0.125, 0.5, 3).is_err());
        assert!(EpsilonGrid::new(0.5, 0.5, 10).is_err());
        assert!(EpsilonGrid::new(0.125, 0.25, 12).is_err());
        let g = EpsilonGrid::new(0.125, 0.25, 8).unwrap();
        let e = g.epsilons();
        assert_eq!(e.len(), 8);
        assert!(e.windows(2).all(|w| w[1].value() < w[0].value()));
    }

    #[test]
    fn fits_exact_power_laws() {
        let f = fit_power_law(&GenNumber::power(1.0, -1.0), &grid()).unwrap();
        assert!((f.exponent + 1.0).abs() < 1e-12);
        assert!((f.coefficient - 1.0).abs() < 1e-12);
        assert!(f.fit_quality > 0.9999);
        let c = fit_power_law(&GenNumber::constant(7.0), &grid()).unwrap();
        assert!(c.exponent.abs() < 0.01);
        assert!((c.coefficient - 7.0).abs() < 1e-12);
        let neg = fit_power_law(&GenNumber::power(-2.5, 1.5), &grid()).unwrap();
        assert!((neg.exponent - 1.5).abs() < 1e-12);
        assert!((neg.coefficient + 2.5).abs() < 1e-12);
    }

    #[test]
    fn unfit_on_sign_change() {
        let g = GenNumber::new("alternating", |e| Ok((1.0 / e.value()).ln().cos()));
        let samples: Samples = vec![(0.1, 1.0), (0.05, -1.0), (0.025, 1.0)];
        assert!(fit_power_law_samples(&samples).is_err());
        let _ = fit_power_law(&g, &grid());
        assert!(fit_power_law_samples(&[(0.1, 0.0), (0.05, 1.0)]).is_err());
    }

    #[test]
    fn limit_of_linear_model() {
        let g = GenNumber::new("3+2eps", |e| Ok(3.0 + 2.0 * e.value()));
        let l = limit_estimate(&g, &grid()).unwrap();
        assert!((l.value - 3.0).abs() < 1e-6, "{l:?}");
    }

    #[test]
    fn limit_of_exact_models() {
        for p in [1.0, 2.0] {
            for (lim, c) in [(0.0, 1.0), (-1.0 / 6.0, 0.3), (2.5, -4.0)] {
                let g = GenNumber::new("model", move |e| Ok(lim + c * e.value().powf(p)));
                let l = limit_estimate(&g, &grid()).unwrap();
                assert!((l.value - lim).abs() < 1e-8, "p={p} L={lim}: {l:?}");
            }
        }
    }

    #[test]
    fn divergent_samples_have_no_limit() {
        let err = limit_estimate(&GenNumber::power(1.0, -1.0), &grid()).unwrap_err();
        assert!(matches!(err, Error::NoLimit(_)));
    }

    #[test]
    fn classify_decision_tree() {
        let t = Thresholds::default();
        let inf = classify(&GenNumber::power(3.0, -2.0), &grid(), &t).unwrap();
        assert!(matches!(inf.verdict, Verdict::InfiniteOfOrder { order, coefficient }
            if (order - 2.0).abs() < 1e-9 && (coefficient - 3.0).abs() < 1e-9));
        let fin = classify(&GenNumber::constant(-1.0 / 6.0), &grid(), &t).unwrap();
        assert!(matches!(fin.verdict, Verdict::FiniteLimit { limit, .. } if (limit + 1.0 / 6.0).abs() < 1e-15));
        let dec = classify(&GenNumber::power(0.2, 1.0), &grid(), &t).unwrap();
        assert!(matches!(dec.verdict, Verdict::DecaysWithOrder { order, .. } if (order - 1.0).abs() < 1e-9));
        let zero = classify(&GenNumber::constant(0.0), &grid(), &t).unwrap();
        assert!(matches!(zero.verdict, Verdict::FiniteLimit { limit, .. } if limit == 0.0));
        assert!(zero.fit.is_none());
        let wild = GenNumber::new("wild", |e| Ok((1.0 / e.value()) * (1.0 / e.value()).ln().sin()));
        let w = classify(&wild, &grid(), &t).unwrap();
        assert!(matches!(w.verdict, Verdict::Unclassifiable { .. }), "{:?}", w.verdict);
    }

    #[test]
    fn poor_power_fit_defers_to_the_limit() {
        // |g| climbs from 0.1 to 1 on the grid, a slope of about -0.24
        let g = GenNumber::new("pre-asymptotic", |e| Ok(-1.0128 + 4.211 * e.value().powf(0.7418)));
        let c = classify(&g, &grid(), &Thresholds::default()).unwrap();
        assert!(c.fit_quality().unwrap() < 0.99);
        assert!(matches!(c.verdict, Verdict::FiniteLimit { limit, .. } if (limit + 1.0128).abs() < 1e-5), "{:?}", c.verdict);
    }

    #[test]
    fn delta_squared_is_infinite_of_order_one() {
        let m = Mollifier::bump();
        let d = embed_delta(&m);
        let g = quadrature::integrate_gf(&(&d * &d), f64::NEG_INFINITY, f64::INFINITY, 1e-9);
        let oracle = quadrature::integrate(|y| m.profile(y).powi(2), -1.0, 1.0, 1e-14).unwrap().value;
        let c = classify(&g, &grid(), &Thresholds::default()).unwrap();
        match c.verdict {
            Verdict::InfiniteOfOrder { order, coefficient } => {
                assert!((order - 1.0).abs() < 0.02);
                assert!((coefficient / oracle - 1.0).abs() < 0.01);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn zero_function_is_negligible() {
        let z = GenFunction::constant(0.0);
        let r = is_negligible(&z, (-1.0, 1.0), &grid(), &Thresholds::default()).unwrap();
        assert!(r.negligible);
        assert!(r.supnorm_by_eps.iter().all(|&(_, s)| s == 0.0));
    }

    #[test]
    fn heaviside_defect_is_not_negligible_but_cubed_weight_is() {
        let h = embed_heaviside(&Mollifier::bump());
        let u = &(&h * &h) - &h;
        let r = is_negligible(&u, (-1.0, 1.0), &grid(), &Thresholds::default()).unwrap();
        assert!(!r.negligible);
        for &(_, s) in &r.supnorm_by_eps {
            assert!((s - 0.25).abs() < 1e-6, "{s}");
        }
        let w = u.scale_by(&GenNumber::power(1.0, 3.0));
        let r = is_negligible(&w, (-1.0, 1.0), &grid(), &Thresholds::default()).unwrap();
        assert!(r.negligible);
        assert!((r.order.unwrap() - 3.0).abs() < 1e-6);
    }

    #[test]
    fn association_paradox() {
        let h = embed_heaviside(&Mollifier::bump());
        let suite = standard_test_suite(3, 1).unwrap();
        let r = is_associated(&(&h * &h), &h, &suite, &grid(), &AssociationOptions::default()).unwrap();
        assert!(r.all_pairings_vanish, "{:?}", r.reason);
        assert!(!r.negligible);
        let same = is_associated(&(&h * &h), &(&h * &h), &suite, &grid(), &AssociationOptions::default())
            .unwrap();
        assert!(same.all_pairings_vanish && same.negligible);
    }
}
