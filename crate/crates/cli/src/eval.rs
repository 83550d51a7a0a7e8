//! Evaluation of parsed expressions against a mollifier and test suite.

use genfun_core::asymptotics::{classify_samples, is_negligible, AsymptoticClass, NegligibilityReport, Samples};
use genfun_core::quadrature::{integrate_representative, pair_with, QuadOptions};
use genfun_core::{
    embed_delta, embed_heaviside, Epsilon, EpsilonGrid, GenFunction, Mollifier, TestFunction, Thresholds,
};
use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, ExprKind, Kind, Span};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{source} (at bytes {span})")]
pub struct EvalError {
    pub span: Span,
    pub source: genfun_core::Error,
}

fn at(span: Span) -> impl FnOnce(genfun_core::Error) -> EvalError {
    move |source| EvalError { span, source }
}

#[derive(Clone)]
pub struct Context {
    pub mollifier: Mollifier,
    pub suite: Vec<TestFunction>,
    pub quad: QuadOptions,
}

/// A number together with an error bound propagated from quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

/// Lowers a function- or scalar-valued node.
pub fn function(e: &Expr, ctx: &Context) -> Result<GenFunction, EvalError> {
    use ExprKind::*;
    Ok(match &e.kind {
        Heaviside => embed_heaviside(&ctx.mollifier),
        Delta => embed_delta(&ctx.mollifier),
        Var => GenFunction::identity(),
        Const(c) => GenFunction::constant(*c),
        Add(a, b) => &function(a, ctx)? + &function(b, ctx)?,
        Sub(a, b) => &function(a, ctx)? - &function(b, ctx)?,
        Mul(a, b) => &function(a, ctx)? * &function(b, ctx)?,
        Pow(a, n) => function(a, ctx)?.powi(*n),
        Prime(a) => function(a, ctx)?.derivative(),
        Int(_) | Pair(..) => {
            return Err(EvalError {
                span: e.span,
                source: genfun_core::Error::InvalidArgument("number-valued expression used as a function".into()),
            })
        }
    })
}

/// Evaluates a number- or scalar-valued node at one ε.
pub fn number_at(e: &Expr, ctx: &Context, eps: Epsilon) -> Result<Estimate, EvalError> {
    use ExprKind::*;
    let binary = |a: &Expr, b: &Expr| -> Result<(Estimate, Estimate), EvalError> {
        Ok((number_at(a, ctx, eps)?, number_at(b, ctx, eps)?))
    };
    Ok(match &e.kind {
        Const(c) => Estimate::exact(*c),
        Add(a, b) => {
            let (x, y) = binary(a, b)?;
            Estimate { value: x.value + y.value, error: x.error + y.error }
        }
        Sub(a, b) => {
            let (x, y) = binary(a, b)?;
            Estimate { value: x.value - y.value, error: x.error + y.error }
        }
        Mul(a, b) => {
            let (x, y) = binary(a, b)?;
            Estimate { value: x.value * y.value, error: x.value.abs() * y.error + y.value.abs() * x.error }
        }
        Pow(a, n) => {
            let x = number_at(a, ctx, eps)?;
            let value = x.value.powi(*n as i32);
            let error = *n as f64 * x.value.abs().powi(*n as i32 - 1) * x.error;
            Estimate { value, error }
        }
        Int(a) => {
            let u = function(a, ctx)?;
            let r = integrate_representative(&u, eps, f64::NEG_INFINITY, f64::INFINITY, &ctx.quad).map_err(at(e.span))?;
            Estimate { value: r.value, error: r.error_estimate }
        }
        Pair(a, k) => {
            let psi = ctx.suite.get(*k).ok_or_else(|| EvalError {
                span: e.span,
                source: genfun_core::Error::InvalidArgument(format!(
                    "test function {k} requested, suite has {}",
                    ctx.suite.len()
                )),
            })?;
            let u = function(a, ctx)?;
            let r = pair_with(&u, psi, eps, &ctx.quad).map_err(at(e.span))?;
            Estimate { value: r.value, error: r.error_estimate }
        }
        Heaviside | Delta | Var | Prime(_) => {
            return Err(EvalError {
                span: e.span,
                source: genfun_core::Error::InvalidArgument("function-valued expression used as a number".into()),
            })
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberRow {
    pub epsilon: f64,
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionRow {
    pub epsilon: f64,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Number { expression: String, rows: Vec<NumberRow>, class: AsymptoticClass },
    Function { expression: String, rows: Vec<FunctionRow> },
}

/// Sample offsets in units of `ε·R` for function tables.
const TABLE_POINTS: i32 = 10;

/// Number-valued expressions are sampled on the grid and classified;
/// function-valued ones are tabulated around the origin on the ε scale.
pub fn evaluate(
    e: &Expr,
    kind: Kind,
    ctx: &Context,
    grid: &EpsilonGrid,
    thresholds: &Thresholds,
) -> Result<Report, EvalError> {
    let expression = e.to_string();
    match kind {
        Kind::Number | Kind::Scalar => {
            let rows = grid
                .epsilons()
                .into_iter()
                .map(|eps| {
                    let r = number_at(e, ctx, eps)?;
                    Ok(NumberRow { epsilon: eps.value(), value: r.value, error_estimate: r.error })
                })
                .collect::<Result<Vec<_>, EvalError>>()?;
            let samples: Samples = rows.iter().map(|r| (r.epsilon, r.value)).collect();
            Ok(Report::Number { expression, rows, class: classify_samples(samples, thresholds) })
        }
        Kind::Function => {
            let u = function(e, ctx)?;
            let r = ctx.mollifier.support_radius();
            let mut rows = Vec::new();
            for eps in grid.epsilons() {
                for k in -TABLE_POINTS..=TABLE_POINTS {
                    let x = 2.0 * r * eps.value() * k as f64 / TABLE_POINTS as f64;
                    let value = u.evaluate(eps, x).map_err(at(e.span))?;
                    rows.push(FunctionRow { epsilon: eps.value(), x, value });
                }
            }
            Ok(Report::Function { expression, rows })
        }
    }
}

/// Sup-norm behavior of a function-valued expression on `region`.
pub fn negligibility(
    e: &Expr,
    ctx: &Context,
    region: (f64, f64),
    grid: &EpsilonGrid,
    thresholds: &Thresholds,
) -> Result<NegligibilityReport, EvalError> {
    let u = function(e, ctx)?;
    is_negligible(&u, region, grid, thresholds).map_err(at(e.span))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_genexpr;
    use genfun_core::{standard_test_suite, Verdict};

    fn ctx() -> Context {
        Context {
            mollifier: Mollifier::bump(),
            suite: standard_test_suite(6, 42).unwrap(),
            quad: QuadOptions::default(),
        }
    }

    fn run(src: &str) -> Report {
        let (e, k) = parse_genexpr(src).unwrap();
        evaluate(&e, k, &ctx(), &EpsilonGrid::default(), &Thresholds::default()).unwrap()
    }

    #[test]
    fn defect_times_derivative_integrates_to_minus_one_sixth() {
        let Report::Number { rows, class, .. } = run("int((H^2 - H) * H')") else { panic!() };
        assert_eq!(rows.len(), 10);
        for r in &rows {
            assert!((r.value + 1.0 / 6.0).abs() < 1e-10, "{r:?}");
        }
        match class.verdict {
            Verdict::FiniteLimit { limit, .. } => assert!((limit + 1.0 / 6.0).abs() < 1e-10),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn delta_normalization_and_square() {
        let Report::Number { rows, .. } = run("int(H')") else { panic!() };
        assert!(rows.iter().all(|r| (r.value - 1.0).abs() < 1e-12));
        let Report::Number { class, .. } = run("int(D*D)") else { panic!() };
        assert!(matches!(class.verdict, Verdict::InfiniteOfOrder { order, .. } if (order - 1.0).abs() < 0.05));
    }

    #[test]
    fn pairing_decays() {
        let Report::Number { class, .. } = run("pair(H^2 - H, 0)") else { panic!() };
        match class.verdict {
            Verdict::DecaysWithOrder { order, .. } => assert!((order - 1.0).abs() < 0.1),
            v => panic!("{v:?}"),
        }
        assert!(class.limit.unwrap().value.abs() < 1e-8);
    }

    #[test]
    fn number_arithmetic_propagates_errors() {
        let Report::Number { rows, .. } = run("6 * int((H^2 - H) * H') + 1") else { panic!() };
        for r in rows {
            assert!(r.value.abs() < 1e-9);
            assert!(r.error_estimate >= 0.0);
        }
    }

    #[test]
    fn function_tables() {
        let Report::Function { rows, .. } = run("H^2 - H") else { panic!() };
        assert_eq!(rows.len(), 10 * 21);
        let centre = rows.iter().find(|r| r.x == 0.0).unwrap();
        assert!((centre.value + 0.25).abs() < 1e-12);
    }

    #[test]
    fn failures_carry_the_span() {
        let (e, k) = parse_genexpr("1 + int(H)").unwrap();
        let err = evaluate(&e, k, &ctx(), &EpsilonGrid::default(), &Thresholds::default()).unwrap_err();
        assert_eq!(err.span, Span { start: 4, end: 10 });
        assert!(matches!(err.source, genfun_core::Error::UnboundedIntegral(_)));

        let (e, k) = parse_genexpr("pair(H, 17)").unwrap();
        let err = evaluate(&e, k, &ctx(), &EpsilonGrid::default(), &Thresholds::default()).unwrap_err();
        assert_eq!(err.span, Span { start: 0, end: 11 });
    }
}
