//! Value-semantic algebra of generalized functions.
//!
//! A [`GenFunction`] is an ε-indexed family of smooth representatives on ℝ.
//! Internally it is an immutable expression tree; evaluating a node at
//! `(ε, x)` produces a [`Jet`], so every derivative is exact (chain and
//! Leibniz rules applied structurally). Ring operations act representative-wise:
//! the product of two families at ε is the pointwise product of their
//! representatives at the same ε.
//!
//! Every node also reports a [`Support`]: outside a bounded interval most
//! embedded objects are exactly constant, which quadrature exploits.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::embedding::Mollifier;
use crate::error::{Error, Result};
use crate::jet::{Jet, MAX_ORDER};

/// Regularization scale ε > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Epsilon(f64);

impl Epsilon {
    /// Lower end of the range the crate is tuned for.
    pub const WORKING_MIN: f64 = 1.0 / 1_048_576.0;
    /// Upper end of the range the crate is tuned for.
    pub const WORKING_MAX: f64 = 0.25;

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidEpsilon(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn in_working_range(self) -> bool {
        (Self::WORKING_MIN..=Self::WORKING_MAX).contains(&self.0)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where a representative differs from a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// Constant everywhere.
    Constant(f64),
    /// Equal to `left` for `x < lo`, to `right` for `x > hi`, arbitrary between.
    Bounded { lo: f64, hi: f64, left: f64, right: f64 },
    /// No usable information.
    Unbounded,
}

impl Support {
    /// Constant value taken on the left/right of the active interval.
    fn tails(self) -> Option<(f64, f64)> {
        match self {
            Support::Constant(c) => Some((c, c)),
            Support::Bounded { left, right, .. } => Some((left, right)),
            Support::Unbounded => None,
        }
    }

    fn combine(self, other: Support, op: impl Fn(f64, f64) -> f64) -> Support {
        use Support::*;
        match (self, other) {
            (Constant(a), Constant(b)) => Constant(op(a, b)),
            (Constant(c), Bounded { lo, hi, left, right }) => Bounded {
                lo,
                hi,
                left: op(c, left),
                right: op(c, right),
            },
            (Bounded { lo, hi, left, right }, Constant(c)) => Bounded {
                lo,
                hi,
                left: op(left, c),
                right: op(right, c),
            },
            (
                Bounded { lo: l1, hi: h1, left: a1, right: b1 },
                Bounded { lo: l2, hi: h2, left: a2, right: b2 },
            ) => Bounded {
                lo: l1.min(l2),
                hi: h1.max(h2),
                left: op(a1, a2),
                right: op(b1, b2),
            },
            _ => Unbounded,
        }
    }

    fn add(self, other: Support) -> Support {
        self.combine(other, |a, b| a + b)
    }

    fn sub(self, other: Support) -> Support {
        self.combine(other, |a, b| a - b)
    }

    fn mul(self, other: Support) -> Support {
        use Support::*;
        match (self, other) {
            (Constant(c), _) | (_, Constant(c)) if c == 0.0 => Constant(0.0),
            // a compactly supported factor kills whatever the other one does outside
            (b @ Bounded { left, right, .. }, Unbounded)
            | (Unbounded, b @ Bounded { left, right, .. })
                if left == 0.0 && right == 0.0 =>
            {
                b
            }
            (a, b) => a.combine(b, |x, y| x * y),
        }
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Support {
        match self {
            Support::Constant(c) => Support::Constant(f(c)),
            Support::Bounded { lo, hi, left, right } => Support::Bounded {
                lo,
                hi,
                left: f(left),
                right: f(right),
            },
            Support::Unbounded => Support::Unbounded,
        }
    }

    fn differentiate(self) -> Support {
        self.map(|_| 0.0)
    }
}

/// A smooth ε-independent function with analytic derivatives.
#[derive(Clone)]
pub struct SmoothRepresentative {
    kind: SmoothKind,
    support_hint: Option<Support>,
}

#[derive(Clone)]
enum SmoothKind {
    Polynomial(Vec<f64>),
    /// Value and first derivative only.
    Closure {
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        deriv: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
    /// A generalized function frozen at one ε.
    Frozen { function: GenFunction, eps: Epsilon },
}

impl SmoothRepresentative {
    pub fn constant(c: f64) -> Self {
        Self {
            kind: SmoothKind::Polynomial(vec![c]),
            support_hint: Some(Support::Constant(c)),
        }
    }

    /// `coeffs[0] + coeffs[1] x + coeffs[2] x^2 + ...`
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let support_hint = match coeffs.iter().skip(1).all(|&c| c == 0.0) {
            true => Some(Support::Constant(coeffs.first().copied().unwrap_or(0.0))),
            false => None,
        };
        Self { kind: SmoothKind::Polynomial(coeffs), support_hint }
    }

    /// A function given by closures for its value and exact first derivative.
    /// Higher derivatives are unavailable.
    pub fn from_fns(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind: SmoothKind::Closure { eval: Arc::new(eval), deriv: Arc::new(deriv) },
            support_hint: None,
        }
    }

    /// Declares that outside `[lo, hi]` the function equals `left` / `right`.
    pub fn with_support(mut self, lo: f64, hi: f64, left: f64, right: f64) -> Self {
        self.support_hint = Some(Support::Bounded { lo, hi, left, right });
        self
    }

    pub fn support_hint(&self) -> Support {
        self.support_hint.unwrap_or(Support::Unbounded)
    }

    pub fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        match &self.kind {
            SmoothKind::Polynomial(c) => Ok(Jet::variable(x, order).compose_polynomial(c)),
            SmoothKind::Closure { eval, deriv } => {
                if order > 1 {
                    return Err(Error::DerivativeOrder { requested: order, available: 1 });
                }
                let mut coeffs = vec![eval(x)];
                if order == 1 {
                    coeffs.push(deriv(x));
                }
                Ok(Jet::from_coeffs(&coeffs))
            }
            SmoothKind::Frozen { function, eps } => function.jet(*eps, x, order),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x, 0)?.value())
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x, 1)?.coeff(1))
    }
}

impl fmt::Debug for SmoothRepresentative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SmoothKind::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            SmoothKind::Closure { .. } => write!(f, "Closure"),
            SmoothKind::Frozen { function, eps } => write!(f, "Frozen({function} @ {eps})"),
        }
    }
}

/// An ε-indexed family of real numbers.
#[derive(Clone)]
pub struct GenNumber {
    at: Arc<dyn Fn(Epsilon) -> Result<f64> + Send + Sync>,
    description: String,
}

impl GenNumber {
    pub fn new(
        description: impl Into<String>,
        at: impl Fn(Epsilon) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self { at: Arc::new(at), description: description.into() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| Ok(c))
    }

    /// `c * ε^a`
    pub fn power(c: f64, a: f64) -> Self {
        Self::new(format!("{c}*eps^{a}"), move |e| Ok(c * e.value().powf(a)))
    }

    /// `c * log(1/ε)`
    pub fn log_inverse(c: f64) -> Self {
        Self::new(format!("{c}*log(1/eps)"), move |e| Ok(-c * e.value().ln()))
    }

    pub fn at(&self, eps: Epsilon) -> Result<f64> {
        (self.at)(eps)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn scale(&self, c: f64) -> GenNumber {
        let g = self.clone();
        GenNumber::new(format!("{c}*({})", self.description), move |e| Ok(c * g.at(e)?))
    }

    pub fn add(&self, other: &GenNumber) -> GenNumber {
        self.zip(other, "+", |a, b| a + b)
    }

    pub fn sub(&self, other: &GenNumber) -> GenNumber {
        self.zip(other, "-", |a, b| a - b)
    }

    pub fn mul(&self, other: &GenNumber) -> GenNumber {
        self.zip(other, "*", |a, b| a * b)
    }

    fn zip(
        &self,
        other: &GenNumber,
        symbol: &str,
        op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> GenNumber {
        let (a, b) = (self.clone(), other.clone());
        GenNumber::new(
            format!("({} {symbol} {})", self.description, other.description),
            move |e| Ok(op(a.at(e)?, b.at(e)?)),
        )
    }
}

impl fmt::Debug for GenNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenNumber({})", self.description)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
}

enum Node {
    Smooth(SmoothRepresentative),
    Identity,
    Heaviside(Mollifier),
    Delta(Mollifier),
    Binary(BinaryOp, GenFunction, GenFunction),
    Scale(f64, GenFunction),
    ScaleBy(GenNumber, GenFunction),
    Derivative(GenFunction),
    Polynomial(Vec<f64>, GenFunction),
}

/// An ε-indexed family of smooth functions on ℝ.
#[derive(Clone)]
pub struct GenFunction {
    node: Arc<Node>,
}

impl GenFunction {
    fn from_node(node: Node) -> Self {
        Self { node: Arc::new(node) }
    }

    pub(crate) fn heaviside(m: Mollifier) -> Self {
        Self::from_node(Node::Heaviside(m))
    }

    pub(crate) fn delta(m: Mollifier) -> Self {
        Self::from_node(Node::Delta(m))
    }

    pub(crate) fn smooth(f: SmoothRepresentative) -> Self {
        Self::from_node(Node::Smooth(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::smooth(SmoothRepresentative::constant(c))
    }

    /// The coordinate function `x`.
    pub fn identity() -> Self {
        Self::from_node(Node::Identity)
    }

    pub fn combine(op: BinaryOp, u: &GenFunction, v: &GenFunction) -> Self {
        Self::from_node(Node::Binary(op, u.clone(), v.clone()))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_node(Node::Scale(c, self.clone()))
    }

    /// Multiplies the representative at ε by `g(ε)`.
    pub fn scale_by(&self, g: &GenNumber) -> Self {
        Self::from_node(Node::ScaleBy(g.clone(), self.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::from_node(Node::Derivative(self.clone()))
    }

    /// `p(u)` with `p(t) = coeffs[0] + coeffs[1] t + ...`.
    pub fn compose_polynomial(&self, coeffs: &[f64]) -> Self {
        Self::from_node(Node::Polynomial(coeffs.to_vec(), self.clone()))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut coeffs = vec![0.0; n as usize + 1];
        coeffs[n as usize] = 1.0;
        self.compose_polynomial(&coeffs)
    }

    /// Human-readable provenance.
    pub fn description(&self) -> String {
        self.to_string()
    }

    /// The representative at `eps`.
    pub fn at(&self, eps: Epsilon) -> SmoothRepresentative {
        SmoothRepresentative {
            kind: SmoothKind::Frozen { function: self.clone(), eps },
            support_hint: Some(self.support(eps)),
        }
    }

    /// `u_ε(x)`; non-finite results are reported as errors.
    pub fn evaluate(&self, eps: Epsilon, x: f64) -> Result<f64> {
        let value = self.jet(eps, x, 0)?.value();
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite { x, eps: eps.value(), value })
        }
    }

    /// `u_ε'(x)`, computed exactly.
    pub fn evaluate_derivative(&self, eps: Epsilon, x: f64) -> Result<f64> {
        let value = self.jet(eps, x, 1)?.coeff(1);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite { x, eps: eps.value(), value })
        }
    }

    /// Taylor jet of `u_ε` at `x` up to `order`.
    pub fn jet(&self, eps: Epsilon, x: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::DerivativeOrder { requested: order, available: MAX_ORDER });
        }
        let jet = match &*self.node {
            Node::Smooth(f) => f.jet(x, order)?,
            Node::Identity => Jet::variable(x, order),
            Node::Heaviside(m) => {
                let e = eps.value();
                m.antiderivative_jet(x / e, order).rescale_argument(1.0 / e)
            }
            Node::Delta(m) => {
                let e = eps.value();
                m.profile_jet(x / e, order).rescale_argument(1.0 / e).scale(1.0 / e)
            }
            Node::Binary(op, u, v) => {
                let a = u.jet(eps, x, order)?;
                let b = v.jet(eps, x, order)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                }
            }
            Node::Scale(c, u) => u.jet(eps, x, order)?.scale(*c),
            Node::ScaleBy(g, u) => u.jet(eps, x, order)?.scale(g.at(eps)?),
            Node::Derivative(u) => {
                if order == MAX_ORDER {
                    return Err(Error::DerivativeOrder {
                        requested: order + 1,
                        available: MAX_ORDER,
                    });
                }
                u.jet(eps, x, order + 1)?.differentiate()
            }
            Node::Polynomial(coeffs, u) => u.jet(eps, x, order)?.compose_polynomial(coeffs),
        };
        Ok(jet)
    }

    /// Region outside of which the representative at `eps` is constant.
    pub fn support(&self, eps: Epsilon) -> Support {
        match &*self.node {
            Node::Smooth(f) => f.support_hint(),
            Node::Identity => Support::Unbounded,
            Node::Heaviside(m) => {
                let r = eps.value() * m.support_radius();
                Support::Bounded { lo: -r, hi: r, left: 0.0, right: 1.0 }
            }
            Node::Delta(m) => {
                let r = eps.value() * m.support_radius();
                Support::Bounded { lo: -r, hi: r, left: 0.0, right: 0.0 }
            }
            Node::Binary(op, u, v) => {
                let (a, b) = (u.support(eps), v.support(eps));
                match op {
                    BinaryOp::Add => a.add(b),
                    BinaryOp::Sub => a.sub(b),
                    BinaryOp::Mul => a.mul(b),
                }
            }
            Node::Scale(c, u) => u.support(eps).mul(Support::Constant(*c)),
            Node::ScaleBy(g, u) => match g.at(eps) {
                Ok(c) => u.support(eps).mul(Support::Constant(c)),
                Err(_) => Support::Unbounded,
            },
            Node::Derivative(u) => u.support(eps).differentiate(),
            Node::Polynomial(coeffs, u) => u.support(eps).map(|t| {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }),
        }
    }

    /// Constant values of `u_ε` at `-∞` and `+∞`, when known.
    pub fn tails(&self, eps: Epsilon) -> Option<(f64, f64)> {
        self.support(eps).tails()
    }
}

impl std::ops::Add for &GenFunction {
    type Output = GenFunction;
    fn add(self, rhs: &GenFunction) -> GenFunction {
        GenFunction::combine(BinaryOp::Add, self, rhs)
    }
}

impl std::ops::Sub for &GenFunction {
    type Output = GenFunction;
    fn sub(self, rhs: &GenFunction) -> GenFunction {
        GenFunction::combine(BinaryOp::Sub, self, rhs)
    }
}

impl std::ops::Mul for &GenFunction {
    type Output = GenFunction;
    fn mul(self, rhs: &GenFunction) -> GenFunction {
        GenFunction::combine(BinaryOp::Mul, self, rhs)
    }
}

impl fmt::Display for GenFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Smooth(s) => match &s.kind {
                SmoothKind::Polynomial(c) if c.len() <= 1 => {
                    write!(f, "{}", c.first().copied().unwrap_or(0.0))
                }
                SmoothKind::Polynomial(c) => write!(f, "poly{c:?}(x)"),
                SmoothKind::Closure { .. } => write!(f, "f(x)"),
                SmoothKind::Frozen { function, eps } => write!(f, "[{function}]@{eps}"),
            },
            Node::Identity => write!(f, "x"),
            Node::Heaviside(m) => write!(f, "H[{}]", m.kind()),
            Node::Delta(m) => write!(f, "D[{}]", m.kind()),
            Node::Binary(op, u, v) => {
                let s = match op {
                    BinaryOp::Add => "+",
                    BinaryOp::Sub => "-",
                    BinaryOp::Mul => "*",
                };
                write!(f, "({u} {s} {v})")
            }
            Node::Scale(c, u) => write!(f, "{c}*{u}"),
            Node::ScaleBy(g, u) => write!(f, "({})*{u}", g.description()),
            Node::Derivative(u) => write!(f, "({u})'"),
            Node::Polynomial(c, u) => write!(f, "poly{c:?}({u})"),
        }
    }
}

impl fmt::Debug for GenFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenFunction({self})")
    }
}
