//! Truncated Taylor series ("jets") for exact derivative propagation.
//!
//! A jet of order `n` at a point `x` stores the normalized Taylor coefficients
//! `c_k = f^(k)(x) / k!` for `k = 0..=n`. Sums, products, reciprocals,
//! exponentials and trigonometric functions of jets follow the usual power
//! series recurrences, so every derivative produced here is analytic up to
//! floating-point rounding. No finite differences are involved anywhere.

use std::ops::{Add, Mul, Neg, Sub};

/// Highest derivative order a jet can carry.
pub const MAX_ORDER: usize = 15;
const CAP: usize = MAX_ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; CAP],
    order: usize,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        debug_assert!(order <= MAX_ORDER);
        let mut coeffs = [0.0; CAP];
        coeffs[0] = value;
        Self { coeffs, order }
    }

    /// The identity function evaluated at `x`.
    pub fn variable(x: f64, order: usize) -> Self {
        let mut jet = Self::constant(x, order);
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= CAP);
        let mut jet = Self::constant(0.0, coeffs.len() - 1);
        jet.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Normalized Taylor coefficient `f^(k) / k!`.
    pub fn coeff(&self, k: usize) -> f64 {
        if k <= self.order {
            self.coeffs[k]
        } else {
            0.0
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..=self.order]
    }

    /// The `k`-th derivative `f^(k)(x)`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeff(k) * factorial(k)
    }

    /// Jet of `f'` at the same point, one order shorter.
    pub fn differentiate(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::constant(0.0, order);
        if self.order == 0 {
            return out;
        }
        for k in 0..=order {
            out.coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        out
    }

    /// Jet of `t -> f(s * t)` given the jet of `f` at `s * t`.
    pub fn rescale_argument(&self, s: f64) -> Self {
        let mut out = *self;
        let mut factor = 1.0;
        for k in 1..=self.order {
            factor *= s;
            out.coeffs[k] *= factor;
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = *self;
        out.coeffs[..=self.order].iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_finite())
    }

    pub fn recip(&self) -> Self {
        let a = &self.coeffs;
        let mut out = Self::constant(0.0, self.order);
        let b = &mut out.coeffs;
        b[0] = 1.0 / a[0];
        for k in 1..=self.order {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s * b[0];
        }
        out
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let mut out = Self::constant(0.0, self.order);
        let e = &mut out.coeffs;
        e[0] = a[0].exp();
        for k in 1..=self.order {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        out
    }

    /// Returns `(sin f, cos f)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let a = &self.coeffs;
        let mut s = Self::constant(0.0, self.order);
        let mut c = Self::constant(0.0, self.order);
        let (s0, c0) = a[0].sin_cos();
        s.coeffs[0] = s0;
        c.coeffs[0] = c0;
        for k in 1..=self.order {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * a[j];
                ds += w * c.coeffs[k - j];
                dc += w * s.coeffs[k - j];
            }
            s.coeffs[k] = ds / k as f64;
            c.coeffs[k] = -dc / k as f64;
        }
        (s, c)
    }

    pub fn powi(&self, mut n: u32) -> Self {
        let mut base = *self;
        let mut acc = Self::constant(1.0, self.order);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// `p(f)` for `p(t) = coeffs[0] + coeffs[1] t + ...` by Horner's rule.
    pub fn compose_polynomial(&self, coeffs: &[f64]) -> Self {
        let mut acc = Self::constant(0.0, self.order);
        for &c in coeffs.iter().rev() {
            acc = acc * *self;
            acc.coeffs[0] += c;
        }
        acc
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for k in 0..=order {
            out.coeffs[k] = self.coeffs[k] + rhs.coeffs[k];
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for k in 0..=order {
            out.coeffs[k] = self.coeffs[k] - rhs.coeffs[k];
        }
        out
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for k in 0..=order {
            out.coeffs[k] = (0..=k).map(|j| self.coeffs[j] * rhs.coeffs[k - j]).sum();
        }
        out
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_matches_hand_expansion() {
        // f = x^2, g = x^3 at x = 1.5  ->  (fg)^(k) of x^5
        let x = Jet::variable(1.5, 5);
        let fg = (x * x) * (x * x * x);
        let expected = [
            1.5f64.powi(5),
            5.0 * 1.5f64.powi(4),
            20.0 * 1.5f64.powi(3),
            60.0 * 1.5f64.powi(2),
            120.0 * 1.5,
            120.0,
        ];
        for (k, e) in expected.iter().enumerate() {
            assert_relative_eq!(fg.derivative(k), *e, max_relative = 1e-14);
        }
    }

    #[test]
    fn exp_and_recip_derivatives() {
        let x = Jet::variable(0.3, 4);
        let e = (x.scale(2.0)).exp();
        for k in 0..=4 {
            assert_relative_eq!(
                e.derivative(k),
                2f64.powi(k as i32) * (0.6f64).exp(),
                max_relative = 1e-13
            );
        }
        let r = x.recip();
        // d^k/dx^k 1/x = (-1)^k k! / x^(k+1)
        for k in 0..=4 {
            let expected = (-1f64).powi(k as i32) * factorial(k) / 0.3f64.powi(k as i32 + 1);
            assert_relative_eq!(r.derivative(k), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn sin_cos_cycle() {
        let (s, c) = Jet::variable(0.7, 6).sin_cos();
        let (s0, c0) = 0.7f64.sin_cos();
        let cycle_s = [s0, c0, -s0, -c0];
        let cycle_c = [c0, -s0, -c0, s0];
        for k in 0..=6 {
            assert_relative_eq!(s.derivative(k), cycle_s[k % 4], epsilon = 1e-12);
            assert_relative_eq!(c.derivative(k), cycle_c[k % 4], epsilon = 1e-12);
        }
    }

    #[test]
    fn differentiate_shifts() {
        let x = Jet::variable(2.0, 3);
        let cube = x.powi(3);
        let d = cube.differentiate();
        assert_eq!(d.order(), 2);
        assert_relative_eq!(d.value(), 12.0);
        assert_relative_eq!(d.derivative(1), 12.0);
        assert_relative_eq!(d.derivative(2), 6.0);
    }

    #[test]
    fn polynomial_composition() {
        // p(t) = t^3/3 - t^2/2 at t = x^2, x = 0.5
        let x = Jet::variable(0.5, 2);
        let t = x * x;
        let p = t.compose_polynomial(&[0.0, 0.0, -0.5, 1.0 / 3.0]);
        let tv: f64 = 0.25;
        assert_relative_eq!(p.value(), tv.powi(3) / 3.0 - tv * tv / 2.0);
        // d/dx = (t^2 - t) * 2x
        assert_relative_eq!(p.derivative(1), (tv * tv - tv) * 1.0, max_relative = 1e-14);
    }
}
