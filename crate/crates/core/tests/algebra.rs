use genfun_core::{
    embed_delta, embed_heaviside, embed_smooth, integrate_gf, Epsilon, GenFunction, Mollifier, MollifierKind,
    SmoothRepresentative,
};
use proptest::prelude::*;

fn kinds() -> [MollifierKind; 3] {
    [
        MollifierKind::Bump,
        MollifierKind::CosinePower { exponent: 4 },
        MollifierKind::TruncatedGaussian { sigma: 0.35, center: 0.0 },
    ]
}

fn pool(kind: MollifierKind) -> Vec<GenFunction> {
    let m = Mollifier::new(kind, 1.0).unwrap();
    let h = embed_heaviside(&m);
    let d = embed_delta(&m);
    vec![
        h.clone(),
        d.clone(),
        embed_smooth(SmoothRepresentative::polynomial(vec![0.5, -1.0, 0.25])),
        GenFunction::identity(),
        GenFunction::constant(-1.5),
        &h * &h,
        h.compose_polynomial(&[0.0, 1.0, -3.0]),
        d.derivative(),
    ]
}

fn gf_strategy() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (0..3usize, 0..8usize, 0..8usize, 0..8usize)
}

// ε from 2^-20 to 2^-2, x within a few ε of the origin or anywhere in [-2, 2]
fn point() -> impl Strategy<Value = (f64, f64)> {
    (-20.0f64..-2.0, prop_oneof![-3.0f64..3.0, -2.0f64..2.0], any::<bool>()).prop_map(|(lg, t, near)| {
        let eps = 2f64.powf(lg);
        (eps, if near { t * eps } else { t })
    })
}

fn close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws((k, i, j, l) in gf_strategy(), (eps, x) in point()) {
        let p = pool(kinds()[k]);
        let (u, v, w) = (&p[i], &p[j], &p[l]);
        let e = Epsilon::new(eps).unwrap();
        let at = |f: &GenFunction| f.evaluate(e, x).unwrap();
        let (uu, vv, ww) = (at(u), at(v), at(w));
        let scale = (uu.abs() + 1.0) * (vv.abs() + ww.abs() + 1.0);

        prop_assert!(close(at(&(&(u + v) + w)), at(&(u + &(v + w))), scale, 1e-12));
        prop_assert!(close(at(&(u * v)), at(&(v * u)), scale, 1e-12));
        prop_assert!(close(at(&(u + v)), at(&(v + u)), scale, 1e-12));
        prop_assert!(close(at(&(&(u * v) * w)), at(&(u * &(v * w))), scale * (ww.abs() + 1.0), 1e-12));
        prop_assert!(close(at(&(u * &(v + w))), at(&(&(u * v) + &(u * w))), scale, 1e-12));
        prop_assert!(close(at(&(u - u)), 0.0, scale, 1e-12));
        prop_assert!(close(at(&(u * &GenFunction::constant(1.0))), uu, scale, 1e-12));
    }

    #[test]
    fn leibniz_rule((k, i, j, _) in gf_strategy(), (eps, x) in point()) {
        let p = pool(kinds()[k]);
        let (u, v) = (&p[i], &p[j]);
        let e = Epsilon::new(eps).unwrap();
        let at = |f: &GenFunction| f.evaluate(e, x).unwrap();
        let lhs = at(&(u * v).derivative());
        let rhs = at(&(&(&u.derivative() * v) + &(u * &v.derivative())));
        let scale = (at(&u.derivative()) * at(v)).abs() + (at(u) * at(&v.derivative())).abs();
        prop_assert!(close(lhs, rhs, scale, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn exact_derivative_matches_finite_differences((k, i, _, _) in gf_strategy(), (eps, x) in point()) {
        let u = &pool(kinds()[k])[i];
        let e = Epsilon::new(eps).unwrap();
        // five-point stencil on the ε scale; near the edge of a bump the
        // stencil's own truncation error dominates, so it is estimated by halving h
        let f = |t: f64| u.evaluate(e, t).unwrap();
        let stencil = |h: f64| (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
        let h = 1e-3 * eps;
        let (coarse, fd) = (stencil(h), stencil(h / 2.0));
        let exact = u.evaluate_derivative(e, x).unwrap();
        let scale = [x - 2.0 * h, x - h, x, x + h, x + 2.0 * h].iter().map(|&t| f(t).abs()).fold(0.0, f64::max) / eps;
        let tol = 1e-7 * scale.max(exact.abs()).max(1.0) + 2.0 * (coarse - fd).abs();
        prop_assert!((fd - exact).abs() <= tol, "fd {fd} exact {exact} scale {scale} tol {tol}");
    }
}

#[test]
fn heaviside_derivative_is_delta_bit_for_bit() {
    for kind in kinds() {
        let m = Mollifier::new(kind, 1.0).unwrap();
        let (h, d) = (embed_heaviside(&m), embed_delta(&m));
        for eps in [0.25, 1e-3, 2f64.powi(-20)] {
            let e = Epsilon::new(eps).unwrap();
            for t in [-1.0, -0.73, -0.2, 0.0, 0.31, 0.999] {
                let x = t * eps;
                assert_eq!(h.derivative().evaluate(e, x).unwrap(), d.evaluate(e, x).unwrap());
            }
        }
    }
}

#[test]
fn powers_of_heaviside_against_its_derivative() {
    // ∫Hⁿ H' = [H^{n+1}/(n+1)] from 0 to 1
    for kind in kinds() {
        let m = Mollifier::new(kind, 1.0).unwrap();
        let h = embed_heaviside(&m);
        for n in 1..=6u32 {
            let g = integrate_gf(&(&h.powi(n) * &h.derivative()), f64::NEG_INFINITY, f64::INFINITY, 1e-12);
            for lg in [-2, -7, -13, -20] {
                let v = g.at(Epsilon::new(2f64.powi(lg)).unwrap()).unwrap();
                assert!((v - 1.0 / (n + 1) as f64).abs() < 1e-10, "{kind} n={n} 2^{lg}: {v}");
            }
        }
    }
}

#[test]
fn product_of_tails_is_rejected_over_the_line() {
    let h = embed_heaviside(&Mollifier::bump());
    let g = integrate_gf(&h, f64::NEG_INFINITY, f64::INFINITY, 1e-10);
    assert!(g.at(Epsilon::new(0.1).unwrap()).is_err());
    // but a finite window is fine: ∫_{-1}^{1} H = 1 for symmetric ρ
    let g = integrate_gf(&h, -1.0, 1.0, 1e-12);
    assert!((g.at(Epsilon::new(0.1).unwrap()).unwrap() - 1.0).abs() < 1e-12);
}
