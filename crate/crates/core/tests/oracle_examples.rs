//! Worked examples checked against independent reference computations.

use frenet4_core::classify::{ccr_sphere_quantity, generalized_helix_residual, slant3_residual, sphere_quantity};
use frenet4_core::derived::{bertrand_radius_simplified, BertrandMate, Involute};
use frenet4_core::expr::eval_jet;
use frenet4_core::oracle::{
    cross3_by_det, det_rows, fd_apparatus, frenet_ode_residual, leibniz_det, random_curve, richardson_derivative,
    w_curve, WCurveParams, RICHARDSON_STEP,
};
use frenet4_core::{
    curvature_jets, frenet_apparatus, harmonic_curvatures, parse, Curve, Domain, ExprCurve, Jet, ParamEnv, Result,
    Tolerances, Vec4,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Richardson derivative of a scalar function.
fn d_scalar(f: impl Fn(f64) -> Result<f64>, t: f64, k: usize, h: f64) -> f64 {
    let g = |x: f64| f(x).map(|v| Vec4::new(v, 0.0, 0.0, 0.0));
    richardson_derivative(&g, t, k, h).unwrap().x1
}

fn standard_w() -> ExprCurve {
    ExprCurve::parse(
        ["cos(t)", "sin(t)", "cos(2*t)", "sin(2*t)"],
        ParamEnv::new(),
        Domain::new(0.0, 2.0 * std::f64::consts::PI).unwrap(),
    )
    .unwrap()
}

fn perturbed() -> ExprCurve {
    ExprCurve::parse(
        ["cos(t)", "sin(t)", "cos(2*t)", "sin(2*t) + 0.1*sin(t)"],
        ParamEnv::new(),
        Domain::new(0.0, 2.0 * std::f64::consts::PI).unwrap(),
    )
    .unwrap()
}

#[test]
fn ternary_product_matches_cofactor_expansion() {
    let (a, b, c) = (
        Vec4::new(1.0, 0.0, 1.0, 0.0),
        Vec4::new(0.0, 1.0, 0.0, 1.0),
        Vec4::new(1.0, 1.0, 0.0, 0.0),
    );
    let x = Vec4::cross3(a, b, c);
    // Component i is det[e_i; a; b; c].
    for (i, row) in IDENTITY.iter().enumerate() {
        let e = Vec4::from_array(*row);
        let want = leibniz_det([*row, a.to_array(), b.to_array(), c.to_array()]);
        assert_eq!(x.to_array()[i], want, "component {i}");
        assert_eq!(det_rows(e, a, b, c), want);
    }
    assert_eq!(x, cross3_by_det(a, b, c));
}

#[test]
fn cosine_jet_matches_finite_differences() {
    let j = Jet::var(0.7, 6).unwrap().cos();
    for k in 1..=6 {
        // Larger steps for higher orders keep round-off below truncation error.
        let h = [0.0, 0.05, 0.1, 0.15, 0.15, 0.25, 0.25][k];
        let fd = d_scalar(|x| Ok(x.cos()), 0.7, k, h);
        assert!(
            rel(j.derivative(k), fd) < 1e-7,
            "order {k}: {} vs {fd}",
            j.derivative(k)
        );
    }
}

#[test]
fn w_curve_matches_gram_schmidt_oracle() {
    let curve = standard_w();
    let tol = Tolerances::default();
    let a = frenet_apparatus(&curve, 0.3, &tol).unwrap();
    let o = fd_apparatus(&curve, 0.3, RICHARDSON_STEP).unwrap();
    assert!(rel(a.kappa, o.kappa) < 1e-6, "{} vs {}", a.kappa, o.kappa);
    assert!(rel(a.tau, o.tau) < 1e-6, "{} vs {}", a.tau, o.tau);
    assert!(rel(a.sigma, o.sigma) < 1e-6, "{} vs {}", a.sigma, o.sigma);
    assert!(a.frame.t.distance(o.frame.t) < 1e-6);
    assert!(a.frame.e.distance(o.frame.e) < 1e-6);
    for t in [1.0, 2.5, 4.0] {
        let b = frenet_apparatus(&curve, t, &tol).unwrap();
        assert!(rel(a.kappa, b.kappa) < 1e-12 && rel(a.tau, b.tau) < 1e-12 && rel(a.sigma, b.sigma) < 1e-12);
    }
}

#[test]
fn random_curves_match_gram_schmidt_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = Tolerances::default();
    for _ in 0..4 {
        let curve = random_curve(&mut rng);
        for t in [0.4, 1.0, 1.6] {
            let a = frenet_apparatus(&curve, t, &tol).unwrap();
            let o = fd_apparatus(&curve, t, RICHARDSON_STEP).unwrap();
            for (x, y) in [(a.kappa, o.kappa), (a.tau, o.tau), (a.sigma, o.sigma)] {
                assert!(rel(x, y) < 1e-6, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn frenet_equations_hold_to_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let curve = random_curve(&mut rng);
    let tol = Tolerances::default();
    let r1 = frenet_ode_residual(&curve, 1.0, 1e-2, &tol).unwrap();
    let r2 = frenet_ode_residual(&curve, 1.0, 5e-3, &tol).unwrap();
    assert!(r1 / r2 > 3.5, "{r1} / {r2}");
}

#[test]
fn arclength_derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let curve = random_curve(&mut rng);
    let tol = Tolerances::default();
    let t = 0.9;
    let cj = curvature_jets(&curve, t, &tol).unwrap();
    let v = frenet_apparatus(&curve, t, &tol).unwrap().speed;
    let k = |x: f64| frenet_apparatus(&curve, x, &tol).map(|a| a.kappa);
    let dk = d_scalar(k, t, 1, 0.02) / v;
    assert!(
        rel(cj.kappa.derivative(1), dk) < 1e-5,
        "{} vs {dk}",
        cj.kappa.derivative(1)
    );
    // ρ′ = −κ′/κ².
    let k0 = cj.kappa.value();
    let want = -cj.kappa.derivative(1) / (k0 * k0);
    assert!(rel(cj.rho.derivative(1), want) < 1e-10);
    // Constant curvatures for a W-curve.
    let w = curvature_jets(&standard_w(), 0.8, &tol).unwrap();
    assert!(w.kappa.derivative(1).abs() < 1e-8 && w.tau.derivative(1).abs() < 1e-8);
}

/// κ, τ, σ and speed as scalar functions of t, plus derivatives in s built
/// by central differences in t.
struct FdCurvatures<'a> {
    curve: &'a dyn Curve,
    tol: Tolerances,
}

impl FdCurvatures<'_> {
    fn values(&self, t: f64) -> Result<[f64; 4]> {
        let a = frenet_apparatus(self.curve, t, &self.tol)?;
        Ok([a.kappa, a.tau, a.sigma, a.speed])
    }

    /// First and second s-derivatives of `g(κ, τ, σ)` at `t`.
    fn ds(&self, g: impl Fn([f64; 4]) -> f64 + Copy, t: f64) -> (f64, f64, f64) {
        let f = |x: f64| self.values(x).map(g);
        let h = 0.02;
        let (g0, g1, g2) = (f(t).unwrap(), d_scalar(f, t, 1, h), d_scalar(f, t, 2, h));
        let v = self.values(t).unwrap()[3];
        let v1 = d_scalar(|x| self.values(x).map(|a| a[3]), t, 1, h);
        (g0, g1 / v, (g2 * v - g1 * v1) / v.powi(3))
    }
}

#[test]
fn harmonic_curvatures_match_finite_differences() {
    let curve = perturbed();
    let tol = Tolerances::default();
    let fdc = FdCurvatures { curve: &curve, tol };
    for t in [0.5, 1.7, 3.0] {
        let cj = curvature_jets(&curve, t, &tol).unwrap();
        let hc = harmonic_curvatures(&cj, &tol).unwrap();
        let [k, _, s, _] = fdc.values(t).unwrap();
        let sigma_s = fdc.ds(|a| a[2], t).1;

        let (h1, h1_s, h1_ss) = fdc.ds(|a| a[0] / a[1], t);
        assert!(rel(hc.h1.value(), h1) < 1e-12);
        let h2 = h1_s / s;
        assert!(rel(hc.h2.value(), h2) < 1e-5, "{} vs {h2}", hc.h2.value());
        let h2_s = (h1_ss * s - h1_s * sigma_s) / (s * s);
        let gh = (h2_s + s * h1).abs();
        let got = generalized_helix_residual(&cj, &hc);
        assert!((got - gh).abs() < 1e-5 * cj.scale(), "{got} vs {gh}");

        let (a1, a1_s, a1_ss) = fdc.ds(|a| a[2] / a[1], t);
        let kappa_s = fdc.ds(|a| a[0], t).1;
        let a2_s = (a1_ss * k - a1_s * kappa_s) / (k * k);
        let sl = (a2_s + s * a1).abs();
        let got = slant3_residual(&cj, &hc);
        assert!((got - sl).abs() < 1e-5 * cj.scale(), "{got} vs {sl}");
    }
}

#[test]
fn helix_residuals_take_closed_values() {
    let curve = standard_w();
    let tol = Tolerances::default();
    let cj = curvature_jets(&curve, 1.2, &tol).unwrap();
    let hc = harmonic_curvatures(&cj, &tol).unwrap();
    let (k, t, s) = (cj.kappa.value(), cj.tau.value(), cj.sigma.value());
    assert!(rel(generalized_helix_residual(&cj, &hc), (s * k / t).abs()) < 1e-9);
    assert!(rel(slant3_residual(&cj, &hc), (s * s / t).abs()) < 1e-9);
    assert!(hc.h2.value().abs() < 1e-9 && hc.h2_anti.value().abs() < 1e-9);
    let r2 = sphere_quantity(&cj, &tol).unwrap();
    let want = (t * t + s * s) / (k * s).powi(2);
    assert!(rel(r2, want) < 1e-9);
    // ‖α‖² = 2 on this curve.
    assert!(rel(r2, 2.0) < 1e-9, "{r2}");
}

#[test]
fn w_family_sphere_radius_is_the_norm() {
    let params = WCurveParams {
        a: 1.3,
        b: 0.6,
        p: 0.8,
        q: 1.9,
        rotation: IDENTITY,
    };
    let curve = w_curve(&params);
    let tol = Tolerances::default();
    let cj = curvature_jets(&curve, 2.0, &tol).unwrap();
    let r = sphere_quantity(&cj, &tol).unwrap().sqrt();
    assert!(rel(r, (1.3f64.powi(2) + 0.6f64.powi(2)).sqrt()) < 1e-6);
}

#[test]
fn ccr_sphere_formula_reduces_for_constant_f() {
    let tol = Tolerances::default();
    let (f, a, b) = (0.64, 1.5, 0.7);
    let got = ccr_sphere_quantity(&Jet::constant(f, 3), a, b, &tol).unwrap();
    assert!(rel(got, f + f * a * a / (b * b)) < 1e-15);
}

#[test]
fn bertrand_mate_matches_gram_schmidt_oracle() {
    let tol = Tolerances::default();
    for lambda in [0.1, 0.35] {
        let mate = BertrandMate::new(standard_w(), lambda, &tol).unwrap();
        for t in [0.3, 2.0] {
            let cf = mate.closed_form(t).unwrap();
            let o = fd_apparatus(&mate, t, RICHARDSON_STEP).unwrap();
            assert!(rel(cf.kappa, o.kappa) < 1e-6, "{} vs {}", cf.kappa, o.kappa);
            // Gram–Schmidt makes τ positive; the closed form carries the sign of M/L.
            assert!(rel(cf.tau.abs(), o.tau) < 1e-6, "{} vs {}", cf.tau, o.tau);
            assert!(rel(cf.sigma.abs(), o.sigma.abs()) < 1e-6, "{} vs {}", cf.sigma, o.sigma);
            for (x, y) in [
                (cf.frame.t, o.frame.t),
                (cf.frame.n, o.frame.n),
                (cf.frame.b, o.frame.b),
                (cf.frame.e, o.frame.e),
            ] {
                assert!(x.distance(y).min(x.distance(-y)) < 1e-6);
            }
            // N_ξ tilts toward E by λτσ, so ⟨N_ξ, N⟩ = P/L rather than ±1.
            let d = frenet_apparatus(&standard_w(), t, &tol).unwrap();
            let p = d.kappa - lambda * (d.kappa * d.kappa + d.tau * d.tau);
            let want = p / cf.coefficients.l;
            assert!((o.frame.n.dot(d.frame.n).abs() - want.abs()).abs() < 1e-7);
        }
    }
}

#[test]
fn bertrand_mate_at_unit_offset() {
    // λ = 1/κ puts the mate on the branch 1 − λκ = 0.
    let tol = Tolerances::default();
    let base = standard_w();
    let k = frenet_apparatus(&base, 0.0, &tol).unwrap().kappa;
    let mate = BertrandMate::new(base, 1.0 / k, &tol).unwrap();
    let cf = mate.closed_form(1.0).unwrap();
    let o = fd_apparatus(&mate, 1.0, RICHARDSON_STEP).unwrap();
    assert!(cf.coefficients.k > 0.0);
    assert!(rel(cf.kappa, o.kappa) < 1e-6, "{} vs {}", cf.kappa, o.kappa);
}

#[test]
fn bertrand_radius_simplification() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let (k, t, s) = (
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.3..2.0),
        );
        let lambda: f64 = rng.gen_range(-0.5..0.5);
        let ap = frenet4_core::derived::BertrandCoefficients::new(k, t, s, lambda);
        if ap.k < 0.01 || ap.l.abs() < 0.01 {
            continue;
        }
        let (kx, tx, sx) = (ap.l / (ap.k * ap.k), ap.m / (ap.k * ap.k * ap.l), k * s / ap.l);
        let r = (tx * tx + sx * sx).sqrt() / (kx * sx);
        assert!(rel(r.abs(), bertrand_radius_simplified(k, t, s, lambda)) < 1e-9);
    }
}

#[test]
fn involute_is_tangent_to_the_normals() {
    let tol = Tolerances::default();
    let base = standard_w();
    let l = base.domain().t_max * 5f64.sqrt();
    let inv = Involute::new(base, 2.0 * l, &tol).unwrap();
    let base = standard_w();
    for t in [0.5, 3.0] {
        let o = fd_apparatus(&inv, t, RICHARDSON_STEP).unwrap();
        let n = frenet_apparatus(&base, t, &tol).unwrap().frame.n;
        assert!(o.frame.t.distance(n).min(o.frame.t.distance(-n)) < 1e-7);
        // ⟨ξ − δ, T⟩ = c − s.
        let s = inv.base_arclength(t).unwrap();
        let d = inv.point(t).unwrap() - base.point(t).unwrap();
        let tt = frenet_apparatus(&base, t, &tol).unwrap().frame.t;
        assert!((d.dot(tt) - (2.0 * l - s)).abs() < 1e-9);
        let cf = inv.closed_form(t).unwrap();
        assert!(rel(cf.kappa, o.kappa) < 1e-6, "{} vs {}", cf.kappa, o.kappa);
        assert!(rel(cf.tau.abs(), o.tau.abs()) < 1e-6, "{} vs {}", cf.tau, o.tau);
    }
}

#[test]
fn expression_jets_from_text() {
    let env = ParamEnv::new();
    let j = eval_jet(&parse("t*t").unwrap(), 3.0, 2, &env).unwrap();
    assert_eq!(j.coeffs(), &[9.0, 6.0, 1.0]);
    let j = eval_jet(&parse("cos(2*t)").unwrap(), 0.0, 2, &env).unwrap();
    assert_eq!(j.derivative(1), 0.0);
    assert!((j.derivative(2) + 4.0).abs() < 1e-15);
}
