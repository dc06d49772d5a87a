//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p frenet4-cli --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use frenet4_core::classify::{
    ccr_sphere_quantities, classify, generalized_helix_residual, is_ccr, is_helix, slant3_residual, sphere_quantities,
};
use frenet4_core::derived::{bertrand_apparatus, bertrand_radius_simplified, BertrandCoefficients, BertrandMate};
use frenet4_core::expr::eval_scalar;
use frenet4_core::oracle::{
    fd_apparatus, frenet_ode_residual, random_curve, random_env, random_expr_string, random_w_curve, reference_eval,
    rel_diff, RICHARDSON_STEP,
};
use frenet4_core::pipeline::{self, default_involute_c};
use frenet4_core::theorems::linear_fit;
use frenet4_core::{harmonic_curvatures, parse, sample_curve, Curve, CurveSpecFile, ExprCurve, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances, fixed by the acceptance criteria.
const FRAME_TOL: f64 = 1e-9;
const ODE_RATIO: f64 = 3.5;
const ORACLE_TOL: f64 = 1e-6;
const RADIUS_TOL: f64 = 1e-6;
const SPHERE_IDENTITY_TOL: f64 = 1e-8;
const BERTRAND_TOL: f64 = 1e-6;
const MATE_CONSTANCY_TOL: f64 = 1e-7;
const MATE_RADIUS_TOL: f64 = 1e-9;
const MATE_MIN_KL: f64 = 0.01;
const TANGENCY_TOL: f64 = 1e-7;
const RATIO_TOL: f64 = 1e-8;
const A1_TOL: f64 = 1e-7;
const FIT_R2: f64 = 0.999;
const PARSER_TOL: f64 = 1e-12;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn spec_for(curve: &ExprCurve, samples: usize) -> CurveSpecFile {
    let mut like =
        CurveSpecFile::from_json(r#"{"components": ["t", "t", "t", "t"], "domain": {"t_min": 0, "t_max": 1}}"#)
            .expect("template spec");
    like.samples = samples;
    CurveSpecFile::from_curve(curve, &like)
}

fn frame_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let tol = Tolerances::default();
    let (mut orth, mut det) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let curve = random_curve(&mut rng);
        let s = sample_curve(&curve, &curve.domain().grid(256), 6, &tol).expect("regular curve");
        for a in s.apparatus() {
            orth = orth.max(a.frame.orthonormality_error());
            det = det.max((a.frame.det() - 1.0).abs());
        }
    }
    outcome(
        orth < FRAME_TOL && det < FRAME_TOL,
        format!(
            "20 curves x 256 samples: max orthonormality error {orth:.2e}, max |det - 1| {det:.2e} (tol {FRAME_TOL:e})"
        ),
    )
}

fn frenet_ode() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let tol = Tolerances::default();
    let mut worst = f64::INFINITY;
    for _ in 0..5 {
        let curve = random_curve(&mut rng);
        for t in [0.3, 0.7, 1.0, 1.3, 1.7] {
            let r1 = frenet_ode_residual(&curve, t, 1e-2, &tol).unwrap();
            let r2 = frenet_ode_residual(&curve, t, 5e-3, &tol).unwrap();
            worst = worst.min(r1 / r2);
        }
    }
    outcome(
        worst >= ODE_RATIO,
        format!("residual ratio under step halving, min over 25 points {worst:.3} (need >= {ODE_RATIO})"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let tol = Tolerances::default();
    let mut curves: Vec<ExprCurve> = (0..7).map(|_| random_curve(&mut rng)).collect();
    curves.extend((0..3).map(|_| random_w_curve(&mut rng, true).0));
    let mut worst = 0.0f64;
    for curve in &curves {
        let d = curve.domain();
        for t in d.grid(7).into_iter().skip(1).take(5) {
            let a = frenet4_core::frenet_apparatus(curve, t, &tol).unwrap();
            let o = fd_apparatus(curve, t, RICHARDSON_STEP).unwrap();
            worst = worst
                .max(rel(a.kappa, o.kappa))
                .max(rel(a.tau, o.tau))
                .max(rel(a.sigma, o.sigma));
        }
    }
    outcome(
        worst < ORACLE_TOL,
        format!("10 curves: max relative difference of kappa, tau, sigma vs Gram-Schmidt oracle {worst:.2e} (tol {ORACLE_TOL:e})"),
    )
}

fn helix_corollaries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let tol = Tolerances::default();
    let (mut gh, mut sl) = (f64::INFINITY, f64::INFINITY);
    let (mut radius_err, mut family_err) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let (curve, params) = random_w_curve(&mut rng, true);
        let s = sample_curve(&curve, &curve.domain().grid(64), 6, &tol).unwrap();
        for x in &s.samples {
            let cj = &x.curvature;
            let hc = harmonic_curvatures(cj, &tol).unwrap();
            let (k, t, sg) = (cj.kappa.value(), cj.tau.value(), cj.sigma.value());
            gh = gh.min(generalized_helix_residual(cj, &hc) / ((sg * k / t).abs() / 2.0));
            sl = sl.min(slant3_residual(cj, &hc) / ((sg * sg / t).abs() / 2.0));
        }
        let report = classify(&s.samples, &tol).unwrap();
        let r = report.spherical.radius;
        let h = &report.is_helix;
        let closed = (h.tau.hypot(h.sigma) / (h.kappa * h.sigma)).abs();
        radius_err = radius_err.max(rel(r, closed));
        family_err = family_err.max(rel(r, params.radius()));
    }
    outcome(
        gh >= 1.0 && sl >= 1.0 && radius_err < RADIUS_TOL && family_err < RADIUS_TOL,
        format!(
            "10 W-curves: min residual/bound {gh:.3} (H2'+sigma H1), {sl:.3} (slant); radius vs closed form {radius_err:.2e}, vs sqrt(a^2+b^2) {family_err:.2e} (tol {RADIUS_TOL:e})"
        ),
    )
}

fn sphere_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..3 {
        let (curve, _) = random_w_curve(&mut rng, true);
        let spec = spec_for(&curve, 48);
        let base = pipeline::sample_spec(&spec, &curve).unwrap();
        let c = default_involute_c(&spec).unwrap();
        let inv = pipeline::involute(&spec, c).unwrap();
        for s in [&base.samples, &inv.involute.samples] {
            let ccr = is_ccr(s, &tol).unwrap();
            let q3 = sphere_quantities(s, &tol).unwrap();
            let q6 = ccr_sphere_quantities(s, ccr.a, ccr.b, &tol).unwrap();
            for (x, y) in q3.iter().zip(&q6) {
                worst = worst.max(rel(*x, *y));
                count += 1;
            }
        }
    }
    outcome(
        worst < SPHERE_IDENTITY_TOL,
        format!("{count} samples on 3 helices and their involutes: max relative gap between the two sphere formulas {worst:.2e} (tol {SPHERE_IDENTITY_TOL:e})"),
    )
}

fn bertrand_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let tol = Tolerances::default();
    let (mut curv, mut frame, mut constancy, mut radius) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut pairs = 0;
    while pairs < 10 {
        let (curve, _) = random_w_curve(&mut rng, true);
        let lambda: f64 = rng.gen_range(-1.0..1.0);
        let a = frenet4_core::frenet_apparatus(&curve, 0.0, &tol).unwrap();
        let co = BertrandCoefficients::new(a.kappa, a.tau, a.sigma, lambda);
        if co.k <= MATE_MIN_KL || co.l <= MATE_MIN_KL {
            continue;
        }
        pairs += 1;
        let mate = BertrandMate::new(curve.clone(), lambda, &tol).unwrap();
        let grid = curve.domain().grid(64);
        let base = sample_curve(&curve, &grid, 6, &tol).unwrap();
        let ms = sample_curve(&mate, &grid, 6, &tol).unwrap();
        for (b, m) in base.samples.iter().zip(&ms.samples) {
            let cf = bertrand_apparatus(&b.apparatus, lambda, &tol).unwrap();
            let n = &m.apparatus;
            for (x, y) in [(cf.kappa, n.kappa), (cf.tau, n.tau), (cf.sigma, n.sigma)] {
                curv = curv.max(rel(x.abs(), y.abs()));
            }
            for (x, y) in cf.frame.vectors().iter().zip(n.frame.vectors()) {
                frame = frame.max(x.distance_up_to_sign(y).0);
            }
            let simplified = bertrand_radius_simplified(a.kappa, a.tau, a.sigma, lambda);
            radius = radius.max(rel(cf.sphere_radius().abs(), simplified.abs()));
        }
        constancy = constancy.max(is_helix(&ms.samples, &tol).unwrap().check.residual_max);
    }
    let pass =
        curv < BERTRAND_TOL && frame < BERTRAND_TOL && constancy < MATE_CONSTANCY_TOL && radius < MATE_RADIUS_TOL;
    outcome(
        pass,
        format!(
            "10 (helix, lambda) pairs: curvatures {curv:.2e}, frame up to sign {frame:.2e} (tol {BERTRAND_TOL:e}); mate constancy {constancy:.2e} (tol {MATE_CONSTANCY_TOL:e}); radius identity {radius:.2e} (tol {MATE_RADIUS_TOL:e})"
        ),
    )
}

fn involute_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let tol = Tolerances::default();
    let (mut tangency, mut ratio, mut a1, mut r2_min) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    let (mut slope_err, mut slope_min) = (0.0f64, f64::INFINITY);
    let mut a2_detected = 0;
    let helices = 5;
    for _ in 0..helices {
        let (curve, _) = random_w_curve(&mut rng, true);
        let spec = spec_for(&curve, 64);
        let run = pipeline::involute(&spec, default_involute_c(&spec).unwrap()).unwrap();
        let h = &run.report.base_helix;
        let r2 = h.kappa * h.kappa + h.tau * h.tau;
        let (want_t, want_s) = (h.tau * h.sigma / r2, -h.sigma * h.kappa / r2);
        for ((b, x), s_xi) in run.base.samples.iter().zip(&run.involute.samples).zip(&run.s_xi) {
            let a = &x.apparatus;
            tangency = tangency.max(a.frame.t.distance_up_to_sign(b.apparatus.frame.n).0);
            // σ_ξ carries the orientation sign; compare magnitudes.
            ratio = ratio
                .max(rel(a.tau / a.kappa, want_t))
                .max(rel((a.sigma / a.kappa).abs(), want_s.abs()));
            a1 = a1.max(rel(a.kappa * s_xi.sqrt(), run.report.constants.a1));
        }
        let q = sphere_quantities(&run.involute.samples, &tol).unwrap();
        let fit = linear_fit(&run.s_xi, &q);
        r2_min = r2_min.min(fit.r2);
        slope_min = slope_min.min(fit.slope.abs());
        slope_err = slope_err.max(rel(fit.slope, run.report.constants.sphere_slope()));
        if run.report.constants_check.flagged.iter().any(|f| f == "A2_printed") {
            a2_detected += 1;
        }
    }
    let pass = tangency < TANGENCY_TOL
        && ratio < RATIO_TOL
        && a1 < A1_TOL
        && r2_min > FIT_R2
        && slope_min > 0.0
        && slope_err < ORACLE_TOL
        && a2_detected > 0;
    outcome(
        pass,
        format!(
            "{helices} helices: T_xi vs N {tangency:.2e} (tol {TANGENCY_TOL:e}); ccr ratios {ratio:.2e} (tol {RATIO_TOL:e}); kappa_xi sqrt(s_xi) vs A1 {a1:.2e} (tol {A1_TOL:e}); sphere fit R^2 min {r2_min:.6}, |slope| min {slope_min:.3e}, slope vs closed form {slope_err:.2e}; printed A2 flagged on {a2_detected}/{helices}"
        ),
    )
}

fn lambda_zero() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let mut worst = 0.0f64;
    let mut signs = Vec::new();
    for _ in 0..3 {
        let (curve, _) = random_w_curve(&mut rng, true);
        let run = pipeline::bertrand(&spec_for(&curve, 64), 0.0).unwrap();
        for e in &run.report.discrepancy.entries {
            worst = worst.max(e.max_difference);
            if e.sign == Some(-1) && !signs.contains(&e.name) {
                signs.push(e.name.clone());
            }
        }
    }
    outcome(
        worst == 0.0,
        format!(
            "3 helices at lambda = 0: max discrepancy {worst:e}; sign-tracked quantities with opposite closed-form sign: {signs:?}"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let spec = root.join("tests/data/w_curve.json");
    let spec = spec.to_str().unwrap();
    let runs: [(&str, &[&str]); 7] = [
        ("analyze.csv", &["analyze"]),
        ("analyze.json", &["analyze", "--format", "json"]),
        ("classify.json", &["classify"]),
        ("bertrand.json", &["bertrand", "--lambda", "0.1"]),
        ("bertrand.csv", &["bertrand", "--lambda", "0.1", "--format", "csv"]),
        ("involute.json", &["involute"]),
        ("verify.json", &["verify"]),
    ];
    let mut failures = Vec::new();
    for (golden, cmd) in runs {
        let mut args = vec![cmd[0], spec];
        args.extend(&cmd[1..]);
        args.extend(["--samples", "16"]);
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_frenet4"))
                .args(&args)
                .output()
                .expect("binary runs")
        };
        let (a, b) = (run(), run());
        if !a.status.success() || a.stdout != b.stdout {
            failures.push(format!("{golden}: not deterministic"));
            continue;
        }
        match std::fs::read(root.join("tests/golden").join(golden)) {
            Ok(want) if want == a.stdout => {}
            Ok(_) => failures.push(format!("{golden}: differs from golden")),
            Err(e) => failures.push(format!("{golden}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "5 commands, 7 outputs: repeated runs byte-identical and equal to golden files".into()
        } else {
            failures.join("; ")
        },
    )
}

fn parser() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let env = random_env();
    let (mut worst, mut round_trip_failures) = (0.0f64, 0);
    for _ in 0..500 {
        let text = random_expr_string(&mut rng, 5);
        let t: f64 = rng.gen_range(-1.5..1.5);
        let e = parse(&text).expect("grammar-sampled string parses");
        if parse(&e.to_string()).ok().as_ref() != Some(&e) {
            round_trip_failures += 1;
        }
        let ours = eval_scalar(&e, t, &env).unwrap();
        let reference = reference_eval(&text, t, &env).unwrap();
        worst = worst.max(rel_diff(ours, reference));
    }
    outcome(
        round_trip_failures == 0 && worst <= PARSER_TOL,
        format!("500 expressions: {round_trip_failures} round-trip failures, max relative difference vs shunting-yard {worst:.2e} (tol {PARSER_TOL:e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("frame validity", frame_validity),
        ("Frenet equations, second order", frenet_ode),
        ("closed formulas vs Gram-Schmidt oracle", oracle_equivalence),
        ("helix corollaries", helix_corollaries),
        ("ccr sphere identity", sphere_identity),
        ("Bertrand mates", bertrand_suite),
        ("involutes", involute_suite),
        ("lambda = 0 identity", lambda_zero),
        ("CLI determinism and golden files", cli_determinism),
        ("parser", parser),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name}: {} [{:.1}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
