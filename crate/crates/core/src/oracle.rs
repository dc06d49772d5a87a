//! Independent reference computations and random generators for tests.
//!
//! Nothing here reuses the production arithmetic: derivatives come from
//! Richardson-extrapolated central differences, frames from Gram–Schmidt,
//! determinants from the Leibniz permutation sum, and expression values
//! from a shunting-yard evaluator working on the raw text.

use std::f64::consts::PI;

use rand::Rng;

use crate::curve::{Curve, Domain, ExprCurve};
use crate::error::Result;
use crate::expr::ParamEnv;
use crate::frenet::{frenet_apparatus, sample_curve, Tolerances};
use crate::linalg::{Frame4, Vec4};

// ---------------------------------------------------------------------------
// Finite differences

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `δ_h^k f(t) / h^k`, the central difference of order `k`.
pub fn central_difference<F>(f: &F, t: f64, k: usize, h: f64) -> Result<Vec4>
where
    F: Fn(f64) -> Result<Vec4>,
{
    let mut acc = Vec4::ZERO;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let x = t + (k as f64 / 2.0 - j as f64) * h;
        acc = acc + (sign * binomial(k, j)) * f(x)?;
    }
    Ok((1.0 / h.powi(k as i32)) * acc)
}

/// `k`-th derivative by central differences at `h, h/2, h/4`, with two
/// Richardson steps removing the `h²` and `h⁴` error terms.
pub fn richardson_derivative<F>(f: &F, t: f64, k: usize, h: f64) -> Result<Vec4>
where
    F: Fn(f64) -> Result<Vec4>,
{
    let d0 = central_difference(f, t, k, h)?;
    let d1 = central_difference(f, t, k, h / 2.0)?;
    let d2 = central_difference(f, t, k, h / 4.0)?;
    let r0 = (1.0 / 3.0) * (4.0 * d1 - d0);
    let r1 = (1.0 / 3.0) * (4.0 * d2 - d1);
    Ok((1.0 / 15.0) * (16.0 * r1 - r0))
}

/// Default step for [`richardson_derivative`] on curves of unit scale.
pub const RICHARDSON_STEP: f64 = 0.08;

/// `α′ … α⁗` of a curve from point evaluations only.
pub fn fd_derivatives(curve: &dyn Curve, t: f64, h: f64) -> Result<[Vec4; 4]> {
    let f = |x: f64| curve.point(x);
    Ok([
        richardson_derivative(&f, t, 1, h)?,
        richardson_derivative(&f, t, 2, h)?,
        richardson_derivative(&f, t, 3, h)?,
        richardson_derivative(&f, t, 4, h)?,
    ])
}

// ---------------------------------------------------------------------------
// Determinants and products

/// Determinant of a 4×4 matrix by the Leibniz permutation sum.
pub fn leibniz_det(m: [[f64; 4]; 4]) -> f64 {
    let mut total = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let perm = [a, b, c, d];
                    let mut seen = [false; 4];
                    if perm.iter().any(|&p| std::mem::replace(&mut seen[p], true)) {
                        continue;
                    }
                    let mut inversions = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if perm[i] > perm[j] {
                                inversions += 1;
                            }
                        }
                    }
                    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                    total += sign * (0..4).map(|i| m[i][perm[i]]).product::<f64>();
                }
            }
        }
    }
    total
}

/// Determinant of four row vectors.
pub fn det_rows(a: Vec4, b: Vec4, c: Vec4, d: Vec4) -> f64 {
    leibniz_det([a.to_array(), b.to_array(), c.to_array(), d.to_array()])
}

/// Ternary product with coordinates `det[e_i; a; b; c]`.
pub fn cross3_by_det(a: Vec4, b: Vec4, c: Vec4) -> Vec4 {
    let basis = [Vec4::E1, Vec4::E2, Vec4::E3, Vec4::E4];
    let v: Vec<f64> = basis.iter().map(|&e| det_rows(e, a, b, c)).collect();
    Vec4::new(v[0], v[1], v[2], v[3])
}

// ---------------------------------------------------------------------------
// Gram–Schmidt apparatus

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleApparatus {
    pub frame: Frame4,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
    pub speed: f64,
}

fn project_out(v: Vec4, basis: &[Vec4]) -> Vec4 {
    basis.iter().fold(v, |acc, &e| acc - acc.dot(e) * e)
}

fn unit(v: Vec4) -> Vec4 {
    (1.0 / v.norm()) * v
}

/// Frenet apparatus from four derivative vectors by Gram–Schmidt. The last
/// vector is oriented so the frame has determinant +1; the curvatures come
/// from the triangular structure of the derivatives in the frame.
pub fn gram_schmidt_apparatus(d: [Vec4; 4]) -> OracleApparatus {
    // Modified Gram–Schmidt with one re-orthogonalization pass.
    let mut e: Vec<Vec4> = Vec::with_capacity(4);
    for v in d {
        let mut w = project_out(v, &e);
        w = project_out(w, &e);
        e.push(unit(w));
    }
    if det_rows(e[0], e[1], e[2], e[3]) < 0.0 {
        e[3] = -e[3];
    }
    let v = d[0].norm();
    let kappa = e[1].dot(d[1]) / (v * v);
    let tau = e[2].dot(d[2]) / (v.powi(3) * kappa);
    let sigma = e[3].dot(d[3]) / (v.powi(4) * kappa * tau);
    OracleApparatus {
        frame: Frame4::new(e[0], e[1], e[2], e[3]),
        kappa,
        tau,
        sigma,
        speed: v,
    }
}

/// Gram–Schmidt apparatus on finite-difference derivatives.
pub fn fd_apparatus(curve: &dyn Curve, t: f64, h: f64) -> Result<OracleApparatus> {
    Ok(gram_schmidt_apparatus(fd_derivatives(curve, t, h)?))
}

/// Largest deviation of the frame derivative from the Frenet matrix action,
/// with the derivative taken by a central difference of step `h` in `t`.
pub fn frenet_ode_residual(curve: &dyn Curve, t: f64, h: f64, tol: &Tolerances) -> Result<f64> {
    let a = frenet_apparatus(curve, t, tol)?;
    let p = frenet_apparatus(curve, t + h, tol)?;
    let m = frenet_apparatus(curve, t - h, tol)?;
    let ds = 1.0 / (2.0 * h * a.speed);
    let d = |x: Vec4, y: Vec4| ds * (x - y);
    let f = &a.frame;
    let (k, tau, s) = (a.kappa, a.tau, a.sigma);
    let residuals = [
        d(p.frame.t, m.frame.t) - k * f.n,
        d(p.frame.n, m.frame.n) - (tau * f.b - k * f.t),
        d(p.frame.b, m.frame.b) - (s * f.e - tau * f.n),
        d(p.frame.e, m.frame.e) - (-s * f.b),
    ];
    Ok(residuals.iter().map(|r| r.norm()).fold(0.0, f64::max))
}

// ---------------------------------------------------------------------------
// Shunting-yard reference evaluator

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Op(char),
    Neg,
    Func(String),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| format!("bad number {s}"))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let mut j = i;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '(' {
                out.push(Tok::Func(name));
            } else {
                out.push(Tok::Name(name));
            }
        } else if c == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else if "+-*/^".contains(c) {
            // A minus is unary unless it follows an operand.
            let after_operand = matches!(out.last(), Some(Tok::Num(_) | Tok::Name(_) | Tok::RParen));
            if c == '-' && !after_operand {
                out.push(Tok::Neg);
            } else {
                out.push(Tok::Op(c));
            }
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

fn precedence(t: &Tok) -> (u8, bool) {
    // (precedence, right associative)
    match t {
        Tok::Op('+') | Tok::Op('-') => (1, false),
        Tok::Op('*') | Tok::Op('/') => (2, false),
        Tok::Neg => (3, true),
        Tok::Op('^') => (4, true),
        _ => (0, false),
    }
}

fn to_rpn(tokens: Vec<Tok>) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut stack: Vec<Tok> = Vec::new();
    for tok in tokens {
        match tok {
            Tok::Num(_) | Tok::Name(_) => out.push(tok),
            Tok::Func(_) | Tok::LParen | Tok::Neg => stack.push(tok),
            Tok::Op(_) => {
                let (p1, right) = precedence(&tok);
                while let Some(top) = stack.last() {
                    let (p2, _) = precedence(top);
                    let is_op = matches!(top, Tok::Op(_) | Tok::Neg);
                    if is_op && (p2 > p1 || (p2 == p1 && !right)) {
                        out.push(stack.pop().expect("non-empty"));
                    } else {
                        break;
                    }
                }
                stack.push(tok);
            }
            Tok::RParen => {
                loop {
                    match stack.pop() {
                        Some(Tok::LParen) => break,
                        Some(t) => out.push(t),
                        None => return Err("unbalanced )".to_string()),
                    }
                }
                if let Some(Tok::Func(_)) = stack.last() {
                    out.push(stack.pop().expect("non-empty"));
                }
            }
        }
    }
    while let Some(t) = stack.pop() {
        if t == Tok::LParen {
            return Err("unbalanced (".to_string());
        }
        out.push(t);
    }
    Ok(out)
}

/// Evaluates expression text directly, without the production parser.
pub fn reference_eval(text: &str, t: f64, env: &ParamEnv) -> std::result::Result<f64, String> {
    let rpn = to_rpn(tokenize(text)?)?;
    let mut st: Vec<f64> = Vec::new();
    let pop = |st: &mut Vec<f64>| st.pop().ok_or_else(|| "stack underflow".to_string());
    for tok in rpn {
        match tok {
            Tok::Num(v) => st.push(v),
            Tok::Name(n) if n == "t" => st.push(t),
            Tok::Name(n) => st.push(env.get(&n).ok_or(format!("unbound {n}"))?),
            Tok::Neg => {
                let a = pop(&mut st)?;
                st.push(-a);
            }
            Tok::Op(op) => {
                let b = pop(&mut st)?;
                let a = pop(&mut st)?;
                st.push(match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    '^' => {
                        if b.fract() == 0.0 && b.abs() < 1e9 {
                            a.powi(b as i32)
                        } else {
                            a.powf(b)
                        }
                    }
                    _ => unreachable!(),
                });
            }
            Tok::Func(f) => {
                let a = pop(&mut st)?;
                st.push(match f.as_str() {
                    "sin" => a.sin(),
                    "cos" => a.cos(),
                    "exp" => a.exp(),
                    "ln" => a.ln(),
                    "sqrt" => a.sqrt(),
                    other => return Err(format!("unknown function {other}")),
                });
            }
            Tok::LParen | Tok::RParen => return Err("stray parenthesis".to_string()),
        }
    }
    if st.len() != 1 {
        return Err("malformed expression".to_string());
    }
    Ok(st[0])
}

// ---------------------------------------------------------------------------
// Random expressions

const PARAMS: [&str; 3] = ["a", "b", "q"];

/// Environment binding the parameter names the generators use.
pub fn random_env() -> ParamEnv {
    ParamEnv::new().with("a", 1.25).with("b", -0.75).with("q", 0.5)
}

fn literal<R: Rng>(rng: &mut R) -> String {
    match rng.gen_range(0..4) {
        0 => format!("{}", rng.gen_range(0..10)),
        1 => format!("{:.3}", rng.gen_range(0.0..5.0)),
        2 => format!("{}e-1", rng.gen_range(1..30)),
        _ => format!(".{}", rng.gen_range(1..100)),
    }
}

fn ws<R: Rng>(rng: &mut R) -> &'static str {
    [" ", "", "", "  "][rng.gen_range(0..4)]
}

/// Random expression text in the curve grammar, built so that it evaluates
/// to a finite value for moderate `t` (denominators, logarithm and root
/// arguments are kept positive, exponents bounded).
pub fn random_expr_string<R: Rng>(rng: &mut R, depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 | 1 => "t".to_string(),
            2 => PARAMS[rng.gen_range(0..PARAMS.len())].to_string(),
            _ => literal(rng),
        };
    }
    let sub = |rng: &mut R| random_expr_string(rng, depth - 1);
    let w = ws(rng);
    match rng.gen_range(0..11) {
        0 => format!("{}{w}+{w}{}", sub(rng), sub(rng)),
        1 => format!("{}{w}-{w}{}", sub(rng), sub(rng)),
        2 => format!("({}){w}-{w}({})", sub(rng), sub(rng)),
        3 => format!("({}){w}*{w}{}", sub(rng), sub(rng)),
        4 => format!("({}){w}/{w}(1.5 + ({})^2)", sub(rng), sub(rng)),
        5 => format!("-{}", sub(rng)),
        6 => format!("({}){w}^{w}{}", sub(rng), rng.gen_range(0..4)),
        7 => format!(
            "(2 + sin({})){w}^{w}({})",
            sub(rng),
            ["0.5", "-1.5", "a", "-q"][rng.gen_range(0..4)]
        ),
        8 => format!("{}({})", ["sin", "cos"][rng.gen_range(0..2)], sub(rng)),
        9 => format!("exp{w}(sin({}))", sub(rng)),
        _ => format!("{}(1 + ({})^2)", ["ln", "sqrt"][rng.gen_range(0..2)], sub(rng)),
    }
}

/// A random well-defined expression tree, via the text generator.
pub fn random_expr<R: Rng>(rng: &mut R, depth: usize) -> crate::expr::Expr {
    crate::expr::parse(&random_expr_string(rng, depth)).expect("generator emits valid text")
}

/// Relative difference with a unit floor, for comparing evaluations.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// Random curves

/// Parameters of `(a cos pt, a sin pt, b cos qt, b sin qt)` followed by a
/// rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct WCurveParams {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
    pub rotation: [[f64; 4]; 4],
}

impl WCurveParams {
    /// Radius of the hypersphere the curve lies on.
    pub fn radius(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Constant speed `√(a²p² + b²q²)`.
    pub fn speed(&self) -> f64 {
        (self.a * self.p).hypot(self.b * self.q)
    }
}

/// Uniformly random rotation-like orthogonal matrix with det +1.
pub fn random_rotation<R: Rng>(rng: &mut R) -> [[f64; 4]; 4] {
    loop {
        let mut rows: Vec<Vec4> = Vec::new();
        for _ in 0..4 {
            let v = Vec4::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let w = project_out(project_out(v, &rows), &rows);
            if w.norm() < 0.1 {
                break;
            }
            rows.push(unit(w));
        }
        if rows.len() < 4 {
            continue;
        }
        if det_rows(rows[0], rows[1], rows[2], rows[3]) < 0.0 {
            rows[3] = -rows[3];
        }
        return [
            rows[0].to_array(),
            rows[1].to_array(),
            rows[2].to_array(),
            rows[3].to_array(),
        ];
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

/// The explicit W-curve family, optionally rotated, on `[0, 2π]`.
pub fn w_curve(params: &WCurveParams) -> ExprCurve {
    let WCurveParams { a, b, p, q, rotation } = params;
    let base = [
        format!("{}*cos({}*t)", num(*a), num(*p)),
        format!("{}*sin({}*t)", num(*a), num(*p)),
        format!("{}*cos({}*t)", num(*b), num(*q)),
        format!("{}*sin({}*t)", num(*b), num(*q)),
    ];
    let comps: Vec<String> = rotation
        .iter()
        .map(|row| {
            row.iter()
                .zip(&base)
                .map(|(r, c)| format!("({})*{}", num(*r), c))
                .collect::<Vec<_>>()
                .join(" + ")
        })
        .collect();
    ExprCurve::parse(
        [&comps[0], &comps[1], &comps[2], &comps[3]],
        ParamEnv::new(),
        Domain::new(0.0, 2.0 * PI).expect("valid domain"),
    )
    .expect("generated components parse")
}

pub fn random_w_params<R: Rng>(rng: &mut R, rotate: bool) -> WCurveParams {
    let a: f64 = rng.gen_range(0.5..2.0);
    let b: f64 = rng.gen_range(0.5..2.0);
    let p: f64 = rng.gen_range(0.5..3.0);
    let mut q: f64 = rng.gen_range(0.5..3.0);
    while (p - q).abs() <= 0.3 {
        q = rng.gen_range(0.5..3.0);
    }
    let rotation = if rotate {
        random_rotation(rng)
    } else {
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    };
    WCurveParams { a, b, p, q, rotation }
}

pub fn random_w_curve<R: Rng>(rng: &mut R, rotate: bool) -> (ExprCurve, WCurveParams) {
    let params = random_w_params(rng, rotate);
    (w_curve(&params), params)
}

/// A random regular curve with a full Frenet frame on `[0, 2]`: a sum of
/// two trigonometric modes per coordinate plus a small cubic term. Draws
/// are rejected until the curve samples cleanly with curvatures bounded
/// away from zero.
pub fn random_curve<R: Rng>(rng: &mut R) -> ExprCurve {
    let domain = Domain::new(0.0, 2.0).expect("valid domain");
    let tol = Tolerances::default();
    loop {
        let comps: Vec<String> = (0..4)
            .map(|_| {
                let mut terms = Vec::new();
                for _ in 0..2 {
                    terms.push(format!(
                        "{}*{}({}*t + {})",
                        num(rng.gen_range(0.3..1.5)),
                        ["sin", "cos"][rng.gen_range(0..2)],
                        num(rng.gen_range(0.5..2.5)),
                        num(rng.gen_range(-1.0..1.0))
                    ));
                }
                terms.push(format!("{}*t^3", num(rng.gen_range(-0.1..0.1))));
                terms.join(" + ")
            })
            .collect();
        let curve = match ExprCurve::parse([&comps[0], &comps[1], &comps[2], &comps[3]], ParamEnv::new(), domain) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let Ok(s) = sample_curve(&curve, &domain.grid(65), 6, &tol) else {
            continue;
        };
        let kmax = s.samples.iter().map(|x| x.curvature.scale()).fold(0.0, f64::max);
        let ok = s.samples.iter().all(|x| {
            let a = &x.apparatus;
            a.kappa > 0.05 * kmax && a.tau > 0.05 * kmax && a.sigma.abs() > 0.01 * kmax
        });
        if ok {
            return curve;
        }
    }
}
