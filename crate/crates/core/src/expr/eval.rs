use thiserror::Error;

use super::{BinOp, Expr, Func, ParamEnv};
use crate::jet::{Jet, JetError};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent must not depend on t")]
    NonConstantExponent,
    #[error(transparent)]
    Jet(JetError),
}

impl From<JetError> for EvalError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::Domain { function, value } => EvalError::Domain { function, value },
            JetError::DivisionByZero => EvalError::DivisionByZero,
            other => EvalError::Jet(other),
        }
    }
}

fn lookup(env: &ParamEnv, name: &str) -> Result<f64, EvalError> {
    env.get(name)
        .ok_or_else(|| EvalError::UnboundParameter(name.to_string()))
}

/// Integral exponents keep negative bases legal; anything else needs a
/// positive base so the jet path (`exp(p ln x)`) agrees.
fn pow_scalar(base: f64, p: f64) -> Result<f64, EvalError> {
    if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
        return powi_by_squaring(base, p as i32);
    }
    if !(base > 0.0) {
        return Err(EvalError::Domain {
            function: "pow",
            value: base,
        });
    }
    Ok((p * base.ln()).exp())
}

// Same multiplication order as `Jet::powi`, so order-0 jets agree bit for bit.
fn powi_by_squaring(x: f64, n: i32) -> Result<f64, EvalError> {
    let mut result = 1.0;
    let mut base = x;
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    if n < 0 {
        if result == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        return Ok(1.0 / result);
    }
    Ok(result)
}

pub fn eval_scalar(e: &Expr, t: f64, env: &ParamEnv) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Param(p) => lookup(env, p)?,
        Expr::Var => t,
        Expr::Neg(a) => -eval_scalar(a, t, env)?,
        Expr::Binary(op, a, b) => {
            let x = eval_scalar(a, t, env)?;
            if *op == BinOp::Pow && b.depends_on_t() {
                return Err(EvalError::NonConstantExponent);
            }
            let y = eval_scalar(b, t, env)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    x / y
                }
                BinOp::Pow => pow_scalar(x, y)?,
            }
        }
        Expr::Call(f, a) => {
            let x = eval_scalar(a, t, env)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Ln | Func::Sqrt if !(x > 0.0) && !(*f == Func::Sqrt && x == 0.0) => {
                    return Err(EvalError::Domain {
                        function: f.name(),
                        value: x,
                    })
                }
                Func::Ln => x.ln(),
                Func::Sqrt => x.sqrt(),
            }
        }
    })
}

/// Evaluates `e` as a Taylor expansion in `t` about `t0`. Parameters become
/// constant jets. An order of zero yields plain values.
pub fn eval_jet(e: &Expr, t0: f64, order: usize, env: &ParamEnv) -> Result<Jet, EvalError> {
    let var = if order == 0 {
        Jet::constant(t0, 0)
    } else {
        Jet::var(t0, order)?
    };
    jet_rec(e, &var, env)
}

fn jet_rec(e: &Expr, var: &Jet, env: &ParamEnv) -> Result<Jet, EvalError> {
    let order = var.order();
    Ok(match e {
        Expr::Num(v) => Jet::constant(*v, order),
        Expr::Param(p) => Jet::constant(lookup(env, p)?, order),
        Expr::Var => var.clone(),
        Expr::Neg(a) => -jet_rec(a, var, env)?,
        Expr::Binary(op, a, b) => {
            let x = jet_rec(a, var, env)?;
            if *op == BinOp::Pow {
                if b.depends_on_t() {
                    return Err(EvalError::NonConstantExponent);
                }
                let p = eval_scalar(b, var.value(), env)?;
                return Ok(x.powf(p)?);
            }
            let y = jet_rec(b, var, env)?;
            match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
                BinOp::Div => x.try_div(&y)?,
                BinOp::Pow => unreachable!(),
            }
        }
        Expr::Call(f, a) => {
            let x = jet_rec(a, var, env)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Ln => x.ln()?,
                Func::Sqrt => {
                    // sqrt(0) has a value but no derivatives.
                    if x.value() == 0.0 && order == 0 {
                        Jet::constant(0.0, 0)
                    } else {
                        x.sqrt()?
                    }
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn env() -> ParamEnv {
        ParamEnv::new().with("a", 2.0)
    }

    #[test]
    fn scalar_examples() {
        let e = parse("a*cos(t)").unwrap();
        assert_eq!(eval_scalar(&e, 0.0, &env()).unwrap(), 2.0);
        assert_eq!(eval_scalar(&parse("t^2").unwrap(), 3.0, &env()).unwrap(), 9.0);
        assert!(matches!(
            eval_scalar(&parse("sqrt(t)").unwrap(), -1.0, &env()),
            Err(EvalError::Domain { function: "sqrt", .. })
        ));
    }

    #[test]
    fn unbound_parameter_is_an_error() {
        assert_eq!(
            eval_scalar(&parse("b*t").unwrap(), 1.0, &env()),
            Err(EvalError::UnboundParameter("b".into()))
        );
        assert_eq!(
            eval_jet(&parse("b*t").unwrap(), 1.0, 3, &env()),
            Err(EvalError::UnboundParameter("b".into()))
        );
    }

    #[test]
    fn jet_examples() {
        let sq = eval_jet(&parse("t*t").unwrap(), 3.0, 2, &env()).unwrap();
        assert_eq!(sq.coeffs(), &[9.0, 6.0, 1.0]);
        let c = eval_jet(&parse("cos(2*t)").unwrap(), 0.0, 4, &env()).unwrap();
        assert_eq!(c.derivative(1), 0.0);
        assert_eq!(c.derivative(2), -4.0);
    }

    #[test]
    fn pow_rules() {
        let e = |s: &str, t: f64| eval_scalar(&parse(s).unwrap(), t, &env());
        assert_eq!(e("t^3", -2.0).unwrap(), -8.0);
        assert!(matches!(e("t^0.5", -2.0), Err(EvalError::Domain { .. })));
        assert_eq!(e("2^t", 1.0), Err(EvalError::NonConstantExponent));
        assert_eq!(e("t^-1", 0.0), Err(EvalError::DivisionByZero));
        assert_eq!(e("1/(t-1)", 1.0), Err(EvalError::DivisionByZero));
        let j = eval_jet(&parse("t^a").unwrap(), -1.5, 3, &env()).unwrap();
        assert_eq!(j.coeffs(), &[2.25, -3.0, 1.0, 0.0]);
    }

    #[test]
    fn order_zero_matches_scalar() {
        let env = env();
        for src in ["sqrt(t)", "ln(t)*a", "t^2.5 - exp(-t)/3"] {
            let e = parse(src).unwrap();
            let s = eval_scalar(&e, 1.3, &env).unwrap();
            let j = eval_jet(&e, 1.3, 0, &env).unwrap();
            assert_eq!(s, j.value(), "{src}");
        }
        let z = parse("sqrt(t)").unwrap();
        assert_eq!(eval_scalar(&z, 0.0, &env).unwrap(), 0.0);
        assert_eq!(eval_jet(&z, 0.0, 0, &env).unwrap().value(), 0.0);
        assert!(eval_jet(&z, 0.0, 1, &env).is_err());
    }
}
