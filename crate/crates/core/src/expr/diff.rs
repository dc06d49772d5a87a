//! Symbolic differentiation with light constant folding.
//!
//! Used to write derived curves (offsets along the normal, involutes) back
//! out as plain expressions, so the result stays inside the grammar.

use super::{BinOp, Expr, Func};

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        _ => None,
    }
}

// Folding constructors rather than operator impls; guards read better than
// float literal patterns here.
#[allow(clippy::should_implement_trait, clippy::redundant_guards)]
impl Expr {
    pub fn add(a: Expr, b: Expr) -> Expr {
        match (as_num(&a), as_num(&b)) {
            (Some(x), Some(y)) => Expr::Num(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::binary(BinOp::Add, a, b),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (as_num(&a), as_num(&b)) {
            (Some(x), Some(y)) => Expr::Num(x - y),
            (Some(x), _) if x == 0.0 => Expr::negate(b),
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::binary(BinOp::Sub, a, b),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (as_num(&a), as_num(&b)) {
            (Some(x), Some(y)) => Expr::Num(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Num(0.0),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            (Some(x), _) if x == -1.0 => Expr::negate(b),
            (_, Some(y)) if y == -1.0 => Expr::negate(a),
            _ => Expr::binary(BinOp::Mul, a, b),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (as_num(&a), as_num(&b)) {
            (Some(x), _) if x == 0.0 => Expr::Num(0.0),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::binary(BinOp::Div, a, b),
        }
    }

    pub fn pow(a: Expr, p: Expr) -> Expr {
        match as_num(&p) {
            Some(y) if y == 1.0 => a,
            Some(y) if y == 0.0 => Expr::Num(1.0),
            _ => Expr::binary(BinOp::Pow, a, p),
        }
    }

    /// Negation that folds literals and double negation. Negative literals
    /// are kept as `Neg(Num)` so the printed form parses back identically.
    pub fn negate(a: Expr) -> Expr {
        match a {
            Expr::Num(v) if v == 0.0 => Expr::Num(0.0),
            Expr::Neg(inner) => *inner,
            other => Expr::neg(other),
        }
    }

    /// Derivative with respect to `t`. Exponents of `^` must not depend on
    /// `t`, matching the evaluator.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Param(_) => Expr::Num(0.0),
            Expr::Var => Expr::Num(1.0),
            Expr::Neg(a) => Expr::negate(a.derivative()),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.as_ref(), b.as_ref());
                match op {
                    BinOp::Add => Expr::add(a.derivative(), b.derivative()),
                    BinOp::Sub => Expr::sub(a.derivative(), b.derivative()),
                    BinOp::Mul => Expr::add(
                        Expr::mul(a.derivative(), b.clone()),
                        Expr::mul(a.clone(), b.derivative()),
                    ),
                    BinOp::Div => Expr::div(
                        Expr::sub(
                            Expr::mul(a.derivative(), b.clone()),
                            Expr::mul(a.clone(), b.derivative()),
                        ),
                        Expr::pow(b.clone(), Expr::Num(2.0)),
                    ),
                    BinOp::Pow => {
                        // d(a^p) = p a^(p-1) a'
                        let reduced = match as_num(b) {
                            Some(p) => Expr::Num(p - 1.0),
                            None => Expr::sub(b.clone(), Expr::Num(1.0)),
                        };
                        Expr::mul(Expr::mul(b.clone(), Expr::pow(a.clone(), reduced)), a.derivative())
                    }
                }
            }
            Expr::Call(f, a) => {
                let inner = a.derivative();
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, (**a).clone()),
                    Func::Cos => Expr::negate(Expr::call(Func::Sin, (**a).clone())),
                    Func::Exp => self.clone(),
                    Func::Ln => Expr::div(Expr::Num(1.0), (**a).clone()),
                    Func::Sqrt => Expr::div(Expr::Num(0.5), self.clone()),
                };
                Expr::mul(outer, inner)
            }
        }
    }
}
