//! Scalar expressions of one free variable `t`.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | name | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp | ln | sqrt
//! ```
//!
//! `t` is the variable; any other name is a parameter looked up in a
//! [`ParamEnv`]. `pi` is predefined. Numbers are decimal literals with an
//! optional exponent. There is no implicit multiplication.

mod diff;
mod eval;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use eval::{eval_jet, eval_scalar, EvalError};
pub use parse::{parse, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Param(String),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    /// Whether the expression mentions the variable `t`.
    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Param(_) => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_t(),
            Expr::Binary(_, a, b) => a.depends_on_t() || b.depends_on_t(),
        }
    }

    /// Parameter names referenced by the expression, sorted.
    pub fn params(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Param(p) => out.push(p.clone()),
                Expr::Num(_) | Expr::Var => {}
                Expr::Neg(e) | Expr::Call(_, e) => walk(e, out),
                Expr::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Replaces every occurrence of `t` with `replacement`.
    pub fn substitute_var(&self, replacement: &Expr) -> Expr {
        match self {
            Expr::Var => replacement.clone(),
            Expr::Num(_) | Expr::Param(_) => self.clone(),
            Expr::Neg(e) => Expr::neg(e.substitute_var(replacement)),
            Expr::Call(f, e) => Expr::call(*f, e.substitute_var(replacement)),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.substitute_var(replacement), b.substitute_var(replacement)),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Param(_) | Expr::Var => 1,
            Expr::Neg(e) | Expr::Call(_, e) => 1 + e.size(),
            Expr::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    // Binding strength used by the printer: 1 additive, 2 multiplicative,
    // 3 unary minus, 4 power, 5 atoms.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Num(v) if v.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn fmt_operand(e: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimum parentheses needed to parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Param(p) => f.write_str(p),
            Expr::Var => f.write_str("t"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                fmt_operand(e, 3, f)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Binary(op, a, b) => {
                let (left_min, right_min) = match op {
                    BinOp::Add | BinOp::Sub => (1, 2),
                    BinOp::Mul | BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 3),
                };
                fmt_operand(a, left_min, f)?;
                f.write_str(op.symbol())?;
                fmt_operand(b, right_min, f)
            }
        }
    }
}

/// Named numeric parameters. `pi` is always bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamEnv {
    values: BTreeMap<String, f64>,
}

impl Default for ParamEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl ParamEnv {
    pub fn new() -> Self {
        let mut values = BTreeMap::new();
        values.insert("pi".to_string(), std::f64::consts::PI);
        Self { values }
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}
