//! Truncated Taylor series in one variable.
//!
//! A [`Jet`] of order `K` stores `c0..cK` with `ck = f⁽ᵏ⁾(t0) / k!`. All
//! arithmetic is exact up to rounding on the stored coefficients; anything
//! past order `K` is discarded.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Order used by every call site unless stated otherwise: four curve
/// derivatives plus two arclength derivatives of the curvatures.
pub const DEFAULT_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet order must be at least {min}, got {got}")]
    Order { min: usize, got: usize },
    #[error("division by a jet with zero constant term")]
    DivisionByZero,
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    pub fn zero(order: usize) -> Jet {
        Jet::constant(0.0, order)
    }

    /// The independent variable expanded about `t0`.
    pub fn var(t0: f64, order: usize) -> Result<Jet, JetError> {
        if order < 1 {
            return Err(JetError::Order { min: 1, got: order });
        }
        let mut j = Jet::constant(t0, order);
        j.coeffs[1] = 1.0;
        Ok(j)
    }

    /// Builds a jet from Taylor coefficients. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Jet {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { coeffs }
    }

    /// Builds a jet from derivative values `f(t0), f′(t0), …`.
    pub fn from_derivatives(derivs: &[f64]) -> Jet {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 0 {
                    fact *= k as f64;
                }
                d / fact
            })
            .collect();
        Jet::from_coeffs(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `k`-th derivative at the expansion point, `k! · ck`.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        fact * self.coeff(k)
    }

    /// Jet of the derivative; the order drops by one.
    pub fn differentiate(&self) -> Jet {
        if self.order() == 0 {
            return Jet::zero(0);
        }
        let coeffs = (1..self.coeffs.len()).map(|k| k as f64 * self.coeffs[k]).collect();
        Jet { coeffs }
    }

    /// Jet of the antiderivative that takes the value `c0` at the expansion
    /// point; the order rises by one.
    pub fn integrate(&self, c0: f64) -> Jet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(c0);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Jet { coeffs }
    }

    /// Drops coefficients above `order`. Panics if `order` exceeds the
    /// current order.
    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order(), "cannot raise jet order by truncation");
        Jet {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| k * c).collect(),
        }
    }

    pub fn add_scalar(&self, k: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    fn check_same_order(&self, other: &Jet) {
        assert_eq!(self.order(), other.order(), "jet arithmetic requires equal orders");
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_same_order(other);
        let b0 = other.coeffs[0];
        if b0 == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let n = self.coeffs.len();
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc -= other.coeffs[i] * q[k - i];
            }
            q[k] = acc / b0;
        }
        Ok(Jet { coeffs: q })
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0, self.order()).try_div(self)
    }

    /// Simultaneous sine and cosine recurrences.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let w = j as f64 * a[j];
                ss += w * c[k - j];
                cc += w * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = -cc / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut e = vec![0.0; n];
        e[0] = a[0].exp();
        for k in 1..n {
            let acc: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = acc / k as f64;
        }
        Jet { coeffs: e }
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::Domain {
                function: "ln",
                value: a[0],
            });
        }
        let n = a.len();
        let mut l = vec![0.0; n];
        l[0] = a[0].ln();
        for k in 1..n {
            let acc: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - acc / k as f64) / a[0];
        }
        Ok(Jet { coeffs: l })
    }

    /// Square root by solving `r · r = a` coefficient by coefficient.
    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::Domain {
                function: "sqrt",
                value: a[0],
            });
        }
        let n = a.len();
        let mut r = vec![0.0; n];
        r[0] = a[0].sqrt();
        for k in 1..n {
            let acc: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (a[k] - acc) / (2.0 * r[0]);
        }
        Ok(Jet { coeffs: r })
    }

    /// Integer power by repeated squaring; any base is allowed for `n ≥ 0`.
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        let mut result = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            result.recip()
        } else {
            Ok(result)
        }
    }

    /// Constant real power. Integral exponents use [`Jet::powi`]; anything
    /// else goes through `exp(p · ln a)` and needs a positive base.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return self.powi(p as i32);
        }
        let a0 = self.value();
        if !(a0 > 0.0) {
            return Err(JetError::Domain {
                function: "pow",
                value: a0,
            });
        }
        Ok(self.ln()?.scale(p).exp())
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.check_same_order(rhs);
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.check_same_order(rhs);
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Cauchy product truncated at the common order.
impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.check_same_order(rhs);
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * rhs.coeffs[k - i]).sum())
            .collect();
        Jet { coeffs }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Binary jet arithmetic with explicit error reporting.
pub fn jet_arith(a: &Jet, b: &Jet, op: ArithOp) -> Result<Jet, JetError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.try_div(b),
    }
}
