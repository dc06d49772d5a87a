//! Parametric curves `α: [t_min, t_max] → E⁴`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{eval_jet, eval_scalar, parse, Expr, ParamEnv};
use crate::jet::Jet;
use crate::linalg::{cofactor_cross, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub t_min: f64,
    pub t_max: f64,
}

impl Domain {
    pub fn new(t_min: f64, t_max: f64) -> Result<Domain> {
        if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "domain requires finite t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        Ok(Domain { t_min, t_max })
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// `n` equally spaced parameter values including both ends.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "a grid needs at least two points");
        let h = (self.t_max - self.t_min) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.t_max
                } else {
                    self.t_min + i as f64 * h
                }
            })
            .collect()
    }
}

/// Four coordinate jets sharing an expansion point and order.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVec4(pub [Jet; 4]);

impl JetVec4 {
    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    pub fn value(&self) -> Vec4 {
        Vec4::new(
            self.0[0].value(),
            self.0[1].value(),
            self.0[2].value(),
            self.0[3].value(),
        )
    }

    /// `k`-th derivative vector at the expansion point.
    pub fn derivative_at(&self, k: usize) -> Vec4 {
        Vec4::new(
            self.0[0].derivative(k),
            self.0[1].derivative(k),
            self.0[2].derivative(k),
            self.0[3].derivative(k),
        )
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> JetVec4 {
        JetVec4([f(&self.0[0]), f(&self.0[1]), f(&self.0[2]), f(&self.0[3])])
    }

    pub fn differentiate(&self) -> JetVec4 {
        self.map(Jet::differentiate)
    }

    pub fn truncate(&self, order: usize) -> JetVec4 {
        self.map(|j| j.truncate(order))
    }

    pub fn dot(&self, other: &JetVec4) -> Jet {
        let mut acc = &self.0[0] * &other.0[0];
        for i in 1..4 {
            acc = &acc + &(&self.0[i] * &other.0[i]);
        }
        acc
    }

    pub fn scale(&self, k: &Jet) -> JetVec4 {
        self.map(|c| c * k)
    }

    pub fn scale_f64(&self, k: f64) -> JetVec4 {
        self.map(|c| c.scale(k))
    }

    pub fn add(&self, other: &JetVec4) -> JetVec4 {
        JetVec4(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn sub(&self, other: &JetVec4) -> JetVec4 {
        JetVec4(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn cross3(a: &JetVec4, b: &JetVec4, c: &JetVec4) -> JetVec4 {
        JetVec4(cofactor_cross(&a.0, &b.0, &c.0))
    }
}

/// Anything that yields Taylor expansions of its coordinates.
pub trait Curve: Send + Sync {
    fn domain(&self) -> Domain;

    /// Coordinate jets of the given order about parameter `t`.
    fn jet(&self, t: f64, order: usize) -> Result<JetVec4>;

    fn point(&self, t: f64) -> Result<Vec4> {
        Ok(self.jet(t, 0)?.value())
    }

    fn speed(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t, 1)?.derivative_at(1).norm())
    }

    /// Typical speed, used to make the regularity threshold scale-free.
    fn speed_scale(&self) -> f64 {
        let grid = self.domain().grid(33);
        grid.iter()
            .filter_map(|&t| self.speed(t).ok())
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max)
    }
}

/// A curve given by four coordinate expressions.
#[derive(Clone, Debug)]
pub struct ExprCurve {
    components: [Expr; 4],
    env: ParamEnv,
    domain: Domain,
    speed_scale: f64,
}

impl ExprCurve {
    pub fn new(components: [Expr; 4], env: ParamEnv, domain: Domain) -> Result<ExprCurve> {
        for c in &components {
            for p in c.params() {
                if env.get(&p).is_none() {
                    return Err(Error::Eval(crate::expr::EvalError::UnboundParameter(p)));
                }
            }
        }
        let mut curve = ExprCurve {
            components,
            env,
            domain,
            speed_scale: 0.0,
        };
        curve.speed_scale = Curve::speed_scale(&curve);
        Ok(curve)
    }

    /// Parses four component strings.
    pub fn parse(components: [&str; 4], env: ParamEnv, domain: Domain) -> Result<ExprCurve> {
        let mut exprs = Vec::with_capacity(4);
        for (i, src) in components.iter().enumerate() {
            exprs.push(parse(src).map_err(|source| Error::Parse { component: i, source })?);
        }
        let exprs: [Expr; 4] = exprs.try_into().expect("four components");
        ExprCurve::new(exprs, env, domain)
    }

    pub fn components(&self) -> &[Expr; 4] {
        &self.components
    }

    pub fn env(&self) -> &ParamEnv {
        &self.env
    }

    /// The same curve traced through `t ↦ map(t)` on a new domain.
    pub fn reparameterize(&self, map: &Expr, domain: Domain) -> Result<ExprCurve> {
        let components = self.components.clone().map(|c| c.substitute_var(map));
        ExprCurve::new(components, self.env.clone(), domain)
    }
}

impl Curve for ExprCurve {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn jet(&self, t: f64, order: usize) -> Result<JetVec4> {
        let mut out = Vec::with_capacity(4);
        for c in &self.components {
            out.push(eval_jet(c, t, order, &self.env)?);
        }
        Ok(JetVec4(out.try_into().expect("four components")))
    }

    fn point(&self, t: f64) -> Result<Vec4> {
        let mut v = [0.0; 4];
        for (slot, c) in v.iter_mut().zip(&self.components) {
            *slot = eval_scalar(c, t, &self.env)?;
        }
        Ok(Vec4::from_array(v))
    }

    fn speed_scale(&self) -> f64 {
        if self.speed_scale > 0.0 {
            self.speed_scale
        } else {
            let grid = self.domain().grid(33);
            grid.iter()
                .filter_map(|&t| self.speed(t).ok())
                .filter(|v| v.is_finite())
                .fold(0.0, f64::max)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let d = Domain::new(0.0, 1.0).unwrap();
        let g = d.grid(5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(Domain::new(1.0, 1.0).is_err());
    }

    #[test]
    fn jets_carry_derivatives() {
        let c = ExprCurve::parse(
            ["cos(t)", "sin(t)", "t^2", "1"],
            ParamEnv::new(),
            Domain::new(0.0, 1.0).unwrap(),
        )
        .unwrap();
        let j = c.jet(0.0, 3).unwrap();
        assert_eq!(j.derivative_at(1), Vec4::new(0.0, 1.0, 0.0, 0.0));
        assert_eq!(j.derivative_at(2), Vec4::new(-1.0, 0.0, 2.0, 0.0));
        assert_eq!(c.point(0.0).unwrap(), Vec4::new(1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn unbound_parameter_rejected_at_construction() {
        let err = ExprCurve::parse(["a*t", "0", "0", "0"], ParamEnv::new(), Domain::new(0.0, 1.0).unwrap());
        assert!(matches!(err, Err(Error::Eval(_))));
    }
}
