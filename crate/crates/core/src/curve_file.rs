//! JSON curve specifications.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{Domain, ExprCurve};
use crate::error::{Error, Result};
use crate::expr::{Func, ParamEnv};
use crate::frenet::Tolerances;
use crate::jet::DEFAULT_ORDER;
use crate::report::to_json;

pub const DEFAULT_SAMPLES: usize = 256;
pub const MIN_SAMPLES: usize = crate::classify::MIN_SAMPLES;
/// Second arclength derivatives of the curvatures need coordinate jets of
/// order 6.
pub const MIN_JET_ORDER: usize = 6;

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_jet_order() -> usize {
    DEFAULT_ORDER
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpecFile {
    pub components: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub domain: Domain,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_jet_order")]
    pub jet_order: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl CurveSpecFile {
    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<CurveSpecFile> {
        let spec: CurveSpecFile = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.components.len() != 4 {
            return bad(format!("expected 4 components, got {}", self.components.len()));
        }
        Domain::new(self.domain.t_min, self.domain.t_max)?;
        if self.samples < MIN_SAMPLES {
            return bad(format!("samples must be at least {MIN_SAMPLES}, got {}", self.samples));
        }
        if self.jet_order < MIN_JET_ORDER {
            return bad(format!(
                "jet_order must be at least {MIN_JET_ORDER}, got {}",
                self.jet_order
            ));
        }
        for (name, value) in &self.params {
            if !valid_name(name) || name == "t" || Func::from_name(name).is_some() {
                return bad(format!("invalid parameter name {name:?}"));
            }
            if !value.is_finite() {
                return bad(format!("parameter {name} must be finite"));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("eps_reg", t.eps_reg),
            ("eps_deg", t.eps_deg),
            ("tol_const", t.tol_const),
            ("tol_pde", t.tol_pde),
            ("arclength", t.arclength),
            ("crosscheck", t.crosscheck),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if !(t.inconclusive_factor >= 1.0 && t.inconclusive_factor.is_finite()) {
            return bad("tolerance inconclusive_factor must be at least 1".to_string());
        }
        Ok(())
    }

    pub fn env(&self) -> ParamEnv {
        let mut env = ParamEnv::new();
        for (k, v) in &self.params {
            env.set(k.clone(), *v);
        }
        env
    }

    /// Builds the curve, validating first.
    pub fn curve(&self) -> Result<ExprCurve> {
        self.validate()?;
        let c = &self.components;
        ExprCurve::parse(
            [&c[0], &c[1], &c[2], &c[3]],
            self.env(),
            Domain::new(self.domain.t_min, self.domain.t_max)?,
        )
    }

    /// Spec for an expression curve, with the same sampling settings as
    /// `like`. The predefined `pi` is left out unless it was rebound.
    pub fn from_curve(curve: &ExprCurve, like: &CurveSpecFile) -> CurveSpecFile {
        use crate::curve::Curve;
        let params = curve
            .env()
            .iter()
            .filter(|&(k, v)| !(k == "pi" && v == std::f64::consts::PI))
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        CurveSpecFile {
            components: curve.components().iter().map(|e| e.to_string()).collect(),
            params,
            domain: curve.domain(),
            samples: like.samples,
            jet_order: like.jet_order,
            tolerances: like.tolerances,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}
