use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::jet::JetError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component {component}: {source}")]
    Parse {
        component: usize,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),
    #[error("curve is not regular at t = {t} (speed {speed:e})")]
    NotRegular { t: f64, speed: f64 },
    #[error("degenerate {quantity} at t = {t}: the curve has no Frenet frame in E4 there")]
    DegenerateCurvature { t: f64, quantity: Curvature },
    #[error("{quantity} vanishes at t = {t}")]
    VanishingDenominator { t: f64, quantity: &'static str },
    #[error("curve is not a helix (constant curvatures): {0}")]
    NotAHelix(String),
    #[error("singular mate: K = {k:e}, L = {l:e}")]
    SingularMate { k: f64, l: f64 },
    #[error("involute is singular at s = {s}")]
    SingularPoint { s: f64 },
    #[error("at sample {index} (t = {t}): {source}")]
    AtSample {
        index: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// The underlying error when wrapped with sample context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtSample { source, .. } => source.root(),
            other => other,
        }
    }

    /// Geometric failures of the curve, as opposed to bad input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self.root(),
            Error::NotRegular { .. }
                | Error::DegenerateCurvature { .. }
                | Error::VanishingDenominator { .. }
                | Error::SingularMate { .. }
                | Error::SingularPoint { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Kappa,
    Tau,
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Curvature::Kappa => "curvature (kappa = 0)",
            Curvature::Tau => "torsion (third derivative in the osculating plane)",
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
