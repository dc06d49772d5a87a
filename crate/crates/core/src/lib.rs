//! Frenet–Serret apparatus of curves in Euclidean 4-space.
//!
//! Curves are given as four coordinate expressions in `t`. Derivatives come
//! from truncated Taylor arithmetic ([`jet`]), so the frame `{T, N, B, E}`
//! and the curvatures `κ, τ, σ` are evaluated from exact derivatives rather
//! than finite differences.

// Threshold checks are written `!(x > eps)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod curve;
pub mod curve_file;
pub mod derived;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod jet;
pub mod linalg;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod pipeline;
pub mod quadrature;
pub mod report;
pub mod theorems;

pub use classify::{classify, ClassificationReport, Verdict};
pub use curve::{Curve, Domain, ExprCurve, JetVec4};
pub use curve_file::CurveSpecFile;
pub use derived::{
    bertrand_apparatus, crosscheck, involute_apparatus, BertrandCoefficients, BertrandMate, BertrandMateApparatus,
    DiscrepancyReport, Involute, InvoluteApparatus, InvoluteConstants,
};
pub use error::{Curvature, Error, Result};
pub use expr::{parse, Expr, ParamEnv};
pub use frenet::{
    analyze_point, curvature_jets, frenet_apparatus, harmonic_curvatures, sample_curve, CurvatureJets, FrenetApparatus,
    HarmonicCurvatures, Sample, SampledCurve, Tolerances,
};
pub use jet::{Jet, DEFAULT_ORDER};
pub use linalg::{cross3, dot, norm, Frame4, Vec4};
pub use theorems::{verify, Status, TheoremReport};
