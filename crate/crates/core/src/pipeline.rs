//! End-to-end runs behind the command-line tool: sample a curve spec,
//! build derived curves, cross-check, and assemble serializable reports.

use log::{info, warn};
use serde::Serialize;

use crate::classify::HelixCheck;
use crate::curve::{Curve, Domain};
use crate::curve_file::CurveSpecFile;
use crate::derived::{
    bertrand_apparatus, bertrand_mate_expr, bertrand_radius_simplified, crosscheck, involute_apparatus,
    involute_constants_check, involute_expr, summarize, ApparatusValues, BertrandCoefficients, BertrandMate,
    DiscrepancyReport, DiscrepancySummary, Involute, InvoluteConstants,
};
use crate::error::Result;
use crate::frenet::{harmonic_curvatures, sample_curve, FrenetApparatus, SampledCurve, Tolerances};
use crate::linalg::Frame4;
use crate::report::{csv_float, to_csv};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameRow {
    #[serde(rename = "T")]
    pub t: [f64; 4],
    #[serde(rename = "N")]
    pub n: [f64; 4],
    #[serde(rename = "B")]
    pub b: [f64; 4],
    #[serde(rename = "E")]
    pub e: [f64; 4],
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
}

impl FrameRow {
    fn new(frame: &Frame4, kappa: f64, tau: f64, sigma: f64) -> FrameRow {
        FrameRow {
            t: frame.t.to_array(),
            n: frame.n.to_array(),
            b: frame.b.to_array(),
            e: frame.e.to_array(),
            kappa,
            tau,
            sigma,
        }
    }

    fn cells(&self) -> Vec<String> {
        let mut out: Vec<String> = [self.t, self.n, self.b, self.e]
            .iter()
            .flatten()
            .map(|&x| csv_float(x))
            .collect();
        out.extend([self.kappa, self.tau, self.sigma].map(csv_float));
        out
    }
}

impl From<&ApparatusValues> for FrameRow {
    fn from(a: &ApparatusValues) -> Self {
        FrameRow::new(&a.frame, a.kappa, a.tau, a.sigma)
    }
}

impl From<&FrenetApparatus> for FrameRow {
    fn from(a: &FrenetApparatus) -> Self {
        FrameRow::new(&a.frame, a.kappa, a.tau, a.sigma)
    }
}

fn frame_header(prefix: &str) -> Vec<String> {
    let mut h = Vec::new();
    for v in ["T", "N", "B", "E"] {
        for i in 1..=4 {
            h.push(format!("{prefix}{v}{i}"));
        }
    }
    for q in ["kappa", "tau", "sigma"] {
        h.push(format!("{prefix}{q}"));
    }
    h
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisRow {
    pub t: f64,
    pub s: f64,
    #[serde(flatten)]
    pub apparatus: FrameRow,
    #[serde(rename = "H1")]
    pub h1: Option<f64>,
    /// Undefined where `σ` vanishes.
    #[serde(rename = "H2")]
    pub h2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub domain: Domain,
    pub samples: usize,
    pub jet_order: usize,
    pub rows: Vec<AnalysisRow>,
    pub warnings: Vec<String>,
    pub tolerances: Tolerances,
}

/// Column order of the analysis table.
pub fn analysis_header() -> Vec<String> {
    let mut h = vec!["t".to_string(), "s".to_string()];
    h.extend(frame_header(""));
    h.extend(["H1".to_string(), "H2".to_string()]);
    h
}

impl AnalysisReport {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![csv_float(r.t), csv_float(r.s)];
                cells.extend(r.apparatus.cells());
                cells.push(r.h1.map(csv_float).unwrap_or_default());
                cells.push(r.h2.map(csv_float).unwrap_or_default());
                cells
            })
            .collect();
        let header = analysis_header();
        to_csv(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows)
    }
}

/// Samples the spec's curve on its grid.
pub fn sample_spec(spec: &CurveSpecFile, curve: &dyn Curve) -> Result<SampledCurve> {
    let grid = curve.domain().grid(spec.samples);
    sample_curve(curve, &grid, spec.jet_order, &spec.tolerances)
}

pub fn analysis_report(sampled: &SampledCurve, spec: &CurveSpecFile, domain: Domain) -> AnalysisReport {
    let tol = &spec.tolerances;
    let rows = sampled
        .samples
        .iter()
        .map(|s| {
            let a = &s.apparatus;
            let (h1, h2) = match harmonic_curvatures(&s.curvature, tol) {
                Ok(h) => (Some(h.h1.value()), Some(h.h2.value())),
                Err(_) => (Some(a.kappa / a.tau).filter(|x| x.is_finite()), None),
            };
            AnalysisRow {
                t: s.t,
                s: s.s,
                apparatus: FrameRow::from(a),
                h1,
                h2,
            }
        })
        .collect();
    AnalysisReport {
        domain,
        samples: sampled.len(),
        jet_order: spec.jet_order,
        rows,
        warnings: sampled.warnings.clone(),
        tolerances: *tol,
    }
}

pub fn analyze(spec: &CurveSpecFile) -> Result<AnalysisReport> {
    let curve = spec.curve()?;
    let sampled = sample_spec(spec, &curve)?;
    Ok(analysis_report(&sampled, spec, curve.domain()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedRow {
    pub t: f64,
    /// Arc length of the base curve.
    pub s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_xi: Option<f64>,
    /// Computed directly on the constructed curve.
    pub numerical: FrameRow,
    pub closed_form: FrameRow,
}

fn derived_csv(rows: &[DerivedRow], with_s_xi: bool) -> String {
    let mut header = vec!["t".to_string(), "s".to_string()];
    if with_s_xi {
        header.push("s_xi".to_string());
    }
    header.extend(frame_header(""));
    header.extend(frame_header("cf_"));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut cells = vec![csv_float(r.t), csv_float(r.s)];
            if with_s_xi {
                cells.push(csv_float(r.s_xi.unwrap_or(f64::NAN)));
            }
            cells.extend(r.numerical.cells());
            cells.extend(r.closed_form.cells());
            cells
        })
        .collect();
    to_csv(&header.iter().map(String::as_str).collect::<Vec<_>>(), &body)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BertrandReport {
    pub lambda: f64,
    pub base_helix: HelixCheck,
    pub coefficients: BertrandCoefficients,
    /// `√(τ² + (1 − λκ)²σ²)/(κσ)` from the base curvatures.
    pub sphere_radius_simplified: f64,
    /// `√(τ_ξ² + σ_ξ²)/(κ_ξ σ_ξ)` from the closed-form mate curvatures.
    pub sphere_radius_closed_form: f64,
    pub discrepancy: DiscrepancySummary,
    pub rows: Vec<DerivedRow>,
    /// The mate written as a curve spec, for re-analysis.
    pub curve: Option<CurveSpecFile>,
    pub warnings: Vec<String>,
    pub tolerances: Tolerances,
}

impl BertrandReport {
    pub fn to_csv(&self) -> String {
        derived_csv(&self.rows, false)
    }
}

/// Everything computed for one Bertrand-mate run, including the per-sample
/// cross-check reports.
pub struct BertrandRun {
    pub report: BertrandReport,
    pub base: SampledCurve,
    pub mate: SampledCurve,
    pub crosschecks: Vec<DiscrepancyReport>,
}

pub fn bertrand(spec: &CurveSpecFile, lambda: f64) -> Result<BertrandRun> {
    let tol = spec.tolerances;
    let base_curve = spec.curve()?;
    let mate = BertrandMate::new(base_curve.clone(), lambda, &tol)?;
    info!("bertrand mate with lambda = {lambda}");
    let base = sample_spec(spec, &base_curve)?;
    let mate_samples = sample_spec(spec, &mate)?;
    let mut rows = Vec::with_capacity(base.len());
    let mut checks = Vec::with_capacity(base.len());
    let mut radius_cf = 0.0;
    for (b, m) in base.samples.iter().zip(&mate_samples.samples) {
        let cf = bertrand_apparatus(&b.apparatus, lambda, &tol)?;
        radius_cf = cf.sphere_radius();
        checks.push(crosscheck(b.t, &cf.values(), &m.apparatus, &tol));
        rows.push(DerivedRow {
            t: b.t,
            s: b.s,
            s_xi: None,
            numerical: FrameRow::from(&m.apparatus),
            closed_form: FrameRow::from(&cf.values()),
        });
    }
    let h = mate.helix().clone();
    let mut warnings = base.warnings.clone();
    warnings.extend(mate_samples.warnings.iter().cloned());
    let curve = match bertrand_mate_expr(&base_curve, lambda) {
        Ok(c) => Some(CurveSpecFile::from_curve(&c, spec)),
        Err(e) => {
            warn!("mate not written as a spec: {e}");
            warnings.push(format!("mate not written as a spec: {e}"));
            None
        }
    };
    let report = BertrandReport {
        lambda,
        sphere_radius_simplified: bertrand_radius_simplified(h.kappa, h.tau, h.sigma, lambda),
        sphere_radius_closed_form: radius_cf,
        base_helix: h,
        coefficients: *mate.coefficients(),
        discrepancy: summarize(&checks),
        rows,
        curve,
        warnings,
        tolerances: tol,
    };
    Ok(BertrandRun {
        report,
        base,
        mate: mate_samples,
        crosschecks: checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvoluteReport {
    pub c: f64,
    pub base_helix: HelixCheck,
    pub base_length: f64,
    pub constants: InvoluteConstants,
    /// Closed-form `τ_ξ/κ_ξ` and `σ_ξ/κ_ξ`.
    pub ratios: [f64; 2],
    pub discrepancy: DiscrepancySummary,
    /// The constants `A1, A2, A3` against curvatures times `√s_ξ` measured
    /// on the constructed curve. `A2_printed` is expected to disagree.
    pub constants_check: DiscrepancySummary,
    pub rows: Vec<DerivedRow>,
    pub curve: Option<CurveSpecFile>,
    pub warnings: Vec<String>,
    pub tolerances: Tolerances,
}

impl InvoluteReport {
    pub fn to_csv(&self) -> String {
        derived_csv(&self.rows, true)
    }
}

pub struct InvoluteRun {
    pub report: InvoluteReport,
    pub base: SampledCurve,
    pub involute: SampledCurve,
    pub crosschecks: Vec<DiscrepancyReport>,
    /// `s_ξ` per sample.
    pub s_xi: Vec<f64>,
}

/// Default involute constant: twice the arc length of the domain, which
/// keeps the cusp off the curve.
pub fn default_involute_c(spec: &CurveSpecFile) -> Result<f64> {
    let curve = spec.curve()?;
    let d = curve.domain();
    Ok(2.0 * crate::quadrature::arclength(&curve, d.t_min, d.t_max, spec.tolerances.arclength)?)
}

pub fn involute(spec: &CurveSpecFile, c: f64) -> Result<InvoluteRun> {
    let tol = spec.tolerances;
    let base_curve = spec.curve()?;
    let inv = Involute::new(base_curve.clone(), c, &tol)?;
    info!("involute with c = {c}");
    let base = sample_spec(spec, &base_curve)?;
    let inv_samples = sample_spec(spec, &inv)?;
    let mut rows = Vec::with_capacity(base.len());
    let mut checks = Vec::with_capacity(base.len());
    let mut const_checks = Vec::with_capacity(base.len());
    let mut s_xi = Vec::with_capacity(base.len());
    for (b, i) in base.samples.iter().zip(&inv_samples.samples) {
        let cf = involute_apparatus(&b.apparatus, b.s, c, &tol)?;
        checks.push(crosscheck(b.t, &cf.values(), &i.apparatus, &tol));
        const_checks.push(DiscrepancyReport {
            t: b.t,
            vectors: Vec::new(),
            quantities: involute_constants_check(&cf, &i.apparatus, &tol),
        });
        s_xi.push(cf.s_xi);
        rows.push(DerivedRow {
            t: b.t,
            s: b.s,
            s_xi: Some(cf.s_xi),
            numerical: FrameRow::from(&i.apparatus),
            closed_form: FrameRow::from(&cf.values()),
        });
    }
    let h = inv.helix().clone();
    let r2 = h.kappa * h.kappa + h.tau * h.tau;
    let mut warnings = base.warnings.clone();
    warnings.extend(inv_samples.warnings.iter().cloned());
    let curve = match involute_expr(&base_curve, c) {
        Ok(e) => Some(CurveSpecFile::from_curve(&e, spec)),
        Err(e) => {
            warn!("involute not written as a spec: {e}");
            warnings.push(format!("involute not written as a spec: {e}"));
            None
        }
    };
    let report = InvoluteReport {
        c,
        constants: InvoluteConstants::new(h.kappa, h.tau, h.sigma),
        ratios: [h.tau * h.sigma / r2, -h.sigma * h.kappa / r2],
        base_helix: h,
        base_length: inv.base_length(),
        discrepancy: summarize(&checks),
        constants_check: summarize(&const_checks),
        rows,
        curve,
        warnings,
        tolerances: tol,
    };
    Ok(InvoluteRun {
        report,
        base,
        involute: inv_samples,
        crosschecks: checks,
        s_xi,
    })
}
