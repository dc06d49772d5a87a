//! Executable checks of the helix, Bertrand-mate and involute statements
//! for one helix.
//!
//! Each item maps to PASS, FAIL or INCONCLUSIVE. Items whose formulas
//! divide by `σ` are inconclusive when the helix has `σ ≈ 0`.

use serde::{Deserialize, Serialize};

use crate::classify::{
    generalized_helix_residual, is_ccr, is_helix, slant3_residual, sphere_quantities, spherical, HelixCheck, Verdict,
};
use crate::curve_file::CurveSpecFile;
use crate::derived::bertrand_radius_simplified;
use crate::error::{Error, Result};
use crate::frenet::{harmonic_curvatures, Sample, Tolerances};
use crate::pipeline::{bertrand, default_involute_c, involute, sample_spec, BertrandRun, InvoluteRun};

pub const DEFAULT_LAMBDA: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn from_verdict(v: Verdict) -> Status {
        match v {
            Verdict::True => Status::Pass,
            Verdict::False => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// FAIL dominates INCONCLUSIVE, which dominates PASS.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremItem {
    pub id: String,
    pub claim: String,
    pub status: Status,
    /// The measured quantity the status was decided on.
    pub value: f64,
    /// What `value` is compared with.
    pub reference: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub status: Status,
    pub lambda: f64,
    pub c: f64,
    pub samples: usize,
    pub helix: HelixCheck,
    pub items: Vec<TheoremItem>,
    pub tolerances: Tolerances,
}

impl TheoremReport {
    pub fn item(&self, id: &str) -> Option<&TheoremItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least-squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    LinearFit { slope, intercept, r2 }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

struct Items {
    items: Vec<TheoremItem>,
    sigma_vanishes: bool,
}

impl Items {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: &str,
        claim: &str,
        status: Status,
        value: f64,
        reference: f64,
        tolerance: f64,
        note: Option<String>,
    ) {
        self.items.push(TheoremItem {
            id: id.to_string(),
            claim: claim.to_string(),
            status,
            value,
            reference,
            tolerance,
            note,
        });
    }

    fn skip_sigma(&mut self, id: &str, claim: &str) -> bool {
        if self.sigma_vanishes {
            self.push(
                id,
                claim,
                Status::Inconclusive,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                Some("sigma vanishes on this helix".to_string()),
            );
        }
        self.sigma_vanishes
    }

    fn leg_failed(&mut self, ids: &[(&str, &str)], e: &Error) {
        for (id, claim) in ids {
            self.error(id, claim, format!("construction is degenerate: {e}"));
        }
    }

    fn error(&mut self, id: &str, claim: &str, e: impl std::fmt::Display) {
        self.push(
            id,
            claim,
            Status::Inconclusive,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            Some(e.to_string()),
        );
    }

    /// Residual lower-bound item: every sample's residual must reach
    /// `bound(sample)`. Reports the smallest residual-to-bound ratio.
    fn lower_bound(
        &mut self,
        id: &str,
        claim: &str,
        samples: &[Sample],
        tol: &Tolerances,
        residual: fn(&crate::frenet::CurvatureJets, &crate::frenet::HarmonicCurvatures) -> f64,
        bound: fn(f64, f64, f64) -> f64,
    ) {
        if self.skip_sigma(id, claim) {
            return;
        }
        let mut worst = f64::INFINITY;
        for s in samples {
            let h = match harmonic_curvatures(&s.curvature, tol) {
                Ok(h) => h,
                Err(e) => return self.error(id, claim, e),
            };
            let c = &s.curvature;
            let b = bound(c.kappa.value(), c.tau.value(), c.sigma.value());
            worst = worst.min(residual(c, &h) / b);
        }
        let status = if worst >= 1.0 { Status::Pass } else { Status::Fail };
        self.push(id, claim, status, worst, 1.0, 0.0, None);
    }

    fn equality(&mut self, id: &str, claim: &str, value: f64, reference: f64, tol: f64, gate: Verdict) {
        let close = relative(value, reference) < tol;
        let status = Status::from_verdict(gate).combine(if close { Status::Pass } else { Status::Fail });
        let note = (gate != Verdict::True).then(|| format!("sphere constancy verdict is {gate}"));
        self.push(id, claim, status, value, reference, tol, note);
    }
}

fn generalized_bound(k: f64, t: f64, s: f64) -> f64 {
    (s * k / t).abs() / 2.0
}

fn slant3_bound(_k: f64, t: f64, s: f64) -> f64 {
    (s * s / t).abs() / 2.0
}

/// Runs all twelve items against the helix in `spec`. Defaults: `λ = 0.1`
/// and `c` twice the arc length of the domain.
pub fn verify(spec: &CurveSpecFile, lambda: Option<f64>, c: Option<f64>) -> Result<TheoremReport> {
    let tol = spec.tolerances;
    let lambda = lambda.unwrap_or(DEFAULT_LAMBDA);
    let base_curve = spec.curve()?;
    let base_run = sample_spec(spec, &base_curve)?;
    let helix = is_helix(&base_run.samples, &tol)?;
    if helix.check.verdict != Verdict::True {
        return Err(Error::NotAHelix(format!(
            "verify requires a helix; curvatures deviate from their means by up to {:e} (relative)",
            helix.check.residual_max
        )));
    }
    let c = match c {
        Some(c) => c,
        None => default_involute_c(spec)?,
    };
    let (k, t, s) = (helix.kappa, helix.tau, helix.sigma);
    let mut items = Items {
        items: Vec::new(),
        sigma_vanishes: !(s.abs() > tol.eps_deg * k.max(t)),
    };

    // The helix itself.
    let base = &base_run.samples;
    items.lower_bound(
        "helix.not_generalized_helix",
        "a helix is not a generalized helix: |H2' + sigma H1| >= |sigma kappa / tau| / 2",
        base,
        &tol,
        generalized_helix_residual,
        generalized_bound,
    );
    items.lower_bound(
        "helix.not_slant3",
        "a helix is not a 3-type slant helix: |H2~' + sigma H1~| >= |sigma^2 / tau| / 2",
        base,
        &tol,
        slant3_residual,
        slant3_bound,
    );
    let claim = "a helix lies on a hypersphere of radius sqrt(tau^2 + sigma^2) / (kappa sigma)";
    if !items.skip_sigma("helix.sphere_radius", claim) {
        match spherical(base, &tol) {
            Ok(sp) => items.equality(
                "helix.sphere_radius",
                claim,
                sp.radius,
                t.hypot(s) / (k * s.abs()),
                tol.crosscheck,
                sp.check.verdict,
            ),
            Err(e) => items.error("helix.sphere_radius", claim, e),
        }
    }

    // Bertrand mate. With σ = 0 the constructions may legitimately
    // degenerate; that makes their items inconclusive rather than an error.
    match bertrand(spec, lambda) {
        Ok(b_run) => bertrand_items(&mut items, &b_run, (k, t, s), lambda, &tol)?,
        Err(e) if items.sigma_vanishes && e.is_degeneracy() => items.leg_failed(&BERTRAND_IDS, &e),
        Err(e) => return Err(e),
    }
    match involute(spec, c) {
        Ok(i_run) => involute_items(&mut items, &i_run, &tol)?,
        Err(e) if items.sigma_vanishes && e.is_degeneracy() => items.leg_failed(&INVOLUTE_IDS, &e),
        Err(e) => return Err(e),
    }

    let status = items.items.iter().fold(Status::Pass, |acc, i| acc.combine(i.status));
    Ok(TheoremReport {
        status,
        lambda,
        c,
        samples: spec.samples,
        helix,
        items: items.items,
        tolerances: tol,
    })
}

const BERTRAND_IDS: [(&str, &str); 4] = [
    ("bertrand.is_helix", "the Bertrand mate of a helix is a helix"),
    (
        "bertrand.not_generalized_helix",
        "the Bertrand mate is not a generalized helix",
    ),
    ("bertrand.not_slant3", "the Bertrand mate is not a 3-type slant helix"),
    (
        "bertrand.sphere_radius",
        "the Bertrand mate lies on a hypersphere of radius sqrt(tau^2 + (1 - lambda kappa)^2 sigma^2) / (kappa sigma)",
    ),
];

const INVOLUTE_IDS: [(&str, &str); 5] = [
    ("involute.not_helix", "the involute of a helix is not a helix"),
    (
        "involute.is_ccr",
        "the involute of a helix has constant curvature ratios",
    ),
    (
        "involute.not_generalized_helix",
        "the involute is not a generalized helix",
    ),
    ("involute.not_slant3", "the involute is not a 3-type slant helix"),
    (
        "involute.not_spherical",
        "the involute is not spherical: its squared sphere radius grows linearly in its arc length",
    ),
];

fn bertrand_items(
    items: &mut Items,
    b_run: &BertrandRun,
    (k, t, s): (f64, f64, f64),
    lambda: f64,
    tol: &Tolerances,
) -> Result<()> {
    let tol = *tol;
    let mate = &b_run.mate.samples;
    let mh = is_helix(mate, &tol)?;
    items.push(
        "bertrand.is_helix",
        "the Bertrand mate of a helix is a helix",
        Status::from_verdict(mh.check.verdict),
        mh.check.residual_max,
        0.0,
        tol.tol_const,
        None,
    );
    items.lower_bound(
        "bertrand.not_generalized_helix",
        "the Bertrand mate is not a generalized helix",
        mate,
        &tol,
        generalized_helix_residual,
        generalized_bound,
    );
    items.lower_bound(
        "bertrand.not_slant3",
        "the Bertrand mate is not a 3-type slant helix",
        mate,
        &tol,
        slant3_residual,
        slant3_bound,
    );
    let claim =
        "the Bertrand mate lies on a hypersphere of radius sqrt(tau^2 + (1 - lambda kappa)^2 sigma^2) / (kappa sigma)";
    if !items.skip_sigma("bertrand.sphere_radius", claim) {
        match spherical(mate, &tol) {
            Ok(sp) => items.equality(
                "bertrand.sphere_radius",
                claim,
                sp.radius,
                bertrand_radius_simplified(k, t, s, lambda).abs(),
                tol.crosscheck,
                sp.check.verdict,
            ),
            Err(e) => items.error("bertrand.sphere_radius", claim, e),
        }
    }
    Ok(())
}

fn involute_items(items: &mut Items, i_run: &InvoluteRun, tol: &Tolerances) -> Result<()> {
    let tol = *tol;
    let inv = &i_run.involute.samples;
    let ih = is_helix(inv, &tol)?;
    items.push(
        "involute.not_helix",
        "the involute of a helix is not a helix",
        Status::from_verdict(ih.check.verdict.negate()),
        ih.check.residual_max,
        tol.inconclusive_factor * tol.tol_const,
        tol.tol_const,
        None,
    );
    let ic = is_ccr(inv, &tol)?;
    items.push(
        "involute.is_ccr",
        "the involute of a helix has constant curvature ratios",
        Status::from_verdict(ic.check.verdict),
        ic.check.residual_max,
        0.0,
        tol.tol_const,
        None,
    );
    items.lower_bound(
        "involute.not_generalized_helix",
        "the involute is not a generalized helix",
        inv,
        &tol,
        generalized_helix_residual,
        generalized_bound,
    );
    items.lower_bound(
        "involute.not_slant3",
        "the involute is not a 3-type slant helix",
        inv,
        &tol,
        slant3_residual,
        slant3_bound,
    );
    let claim = "the involute is not spherical: its squared sphere radius grows linearly in its arc length";
    if !items.skip_sigma("involute.not_spherical", claim) {
        match sphere_quantities(inv, &tol) {
            Ok(q) => {
                let fit = linear_fit(&i_run.s_xi, &q);
                let predicted = i_run.report.constants.sphere_slope();
                let affine = fit.r2 > 0.999;
                let matches = relative(fit.slope, predicted) < tol.crosscheck;
                let status = if affine && matches && fit.slope != 0.0 {
                    Status::Pass
                } else {
                    Status::Fail
                };
                items.push(
                    "involute.not_spherical",
                    claim,
                    status,
                    fit.slope,
                    predicted,
                    tol.crosscheck,
                    Some(format!("least-squares R^2 = {:.12}", fit.r2)),
                );
            }
            Err(e) => items.error("involute.not_spherical", claim, e),
        }
    }
    Ok(())
}
