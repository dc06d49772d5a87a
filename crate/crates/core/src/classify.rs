//! Residual-based classification of sampled curves.
//!
//! Every predicate reports the residual it was decided on. Constancy is
//! judged by the largest relative deviation from the grid mean; the
//! differential conditions are judged after dividing by the largest
//! curvature on the grid, which makes them scale-free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frenet::{harmonic_curvatures, CurvatureJets, HarmonicCurvatures, Sample, Tolerances};
use crate::jet::Jet;

/// Minimum number of samples accepted by the grid predicates.
pub const MIN_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    /// `True` below `tol`, `False` from `factor · tol` up, `Inconclusive`
    /// in between or when the residual is not a number.
    pub fn from_residual(residual: f64, tol: f64, factor: f64) -> Verdict {
        if residual < tol {
            Verdict::True
        } else if residual >= factor * tol {
            Verdict::False
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Inconclusive => Verdict::Inconclusive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verdict with the residual statistics behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub verdict: Verdict,
    pub residual_max: f64,
    pub residual_mean: f64,
    pub tolerance: f64,
    /// Why the check could not be evaluated, when it could not.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn from_residuals(residuals: &[f64], tol: f64, tols: &Tolerances) -> Check {
        let max = residuals.iter().copied().fold(0.0, f64::max);
        let mean = residuals.iter().sum::<f64>() / residuals.len() as f64;
        let max = if residuals.iter().any(|r| r.is_nan()) {
            f64::NAN
        } else {
            max
        };
        Check {
            verdict: Verdict::from_residual(max, tol, tols.inconclusive_factor),
            residual_max: max,
            residual_mean: mean,
            tolerance: tol,
            note: None,
        }
    }

    fn undefined(tol: f64, reason: String) -> Check {
        Check {
            verdict: Verdict::Inconclusive,
            residual_max: f64::NAN,
            residual_mean: f64::NAN,
            tolerance: tol,
            note: Some(reason),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelixCheck {
    #[serde(flatten)]
    pub check: Check,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcrCheck {
    #[serde(flatten)]
    pub check: Check,
    /// Fitted `τ/κ`.
    pub a: f64,
    /// Fitted `σ/κ`.
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereCheck {
    #[serde(flatten)]
    pub check: Check,
    /// Mean of the per-sample squared radius.
    pub r2_mean: f64,
    /// `√r2_mean`.
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub samples: usize,
    /// Largest of `κ, τ, |σ|` over the grid.
    pub curvature_scale: f64,
    pub is_helix: HelixCheck,
    pub is_ccr: CcrCheck,
    pub generalized_helix: Check,
    pub slant3: Check,
    pub spherical: SphereCheck,
    pub ccr_spherical: SphereCheck,
    pub tolerances: Tolerances,
}

fn require_samples(samples: &[Sample]) -> Result<()> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InvalidSpec(format!(
            "classification needs at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Grid mean and per-sample relative deviation from it. The deviation is
/// measured against `max(|mean|, floor)` so a quantity that sits at zero
/// does not blow up.
fn relative_deviation(values: &[f64], floor: f64) -> (f64, Vec<f64>) {
    let m = mean(values);
    let denom = m.abs().max(floor).max(f64::MIN_POSITIVE);
    (m, values.iter().map(|v| (v - m).abs() / denom).collect())
}

fn combine_max(columns: &[Vec<f64>]) -> Vec<f64> {
    (0..columns[0].len())
        .map(|i| columns.iter().map(|c| c[i]).fold(0.0, f64::max))
        .collect()
}

/// Largest of `κ, τ, |σ|` over the samples.
pub fn curvature_scale(samples: &[Sample]) -> f64 {
    samples.iter().map(|s| s.curvature.scale()).fold(0.0, f64::max)
}

/// Constant `κ`, `τ` and `σ` along the grid.
pub fn is_helix(samples: &[Sample], tol: &Tolerances) -> Result<HelixCheck> {
    require_samples(samples)?;
    let floor = tol.eps_deg * curvature_scale(samples);
    let take = |f: fn(&Sample) -> f64| samples.iter().map(f).collect::<Vec<f64>>();
    let (k, dk) = relative_deviation(&take(|s| s.apparatus.kappa), floor);
    let (t, dt) = relative_deviation(&take(|s| s.apparatus.tau), floor);
    let (g, dg) = relative_deviation(&take(|s| s.apparatus.sigma), floor);
    let residuals = combine_max(&[dk, dt, dg]);
    Ok(HelixCheck {
        check: Check::from_residuals(&residuals, tol.tol_const, tol),
        kappa: k,
        tau: t,
        sigma: g,
    })
}

/// Constant ratios `τ/κ` and `σ/κ` along the grid.
pub fn is_ccr(samples: &[Sample], tol: &Tolerances) -> Result<CcrCheck> {
    require_samples(samples)?;
    let a: Vec<f64> = samples.iter().map(|s| s.apparatus.tau / s.apparatus.kappa).collect();
    let b: Vec<f64> = samples.iter().map(|s| s.apparatus.sigma / s.apparatus.kappa).collect();
    let floor = tol.eps_deg * a.iter().chain(&b).map(|x| x.abs()).fold(0.0, f64::max);
    let (am, da) = relative_deviation(&a, floor);
    let (bm, db) = relative_deviation(&b, floor);
    let residuals = combine_max(&[da, db]);
    Ok(CcrCheck {
        check: Check::from_residuals(&residuals, tol.tol_const, tol),
        a: am,
        b: bm,
    })
}

/// `|H₂′ + σH₁|` at the expansion point (unnormalized).
pub fn generalized_helix_residual(cj: &CurvatureJets, h: &HarmonicCurvatures) -> f64 {
    (h.h2.derivative(1) + cj.sigma.value() * h.h1.value()).abs()
}

/// `|H̃₂′ + σH̃₁|` at the expansion point (unnormalized).
pub fn slant3_residual(cj: &CurvatureJets, h: &HarmonicCurvatures) -> f64 {
    (h.h2_anti.derivative(1) + cj.sigma.value() * h.h1_anti.value()).abs()
}

fn require_order(j: &Jet, min: usize) -> Result<()> {
    if j.order() < min {
        return Err(Error::Jet(crate::jet::JetError::Order { min, got: j.order() }));
    }
    Ok(())
}

/// `ρ² + (ρ′/τ)² + (1/σ²)[ρτ + (ρ′/τ)′]²`, the squared radius of the
/// osculating hypersphere.
pub fn sphere_quantity(cj: &CurvatureJets, tol: &Tolerances) -> Result<f64> {
    require_order(&cj.rho, 2)?;
    let scale = cj.scale();
    for (name, j) in [("tau", &cj.tau), ("sigma", &cj.sigma)] {
        if !(j.value().abs() > tol.eps_deg * scale) {
            return Err(Error::VanishingDenominator {
                t: cj.t,
                quantity: name,
            });
        }
    }
    let rho = &cj.rho;
    let d_rho = rho.differentiate();
    let q = d_rho.try_div(&cj.tau.truncate(d_rho.order()))?;
    let r = rho.value();
    let tau = cj.tau.value();
    let sigma = cj.sigma.value();
    let bracket = r * tau + q.derivative(1);
    Ok(r * r + q.value() * q.value() + bracket * bracket / (sigma * sigma))
}

/// The same squared radius written for a ccr curve with `τ = aκ`, `σ = bκ`
/// in terms of `f = ρ²`:
/// `f + f′²/(4a²) + f(2a² + f″)²/(4a²b²)`.
pub fn ccr_sphere_quantity(f: &Jet, a: f64, b: f64, tol: &Tolerances) -> Result<f64> {
    require_order(f, 2)?;
    let floor = tol.eps_deg * a.abs().max(b.abs()).max(1.0);
    if !(a.abs() > floor) {
        return Err(Error::VanishingDenominator {
            t: f64::NAN,
            quantity: "a",
        });
    }
    if !(b.abs() > floor) {
        return Err(Error::VanishingDenominator {
            t: f64::NAN,
            quantity: "b",
        });
    }
    let (f0, f1, f2) = (f.value(), f.derivative(1), f.derivative(2));
    let a2 = a * a;
    let inner = 2.0 * a2 + f2;
    Ok(f0 + f1 * f1 / (4.0 * a2) + f0 * inner * inner / (4.0 * a2 * b * b))
}

fn per_sample<F>(samples: &[Sample], f: F) -> Result<Vec<f64>>
where
    F: Fn(&Sample) -> Result<f64>,
{
    samples
        .iter()
        .map(|s| {
            f(s).map_err(|e| Error::AtSample {
                index: s.index,
                t: s.t,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Per-sample generalized-helix residuals divided by the grid curvature
/// scale.
pub fn generalized_helix_residuals(samples: &[Sample], tol: &Tolerances) -> Result<Vec<f64>> {
    let scale = curvature_scale(samples);
    per_sample(samples, |s| {
        let h = harmonic_curvatures(&s.curvature, tol)?;
        Ok(generalized_helix_residual(&s.curvature, &h) / scale)
    })
}

/// Per-sample 3-type slant helix residuals divided by the grid curvature
/// scale.
pub fn slant3_residuals(samples: &[Sample], tol: &Tolerances) -> Result<Vec<f64>> {
    let scale = curvature_scale(samples);
    per_sample(samples, |s| {
        let h = harmonic_curvatures(&s.curvature, tol)?;
        Ok(slant3_residual(&s.curvature, &h) / scale)
    })
}

pub fn sphere_quantities(samples: &[Sample], tol: &Tolerances) -> Result<Vec<f64>> {
    per_sample(samples, |s| sphere_quantity(&s.curvature, tol))
}

pub fn ccr_sphere_quantities(samples: &[Sample], a: f64, b: f64, tol: &Tolerances) -> Result<Vec<f64>> {
    per_sample(samples, |s| {
        let f = &s.curvature.rho * &s.curvature.rho;
        ccr_sphere_quantity(&f, a, b, tol)
    })
}

fn sphere_check(values: &[f64], tol: &Tolerances) -> SphereCheck {
    let (m, dev) = relative_deviation(values, 0.0);
    SphereCheck {
        check: Check::from_residuals(&dev, tol.tol_const, tol),
        r2_mean: m,
        radius: m.sqrt(),
    }
}

fn undefined_sphere(tol: &Tolerances, reason: String) -> SphereCheck {
    SphereCheck {
        check: Check::undefined(tol.tol_const, reason),
        r2_mean: f64::NAN,
        radius: f64::NAN,
    }
}

/// Sphere condition evaluated through the general formula.
pub fn spherical(samples: &[Sample], tol: &Tolerances) -> Result<SphereCheck> {
    require_samples(samples)?;
    Ok(sphere_check(&sphere_quantities(samples, tol)?, tol))
}

/// Sphere condition evaluated through the ccr form with the given ratios.
pub fn ccr_spherical(samples: &[Sample], a: f64, b: f64, tol: &Tolerances) -> Result<SphereCheck> {
    require_samples(samples)?;
    Ok(sphere_check(&ccr_sphere_quantities(samples, a, b, tol)?, tol))
}

/// Runs every predicate. Checks whose formulas are undefined on this curve
/// (a vanishing denominator somewhere) come back inconclusive with a note.
pub fn classify(samples: &[Sample], tol: &Tolerances) -> Result<ClassificationReport> {
    require_samples(samples)?;
    let helix = is_helix(samples, tol)?;
    let ccr = is_ccr(samples, tol)?;
    let pde = |r: Result<Vec<f64>>| match r {
        Ok(v) => Check::from_residuals(&v, tol.tol_pde, tol),
        Err(e) => Check::undefined(tol.tol_pde, e.to_string()),
    };
    let generalized_helix = pde(generalized_helix_residuals(samples, tol));
    let slant3 = pde(slant3_residuals(samples, tol));
    let sphere = match sphere_quantities(samples, tol) {
        Ok(v) => sphere_check(&v, tol),
        Err(e) => undefined_sphere(tol, e.to_string()),
    };
    let ccr_sphere = if ccr.check.verdict != Verdict::True {
        undefined_sphere(tol, "curve is not ccr".to_string())
    } else {
        match ccr_sphere_quantities(samples, ccr.a, ccr.b, tol) {
            Ok(v) => sphere_check(&v, tol),
            Err(e) => undefined_sphere(tol, e.to_string()),
        }
    };
    Ok(ClassificationReport {
        samples: samples.len(),
        curvature_scale: curvature_scale(samples),
        is_helix: helix,
        is_ccr: ccr,
        generalized_helix,
        slant3,
        spherical: sphere,
        ccr_spherical: ccr_sphere,
        tolerances: *tol,
    })
}
