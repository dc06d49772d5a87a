//! Frenet apparatus of an arbitrary regular curve in E⁴.
//!
//! The quotient formulas are evaluated in jet arithmetic, so the frame and
//! curvatures come with exact derivatives in the curve parameter. Those are
//! converted to arclength derivatives with `d/ds = (1/‖α′‖) d/dt`.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, JetVec4};
use crate::error::{Curvature, Error, Result};
use crate::jet::{Jet, DEFAULT_ORDER};
use crate::linalg::{Frame4, Vec4};
use crate::quadrature::{cumulative_arclength, ARCLENGTH_TOL};

/// Numerical thresholds shared by the analysis, classification and
/// cross-checking layers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Speed threshold, relative to the curve's speed scale.
    pub eps_reg: f64,
    /// Curvature-denominator threshold (dimensionless).
    pub eps_deg: f64,
    /// Relative constancy tolerance.
    pub tol_const: f64,
    /// Absolute tolerance for differential residuals, after scaling the
    /// curvatures to a maximum of 1 on the grid.
    pub tol_pde: f64,
    /// Residuals within this factor of a tolerance are inconclusive.
    pub inconclusive_factor: f64,
    /// Absolute tolerance of arc-length quadrature.
    pub arclength: f64,
    /// Relative tolerance for closed-form versus numerical comparisons.
    pub crosscheck: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_reg: 1e-9,
            eps_deg: 1e-9,
            tol_const: 1e-7,
            tol_pde: 1e-6,
            inconclusive_factor: 10.0,
            arclength: ARCLENGTH_TOL,
            crosscheck: 1e-6,
        }
    }
}

/// Frame and curvatures at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrenetApparatus {
    pub t: f64,
    pub position: Vec4,
    pub frame: Frame4,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
    /// `ds/dt`.
    pub speed: f64,
    /// Orientation sign applied to the trinormal.
    pub mu: i8,
}

/// Curvatures as Taylor expansions in arclength about one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureJets {
    pub t: f64,
    pub kappa: Jet,
    pub tau: Jet,
    pub sigma: Jet,
    /// Radius of curvature `1/κ`.
    pub rho: Jet,
}

impl CurvatureJets {
    pub fn order(&self) -> usize {
        self.kappa.order()
    }

    /// Largest curvature magnitude at the point.
    pub fn scale(&self) -> f64 {
        self.kappa
            .value()
            .abs()
            .max(self.tau.value().abs())
            .max(self.sigma.value().abs())
    }
}

/// `H1 = κ/τ`, `H2 = H1′/σ` and the anti-harmonic pair `σ/τ`, `(σ/τ)′/κ`,
/// all as arclength jets.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicCurvatures {
    pub h1: Jet,
    pub h2: Jet,
    pub h1_anti: Jet,
    pub h2_anti: Jet,
}

/// The differentiated quantities at a point, each a `t`-jet of a common order.
struct ParamJets {
    frame: Frame4,
    mu: i8,
    speed: Jet,
    kappa: Jet,
    tau: Jet,
    sigma: Jet,
}

fn check_regular(curve: &dyn Curve, t: f64, speed: f64, tol: &Tolerances) -> Result<()> {
    let scale = curve.speed_scale();
    let threshold = tol.eps_reg * if scale > 0.0 { scale } else { 1.0 };
    if !(speed > threshold) {
        return Err(Error::NotRegular { t, speed });
    }
    Ok(())
}

fn frenet_jets(curve: &dyn Curve, t: f64, order: usize, tol: &Tolerances) -> Result<(Vec4, ParamJets)> {
    let raw = curve.jet(t, order + 4)?;
    let position = raw.value();
    let d1 = raw.differentiate();
    let d2 = d1.differentiate();
    let d3 = d2.differentiate();
    let d4 = d3.differentiate().truncate(order);
    let (d1, d2, d3) = (d1.truncate(order), d2.truncate(order), d3.truncate(order));

    let v2 = d1.dot(&d1);
    let speed_val = v2.value().sqrt();
    check_regular(curve, t, speed_val, tol)?;
    let v = v2.sqrt()?;

    // ‖α′‖² α″ − ⟨α′, α″⟩ α′
    let w = d2.scale(&v2).sub(&d1.scale(&d1.dot(&d2)));
    let w2 = w.dot(&w);
    let a2_norm = d2.value().norm();
    if !(w2.value().sqrt() > tol.eps_deg * v2.value() * a2_norm) {
        return Err(Error::DegenerateCurvature {
            t,
            quantity: Curvature::Kappa,
        });
    }
    let w_norm = w2.sqrt()?;
    let kappa = w_norm.try_div(&(&v2 * &v2))?;
    let t_vec = d1.scale(&v.recip()?);
    let n_vec = w.scale(&w_norm.recip()?);

    let x = JetVec4::cross3(&t_vec, &n_vec, &d3);
    let x2 = x.dot(&x);
    if !(x2.value().sqrt() > tol.eps_deg * d3.value().norm()) {
        return Err(Error::DegenerateCurvature {
            t,
            quantity: Curvature::Tau,
        });
    }
    let x_norm = x2.sqrt()?;
    let e_raw = x.scale(&x_norm.recip()?);
    let b_raw = JetVec4::cross3(&e_raw, &t_vec, &n_vec);
    // With the determinant product the raw pair already has det = +1; μ
    // orients it so that B has a positive share of α‴ and τ ≥ 0 is the
    // Frenet torsion.
    let mu: i8 = if b_raw.value().dot(d3.value()) >= 0.0 { 1 } else { -1 };
    let e_vec = e_raw.scale_f64(mu as f64);
    let b_vec = b_raw.scale_f64(mu as f64);

    let xv = &x_norm * &v;
    let tau = (&x_norm * &v).try_div(&w_norm)?;
    let sigma = d4.dot(&e_vec).try_div(&xv)?;

    let frame = Frame4::new(t_vec.value(), n_vec.value(), b_vec.value(), e_vec.value());
    Ok((
        position,
        ParamJets {
            frame,
            mu,
            speed: v,
            kappa,
            tau,
            sigma,
        },
    ))
}

/// Speed, unit tangent and principal normal as `t`-jets of `order`.
/// Needs coordinate jets of `order + 2`.
pub fn tangent_normal_jets(
    curve: &dyn Curve,
    t: f64,
    order: usize,
    tol: &Tolerances,
) -> Result<(Jet, JetVec4, JetVec4)> {
    let raw = curve.jet(t, order + 2)?;
    let d1 = raw.differentiate();
    let d2 = d1.differentiate();
    let d1 = d1.truncate(order);
    let v2 = d1.dot(&d1);
    check_regular(curve, t, v2.value().sqrt(), tol)?;
    let v = v2.sqrt()?;
    let w = d2.scale(&v2).sub(&d1.scale(&d1.dot(&d2)));
    let w2 = w.dot(&w);
    if !(w2.value().sqrt() > tol.eps_deg * v2.value() * d2.value().norm()) {
        return Err(Error::DegenerateCurvature {
            t,
            quantity: Curvature::Kappa,
        });
    }
    let t_vec = d1.scale(&v.recip()?);
    let n_vec = w.scale(&w2.sqrt()?.recip()?);
    Ok((v, t_vec, n_vec))
}

fn apparatus_from(t: f64, position: Vec4, pj: &ParamJets) -> FrenetApparatus {
    FrenetApparatus {
        t,
        position,
        frame: pj.frame,
        kappa: pj.kappa.value(),
        tau: pj.tau.value(),
        sigma: pj.sigma.value(),
        speed: pj.speed.value(),
        mu: pj.mu,
    }
}

/// Frame, curvatures and speed of `curve` at parameter `t`.
pub fn frenet_apparatus(curve: &dyn Curve, t: f64, tol: &Tolerances) -> Result<FrenetApparatus> {
    let (position, pj) = frenet_jets(curve, t, 0, tol)?;
    Ok(apparatus_from(t, position, &pj))
}

/// Converts a `t`-jet into Taylor coefficients in arclength, given the
/// speed jet `ds/dt` of at least the same order.
pub fn to_arclength(f: &Jet, speed: &Jet) -> Result<Jet> {
    let mut derivs = Vec::with_capacity(f.order() + 1);
    let mut g = f.clone();
    derivs.push(g.value());
    while g.order() > 0 {
        let dg = g.differentiate();
        g = dg.try_div(&speed.truncate(dg.order()))?;
        derivs.push(g.value());
    }
    Ok(Jet::from_derivatives(&derivs))
}

/// Apparatus plus arclength jets of the curvatures, from one evaluation of
/// order `jet_order` (at least 5; 6 gives second arclength derivatives).
pub fn analyze_point(
    curve: &dyn Curve,
    t: f64,
    jet_order: usize,
    tol: &Tolerances,
) -> Result<(FrenetApparatus, CurvatureJets)> {
    if jet_order < 5 {
        return Err(Error::Jet(crate::jet::JetError::Order { min: 5, got: jet_order }));
    }
    let (position, pj) = frenet_jets(curve, t, jet_order - 4, tol)?;
    let kappa = to_arclength(&pj.kappa, &pj.speed)?;
    let tau = to_arclength(&pj.tau, &pj.speed)?;
    let sigma = to_arclength(&pj.sigma, &pj.speed)?;
    let rho = kappa.recip()?;
    Ok((
        apparatus_from(t, position, &pj),
        CurvatureJets {
            t,
            kappa,
            tau,
            sigma,
            rho,
        },
    ))
}

pub fn curvature_jets(curve: &dyn Curve, t: f64, tol: &Tolerances) -> Result<CurvatureJets> {
    Ok(analyze_point(curve, t, DEFAULT_ORDER, tol)?.1)
}

fn nonvanishing(j: &Jet, scale: f64, t: f64, quantity: &'static str, tol: &Tolerances) -> Result<()> {
    if !(j.value().abs() > tol.eps_deg * scale) {
        return Err(Error::VanishingDenominator { t, quantity });
    }
    Ok(())
}

pub fn harmonic_curvatures(cj: &CurvatureJets, tol: &Tolerances) -> Result<HarmonicCurvatures> {
    let scale = cj.scale();
    nonvanishing(&cj.tau, scale, cj.t, "tau", tol)?;
    nonvanishing(&cj.sigma, scale, cj.t, "sigma", tol)?;
    nonvanishing(&cj.kappa, scale, cj.t, "kappa", tol)?;
    let h1 = cj.kappa.try_div(&cj.tau)?;
    let sigma_low = cj.sigma.truncate(h1.order().saturating_sub(1));
    let h2 = h1.differentiate().try_div(&sigma_low)?;
    let h1_anti = cj.sigma.try_div(&cj.tau)?;
    let kappa_low = cj.kappa.truncate(h1_anti.order().saturating_sub(1));
    let h2_anti = h1_anti.differentiate().try_div(&kappa_low)?;
    Ok(HarmonicCurvatures {
        h1,
        h2,
        h1_anti,
        h2_anti,
    })
}

/// One grid point of a sampled curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub t: f64,
    /// Arc length from the first grid point.
    pub s: f64,
    pub apparatus: FrenetApparatus,
    pub curvature: CurvatureJets,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub samples: Vec<Sample>,
    pub warnings: Vec<String>,
}

impl SampledCurve {
    pub fn apparatus(&self) -> Vec<FrenetApparatus> {
        self.samples.iter().map(|s| s.apparatus).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Evaluates the apparatus on every grid point (in parallel), attaches arc
/// length, and runs the orientation pass. Errors name the first failing
/// sample.
pub fn sample_curve(curve: &dyn Curve, grid: &[f64], jet_order: usize, tol: &Tolerances) -> Result<SampledCurve> {
    let results: Vec<Result<(FrenetApparatus, CurvatureJets)>> = grid
        .par_iter()
        .map(|&t| analyze_point(curve, t, jet_order, tol))
        .collect();
    let mut points = Vec::with_capacity(grid.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => points.push(p),
            Err(e) => {
                return Err(Error::AtSample {
                    index,
                    t: grid[index],
                    source: Box::new(e),
                })
            }
        }
    }
    let arclength = cumulative_arclength(curve, grid, tol.arclength)?;
    let mut samples: Vec<Sample> = points
        .into_iter()
        .zip(arclength)
        .enumerate()
        .map(|(index, ((apparatus, curvature), s))| Sample {
            index,
            t: apparatus.t,
            s,
            apparatus,
            curvature,
        })
        .collect();
    let warnings = orientation_pass(&mut samples);
    Ok(SampledCurve { samples, warnings })
}

/// Keeps `det[T, N, B, E] = +1` along the grid and reports trinormal
/// discontinuities between neighbours. A negative determinant is repaired
/// by negating `E` and `σ`.
pub fn orientation_pass(samples: &mut [Sample]) -> Vec<String> {
    let mut warnings = Vec::new();
    for s in samples.iter_mut() {
        if s.apparatus.frame.det() < 0.0 {
            let a = &mut s.apparatus;
            a.frame.e = -a.frame.e;
            a.sigma = -a.sigma;
            a.mu = -a.mu;
            s.curvature.sigma = -&s.curvature.sigma;
            let msg = format!("sample {} (t = {}): orientation flipped to keep det = +1", s.index, s.t);
            warn!("{msg}");
            warnings.push(msg);
        }
    }
    for w in samples.windows(2) {
        if w[0].apparatus.frame.e.dot(w[1].apparatus.frame.e) < 0.0 {
            let msg = format!(
                "samples {} and {}: trinormal reverses between neighbours",
                w[0].index, w[1].index
            );
            warn!("{msg}");
            warnings.push(msg);
        }
    }
    warnings
}
