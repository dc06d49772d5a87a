//! Bertrand mates and involutes of helices.
//!
//! Each construction is an evaluable [`Curve`], so the generic Frenet
//! machinery can be run on it, and each has a closed-form apparatus in terms
//! of the base helix. [`crosscheck`] compares the two.

use serde::{Deserialize, Serialize};

use crate::classify::{is_helix, HelixCheck, Verdict};
use crate::curve::{Curve, Domain, ExprCurve, JetVec4};
use crate::error::{Error, Result};
use crate::expr::{Expr, Func};
use crate::frenet::{frenet_apparatus, sample_curve, tangent_normal_jets, FrenetApparatus, Tolerances};
use crate::jet::{Jet, DEFAULT_ORDER};
use crate::linalg::Frame4;
use crate::quadrature::{arclength, cumulative_arclength};

/// Grid size used to confirm that a base curve is a helix.
pub const HELIX_CHECK_SAMPLES: usize = 64;

fn verify_helix(base: &dyn Curve, tol: &Tolerances) -> Result<HelixCheck> {
    let grid = base.domain().grid(HELIX_CHECK_SAMPLES);
    let sampled = sample_curve(base, &grid, DEFAULT_ORDER, tol)?;
    let check = is_helix(&sampled.samples, tol)?;
    if check.check.verdict != Verdict::True {
        return Err(Error::NotAHelix(format!(
            "curvatures deviate from their means by up to {:e} (relative), tolerance {:e}",
            check.check.residual_max, tol.tol_const
        )));
    }
    Ok(check)
}

/// Frame and curvatures, however obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApparatusValues {
    pub frame: Frame4,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
}

impl From<&FrenetApparatus> for ApparatusValues {
    fn from(a: &FrenetApparatus) -> Self {
        ApparatusValues {
            frame: a.frame,
            kappa: a.kappa,
            tau: a.tau,
            sigma: a.sigma,
        }
    }
}

// ---------------------------------------------------------------------------
// Bertrand mates

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BertrandCoefficients {
    pub lambda: f64,
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub l1: f64,
    pub l2: f64,
}

impl BertrandCoefficients {
    pub fn new(kappa: f64, tau: f64, sigma: f64, lambda: f64) -> BertrandCoefficients {
        let kt = kappa * kappa + tau * tau;
        let kts = kt + sigma * sigma;
        let u = 1.0 - lambda * kappa;
        let w = lambda * tau;
        let p = kappa - lambda * kt;
        let q = lambda * tau * sigma;
        BertrandCoefficients {
            lambda,
            k: u.hypot(w),
            l: p.hypot(q),
            m: tau * (lambda * kts - kappa * (1.0 + lambda * lambda * sigma * sigma)),
            l1: kappa.powi(3) * (lambda * kappa - 1.0)
                + lambda * tau * tau * (2.0 * kappa * kappa + tau * tau + sigma * sigma),
            l2: tau * sigma * (kappa - lambda * kts),
        }
    }

    /// `K` is a speed ratio; `L` has the units of a curvature and is judged
    /// against `scale`.
    fn check(&self, scale: f64, tol: &Tolerances) -> Result<()> {
        if !(self.k > tol.eps_deg) || !(self.l > tol.eps_deg * scale) {
            return Err(Error::SingularMate { k: self.k, l: self.l });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BertrandMateApparatus {
    pub frame: Frame4,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
    /// `ds_ξ/ds = K`.
    pub speed_ratio: f64,
    pub coefficients: BertrandCoefficients,
}

impl BertrandMateApparatus {
    pub fn values(&self) -> ApparatusValues {
        ApparatusValues {
            frame: self.frame,
            kappa: self.kappa,
            tau: self.tau,
            sigma: self.sigma,
        }
    }

    /// `√(τ_ξ² + σ_ξ²)/(κ_ξ σ_ξ)`.
    pub fn sphere_radius(&self) -> f64 {
        self.tau.hypot(self.sigma) / (self.kappa * self.sigma)
    }
}

/// Closed-form apparatus of `ξ = δ + λN` from the apparatus of the helix δ.
pub fn bertrand_apparatus(delta: &FrenetApparatus, lambda: f64, tol: &Tolerances) -> Result<BertrandMateApparatus> {
    let (kappa, tau, sigma) = (delta.kappa, delta.tau, delta.sigma);
    let co = BertrandCoefficients::new(kappa, tau, sigma, lambda);
    co.check(kappa.max(tau).max(sigma.abs()), tol)?;
    let f = &delta.frame;
    let u = 1.0 - lambda * kappa;
    let w = lambda * tau;
    let p = kappa - lambda * (kappa * kappa + tau * tau);
    let q = lambda * tau * sigma;
    // Ratios first, so that λ = 0 reproduces the base apparatus bit for bit.
    let (u, w, p, q) = (u / co.k, w / co.k, p / co.l, q / co.l);
    let frame = Frame4::new(
        u * f.t + w * f.b,
        p * f.n + q * f.e,
        u * f.b - w * f.t,
        p * f.e - q * f.n,
    );
    let m_over_l = tau
        * ((lambda * (kappa * kappa + tau * tau + sigma * sigma) - kappa * (1.0 + lambda * lambda * sigma * sigma))
            / co.l);
    Ok(BertrandMateApparatus {
        frame,
        kappa: co.l / (co.k * co.k),
        tau: m_over_l / (co.k * co.k),
        sigma: sigma * (kappa / co.l),
        speed_ratio: co.k,
        coefficients: co,
    })
}

/// `√(τ² + (1 − λκ)²σ²)/(κσ)`, the simplified mate sphere radius.
pub fn bertrand_radius_simplified(kappa: f64, tau: f64, sigma: f64, lambda: f64) -> f64 {
    tau.hypot((1.0 - lambda * kappa) * sigma) / (kappa * sigma)
}

/// The curve `ξ(t) = δ(t) + λ N(t)` over a helix δ.
#[derive(Clone, Debug)]
pub struct BertrandMate<C> {
    base: C,
    lambda: f64,
    tol: Tolerances,
    helix: HelixCheck,
    coefficients: BertrandCoefficients,
}

impl<C: Curve> BertrandMate<C> {
    pub fn new(base: C, lambda: f64, tol: &Tolerances) -> Result<BertrandMate<C>> {
        if !lambda.is_finite() {
            return Err(Error::InvalidSpec(format!("lambda must be finite, got {lambda}")));
        }
        let helix = verify_helix(&base, tol)?;
        let coefficients = BertrandCoefficients::new(helix.kappa, helix.tau, helix.sigma, lambda);
        coefficients.check(helix.kappa.max(helix.tau).max(helix.sigma.abs()), tol)?;
        Ok(BertrandMate {
            base,
            lambda,
            tol: *tol,
            helix,
            coefficients,
        })
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn helix(&self) -> &HelixCheck {
        &self.helix
    }

    pub fn coefficients(&self) -> &BertrandCoefficients {
        &self.coefficients
    }

    /// Closed-form apparatus at base parameter `t`.
    pub fn closed_form(&self, t: f64) -> Result<BertrandMateApparatus> {
        let a = frenet_apparatus(&self.base, t, &self.tol)?;
        bertrand_apparatus(&a, self.lambda, &self.tol)
    }
}

impl<C: Curve> Curve for BertrandMate<C> {
    fn domain(&self) -> Domain {
        self.base.domain()
    }

    fn jet(&self, t: f64, order: usize) -> Result<JetVec4> {
        let raw = self.base.jet(t, order)?;
        let (_, _, n) = tangent_normal_jets(&self.base, t, order, &self.tol)?;
        Ok(raw.add(&n.scale_f64(self.lambda)))
    }
}

// ---------------------------------------------------------------------------
// Involutes

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvoluteConstants {
    /// `κ_ξ √s_ξ`.
    pub a1: f64,
    /// `τ_ξ √s_ξ`, from substituting the arclength relation.
    pub a2: f64,
    /// The square-root-free form `−τσ/(2κ(κ² + τ²))` that also circulates
    /// for this constant; it does not reproduce `τ_ξ √s_ξ`.
    pub a2_printed: f64,
    /// `σ_ξ √s_ξ`.
    pub a3: f64,
}

impl InvoluteConstants {
    pub fn new(kappa: f64, tau: f64, sigma: f64) -> InvoluteConstants {
        let r2 = kappa * kappa + tau * tau;
        InvoluteConstants {
            a1: (r2 / (2.0 * kappa)).sqrt(),
            a2: tau * sigma / (2.0 * kappa * r2).sqrt(),
            a2_printed: -tau * sigma / (2.0 * kappa * r2),
            a3: -sigma * kappa.sqrt() / (2.0 * r2).sqrt(),
        }
    }

    /// Slope of the squared sphere radius of the involute as a function of
    /// its arclength `s_ξ`.
    pub fn sphere_slope(&self) -> f64 {
        (self.a2 * self.a2 + self.a3 * self.a3) / (self.a1 * self.a1 * self.a3 * self.a3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvoluteApparatus {
    pub frame: Frame4,
    pub kappa: f64,
    pub tau: f64,
    pub sigma: f64,
    /// `ds_ξ/ds = κ|c − s|`.
    pub speed_ratio: f64,
    /// Involute arclength `κ(c − s)²/2`.
    pub s_xi: f64,
    pub constants: InvoluteConstants,
}

impl InvoluteApparatus {
    pub fn values(&self) -> ApparatusValues {
        ApparatusValues {
            frame: self.frame,
            kappa: self.kappa,
            tau: self.tau,
            sigma: self.sigma,
        }
    }
}

/// Closed-form apparatus of the involute `ξ = δ + (c − s)T` at arclength
/// `s` of the helix δ.
pub fn involute_apparatus(delta: &FrenetApparatus, s: f64, c: f64, tol: &Tolerances) -> Result<InvoluteApparatus> {
    let d = c - s;
    let (kappa, tau, sigma) = (delta.kappa, delta.tau, delta.sigma);
    if !(d.abs() * kappa > tol.eps_deg) {
        return Err(Error::SingularPoint { s });
    }
    let r = kappa.hypot(tau);
    let f = &delta.frame;
    let frame = Frame4::new(
        f.n,
        (1.0 / r) * (tau * f.b - kappa * f.t),
        -f.e,
        (1.0 / r) * (tau * f.t + kappa * f.b),
    );
    let ad = d.abs();
    Ok(InvoluteApparatus {
        frame,
        kappa: r / (kappa * ad),
        tau: tau * sigma / (kappa * r * ad),
        sigma: -sigma / (r * ad),
        speed_ratio: kappa * ad,
        s_xi: kappa * d * d / 2.0,
        constants: InvoluteConstants::new(kappa, tau, sigma),
    })
}

/// The involute `ξ = δ + (c − s)T` of a helix δ, with `s` the arc length of
/// δ measured from the start of its domain.
#[derive(Clone, Debug)]
pub struct Involute<C> {
    base: C,
    c: f64,
    tol: Tolerances,
    helix: HelixCheck,
    length: f64,
    /// Cumulative base arc length at evenly spaced parameters, so that `s(t)`
    /// only needs a short integral from the nearest knot.
    knots: Vec<(f64, f64)>,
}

const ARCLENGTH_KNOTS: usize = 65;

impl<C: Curve> Involute<C> {
    /// Fails with `SingularPoint` when `c` falls inside the arc-length range
    /// of the domain, where the involute has a cusp.
    pub fn new(base: C, c: f64, tol: &Tolerances) -> Result<Involute<C>> {
        if !c.is_finite() {
            return Err(Error::InvalidSpec(format!("c must be finite, got {c}")));
        }
        let helix = verify_helix(&base, tol)?;
        let grid = base.domain().grid(ARCLENGTH_KNOTS);
        let cumulative = cumulative_arclength(&base, &grid, tol.arclength)?;
        let length = *cumulative.last().expect("non-empty grid");
        if c >= 0.0 && c <= length {
            return Err(Error::SingularPoint { s: c });
        }
        Ok(Involute {
            base,
            c,
            tol: *tol,
            helix,
            length,
            knots: grid.into_iter().zip(cumulative).collect(),
        })
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn helix(&self) -> &HelixCheck {
        &self.helix
    }

    /// Arc length of the base over its whole domain.
    pub fn base_length(&self) -> f64 {
        self.length
    }

    /// Arc length of the base from `t_min` to `t`.
    pub fn base_arclength(&self, t: f64) -> Result<f64> {
        let k = self.knots.partition_point(|&(tk, _)| tk <= t).saturating_sub(1);
        let (tk, sk) = self.knots[k];
        let per_knot = self.tol.arclength / ARCLENGTH_KNOTS as f64;
        Ok(sk + arclength(&self.base, tk, t, per_knot)?)
    }

    pub fn closed_form(&self, t: f64) -> Result<InvoluteApparatus> {
        let a = frenet_apparatus(&self.base, t, &self.tol)?;
        involute_apparatus(&a, self.base_arclength(t)?, self.c, &self.tol)
    }
}

impl<C: Curve> Curve for Involute<C> {
    fn domain(&self) -> Domain {
        self.base.domain()
    }

    fn jet(&self, t: f64, order: usize) -> Result<JetVec4> {
        let raw = self.base.jet(t, order)?;
        let (v, tangent, _) = tangent_normal_jets(&self.base, t, order, &self.tol)?;
        let s0 = self.base_arclength(t)?;
        if !((self.c - s0).abs() > self.tol.eps_deg * self.length.max(1.0)) {
            return Err(Error::SingularPoint { s: s0 });
        }
        let s = if order == 0 {
            Jet::constant(s0, 0)
        } else {
            v.truncate(order - 1).integrate(s0)
        };
        let offset = (-&s).add_scalar(self.c);
        Ok(raw.add(&tangent.scale(&offset)))
    }
}

// ---------------------------------------------------------------------------
// Cross-checking

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorDiscrepancy {
    pub name: String,
    /// `min(‖a − b‖, ‖a + b‖)`.
    pub distance: f64,
    /// Sign relating the closed-form vector to the oracle vector.
    pub sign: i8,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantityDiscrepancy {
    pub name: String,
    pub closed_form: f64,
    pub oracle: f64,
    /// Relative difference of the magnitudes.
    pub relative_difference: f64,
    pub sign_agrees: bool,
    /// Whether a sign difference is the one forced by the frame signs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_explained_by_frame: Option<bool>,
    pub verdict: Verdict,
}

impl QuantityDiscrepancy {
    pub fn new(name: &str, closed_form: f64, oracle: f64, tol: f64) -> QuantityDiscrepancy {
        let scale = oracle.abs().max(closed_form.abs()).max(f64::MIN_POSITIVE);
        let rel = (closed_form.abs() - oracle.abs()).abs() / scale;
        QuantityDiscrepancy {
            name: name.to_string(),
            closed_form,
            oracle,
            relative_difference: rel,
            sign_agrees: closed_form.signum() == oracle.signum(),
            sign_explained_by_frame: None,
            verdict: if rel <= tol { Verdict::True } else { Verdict::False },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub t: f64,
    pub vectors: Vec<VectorDiscrepancy>,
    pub quantities: Vec<QuantityDiscrepancy>,
}

impl DiscrepancyReport {
    pub fn max_vector_distance(&self) -> f64 {
        self.vectors.iter().map(|v| v.distance).fold(0.0, f64::max)
    }

    pub fn max_relative_difference(&self) -> f64 {
        self.quantities
            .iter()
            .map(|q| q.relative_difference)
            .fold(0.0, f64::max)
    }

    pub fn quantity(&self, name: &str) -> Option<&QuantityDiscrepancy> {
        self.quantities.iter().find(|q| q.name == name)
    }

    /// Names of everything that disagrees beyond tolerance.
    pub fn flagged(&self) -> Vec<String> {
        let v = self
            .vectors
            .iter()
            .filter(|v| v.verdict != Verdict::True)
            .map(|v| v.name.clone());
        let q = self
            .quantities
            .iter()
            .filter(|q| q.verdict != Verdict::True)
            .map(|q| q.name.clone());
        v.chain(q).collect()
    }

    pub fn frame_signs(&self) -> Vec<i8> {
        self.vectors.iter().map(|v| v.sign).collect()
    }
}

/// Compares a closed-form apparatus with one computed directly on the
/// constructed curve. Frame vectors are matched up to sign; curvatures by
/// magnitude, with the sign relation recorded against the frame signs.
pub fn crosscheck(t: f64, closed: &ApparatusValues, oracle: &FrenetApparatus, tol: &Tolerances) -> DiscrepancyReport {
    let names = ["T", "N", "B", "E"];
    let cf = closed.frame.vectors();
    let or = oracle.frame.vectors();
    let vectors: Vec<VectorDiscrepancy> = (0..4)
        .map(|i| {
            let (distance, sign) = cf[i].distance_up_to_sign(or[i]);
            VectorDiscrepancy {
                name: names[i].to_string(),
                distance,
                sign: sign as i8,
                verdict: if distance <= tol.crosscheck {
                    Verdict::True
                } else {
                    Verdict::False
                },
            }
        })
        .collect();
    let eps: Vec<i8> = vectors.iter().map(|v| v.sign).collect();
    let mut quantities = Vec::with_capacity(3);
    for (name, c, o, (i, j)) in [
        ("kappa", closed.kappa, oracle.kappa, (0, 1)),
        ("tau", closed.tau, oracle.tau, (1, 2)),
        ("sigma", closed.sigma, oracle.sigma, (2, 3)),
    ] {
        let mut q = QuantityDiscrepancy::new(name, c, o, tol.crosscheck);
        let forced = eps[i] * eps[j];
        let observed: i8 = if q.sign_agrees { 1 } else { -1 };
        q.sign_explained_by_frame = Some(forced == observed);
        quantities.push(q);
    }
    DiscrepancyReport { t, vectors, quantities }
}

/// Involute constants against `κ_ξ √s_ξ`, `τ_ξ √s_ξ`, `σ_ξ √s_ξ` measured
/// on the constructed curve.
pub fn involute_constants_check(
    closed: &InvoluteApparatus,
    oracle: &FrenetApparatus,
    tol: &Tolerances,
) -> Vec<QuantityDiscrepancy> {
    let root = closed.s_xi.sqrt();
    let c = &closed.constants;
    vec![
        QuantityDiscrepancy::new("A1", c.a1, oracle.kappa * root, tol.crosscheck),
        QuantityDiscrepancy::new("A2", c.a2, oracle.tau * root, tol.crosscheck),
        QuantityDiscrepancy::new("A2_printed", c.a2_printed, oracle.tau * root, tol.crosscheck),
        QuantityDiscrepancy::new("A3", c.a3, oracle.sigma * root, tol.crosscheck),
    ]
}

/// Worst case of one named entry across a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub name: String,
    /// Largest distance (vectors) or relative difference (scalars).
    pub max_difference: f64,
    /// Values at the worst sample; null for vectors.
    pub closed_form: Option<f64>,
    pub oracle: Option<f64>,
    /// Sign relating closed form to oracle, when it is the same everywhere.
    pub sign: Option<i8>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancySummary {
    pub samples: usize,
    pub entries: Vec<EntrySummary>,
    pub flagged: Vec<String>,
}

fn consistent_sign(signs: impl Iterator<Item = i8>) -> Option<i8> {
    let mut out = None;
    for s in signs {
        match out {
            None => out = Some(s),
            Some(p) if p != s => return None,
            _ => {}
        }
    }
    out
}

pub fn summarize(reports: &[DiscrepancyReport]) -> DiscrepancySummary {
    let mut entries = Vec::new();
    if let Some(first) = reports.first() {
        for (i, v) in first.vectors.iter().enumerate() {
            let max = reports.iter().map(|r| r.vectors[i].distance).fold(0.0, f64::max);
            let ok = reports.iter().all(|r| r.vectors[i].verdict == Verdict::True);
            entries.push(EntrySummary {
                name: v.name.clone(),
                max_difference: max,
                closed_form: None,
                oracle: None,
                sign: consistent_sign(reports.iter().map(|r| r.vectors[i].sign)),
                verdict: if ok { Verdict::True } else { Verdict::False },
            });
        }
        for (i, q) in first.quantities.iter().enumerate() {
            let worst = reports.iter().map(|r| &r.quantities[i]).fold(q, |a, b| {
                if b.relative_difference > a.relative_difference {
                    b
                } else {
                    a
                }
            });
            let ok = reports.iter().all(|r| r.quantities[i].verdict == Verdict::True);
            entries.push(EntrySummary {
                name: q.name.clone(),
                max_difference: worst.relative_difference,
                closed_form: Some(worst.closed_form),
                oracle: Some(worst.oracle),
                sign: consistent_sign(reports.iter().map(|r| if r.quantities[i].sign_agrees { 1 } else { -1 })),
                verdict: if ok { Verdict::True } else { Verdict::False },
            });
        }
    }
    let flagged = entries
        .iter()
        .filter(|e| e.verdict != Verdict::True)
        .map(|e| e.name.clone())
        .collect();
    DiscrepancySummary {
        samples: reports.len(),
        entries,
        flagged,
    }
}

// ---------------------------------------------------------------------------
// Writing constructions back out as expressions

fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
    terms.into_iter().fold(Expr::Num(0.0), Expr::add)
}

fn derivatives(base: &ExprCurve) -> ([Expr; 4], [Expr; 4]) {
    let d1 = base.components().clone().map(|c| c.derivative());
    let d2 = d1.clone().map(|c| c.derivative());
    (d1, d2)
}

/// `δ + λN` written as four expressions.
pub fn bertrand_mate_expr(base: &ExprCurve, lambda: f64) -> Result<ExprCurve> {
    let (d1, d2) = derivatives(base);
    let v2 = sum(d1.iter().map(|a| Expr::mul(a.clone(), a.clone())));
    let dd = sum(d1.iter().zip(&d2).map(|(a, b)| Expr::mul(a.clone(), b.clone())));
    let w: Vec<Expr> = (0..4)
        .map(|i| {
            Expr::sub(
                Expr::mul(v2.clone(), d2[i].clone()),
                Expr::mul(dd.clone(), d1[i].clone()),
            )
        })
        .collect();
    let w_norm = Expr::call(Func::Sqrt, sum(w.iter().map(|x| Expr::mul(x.clone(), x.clone()))));
    let comps: Vec<Expr> = base
        .components()
        .iter()
        .zip(w)
        .map(|(a, wi)| Expr::add(a.clone(), Expr::mul(Expr::Num(lambda), Expr::div(wi, w_norm.clone()))))
        .collect();
    ExprCurve::new(
        comps.try_into().expect("four components"),
        base.env().clone(),
        base.domain(),
    )
}

/// Relative spread of the speed tolerated when writing an involute out.
const CONSTANT_SPEED_TOL: f64 = 1e-9;

/// `δ + (c − s)T` written as four expressions. This needs `s` in closed
/// form, so the base must have constant speed `v`, giving
/// `s = v(t − t_min)`.
pub fn involute_expr(base: &ExprCurve, c: f64) -> Result<ExprCurve> {
    let domain = base.domain();
    let speeds: Vec<f64> = domain.grid(33).iter().map(|&t| base.speed(t)).collect::<Result<_>>()?;
    let v = speeds.iter().sum::<f64>() / speeds.len() as f64;
    let spread = speeds.iter().map(|s| (s - v).abs()).fold(0.0, f64::max);
    if !(spread <= CONSTANT_SPEED_TOL * v) {
        return Err(Error::InvalidSpec(
            "writing an involute as expressions needs a constant-speed parameterization".to_string(),
        ));
    }
    let (d1, _) = derivatives(base);
    let s = Expr::mul(Expr::Num(v), Expr::sub(Expr::Var, Expr::Num(domain.t_min)));
    let offset = Expr::sub(Expr::Num(c), s);
    let comps: Vec<Expr> = base
        .components()
        .iter()
        .zip(d1)
        .map(|(a, da)| Expr::add(a.clone(), Expr::mul(offset.clone(), Expr::div(da, Expr::Num(v)))))
        .collect();
    ExprCurve::new(comps.try_into().expect("four components"), base.env().clone(), domain)
}
