//! Necessary inequalities relating eigenvalues, weights, and geometry.
//!
//! Every function returns a [`BoundReport`] pairing the two sides of one
//! inequality. The inequalities are necessary conditions for a nontrivial
//! solution to exist, so a violated report doubles as a nonexistence
//! certificate for the stated data. All right-hand sides are computed from
//! exact piecewise primitives — no quadrature error can flip a verdict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmath::PExponent;
use crate::weights::PiecewiseWeight;

/// Wire identifiers for the supported inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    ThmLyapi,
    ThmLyapu,
    Classical,
    HarrisKongLeft,
    HarrisKongRight,
    ThmLyapi2,
    ThmLyapimp,
    DasVatsalaReference,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::ThmLyapi => "thm_lyapi",
            BoundName::ThmLyapu => "thm_lyapu",
            BoundName::Classical => "classical",
            BoundName::HarrisKongLeft => "harris_kong_left",
            BoundName::HarrisKongRight => "harris_kong_right",
            BoundName::ThmLyapi2 => "thm_lyapi2",
            BoundName::ThmLyapimp => "thm_lyapimp",
            BoundName::DasVatsalaReference => "das_vatsala_reference",
        }
    }
}

/// The data a bound was evaluated on, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct BoundInputs {
    pub p: f64,
    pub length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<PiecewiseWeight>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<PiecewiseWeight>,
}

impl BoundInputs {
    fn bare(p: f64, length: f64) -> Self {
        Self { p, length, k: None, m: None, lambda: None, a: None, rho: None }
    }
}

/// One evaluated inequality lhs ≤ rhs.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub name: BoundName,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// rhs − lhs; negative iff violated.
    pub slack: f64,
    /// True exactly when a necessary condition failed: the stated problem
    /// data cannot belong to a nontrivial solution.
    pub certifies_nonexistence: bool,
    pub inputs: BoundInputs,
}

impl BoundReport {
    fn assemble(name: BoundName, lhs: f64, rhs: f64, inputs: BoundInputs) -> Self {
        let satisfied = lhs <= rhs + 1e-12 * rhs.abs().max(1.0);
        Self {
            name,
            lhs,
            rhs,
            satisfied,
            slack: rhs - lhs,
            certifies_nonexistence: !satisfied,
            inputs,
        }
    }

    /// Slack normalized by the dominant side; 0 means exactly tight, values
    /// near 1 mean the inequality is far from binding.
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.rhs.abs().max(self.lhs.abs()).max(f64::MIN_POSITIVE)
    }
}

/// First-eigenvalue inequality for −(a φ_p(u′))′ = w φ_p(u), u(0) = u(L) = 0:
/// a*/p ≤ sup_x |∫₀ˣ w|. Pass w = λρ to test an eigenvalue candidate.
pub fn bound_lyapi(a: &PiecewiseWeight, w: &PiecewiseWeight, p: f64) -> Result<BoundReport> {
    PExponent::new(p)?;
    same_length(a, w)?;
    let lhs = a.harmonic_mean_star(p)? / p;
    let rhs = w.sup_abs_primitive();
    let mut inputs = BoundInputs::bare(p, a.length());
    inputs.a = Some(a.clone());
    inputs.rho = Some(w.clone());
    Ok(BoundReport::assemble(BoundName::ThmLyapi, lhs, rhs, inputs))
}

/// k-th-eigenvalue inequality: (k^{p−1}/p)·a* ≤ |λ_k| · (max Q − min Q) with
/// Q the primitive of ρ. The oscillation of Q is invariant under ρ ↦ −ρ, so
/// the same report covers both ladders with the signed λ passed through.
pub fn bound_lyapu(
    a: &PiecewiseWeight,
    rho: &PiecewiseWeight,
    p: f64,
    k: usize,
    lambda: f64,
) -> Result<BoundReport> {
    PExponent::new(p)?;
    same_length(a, rho)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    let lhs = (k as f64).powf(p - 1.0) / p * a.harmonic_mean_star(p)?;
    let rhs = lambda.abs() * rho.max_oscillation();
    let mut inputs = BoundInputs::bare(p, a.length());
    inputs.k = Some(k);
    inputs.lambda = Some(lambda);
    inputs.a = Some(a.clone());
    inputs.rho = Some(rho.clone());
    Ok(BoundReport::assemble(BoundName::ThmLyapu, lhs, rhs, inputs))
}

/// Textbook inequality for the normalized problem (a ≡ 1):
/// 2^p k^p / L^{p−1} ≤ |λ_k| ∫ρ^± — the positive part for the positive
/// ladder, the negative part for λ < 0.
pub fn bound_classical(
    rho: &PiecewiseWeight,
    p: f64,
    k: usize,
    lambda: f64,
) -> Result<BoundReport> {
    PExponent::new(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    let l = rho.length();
    let lhs = 2f64.powf(p) * (k as f64).powf(p) / l.powf(p - 1.0);
    let sp = rho.split_parts();
    let part = if lambda >= 0.0 { sp.positive } else { sp.negative };
    let rhs = lambda.abs() * part;
    let mut inputs = BoundInputs::bare(p, l);
    inputs.k = Some(k);
    inputs.lambda = Some(lambda);
    inputs.rho = Some(rho.clone());
    Ok(BoundReport::assemble(BoundName::Classical, lhs, rhs, inputs))
}

/// One-sided pair for the normalized problem (a ≡ 1) with weight w = λρ:
/// 1 ≤ L^{p−1}·max Q  and  1 ≤ L^{p−1}·(Q(L) − min Q), with signed extrema
/// of the primitive Q — the positive part alone must carry the mass.
///
/// These are necessary conditions for the two mixed boundary problems
/// (left: u′(0) = u(L) = 0, right: u(0) = u′(L) = 0), not for the Dirichlet
/// problem; a Dirichlet eigenpair may legitimately violate either one, and a
/// violation certifies nonexistence for the corresponding mixed problem only.
pub fn bounds_harris_kong(w: &PiecewiseWeight, p: f64) -> Result<(BoundReport, BoundReport)> {
    PExponent::new(p)?;
    let l = w.length();
    let q = w.primitive();
    let (min_q, max_q) = q.min_max();
    let scale = l.powf(p - 1.0);
    let mut inputs = BoundInputs::bare(p, l);
    inputs.rho = Some(w.clone());
    let left = BoundReport::assemble(BoundName::HarrisKongLeft, 1.0, scale * max_q, inputs.clone());
    let right = BoundReport::assemble(
        BoundName::HarrisKongRight,
        1.0,
        scale * (q.final_value() - min_q),
        inputs,
    );
    Ok((left, right))
}

/// Clamped higher-order inequality for u with u^{(j)}(0) = u^{(j)}(L) = 0,
/// j < m, and weight w on the m-th order operator:
/// ((m−1)^{p−1}((m−2)!)^p / (p L^{p(m−1)}))·a* ≤ max_x ∫₀ˣ w.
pub fn bound_higher_order(
    a: &PiecewiseWeight,
    w: &PiecewiseWeight,
    p: f64,
    m: usize,
) -> Result<BoundReport> {
    PExponent::new(p)?;
    same_length(a, w)?;
    if m < 2 {
        return Err(Error::Domain(format!(
            "order m must be >= 2 (the constant involves (m-2)!), got {m}"
        )));
    }
    let l = a.length();
    let lhs = (m as f64 - 1.0).powf(p - 1.0) * factorial(m - 2).powf(p)
        / (p * l.powf(p * (m as f64 - 1.0)))
        * a.harmonic_mean_star(p)?;
    let rhs = w.primitive().signed_sup();
    let mut inputs = BoundInputs::bare(p, l);
    inputs.m = Some(m);
    inputs.a = Some(a.clone());
    inputs.rho = Some(w.clone());
    Ok(BoundReport::assemble(BoundName::ThmLyapimp, lhs, rhs, inputs))
}

/// Reference constant 4^{2m−1}(2m−1)((m−2)!)² / L^{2m−1} from the classical
/// second-order-and-beyond literature, for comparison against the clamped
/// bound's constant. 192 at (m, L) = (2, 1).
pub fn das_vatsala_constant(m: usize, length: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "order m must be >= 2 (the constant involves (m-2)!), got {m}"
        )));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::Domain(format!("length must be > 0, got {length}")));
    }
    let tm = 2 * m - 1;
    Ok(4f64.powi(tm as i32) * tm as f64 * factorial(m - 2).powi(2) / length.powi(tm as i32))
}

/// Sharp constant of the pointwise embedding: any u with
/// u(0) = u′(0) = … = u^{(m−1)}(0) = 0 satisfies
/// sup |u| ≤ C (∫ a|u^{(m)}|^p)^{1/p},
/// C = (L^{m−1}/(m−1)!)·(∫ a^{−1/(p−1)})^{(p−1)/p}.
pub fn taylor_embedding_constant(a: &PiecewiseWeight, p: f64, m: usize) -> Result<f64> {
    PExponent::new(p)?;
    if m < 1 {
        return Err(Error::Domain("order m starts at 1".into()));
    }
    let l = a.length();
    let integral = a.inv_conjugate_integral(p)?;
    Ok(l.powi(m as i32 - 1) / factorial(m - 1) * integral.powf((p - 1.0) / p))
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn same_length(a: &PiecewiseWeight, b: &PiecewiseWeight) -> Result<()> {
    let la = a.length();
    if (la - b.length()).abs() > 1e-12 * la.max(1.0) {
        return Err(Error::Domain(format!(
            "weights live on different intervals: {la} vs {}",
            b.length()
        )));
    }
    Ok(())
}
