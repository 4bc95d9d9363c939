//! Eigenvalue behaviour under rapid oscillation: sweeps of λ_k^±(ε) for the
//! rescaled problem a(x/ε), ρ(x/ε) on a fixed interval.
//!
//! The mean of ρ over one period decides the fate of each ladder:
//! a ladder whose sign matches sign(ρ̄) converges to the homogenized value
//! (a*/ρ̄)(kπ_p/L)^p; with ρ̄ = 0 both ladders escape at rate 1/ε (the
//! primitive of ρ_ε collapses, and the k-th-eigenvalue inequality turns that
//! into a lower bound); with mismatched signs the ladder escapes at rate
//! ε^{−p} (the mean term dominates the weighted norm unless the gradient is
//! enormous). Every emitted lower bound is a theorem evaluated exactly on the
//! rescaled weight, so sweeps double as a certified divergence check.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmath::{pi_p, PExponent};
use crate::quad;
use crate::shooting::{eigenvalue_with, ProblemSpec, Sign, SolveOptions};
use crate::weights::{PiecewiseWeight, DEFAULT_SEGMENT_CAP};

/// How a ladder behaves as ε → 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitClass {
    /// sign(λ) = sign(ρ̄): λ_k(ε) → (a*/ρ̄)(kπ_p/L)^p.
    Converging,
    /// ρ̄ = 0: |λ_k(ε)| ≥ C_k/ε → ∞.
    DivergingZeroMean,
    /// sign(λ) ≠ sign(ρ̄) ≠ 0: |λ_k(ε)| ≥ C/ε^p → ∞.
    DivergingMismatch,
}

/// Which ladders a sweep covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignChoice {
    Plus,
    Minus,
    Both,
}

impl SignChoice {
    pub fn signs(self) -> &'static [Sign] {
        match self {
            SignChoice::Plus => &[Sign::Plus],
            SignChoice::Minus => &[Sign::Minus],
            SignChoice::Both => &[Sign::Plus, Sign::Minus],
        }
    }
}

/// Sweep specification: which problem, which ε, which rungs, which ladders.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub base: ProblemSpec,
    pub epsilons: Vec<f64>,
    pub k_list: Vec<usize>,
    pub signs: SignChoice,
    pub options: SolveOptions,
    /// Cap on segments a rescaled weight may occupy.
    pub segment_cap: usize,
    /// Ramp width of the test functions behind the upper bound, as a fraction
    /// of each of the k subintervals.
    pub ramp_fraction: f64,
}

impl SweepConfig {
    pub fn new(base: ProblemSpec) -> Self {
        let options = SolveOptions::for_p(base.p());
        Self {
            base,
            epsilons: default_epsilons(),
            k_list: vec![1, 2],
            signs: SignChoice::Plus,
            options,
            segment_cap: DEFAULT_SEGMENT_CAP,
            ramp_fraction: 0.25,
        }
    }
}

/// ε ∈ {2⁻², …, 2⁻⁶}: integer period counts for any base length.
pub fn default_epsilons() -> Vec<f64> {
    (2..=6).map(|j| 0.5f64.powi(j)).collect()
}

/// One (ε, k, sign) entry of a sweep. Bounds refer to |λ|; the converging
/// entries also carry the homogenized limit and the distance to it. A row
/// that failed keeps its coordinates and records the failure instead.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub k: usize,
    pub sign: Sign,
    pub class: LimitClass,
    pub lambda: Option<f64>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub limit: Option<f64>,
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Least-squares rate of one rung: slope of log |λ − limit| against log ε for
/// converging ladders, slope of log |λ| against log(1/ε) for diverging ones.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateFit {
    pub k: usize,
    pub rate: Option<f64>,
    pub final_abs_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderSummary {
    pub sign: Sign,
    pub class: LimitClass,
    pub rates: Vec<RateFit>,
}

/// Complete sweep output; `rows` are sorted by (ε descending, k, sign).
#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub p: f64,
    pub length: f64,
    pub rho_mean: f64,
    pub a_star: f64,
    pub rows: Vec<SweepRow>,
    pub ladders: Vec<LadderSummary>,
}

impl SweepResult {
    /// CSV with the fixed column set; empty cells where a value does not
    /// apply. The header line is optional so outputs can be concatenated.
    pub fn to_csv(&self, with_column_header: bool) -> String {
        let mut out = String::new();
        if with_column_header {
            out.push_str("epsilon,k,sign,lambda,lower_bound,upper_bound,limit,abs_error\n");
        }
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.epsilon,
                r.k,
                r.sign.as_str(),
                cell(r.lambda),
                cell(r.lower_bound),
                cell(r.upper_bound),
                cell(r.limit),
                cell(r.abs_error),
            ));
        }
        out
    }
}

/// The homogenized eigenvalue (a*/ρ̄)(kπ_p/L)^p; carries the sign of ρ̄.
pub fn limit_eigenvalue(p: f64, length: f64, a_star: f64, rho_mean: f64, k: usize) -> Result<f64> {
    PExponent::new(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    if rho_mean == 0.0 {
        return Err(Error::Domain(
            "the weight has zero mean; the ladder diverges and has no finite limit".into(),
        ));
    }
    if !(a_star > 0.0) {
        return Err(Error::Domain(format!("a* must be positive, got {a_star}")));
    }
    Ok(a_star / rho_mean * (k as f64 * pi_p(p)? / length).powf(p))
}

/// Lower bound for the zero-mean class: the k-th-eigenvalue inequality plus
/// sup|∫ρ_ε| ≤ ε‖ρ‖₁ gives |λ_k(ε)| ≥ k^{p−1} a*_ε / (p ε ‖ρ‖₁).
pub fn divergence_lower_bound(
    p: f64,
    k: usize,
    eps: f64,
    a_star_eps: f64,
    rho_l1: f64,
) -> Result<f64> {
    PExponent::new(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    if !(eps > 0.0 && a_star_eps > 0.0 && rho_l1 > 0.0) {
        return Err(Error::Domain(format!(
            "divergence bound needs eps, a*, and the weight mass positive; got \
             eps = {eps}, a* = {a_star_eps}, l1 = {rho_l1}"
        )));
    }
    Ok((k as f64).powf(p - 1.0) * a_star_eps / (p * eps * rho_l1))
}

/// Lower bound for the mismatched class (sign(λ) opposite to sign(ρ̄)): with
/// σ = ρ − ρ̄ and S = sup|∫σ| over a period, every eigenvalue of the wrong
/// sign satisfies |λ| ≥ a_min |ρ̄|^{p−1} / (p ε S)^p. Infinite when σ ≡ 0:
/// a one-signed constant weight has no wrong-sign ladder at all.
pub fn comparison_shift_bound(
    p: f64,
    eps: f64,
    a_min: f64,
    rho_mean: f64,
    sigma_sup_primitive: f64,
) -> Result<f64> {
    PExponent::new(p)?;
    if !(eps > 0.0 && a_min > 0.0) {
        return Err(Error::Domain(format!(
            "comparison bound needs eps and min a positive; got eps = {eps}, a_min = {a_min}"
        )));
    }
    if rho_mean == 0.0 {
        return Err(Error::Domain(
            "comparison bound applies only to weights with nonzero mean".into(),
        ));
    }
    if sigma_sup_primitive <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(a_min * rho_mean.abs().powf(p - 1.0) / (p * eps * sigma_sup_primitive).powf(p))
}

/// Upper-bound report from k disjoint trapezoid test functions.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TestFunctionBound {
    /// 8 k^{p+3} ‖a‖₁ / (h^p L² ρ̄) with h the ramp fraction — the bound the
    /// test functions actually certify once the gate below holds.
    pub full: f64,
    /// The simplified constant 8 k^{p+3} / (L² ρ̄) quoted alongside.
    pub printed: f64,
    /// Whether ∫ρ_ε|w|^p ≥ ½ ρ̄ ∫|w|^p held for every translate w; the bound
    /// is only asserted when it does.
    pub gate_holds: bool,
}

/// Evaluates the trapezoid-test-function upper bound for a converging ladder.
/// `rho_eps` must be oriented so its mean `rho_mean` is positive (negate both
/// for the negative ladder).
pub fn test_function_upper_bound(
    p: f64,
    k: usize,
    a_l1: f64,
    rho_eps: &PiecewiseWeight,
    rho_mean: f64,
    ramp_fraction: f64,
) -> Result<TestFunctionBound> {
    PExponent::new(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    if !(rho_mean > 0.0) {
        return Err(Error::Domain(format!(
            "the test-function bound needs a positive mean, got {rho_mean}"
        )));
    }
    if !(ramp_fraction > 0.0 && ramp_fraction <= 0.25) {
        return Err(Error::Domain(format!(
            "ramp fraction must lie in (0, 1/4], got {ramp_fraction}"
        )));
    }
    let l = rho_eps.length();
    let kf = k as f64;
    let full = 8.0 * kf.powf(p + 3.0) * a_l1 / (ramp_fraction.powf(p) * l * l * rho_mean);
    let printed = 8.0 * kf.powf(p + 3.0) / (l * l * rho_mean);

    // Gate: each translate of the trapezoid must see at least half the mean.
    let sub = l / kf;
    let ramp = ramp_fraction * sub;
    let mut gate_holds = true;
    for i in 0..k {
        let x0 = i as f64 * sub;
        let w = move |x: f64| -> f64 {
            let t = x - x0;
            if t <= 0.0 || t >= sub {
                0.0
            } else if t < ramp {
                t / ramp
            } else if t > sub - ramp {
                (sub - t) / ramp
            } else {
                1.0
            }
        };
        let mut knots: Vec<f64> = rho_eps
            .breakpoints()
            .into_iter()
            .filter(|&x| x > x0 && x < x0 + sub)
            .collect();
        knots.extend([x0, x0 + ramp, x0 + sub - ramp, x0 + sub]);
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|u, v| (*u - *v).abs() <= 1e-14 * l);
        let weighted = quad::integrate_with_knots(
            &|x| rho_eps.value_clamped(x) * w(x).powf(p),
            &knots,
            1e-12,
            1e-9,
        )?;
        let plain =
            quad::integrate_with_knots(&|x| w(x).powf(p), &knots, 1e-12, 1e-9)?;
        if weighted < 0.5 * rho_mean * plain {
            gate_holds = false;
            break;
        }
    }
    Ok(TestFunctionBound { full, printed, gate_holds })
}

fn classify(sign: Sign, rho_mean: f64) -> LimitClass {
    if rho_mean == 0.0 {
        LimitClass::DivergingZeroMean
    } else if (sign == Sign::Plus) == (rho_mean > 0.0) {
        LimitClass::Converging
    } else {
        LimitClass::DivergingMismatch
    }
}

/// Runs the full sweep. Rows are computed in parallel and failures stay
/// confined to their own row.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    let base = &config.base;
    let p = base.p();
    let length = base.length();
    if config.epsilons.is_empty() || config.k_list.is_empty() {
        return Err(Error::Domain("sweep needs at least one epsilon and one k".into()));
    }
    for &eps in &config.epsilons {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1], got {eps}")));
        }
    }
    if config.k_list.iter().any(|&k| k == 0) {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }

    let sp = base.rho().split_parts();
    // Means within rounding of zero are treated as exactly zero: the
    // classification must not flip on the last bit of an exact cancellation.
    let rho_mean = if sp.mean.abs() * length <= 1e-10 * sp.l1 { 0.0 } else { sp.mean };
    let rho_l1 = sp.l1;
    let a_star = base.a().harmonic_mean_star(p)?;
    let a_min = base.a().min_max().0;
    let sigma_sup = if rho_mean == 0.0 {
        0.0
    } else {
        base.rho().add_constant(-rho_mean).sup_abs_primitive()
    };

    let mut tasks: Vec<(f64, usize, Sign)> = Vec::new();
    for &eps in &config.epsilons {
        for &k in &config.k_list {
            for &sign in config.signs.signs() {
                tasks.push((eps, k, sign));
            }
        }
    }

    let mut rows: Vec<SweepRow> = tasks
        .par_iter()
        .map(|&(eps, k, sign)| {
            compute_row(config, eps, k, sign, rho_mean, rho_l1, a_star, a_min, sigma_sup)
        })
        .collect();

    rows.sort_by(|x, y| {
        y.epsilon
            .total_cmp(&x.epsilon)
            .then(x.k.cmp(&y.k))
            .then((x.sign == Sign::Minus).cmp(&(y.sign == Sign::Minus)))
    });

    let ladders = config
        .signs
        .signs()
        .iter()
        .map(|&sign| LadderSummary {
            sign,
            class: classify(sign, rho_mean),
            rates: config
                .k_list
                .iter()
                .map(|&k| fit_rate(&rows, k, sign))
                .collect(),
        })
        .collect();

    Ok(SweepResult { p, length, rho_mean, a_star, rows, ladders })
}

#[allow(clippy::too_many_arguments)]
fn compute_row(
    config: &SweepConfig,
    eps: f64,
    k: usize,
    sign: Sign,
    rho_mean: f64,
    rho_l1: f64,
    a_star: f64,
    a_min: f64,
    sigma_sup: f64,
) -> SweepRow {
    let class = classify(sign, rho_mean);
    let mut row = SweepRow {
        epsilon: eps,
        k,
        sign,
        class,
        lambda: None,
        lower_bound: None,
        upper_bound: None,
        limit: None,
        abs_error: None,
        error: None,
    };
    match fill_row(config, eps, k, sign, rho_mean, rho_l1, a_star, a_min, sigma_sup, &mut row) {
        Ok(()) => {}
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    config: &SweepConfig,
    eps: f64,
    k: usize,
    sign: Sign,
    rho_mean: f64,
    rho_l1: f64,
    a_star: f64,
    a_min: f64,
    sigma_sup: f64,
    row: &mut SweepRow,
) -> Result<()> {
    let base = &config.base;
    let p = base.p();
    let length = base.length();
    let a_eps = base.a().rescale_periodic_with_cap(eps, config.segment_cap)?;
    let rho_eps = base.rho().rescale_periodic_with_cap(eps, config.segment_cap)?;
    let a_star_eps = a_eps.harmonic_mean_star(p)?;

    let mut opts = config.options;
    if row.class == LimitClass::Converging {
        let limit = limit_eigenvalue(p, length, a_star, rho_mean, k)?;
        row.limit = Some(limit);
        opts.initial_bracket = Some((limit.abs() / 4.0, limit.abs() * 4.0));
    }

    let pair = eigenvalue_with(&a_eps, &rho_eps, p, k, sign, &opts)?;
    row.lambda = Some(pair.lambda);

    match row.class {
        LimitClass::Converging => {
            let limit = row.limit.expect("set above");
            row.abs_error = Some((pair.lambda - limit).abs());
            // The k-th-eigenvalue inequality, evaluated exactly on the
            // rescaled weight.
            let osc = rho_eps.max_oscillation();
            if osc > 0.0 {
                row.lower_bound =
                    Some((k as f64).powf(p - 1.0) / p * a_star_eps / osc);
            }
            let (oriented_rho, oriented_mean) = if sign == Sign::Plus {
                (rho_eps, rho_mean)
            } else {
                (rho_eps.negate(), -rho_mean)
            };
            let a_l1 = a_eps.split_parts().positive;
            let tf = test_function_upper_bound(
                p,
                k,
                a_l1,
                &oriented_rho,
                oriented_mean,
                config.ramp_fraction,
            )?;
            if tf.gate_holds {
                row.upper_bound = Some(tf.full);
            }
        }
        LimitClass::DivergingZeroMean => {
            row.lower_bound = Some(divergence_lower_bound(p, k, eps, a_star_eps, rho_l1)?);
        }
        LimitClass::DivergingMismatch => {
            let b = comparison_shift_bound(p, eps, a_min, rho_mean, sigma_sup)?;
            row.lower_bound = Some(b);
        }
    }
    Ok(())
}

fn fit_rate(rows: &[SweepRow], k: usize, sign: Sign) -> RateFit {
    let mine: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.k == k && r.sign == sign && r.error.is_none())
        .collect();
    let points: Vec<(f64, f64)> = mine
        .iter()
        .filter_map(|r| match r.class {
            LimitClass::Converging => r
                .abs_error
                .filter(|&e| e > 1e-300)
                .map(|e| (r.epsilon.ln(), e.ln())),
            _ => r
                .lambda
                .map(f64::abs)
                .filter(|&l| l > 1e-300)
                .map(|l| ((1.0 / r.epsilon).ln(), l.ln())),
        })
        .collect();
    let final_abs_error = mine
        .iter()
        .min_by(|x, y| x.epsilon.total_cmp(&y.epsilon))
        .and_then(|r| r.abs_error);
    RateFit { k, rate: slope(&points), final_abs_error }
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}
