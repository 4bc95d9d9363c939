//! Shooting solver for −(a φ_p(u′))′ = λ ρ φ_p(u) on (0, L) with u(0) = u(L) = 0.
//!
//! The equation is integrated as the first-order system
//!     u′ = a^{−1/(p−1)} φ_q(v),   v′ = −λ ρ φ_p(u),   v = a φ_p(u′),
//! from u(0) = 0, v(0) = 1. For fixed λ the number of interior zeros N(λ) of
//! u(·; λ) is nondecreasing in λ and jumps by one exactly at each eigenvalue
//! of the positive ladder, so λ_k is isolated by bisection on N and then
//! polished by a root find on the endpoint residual u(L)/sup|u|. The negative
//! ladder is the positive ladder of −ρ with λ negated — the trajectories are
//! literally identical.

use serde::{Deserialize, Serialize};

use crate::coefficient::{Coefficient, Negated};
use crate::error::{Error, Result};
use crate::pmath::{phi_p, pi_p, PExponent};
use crate::quad;
use crate::weights::PiecewiseWeight;

/// Which half of the spectrum an eigenvalue belongs to: λ > 0 or λ < 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tunable solver knobs; the defaults resolve eigenvalues to ~1e−8 residual.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub ode_rel_tol: f64,
    pub ode_abs_tol: f64,
    /// Accept λ once |u(L)| ≤ residual_tol · sup|u|.
    pub residual_tol: f64,
    /// Interior zeros are located to this absolute x accuracy.
    pub zero_x_tol: f64,
    /// Search aborts above this λ (the ladder is infinite; hitting the cap
    /// means the search itself went wrong).
    pub lambda_cap: f64,
    pub max_steps: usize,
    /// Trajectory samples are kept at least this dense across [0, L].
    pub sample_resolution: usize,
    /// Optional starting bracket for the λ search.
    pub initial_bracket: Option<(f64, f64)>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            ode_rel_tol: 1e-10,
            ode_abs_tol: 1e-12,
            residual_tol: 1e-8,
            zero_x_tol: 1e-10,
            lambda_cap: 1e9,
            max_steps: 500_000,
            sample_resolution: 512,
            initial_bracket: None,
        }
    }
}

impl SolveOptions {
    /// Defaults adjusted for the exponent: below p = 1.5 the flux map
    /// φ_q is strongly non-Lipschitz at v = 0, so tolerances are relaxed
    /// to keep steps from collapsing at the turning points.
    pub fn for_p(p: f64) -> Self {
        let mut o = Self::default();
        if p < 1.5 {
            o.ode_rel_tol = 1e-9;
            o.ode_abs_tol = 1e-11;
            o.residual_tol = 1e-7;
        }
        o
    }
}

/// One stored state sample (x, u, v) along a trajectory.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Sample {
    pub x: f64,
    pub u: f64,
    pub v: f64,
}

/// A point of a normalized eigenfunction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamplePoint {
    pub x: f64,
    pub u: f64,
}

/// Result of integrating the initial-value problem across [0, L].
///
/// The state is renormalized whenever it threatens overflow; u, v, and the
/// samples share one global scale, so ratios like u_end/sup_u and all zero
/// locations are unaffected.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub u_end: f64,
    pub v_end: f64,
    /// sup over the stored samples of |u| (same scale as u_end).
    pub sup_u: f64,
    /// Interior zeros of u, ascending. A zero within 1e−6·L of the right
    /// endpoint is attributed to the endpoint when the endpoint residual is
    /// below tolerance, so counts stay stable across the eigenvalue itself.
    pub zeros: Vec<f64>,
    pub end_is_zero: bool,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn zero_count(&self) -> usize {
        self.zeros.len()
    }

    /// |u(L)| / sup|u|.
    pub fn residual(&self) -> f64 {
        self.u_end.abs() / self.sup_u
    }
}

/// One converged eigenvalue with its normalized eigenfunction.
#[derive(Clone, Debug, Serialize)]
pub struct EigenPair {
    pub lambda: f64,
    pub k: usize,
    pub sign_class: Sign,
    /// Zeros of the eigenfunction on [0, L] including both endpoints; equals
    /// k + 1 for the k-th eigenvalue of either ladder.
    pub nodal_count: usize,
    /// |u(L)| / sup|u| at the accepted λ.
    pub residual: f64,
    /// Eigenfunction samples with sup|u| = 1 and u′(0) > 0.
    pub samples: Vec<SamplePoint>,
}

/// A validated eigenvalue problem (a, ρ, p) on [0, L] with min a > 0.
#[derive(Clone, Debug, Serialize)]
pub struct ProblemSpec {
    p: f64,
    a: PiecewiseWeight,
    rho: PiecewiseWeight,
}

impl ProblemSpec {
    pub fn new(p: f64, a: PiecewiseWeight, rho: PiecewiseWeight) -> Result<Self> {
        PExponent::new(p)?;
        let la = a.length();
        if (la - rho.length()).abs() > 1e-12 * la.max(1.0) {
            return Err(Error::Domain(format!(
                "coefficient and weight lengths differ: {} vs {}",
                la,
                rho.length()
            )));
        }
        let (lo, _) = a.min_max();
        if !(lo > 0.0) {
            return Err(Error::Domain(format!(
                "leading coefficient must be strictly positive, min = {lo}"
            )));
        }
        Ok(Self { p, a, rho })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> &PiecewiseWeight {
        &self.a
    }

    pub fn rho(&self) -> &PiecewiseWeight {
        &self.rho
    }

    pub fn length(&self) -> f64 {
        self.a.length()
    }

    pub fn eigenvalue(&self, k: usize, sign: Sign) -> Result<EigenPair> {
        self.eigenvalue_with_options(k, sign, &SolveOptions::for_p(self.p))
    }

    pub fn eigenvalue_with_options(
        &self,
        k: usize,
        sign: Sign,
        opts: &SolveOptions,
    ) -> Result<EigenPair> {
        eigenvalue_with(&self.a, &self.rho, self.p, k, sign, opts)
    }
}

// Dormand–Prince 5(4) coefficients.
const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Renormalize once the state exceeds this magnitude. The system is
/// p-homogeneous: (u, v) → (cu, φ_p(c)v) maps solutions to solutions.
const RENORM_THRESHOLD: f64 = 1e20;

type Y = [f64; 2];

/// Quartic dense-output interpolant for one accepted step.
struct DenseStep {
    r1: Y,
    r2: Y,
    r3: Y,
    r4: Y,
    r5: Y,
}

impl DenseStep {
    fn eval(&self, theta: f64) -> Y {
        let t1 = 1.0 - theta;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = self.r1[i]
                + theta
                    * (self.r2[i] + t1 * (self.r3[i] + theta * (self.r4[i] + t1 * self.r5[i])));
        }
        out
    }
}

struct Integrator<'a> {
    a: &'a dyn Coefficient,
    rho: &'a dyn Coefficient,
    lambda: f64,
    p: f64,
    q: f64,
    /// −1/(p−1), the exponent turning a into the flux factor.
    flux_exp: f64,
    opts: &'a SolveOptions,
    length: f64,
}

impl<'a> Integrator<'a> {
    /// Right-hand side; x is pulled just inside the current smooth window so
    /// stage evaluations at the window's right edge read the correct side of
    /// a coefficient jump.
    fn rhs(&self, x: f64, y: Y, wstart: f64, wend: f64) -> Y {
        let x = if x >= wend {
            let nudge = (1e-13 * (wend - wstart)).max(4.0 * f64::EPSILON * wend.abs());
            (wend - nudge).max(wstart)
        } else {
            x
        };
        let du = self.a.value(x).powf(self.flux_exp) * phi_p(y[1], self.q);
        let dv = -self.lambda * self.rho.value(x) * phi_p(y[0], self.p);
        [du, dv]
    }

    fn error_norm(&self, err: Y, y0: Y, y1: Y) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            let sc = self.opts.ode_abs_tol + self.opts.ode_rel_tol * y0[i].abs().max(y1[i].abs());
            let r = err[i] / sc;
            s += r * r;
        }
        (0.5 * s).sqrt()
    }

    /// Classic two-evaluation starting-step heuristic.
    fn initial_step(&self, x: f64, y: Y, f0: Y, wstart: f64, wend: f64) -> f64 {
        let sc = |_i: usize, yv: f64| self.opts.ode_abs_tol + self.opts.ode_rel_tol * yv.abs();
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..2 {
            d0 += (y[i] / sc(i, y[i])).powi(2);
            d1 += (f0[i] / sc(i, y[i])).powi(2);
        }
        let d0 = (0.5 * d0).sqrt();
        let d1 = (0.5 * d1).sqrt();
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * self.length } else { 0.01 * d0 / d1 };
        h0 = h0.min(wend - x);
        let y1 = [y[0] + h0 * f0[0], y[1] + h0 * f0[1]];
        let f1 = self.rhs(x + h0, y1, wstart, wend);
        let mut d2 = 0.0;
        for i in 0..2 {
            d2 += ((f1[i] - f0[i]) / sc(i, y[i])).powi(2);
        }
        let d2 = (0.5 * d2).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6 * self.length)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(wend - x)
    }

    fn run(&self) -> Result<Trajectory> {
        let l = self.length;
        let mut windows: Vec<f64> = self
            .a
            .knots()
            .into_iter()
            .chain(self.rho.knots())
            .filter(|&x| x > 0.0 && x < l)
            .collect();
        windows.sort_by(f64::total_cmp);
        windows.dedup_by(|u, v| (*u - *v).abs() <= 1e-15 * l);
        windows.push(l);

        let res = self.opts.sample_resolution.max(2);
        let grid_step = l / res as f64;

        let mut x = 0.0;
        let mut y: Y = [0.0, 1.0];
        let mut sup_u = 0.0f64;
        let mut samples = vec![Sample { x: 0.0, u: 0.0, v: 1.0 }];
        let mut zeros: Vec<f64> = Vec::new();
        let mut next_grid = 1usize;
        let mut steps = 0usize;
        let mut h = 0.0;
        let mut wstart = 0.0;

        for &wend in &windows {
            // A window starts on the right side of a jump: refresh the
            // derivative instead of reusing the FSAL stage from the left side.
            let mut k1 = self.rhs(x, y, wstart, wend);
            if h <= 0.0 {
                h = self.initial_step(x, y, k1, wstart, wend);
            }
            h = h.min(wend - x).max(1e-14 * l);

            while x < wend - 1e-14 * l {
                if steps >= self.opts.max_steps {
                    return Err(Error::Integration {
                        reached: x,
                        detail: format!("step budget of {} exhausted", self.opts.max_steps),
                    });
                }
                steps += 1;
                let clipped = h >= wend - x;
                if clipped {
                    h = wend - x;
                }

                let st = |y: Y, k: &[(f64, Y)]| -> Y {
                    let mut out = y;
                    for &(c, kv) in k {
                        out[0] += h * c * kv[0];
                        out[1] += h * c * kv[1];
                    }
                    out
                };
                let k2 = self.rhs(x + C2 * h, st(y, &[(A21, k1)]), wstart, wend);
                let k3 = self.rhs(x + C3 * h, st(y, &[(A31, k1), (A32, k2)]), wstart, wend);
                let k4 =
                    self.rhs(x + C4 * h, st(y, &[(A41, k1), (A42, k2), (A43, k3)]), wstart, wend);
                let k5 = self.rhs(
                    x + C5 * h,
                    st(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
                    wstart,
                    wend,
                );
                let k6 = self.rhs(
                    x + h,
                    st(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]),
                    wstart,
                    wend,
                );
                let y_new = st(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
                let k7 = self.rhs(x + h, y_new, wstart, wend);

                let mut err_v: Y = [0.0; 2];
                for i in 0..2 {
                    err_v[i] = h
                        * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                            + E7 * k7[i]);
                }
                let err = self.error_norm(err_v, y, y_new);

                // NaN anywhere must reject, so compare through the negation.
                if !(err <= 1.0) {
                    let factor = if err.is_finite() {
                        (0.9 * err.powf(-0.2)).max(0.2)
                    } else {
                        0.2
                    };
                    h *= factor;
                    if h < 1e-14 * l {
                        return Err(Error::Integration {
                            reached: x,
                            detail: "step size underflow (non-smooth or non-finite dynamics)"
                                .into(),
                        });
                    }
                    continue;
                }

                // Accepted: build the dense interpolant for zeros and samples.
                let dy = [y_new[0] - y[0], y_new[1] - y[1]];
                let r3 = [h * k1[0] - dy[0], h * k1[1] - dy[1]];
                let r4 = [dy[0] - h * k7[0] - r3[0], dy[1] - h * k7[1] - r3[1]];
                let mut r5 = [0.0; 2];
                for i in 0..2 {
                    r5[i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                let dense = DenseStep { r1: y, r2: dy, r3, r4, r5 };

                if y[0] * y_new[0] < 0.0 {
                    zeros.push(x + h * bisect_dense_zero(&dense, y[0], self.opts.zero_x_tol / h));
                } else if y_new[0] == 0.0 && x + h < l * (1.0 - 1e-14) {
                    zeros.push(x + h);
                }

                while next_grid < res {
                    let gx = next_grid as f64 * grid_step;
                    if gx >= x + h * (1.0 - 1e-12) {
                        break;
                    }
                    if gx > x {
                        let yg = dense.eval((gx - x) / h);
                        sup_u = sup_u.max(yg[0].abs());
                        samples.push(Sample { x: gx, u: yg[0], v: yg[1] });
                    }
                    next_grid += 1;
                }

                x += h;
                y = y_new;
                k1 = k7;
                sup_u = sup_u.max(y[0].abs());
                samples.push(Sample { x, u: y[0], v: y[1] });

                let mag = y[0].abs().max(y[1].abs());
                if mag > RENORM_THRESHOLD {
                    let c = (1.0 / y[0].abs()).min(y[1].abs().powf(-1.0 / (self.p - 1.0)));
                    let cp = phi_p(c, self.p);
                    y[0] *= c;
                    y[1] *= cp;
                    k1[0] *= c;
                    k1[1] *= cp;
                    sup_u *= c;
                    for s in &mut samples {
                        s.u *= c;
                        s.v *= cp;
                    }
                }

                let factor = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
                h *= if clipped { 1.0 } else { factor };
                h = h.max(1e-14 * l);
            }
            wstart = wend;
            x = wend;
        }

        let end_is_zero = y[0].abs() <= self.opts.residual_tol * sup_u.max(f64::MIN_POSITIVE);
        if end_is_zero {
            let window = 1e-6 * l;
            zeros.retain(|&z| z <= l - window);
        }
        Ok(Trajectory {
            u_end: y[0],
            v_end: y[1],
            sup_u,
            zeros,
            end_is_zero,
            samples,
        })
    }
}

/// Locates the zero of the dense u-component by bisection on θ ∈ [0, 1];
/// `theta_tol` is the required accuracy in θ units.
fn bisect_dense_zero(dense: &DenseStep, u_left: f64, theta_tol: f64) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let s = u_left.signum();
    for _ in 0..64 {
        if hi - lo <= theta_tol.max(1e-15) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let um = dense.eval(mid)[0];
        if um == 0.0 {
            return mid;
        }
        if um.signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Integrates the initial-value problem u(0) = 0, v(0) = 1 across [0, L]
/// for a fixed spectral parameter λ ≥ 0.
pub fn integrate_ivp_with<A, R>(
    a: &A,
    rho: &R,
    p: f64,
    lambda: f64,
    opts: &SolveOptions,
) -> Result<Trajectory>
where
    A: Coefficient,
    R: Coefficient,
{
    let pe = PExponent::new(p)?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Domain(format!(
            "spectral parameter must be finite and >= 0, got {lambda}"
        )));
    }
    let l = a.length();
    if (l - rho.length()).abs() > 1e-12 * l.max(1.0) {
        return Err(Error::Domain(format!(
            "coefficient and weight lengths differ: {l} vs {}",
            rho.length()
        )));
    }
    let integ = Integrator {
        a,
        rho,
        lambda,
        p,
        q: pe.q(),
        flux_exp: -1.0 / (p - 1.0),
        opts,
        length: l,
    };
    integ.run()
}

/// Computes λ_k of the chosen ladder together with its eigenfunction.
pub fn eigenvalue_with<A, R>(
    a: &A,
    rho: &R,
    p: f64,
    k: usize,
    sign: Sign,
    opts: &SolveOptions,
) -> Result<EigenPair>
where
    A: Coefficient,
    R: Coefficient,
{
    PExponent::new(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    let (a_pos, a_neg) = a.split_integrals();
    if a_neg > 1e-15 * a_pos.max(1.0) {
        return Err(Error::Domain(
            "leading coefficient must be nonnegative throughout".into(),
        ));
    }
    match sign {
        Sign::Plus => {
            let (pos, _) = rho.split_integrals();
            if pos <= 0.0 {
                return Err(Error::NoEigenvalue(
                    "the weight has no positive part, so the positive ladder is empty".into(),
                ));
            }
            let (lambda, traj) = positive_ladder(a, rho, p, k, opts)?;
            Ok(build_pair(lambda, k, Sign::Plus, &traj))
        }
        Sign::Minus => {
            let (_, neg) = rho.split_integrals();
            if neg <= 0.0 {
                return Err(Error::NoEigenvalue(
                    "the weight has no negative part, so the negative ladder is empty".into(),
                ));
            }
            let flipped = Negated(rho);
            let (lambda, traj) = positive_ladder(a, &flipped, p, k, opts)?;
            Ok(build_pair(-lambda, k, Sign::Minus, &traj))
        }
    }
}

fn build_pair(lambda: f64, k: usize, sign: Sign, traj: &Trajectory) -> EigenPair {
    let scale = 1.0 / traj.sup_u;
    EigenPair {
        lambda,
        k,
        sign_class: sign,
        nodal_count: traj.zero_count() + 2,
        residual: traj.residual(),
        samples: traj
            .samples
            .iter()
            .map(|s| SamplePoint { x: s.x, u: s.u * scale })
            .collect(),
    }
}

/// λ_k of the positive ladder for a weight with ∫ρ⁺ > 0.
fn positive_ladder<A, R>(
    a: &A,
    rho: &R,
    p: f64,
    k: usize,
    opts: &SolveOptions,
) -> Result<(f64, Trajectory)>
where
    A: Coefficient,
    R: Coefficient,
{
    let count = |lambda: f64| -> Result<(usize, Trajectory)> {
        let t = integrate_ivp_with(a, rho, p, lambda, opts)?;
        Ok((t.zero_count(), t))
    };

    let (mut lo, mut hi) = match opts.initial_bracket {
        Some((lo, hi)) if lo > 0.0 && hi > lo => (lo, hi),
        _ => {
            // Constant a scales the whole ladder linearly, so the estimate for
            // the normalized problem gives a bracket of the right magnitude.
            let delta = match a.constant_value() {
                Some(c) if c > 0.0 => match weyl_estimate(rho, p, k, Sign::Plus) {
                    Ok(w) => (c * w / 4.0).max(1e-12),
                    Err(_) => 1.0,
                },
                _ => 1.0,
            };
            (delta, 2.0 * delta)
        }
    };

    let (mut n_lo, mut t_lo) = count(lo)?;
    let mut guard = 0;
    while n_lo >= k {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Search(format!(
                "zero count stayed >= {k} down to λ = {lo:e}"
            )));
        }
        let r = count(lo)?;
        n_lo = r.0;
        t_lo = r.1;
        guard += 1;
        if guard > 1100 {
            return Err(Error::Search("bracket shrink did not terminate".into()));
        }
    }
    hi = hi.max(2.0 * lo);
    let (mut n_hi, mut t_hi) = count(hi)?;
    while n_hi < k {
        lo = hi;
        n_lo = n_hi;
        t_lo = t_hi;
        hi *= 2.0;
        if hi > opts.lambda_cap {
            return Err(Error::Search(format!(
                "eigenvalue {k} not located below the cap λ = {:e}",
                opts.lambda_cap
            )));
        }
        let r = count(hi)?;
        n_hi = r.0;
        t_hi = r.1;
    }

    // Narrow until the bracket separates exactly the k-th jump of N(λ).
    while n_lo != k - 1 || n_hi != k {
        if hi - lo <= 1e-13 * hi {
            return Err(Error::Search(format!(
                "zero counts jump from {n_lo} to {n_hi} across an interval of width {:e}; \
                 branches cannot be separated",
                hi - lo
            )));
        }
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        let (n_mid, t_mid) = count(mid)?;
        if n_mid < k {
            lo = mid;
            n_lo = n_mid;
            t_lo = t_mid;
        } else {
            hi = mid;
            n_hi = n_mid;
            t_hi = t_mid;
        }
    }

    let g_lo = t_lo.u_end / t_lo.sup_u;
    let g_hi = t_hi.u_end / t_hi.sup_u;
    let ftol = 0.25 * opts.residual_tol;
    let refined = if g_lo.abs() <= ftol {
        Some(lo)
    } else if g_hi.abs() <= ftol {
        Some(hi)
    } else if g_lo * g_hi < 0.0 {
        brent(
            |lam| {
                let t = integrate_ivp_with(a, rho, p, lam, opts)?;
                Ok(t.u_end / t.sup_u)
            },
            lo,
            hi,
            g_lo,
            g_hi,
            1e-14,
            ftol,
            200,
        )
        .ok()
    } else {
        None
    };
    if let Some(lambda) = refined {
        let traj = integrate_ivp_with(a, rho, p, lambda, opts)?;
        if traj.residual() <= opts.residual_tol && traj.zero_count() == k - 1 {
            return Ok((lambda, traj));
        }
    }

    // Endpoint-residual refinement can be defeated by stiffness: a long
    // strongly negative stretch amplifies roundoff in u(L) by e^{c·len}, and
    // then no shooting parameter nulls the endpoint. The zero count is immune
    // to that (the contamination moves the last crossing, never its count),
    // and it jumps from k−1 to k exactly at the eigenvalue — so collapsing
    // the count bracket still pins λ_k to full relative precision.
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (n_mid, _) = count(mid)?;
        if n_mid < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Take the low side of the collapsed bracket: its count is k−1 by the
    // loop invariant, so the trajectory has the eigenfunction's zero set.
    let (n_low, traj) = count(lo)?;
    if n_low == k - 1 {
        Ok((lo, traj))
    } else {
        Err(Error::Search(format!(
            "count bisection collapsed at λ = {lo} but the zero count {n_low} is not {}",
            k - 1
        )))
    }
}

/// Brent–Dekker root find; fa, fb must have opposite signs.
#[allow(clippy::too_many_arguments)]
fn brent<F>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol_rel: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol_rel * b.abs();
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb.abs() <= ftol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut pq, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if pq > 0.0 {
                q = -q;
            }
            pq = pq.abs();
            if 2.0 * pq < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = pq / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1 * xm.signum() };
        fb = f(b)?;
    }
    Err(Error::Search("root polish did not converge within the iteration budget".into()))
}

/// Scaling estimate (kπ_p / ∫(ρ^±)^{1/p})^p of the k-th eigenvalue of the
/// a ≡ 1 problem; exact in the constant-weight case, and the k-th rung of a
/// ladder asymptotic in general.
pub fn weyl_estimate<R>(rho: &R, p: f64, k: usize, sign: Sign) -> Result<f64>
where
    R: Coefficient + ?Sized,
{
    PExponent::new(p)?;
    if k == 0 {
        return Err(Error::Domain("eigenvalue index k starts at 1".into()));
    }
    let l = rho.length();
    let mut knots: Vec<f64> = rho
        .knots()
        .into_iter()
        .chain(rho.sign_points())
        .filter(|&x| x > 0.0 && x < l)
        .collect();
    knots.push(0.0);
    knots.push(l);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|u, v| (*u - *v).abs() <= 1e-14 * l);
    let part = |x: f64| -> f64 {
        let v = rho.value(x);
        match sign {
            Sign::Plus => v.max(0.0),
            Sign::Minus => (-v).max(0.0),
        }
    };
    let inv_p = 1.0 / p;
    let integral = quad::integrate_with_knots(&|x| part(x).powf(inv_p), &knots, 1e-12, 1e-9)?;
    if integral <= 0.0 {
        return Err(Error::Domain(
            "the selected part of the weight vanishes; no scaling estimate exists".into(),
        ));
    }
    Ok((k as f64 * pi_p(p)? / integral).powf(p))
}

/// Rayleigh quotient (∫a|u′|^p) / (∫ρ|u|^p) evaluated from samples: midpoint
/// difference quotients for u′, trapezoids for the weighted norms.
pub fn rayleigh_quotient<A, R>(a: &A, rho: &R, p: f64, samples: &[SamplePoint]) -> Result<f64>
where
    A: Coefficient,
    R: Coefficient,
{
    PExponent::new(p)?;
    if samples.len() < 3 {
        return Err(Error::Domain("Rayleigh quotient needs at least 3 samples".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut sup = 0.0f64;
    for w in samples.windows(2) {
        let dx = w[1].x - w[0].x;
        if dx <= 0.0 {
            continue;
        }
        let mid = 0.5 * (w[0].x + w[1].x);
        let slope = (w[1].u - w[0].u) / dx;
        num += a.value(mid) * slope.abs().powf(p) * dx;
        den += 0.5
            * (rho.value(w[0].x) * w[0].u.abs().powf(p)
                + rho.value(w[1].x) * w[1].u.abs().powf(p))
            * dx;
        sup = sup.max(w[0].u.abs()).max(w[1].u.abs());
    }
    let scale = sup.powf(p) * samples.last().unwrap().x.max(1.0);
    if den.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Domain(
            "the weighted norm nearly vanishes; the quotient is indeterminate".into(),
        ));
    }
    Ok(num / den)
}
