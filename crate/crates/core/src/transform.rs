//! Change of variables y = ∫₀ˣ a^{−1/(p−1)} that removes a variable leading
//! coefficient: (a, ρ) on [0, L] and (1, Q) on [0, ℓ] share their eigenvalue
//! ladders, with Q(y) = a^{1/(p−1)}ρ read at x(y). This gives an internal
//! consistency check for the solver and a normal form for comparisons.

use crate::coefficient::GridWeight;
use crate::error::{Error, Result};
use crate::quad;
use crate::weights::PiecewiseWeight;

/// A monotone piecewise-cubic interpolant (Fritsch–Butland slope limiting).
/// Slopes are kept one-sided across designated break nodes, so data with
/// kinks — primitives of discontinuous coefficients — are fitted without
/// smearing the kink into neighbouring cells; piecewise-linear data with
/// breaks at its kinks is reproduced exactly.
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Slope used when a node is the right end of a cell.
    m_in: Vec<f64>,
    /// Slope used when a node is the left end of a cell.
    m_out: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Self::with_breaks(xs, ys, &[])
    }

    /// `breaks` are node indices where the underlying function has a corner;
    /// slope estimation does not look across them.
    pub fn with_breaks(xs: Vec<f64>, ys: Vec<f64>, breaks: &[usize]) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::Domain(format!(
                "interpolation needs matched lists of length >= 2, got {} and {}",
                n,
                ys.len()
            )));
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain(format!(
                    "interpolation abscissae must increase strictly, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("interpolation data must be finite".into()));
        }
        let mut cuts: Vec<usize> = breaks
            .iter()
            .copied()
            .filter(|&i| i > 0 && i + 1 < n)
            .collect();
        cuts.sort_unstable();
        cuts.dedup();
        let mut m_in = vec![0.0; n];
        let mut m_out = vec![0.0; n];
        let mut start = 0;
        for &cut in cuts.iter().chain(std::iter::once(&(n - 1))) {
            let piece = pchip_slopes(&xs[start..=cut], &ys[start..=cut]);
            m_out[start] = piece[0];
            m_in[cut] = piece[piece.len() - 1];
            for (off, &m) in piece.iter().enumerate().take(piece.len() - 1).skip(1) {
                m_in[start + off] = m;
                m_out[start + off] = m;
            }
            start = cut;
        }
        Ok(Self { xs, ys, m_in, m_out })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let x = x.clamp(self.xs[0], self.xs[n - 1]);
        let mut i = self.xs.partition_point(|&v| v <= x);
        if i == n {
            i -= 1;
        }
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (m0, m1) = (self.m_out[i - 1], self.m_in[i]);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * m1
    }
}

/// Fritsch–Butland slopes for one smooth run of data. Guarantees the Hermite
/// interpolant is monotone wherever the data are.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m[0] = edge_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

/// Three-point end slope with the standard shape-preserving clamps.
fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// The monotone map y = P(x) = ∫₀ˣ a^{−1/(p−1)} together with its inverse and
/// the grid it was built on (P is exact at the grid nodes).
#[derive(Clone, Debug)]
pub struct ChangeOfVariables {
    xs: Vec<f64>,
    ps: Vec<f64>,
    forward: MonotoneCubic,
    inverse: MonotoneCubic,
}

impl ChangeOfVariables {
    /// Length of the transformed interval, ℓ = P(L).
    pub fn ell(&self) -> f64 {
        *self.ps.last().unwrap()
    }

    pub fn to_y(&self, x: f64) -> f64 {
        self.forward.eval(x)
    }

    pub fn to_x(&self, y: f64) -> f64 {
        self.inverse.eval(y)
    }

    /// The (x, P(x)) node pairs; P is exact here up to quadrature accuracy.
    pub fn grid(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ps)
    }
}

/// Builds the change of variables for a coefficient with min a > 0.
/// `n_grid` uniform cells are refined by the coefficient's breakpoints;
/// every per-cell integral is adaptive, so P is accurate to ~1e−12 relative.
pub fn build_transform(a: &PiecewiseWeight, p: f64, n_grid: usize) -> Result<ChangeOfVariables> {
    crate::pmath::PExponent::new(p)?;
    if n_grid < 16 {
        return Err(Error::Domain(format!("transform grid needs >= 16 cells, got {n_grid}")));
    }
    let (lo, _) = a.min_max();
    if !(lo > 0.0) {
        return Err(Error::Domain(format!(
            "change of variables requires a coefficient bounded away from zero, min = {lo}"
        )));
    }
    let length = a.length();
    let mut xs: Vec<f64> = (0..=n_grid)
        .map(|i| length * i as f64 / n_grid as f64)
        .chain(a.breakpoints())
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|u, v| (*u - *v).abs() <= 1e-14 * length);
    let e = -1.0 / (p - 1.0);
    let mut ps = Vec::with_capacity(xs.len());
    ps.push(0.0);
    for w in xs.windows(2) {
        let f = |x: f64| a.value_clamped(x).powf(e);
        let cell = quad::adaptive_gk(&f, w[0], w[1], 1e-16, 1e-12, 2000)?;
        if !(cell > 0.0) {
            return Err(Error::Domain(format!(
                "transform primitive failed to increase on [{}, {}]",
                w[0], w[1]
            )));
        }
        ps.push(ps.last().unwrap() + cell);
    }
    let breaks: Vec<usize> = a
        .breakpoints()
        .iter()
        .filter_map(|&b| xs.iter().position(|&x| (x - b).abs() <= 1e-14 * length))
        .collect();
    let forward = MonotoneCubic::with_breaks(xs.clone(), ps.clone(), &breaks)?;
    let inverse = MonotoneCubic::with_breaks(ps.clone(), xs.clone(), &breaks)?;
    Ok(ChangeOfVariables { xs, ps, forward, inverse })
}

/// Samples the transformed weight Q(y) = a^{1/(p−1)}ρ at x(y) on a grid of at
/// least `n_samples` cells. Jumps of a or ρ become duplicate nodes carrying
/// the one-sided values, so the sampled weight jumps exactly where Q does.
pub fn transformed_weight(
    cov: &ChangeOfVariables,
    a: &PiecewiseWeight,
    rho: &PiecewiseWeight,
    p: f64,
    n_samples: usize,
) -> Result<GridWeight> {
    crate::pmath::PExponent::new(p)?;
    if n_samples < 16 {
        return Err(Error::Domain(format!("transformed weight needs >= 16 cells, got {n_samples}")));
    }
    let length = a.length();
    if (rho.length() - length).abs() > 1e-12 * length.max(1.0) {
        return Err(Error::Domain(format!(
            "coefficient and weight live on different intervals: {} vs {}",
            length,
            rho.length()
        )));
    }
    let (cov_xs, cov_ps) = cov.grid();
    let mut xs: Vec<f64> = cov_xs
        .iter()
        .copied()
        .chain((0..=n_samples).map(|i| length * i as f64 / n_samples as f64))
        .chain(rho.breakpoints())
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|u, v| (*u - *v).abs() <= 1e-14 * length);

    let exp = 1.0 / (p - 1.0);
    let q_right = |x: f64| -> Result<f64> {
        Ok(a.evaluate(x)?.powf(exp) * rho.evaluate(x)?)
    };
    let q_left = |x: f64| -> Result<f64> {
        Ok(a.evaluate_left(x)?.powf(exp) * rho.evaluate_left(x)?)
    };

    let mut nodes = Vec::with_capacity(xs.len() + 8);
    let mut values = Vec::with_capacity(xs.len() + 8);
    let mut prev_y = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        // P is exact on the nodes the change of variables was built from.
        let mut y = match cov_xs.iter().position(|&cx| (cx - x).abs() <= 1e-14 * length) {
            Some(j) => cov_ps[j],
            None => cov.to_y(x),
        };
        if i == 0 {
            y = 0.0;
        } else {
            y = y.max(prev_y);
        }
        prev_y = y;
        if i == 0 {
            nodes.push(0.0);
            values.push(q_right(0.0)?);
        } else if i + 1 == xs.len() {
            nodes.push(cov.ell().max(y));
            values.push(q_left(length)?);
        } else {
            let (ql, qr) = (q_left(x)?, q_right(x)?);
            if (ql - qr).abs() > 1e-13 * ql.abs().max(qr.abs()).max(1.0) {
                nodes.push(y);
                values.push(ql);
                nodes.push(y);
                values.push(qr);
            } else {
                nodes.push(y);
                values.push(qr);
            }
        }
    }
    GridWeight::new(nodes, values)
}
