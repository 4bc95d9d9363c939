//! Exact piecewise representation of problem coefficients and weights.
//!
//! A [`PiecewiseWeight`] is a function on [0, L] assembled from constant,
//! linear, and sinusoidal pieces. All three kinds integrate in closed form,
//! so primitives, extrema of primitives, positive/negative parts, and
//! periodic rescalings are exact — no quadrature enters the right-hand sides
//! of the inequality reports built on top of this type. Quadrature is used
//! only where no closed form exists (integrals of a^{−1/(p−1)}).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Default cap on the number of segments a periodic rescaling may produce.
pub const DEFAULT_SEGMENT_CAP: usize = 100_000;

/// One analytic piece. `Linear` and `Sinusoid` parameters are expressed in the
/// global coordinate x (not relative to the piece start), so a piece's values
/// are independent of where it begins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum Shape {
    Constant {
        value: f64,
    },
    Linear {
        slope: f64,
        intercept: f64,
    },
    /// amplitude·sin(omega·x + phase) + offset with omega > 0.
    Sinusoid {
        amplitude: f64,
        omega: f64,
        phase: f64,
        offset: f64,
    },
}

impl Shape {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Shape::Constant { value } => value,
            Shape::Linear { slope, intercept } => slope * x + intercept,
            Shape::Sinusoid { amplitude, omega, phase, offset } => {
                amplitude * (omega * x + phase).sin() + offset
            }
        }
    }

    /// Closed-form antiderivative (per-shape integration constant is arbitrary;
    /// [`Primitive`] fixes constants so the result is continuous with Q(0)=0).
    fn antiderivative(&self, x: f64) -> f64 {
        match *self {
            Shape::Constant { value } => value * x,
            Shape::Linear { slope, intercept } => 0.5 * slope * x * x + intercept * x,
            Shape::Sinusoid { amplitude, omega, phase, offset } => {
                -amplitude / omega * (omega * x + phase).cos() + offset * x
            }
        }
    }

    /// Solutions of shape(x) = 0 strictly inside (a, b), sorted ascending.
    fn roots_in(&self, a: f64, b: f64) -> Vec<f64> {
        match *self {
            Shape::Constant { .. } => Vec::new(),
            Shape::Linear { slope, intercept } => {
                if slope == 0.0 {
                    return Vec::new();
                }
                let r = -intercept / slope;
                if r > a && r < b {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            Shape::Sinusoid { amplitude, omega, phase, offset } => {
                if amplitude == 0.0 {
                    return Vec::new();
                }
                let r = -offset / amplitude;
                if r.abs() > 1.0 {
                    return Vec::new();
                }
                let base = r.asin();
                // sin θ = r at θ = base + 2πn and θ = π − base + 2πn.
                collect_angle_solutions(&[base, std::f64::consts::PI - base], omega, phase, a, b)
            }
        }
    }

    /// Stationary points of the shape strictly inside (a, b).
    fn stationary_points_in(&self, a: f64, b: f64) -> Vec<f64> {
        match *self {
            Shape::Constant { .. } | Shape::Linear { .. } => Vec::new(),
            Shape::Sinusoid { amplitude, omega, phase, .. } => {
                if amplitude == 0.0 {
                    return Vec::new();
                }
                collect_angle_solutions(
                    &[std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_2],
                    omega,
                    phase,
                    a,
                    b,
                )
            }
        }
    }

    /// The same piece read through the substitution x ↦ x/eps − shift,
    /// i.e. the shape of w(x/eps − shift) as a function of x.
    fn rescaled(&self, eps: f64, shift: f64) -> Shape {
        match *self {
            Shape::Constant { value } => Shape::Constant { value },
            Shape::Linear { slope, intercept } => Shape::Linear {
                slope: slope / eps,
                intercept: intercept - slope * shift,
            },
            Shape::Sinusoid { amplitude, omega, phase, offset } => Shape::Sinusoid {
                amplitude,
                omega: omega / eps,
                phase: phase - omega * shift,
                offset,
            },
        }
    }

    fn scaled(&self, c: f64) -> Shape {
        match *self {
            Shape::Constant { value } => Shape::Constant { value: c * value },
            Shape::Linear { slope, intercept } => Shape::Linear {
                slope: c * slope,
                intercept: c * intercept,
            },
            Shape::Sinusoid { amplitude, omega, phase, offset } => Shape::Sinusoid {
                amplitude: c * amplitude,
                omega,
                phase,
                offset: c * offset,
            },
        }
    }

    fn shifted_by(&self, c: f64) -> Shape {
        match *self {
            Shape::Constant { value } => Shape::Constant { value: value + c },
            Shape::Linear { slope, intercept } => Shape::Linear {
                slope,
                intercept: intercept + c,
            },
            Shape::Sinusoid { amplitude, omega, phase, offset } => Shape::Sinusoid {
                amplitude,
                omega,
                phase,
                offset: offset + c,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = match *self {
            Shape::Constant { value } => value.is_finite(),
            Shape::Linear { slope, intercept } => slope.is_finite() && intercept.is_finite(),
            Shape::Sinusoid { amplitude, omega, phase, offset } => {
                if !(omega > 0.0) {
                    return Err(Error::Domain(format!(
                        "sinusoid requires omega > 0, got {omega}"
                    )));
                }
                amplitude.is_finite() && omega.is_finite() && phase.is_finite() && offset.is_finite()
            }
        };
        if finite {
            Ok(())
        } else {
            Err(Error::Domain("non-finite segment parameter".into()))
        }
    }
}

/// Enumerates x with omega·x + phase ≡ θ (mod 2π) for each θ in `angles`,
/// restricted to the open interval (a, b).
fn collect_angle_solutions(angles: &[f64], omega: f64, phase: f64, a: f64, b: f64) -> Vec<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let theta_lo = omega * a + phase;
    let theta_hi = omega * b + phase;
    let mut out = Vec::new();
    for &theta in angles {
        let n_lo = ((theta_lo - theta) / two_pi).floor() as i64 - 1;
        let n_hi = ((theta_hi - theta) / two_pi).ceil() as i64 + 1;
        for n in n_lo..=n_hi {
            let x = (theta + two_pi * n as f64 - phase) / omega;
            if x > a && x < b {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|u, v| (*u - *v).abs() <= 1e-13 * (b - a).abs());
    out
}

/// One piece of a [`PiecewiseWeight`]: a shape valid up to `end` (exclusive;
/// the final piece also covers x = L).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(flatten)]
    pub shape: Shape,
    pub end: f64,
}

/// Serialized form: {"L": ..., "segments": [{"kind": ..., "end": ..., "params": {...}}]}.
#[derive(Serialize, Deserialize)]
struct WeightRepr {
    #[serde(rename = "L")]
    length: f64,
    segments: Vec<Segment>,
}

impl TryFrom<WeightRepr> for PiecewiseWeight {
    type Error = Error;
    fn try_from(r: WeightRepr) -> Result<Self> {
        PiecewiseWeight::new(r.length, r.segments)
    }
}

impl From<PiecewiseWeight> for WeightRepr {
    fn from(w: PiecewiseWeight) -> Self {
        WeightRepr { length: w.length, segments: w.segments }
    }
}

/// An exactly integrable piecewise function on [0, L].
///
/// Evaluation at a breakpoint returns the right-limit value (left limit at
/// x = L): integrals are unaffected, and the convention makes `evaluate`
/// deterministic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct PiecewiseWeight {
    length: f64,
    segments: Vec<Segment>,
}

/// Exact per-segment integrals of the positive/negative parts plus derived
/// means: `positive` = ∫ρ⁺, `negative` = ∫ρ⁻, `mean` = (∫ρ⁺−∫ρ⁻)/L,
/// `l1` = ∫ρ⁺+∫ρ⁻.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitParts {
    pub positive: f64,
    pub negative: f64,
    pub mean: f64,
    pub l1: f64,
}

impl PiecewiseWeight {
    /// Builds a weight from segments whose `end` values must be strictly
    /// increasing and finish at `length` (mismatch up to 1e−9 relative is
    /// snapped; anything larger is rejected).
    pub fn new(length: f64, mut segments: Vec<Segment>) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain(format!("domain length must be > 0, got {length}")));
        }
        if segments.is_empty() {
            return Err(Error::Domain("weight needs at least one segment".into()));
        }
        let mut prev = 0.0;
        for seg in &segments {
            seg.shape.validate()?;
            if !seg.end.is_finite() || seg.end <= prev {
                return Err(Error::Domain(format!(
                    "segment ends must be strictly increasing from 0, got {} after {}",
                    seg.end, prev
                )));
            }
            prev = seg.end;
        }
        let last = segments.last_mut().expect("non-empty");
        if (last.end - length).abs() > 1e-9 * length.max(1.0) {
            return Err(Error::Domain(format!(
                "last segment ends at {} but the domain length is {length}",
                last.end
            )));
        }
        last.end = length;
        if segments.len() > 1 {
            let penultimate = segments[segments.len() - 2].end;
            if penultimate >= length {
                return Err(Error::Domain("segment ends must stay below the domain length".into()));
            }
        }
        Ok(Self { length, segments })
    }

    /// Constant weight c on [0, L].
    pub fn constant(value: f64, length: f64) -> Result<Self> {
        Self::new(length, vec![Segment { shape: Shape::Constant { value }, end: length }])
    }

    /// Single linear piece slope·x + intercept on [0, L].
    pub fn linear(slope: f64, intercept: f64, length: f64) -> Result<Self> {
        Self::new(length, vec![Segment { shape: Shape::Linear { slope, intercept }, end: length }])
    }

    /// Single piece amplitude·sin(omega·x + phase) + offset on [0, L].
    pub fn sinusoid(amplitude: f64, omega: f64, phase: f64, offset: f64, length: f64) -> Result<Self> {
        Self::new(
            length,
            vec![Segment { shape: Shape::Sinusoid { amplitude, omega, phase, offset }, end: length }],
        )
    }

    /// Step function from `(end, value)` pairs; ends must increase to L.
    pub fn from_steps(steps: &[(f64, f64)]) -> Result<Self> {
        let length = steps.last().map(|s| s.0).unwrap_or(0.0);
        Self::new(
            length,
            steps
                .iter()
                .map(|&(end, value)| Segment { shape: Shape::Constant { value }, end })
                .collect(),
        )
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Start of segment `i`.
    pub fn segment_start(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.segments[i - 1].end
        }
    }

    /// 0 = x₀ < x₁ < … < x_n = L.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.segments.len() + 1);
        b.push(0.0);
        b.extend(self.segments.iter().map(|s| s.end));
        b
    }

    fn segment_index(&self, x: f64) -> usize {
        // First segment whose end lies strictly beyond x (right-continuity);
        // x = L falls into the last segment (left limit at the right edge).
        match self.segments.iter().position(|s| x < s.end) {
            Some(i) => i,
            None => self.segments.len() - 1,
        }
    }

    /// Pointwise value; right-limit at breakpoints, left-limit at x = L.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 || x > self.length {
            return Err(Error::Domain(format!(
                "x = {x} outside the weight's domain [0, {}]",
                self.length
            )));
        }
        Ok(self.segments[self.segment_index(x)].shape.eval(x))
    }

    /// Left-limit value at x (equals `evaluate` except at interior breakpoints).
    pub fn evaluate_left(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x <= 0.0 || x > self.length {
            return Err(Error::Domain(format!(
                "x = {x} outside (0, {}] for a left limit",
                self.length
            )));
        }
        let i = match self.segments.iter().position(|s| x <= s.end) {
            Some(i) => i,
            None => self.segments.len() - 1,
        };
        Ok(self.segments[i].shape.eval(x))
    }

    /// Value with x clamped into [0, L]; used by solvers whose steps may
    /// overshoot the domain edge by rounding.
    pub fn value_clamped(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.length);
        self.segments[self.segment_index(x)].shape.eval(x)
    }

    /// Some(c) if the weight is a single constant c (or several equal ones).
    pub fn constant_value(&self) -> Option<f64> {
        let mut value = None;
        for seg in &self.segments {
            match seg.shape {
                Shape::Constant { value: v } => match value {
                    None => value = Some(v),
                    Some(prev) if prev == v => {}
                    _ => return None,
                },
                _ => return None,
            }
        }
        value
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            length: self.length,
            segments: self
                .segments
                .iter()
                .map(|s| Segment { shape: s.shape.scaled(c), end: s.end })
                .collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        Self {
            length: self.length,
            segments: self
                .segments
                .iter()
                .map(|s| Segment { shape: s.shape.shifted_by(c), end: s.end })
                .collect(),
        }
    }

    pub fn negate(&self) -> Self {
        self.scale(-1.0)
    }

    /// Exact (min, max) over the closure of every piece.
    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, seg) in self.segments.iter().enumerate() {
            let a = self.segment_start(i);
            let b = seg.end;
            let mut push = |v: f64| {
                lo = lo.min(v);
                hi = hi.max(v);
            };
            push(seg.shape.eval(a));
            push(seg.shape.eval(b));
            for x in seg.shape.stationary_points_in(a, b) {
                push(seg.shape.eval(x));
            }
        }
        (lo, hi)
    }

    /// Interior points where the function crosses zero inside a piece, plus
    /// breakpoints where the value jumps across zero. Useful as extra
    /// quadrature knots for integrands like (ρ±)^{1/p}.
    pub fn sign_change_points(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        for (i, seg) in self.segments.iter().enumerate() {
            let a = self.segment_start(i);
            pts.extend(seg.shape.roots_in(a, seg.end));
        }
        pts
    }

    /// Exact primitive Q(x) = ∫₀ˣ w, continuous with Q(0) = 0.
    pub fn primitive(&self) -> Primitive {
        let mut offsets = Vec::with_capacity(self.segments.len());
        let mut at_breakpoints = Vec::with_capacity(self.segments.len() + 1);
        at_breakpoints.push(0.0);
        let mut carry = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let a = self.segment_start(i);
            let offset = carry - seg.shape.antiderivative(a);
            offsets.push(offset);
            carry = seg.shape.antiderivative(seg.end) + offset;
            at_breakpoints.push(carry);
        }
        Primitive { base: self.clone(), offsets, at_breakpoints }
    }

    /// sup over [0, L] of |∫₀ˣ w| (exact, via breakpoints and interior
    /// critical points of the primitive).
    pub fn sup_abs_primitive(&self) -> f64 {
        let (lo, hi) = self.primitive().min_max();
        lo.abs().max(hi.abs())
    }

    /// max over subintervals (a,b) ⊆ [0,L] of |∫_a^b w| = max Q − min Q.
    pub fn max_oscillation(&self) -> f64 {
        let (lo, hi) = self.primitive().min_max();
        hi - lo
    }

    /// Exact integrals of the positive and negative parts plus mean and L¹ norm.
    pub fn split_parts(&self) -> SplitParts {
        let mut positive = 0.0;
        let mut negative = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let a = self.segment_start(i);
            let b = seg.end;
            let mut cuts = vec![a];
            cuts.extend(seg.shape.roots_in(a, b));
            cuts.push(b);
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                let piece = seg.shape.antiderivative(w[1]) - seg.shape.antiderivative(w[0]);
                let s = seg.shape.eval(mid);
                if s > 0.0 {
                    positive += piece.max(0.0);
                } else if s < 0.0 {
                    negative += (-piece).max(0.0);
                }
            }
        }
        SplitParts {
            positive,
            negative,
            mean: (positive - negative) / self.length,
            l1: positive + negative,
        }
    }

    /// Exact representation of x ↦ w(x/ε), ε-periodic with period ε·L, on the
    /// same domain [0, L]; a partial final period is truncated exactly at L.
    pub fn rescale_periodic(&self, eps: f64) -> Result<Self> {
        self.rescale_periodic_with_cap(eps, DEFAULT_SEGMENT_CAP)
    }

    pub fn rescale_periodic_with_cap(&self, eps: f64, cap: usize) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::Domain(format!("eps must be > 0, got {eps}")));
        }
        let periods = (1.0 / eps).ceil().max(1.0) as usize;
        let required = periods.saturating_mul(self.segments.len());
        if required > cap {
            return Err(Error::Resource {
                required,
                detail: format!(
                    "rescaling by eps = {eps} needs {required} segments, above the cap of {cap}"
                ),
            });
        }
        let mut segments = Vec::with_capacity(required);
        let close_to_end = self.length * (1.0 - 1e-14);
        'periods: for j in 0..=periods {
            let shift = j as f64 * self.length;
            for seg in &self.segments {
                let end = eps * (shift + seg.end);
                let shape = seg.shape.rescaled(eps, shift);
                if end >= close_to_end {
                    segments.push(Segment { shape, end: self.length });
                    break 'periods;
                }
                segments.push(Segment { shape, end });
            }
        }
        Self::new(self.length, segments)
    }

    /// ∫₀^L w(t)^{−1/(p−1)} dt by per-segment adaptive quadrature, relative
    /// accuracy 1e−10. Requires w ≥ 0; an identically non-positive piece or a
    /// non-integrable degeneracy is a domain error.
    pub fn inv_conjugate_integral(&self, p: f64) -> Result<f64> {
        crate::pmath::PExponent::new(p)?;
        let (lo, _) = self.min_max();
        if lo < 0.0 {
            return Err(Error::Domain(
                "coefficient must be nonnegative for a^{-1/(p-1)} integrals".into(),
            ));
        }
        for seg in &self.segments {
            if matches!(seg.shape, Shape::Constant { value } if value <= 0.0) {
                return Err(Error::Domain(
                    "coefficient has an identically non-positive piece; a^{-1/(p-1)} is non-integrable"
                        .into(),
                ));
            }
        }
        let e = -1.0 / (p - 1.0);
        let mut total = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let a = self.segment_start(i);
            let f = |x: f64| seg.shape.eval(x).powf(e);
            total += quad::adaptive_gk(&f, a, seg.end, 1e-13, 1e-11, 4000)?;
        }
        Ok(total)
    }

    /// a* = (∫₀^L a^{−1/(p−1)})^{1−p}, the harmonic-type mean appearing on the
    /// left of the first-eigenvalue inequalities and in homogenized limits.
    pub fn harmonic_mean_star(&self, p: f64) -> Result<f64> {
        Ok(self.inv_conjugate_integral(p)?.powf(1.0 - p))
    }

    /// Grid estimate (a lower bound) of the Muckenhoupt constant:
    /// max over subintervals B with endpoints on an (n_intervals+1)-point grid
    /// (refined by the weight's breakpoints) of
    /// (∫_B a)(∫_B a^{−1/(p−1)})^{p−1}/|B|^p.
    pub fn ap_constant(&self, p: f64, n_intervals: usize) -> Result<f64> {
        crate::pmath::PExponent::new(p)?;
        if n_intervals < 1 {
            return Err(Error::Domain("ap_constant needs at least one grid interval".into()));
        }
        let (lo, _) = self.min_max();
        if lo < 0.0 {
            return Err(Error::Domain("Muckenhoupt estimate requires a ≥ 0".into()));
        }
        let mut grid: Vec<f64> = (0..=n_intervals)
            .map(|i| self.length * i as f64 / n_intervals as f64)
            .chain(self.breakpoints())
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|u, v| (*u - *v).abs() <= 1e-15 * self.length);
        let primitive = self.primitive();
        let e = -1.0 / (p - 1.0);
        let mut cum_a = Vec::with_capacity(grid.len());
        let mut cum_inv = Vec::with_capacity(grid.len());
        cum_a.push(0.0);
        cum_inv.push(0.0);
        for w in grid.windows(2) {
            let ia = primitive.eval(w[1]).expect("in-domain") - primitive.eval(w[0]).expect("in-domain");
            let f = |x: f64| self.value_clamped(x).powf(e);
            let ii = quad::adaptive_gk(&f, w[0], w[1], 1e-13, 1e-10, 4000)?;
            cum_a.push(cum_a.last().unwrap() + ia);
            cum_inv.push(cum_inv.last().unwrap() + ii);
        }
        let mut best = 0.0f64;
        for j in 0..grid.len() {
            for k in (j + 1)..grid.len() {
                let len = grid[k] - grid[j];
                let v = (cum_a[k] - cum_a[j]) * (cum_inv[k] - cum_inv[j]).powf(p - 1.0) / len.powf(p);
                if v > best {
                    best = v;
                }
            }
        }
        Ok(best)
    }
}

/// The exact primitive Q(x) = ∫₀ˣ w of a [`PiecewiseWeight`]: continuous,
/// Q(0) = 0, Q′ = w inside every piece.
#[derive(Clone, Debug)]
pub struct Primitive {
    base: PiecewiseWeight,
    /// Per-segment integration constants: Q(x) = F_i(x) + offsets[i] on piece i.
    offsets: Vec<f64>,
    at_breakpoints: Vec<f64>,
}

impl Primitive {
    pub fn base(&self) -> &PiecewiseWeight {
        &self.base
    }

    /// Q at the breakpoints 0 = x₀ < … < x_n = L.
    pub fn at_breakpoints(&self) -> &[f64] {
        &self.at_breakpoints
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 || x > self.base.length {
            return Err(Error::Domain(format!(
                "x = {x} outside the primitive's domain [0, {}]",
                self.base.length
            )));
        }
        let i = self.base.segment_index(x);
        Ok(self.base.segments[i].shape.antiderivative(x) + self.offsets[i])
    }

    /// Q(L) = ∫₀^L w.
    pub fn final_value(&self) -> f64 {
        *self.at_breakpoints.last().expect("non-empty")
    }

    /// Exact (min, max) of Q over [0, L]: candidates are breakpoint values and
    /// interior critical points of Q, i.e. roots of w.
    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &q in &self.at_breakpoints {
            lo = lo.min(q);
            hi = hi.max(q);
        }
        for (i, seg) in self.base.segments.iter().enumerate() {
            let a = self.base.segment_start(i);
            for x in seg.shape.roots_in(a, seg.end) {
                let q = seg.shape.antiderivative(x) + self.offsets[i];
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        (lo, hi)
    }

    /// max Q over [0, L] (a signed sup: no absolute value).
    pub fn signed_sup(&self) -> f64 {
        self.min_max().1
    }
}
