//! Shared fixtures for the integration suites: independent numerical oracles
//! (finite differences, Sturm counts, elementary quadrature, scalar root
//! finding) and seeded random generators for weights and polynomials.
//!
//! Nothing here calls into the library's own quadrature or ODE machinery, so
//! agreement between a suite and its oracle is meaningful evidence.
#![allow(dead_code)]

use plyap::{PiecewiseWeight, Segment, Shape};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Elementary quadrature and root finding (oracle side).
// ---------------------------------------------------------------------------

/// Composite Simpson rule with n (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        total += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    total * h / 3.0
}

/// Bisection for a scalar root of f on [lo, hi]; f(lo) and f(hi) must differ
/// in sign.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest positive root of cos β · cosh β = 1 (clamped-beam frequency
/// equation), found by bisection on [4, 5].
pub fn clamped_beam_beta() -> f64 {
    bisect_root(|b: f64| b.cos() * b.cosh() - 1.0, 4.0, 5.0)
}

// ---------------------------------------------------------------------------
// Finite-difference oracle for p = 2.
// ---------------------------------------------------------------------------

/// Second-order finite-difference discretization of −(a u′)′ = λ ρ u with
/// Dirichlet ends: tridiagonal A (flux form, midpoint coefficients) against
/// diagonal B = diag(ρ(x_i)). Eigenvalues are extracted by bisection on the
/// Sturm negative-pivot count of A − λB, which for positive definite A equals
/// the number of positive pencil eigenvalues below λ.
pub struct FdOracle {
    n: usize,
    diag: Vec<f64>,
    off: Vec<f64>,
    b: Vec<f64>,
}

impl FdOracle {
    pub fn new<A, R>(a: A, rho: R, length: f64, n: usize) -> Self
    where
        A: Fn(f64) -> f64,
        R: Fn(f64) -> f64,
    {
        let h = length / (n + 1) as f64;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        let mut b = vec![0.0; n];
        for i in 1..=n {
            let x = i as f64 * h;
            let am = a(x - 0.5 * h);
            let ap = a(x + 0.5 * h);
            diag[i - 1] = (am + ap) / (h * h);
            if i < n {
                off[i - 1] = -ap / (h * h);
            }
            b[i - 1] = rho(x);
        }
        Self { n, diag, off, b }
    }

    /// Number of negative pivots of the LDLᵀ factorization of A − λB.
    fn negative_pivots(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut prev = 1.0;
        for i in 0..self.n {
            let t = self.diag[i] - lambda * self.b[i];
            let mut d = if i == 0 { t } else { t - self.off[i - 1] * self.off[i - 1] / prev };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
            prev = d;
        }
        count
    }

    /// k-th positive eigenvalue of the discrete pencil (k starts at 1).
    pub fn positive_eigenvalue(&self, k: usize) -> f64 {
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut guard = 0;
        while self.negative_pivots(hi) < k {
            hi *= 2.0;
            guard += 1;
            assert!(guard < 80, "discrete eigenvalue {k} not found below {hi:e}");
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.negative_pivots(mid) < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

// ---------------------------------------------------------------------------
// Random weight generators (all deterministic under a seeded rng).
// ---------------------------------------------------------------------------

/// Random strictly increasing cut points ending at `length`, with a minimum
/// gap so segments stay well conditioned.
fn cut_points(rng: &mut ChaCha8Rng, pieces: usize, length: f64) -> Vec<f64> {
    loop {
        let mut cuts: Vec<f64> = (0..pieces - 1)
            .map(|_| rng.gen_range(0.08..0.92) * length)
            .collect();
        cuts.push(length);
        cuts.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        let ok = cuts.iter().all(|&c| {
            let wide = c - prev >= 0.05 * length;
            prev = c;
            wide
        });
        if ok {
            return cuts;
        }
    }
}

/// A shape whose values over [start, end] stay within [lo, hi].
fn random_shape(rng: &mut ChaCha8Rng, start: f64, end: f64, lo: f64, hi: f64) -> Shape {
    match rng.gen_range(0..3) {
        0 => Shape::Constant { value: rng.gen_range(lo..hi) },
        1 => {
            let v0 = rng.gen_range(lo..hi);
            let v1 = rng.gen_range(lo..hi);
            let slope = (v1 - v0) / (end - start);
            Shape::Linear { slope, intercept: v0 - slope * start }
        }
        _ => {
            let center = rng.gen_range(lo..hi);
            let room = (hi - center).min(center - lo);
            let amplitude = rng.gen_range(0.2 * room..room.max(0.21 * room));
            Shape::Sinusoid {
                amplitude,
                omega: rng.gen_range(2.0..18.0),
                phase: rng.gen_range(0.0..std::f64::consts::TAU),
                offset: center,
            }
        }
    }
}

fn piecewise_in_range(
    rng: &mut ChaCha8Rng,
    length: f64,
    pieces: usize,
    lo: f64,
    hi: f64,
) -> PiecewiseWeight {
    let ends = cut_points(rng, pieces, length);
    let mut start = 0.0;
    let segments: Vec<Segment> = ends
        .iter()
        .map(|&end| {
            let shape = random_shape(rng, start, end, lo, hi);
            start = end;
            Segment { shape, end }
        })
        .collect();
    PiecewiseWeight::new(length, segments).expect("generated weight is valid")
}

/// Random piecewise weight on [0, length] whose positive and negative parts
/// both carry real mass.
pub fn sign_changing_weight(rng: &mut ChaCha8Rng, length: f64) -> PiecewiseWeight {
    loop {
        let pieces = rng.gen_range(1..=4);
        let w = piecewise_in_range(rng, length, pieces, -2.5, 2.5);
        let parts = w.split_parts();
        if parts.positive > 0.05 * length && parts.negative > 0.05 * length {
            return w;
        }
    }
}

/// Random piecewise coefficient bounded away from zero.
pub fn positive_coefficient(rng: &mut ChaCha8Rng, length: f64) -> PiecewiseWeight {
    loop {
        let pieces = rng.gen_range(1..=3);
        let w = piecewise_in_range(rng, length, pieces, 0.25, 3.0);
        if w.min_max().0 > 0.2 {
            return w;
        }
    }
}

/// Continuous sign-changing weight (a single sinusoid), suited to the
/// second-order finite-difference oracle.
pub fn smooth_indefinite_weight(rng: &mut ChaCha8Rng, length: f64) -> PiecewiseWeight {
    loop {
        let amplitude = rng.gen_range(0.8..2.0);
        let omega = rng.gen_range(4.0..15.0);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let offset = rng.gen_range(-0.4..0.4);
        let w = PiecewiseWeight::sinusoid(amplitude, omega, phase, offset, length).unwrap();
        let parts = w.split_parts();
        if parts.positive > 0.05 * length && parts.negative > 0.05 * length {
            return w;
        }
    }
}

/// Highly oscillatory weight with near-total cancellation: K full sine
/// periods plus an offset far smaller than the oscillation, so ∫ρ ≈ 0 while
/// ∫ρ⁺ stays of order one.
pub fn near_zero_mean_weight(rng: &mut ChaCha8Rng) -> PiecewiseWeight {
    let periods: u32 = rng.gen_range(48..=127);
    let amplitude = rng.gen_range(0.5..2.0);
    let omega = std::f64::consts::TAU * periods as f64;
    let offset = amplitude / omega * rng.gen_range(-1.0..1.0);
    PiecewiseWeight::sinusoid(amplitude, omega, 0.0, offset, 1.0).unwrap()
}

/// A weight plus a pointwise-larger companion: one segment is lifted by a
/// positive bump (and with probability 1/2 the whole weight is lifted too).
pub fn bump_pair(rng: &mut ChaCha8Rng, length: f64) -> (PiecewiseWeight, PiecewiseWeight) {
    let base = sign_changing_weight(rng, length);
    let c = rng.gen_range(0.2..1.2);
    if rng.gen_bool(0.5) {
        let lifted = base.add_constant(c);
        return (base, lifted);
    }
    let idx = rng.gen_range(0..base.segments().len());
    let segments: Vec<Segment> = base
        .segments()
        .iter()
        .enumerate()
        .map(|(i, seg)| {
            if i != idx {
                return *seg;
            }
            let shape = match seg.shape {
                Shape::Constant { value } => Shape::Constant { value: value + c },
                Shape::Linear { slope, intercept } => {
                    Shape::Linear { slope, intercept: intercept + c }
                }
                Shape::Sinusoid { amplitude, omega, phase, offset } => {
                    Shape::Sinusoid { amplitude, omega, phase, offset: offset + c }
                }
            };
            Segment { shape, end: seg.end }
        })
        .collect();
    let lifted = PiecewiseWeight::new(length, segments).unwrap();
    (base, lifted)
}

// ---------------------------------------------------------------------------
// Polynomials for the embedding suite.
// ---------------------------------------------------------------------------

/// Dense polynomial, coefficients in ascending order.
#[derive(Clone, Debug)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect())
    }

    pub fn nth_derivative(&self, n: usize) -> Poly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    pub fn sup_abs(&self, length: f64, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| self.eval(length * i as f64 / samples as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Random polynomial vanishing to order m at 0: x^m times a random cubic.
pub fn vanishing_polynomial(rng: &mut ChaCha8Rng, m: usize) -> Poly {
    let mut coeffs = vec![0.0; m];
    for _ in 0..4 {
        coeffs.push(rng.gen_range(-1.0..1.0));
    }
    Poly(coeffs)
}
