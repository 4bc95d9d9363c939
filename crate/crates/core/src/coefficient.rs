//! What the initial-value integrator needs to know about a coefficient:
//! pointwise values, where it jumps, and a few exact integrals. Both the
//! analytic [`PiecewiseWeight`] and the sampled [`GridWeight`] qualify, so
//! solvers work unchanged on original and transformed problems.

use crate::error::{Error, Result};
use crate::weights::PiecewiseWeight;

pub trait Coefficient: Sync {
    fn length(&self) -> f64;

    /// Pointwise value; x outside [0, L] is clamped (accepted steps can
    /// overshoot the edge by a rounding error).
    fn value(&self, x: f64) -> f64;

    /// Interior discontinuities. The integrator never steps across one, so
    /// the right-hand side stays smooth within every step.
    fn knots(&self) -> Vec<f64>;

    /// (∫w⁺, ∫w⁻) over [0, L], exact for both implementations.
    fn split_integrals(&self) -> (f64, f64);

    /// Interior continuous sign crossings, used as extra quadrature knots for
    /// integrands like (w±)^{1/p}.
    fn sign_points(&self) -> Vec<f64>;

    /// Some(c) when the coefficient is identically c.
    fn constant_value(&self) -> Option<f64> {
        None
    }
}

impl Coefficient for PiecewiseWeight {
    fn length(&self) -> f64 {
        PiecewiseWeight::length(self)
    }

    fn value(&self, x: f64) -> f64 {
        self.value_clamped(x)
    }

    fn knots(&self) -> Vec<f64> {
        let b = self.breakpoints();
        b[1..b.len() - 1].to_vec()
    }

    fn split_integrals(&self) -> (f64, f64) {
        let sp = self.split_parts();
        (sp.positive, sp.negative)
    }

    fn sign_points(&self) -> Vec<f64> {
        self.sign_change_points()
    }

    fn constant_value(&self) -> Option<f64> {
        PiecewiseWeight::constant_value(self)
    }
}

/// Pointwise negation of another coefficient. Solving the positive-λ ladder
/// of −w yields the negative ladder of w with λ negated, so one search
/// routine covers both signs.
pub(crate) struct Negated<'a, C: Coefficient + ?Sized>(pub &'a C);

impl<C: Coefficient + ?Sized> Coefficient for Negated<'_, C> {
    fn length(&self) -> f64 {
        self.0.length()
    }
    fn value(&self, x: f64) -> f64 {
        -self.0.value(x)
    }
    fn knots(&self) -> Vec<f64> {
        self.0.knots()
    }
    fn split_integrals(&self) -> (f64, f64) {
        let (p, n) = self.0.split_integrals();
        (n, p)
    }
    fn sign_points(&self) -> Vec<f64> {
        self.0.sign_points()
    }
    fn constant_value(&self) -> Option<f64> {
        self.0.constant_value().map(|c| -c)
    }
}

/// A function given by samples on a sorted grid, linear between nodes.
/// A node listed twice with two values is a jump; evaluation there returns
/// the right-hand value, matching the convention of [`PiecewiseWeight`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridWeight {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl GridWeight {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::Domain(format!(
                "grid weight needs matched node/value lists of length >= 2, got {} and {}",
                nodes.len(),
                values.len()
            )));
        }
        if nodes[0] != 0.0 {
            return Err(Error::Domain(format!("grid must start at 0, got {}", nodes[0])));
        }
        if !(*nodes.last().unwrap() > 0.0) {
            return Err(Error::Domain("grid must end at a positive length".into()));
        }
        for w in nodes.windows(2) {
            if !(w[1] >= w[0]) {
                return Err(Error::Domain(format!(
                    "grid nodes must be non-decreasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        if nodes.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid weight entries must be finite".into()));
        }
        Ok(Self { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Coefficient for GridWeight {
    fn length(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    fn value(&self, x: f64) -> f64 {
        let x = x.clamp(self.nodes[0], *self.nodes.last().unwrap());
        let mut i = self.nodes.partition_point(|&n| n <= x);
        if i == self.nodes.len() {
            i -= 1;
        }
        // nodes[i-1] <= x and (x < nodes[i] or x is the right endpoint).
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        if x1 <= x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    fn knots(&self) -> Vec<f64> {
        // Only genuine jumps break integration steps; the piecewise-linear
        // kinks at ordinary nodes are harmless to an embedded error estimate.
        let l = self.length();
        let mut out = Vec::new();
        for i in 1..self.nodes.len() {
            if self.nodes[i] == self.nodes[i - 1]
                && self.values[i] != self.values[i - 1]
                && self.nodes[i] > 0.0
                && self.nodes[i] < l
            {
                out.push(self.nodes[i]);
            }
        }
        out.dedup();
        out
    }

    fn split_integrals(&self) -> (f64, f64) {
        let mut pos = 0.0;
        let mut neg = 0.0;
        for i in 1..self.nodes.len() {
            let dx = self.nodes[i] - self.nodes[i - 1];
            if dx <= 0.0 {
                continue;
            }
            let (y0, y1) = (self.values[i - 1], self.values[i]);
            if y0 >= 0.0 && y1 >= 0.0 {
                pos += 0.5 * (y0 + y1) * dx;
            } else if y0 <= 0.0 && y1 <= 0.0 {
                neg -= 0.5 * (y0 + y1) * dx;
            } else {
                // One sign change splits the trapezoid into two triangles.
                let t = y0 / (y0 - y1);
                let left = 0.5 * y0 * t * dx;
                let right = 0.5 * y1 * (1.0 - t) * dx;
                if y0 > 0.0 {
                    pos += left;
                    neg -= right;
                } else {
                    neg -= left;
                    pos += right;
                }
            }
        }
        (pos, neg)
    }

    fn sign_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 1..self.nodes.len() {
            let dx = self.nodes[i] - self.nodes[i - 1];
            let (y0, y1) = (self.values[i - 1], self.values[i]);
            if dx > 0.0 && y0 * y1 < 0.0 {
                out.push(self.nodes[i - 1] + y0 / (y0 - y1) * dx);
            }
        }
        out
    }
}
