//! The effective potential `J_V(x) = V(x) - 2 int log|x - t| dmu_V(t)` and
//! the extreme-eigenvalue rates it induces.

use core::f64::consts::PI;
use num_traits::Float;

use crate::measures::ReferenceLaw;
use crate::quadrature::{adaptive, AdaptiveTolerance};
use crate::{Error, Result};

/// Which extreme eigenvalue a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

const GOLDEN_ITERATIONS: usize = 80;

/// Effective potential of a law, with its infimum located numerically.
#[derive(Debug, Clone)]
pub struct EffectivePotential {
    law: ReferenceLaw,
    tolerance: AdaptiveTolerance,
    edge_values: (f64, f64),
    infimum: f64,
    argmin: f64,
}

impl EffectivePotential {
    pub fn new(law: &ReferenceLaw) -> Result<Self> {
        Self::with_tolerance(law, AdaptiveTolerance::default())
    }

    pub fn with_tolerance(law: &ReferenceLaw, tolerance: AdaptiveTolerance) -> Result<Self> {
        let mut this = Self {
            law: law.clone(),
            tolerance,
            edge_values: (0.0, 0.0),
            infimum: 0.0,
            argmin: 0.0,
        };
        let (lo, hi) = law.support();
        let (blo, bhi) = law.domain();
        this.edge_values = (this.eval(lo)?, this.eval(hi)?);
        let (mut best, mut at) = if this.edge_values.0 <= this.edge_values.1 {
            (this.edge_values.0, lo)
        } else {
            (this.edge_values.1, hi)
        };
        let width = hi - lo;
        let mut intervals = alloc::vec![(lo, hi)];
        if bhi > hi {
            intervals.push((hi, bhi.min(hi + width)));
        }
        if blo < lo {
            intervals.push((blo.max(lo - width), lo));
        }
        for (a, b) in intervals {
            let (x, v) = this.golden(a, b)?;
            if v < best {
                best = v;
                at = x;
            }
        }
        this.infimum = best;
        this.argmin = at;
        Ok(this)
    }

    pub fn law(&self) -> &ReferenceLaw {
        &self.law
    }

    /// `J_V` at the support edges `(alpha-, alpha+)`.
    pub fn edge_values(&self) -> (f64, f64) {
        self.edge_values
    }

    /// Numerically located `inf J_V`.
    pub fn infimum(&self) -> f64 {
        self.infimum
    }

    pub fn argmin(&self) -> f64 {
        self.argmin
    }

    /// Distance between the numerical infimum and the smaller edge value.
    pub fn discrepancy(&self) -> f64 {
        (self.edge_values.0.min(self.edge_values.1) - self.infimum).abs()
    }

    /// `J_V(x)`; `+inf` where `V` is infinite.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (blo, bhi) = self.law.domain();
        if !(x >= blo && x <= bhi) {
            return Err(Error::Domain {
                x,
                lo: blo,
                hi: bhi,
            });
        }
        let v = self.law.potential(x)?;
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        Ok(v - 2.0 * self.log_potential(x)?)
    }

    /// `F+-(x) = J_V(x) - inf J_V` on the matching side of the support, `+inf` elsewhere.
    pub fn rate(&self, x: f64, side: Side) -> Result<f64> {
        let (lo, hi) = self.law.support();
        let outside = match side {
            Side::Plus => x >= hi,
            Side::Minus => x <= lo,
        };
        let j = self.eval(x)?;
        if !outside {
            return Ok(f64::INFINITY);
        }
        if x == hi || x == lo {
            return Ok(0.0);
        }
        Ok((j - self.infimum).max(0.0))
    }

    /// `int log|x - t| f_V(t) dt`, with `t = m + r cos(theta)` and the
    /// logarithmic singularity placed at a panel boundary.
    fn log_potential(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.law.support();
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        let mut failure = None;
        let mut integrand = |theta: f64| {
            let t = mid + rad * theta.cos();
            let d = (x - t).abs();
            if d == 0.0 {
                return 0.0;
            }
            match self.law.density(t) {
                Ok(f) => d.ln() * f * rad * theta.sin(),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        };
        let value = if x > lo && x < hi {
            let split = ((x - mid) / rad).acos();
            adaptive(0.0, split, self.tolerance, &mut integrand).value
                + adaptive(split, PI, self.tolerance, &mut integrand).value
        } else {
            adaptive(0.0, PI, self.tolerance, &mut integrand).value
        };
        match failure {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }

    fn golden(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (a, b);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let mut fc = self.eval(c)?;
        let mut fd = self.eval(d)?;
        for _ in 0..GOLDEN_ITERATIONS {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = self.eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = self.eval(d)?;
            }
            if (b - a).abs() < 1e-12 * (1.0 + a.abs()) {
                break;
            }
        }
        Ok(if fc <= fd { (c, fc) } else { (d, fd) })
    }
}

/// `J_V(x)`.
pub fn effective_potential(law: &ReferenceLaw, x: f64) -> Result<f64> {
    let (blo, bhi) = law.domain();
    if !(x >= blo && x <= bhi) {
        return Err(Error::Domain {
            x,
            lo: blo,
            hi: bhi,
        });
    }
    let ep = EffectivePotential {
        law: law.clone(),
        tolerance: AdaptiveTolerance::default(),
        edge_values: (0.0, 0.0),
        infimum: 0.0,
        argmin: 0.0,
    };
    ep.eval(x)
}

/// `F+-(x) = J_V(x) - inf J_V`.
pub fn rate_from_effective_potential(law: &ReferenceLaw, x: f64, side: Side) -> Result<f64> {
    EffectivePotential::new(law)?.rate(x, side)
}
