//! Closed curves on S^3, two-component links and the Möbius group action.

pub mod catalogue;
mod chart;
mod curve;
pub mod file;
mod mobius;
mod spline;


pub use catalogue::{standard_link, StandardLink};
pub use chart::{chart_lift, inverse_stereographic, stereographic, Vec3};
pub use curve::{CurveSample, LinkCurve, DEFAULT_SAMPLES, K_MAX, V_MIN};
pub use mobius::{random_mobius, MobiusMap};

use crate::error::{Error, Result};
use crate::sphere::DELTA_SEP;

/// Probe resolution for the disjointness check.
pub const PROBE_GRID: usize = 256;

/// An ordered pair of disjoint closed curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Link2 {
    pub c1: LinkCurve,
    pub c2: LinkCurve,
}

impl Link2 {
    /// Validates immersion and disjointness on the probe grid.
    pub fn new(c1: LinkCurve, c2: LinkCurve) -> Result<Self> {
        let link = Link2 { c1, c2 };
        if link.min_separation(PROBE_GRID)? <= DELTA_SEP {
            return Err(Error::DisjointnessViolation);
        }
        Ok(link)
    }

    pub fn new_unchecked(c1: LinkCurve, c2: LinkCurve) -> Self {
        Link2 { c1, c2 }
    }

    /// Minimal chordal distance over an `n × n` parameter grid.
    pub fn min_separation(&self, n: usize) -> Result<f64> {
        let xs = self.c1.sample_uniform(n)?;
        let ys = self.c2.sample_uniform(n)?;
        let mut best = f64::INFINITY;
        for x in &xs {
            for y in &ys {
                best = best.min((x.point - y.point).norm());
            }
        }
        Ok(best)
    }

    pub fn sample(&self, s: f64, t: f64) -> Result<(CurveSample, CurveSample)> {
        Ok((self.c1.evaluate(s)?, self.c2.evaluate(t)?))
    }

    pub fn transformed(&self, map: &MobiusMap) -> Link2 {
        Link2 { c1: self.c1.transformed(map), c2: self.c2.transformed(map) }
    }

    /// Swaps the components.
    pub fn swapped(&self) -> Link2 {
        Link2 { c1: self.c2.clone(), c2: self.c1.clone() }
    }

    /// Uniform samples `2πi/n` of both components.
    pub fn sample_grid(&self, n: usize) -> Result<(Vec<CurveSample>, Vec<CurveSample>)> {
        Ok((self.c1.sample_uniform(n)?, self.c2.sample_uniform(n)?))
    }
}
