//! Standard two-component links.

use std::fmt;
use std::str::FromStr;

use super::curve::LinkCurve;
use super::Link2;
use crate::error::{Error, Result};
use crate::linalg::Vec4;
use crate::rng::Lcg64;

/// Number of Fourier modes carried by `perturbed_hopf`.
pub const PERTURBATION_MODES: usize = 3;

fn e(k: usize) -> Vec4 {
    let mut v = Vec4::zeros();
    v[k] = 1.0;
    v
}

/// `{(cos s, sin s, 0, 0)} ∪ {(0, 0, cos t, sin t)}`.
pub fn hopf() -> Link2 {
    Link2::new_unchecked(LinkCurve::great_circle(e(0), e(1)), LinkCurve::great_circle(e(2), e(3)))
}

/// Two unlinked round circles at heights `±d/2` along `e4`, in the planes
/// `(e1, e2)` and `(e1, e3)`; their minimal chordal distance is exactly `d`.
pub fn separated(d: f64) -> Result<Link2> {
    if !(d > 0.0 && d < 2.0) {
        return Err(Error::BadParameter(format!("separated: d = {d} outside (0, 2)")));
    }
    let h = d / 2.0;
    let r = (1.0 - h * h).sqrt();
    let c1 = LinkCurve::circle(e(3) * h, e(0), e(1), r)?;
    let c2 = LinkCurve::circle(e(3) * -h, e(0), e(2), r)?;
    Link2::new(c1, c2)
}

/// Preimages of two coaxial circles of radius `r` in the planes `z = ±gap/2` of the chart.
pub fn parallel_circles(r: f64, gap: f64) -> Result<Link2> {
    if !(r > 0.0 && r.is_finite() && gap > 0.0 && gap.is_finite()) {
        return Err(Error::BadParameter(format!("parallel_circles: r = {r}, gap = {gap} must be positive")));
    }
    let mk = |z: f64| {
        let q = r * r + z * z;
        let center = Vec4::new(0.0, 0.0, 2.0 * z / (q + 1.0), (q - 1.0) / (q + 1.0));
        let radius = 2.0 * r / (q + 1.0);
        LinkCurve::Circle { center, e1: e(0), e2: e(1), radius }
    };
    Link2::new(mk(gap / 2.0), mk(-gap / 2.0))
}

/// Hopf link with seeded Fourier noise of amplitude `eps` on both components.
pub fn perturbed_hopf(eps: f64, seed: u64) -> Result<Link2> {
    if !(0.0..0.3).contains(&eps) {
        return Err(Error::BadParameter(format!("perturbed_hopf: eps = {eps} outside [0, 0.3)")));
    }
    if eps == 0.0 {
        return Ok(hopf());
    }
    let mut rng = Lcg64::new(seed);
    let mut noise = |scale: f64| {
        Vec4::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0), rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)) * scale
    };
    let mut component = |u: Vec4, v: Vec4| {
        let a0 = noise(eps);
        let mut a = Vec::with_capacity(PERTURBATION_MODES);
        let mut b = Vec::with_capacity(PERTURBATION_MODES);
        for k in 1..=PERTURBATION_MODES {
            let base = if k == 1 { (u, v) } else { (Vec4::zeros(), Vec4::zeros()) };
            a.push(base.0 + noise(eps / k as f64));
            b.push(base.1 + noise(eps / k as f64));
        }
        LinkCurve::fourier(a0, a, b)
    };
    let c1 = component(e(0), e(1))?;
    let c2 = component(e(2), e(3))?;
    Link2::new(c1, c2)
}

/// Named catalogue entry, written `hopf`, `separated:D`, `parallel:R,GAP` or `perturbed:EPS,SEED`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardLink {
    Hopf,
    Separated(f64),
    ParallelCircles(f64, f64),
    PerturbedHopf(f64, u64),
}

impl StandardLink {
    pub fn build(&self) -> Result<Link2> {
        match *self {
            StandardLink::Hopf => Ok(hopf()),
            StandardLink::Separated(d) => separated(d),
            StandardLink::ParallelCircles(r, g) => parallel_circles(r, g),
            StandardLink::PerturbedHopf(eps, seed) => perturbed_hopf(eps, seed),
        }
    }
}

pub fn standard_link(name: &StandardLink) -> Result<Link2> {
    name.build()
}

impl FromStr for StandardLink {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameter(format!("unknown link name `{s}`"));
        let (head, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<&str> = if args.is_empty() { vec![] } else { args.split(',').map(str::trim).collect() };
        let f = |i: usize| nums.get(i).and_then(|x| x.parse::<f64>().ok()).ok_or_else(bad);
        match (head, nums.len()) {
            ("hopf", 0) => Ok(StandardLink::Hopf),
            ("separated", 1) => Ok(StandardLink::Separated(f(0)?)),
            ("parallel", 2) => Ok(StandardLink::ParallelCircles(f(0)?, f(1)?)),
            ("perturbed", 2) => {
                let seed = nums[1].parse::<u64>().map_err(|_| bad())?;
                Ok(StandardLink::PerturbedHopf(f(0)?, seed))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StandardLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardLink::Hopf => write!(f, "hopf"),
            StandardLink::Separated(d) => write!(f, "separated:{d}"),
            StandardLink::ParallelCircles(r, g) => write!(f, "parallel:{r},{g}"),
            StandardLink::PerturbedHopf(eps, seed) => write!(f, "perturbed:{eps},{seed}"),
        }
    }
}
