//! The space of oriented point-pairs of S^3 realized as unit decomposable
//! bivectors of R^10_6, and the first-order geometry of product tori in it.

use crate::error::{Error, Result};
use crate::link::{CurveSample, Link2};
use crate::linalg::{inertia, jacobi_eigen, orthonormal_complement, Vec4};
use crate::minkowski::{inner10, wedge, BiVector10, MinkVector5};

/// Chordal separation floor below which two points count as coincident.
pub const DELTA_SEP: f64 = 1e-6;
/// Central-difference step on unit-scale geometry.
pub const H_FD: f64 = 1e-5;
/// Eigenvalue zero-threshold for signature counts.
pub const TAU_EIG: f64 = 1e-7;

/// A point of the unit sphere S^3 ⊂ R^4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint3(Vec4);

impl SpherePoint3 {
    pub fn new(v: Vec4) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotOnSphere { norm });
        }
        Ok(SpherePoint3(v))
    }

    /// Radially projects a nonzero vector onto the sphere.
    pub fn normalized(v: Vec4) -> Self {
        SpherePoint3(v / v.norm())
    }

    pub fn as_vec(&self) -> &Vec4 {
        &self.0
    }
}

/// `x ↦ (1, x)`, the light-cone lift at height `x_0 = 1`.
pub fn lift(x: &SpherePoint3) -> MinkVector5 {
    let v = x.0;
    MinkVector5::new(1.0, v[0], v[1], v[2], v[3])
}

fn lift_raw(v: &Vec4) -> MinkVector5 {
    MinkVector5::new(1.0, v[0], v[1], v[2], v[3])
}

fn tangent_lift(v: &Vec4) -> MinkVector5 {
    MinkVector5::new(0.0, v[0], v[1], v[2], v[3])
}

/// An oriented 0-sphere as a unit decomposable bivector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSphere(BiVector10);

impl ZeroSphere {
    pub fn bivector(&self) -> &BiVector10 {
        &self.0
    }
}

pub(crate) fn check_separated(x: &Vec4, y: &Vec4) -> Result<()> {
    let distance = (x - y).norm();
    if distance <= DELTA_SEP {
        return Err(Error::CoincidentPoints { distance });
    }
    Ok(())
}

fn psi_raw(x: &Vec4, y: &Vec4) -> BiVector10 {
    let p = wedge(&lift_raw(x), &lift_raw(y));
    p * (1.0 / inner10(&p, &p).sqrt())
}

/// `ψ(x, y) = x̄ ∧ ȳ / |x̄ ∧ ȳ|`.
pub fn psi_embed(x: &SpherePoint3, y: &SpherePoint3) -> Result<ZeroSphere> {
    check_separated(&x.0, &y.0)?;
    Ok(ZeroSphere(psi_raw(&x.0, &y.0)))
}

/// `σ̃` and its two partial derivatives at one torus node.
#[derive(Debug, Clone, Copy)]
pub struct SigmaFrame {
    pub sigma: BiVector10,
    pub sigma_s: BiVector10,
    pub sigma_t: BiVector10,
}

/// Explicit-bivector route: differentiates `p / <p,p>^{1/2}` by the quotient rule.
pub fn sigma_derivatives_at(xs: &CurveSample, ys: &CurveSample) -> Result<SigmaFrame> {
    check_separated(&xs.point, &ys.point)?;
    let xb = lift_raw(&xs.point);
    let yb = lift_raw(&ys.point);
    let p = wedge(&xb, &yb);
    let p_s = wedge(&tangent_lift(&xs.velocity), &yb);
    let p_t = wedge(&xb, &tangent_lift(&ys.velocity));
    let n = inner10(&p, &p);
    let root = n.sqrt();
    let n32 = n * root;
    Ok(SigmaFrame {
        sigma: p * (1.0 / root),
        sigma_s: p_s * (1.0 / root) - p * (inner10(&p, &p_s) / n32),
        sigma_t: p_t * (1.0 / root) - p * (inner10(&p, &p_t) / n32),
    })
}

pub fn sigma_derivatives(link: &Link2, s: f64, t: f64) -> Result<SigmaFrame> {
    let (xs, ys) = link.sample(s, t)?;
    sigma_derivatives_at(&xs, &ys)
}

/// Closed form of `<σ̃_s, σ̃_t>` using nullity of the lifted points:
/// `g = (<x̄_s,ȳ_t><x̄,ȳ> - <x̄_s,ȳ><x̄,ȳ_t>) / <x̄,ȳ>^2`.
pub fn metric_coefficient_at(xs: &CurveSample, ys: &CurveSample) -> Result<f64> {
    check_separated(&xs.point, &ys.point)?;
    Ok(metric_coefficient_unchecked(xs, ys))
}

#[inline]
pub(crate) fn metric_coefficient_unchecked(xs: &CurveSample, ys: &CurveSample) -> f64 {
    let c = xs.point.dot(&ys.point) - 1.0;
    let st = xs.velocity.dot(&ys.velocity);
    let sy = xs.velocity.dot(&ys.point);
    let xt = xs.point.dot(&ys.velocity);
    (st * c - sy * xt) / (c * c)
}

pub fn metric_coefficient(link: &Link2, s: f64, t: f64) -> Result<f64> {
    let (xs, ys) = link.sample(s, t)?;
    metric_coefficient_at(&xs, &ys)
}

/// Eigenvalue sign counts of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.plus, self.minus, self.zero)
    }
}

fn signature_of(gram: &[Vec<f64>]) -> Signature {
    let (vals, _) = jacobi_eigen(gram);
    let (plus, minus, zero) = inertia(&vals, TAU_EIG);
    Signature { plus, minus, zero }
}

fn great_circle_step(x: &Vec4, v: &Vec4, h: f64) -> Vec4 {
    x * h.cos() + v * h.sin()
}

/// Six central-difference tangent vectors at `ψ(x, y)`: three moving `x`, three moving `y`.
pub fn theta_tangent_vectors(x: &SpherePoint3, y: &SpherePoint3) -> Result<Vec<BiVector10>> {
    check_separated(&x.0, &y.0)?;
    let mut tangents = Vec::with_capacity(6);
    for v in orthonormal_complement(&x.0) {
        let fwd = psi_raw(&great_circle_step(&x.0, &v, H_FD), &y.0);
        let bwd = psi_raw(&great_circle_step(&x.0, &v, -H_FD), &y.0);
        tangents.push((fwd - bwd) * (0.5 / H_FD));
    }
    for w in orthonormal_complement(&y.0) {
        let fwd = psi_raw(&x.0, &great_circle_step(&y.0, &w, H_FD));
        let bwd = psi_raw(&x.0, &great_circle_step(&y.0, &w, -H_FD));
        tangents.push((fwd - bwd) * (0.5 / H_FD));
    }
    let euclid: Vec<Vec<f64>> = tangents
        .iter()
        .map(|a| tangents.iter().map(|b| a.0.iter().zip(&b.0).map(|(u, v)| u * v).sum()).collect())
        .collect();
    let (evals, _) = jacobi_eigen(&euclid);
    let top = evals.iter().cloned().fold(0.0, f64::max);
    let rank = evals.iter().filter(|&&l| l > 1e-10 * top).count();
    if rank < 6 {
        return Err(Error::DegenerateBasis { rank });
    }
    Ok(tangents)
}

/// Sign counts of the Gram matrix of `vs` under `form`.
pub fn signature_under(vs: &[BiVector10], form: impl Fn(&BiVector10, &BiVector10) -> f64) -> Signature {
    let gram: Vec<Vec<f64>> = vs.iter().map(|a| vs.iter().map(|b| form(a, b)).collect()).collect();
    signature_of(&gram)
}

/// Signature of the R^10_6 inner product restricted to the tangent space of
/// the 0-sphere space at `ψ(x, y)`.
pub fn theta_tangent_signature(x: &SpherePoint3, y: &SpherePoint3) -> Result<Signature> {
    Ok(signature_under(&theta_tangent_vectors(x, y)?, inner10))
}

/// Signature of the induced form on the torus tangent plane `span(σ̃_s, σ̃_t)`.
pub fn torus_tangent_signature_at(xs: &CurveSample, ys: &CurveSample) -> Result<Signature> {
    let f = sigma_derivatives_at(xs, ys)?;
    Ok(signature_under(&[f.sigma_s, f.sigma_t], inner10))
}

pub fn torus_tangent_signature(link: &Link2, s: f64, t: f64) -> Result<Signature> {
    let (xs, ys) = link.sample(s, t)?;
    torus_tangent_signature_at(&xs, &ys)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusTangentType {
    /// Index-1 (Lorentzian) tangent plane.
    Mixed,
    /// Degenerate tangent plane; the conformal angle is π/2.
    Degenerate,
}

pub fn torus_tangent_type(link: &Link2, s: f64, t: f64) -> Result<TorusTangentType> {
    let g = metric_coefficient(link, s, t)?;
    Ok(if g.abs() > TAU_EIG { TorusTangentType::Mixed } else { TorusTangentType::Degenerate })
}
