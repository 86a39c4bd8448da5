use std::f64::consts::TAU;

use super::mobius::MobiusMap;
use super::spline::PeriodicQuintic;
use crate::error::{Error, Result};
use crate::linalg::Vec4;

/// Smallest admissible parametric speed.
pub const V_MIN: f64 = 1e-4;
/// Largest Fourier mode accepted for `Fourier4` curves.
pub const K_MAX: usize = 16;
/// Default node count when resampling a curve into `Samples` form.
pub const DEFAULT_SAMPLES: usize = 256;

/// A point of a curve on S^3 together with its parametric velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub point: Vec4,
    pub velocity: Vec4,
}

impl CurveSample {
    /// Builds a sample from a point map by central differences, projecting
    /// the velocity onto the tangent space.
    pub fn central_difference(f: impl Fn(f64) -> Vec4, s: f64, h: f64) -> Self {
        let point = f(s);
        let raw = (f(s + h) - f(s - h)) / (2.0 * h);
        CurveSample { point, velocity: raw - point * point.dot(&raw) }
    }
}

/// A closed curve on S^3 with period 2π.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkCurve {
    /// Round circle `center + radius (cos s e1 + sin s e2)`; `center = 0`, `radius = 1` is a great circle.
    Circle { center: Vec4, e1: Vec4, e2: Vec4, radius: f64 },
    /// Radial normalization of a truncated Fourier series in R^4.
    Fourier4 { a0: Vec4, a: Vec<Vec4>, b: Vec<Vec4> },
    /// Radial normalization of a periodic quintic through uniformly spaced nodes.
    Samples(PeriodicQuintic),
    /// Image of another curve under a Möbius map.
    Transformed { base: Box<LinkCurve>, map: MobiusMap },
    /// The same curve traversed backwards.
    Reversed(Box<LinkCurve>),
}

fn radial(r: Vec4, dr: Vec4) -> Option<CurveSample> {
    let n = r.norm();
    if !(n > 1e-12) {
        return None;
    }
    let point = r / n;
    Some(CurveSample { point, velocity: (dr - point * point.dot(&dr)) / n })
}

impl LinkCurve {
    pub fn great_circle(e1: Vec4, e2: Vec4) -> Self {
        LinkCurve::Circle { center: Vec4::zeros(), e1, e2, radius: 1.0 }
    }

    /// Circle with orthonormal `e1, e2` orthogonal to `center`, lying on S^3.
    pub fn circle(center: Vec4, e1: Vec4, e2: Vec4, radius: f64) -> Result<Self> {
        let tol = 1e-10;
        let ortho = (e1.norm() - 1.0).abs() < tol
            && (e2.norm() - 1.0).abs() < tol
            && e1.dot(&e2).abs() < tol
            && center.dot(&e1).abs() < tol
            && center.dot(&e2).abs() < tol;
        if !ortho {
            return Err(Error::BadParameter("circle frame must be orthonormal and orthogonal to the center".into()));
        }
        if !(radius > 0.0) || (center.norm_squared() + radius * radius - 1.0).abs() > tol {
            return Err(Error::BadParameter(format!("circle of radius {radius} does not lie on the unit sphere")));
        }
        Ok(LinkCurve::Circle { center, e1, e2, radius })
    }

    pub fn fourier(a0: Vec4, a: Vec<Vec4>, b: Vec<Vec4>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::BadParameter(format!("fourier4: {} cosine vs {} sine modes", a.len(), b.len())));
        }
        if a.len() > K_MAX {
            return Err(Error::BadParameter(format!("fourier4: {} modes exceeds {K_MAX}", a.len())));
        }
        let finite = std::iter::once(&a0).chain(&a).chain(&b).all(|v| v.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(Error::BadParameter("fourier4: non-finite coefficient".into()));
        }
        Ok(LinkCurve::Fourier4 { a0, a, b })
    }

    /// Interpolating curve through nodes on S^3 at parameters `2πj/N`.
    pub fn samples(nodes: Vec<Vec4>) -> Result<Self> {
        if nodes.len() < 8 {
            return Err(Error::BadPolygon(format!("{} nodes, need at least 8", nodes.len())));
        }
        for (j, p) in nodes.iter().enumerate() {
            if !p.iter().all(|x| x.is_finite()) {
                return Err(Error::BadPolygon(format!("node {j} is not finite")));
            }
            let q = &nodes[(j + 1) % nodes.len()];
            if (p - q).norm() < 1e-12 {
                return Err(Error::BadPolygon(format!("node {j} repeats its successor")));
            }
        }
        Ok(LinkCurve::Samples(PeriodicQuintic::new(nodes)))
    }

    /// Resamples any curve into `Samples` form with `n` nodes.
    pub fn resample(&self, n: usize) -> Result<Self> {
        let nodes = (0..n)
            .map(|j| self.evaluate(TAU * j as f64 / n as f64).map(|c| c.point))
            .collect::<Result<Vec<_>>>()?;
        LinkCurve::samples(nodes)
    }

    pub fn transformed(&self, map: &MobiusMap) -> Self {
        LinkCurve::Transformed { base: Box::new(self.clone()), map: map.clone() }
    }

    pub fn reversed(&self) -> Self {
        match self {
            LinkCurve::Reversed(inner) => (**inner).clone(),
            other => LinkCurve::Reversed(Box::new(other.clone())),
        }
    }

    fn evaluate_raw(&self, s: f64) -> Option<CurveSample> {
        match self {
            LinkCurve::Circle { center, e1, e2, radius } => {
                let (sn, cs) = s.sin_cos();
                Some(CurveSample {
                    point: center + (e1 * cs + e2 * sn) * *radius,
                    velocity: (e2 * cs - e1 * sn) * *radius,
                })
            }
            LinkCurve::Fourier4 { a0, a, b } => {
                let mut r = *a0;
                let mut dr = Vec4::zeros();
                for (k, (ak, bk)) in a.iter().zip(b).enumerate() {
                    let kf = (k + 1) as f64;
                    let (sn, cs) = (kf * s).sin_cos();
                    r += ak * cs + bk * sn;
                    dr += (bk * cs - ak * sn) * kf;
                }
                radial(r, dr)
            }
            LinkCurve::Samples(sp) => {
                let (r, dr) = sp.eval(s);
                radial(r, dr)
            }
            LinkCurve::Transformed { base, map } => {
                let c = base.evaluate_raw(s)?;
                let (point, velocity) = map.push_forward(&c.point, &c.velocity);
                Some(CurveSample { point, velocity })
            }
            LinkCurve::Reversed(inner) => {
                let c = inner.evaluate_raw(-s)?;
                Some(CurveSample { point: c.point, velocity: -c.velocity })
            }
        }
    }

    /// Point and velocity at parameter `s` (taken mod 2π).
    pub fn evaluate(&self, s: f64) -> Result<CurveSample> {
        let c = self.evaluate_raw(s).ok_or(Error::ImmersionFailure { s, speed: 0.0 })?;
        let speed = c.velocity.norm();
        if !(speed >= V_MIN) {
            return Err(Error::ImmersionFailure { s, speed });
        }
        Ok(c)
    }

    /// Evaluates at `n` uniform parameters `2πi/n`.
    pub fn sample_uniform(&self, n: usize) -> Result<Vec<CurveSample>> {
        (0..n).map(|i| self.evaluate(TAU * i as f64 / n as f64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;

    fn wobbly() -> LinkCurve {
        LinkCurve::fourier(
            Vec4::new(0.1, 0.0, -0.2, 0.05),
            vec![Vec4::new(1.0, 0.0, 0.1, 0.0), Vec4::new(0.0, 0.2, 0.0, 0.1)],
            vec![Vec4::new(0.0, 1.0, 0.0, 0.2), Vec4::new(0.1, 0.0, 0.0, -0.1)],
        )
        .unwrap()
    }

    #[test]
    fn hopf_component_values() {
        let c = LinkCurve::great_circle(Vec4::x(), Vec4::y());
        let s = 0.8;
        let e = c.evaluate(s).unwrap();
        assert!((e.point - Vec4::new(s.cos(), s.sin(), 0.0, 0.0)).norm() < 1e-15);
        assert!((e.velocity - Vec4::new(-s.sin(), s.cos(), 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn samples_track_analytic_circle() {
        let circle = LinkCurve::great_circle(Vec4::x(), Vec4::y());
        let sampled = circle.resample(DEFAULT_SAMPLES).unwrap();
        for i in 0..100 {
            let s = 0.05 + 0.0617 * i as f64;
            let a = circle.evaluate(s).unwrap();
            let b = sampled.evaluate(s).unwrap();
            assert!((a.point - b.point).norm() < 1e-8);
            assert!((a.velocity - b.velocity).norm() < 1e-6);
        }
    }

    #[test]
    fn fourier_velocity_matches_difference_quotient() {
        let c = wobbly();
        for i in 0..20 {
            let s = 0.3 * i as f64;
            let e = c.evaluate(s).unwrap();
            let fd = CurveSample::central_difference(|u| c.evaluate(u).unwrap().point, s, 1e-5);
            assert!((e.velocity - fd.velocity).norm() < 1e-8);
        }
    }

    #[test]
    fn unit_and_tangent_and_periodic() {
        let curves = [wobbly(), wobbly().resample(64).unwrap(), wobbly().reversed()];
        let mut rng = Lcg64::new(1);
        for c in &curves {
            for _ in 0..50 {
                let e = c.evaluate(rng.range(-10.0, 10.0)).unwrap();
                assert!((e.point.norm() - 1.0).abs() < 1e-12);
                assert!(e.point.dot(&e.velocity).abs() < 1e-10);
            }
            let a = c.evaluate(0.0).unwrap();
            let b = c.evaluate(TAU).unwrap();
            assert!((a.point - b.point).norm() < 1e-12);
            assert!((a.velocity - b.velocity).norm() < 1e-12);
        }
    }

    #[test]
    fn reversed_runs_backwards() {
        let c = wobbly();
        let r = c.reversed();
        let a = c.evaluate(1.1).unwrap();
        let b = r.evaluate(-1.1).unwrap();
        assert_eq!(a.point, b.point);
        assert_eq!(a.velocity, -b.velocity);
        assert_eq!(r.reversed(), c);
    }

    #[test]
    fn constant_curve_is_not_immersed() {
        let c = LinkCurve::fourier(Vec4::x(), vec![Vec4::zeros()], vec![Vec4::zeros()]).unwrap();
        assert!(matches!(c.evaluate(0.3), Err(Error::ImmersionFailure { .. })));
        let z = LinkCurve::fourier(Vec4::zeros(), vec![], vec![]).unwrap();
        assert!(matches!(z.evaluate(0.3), Err(Error::ImmersionFailure { .. })));
    }

    #[test]
    fn constructor_errors() {
        assert!(LinkCurve::fourier(Vec4::x(), vec![Vec4::x()], vec![]).is_err());
        assert!(LinkCurve::fourier(Vec4::x(), vec![Vec4::x(); 17], vec![Vec4::y(); 17]).is_err());
        assert!(matches!(LinkCurve::samples(vec![Vec4::x(); 5]), Err(Error::BadPolygon(_))));
        assert!(LinkCurve::circle(Vec4::zeros(), Vec4::x(), Vec4::x(), 1.0).is_err());
        assert!(LinkCurve::circle(Vec4::zeros(), Vec4::x(), Vec4::y(), 0.5).is_err());
    }
}
