//! Conformal angle and infinitesimal cross ratio of a link, by the bivector
//! formula, by circle geometry in a stereographic chart, and by a
//! finite-difference cross ratio of four nearby points.

use nalgebra::{Matrix5, Vector3};
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_complement, Vec4};
use crate::link::{CurveSample, Link2, Vec3};
use crate::sphere::{check_separated, metric_coefficient_unchecked, DELTA_SEP};

/// Tolerance for clamping the cosine of the wedge angle into [-1, 1].
pub const CLAMP_TOL: f64 = 1e-9;
/// Minimal distance from both curves for a preferred chart pole.
pub const POLE_CLEARANCE: f64 = 0.3;
/// Default step of the finite-difference cross ratio.
pub const FD_EPS: f64 = 1e-3;
/// Below this `|sin θ|` the chart construction cannot tell the two tangent circles apart.
pub const CHART_SIN_FLOOR: f64 = 1e-10;

const GOLDEN: f64 = 1.618_033_988_749_895;

/// Cross-ratio density per unit `ds dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRatioDensity {
    pub re: f64,
    pub abs: f64,
    pub theta: f64,
    /// `abs · sin θ`; the sign of the imaginary part is not tracked.
    pub imag_abs: f64,
}

fn angle_cos(g: f64, xs: &CurveSample, ys: &CurveSample) -> f64 {
    let chord2 = (xs.point - ys.point).norm_squared();
    g * chord2 / (2.0 * xs.velocity.norm() * ys.velocity.norm())
}

fn clamped_acos(c: f64) -> Result<f64> {
    if !(c.abs() <= 1.0 + CLAMP_TOL) {
        return Err(Error::AngleOutOfRange { value: c });
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

pub fn conformal_angle_wedge_at(xs: &CurveSample, ys: &CurveSample) -> Result<f64> {
    check_separated(&xs.point, &ys.point)?;
    clamped_acos(angle_cos(metric_coefficient_unchecked(xs, ys), xs, ys))
}

pub fn conformal_angle_wedge(link: &Link2, s: f64, t: f64) -> Result<f64> {
    let (xs, ys) = link.sample(s, t)?;
    conformal_angle_wedge_at(&xs, &ys)
}

pub fn inf_cross_ratio_at(xs: &CurveSample, ys: &CurveSample) -> Result<CrossRatioDensity> {
    check_separated(&xs.point, &ys.point)?;
    let g = metric_coefficient_unchecked(xs, ys);
    let theta = clamped_acos(angle_cos(g, xs, ys))?;
    let abs = xs.velocity.norm() * ys.velocity.norm() / (xs.point - ys.point).norm_squared();
    Ok(CrossRatioDensity { re: g / 2.0, abs, theta, imag_abs: abs * theta.sin() })
}

pub fn inf_cross_ratio(link: &Link2, s: f64, t: f64) -> Result<CrossRatioDensity> {
    let (xs, ys) = link.sample(s, t)?;
    inf_cross_ratio_at(&xs, &ys)
}

/// Candidate poles, scanned in order.
pub fn pole_candidates() -> Vec<Vec4> {
    let mut out = Vec::with_capacity(26);
    for k in 0..4 {
        for sign in [1.0, -1.0] {
            let mut v = Vec4::zeros();
            v[k] = sign;
            out.push(v);
        }
    }
    for bits in 0..16u32 {
        let v = Vec4::from_fn(|k, _| if bits >> k & 1 == 0 { 0.5 } else { -0.5 });
        out.push(v);
    }
    out.push(Vec4::new(1.0, 2.0, 3.0, 4.0).normalize());
    out.push(Vec4::new(-4.0, 3.0, -2.0, 1.0).normalize());
    out
}

/// Stereographic projection of S^3 from a pole onto the equatorial hyperplane,
/// expressed in an orthonormal basis of that hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct StereoChart {
    pole: Vec4,
    basis: [Vec4; 3],
}

impl StereoChart {
    pub fn with_pole(pole: Vec4) -> Self {
        let pole = pole.normalize();
        StereoChart { pole, basis: orthonormal_complement(&pole) }
    }

    /// First candidate pole at distance `POLE_CLEARANCE` from both curves,
    /// else the candidate with the largest clearance.
    pub fn for_link(link: &Link2) -> Result<Self> {
        let (xs, ys) = link.sample_grid(256)?;
        let mut best = (f64::NEG_INFINITY, Vec4::zeros());
        for pole in pole_candidates() {
            let clearance = xs
                .iter()
                .chain(&ys)
                .map(|c| (c.point - pole).norm())
                .fold(f64::INFINITY, f64::min);
            if clearance >= POLE_CLEARANCE {
                return Ok(StereoChart::with_pole(pole));
            }
            if clearance > best.0 {
                best = (clearance, pole);
            }
        }
        if best.0 <= DELTA_SEP {
            return Err(Error::PoleOnCurve { distance: best.0 });
        }
        Ok(StereoChart::with_pole(best.1))
    }

    pub fn pole(&self) -> &Vec4 {
        &self.pole
    }

    fn denom(&self, x: &Vec4) -> Result<f64> {
        let d = 1.0 - x.dot(&self.pole);
        let distance = (2.0 * d.max(0.0)).sqrt();
        if distance <= DELTA_SEP {
            return Err(Error::PoleOnCurve { distance });
        }
        Ok(d)
    }

    pub fn project(&self, x: &Vec4) -> Result<Vec3> {
        let d = self.denom(x)?;
        Ok(Vec3::from_fn(|k, _| x.dot(&self.basis[k]) / d))
    }

    /// Chart point and pushed-forward velocity.
    pub fn push(&self, c: &CurveSample) -> Result<(Vec3, Vec3)> {
        let d = self.denom(&c.point)?;
        let vn = c.velocity.dot(&self.pole);
        let p = Vec3::from_fn(|k, _| c.point.dot(&self.basis[k]) / d);
        let v = Vec3::from_fn(|k, _| c.velocity.dot(&self.basis[k]) / d + p[k] * vn / d);
        Ok((p, v))
    }

    /// Cosine and sine of the angle at `y` between the circle tangent to the
    /// first curve at `x` through `y` and the second curve.
    pub fn angle_cos_sin(&self, xs: &CurveSample, ys: &CurveSample) -> Result<(f64, f64)> {
        check_separated(&xs.point, &ys.point)?;
        let (px, tx) = self.push(xs)?;
        let (py, ty) = self.push(ys)?;
        let u = (py - px).normalize();
        let reflected = u * (2.0 * tx.dot(&u)) - tx;
        let scale = reflected.norm() * ty.norm();
        Ok((reflected.dot(&ty) / scale, reflected.cross(&ty).norm() / scale))
    }

    /// Conformal angle in [0, π]; `NotApplicable` where the two tangent circles coincide.
    pub fn angle(&self, xs: &CurveSample, ys: &CurveSample) -> Result<f64> {
        let (c, s) = self.angle_cos_sin(xs, ys)?;
        if s < CHART_SIN_FLOOR {
            return Err(Error::NotApplicable);
        }
        Ok(s.atan2(c))
    }

    /// Real part of the density from the chart angle.
    pub fn re_density(&self, xs: &CurveSample, ys: &CurveSample) -> Result<f64> {
        let (c, s) = self.angle_cos_sin(xs, ys)?;
        if s < CHART_SIN_FLOOR {
            return Err(Error::NotApplicable);
        }
        let abs = xs.velocity.norm() * ys.velocity.norm() / (xs.point - ys.point).norm_squared();
        Ok(abs * c)
    }
}

pub fn conformal_angle_chart(link: &Link2, s: f64, t: f64) -> Result<f64> {
    let chart = StereoChart::for_link(link)?;
    let (xs, ys) = link.sample(s, t)?;
    chart.angle(&xs, &ys)
}

/// Coordinates on the Riemann sphere through four points of R^3.
fn riemann_coordinates(points: &[Vec3; 4]) -> Result<[Complex64; 4]> {
    let centroid = points.iter().sum::<Vec3>() / 4.0;
    let scale = points.iter().map(|p| (p - centroid).norm()).fold(0.0, f64::max);
    let q: Vec<Vec3> = points.iter().map(|p| (p - centroid) / scale).collect();
    let mut m = Matrix5::<f64>::zeros();
    for (i, p) in q.iter().enumerate() {
        m[(i, 0)] = p.norm_squared();
        m[(i, 1)] = p[0];
        m[(i, 2)] = p[1];
        m[(i, 3)] = p[2];
        m[(i, 4)] = 1.0;
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..5).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let ratio = svd.singular_values[order[3]] / svd.singular_values[order[0]];
    if !(ratio >= 1e-10) {
        return Err(Error::DegenerateSphere { ratio });
    }
    let null = v_t.row(order[4]);
    let (a, b, c) = (null[0], Vec3::new(null[1], null[2], null[3]), null[4]);
    if a.abs() <= 1e-12 * b.norm() {
        let [e1, e2] = plane_basis(&b.normalize());
        return Ok(std::array::from_fn(|i| Complex64::new(q[i].dot(&e1), q[i].dot(&e2))));
    }
    let center = -b / (2.0 * a);
    let radius = (center.norm_squared() - c / a).sqrt();
    let w: Vec<Vec3> = q.iter().map(|p| (p - center) / radius).collect();
    let mut options = vec![-w.iter().sum::<Vec3>()];
    for k in 0..3 {
        options.push(Vector3::ith(k, 1.0));
        options.push(Vector3::ith(k, -1.0));
    }
    let clearance = |n: &Vec3| w.iter().map(|p| (p - n).norm()).fold(f64::INFINITY, f64::min);
    let pole = options
        .into_iter()
        .filter(|n| n.norm() > 1e-6)
        .map(|n| n.normalize())
        .max_by(|a, b| clearance(a).total_cmp(&clearance(b)))
        .expect("axis candidates are nonzero");
    let [e1, e2] = plane_basis(&pole);
    Ok(std::array::from_fn(|i| {
        let d = 1.0 - w[i].dot(&pole);
        let xi = (w[i] - pole * w[i].dot(&pole)) / d;
        Complex64::new(xi.dot(&e1), xi.dot(&e2))
    }))
}

fn plane_basis(n: &Vec3) -> [Vec3; 2] {
    let k = (0..3).min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs())).unwrap();
    let e1 = (Vec3::ith(k, 1.0) - n * n[k]).normalize();
    [e1, n.cross(&e1)]
}

fn cross_ratio_fd_once(chart: &StereoChart, xs: &CurveSample, ys: &CurveSample, eps: f64) -> Result<f64> {
    let (px, tx) = chart.push(xs)?;
    let (py, ty) = chart.push(ys)?;
    let h = eps / 2.0;
    let z = riemann_coordinates(&[px - tx * h, px + tx * h, py - ty * h, py + ty * h])?;
    let (x, a, y, b) = (z[0], z[1], z[2], z[3]);
    let cr = ((a - x) / (a - b)) / ((y - x) / (y - b));
    Ok(cr.re / (eps * eps))
}

/// Real part of the cross ratio of `x ∓ ε/2 x′, y ∓ ε/2 y′` divided by `ε²`,
/// computed in the chart; retried once at `ε·φ` if the points are concircular.
pub fn cross_ratio_fd_at(chart: &StereoChart, xs: &CurveSample, ys: &CurveSample, eps: f64) -> Result<f64> {
    check_separated(&xs.point, &ys.point)?;
    if !(1e-5..=1e-2).contains(&eps) {
        return Err(Error::BadParameter(format!("eps = {eps} outside [1e-5, 1e-2]")));
    }
    match cross_ratio_fd_once(chart, xs, ys, eps) {
        Err(Error::DegenerateSphere { .. }) => cross_ratio_fd_once(chart, xs, ys, eps * GOLDEN),
        other => other,
    }
}

pub fn cross_ratio_fd(link: &Link2, s: f64, t: f64, eps: f64) -> Result<f64> {
    let chart = StereoChart::for_link(link)?;
    let (xs, ys) = link.sample(s, t)?;
    cross_ratio_fd_at(&chart, &xs, &ys, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::{catalogue, random_mobius};
    use crate::rng::Lcg64;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn sample(p: Vec4, v: Vec4) -> CurveSample {
        CurveSample { point: p, velocity: v }
    }

    #[test]
    fn hopf_angle_is_right() {
        let link = catalogue::hopf();
        let chart = StereoChart::for_link(&link).unwrap();
        let mut rng = Lcg64::new(1);
        for _ in 0..100 {
            let (s, t) = (rng.range(0.0, TAU), rng.range(0.0, TAU));
            assert!((conformal_angle_wedge(&link, s, t).unwrap() - FRAC_PI_2).abs() < 1e-12);
            let (xs, ys) = link.sample(s, t).unwrap();
            assert!((chart.angle(&xs, &ys).unwrap() - FRAC_PI_2).abs() < 1e-10);
            let d = inf_cross_ratio(&link, s, t).unwrap();
            assert!(d.re.abs() < 1e-15);
            assert!((d.imag_abs - d.abs).abs() < 1e-12);
        }
        assert!(cross_ratio_fd(&link, 0.4, 2.0, 1e-3).unwrap().abs() < 1e-6);
    }

    #[test]
    fn antipodal_angle() {
        let vx = Vec4::new(1.0, 0.0, 0.0, 0.0);
        let alpha: f64 = 0.7;
        let vy = Vec4::new(alpha.cos(), alpha.sin(), 0.0, 0.0) * 2.0;
        let xs = sample(Vec4::new(0.0, 0.0, 1.0, 0.0), vx);
        let ys = sample(Vec4::new(0.0, 0.0, -1.0, 0.0), vy);
        let theta = conformal_angle_wedge_at(&xs, &ys).unwrap();
        assert!((theta - (std::f64::consts::PI - alpha)).abs() < 1e-12);
        let chart = StereoChart::with_pole(Vec4::new(0.0, 0.0, 0.0, 1.0));
        assert!((chart.angle(&xs, &ys).unwrap() - theta).abs() < 1e-12);
    }

    #[test]
    fn planar_right_angle_in_chart() {
        // Unit circle and the circle |u - (1,1,0)| = 1 meet orthogonally at (1,0,0).
        use crate::link::inverse_stereographic;
        let lift = |u: Vec3, du: Vec3| {
            let h = 1e-6;
            let p = inverse_stereographic(&u);
            let v = (inverse_stereographic(&(u + du * h)) - inverse_stereographic(&(u - du * h))) / (2.0 * h);
            sample(p, v)
        };
        let xs = lift(Vec3::new(0.0, 1.0, 0.0), Vec3::new(-1.0, 0.0, 0.0));
        let ys = lift(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
        let chart = StereoChart::with_pole(Vec4::new(0.0, 0.0, 0.0, 1.0));
        // x on the unit circle, y on the unit circle; the tangent circle is the unit circle itself.
        assert!(matches!(chart.angle(&xs, &ys), Err(Error::NotApplicable)));
        let ys2 = lift(Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        assert!((chart.angle(&xs, &ys2).unwrap() - FRAC_PI_2).abs() < 1e-8);
        assert!((conformal_angle_wedge_at(&xs, &ys2).unwrap() - FRAC_PI_2).abs() < 1e-8);
    }

    #[test]
    fn routes_agree_on_perturbed_link() {
        let link = catalogue::perturbed_hopf(0.2, 3).unwrap();
        let chart = StereoChart::for_link(&link).unwrap();
        let mut rng = Lcg64::new(2);
        for _ in 0..200 {
            let (s, t) = (rng.range(0.0, TAU), rng.range(0.0, TAU));
            let (xs, ys) = link.sample(s, t).unwrap();
            let wedge = conformal_angle_wedge_at(&xs, &ys).unwrap();
            let chart_angle = chart.angle(&xs, &ys).unwrap();
            assert!((wedge - chart_angle).abs() < 1e-7);
            let d = inf_cross_ratio_at(&xs, &ys).unwrap();
            assert!((d.re - d.abs * d.theta.cos()).abs() < 1e-10 * d.abs.max(1.0));
            assert!((d.re * d.re + d.imag_abs * d.imag_abs - d.abs * d.abs).abs() < 1e-10 * (d.abs * d.abs).max(1.0));
            assert!((chart.re_density(&xs, &ys).unwrap() - d.re).abs() < 1e-9 * d.abs.max(1.0));
        }
    }

    #[test]
    fn finite_difference_cross_ratio_is_second_order() {
        let link = catalogue::perturbed_hopf(0.2, 5).unwrap();
        let chart = StereoChart::for_link(&link).unwrap();
        for (s, t) in [(0.3, 1.7), (2.0, 4.4), (5.1, 0.9)] {
            let (xs, ys) = link.sample(s, t).unwrap();
            let re = inf_cross_ratio_at(&xs, &ys).unwrap().re;
            let e1 = (cross_ratio_fd_at(&chart, &xs, &ys, 1e-2).unwrap() - re).abs();
            let e2 = (cross_ratio_fd_at(&chart, &xs, &ys, 5e-3).unwrap() - re).abs();
            assert!(e1 < 5e-4 * re.abs().max(1.0));
            assert!((e1 / e2).log2() >= 1.9, "order {}", (e1 / e2).log2());
        }
    }

    #[test]
    fn concircular_points_are_degenerate() {
        let pts: [Vec3; 4] = std::array::from_fn(|i| {
            let a = 0.4 * i as f64;
            Vec3::new(a.cos(), a.sin(), 0.0)
        });
        assert!(matches!(riemann_coordinates(&pts), Err(Error::DegenerateSphere { .. })));
        let coplanar = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(2.0, 3.0, 0.0)];
        assert!(riemann_coordinates(&coplanar).is_ok());
    }

    #[test]
    fn eps_range_checked() {
        let link = catalogue::separated(1.0).unwrap();
        assert!(matches!(cross_ratio_fd(&link, 0.1, 0.2, 0.1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn density_is_mobius_invariant() {
        let link = catalogue::perturbed_hopf(0.15, 6).unwrap();
        let mut rng = Lcg64::new(4);
        for seed in 0..20 {
            let image = link.transformed(&random_mobius(seed, 1.0).unwrap());
            let (s, t) = (rng.range(0.0, TAU), rng.range(0.0, TAU));
            let a = inf_cross_ratio(&link, s, t).unwrap();
            let b = inf_cross_ratio(&image, s, t).unwrap();
            assert!((a.re - b.re).abs() <= 1e-7 * a.abs);
            assert!((a.abs - b.abs).abs() <= 1e-7 * a.abs);
        }
    }

    #[test]
    fn pole_candidates_are_unit() {
        let poles = pole_candidates();
        assert_eq!(poles.len(), 26);
        assert!(poles.iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
    }
}
