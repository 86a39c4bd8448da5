use nalgebra::Vector3;

use super::curve::LinkCurve;
use crate::error::{Error, Result};
use crate::linalg::Vec4;

pub type Vec3 = Vector3<f64>;

/// Inverse stereographic projection from the north pole `(0,0,0,1)`.
pub fn inverse_stereographic(u: &Vec3) -> Vec4 {
    let q = u.norm_squared();
    Vec4::new(2.0 * u[0], 2.0 * u[1], 2.0 * u[2], q - 1.0) / (q + 1.0)
}

/// Stereographic projection from the north pole; undefined at the pole itself.
pub fn stereographic(x: &Vec4) -> Vec3 {
    Vec3::new(x[0], x[1], x[2]) / (1.0 - x[3])
}

/// Lifts a closed polygon in R^3 to an interpolating curve on S^3. A final
/// node equal to the first is treated as the closing vertex and dropped.
pub fn chart_lift(points: &[Vec3]) -> Result<LinkCurve> {
    let mut pts = points;
    if pts.len() > 1 && pts.first() == pts.last() {
        pts = &pts[..pts.len() - 1];
    }
    if pts.len() < 8 {
        return Err(Error::BadPolygon(format!("{} distinct nodes, need at least 8", pts.len())));
    }
    if let Some(j) = pts.iter().position(|p| !p.iter().all(|x| x.is_finite())) {
        return Err(Error::BadPolygon(format!("node {j} is not finite")));
    }
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if (pts[i] - pts[j]).norm() < 1e-12 {
                return Err(Error::BadPolygon(format!("nodes {i} and {j} coincide")));
            }
        }
    }
    LinkCurve::samples(pts.iter().map(inverse_stereographic).collect())
}
