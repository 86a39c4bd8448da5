use crate::error::{Error, Result};
use crate::linalg::Vec4;
use crate::minkowski::{lorentz_residual, mat5_identity, mat5_mul, Mat5};
use crate::rng::Lcg64;
use crate::sphere::SpherePoint3;

/// A Möbius transformation of S^3 given by its matrix in O⁺(4,1).
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap {
    a: Mat5,
}

impl MobiusMap {
    pub fn new(a: Mat5) -> Result<Self> {
        let r = lorentz_residual(&a);
        if !(r <= 1e-10) {
            return Err(Error::BadParameter(format!("matrix is not pseudo-orthogonal (residual {r:e})")));
        }
        if !(a[0][0] > 0.0) {
            return Err(Error::BadParameter("matrix reverses time orientation".into()));
        }
        Ok(MobiusMap { a })
    }

    pub fn identity() -> Self {
        MobiusMap { a: mat5_identity() }
    }

    /// Rotation by `angle` in the coordinate plane `(i, j)` of R^4 (indices 0..4).
    pub fn rotation(i: usize, j: usize, angle: f64) -> Self {
        let mut a = mat5_identity();
        let (sn, cs) = angle.sin_cos();
        a[i + 1][i + 1] = cs;
        a[j + 1][j + 1] = cs;
        a[i + 1][j + 1] = -sn;
        a[j + 1][i + 1] = sn;
        MobiusMap { a }
    }

    /// Boost of rapidity `beta` along the unit direction `n`.
    pub fn boost(n: &Vec4, beta: f64) -> Self {
        let n = n / n.norm();
        let (ch, sh) = (beta.cosh(), beta.sinh());
        let mut a = mat5_identity();
        a[0][0] = ch;
        for i in 0..4 {
            a[0][i + 1] = sh * n[i];
            a[i + 1][0] = sh * n[i];
            for j in 0..4 {
                a[i + 1][j + 1] += (ch - 1.0) * n[i] * n[j];
            }
        }
        MobiusMap { a }
    }

    pub fn matrix(&self) -> &Mat5 {
        &self.a
    }

    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap { a: mat5_mul(&self.a, &other.a) }
    }

    /// `J Aᵀ J`.
    pub fn inverse(&self) -> MobiusMap {
        let mut b = [[0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let sign = if (i == 0) != (j == 0) { -1.0 } else { 1.0 };
                b[i][j] = sign * self.a[j][i];
            }
        }
        MobiusMap { a: b }
    }

    fn apply5(&self, v: &[f64; 5]) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (i, row) in self.a.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(x, y)| x * y).sum();
        }
        out
    }

    pub fn act_vec(&self, x: &Vec4) -> Vec4 {
        let v = self.apply5(&[1.0, x[0], x[1], x[2], x[3]]);
        Vec4::new(v[1], v[2], v[3], v[4]) / v[0]
    }

    pub fn act(&self, x: &SpherePoint3) -> SpherePoint3 {
        SpherePoint3::normalized(self.act_vec(x.as_vec()))
    }

    /// Image of a point and of a tangent vector at it.
    pub fn push_forward(&self, x: &Vec4, xi: &Vec4) -> (Vec4, Vec4) {
        let v = self.apply5(&[1.0, x[0], x[1], x[2], x[3]]);
        let w = self.apply5(&[0.0, xi[0], xi[1], xi[2], xi[3]]);
        let point = Vec4::new(v[1], v[2], v[3], v[4]) / v[0];
        let dw = Vec4::new(w[1], w[2], w[3], w[4]);
        (point, dw / v[0] - point * (w[0] / v[0]))
    }
}

fn inner5(u: &[f64; 5], v: &[f64; 5]) -> f64 {
    -u[0] * v[0] + (1..5).map(|i| u[i] * v[i]).sum::<f64>()
}

/// Gram–Schmidt of the columns under the Lorentzian form; column 0 timelike.
fn lorentz_orthonormalize(a: &Mat5) -> Mat5 {
    let mut cols: Vec<[f64; 5]> = (0..5).map(|j| std::array::from_fn(|i| a[i][j])).collect();
    for j in 0..5 {
        for k in 0..j {
            let sign = if k == 0 { -1.0 } else { 1.0 };
            let proj = sign * inner5(&cols[j], &cols[k]);
            let ck = cols[k];
            for (x, y) in cols[j].iter_mut().zip(ck) {
                *x -= proj * y;
            }
        }
        let n = inner5(&cols[j], &cols[j]).abs().sqrt();
        cols[j].iter_mut().for_each(|x| *x /= n);
    }
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

fn random_rotation(rng: &mut Lcg64) -> Mat5 {
    let mut q: Vec<Vec4> = Vec::with_capacity(4);
    while q.len() < 4 {
        let mut v = Vec4::new(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        for u in &q {
            v -= u * u.dot(&v);
        }
        let n = v.norm();
        if n > 1e-3 {
            q.push(v / n);
        }
    }
    let m = nalgebra::Matrix4::from_columns(&q);
    if m.determinant() < 0.0 {
        q[3] = -q[3];
    }
    let mut a = mat5_identity();
    for j in 0..4 {
        for i in 0..4 {
            a[i + 1][j + 1] = q[j][i];
        }
    }
    a
}

/// Seeded random element of O⁺(4,1): a rotation followed by a boost of
/// rapidity uniform in `[0, rapidity_max]`.
pub fn random_mobius(seed: u64, rapidity_max: f64) -> Result<MobiusMap> {
    if !(0.0..=2.0).contains(&rapidity_max) {
        return Err(Error::BadParameter(format!("rapidity_max {rapidity_max} outside [0, 2]")));
    }
    let mut rng = Lcg64::new(seed);
    let rot = random_rotation(&mut rng);
    let beta = rng.uniform() * rapidity_max;
    let dir = Vec4::new(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    let a = mat5_mul(MobiusMap::boost(&dir, beta).matrix(), &rot);
    Ok(MobiusMap { a: lorentz_orthonormalize(&a) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_rotation_actions() {
        let x = SpherePoint3::new(Vec4::new(0.6, 0.0, 0.8, 0.0)).unwrap();
        assert_eq!(MobiusMap::identity().act(&x), x);
        let r = MobiusMap::rotation(0, 1, std::f64::consts::FRAC_PI_2);
        let y = r.act(&x);
        assert!((y.as_vec() - Vec4::new(0.0, 0.6, 0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn boost_fixes_its_axis_point() {
        let b = MobiusMap::boost(&Vec4::x(), 1.3);
        let x = SpherePoint3::new(Vec4::x()).unwrap();
        assert!((b.act(&x).as_vec() - Vec4::x()).norm() < 1e-14);
        let y = SpherePoint3::new(-Vec4::x()).unwrap();
        assert!((b.act(&y).as_vec() + Vec4::x()).norm() < 1e-14);
        let z = SpherePoint3::new(Vec4::y()).unwrap();
        assert!((b.act(&z).as_vec() - Vec4::y()).norm() > 0.1);
    }

    #[test]
    fn random_maps_are_pseudo_orthogonal_and_deterministic() {
        for seed in 0..50 {
            let m = random_mobius(seed, 2.0).unwrap();
            assert!(lorentz_residual(m.matrix()) <= 1e-12);
            assert!(m.matrix()[0][0] > 0.0);
            assert_eq!(m, random_mobius(seed, 2.0).unwrap());
            let e = m.compose(&m.inverse());
            assert!(lorentz_residual(e.matrix()) < 1e-11);
            let id = mat5_identity();
            for i in 0..5 {
                for j in 0..5 {
                    assert!((e.matrix()[i][j] - id[i][j]).abs() < 1e-10);
                }
            }
        }
        let r = random_mobius(4, 0.0).unwrap();
        assert_eq!(r.matrix()[0][0], 1.0);
        assert!(random_mobius(0, 2.5).is_err());
    }

    #[test]
    fn push_forward_matches_difference_quotient() {
        let m = random_mobius(8, 1.5).unwrap();
        let x = Vec4::new(0.5, 0.5, 0.5, 0.5);
        let xi = Vec4::new(1.0, -1.0, 0.5, -0.5);
        let h = 1e-6;
        let path = |u: f64| x * u.cos() + xi / xi.norm() * u.sin();
        let fd = (m.act_vec(&path(h)) - m.act_vec(&path(-h))) / (2.0 * h);
        let (p, v) = m.push_forward(&x, &(xi / xi.norm()));
        assert!((p.norm() - 1.0).abs() < 1e-12);
        assert!((v - fd).norm() < 1e-7);
    }

    #[test]
    fn rejects_non_lorentz_matrices() {
        let mut a = mat5_identity();
        a[1][1] = 2.0;
        assert!(MobiusMap::new(a).is_err());
        a = mat5_identity();
        a[0][0] = -1.0;
        assert!(MobiusMap::new(a).is_err());
        assert!(MobiusMap::new(mat5_identity()).is_ok());
    }
}
