//! Small dense helpers: cyclic Jacobi eigenvalues, orthonormal completion in R^4.

use nalgebra::Vector4;

pub type Vec4 = Vector4<f64>;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors stored as columns
/// (`vecs[row][col]`). Iterates until the off-diagonal Frobenius norm is below
/// `1e-12` times the matrix norm.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let norm: f64 = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-12 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[i][i]).collect(), v)
}

/// Counts of (positive, negative, zero) eigenvalues with zero-threshold `tau`.
pub fn inertia(eigenvalues: &[f64], tau: f64) -> (usize, usize, usize) {
    eigenvalues.iter().fold((0, 0, 0), |(p, m, z), &l| {
        if l > tau {
            (p + 1, m, z)
        } else if l < -tau {
            (p, m + 1, z)
        } else {
            (p, m, z + 1)
        }
    })
}

/// Three unit vectors completing `x` to an orthonormal basis of R^4.
///
/// Standard basis vectors are taken in order of increasing `|x_k|` (ties by
/// index) and Gram-Schmidt orthogonalized against `x` and each other.
pub fn orthonormal_complement(x: &Vec4) -> [Vec4; 3] {
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()).then(a.cmp(&b)));
    let x = x.normalize();
    let mut out: Vec<Vec4> = Vec::with_capacity(3);
    for &k in &order {
        if out.len() == 3 {
            break;
        }
        let mut e = Vec4::zeros();
        e[k] = 1.0;
        e -= x * x.dot(&e);
        for u in &out {
            e -= u * u.dot(&e);
        }
        let n = e.norm();
        if n > 1e-6 {
            out.push(e / n);
        }
    }
    [out[0], out[1], out[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes_symmetric_matrix() {
        let a = vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.2],
            vec![0.5, 0.2, -2.0],
        ];
        let (vals, vecs) = jacobi_eigen(&a);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i][j] * vecs[j][k]).sum();
                assert!((av - vals[k] * vecs[i][k]).abs() < 1e-12);
            }
        }
        let trace: f64 = vals.iter().sum();
        assert!((trace - 5.0).abs() < 1e-12);
    }

    #[test]
    fn inertia_of_indefinite_form() {
        let a = vec![vec![0.0, 2.0], vec![2.0, 0.0]];
        let (vals, _) = jacobi_eigen(&a);
        assert_eq!(inertia(&vals, 1e-7), (1, 1, 0));
    }

    #[test]
    fn complement_is_orthonormal() {
        let x = Vec4::new(0.3, -0.5, 0.7, 0.2).normalize();
        let b = orthonormal_complement(&x);
        for (i, u) in b.iter().enumerate() {
            assert!(u.dot(&x).abs() < 1e-14);
            assert!((u.norm() - 1.0).abs() < 1e-14);
            for w in &b[i + 1..] {
                assert!(u.dot(w).abs() < 1e-14);
            }
        }
    }
}
