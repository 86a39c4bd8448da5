//! Minkowski space R^5_1 and its wedge square R^10_6.
//!
//! Coordinate 0 is timelike. Bivectors use Plücker coordinates `p_{ij}`,
//! `i < j`, in the fixed lexicographic order of [`PAIRS`].

use std::ops::{Add, Index, Mul, Neg, Sub};

/// Absolute tolerance used by [`causal_classify`].
pub const TAU_LIGHT: f64 = 1e-10;

/// Multi-index order of bivector coordinates.
pub const PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// Diagonal of the R^10_6 inner product in the [`PAIRS`] basis.
pub const SIGNATURE10: [f64; 10] = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0];

pub type Mat5 = [[f64; 5]; 5];

/// Position of `(i, j)` with `i < j` in [`PAIRS`].
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 5);
    // rows of the strict upper triangle of a 5x5 array
    const OFFSET: [usize; 4] = [0, 4, 7, 9];
    OFFSET[i] + (j - i - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkVector5(pub [f64; 5]);

impl MinkVector5 {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        MinkVector5([x0, x1, x2, x3, x4])
    }

    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 5];
        v[k] = 1.0;
        MinkVector5(v)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn transform(&self, a: &Mat5) -> Self {
        let mut out = [0.0; 5];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..5).map(|j| a[i][j] * self.0[j]).sum();
        }
        MinkVector5(out)
    }
}

impl Index<usize> for MinkVector5 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for MinkVector5 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        MinkVector5(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for MinkVector5 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        MinkVector5(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for MinkVector5 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        MinkVector5(self.0.map(|x| x * k))
    }
}

/// A 2-vector of R^10_6 in Plücker coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiVector10(pub [f64; 10]);

impl BiVector10 {
    pub fn zero() -> Self {
        BiVector10([0.0; 10])
    }

    /// `e_i ∧ e_j` for `i < j`.
    pub fn basis(i: usize, j: usize) -> Self {
        let mut p = [0.0; 10];
        p[pair_index(i, j)] = 1.0;
        BiVector10(p)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.0[pair_index(i, j)],
            std::cmp::Ordering::Greater => -self.0[pair_index(j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<usize> for BiVector10 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for BiVector10 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        BiVector10(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for BiVector10 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        BiVector10(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for BiVector10 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        BiVector10(self.0.map(|x| x * k))
    }
}

impl Neg for BiVector10 {
    type Output = Self;
    fn neg(self) -> Self {
        BiVector10(self.0.map(|x| -x))
    }
}

/// `-u0 v0 + u1 v1 + u2 v2 + u3 v3 + u4 v4`.
pub fn inner5(u: &MinkVector5, v: &MinkVector5) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3] + u[4] * v[4]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Timelike,
    Lightlike,
    Spacelike,
    Zero,
}

pub fn causal_classify(v: &MinkVector5) -> Causal {
    if v.max_abs() < TAU_LIGHT {
        return Causal::Zero;
    }
    let q = inner5(v, v);
    if q < -TAU_LIGHT {
        Causal::Timelike
    } else if q > TAU_LIGHT {
        Causal::Spacelike
    } else {
        Causal::Lightlike
    }
}

pub fn wedge(x: &MinkVector5, y: &MinkVector5) -> BiVector10 {
    BiVector10(PAIRS.map(|(i, j)| x[i] * y[j] - x[j] * y[i]))
}

/// Coordinate form of the induced inner product: `+1` on `e_0 ∧ e_j`,
/// `-1` on `e_i ∧ e_j` with `i ≥ 1`. Valid for non-decomposable bivectors too.
pub fn inner10(p: &BiVector10, q: &BiVector10) -> f64 {
    (0..10).map(|k| SIGNATURE10[k] * p[k] * q[k]).sum()
}

/// The five quadratic Plücker relations, one per 4-subset `a<b<c<d` of
/// `{0..4}` in lexicographic order: `-p_ab p_cd + p_ac p_bd - p_ad p_bc`.
pub fn plucker_residuals(p: &BiVector10) -> [f64; 5] {
    const QUADS: [[usize; 4]; 5] = [[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 4], [0, 2, 3, 4], [1, 2, 3, 4]];
    QUADS.map(|[a, b, c, d]| {
        -p.get(a, b) * p.get(c, d) + p.get(a, c) * p.get(b, d) - p.get(a, d) * p.get(b, c)
    })
}

/// 10x10 array of 2x2 minors of a 5x5 array, acting on Plücker coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorLift(pub [[f64; 10]; 10]);

impl MinorLift {
    pub fn identity() -> Self {
        let mut m = [[0.0; 10]; 10];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        MinorLift(m)
    }

    pub fn apply(&self, p: &BiVector10) -> BiVector10 {
        BiVector10(std::array::from_fn(|i| (0..10).map(|j| self.0[i][j] * p[j]).sum()))
    }

    pub fn compose(&self, other: &MinorLift) -> MinorLift {
        let mut m = [[0.0; 10]; 10];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..10).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        MinorLift(m)
    }

    /// `max |Ψᵀ G Ψ - G|` with `G` the R^10_6 signature.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                let v: f64 = (0..10).map(|k| self.0[k][i] * SIGNATURE10[k] * self.0[k][j]).sum();
                let target = if i == j { SIGNATURE10[i] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &MinorLift) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }
}

/// `ã_IJ = a_{i1 j1} a_{i2 j2} - a_{i1 j2} a_{i2 j1}`.
pub fn minor_lift(a: &Mat5) -> MinorLift {
    let mut m = [[0.0; 10]; 10];
    for (ii, &(i1, i2)) in PAIRS.iter().enumerate() {
        for (jj, &(j1, j2)) in PAIRS.iter().enumerate() {
            m[ii][jj] = a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1];
        }
    }
    MinorLift(m)
}

pub fn mat5_identity() -> Mat5 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

pub fn mat5_mul(a: &Mat5, b: &Mat5) -> Mat5 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..5).map(|k| a[i][k] * b[k][j]).sum()))
}

/// `max |Aᵀ J A - J|` with `J = diag(-1, 1, 1, 1, 1)`.
pub fn lorentz_residual(a: &Mat5) -> f64 {
    let eta = |k: usize| if k == 0 { -1.0 } else { 1.0 };
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let v: f64 = (0..5).map(|k| a[k][i] * eta(k) * a[k][j]).sum();
            let target = if i == j { eta(i) } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}
