//! Descent of the area functional over Fourier-parametrized links.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functionals::{check_grid_size, metric_grid};
use crate::linalg::{jacobi_eigen, Vec4};
use crate::link::{Link2, LinkCurve};

/// Fourier modes per component.
pub const K: usize = 4;
/// Coefficient step for difference quotients.
pub const H_OPT: f64 = 1e-4;
pub const MAX_BACKTRACKS: usize = 25;
pub const MAX_STEPS: usize = 5000;
/// Objective value treated as the exact minimum.
pub const TARGET: f64 = 1e-12;
const RCOND: f64 = 1e-7;
const ROWS: usize = 2 * K + 1;

/// Both components' coefficients, laid out `[component][a0, a1..aK, b1..bK][coordinate]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVector(pub Vec<f64>);

impl ShapeVector {
    pub const DIM: usize = 2 * ROWS * 4;

    fn coeff(&self, comp: usize, row: usize) -> Vec4 {
        let o = (comp * ROWS + row) * 4;
        Vec4::new(self.0[o], self.0[o + 1], self.0[o + 2], self.0[o + 3])
    }

    fn set(&mut self, comp: usize, row: usize, v: &Vec4) {
        let o = (comp * ROWS + row) * 4;
        self.0[o..o + 4].copy_from_slice(v.as_slice());
    }

    fn component(&self, comp: usize) -> Result<LinkCurve> {
        let a0 = self.coeff(comp, 0);
        let a = (1..=K).map(|k| self.coeff(comp, k)).collect();
        let b = (1..=K).map(|k| self.coeff(comp, K + k)).collect();
        LinkCurve::fourier(a0, a, b)
    }

    /// Encodes both components; curves other than circles or short Fourier series
    /// are projected onto the first `K` modes.
    pub fn encode(link: &Link2) -> Result<Self> {
        let mut v = ShapeVector(vec![0.0; Self::DIM]);
        for (comp, curve) in [&link.c1, &link.c2].into_iter().enumerate() {
            let (a0, a, b) = fourier_coefficients(curve)?;
            v.set(comp, 0, &a0);
            for k in 0..K {
                v.set(comp, 1 + k, &a[k]);
                v.set(comp, 1 + K + k, &b[k]);
            }
        }
        Ok(v)
    }

    pub fn decode(&self) -> Result<Link2> {
        if self.0.len() != Self::DIM {
            return Err(Error::BadParameter(format!("shape vector has {} entries, expected {}", self.0.len(), Self::DIM)));
        }
        Link2::new(self.component(0)?, self.component(1)?)
    }

    /// Rescales each component so its raw curve has unit RMS norm on `n` samples.
    fn renormalize(&mut self, n: usize) {
        for comp in 0..2 {
            let mut acc = 0.0;
            for i in 0..n {
                let s = TAU * i as f64 / n as f64;
                let mut r = self.coeff(comp, 0);
                for k in 1..=K {
                    let (sn, cs) = (k as f64 * s).sin_cos();
                    r += self.coeff(comp, k) * cs + self.coeff(comp, K + k) * sn;
                }
                acc += r.norm_squared();
            }
            let scale = (acc / n as f64).sqrt();
            if scale > 0.0 {
                let o = comp * ROWS * 4;
                self.0[o..o + ROWS * 4].iter_mut().for_each(|x| *x /= scale);
            }
        }
    }
}

type Coeffs = (Vec4, Vec<Vec4>, Vec<Vec4>);

fn fourier_coefficients(curve: &LinkCurve) -> Result<Coeffs> {
    let mut a = vec![Vec4::zeros(); K];
    let mut b = vec![Vec4::zeros(); K];
    match curve {
        LinkCurve::Circle { center, e1, e2, radius } => {
            a[0] = e1 * *radius;
            b[0] = e2 * *radius;
            Ok((*center, a, b))
        }
        LinkCurve::Fourier4 { a0, a: ak, b: bk } if ak.len() <= K => {
            a[..ak.len()].copy_from_slice(ak);
            b[..bk.len()].copy_from_slice(bk);
            Ok((*a0, a, b))
        }
        other => {
            let n = 256;
            let pts = other.sample_uniform(n)?;
            let mut a0 = Vec4::zeros();
            for (i, p) in pts.iter().enumerate() {
                let s = TAU * i as f64 / n as f64;
                a0 += p.point / n as f64;
                for k in 0..K {
                    let (sn, cs) = ((k + 1) as f64 * s).sin_cos();
                    a[k] += p.point * (2.0 * cs / n as f64);
                    b[k] += p.point * (2.0 * sn / n as f64);
                }
            }
            Ok((a0, a, b))
        }
    }
}

/// Metric coefficient grid scaled by the quadrature weight `2π/n`, so that the
/// objective is the l1 norm of the result times `2π/n`.
fn weighted_metric(v: &ShapeVector, grid_n: usize) -> Result<Vec<f64>> {
    let link = v.decode()?;
    let (xs, ys) = link.sample_grid(grid_n)?;
    let w = TAU / grid_n as f64;
    Ok(metric_grid(&xs, &ys).into_iter().map(|g| g * w).collect())
}

fn l1_objective(weighted: &[f64], grid_n: usize) -> f64 {
    weighted.chunks(grid_n).map(|row| row.iter().map(|g| g.abs()).sum::<f64>()).sum::<f64>() * TAU / grid_n as f64
}

/// Area of the decoded link on a fixed `grid_n × grid_n` grid.
pub fn objective(v: &ShapeVector, grid_n: usize) -> Result<f64> {
    check_grid_size(grid_n)?;
    Ok(l1_objective(&weighted_metric(v, grid_n)?, grid_n))
}

/// How the descent direction is formed from central differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Least-squares Gauss–Newton step on the metric-coefficient grid.
    GaussNewton,
    /// Plain gradient of the objective.
    Gradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub steps: usize,
    pub lr: f64,
    pub grid_n: usize,
    pub direction: Direction,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { steps: 2000, lr: 0.9, grid_n: 64, direction: Direction::GaussNewton }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub shape: ShapeVector,
    /// Objective at the start and after every accepted step.
    pub trace: Vec<f64>,
    /// True when the objective reached `TARGET` or the direction vanished.
    pub converged: bool,
}

fn perturbed(v: &ShapeVector, j: usize, h: f64) -> ShapeVector {
    let mut w = v.clone();
    w.0[j] += h;
    w
}

fn gradient(v: &ShapeVector, grid_n: usize) -> Result<Vec<f64>> {
    (0..ShapeVector::DIM)
        .into_par_iter()
        .map(|j| {
            let fp = objective(&perturbed(v, j, H_OPT), grid_n)?;
            let fm = objective(&perturbed(v, j, -H_OPT), grid_n)?;
            Ok((fp - fm) / (2.0 * H_OPT))
        })
        .collect()
}

fn gauss_newton(v: &ShapeVector, grid_n: usize, residual: &[f64]) -> Result<Vec<f64>> {
    let cols = (0..ShapeVector::DIM)
        .into_par_iter()
        .map(|j| {
            let gp = weighted_metric(&perturbed(v, j, H_OPT), grid_n)?;
            let gm = weighted_metric(&perturbed(v, j, -H_OPT), grid_n)?;
            Ok(gp.iter().zip(&gm).map(|(p, m)| (p - m) / (2.0 * H_OPT)).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let rows = residual.len();
    let jac = DMatrix::from_fn(rows, ShapeVector::DIM, |i, j| cols[j][i]);
    let svd = jac.svd(true, true);
    let cutoff = RCOND * svd.singular_values.max();
    let d = svd
        .solve(&DVector::from_column_slice(residual), cutoff)
        .map_err(|e| Error::BadParameter(format!("least squares failed: {e}")))?;
    Ok(d.iter().cloned().collect())
}

/// Descends the fixed-grid area with backtracking halving; the trace is non-increasing.
pub fn minimize(v0: &ShapeVector, opts: &MinimizeOptions) -> Result<MinimizeOutcome> {
    if opts.steps > MAX_STEPS {
        return Err(Error::BadParameter(format!("steps = {} exceeds {MAX_STEPS}", opts.steps)));
    }
    if !(opts.lr > 0.0 && opts.lr < 1.0) {
        return Err(Error::BadParameter(format!("lr = {} outside (0, 1)", opts.lr)));
    }
    check_grid_size(opts.grid_n)?;
    let n = opts.grid_n;
    let mut v = v0.clone();
    let mut weighted = weighted_metric(&v, n)?;
    let mut f = l1_objective(&weighted, n);
    let mut trace = vec![f];
    let mut step_len = opts.lr;
    for step in 0..opts.steps {
        if f <= TARGET {
            return Ok(MinimizeOutcome { shape: v, trace, converged: true });
        }
        let d = match opts.direction {
            Direction::GaussNewton => gauss_newton(&v, n, &weighted)?,
            Direction::Gradient => gradient(&v, n)?,
        };
        if d.iter().all(|x| *x == 0.0) {
            return Ok(MinimizeOutcome { shape: v, trace, converged: true });
        }
        let mut st = (2.0 * step_len).min(opts.lr);
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut cand = ShapeVector(v.0.iter().zip(&d).map(|(x, dx)| x - st * dx).collect());
            cand.renormalize(n);
            if let Ok(w) = weighted_metric(&cand, n) {
                let fc = l1_objective(&w, n);
                if fc < f {
                    accepted = Some((cand, w, fc));
                    break;
                }
            }
            st /= 2.0;
        }
        let Some((cand, w, fc)) = accepted else {
            return Err(Error::Stalled { step, backtracks: MAX_BACKTRACKS });
        };
        v = cand;
        weighted = w;
        f = fc;
        step_len = st;
        trace.push(f);
    }
    Ok(MinimizeOutcome { converged: f <= TARGET, shape: v, trace })
}

/// RMS distance of 256 samples to the best-fit circle, divided by the curve diameter.
pub fn circle_fit_residual(c: &LinkCurve) -> Result<f64> {
    let pts: Vec<Vec4> = c.sample_uniform(256)?.into_iter().map(|p| p.point).collect();
    let m = pts.len() as f64;
    let mean = pts.iter().sum::<Vec4>() / m;
    let cov: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| pts.iter().map(|p| (p[i] - mean[i]) * (p[j] - mean[j])).sum::<f64>() / m).collect())
        .collect();
    let (vals, vecs) = jacobi_eigen(&cov);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let axis = |k: usize| Vec4::from_fn(|i, _| vecs[i][order[k]]);
    let (u, w) = (axis(0), axis(1));
    let planar: Vec<(f64, f64, f64)> = pts
        .iter()
        .map(|p| {
            let q = p - mean;
            let (x, y) = (q.dot(&u), q.dot(&w));
            (x, y, (q - u * x - w * y).norm_squared())
        })
        .collect();
    // Algebraic fit x² + y² + Dx + Ey + F = 0, then geometric refinement.
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for &(x, y, _) in &planar {
        let row = Vector3::new(x, y, 1.0);
        ata += row * row.transpose();
        atb -= row * (x * x + y * y);
    }
    let sol = ata.lu().solve(&atb).unwrap_or_else(Vector3::zeros);
    let (mut cx, mut cy) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let mut r = (cx * cx + cy * cy - sol[2]).max(0.0).sqrt();
    for _ in 0..20 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for &(x, y, _) in &planar {
            let d = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt().max(1e-300);
            let jrow = Vector3::new(-(x - cx) / d, -(y - cy) / d, -1.0);
            let res = d - r;
            jtj += jrow * jrow.transpose();
            jtr += jrow * res;
        }
        let Some(delta) = jtj.lu().solve(&jtr) else { break };
        cx -= delta[0];
        cy -= delta[1];
        r -= delta[2];
        if delta.norm() < 1e-15 {
            break;
        }
    }
    let sq: f64 = planar
        .iter()
        .map(|&(x, y, out)| out + (((x - cx).powi(2) + (y - cy).powi(2)).sqrt() - r).powi(2))
        .sum();
    let mut diameter: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            diameter = diameter.max((p - q).norm());
        }
    }
    Ok((sq / m).sqrt() / diameter)
}
