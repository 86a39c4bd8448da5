//! Periodic quintic B-spline interpolation of uniformly spaced nodes in R^4.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

use crate::linalg::Vec4;

const BINOM6: [f64; 7] = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];

/// Centered quintic B-spline, supported on (-3, 3).
fn b5(x: f64) -> f64 {
    let mut acc = 0.0;
    for (k, c) in BINOM6.iter().enumerate() {
        let u = x + 3.0 - k as f64;
        if u > 0.0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * c * u.powi(5);
        }
    }
    acc / 120.0
}

fn b5_prime(x: f64) -> f64 {
    let mut acc = 0.0;
    for (k, c) in BINOM6.iter().enumerate() {
        let u = x + 3.0 - k as f64;
        if u > 0.0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * c * u.powi(4);
        }
    }
    acc * 5.0 / 120.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicQuintic {
    nodes: Vec<Vec4>,
    coeffs: Vec<Vec4>,
}

impl PeriodicQuintic {
    /// Requires at least 8 nodes; the interpolation system is then diagonally dominant.
    pub fn new(nodes: Vec<Vec4>) -> Self {
        let n = nodes.len();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut coeffs = vec![Vec4::zeros(); n];
        for d in 0..4 {
            let mut buf: Vec<Complex<f64>> = nodes.iter().map(|p| Complex::new(p[d], 0.0)).collect();
            fwd.process(&mut buf);
            for (k, z) in buf.iter_mut().enumerate() {
                let w = TAU * k as f64 / n as f64;
                let symbol = (66.0 + 52.0 * w.cos() + 2.0 * (2.0 * w).cos()) / 120.0;
                *z /= symbol * n as f64;
            }
            inv.process(&mut buf);
            for (c, z) in coeffs.iter_mut().zip(&buf) {
                c[d] = z.re;
            }
        }
        PeriodicQuintic { nodes, coeffs }
    }

    pub fn nodes(&self) -> &[Vec4] {
        &self.nodes
    }

    /// Value and derivative with respect to `s`, where node `j` sits at `s = 2πj/N`.
    pub fn eval(&self, s: f64) -> (Vec4, Vec4) {
        let n = self.coeffs.len();
        let scale = n as f64 / TAU;
        let u = (s * scale).rem_euclid(n as f64);
        let base = u.floor() as i64;
        let mut r = Vec4::zeros();
        let mut dr = Vec4::zeros();
        for j in (base - 2)..=(base + 3) {
            let c = &self.coeffs[j.rem_euclid(n as i64) as usize];
            let x = u - j as f64;
            r += c * b5(x);
            dr += c * b5_prime(x);
        }
        (r, dr * scale)
    }
}
