//! Pullback of the tautological 1-form of T*S^3 to the product torus and the
//! pointwise comparison of its exterior derivative with the cross-ratio density.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::functionals::{check_grid_size, metric_grid};
use crate::linalg::Vec4;
use crate::link::{CurveSample, Link2};
use crate::sphere::SpherePoint3;

/// Global sign relating the two sides under the convention ω = dλ.
pub const CONVENTION_SIGN: i8 = -1;
/// Nodes where both sides stay below this magnitude do not vote on the sign.
pub const SIGN_FLOOR: f64 = 1e-6;

fn stereo_raw(x: &Vec4, y: &Vec4) -> Result<Vec4> {
    let d = 1.0 - y.dot(x);
    if d <= 1e-12 {
        return Err(Error::CoincidentPoints { distance: (2.0 * d.max(0.0)).sqrt() });
    }
    Ok((y - x * y.dot(x)) / d)
}

/// `p_x(y) = (y − (y·x)x)/(1 − y·x)`, projection from `x` onto `x^⊥`.
pub fn stereo_project(x: &SpherePoint3, y: &SpherePoint3) -> Result<Vec4> {
    stereo_raw(x.as_vec(), y.as_vec())
}

/// `β = a ds + b dt` sampled on an `n_s × n_t` grid, s-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PulledBackOneForm {
    pub n_s: usize,
    pub n_t: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

fn check_size(n: usize, min: usize) -> Result<()> {
    if n < min || check_grid_size(n).is_err() {
        return Err(Error::GridSize(n));
    }
    Ok(())
}

fn pullback_from_samples(xs: &[CurveSample], ys: &[CurveSample]) -> Result<PulledBackOneForm> {
    let a = xs
        .par_iter()
        .map(|x| ys.iter().map(|y| Ok(stereo_raw(&x.point, &y.point)?.dot(&x.velocity))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .concat();
    Ok(PulledBackOneForm { n_s: xs.len(), n_t: ys.len(), b: vec![0.0; a.len()], a })
}

pub fn tautological_pullback(link: &Link2, n_s: usize, n_t: usize) -> Result<PulledBackOneForm> {
    check_size(n_s, 32)?;
    check_size(n_t, 32)?;
    pullback_from_samples(&link.c1.sample_uniform(n_s)?, &link.c2.sample_uniform(n_t)?)
}

/// Spectral derivative of each contiguous periodic row of length `n` (even).
fn spectral_rows(values: &[f64], n: usize) -> Vec<f64> {
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    values
        .par_chunks(n)
        .flat_map_iter(|row| {
            let mut buf: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fwd.process(&mut buf);
            for (k, z) in buf.iter_mut().enumerate() {
                let wave = if k < n / 2 { k as f64 } else if k == n / 2 { 0.0 } else { k as f64 - n as f64 };
                *z *= Complex64::new(0.0, wave / n as f64);
            }
            inv.process(&mut buf);
            buf.into_iter().map(|z| z.re)
        })
        .collect()
}

/// `dβ = (∂b/∂s − ∂a/∂t) ds∧dt`; `b` vanishes identically so only the t-derivative is taken.
pub fn exterior_derivative(form: &PulledBackOneForm) -> Vec<f64> {
    spectral_rows(&form.a, form.n_t).into_iter().map(|d| -d).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticReport {
    /// `max |Re Ω − ε(−½)dβ|` over the grid.
    pub max_err: f64,
    pub sign: i8,
    /// False when no node is large enough to vote and the convention was used.
    pub sign_determined: bool,
    /// Trapezoid integral of `dβ` over the torus.
    pub integral: f64,
}

/// Determines the global sign `ε` with `Re Ω = ε(−½)dβ` and the residual under it.
pub fn exterior_derivative_check(link: &Link2, n: usize) -> Result<SymplecticReport> {
    check_size(n, 64)?;
    let xs = link.c1.sample_uniform(n)?;
    let ys = link.c2.sample_uniform(n)?;
    let dbeta = exterior_derivative(&pullback_from_samples(&xs, &ys)?);
    let re: Vec<f64> = metric_grid(&xs, &ys).into_iter().map(|g| g / 2.0).collect();
    let (mut plus, mut minus) = (false, false);
    for (r, d) in re.iter().zip(&dbeta) {
        let rhs = -0.5 * d;
        if r.abs() > SIGN_FLOOR && rhs.abs() > SIGN_FLOOR {
            if r.signum() == rhs.signum() {
                plus = true;
            } else {
                minus = true;
            }
        }
    }
    let (sign, sign_determined) = match (plus, minus) {
        (true, true) => return Err(Error::SignInconsistency),
        (true, false) => (1, true),
        (false, true) => (-1, true),
        (false, false) => (CONVENTION_SIGN, false),
    };
    let max_err = re
        .iter()
        .zip(&dbeta)
        .map(|(r, d)| (r - sign as f64 * -0.5 * d).abs())
        .fold(0.0, f64::max);
    let cell = (std::f64::consts::TAU / n as f64).powi(2);
    let integral = dbeta.chunks(n).map(|row| row.iter().sum::<f64>()).sum::<f64>() * cell;
    Ok(SymplecticReport { max_err, sign, sign_determined, integral })
}
