//! Torus grids of the per-node densities and the periodic-trapezoid functionals.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::conformal::inf_cross_ratio_at;
use crate::error::{Error, Result};
use crate::link::{CurveSample, Link2};
use crate::sphere::metric_coefficient_unchecked;

pub const MIN_GRID: usize = 32;
pub const MAX_GRID: usize = 1024;
/// Default refinement tolerance; area converges only at second order across the `g = 0` locus.
pub const DEFAULT_TOL: f64 = 1e-3;
pub const CSV_HEADER: &str = "s,t,g,theta,abs_omega,re_omega";

pub fn check_grid_size(n: usize) -> Result<()> {
    if n.is_power_of_two() && (MIN_GRID..=MAX_GRID).contains(&n) {
        Ok(())
    } else {
        Err(Error::GridSize(n))
    }
}

fn node(i: usize, n: usize) -> f64 {
    TAU * i as f64 / n as f64
}

/// Node values on the uniform grid `s_i = 2πi/n_s`, `t_j = 2πj/n_t`, stored s-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGrid {
    pub n_s: usize,
    pub n_t: usize,
    pub g: Vec<f64>,
    pub theta: Vec<f64>,
    pub abs_omega: Vec<f64>,
    pub re_omega: Vec<f64>,
}

impl TorusGrid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_t + j
    }

    pub fn s(&self, i: usize) -> f64 {
        node(i, self.n_s)
    }

    pub fn t(&self, j: usize) -> f64 {
        node(j, self.n_t)
    }

    fn cell(&self) -> f64 {
        (TAU / self.n_s as f64) * (TAU / self.n_t as f64)
    }

    fn integrate(&self, f: impl Fn(usize) -> f64 + Sync) -> f64 {
        let rows: Vec<f64> = (0..self.n_s)
            .into_par_iter()
            .map(|i| (0..self.n_t).map(|j| f(i * self.n_t + j)).sum())
            .collect();
        rows.iter().sum::<f64>() * self.cell()
    }

    pub fn signed_area(&self) -> f64 {
        self.integrate(|k| self.g[k])
    }

    pub fn area(&self) -> f64 {
        self.integrate(|k| self.g[k].abs())
    }

    pub fn energy(&self) -> f64 {
        self.integrate(|k| self.abs_omega[k] - self.re_omega[k])
    }

    /// `max |θ − π/2|` over the grid.
    pub fn max_angle_deviation(&self) -> f64 {
        self.theta.iter().map(|t| (t - FRAC_PI_2).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.g.len() * 140);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for i in 0..self.n_s {
            for j in 0..self.n_t {
                let k = self.index(i, j);
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    self.s(i),
                    self.t(j),
                    self.g[k],
                    self.theta[k],
                    self.abs_omega[k],
                    self.re_omega[k]
                )
                .expect("writing to a String");
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<TorusGrid> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(CSV_HEADER) {
            return Err(Error::Parse(format!("grid csv: header must be `{CSV_HEADER}`")));
        }
        let mut rows: Vec<[f64; 6]> = Vec::new();
        for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::Parse(format!("grid csv line {}: expected 6 fields", lineno + 2)));
            }
            let mut row = [0.0; 6];
            for (slot, f) in row.iter_mut().zip(&fields) {
                *slot = f
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("grid csv line {}: bad number `{f}`", lineno + 2)))?;
            }
            rows.push(row);
        }
        let n_t = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
        if n_t == 0 || !rows.len().is_multiple_of(n_t) {
            return Err(Error::Parse("grid csv: rows do not form a rectangular grid".into()));
        }
        let col = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<_>>();
        Ok(TorusGrid {
            n_s: rows.len() / n_t,
            n_t,
            g: col(2),
            theta: col(3),
            abs_omega: col(4),
            re_omega: col(5),
        })
    }
}

/// Grid of the metric coefficient only, s-major.
pub fn metric_grid(xs: &[CurveSample], ys: &[CurveSample]) -> Vec<f64> {
    xs.par_iter()
        .flat_map_iter(|x| ys.iter().map(move |y| metric_coefficient_unchecked(x, y)))
        .collect()
}

pub fn build_grid(link: &Link2, n_s: usize, n_t: usize) -> Result<TorusGrid> {
    check_grid_size(n_s)?;
    check_grid_size(n_t)?;
    let xs = link.c1.sample_uniform(n_s)?;
    let ys = link.c2.sample_uniform(n_t)?;
    let rows: Vec<Vec<(f64, f64, f64, f64)>> = xs
        .par_iter()
        .map(|x| {
            ys.iter()
                .map(|y| {
                    let d = inf_cross_ratio_at(x, y)?;
                    Ok((metric_coefficient_unchecked(x, y), d.theta, d.abs, d.re))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let cap = n_s * n_t;
    let mut grid = TorusGrid {
        n_s,
        n_t,
        g: Vec::with_capacity(cap),
        theta: Vec::with_capacity(cap),
        abs_omega: Vec::with_capacity(cap),
        re_omega: Vec::with_capacity(cap),
    };
    for (g, th, ab, re) in rows.into_iter().flatten() {
        grid.g.push(g);
        grid.theta.push(th);
        grid.abs_omega.push(ab);
        grid.re_omega.push(re);
    }
    Ok(grid)
}

pub fn export_grid(grid: &TorusGrid, path: &Path) -> Result<()> {
    std::fs::write(path, grid.to_csv())?;
    Ok(())
}

pub fn import_grid(path: &Path) -> Result<TorusGrid> {
    TorusGrid::from_csv(&std::fs::read_to_string(path)?)
}

/// Which functional drives the refinement loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    SignedArea,
    Area,
    Energy,
    /// All three must settle.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub signed_area: f64,
    pub area: f64,
    pub energy: f64,
    pub grid_used: (usize, usize),
    pub est_error: f64,
}

impl std::fmt::Display for FunctionalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "signed_area={:.16e} area={:.16e} energy={:.16e} grid={}x{} est_error={:.16e}",
            self.signed_area, self.area, self.energy, self.grid_used.0, self.grid_used.1, self.est_error
        )
    }
}

fn values(grid: &TorusGrid) -> [f64; 3] {
    [grid.signed_area(), grid.area(), grid.energy()]
}

/// Doubles the grid from 32 until successive values of the chosen functional
/// differ by at most `tol`, stopping at `max_n`.
pub fn refine(link: &Link2, tol: f64, which: Functional, max_n: usize) -> Result<FunctionalReport> {
    if !(tol >= 1e-10) {
        return Err(Error::BadParameter(format!("tolerance {tol} below 1e-10")));
    }
    check_grid_size(max_n)?;
    let mut n = MIN_GRID;
    let mut prev = values(&build_grid(link, n, n)?);
    let mut delta = f64::INFINITY;
    while n < max_n {
        n *= 2;
        let cur = values(&build_grid(link, n, n)?);
        let diffs: Vec<f64> = prev.iter().zip(&cur).map(|(a, b)| (a - b).abs()).collect();
        delta = match which {
            Functional::SignedArea => diffs[0],
            Functional::Area => diffs[1],
            Functional::Energy => diffs[2],
            Functional::All => diffs.iter().cloned().fold(0.0, f64::max),
        };
        prev = cur;
        if delta <= tol {
            return Ok(FunctionalReport {
                signed_area: cur[0],
                area: cur[1],
                energy: cur[2],
                grid_used: (n, n),
                est_error: delta,
            });
        }
    }
    Err(Error::NoConvergence { n, delta })
}

pub fn signed_area(link: &Link2, tol: f64) -> Result<FunctionalReport> {
    refine(link, tol, Functional::SignedArea, MAX_GRID)
}

pub fn area(link: &Link2, tol: f64) -> Result<FunctionalReport> {
    refine(link, tol, Functional::Area, MAX_GRID)
}

pub fn cross_energy(link: &Link2, tol: f64) -> Result<f64> {
    Ok(refine(link, tol, Functional::Energy, MAX_GRID)?.energy)
}
