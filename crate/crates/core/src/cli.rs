//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::conformal::{cross_ratio_fd_at, inf_cross_ratio_at, StereoChart, FD_EPS};
use crate::error::Error;
use crate::functionals::{build_grid, check_grid_size, export_grid, refine, Functional, DEFAULT_TOL, MAX_GRID};
use crate::link::file::{read_link, write_link};
use crate::link::{random_mobius, Link2, StandardLink};
use crate::optimizer::{circle_fit_residual, minimize, objective, Direction, MinimizeOptions, ShapeVector};
use crate::rng::Lcg64;
use crate::symplectic::exterior_derivative_check;
use crate::verify::{default_battery, report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

/// Tolerances of the oracle audit.
pub const TOL_CHART: f64 = 1e-7;
pub const TOL_FD: f64 = 5e-5;
pub const TOL_SYMPLECTIC: f64 = 1e-6;
/// Largest relative deviation accepted by the invariance audit.
pub const TOL_INVARIANCE: f64 = 1e-5;

#[derive(Debug, Parser)]
#[command(name = "linktorus", version, about = "Conformal invariants of two-component links in S^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the property battery.
    Verify,
    /// Signed area, area and cross energy with grid refinement.
    Area {
        file: PathBuf,
        /// Finest grid allowed during refinement.
        #[arg(long, default_value_t = MAX_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Export the per-node densities as CSV.
    Anglemap {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare functionals and densities before and after seeded Möbius maps.
    Invariance {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        transforms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        rapidity: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Cross-check the real part of the cross ratio by three routes and the symplectic identity.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = FD_EPS)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exterior derivative check of the pulled-back tautological form.
    Symplectic {
        file: PathBuf,
        #[arg(long, default_value_t = 128)]
        grid: usize,
    },
    /// Descend the area over Fourier shapes.
    Minimize {
        file: PathBuf,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 0.9)]
        lr: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Use the plain gradient instead of Gauss–Newton directions.
        #[arg(long)]
        gradient: bool,
        #[arg(long, default_value = "minimized.json")]
        out: PathBuf,
        #[arg(long, default_value = "trace.csv")]
        trace: PathBuf,
    },
    /// Write a catalogue link (hopf, separated:D, parallel:R,GAP, perturbed:EPS,SEED) as a link file.
    Catalogue {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. }
        | Error::Stalled { .. }
        | Error::AngleOutOfRange { .. }
        | Error::SignInconsistency
        | Error::DegenerateSphere { .. }
        | Error::DegenerateBasis { .. } => EXIT_TOLERANCE,
        _ => EXIT_INPUT,
    }
}

type Outcome = Result<i32, Error>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn cmd_verify(out: &mut dyn Write) -> Outcome {
    let checks = default_battery()?;
    let failed = report(&checks, out)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_PROPERTY })
}

fn cmd_area(link: &Link2, grid: usize, tol: f64, out: &mut dyn Write) -> Outcome {
    let r = refine(link, tol, Functional::All, grid)?;
    writeln!(out, "{r}")?;
    Ok(EXIT_OK)
}

fn cmd_anglemap(link: &Link2, grid: usize, path: &Path, out: &mut dyn Write) -> Outcome {
    let g = build_grid(link, grid, grid)?;
    export_grid(&g, path)?;
    writeln!(out, "anglemap: wrote {} rows to {}", g.g.len(), path.display())?;
    Ok(EXIT_OK)
}

fn cmd_invariance(link: &Link2, k: usize, seed: u64, rapidity: f64, grid: usize, out: &mut dyn Write) -> Outcome {
    if k > 100 {
        return Err(Error::BadParameter(format!("transforms = {k} exceeds 100")));
    }
    let base = build_grid(link, grid, grid)?;
    let (a0, e0) = (base.area(), base.energy());
    let (mut da, mut de, mut dd): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..k as u64 {
        let m = random_mobius(seed.wrapping_mul(1000).wrapping_add(i), rapidity)?;
        let g = build_grid(&link.transformed(&m), grid, grid)?;
        da = da.max(rel(a0, g.area()));
        de = de.max(rel(e0, g.energy()));
        for n in 0..g.g.len() {
            let scale = base.abs_omega[n].max(1e-300);
            dd = dd.max((base.re_omega[n] - g.re_omega[n]).abs() / scale);
            dd = dd.max((base.abs_omega[n] - g.abs_omega[n]).abs() / scale);
        }
    }
    writeln!(out, "invariance: transforms={k} seed={seed} rapidity={rapidity} grid={grid}x{grid}")?;
    writeln!(out, "area={a0:.16e} energy={e0:.16e}")?;
    writeln!(out, "area_dev={da:.16e} energy_dev={de:.16e} density_dev={dd:.16e}")?;
    Ok(if da.max(de).max(dd) > TOL_INVARIANCE { EXIT_TOLERANCE } else { EXIT_OK })
}

fn cmd_oracle(link: &Link2, m: usize, eps: f64, seed: u64, out: &mut dyn Write) -> Outcome {
    if m > 10_000 {
        return Err(Error::BadParameter(format!("samples = {m} exceeds 10000")));
    }
    let chart = StereoChart::for_link(link)?;
    let mut rng = Lcg64::new(seed);
    let (mut d_chart, mut d_fd): (f64, f64) = (0.0, 0.0);
    let mut skipped = 0;
    for _ in 0..m {
        let (s, t) = (rng.range(0.0, std::f64::consts::TAU), rng.range(0.0, std::f64::consts::TAU));
        let (xs, ys) = link.sample(s, t)?;
        let d = inf_cross_ratio_at(&xs, &ys)?;
        let scale = d.abs.max(1.0);
        match chart.re_density(&xs, &ys) {
            Ok(re) => d_chart = d_chart.max((re - d.re).abs() / scale),
            Err(Error::NotApplicable) => skipped += 1,
            Err(e) => return Err(e),
        }
        d_fd = d_fd.max((cross_ratio_fd_at(&chart, &xs, &ys, eps)? - d.re).abs() / scale);
    }
    let sym = exterior_derivative_check(link, 128)?;
    writeln!(out, "oracle: samples={m} eps={eps:e} seed={seed}")?;
    writeln!(out, "wedge_vs_chart={d_chart:.16e} tol={TOL_CHART:e} skipped={skipped}")?;
    writeln!(out, "wedge_vs_fd={d_fd:.16e} tol={TOL_FD:e}")?;
    writeln!(
        out,
        "symplectic_residual={:.16e} tol={TOL_SYMPLECTIC:e} sign={} determined={}",
        sym.max_err, sym.sign, sym.sign_determined
    )?;
    let ok = d_chart <= TOL_CHART && d_fd <= TOL_FD && sym.max_err <= TOL_SYMPLECTIC;
    Ok(if ok { EXIT_OK } else { EXIT_TOLERANCE })
}

fn cmd_symplectic(link: &Link2, grid: usize, out: &mut dyn Write) -> Outcome {
    let r = exterior_derivative_check(link, grid)?;
    writeln!(
        out,
        "symplectic: grid={grid}x{grid} residual={:.16e} sign={} determined={} integral={:.16e}",
        r.max_err, r.sign, r.sign_determined, r.integral
    )?;
    Ok(if r.max_err <= TOL_SYMPLECTIC { EXIT_OK } else { EXIT_TOLERANCE })
}

fn cmd_minimize(link: &Link2, opts: &MinimizeOptions, out_path: &Path, trace_path: &Path, out: &mut dyn Write) -> Outcome {
    let v0 = ShapeVector::encode(link)?;
    let run = minimize(&v0, opts)?;
    let mut trace = String::from("step,objective\n");
    for (i, f) in run.trace.iter().enumerate() {
        trace.push_str(&format!("{i},{f:.16e}\n"));
    }
    std::fs::write(trace_path, trace)?;
    let result = run.shape.decode()?;
    write_link(out_path, &result)?;
    let fixed = objective(&run.shape, opts.grid_n)?;
    let refined = refine(&result, DEFAULT_TOL, Functional::Area, MAX_GRID)?;
    writeln!(out, "minimize: steps={} converged={}", run.trace.len() - 1, run.converged)?;
    writeln!(out, "objective={fixed:.16e} grid={0}x{0}", opts.grid_n)?;
    writeln!(out, "area={:.16e} grid={}x{} est_error={:.16e}", refined.area, refined.grid_used.0, refined.grid_used.1, refined.est_error)?;
    writeln!(
        out,
        "circle_fit c1={:.16e} c2={:.16e}",
        circle_fit_residual(&result.c1)?,
        circle_fit_residual(&result.c2)?
    )?;
    Ok(EXIT_OK)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Verify => cmd_verify(out),
        Command::Area { file, grid, tol } => {
            check_grid_size(grid)?;
            cmd_area(&read_link(&file)?, grid, tol, out)
        }
        Command::Anglemap { file, grid, out: path } => cmd_anglemap(&read_link(&file)?, grid, &path, out),
        Command::Invariance { file, transforms, seed, rapidity, grid } => {
            cmd_invariance(&read_link(&file)?, transforms, seed, rapidity, grid, out)
        }
        Command::Oracle { file, samples, eps, seed } => cmd_oracle(&read_link(&file)?, samples, eps, seed, out),
        Command::Symplectic { file, grid } => cmd_symplectic(&read_link(&file)?, grid, out),
        Command::Minimize { file, steps, lr, grid, gradient, out: path, trace } => {
            let direction = if gradient { Direction::Gradient } else { Direction::GaussNewton };
            let opts = MinimizeOptions { steps, lr, grid_n: grid, direction };
            cmd_minimize(&read_link(&file)?, &opts, &path, &trace, out)
        }
        Command::Catalogue { name, out: path } => {
            let link = name.parse::<StandardLink>()?.build()?;
            write_link(&path, &link)?;
            writeln!(out, "catalogue: wrote {name} to {}", path.display())?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
