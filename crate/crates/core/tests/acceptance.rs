use std::f64::consts::{FRAC_PI_2, TAU};
use std::process::ExitCode;
use std::time::Instant;

use linktorus::conformal::{conformal_angle_wedge_at, cross_ratio_fd_at, inf_cross_ratio_at, StereoChart};
use linktorus::functionals::{build_grid, refine, Functional, DEFAULT_TOL};
use linktorus::linalg::Vec4;
use linktorus::link::{catalogue, random_mobius, Link2};
use linktorus::minkowski::{inner10, minor_lift};
use linktorus::optimizer::{circle_fit_residual, minimize, MinimizeOptions, ShapeVector};
use linktorus::rng::Lcg64;
use linktorus::sphere::{
    metric_coefficient_at, sigma_derivatives_at, theta_tangent_signature, torus_tangent_signature_at, Signature,
    SpherePoint3, TAU_EIG,
};
use linktorus::symplectic::exterior_derivative_check;
use linktorus::{Error, Result};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { passed, detail })
}

fn catalogue_links() -> Result<Vec<(String, Link2)>> {
    let mut out = vec![("hopf".to_string(), catalogue::hopf())];
    for d in [1.0, 1.5, 1.9] {
        out.push((format!("separated({d})"), catalogue::separated(d)?));
    }
    out.push(("parallel_circles(1,1)".into(), catalogue::parallel_circles(1.0, 1.0)?));
    for seed in 0..5 {
        out.push((format!("perturbed_hopf(0.2,{seed})"), catalogue::perturbed_hopf(0.2, seed)?));
    }
    Ok(out)
}

fn random_point(rng: &mut Lcg64) -> SpherePoint3 {
    SpherePoint3::normalized(Vec4::new(rng.normal(), rng.normal(), rng.normal(), rng.normal()))
}

fn signed_area_vanishes() -> Result<Verdict> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut finest = 0;
    for (_, link) in catalogue_links()? {
        let r = refine(&link, 1e-10, Functional::SignedArea, 512)?;
        worst = worst.max(r.signed_area.abs());
        finest = finest.max(r.grid_used.0);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(worst <= 1e-7 && secs <= 30.0, format!("max|SA|={worst:.2e} finest={finest} time={secs:.1}s"))
}

fn hopf_area_vanishes() -> Result<Verdict> {
    let hopf = catalogue::hopf();
    let a0 = refine(&hopf, 1e-10, Functional::Area, 512)?.area;
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let image = hopf.transformed(&random_mobius(seed, 1.0)?);
        worst = worst.max(refine(&image, 1e-10, Functional::Area, 512)?.area);
    }
    verdict(a0 <= 1e-10 && worst <= 1e-8, format!("area(hopf)={a0:.2e} max image area={worst:.2e}"))
}

fn converse_probe() -> Result<Verdict> {
    let mut ok = true;
    let mut probed = 0;
    let mut min_area = f64::INFINITY;
    for (_, link) in catalogue_links()? {
        let dev = build_grid(&link, 64, 64)?.max_angle_deviation();
        let area = refine(&link, DEFAULT_TOL, Functional::Area, 1024)?.area;
        if dev > 1e-3 {
            probed += 1;
            min_area = min_area.min(area);
            ok &= area > 1e-4;
        } else {
            ok &= dev <= 1e-5 && area <= 1e-8;
        }
    }
    verdict(ok, format!("probed={probed} min area={min_area:.3e}"))
}

fn nullity() -> Result<Verdict> {
    let mut rng = Lcg64::new(31);
    let mut worst: f64 = 0.0;
    for (_, link) in catalogue_links()? {
        for _ in 0..1000 {
            let (xs, ys) = link.sample(rng.range(0.0, TAU), rng.range(0.0, TAU))?;
            let f = sigma_derivatives_at(&xs, &ys)?;
            worst = worst.max(inner10(&f.sigma_s, &f.sigma_s).abs()).max(inner10(&f.sigma_t, &f.sigma_t).abs());
        }
    }
    verdict(worst <= 1e-10, format!("max={worst:.2e}"))
}

fn route_agreement() -> Result<Verdict> {
    let (mut routes, mut fd): (f64, f64) = (0.0, 0.0);
    let mut min_order = f64::INFINITY;
    let mut skipped = 0;
    let mut rng = Lcg64::new(47);
    for (_, link) in catalogue_links()? {
        let chart = StereoChart::for_link(&link)?;
        let (xs, ys) = link.sample_grid(64)?;
        for x in &xs {
            for y in &ys {
                let g = metric_coefficient_at(x, y)?;
                let f = sigma_derivatives_at(x, y)?;
                let scale = inf_cross_ratio_at(x, y)?.abs.max(1.0);
                routes = routes.max((inner10(&f.sigma_s, &f.sigma_t) - g).abs() / scale);
                match chart.re_density(x, y) {
                    Ok(re) => routes = routes.max((2.0 * re - g).abs() / scale),
                    Err(Error::NotApplicable) => {
                        skipped += 1;
                        routes = routes.max(1.0 - conformal_angle_wedge_at(x, y)?.cos().abs());
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        let (mut e1, mut e2) = (0.0, 0.0);
        for _ in 0..100 {
            let (xs, ys) = link.sample(rng.range(0.0, TAU), rng.range(0.0, TAU))?;
            let d = inf_cross_ratio_at(&xs, &ys)?;
            let scale = d.abs.max(1.0);
            fd = fd.max((cross_ratio_fd_at(&chart, &xs, &ys, 1e-3)? - d.re).abs() / scale);
            e1 += (cross_ratio_fd_at(&chart, &xs, &ys, 1e-2)? - d.re).powi(2);
            e2 += (cross_ratio_fd_at(&chart, &xs, &ys, 5e-3)? - d.re).powi(2);
        }
        min_order = min_order.min(0.5 * (e1 / e2).log2());
    }
    verdict(
        routes <= 1e-7 && fd <= 5e-5 && min_order >= 1.9,
        format!("routes={routes:.2e} fd={fd:.2e} min order={min_order:.3} chart skipped={skipped}"),
    )
}

fn symplectic() -> Result<Verdict> {
    let mut signs = Vec::new();
    let mut worst: f64 = 0.0;
    for (_, link) in catalogue_links()? {
        let r = exterior_derivative_check(&link, 128)?;
        if r.sign_determined {
            signs.push(r.sign);
        }
        worst = worst.max(r.max_err);
    }
    let consistent = signs.windows(2).all(|w| w[0] == w[1]) && !signs.is_empty();
    let sign = signs.first().copied().unwrap_or(0);
    verdict(consistent && worst <= 1e-6, format!("sign={sign} links={} max={worst:.2e}", signs.len()))
}

fn minor_lift_group() -> Result<Verdict> {
    let (mut orth, mut hom): (f64, f64) = (0.0, 0.0);
    for seed in 0..50 {
        let a = random_mobius(1000 + seed, 2.0)?;
        let b = random_mobius(2000 + seed, 2.0)?;
        let la = minor_lift(a.matrix());
        orth = orth.max(la.orthogonality_residual());
        hom = hom.max(minor_lift(a.compose(&b).matrix()).max_abs_diff(&la.compose(&minor_lift(b.matrix()))));
    }
    verdict(orth <= 1e-10 && hom <= 1e-10, format!("orthogonality={orth:.2e} homomorphism={hom:.2e}"))
}

fn signatures() -> Result<Verdict> {
    let mut rng = Lcg64::new(59);
    let mut ok = true;
    for _ in 0..100 {
        ok &= theta_tangent_signature(&random_point(&mut rng), &random_point(&mut rng))?
            == Signature { plus: 3, minus: 3, zero: 0 };
    }
    let (mut mixed, mut degenerate) = (0, 0);
    for (_, link) in catalogue_links()? {
        let (xs, ys) = link.sample_grid(64)?;
        for x in &xs {
            for y in &ys {
                let theta = conformal_angle_wedge_at(x, y)?;
                let sig = torus_tangent_signature_at(x, y)?;
                let g = metric_coefficient_at(x, y)?;
                if theta.cos().abs() > 1e-5 && g.abs() > TAU_EIG {
                    mixed += 1;
                    ok &= sig == Signature { plus: 1, minus: 1, zero: 0 };
                } else if (theta - FRAC_PI_2).abs() <= 1e-6 {
                    degenerate += 1;
                    ok &= sig.zero == 2;
                }
            }
        }
    }
    verdict(ok, format!("index(3,3) at 100 pairs; mixed nodes={mixed} degenerate nodes={degenerate}"))
}

fn conformal_invariance() -> Result<Verdict> {
    let (mut dens, mut func): (f64, f64) = (0.0, 0.0);
    for (_, link) in catalogue_links()? {
        let base = build_grid(&link, 64, 64)?;
        for seed in 0..20 {
            let g = build_grid(&link.transformed(&random_mobius(seed, 1.0)?), 64, 64)?;
            for k in 0..g.g.len() {
                let scale = base.abs_omega[k];
                dens = dens.max((g.re_omega[k] - base.re_omega[k]).abs() / scale);
                dens = dens.max((g.abs_omega[k] - base.abs_omega[k]).abs() / scale);
            }
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(1e-300);
            if base.area() > 0.0 {
                func = func.max(rel(base.area(), g.area()));
            }
            func = func.max(rel(base.energy(), g.energy()));
        }
    }
    verdict(dens <= 1e-7 && func <= 1e-6, format!("density={dens:.2e} area/energy={func:.2e}"))
}

fn separable_limit() -> Result<Verdict> {
    let mut areas = Vec::new();
    for d in [1.0, 1.5, 1.9] {
        areas.push(refine(&catalogue::separated(d)?, DEFAULT_TOL, Functional::Area, 1024)?.area);
    }
    let ok = areas[0] > areas[1] && areas[1] > areas[2] && areas[2] < 0.1 * areas[0];
    verdict(ok, format!("areas={:.4} {:.4} {:.4} ratio={:.3}", areas[0], areas[1], areas[2], areas[2] / areas[0]))
}

fn descent() -> Result<Verdict> {
    let start = Instant::now();
    let v0 = ShapeVector::encode(&catalogue::perturbed_hopf(0.1, 0)?)?;
    let out = minimize(&v0, &MinimizeOptions::default())?;
    let link = out.shape.decode()?;
    let (r1, r2) = (circle_fit_residual(&link.c1)?, circle_fit_residual(&link.c2)?);
    let last = *out.trace.last().expect("trace is never empty");
    let secs = start.elapsed().as_secs_f64();
    let ok = last <= 1e-3 && out.trace.len() <= 2001 && r1 <= 1e-2 && r2 <= 1e-2 && secs <= 180.0;
    verdict(
        ok,
        format!(
            "start={:.3} final={last:.2e} steps={} circle fit={r1:.1e},{r2:.1e} time={secs:.1}s",
            out.trace[0],
            out.trace.len() - 1
        ),
    )
}

type Criterion = fn() -> Result<Verdict>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("signed area vanishes on the catalogue", signed_area_vanishes),
        ("Hopf link and its Mobius images have zero area", hopf_area_vanishes),
        ("non-right conformal angle forces positive area", converse_probe),
        ("torus tangent vectors are null", nullity),
        ("metric, chart-angle and finite-difference routes agree", route_agreement),
        ("cross ratio is a signed half of the pulled-back symplectic form", symplectic),
        ("minor lift is a pseudo-orthogonal homomorphism", minor_lift_group),
        ("tangent signatures", signatures),
        ("conformal invariance of densities and functionals", conformal_invariance),
        ("area decreases to zero for separated circles", separable_limit),
        ("descent from a perturbed Hopf link reaches round circles", descent),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (passed, detail) = match run() {
            Ok(v) => (v.passed, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!("{} [{}] {name}: {detail}", if passed { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: passed={} failed={failed} time={:.1}s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
