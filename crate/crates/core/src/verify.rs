//! The property battery behind `linktorus verify`.

use std::f64::consts::TAU;
use std::io::Write;

use crate::conformal::{conformal_angle_wedge_at, StereoChart};
use crate::error::{Error, Result};
use crate::functionals::build_grid;
use crate::linalg::Vec4;
use crate::link::{catalogue, random_mobius, Link2};
use crate::minkowski::{inner10, inner5, minor_lift, plucker_residuals, wedge, BiVector10, MinkVector5, MinorLift};
use crate::rng::Lcg64;
use crate::sphere::{
    metric_coefficient, psi_embed, sigma_derivatives, signature_under, theta_tangent_vectors, Signature, SpherePoint3,
};
use crate::symplectic::{exterior_derivative_check, CONVENTION_SIGN};

pub type Form10 = fn(&BiVector10, &BiVector10) -> f64;

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn random_vec5(rng: &mut Lcg64) -> MinkVector5 {
    MinkVector5::new(rng.normal(), rng.normal(), rng.normal(), rng.normal(), rng.normal())
}

fn random_point(rng: &mut Lcg64) -> SpherePoint3 {
    SpherePoint3::normalized(Vec4::new(rng.normal(), rng.normal(), rng.normal(), rng.normal()))
}

fn links() -> Result<Vec<(&'static str, Link2)>> {
    Ok(vec![
        ("hopf", catalogue::hopf()),
        ("separated:1.5", catalogue::separated(1.5)?),
        ("parallel:1,1", catalogue::parallel_circles(1.0, 1.0)?),
        ("perturbed:0.2,0", catalogue::perturbed_hopf(0.2, 0)?),
    ])
}

fn determinant_identity(form: Form10) -> Check {
    let mut rng = Lcg64::new(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (x, y, u, v) = (random_vec5(&mut rng), random_vec5(&mut rng), random_vec5(&mut rng), random_vec5(&mut rng));
        let det = inner5(&x, &u) * inner5(&y, &v) - inner5(&x, &v) * inner5(&y, &u);
        let scale = x.max_abs() * y.max_abs() * u.max_abs() * v.max_abs();
        worst = worst.max((form(&wedge(&x, &y), &wedge(&u, &v)) + det).abs() / scale);
    }
    check("wedge inner product matches determinant formula", worst <= 1e-12, format!("max_rel={worst:.3e}"))
}

fn plucker() -> Check {
    let mut rng = Lcg64::new(2);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = wedge(&random_vec5(&mut rng), &random_vec5(&mut rng));
        let r = plucker_residuals(&p).iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        worst = worst.max(r / p.max_abs().powi(2));
    }
    let mixed = BiVector10::basis(0, 1) + BiVector10::basis(2, 3);
    let detects = plucker_residuals(&mixed).iter().any(|r| r.abs() == 1.0);
    check("Plucker relations on decomposables", worst <= 1e-12 && detects, format!("max_rel={worst:.3e}"))
}

fn psi_unit(form: Form10) -> Result<Check> {
    let mut rng = Lcg64::new(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = psi_embed(&random_point(&mut rng), &random_point(&mut rng))?;
        let p = z.bivector();
        worst = worst.max((form(p, p) - 1.0).abs());
        worst = worst.max(plucker_residuals(p).iter().fold(0.0, |m, r| m.max(r.abs())));
    }
    Ok(check("psi is unit and decomposable", worst <= 1e-10, format!("max={worst:.3e}")))
}

fn lift_orthogonality(lift: &MinorLift, form: Form10) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let (ei, ej) = (unit10(i), unit10(j));
            worst = worst.max((form(&lift.apply(&ei), &lift.apply(&ej)) - form(&ei, &ej)).abs());
        }
    }
    worst
}

fn unit10(k: usize) -> BiVector10 {
    let mut p = BiVector10::zero();
    p.0[k] = 1.0;
    p
}

fn minor_lift_group(form: Form10) -> Result<Vec<Check>> {
    let (mut orth, mut hom): (f64, f64) = (0.0, 0.0);
    for seed in 0..50 {
        let a = random_mobius(2 * seed, 1.5)?;
        let b = random_mobius(2 * seed + 1, 1.5)?;
        let la = minor_lift(a.matrix());
        orth = orth.max(lift_orthogonality(&la, form));
        let lab = minor_lift(a.compose(&b).matrix());
        hom = hom.max(lab.max_abs_diff(&la.compose(&minor_lift(b.matrix()))));
    }
    Ok(vec![
        check("minor lift preserves the wedge inner product", orth <= 1e-10, format!("max={orth:.3e}")),
        check("minor lift is a homomorphism", hom <= 1e-10, format!("max={hom:.3e}")),
    ])
}

fn theta_signature(form: Form10) -> Result<Check> {
    let mut rng = Lcg64::new(4);
    let expected = Signature { plus: 3, minus: 3, zero: 0 };
    let mut bad = None;
    for _ in 0..100 {
        let sig = signature_under(&theta_tangent_vectors(&random_point(&mut rng), &random_point(&mut rng))?, form);
        if sig != expected {
            bad = Some(sig);
            break;
        }
    }
    let seen = bad.unwrap_or(expected);
    Ok(check("tangent signature", bad.is_none(), format!("index({},{}) pairs=100", seen.plus, seen.minus)))
}

fn nullity_and_routes(form: Form10) -> Result<Vec<Check>> {
    let mut rng = Lcg64::new(5);
    let (mut null, mut route): (f64, f64) = (0.0, 0.0);
    for (_, link) in links()? {
        for _ in 0..200 {
            let (s, t) = (rng.range(0.0, TAU), rng.range(0.0, TAU));
            let f = sigma_derivatives(&link, s, t)?;
            null = null.max(form(&f.sigma_s, &f.sigma_s).abs()).max(form(&f.sigma_t, &f.sigma_t).abs());
            let g = metric_coefficient(&link, s, t)?;
            route = route.max((form(&f.sigma_s, &f.sigma_t) - g).abs() / g.abs().max(1.0));
        }
    }
    Ok(vec![
        check("torus tangents are null", null <= 1e-10, format!("max={null:.3e}")),
        check("closed-form metric matches bivector route", route <= 1e-10, format!("max_rel={route:.3e}")),
    ])
}

fn torus_types(form: Form10) -> Result<Check> {
    let sep = catalogue::separated(1.5)?;
    let hopf = catalogue::hopf();
    let mut ok = true;
    for (s, t) in [(0.4, 1.3), (2.2, 5.0), (4.0, 0.7)] {
        let f = sigma_derivatives(&sep, s, t)?;
        ok &= signature_under(&[f.sigma_s, f.sigma_t], form) == Signature { plus: 1, minus: 1, zero: 0 };
        let h = sigma_derivatives(&hopf, s, t)?;
        ok &= signature_under(&[h.sigma_s, h.sigma_t], form) == Signature { plus: 0, minus: 0, zero: 2 };
    }
    Ok(check("torus tangent planes are mixed or degenerate", ok, String::new()))
}

fn angle_routes() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for (_, link) in links()? {
        let chart = StereoChart::for_link(&link)?;
        let (xs, ys) = link.sample_grid(32)?;
        for x in &xs {
            for y in &ys {
                let wedge = conformal_angle_wedge_at(x, y)?;
                match chart.angle(x, y) {
                    Ok(a) => worst = worst.max((a - wedge).abs()),
                    Err(Error::NotApplicable) => {
                        skipped += 1;
                        worst = worst.max(1.0 - wedge.cos().abs());
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(check("conformal angle routes agree", worst <= 1e-7, format!("max={worst:.3e} skipped={skipped}")))
}

fn symplectic_sign() -> Result<Check> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (_, link) in links()? {
        let r = exterior_derivative_check(&link, 128)?;
        ok &= r.sign == CONVENTION_SIGN;
        worst = worst.max(r.max_err);
    }
    Ok(check("cross ratio equals signed half of the pulled-back exterior derivative", ok && worst <= 1e-6, format!(
        "sign={CONVENTION_SIGN} max={worst:.3e}"
    )))
}

fn signed_area_vanishes() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (_, link) in links()? {
        worst = worst.max(build_grid(&link, 64, 64)?.signed_area().abs());
    }
    Ok(check("signed area vanishes", worst <= 1e-8, format!("max={worst:.3e}")))
}

/// Runs every property with the given bivector inner product.
pub fn battery(form: Form10) -> Result<Vec<Check>> {
    let mut out = vec![determinant_identity(form), plucker(), psi_unit(form)?];
    out.extend(minor_lift_group(form)?);
    out.push(theta_signature(form)?);
    out.extend(nullity_and_routes(form)?);
    out.push(torus_types(form)?);
    out.push(angle_routes()?);
    out.push(symplectic_sign()?);
    out.push(signed_area_vanishes()?);
    Ok(out)
}

/// Prints one line per property and a summary; returns the number of failures.
pub fn report(checks: &[Check], out: &mut dyn Write) -> std::io::Result<usize> {
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            writeln!(out, "{tag} {}", c.name)?;
        } else {
            writeln!(out, "{tag} {} {}", c.name, c.detail)?;
        }
    }
    writeln!(out, "verify: passed={} failed={failed}", checks.len() - failed)?;
    Ok(failed)
}

pub fn default_battery() -> Result<Vec<Check>> {
    battery(inner10)
}
