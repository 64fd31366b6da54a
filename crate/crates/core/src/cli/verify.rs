use super::{ellipticity_report, CliResult, RunConfig};
use crate::calderon::{disk_q_lambda, q_lambda_contour, q_principal};
use crate::clifford::{make_rep_2d, make_rep_4d_boundary, polar_gammas, GammaRep};
use crate::determinant::{ln_det_ratio, residue_check, DeterminantResult};
use crate::greens::{boundary_residual, dirac_residual, singularity_coefficient, zero_mode_scan, PlanePoint};
use crate::seeley::{d_tilde_minus1, d_tilde_minus1_by_contour, disk_a1, k_nu, k_nu_bessel_quadrature};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<CheckOutcome>,
    pub result: DeterminantResult,
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Random covector orthogonal to `n`, of length in `[0.5, 3]`.
fn random_tangent(rng: &mut ChaCha8Rng, n: &[f64]) -> Vec<f64> {
    loop {
        let v = random_unit(rng, n.len());
        let d: f64 = v.iter().zip(n).map(|(a, b)| a * b).sum();
        let t: Vec<f64> = v.iter().zip(n).map(|(a, b)| a - d * b).collect();
        let len = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.1 {
            let s = rng.random_range(0.5..3.0) / len;
            return t.iter().map(|x| x * s).collect();
        }
    }
}

fn projector_defect(rep: &GammaRep, rng: &mut ChaCha8Rng, samples: usize) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let n = random_unit(rng, rep.nu);
        let xi = random_tangent(rng, &n);
        let q = q_principal(rep, &n, &xi)?;
        let idem = (&q * &q).distance(&q);
        let tr = (q.trace() - cx(rep.k as f64 / 2.0)).norm();
        worst = worst.max(idem).max(tr);
    }
    Ok(worst)
}

/// Sample `λ` in the cone `|arg λ − π/2| ≤ π/4`.
fn cone_lambda(rng: &mut ChaCha8Rng, max_modulus: f64) -> Complex64 {
    let r = rng.random_range(0.05..max_modulus);
    Complex64::from_polar(r, PI / 2.0 + rng.random_range(-PI / 4.0..PI / 4.0))
}

/// Runs every invariant and oracle check against the configured problem.
pub fn run_verify_suite(c: &RunConfig) -> CliResult<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let p = c.problem()?;
    let big_r = p.radius();
    let mut checks: Vec<(String, f64)> = Vec::new();

    checks.push(("clifford".into(), make_rep_2d().clifford_defect().max(make_rep_4d_boundary().clifford_defect())));

    let proj = projector_defect(&make_rep_2d(), &mut rng, 500)?.max(projector_defect(&make_rep_4d_boundary(), &mut rng, 500)?);
    checks.push(("calderon_projector".into(), proj));

    let a1 = disk_a1();
    let mut lam: f64 = 0.0;
    for _ in 0..20 {
        let theta = rng.random_range(0.0..2.0 * PI);
        let xi: f64 = rng.random_range(0.5..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let l = cone_lambda(&mut rng, 2.0);
        let a = disk_q_lambda(theta, xi, l)?;
        let b = q_lambda_contour(&a1, theta, xi, l, 256)?;
        lam = lam.max(a.distance(&b));
    }
    checks.push(("calderon_lambda".into(), lam));

    let ell = ellipticity_report(c)?;
    let mismatches = ell.bag.samples.iter().filter(|s| s.rank_bq != s.rank_q).count();
    checks.push(("ellipticity".into(), mismatches as f64));
    checks.push(("agmon".into(), ell.agmon.violations.len() as f64));
    let obs = if ell.obstruction.rank_bq == 0 { ell.obstruction.norm_bq } else { ell.obstruction.norm_bq.max(1.0) };
    checks.push(("obstruction".into(), obs));

    let samples: Vec<(f64, PlanePoint)> = (0..200)
        .map(|_| {
            let th = rng.random_range(0.0..2.0 * PI);
            let y = PlanePoint::new(big_r * rng.random_range(0.0..0.95), rng.random_range(0.0..2.0 * PI));
            (th, y)
        })
        .collect();
    checks.push(("green_boundary".into(), boundary_residual(&p, &samples)?));

    let mut dirac: f64 = 0.0;
    let mut done = 0;
    while done < 5 {
        let x = PlanePoint::new(big_r * rng.random_range(0.05..0.8), rng.random_range(0.0..2.0 * PI));
        let y = PlanePoint::new(big_r * rng.random_range(0.0..0.95), rng.random_range(0.0..2.0 * PI));
        if (x.complex() - y.complex()).norm() < 0.2 * big_r {
            continue;
        }
        dirac = dirac.max(dirac_residual(&p, x, y)?);
        done += 1;
    }
    checks.push(("green_dirac".into(), dirac));

    let mut sing: f64 = 0.0;
    for _ in 0..3 {
        let r = big_r * rng.random_range(0.2..0.8);
        let th = rng.random_range(0.0..2.0 * PI);
        let (_, gt) = polar_gammas(th);
        let expected = gt.scale((Complex64::new(0.0, 2.0 * PI * r)).inv());
        let got = singularity_coefficient(&p, r, th)?;
        sing = sing.max(got.distance(&expected) / expected.norm());
    }
    checks.push(("green_singularity".into(), sing));

    checks.push(("zero_modes".into(), zero_mode_scan(&p, -10, 10)?.kernel_dimension as f64));

    let mut knu: f64 = 0.0;
    for nu in [2, 3, 4] {
        knu = knu.max((k_nu_bessel_quadrature(nu)?.re() - k_nu(nu)).abs());
    }
    checks.push(("k_nu".into(), knu));

    let mut dt: f64 = 0.0;
    for _ in 0..20 {
        let theta = rng.random_range(0.0..2.0 * PI);
        let t = rng.random_range(0.0..1.0);
        let u = rng.random_range(0.0..1.0);
        let xi: f64 = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let l = cone_lambda(&mut rng, 0.9 * xi.abs());
        let a = d_tilde_minus1(theta, t, u, xi, l, p.w)?;
        let b = d_tilde_minus1_by_contour(theta, t, u, xi, l, p.w, 512)?;
        dt = dt.max(a.distance(&b) / a.max_abs().max(f64::MIN_POSITIVE));
    }
    checks.push(("d_tilde".into(), dt));

    checks.push(("residue".into(), residue_check(&p)?.contraction));

    let result = ln_det_ratio(&p)?;
    for (k, v) in &result.diagnostics {
        if !v.is_nan() {
            checks.push((k.clone(), *v));
        }
    }

    let checks: Vec<CheckOutcome> = checks
        .into_iter()
        .map(|(name, residual)| {
            let tol = c.tolerance(&name);
            CheckOutcome { pass: residual <= tol, name, residual, tol }
        })
        .collect();
    Ok(VerifyReport { pass: checks.iter().all(|k| k.pass), checks, result })
}
