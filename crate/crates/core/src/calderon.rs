//! Principal symbols of the Calderón projector, the Lopatinsky–Shapiro rank
//! test for local boundary conditions, Agmon cones and the chiral
//! obstruction in four dimensions.

use crate::clifford::{make_rep_4d_boundary, ComplexMatrix, GammaRep, PolarFrame, RANK_FLOOR, RANK_THRESHOLD};
use crate::error::{Error, Result};
use crate::quadrature::contour_closed;
use crate::seeley::{SymbolFn, SymbolPoint};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `q(x; ξ) = ½(Id + i ξ̸ n̸/|ξ|)` for a unit normal `n` and a tangential
/// covector `ξ`.
pub fn q_principal(rep: &GammaRep, n: &[f64], xi: &[f64]) -> Result<ComplexMatrix> {
    let norm_xi = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm_xi == 0.0 {
        return Err(Error::Domain("q(x; ξ) needs ξ ≠ 0".into()));
    }
    let norm_n = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm_n - 1.0).abs() > 1e-12 {
        return Err(Error::Argument(format!("normal must be a unit vector, |n| = {norm_n}")));
    }
    let dot: f64 = n.iter().zip(xi).map(|(a, b)| a * b).sum();
    if dot.abs() > 1e-12 * norm_xi {
        return Err(Error::Argument("ξ must be orthogonal to n".into()));
    }
    let xs = rep.slash(xi)?;
    let ns = rep.slash(n)?;
    let id = ComplexMatrix::identity(rep.k);
    Ok((&id + &(&xs * &ns).scale(I / norm_xi)).scale_re(0.5))
}

/// Chiral block `½(I + ξ·σ)` of the four-dimensional Calderón symbol, for
/// the boundary normal along `γ_n` and unit tangential `ξ ∈ R³`.
pub fn chiral_symbol(xi: [f64; 3]) -> Result<ComplexMatrix> {
    let rep = make_rep_4d_boundary();
    let q = q_principal(&rep, &[1.0, 0.0, 0.0, 0.0], &[0.0, xi[0], xi[1], xi[2]])?;
    Ok(q.block(0, 0, 2, 2))
}

/// Riesz projector of `a₁(x,0;0,1;0)⁻¹ a₁(x,0;ξ,0;λ)` onto its eigenvalues in
/// the lower half plane, by the trapezoid rule on a clockwise circle:
/// `(1/2πi)∮ (N − z)⁻¹ dz`.
///
/// The circle is centred at the mean of the enclosed eigenvalues with
/// radius `1.5×` their spread, reduced so that it stays halfway to the
/// nearest excluded eigenvalue.
pub fn q_lambda_contour(a1: &SymbolFn, theta: f64, xi: f64, lambda: Complex64, nodes: usize) -> Result<ComplexMatrix> {
    let normal = a1.eval(&SymbolPoint { theta, t: 0.0, xi: 0.0, tau: 1.0, lambda: cx(0.0) })?;
    let full = a1.eval(&SymbolPoint { theta, t: 0.0, xi, tau: 0.0, lambda })?;
    let n = &normal.inverse()? * &full;
    let eig = n.eigenvalues()?;
    let scale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let tol = 1e-10 * scale;
    let (inside, outside): (Vec<Complex64>, Vec<Complex64>) = eig.iter().partition(|z| z.im < -tol);
    if inside.is_empty() {
        return Err(Error::Contour("no eigenvalue in the lower half plane".into()));
    }
    if eig.iter().any(|z| z.im.abs() <= tol) {
        return Err(Error::Contour("eigenvalue on the real axis; the splitting is undefined".into()));
    }
    let center = inside.iter().sum::<Complex64>() / inside.len() as f64;
    let spread = inside.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let gap = outside.iter().map(|z| (z - center).norm()).fold(f64::INFINITY, f64::min);
    let mut radius = if spread > 0.0 { 1.5 * spread } else { 0.5 * gap };
    if radius >= gap {
        radius = 0.5 * (spread + gap);
    }
    if !radius.is_finite() {
        radius = 1.0;
    }
    for z in &eig {
        if ((z - center).norm() - radius).abs() < tol.max(1e-8 * radius) {
            return Err(Error::Contour(format!("eigenvalue {z} lies on the contour; adjust the radius")));
        }
    }
    let k = n.rows();
    let id = ComplexMatrix::identity(k);
    let v = contour_closed(
        |z| (&n - &id.scale(z)).inverse().unwrap_or_else(|_| ComplexMatrix::from_vec(k, k, vec![cx(f64::NAN); k * k]).unwrap()),
        center,
        radius,
        -1,
        nodes,
    )?;
    Ok(v.scale(1.0 / (2.0 * PI * I)))
}

/// Closed form of the λ-dependent Calderón symbol on the disk,
/// `(1/2s)[[ξ + s, −iλe^{−iθ}], [−iλe^{iθ}, −ξ + s]]`, `s = √(ξ² − λ²)`.
pub fn disk_q_lambda(theta: f64, xi: f64, lambda: Complex64) -> Result<ComplexMatrix> {
    let z = cx(xi * xi) - lambda * lambda;
    if z.norm() <= 1e-15 * (xi * xi + lambda.norm_sqr()) || z.norm() == 0.0 {
        return Err(Error::Singular("ξ² = λ²".into()));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Branch("ξ² − λ² lies on the negative real axis".into()));
    }
    let s = z.sqrt();
    let e = Complex64::from_polar(1.0, theta);
    let m = ComplexMatrix::m2(s + xi, -I * lambda * e.conj(), -I * lambda * e, s - xi);
    Ok(m.scale((2.0 * s).inv()))
}

type BoundarySymbol = Arc<dyn Fn(f64, &[f64]) -> ComplexMatrix + Send + Sync>;

/// Local boundary condition with symbol `b(x; ξ)` of rank `rank`.
#[derive(Clone)]
pub struct BoundaryCondition {
    pub rank: usize,
    symbol: BoundarySymbol,
}

impl BoundaryCondition {
    pub fn new<F>(rank: usize, f: F) -> Self
    where
        F: Fn(f64, &[f64]) -> ComplexMatrix + Send + Sync + 'static,
    {
        BoundaryCondition { rank, symbol: Arc::new(f) }
    }

    /// Bag-type condition `(1, w e^{−iθ})` on the circle.
    pub fn disk_bag(w: Complex64) -> Self {
        Self::new(1, move |theta, _xi| {
            ComplexMatrix::from_rows(&[&[cx(1.0), w * Complex64::from_polar(1.0, -theta)]])
        })
    }

    /// A fixed row vector, independent of position and covector.
    pub fn constant_row(row: Vec<Complex64>) -> Self {
        Self::new(1, move |_x, _xi| ComplexMatrix::from_rows(&[&row]))
    }

    pub fn eval(&self, x: f64, xi: &[f64]) -> ComplexMatrix {
        (self.symbol)(x, xi)
    }

    /// The same condition with its symbol multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let inner = self.symbol.clone();
        Self::new(self.rank, move |x, xi| inner(x, xi).scale(c))
    }
}

impl std::fmt::Debug for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundaryCondition").field("rank", &self.rank).finish()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipticitySample {
    pub x: f64,
    pub xi: Vec<f64>,
    pub rank_bq: usize,
    pub rank_q: usize,
    pub singular_values_bq: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipticityReport {
    pub samples: Vec<EllipticitySample>,
    pub target_rank: usize,
    pub rank_threshold: f64,
    pub rank_floor: f64,
    pub pass: bool,
}

/// Compares `rank(b·q)` with `rank(q)` at each sample `(x, ξ)`, `|ξ| ≥ 1`.
pub fn check_ellipticity<Q>(bc: &BoundaryCondition, q: Q, samples: &[(f64, Vec<f64>)]) -> Result<EllipticityReport>
where
    Q: Fn(f64, &[f64]) -> Result<ComplexMatrix>,
{
    if samples.is_empty() {
        return Err(Error::Argument("no samples given".into()));
    }
    let mut out = Vec::with_capacity(samples.len());
    for (x, xi) in samples {
        let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1.0 - 1e-12 {
            return Err(Error::Argument(format!("sample covector must satisfy |ξ| ≥ 1, got {norm}")));
        }
        let qm = q(*x, xi)?;
        let bq = &bc.eval(*x, xi) * &qm;
        out.push(EllipticitySample {
            x: *x,
            xi: xi.clone(),
            rank_bq: bq.rank(),
            rank_q: qm.rank(),
            singular_values_bq: bq.singular_values(),
        });
    }
    let pass = out.iter().all(|s| s.rank_bq == s.rank_q);
    Ok(EllipticityReport { samples: out, target_rank: bc.rank, rank_threshold: RANK_THRESHOLD, rank_floor: RANK_FLOOR, pass })
}

/// Unit `ξ ∈ R³` with `(β₁, β₂)·q_ch(ξ) = 0`: the Bloch vector of the kernel
/// direction `(β₂, −β₁)` of the row `(β₁, β₂)`. For real `β` this is
/// `(−2β₁β₂, 0, β₂² − β₁²)/(β₁² + β₂²)`.
pub fn chiral_obstruction_witness(beta1: Complex64, beta2: Complex64) -> Result<[f64; 3]> {
    let s = beta1 * beta1 + beta2 * beta2;
    if s.norm() <= 1e-14 * (beta1.norm_sqr() + beta2.norm_sqr()) || s.norm() == 0.0 {
        return Err(Error::Degenerate("β₁² + β₂² = 0".into()));
    }
    let (v1, v2) = (beta2, -beta1);
    let n = v1.norm_sqr() + v2.norm_sqr();
    let c = v1.conj() * v2;
    Ok([2.0 * c.re / n, 2.0 * c.im / n, (v1.norm_sqr() - v2.norm_sqr()) / n])
}

/// Angular sector `|arg λ − center| ≤ half_width` in the λ plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sector {
    pub center: f64,
    pub half_width: f64,
}

impl Sector {
    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() == 0.0 {
            return true;
        }
        let d = (z.arg() - self.center).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d) <= self.half_width
    }
}

/// Sampling grid for [`check_agmon_cone`]. Angles are fractions of the
/// sector half width in `[−1, 1]`; radii may include `0`, the cone vertex.
#[derive(Debug, Clone, Serialize)]
pub struct AgmonGrid {
    pub thetas: Vec<f64>,
    pub xis: Vec<f64>,
    pub radii: Vec<f64>,
    pub angle_fractions: Vec<f64>,
    pub normal_angles: usize,
}

impl Default for AgmonGrid {
    fn default() -> Self {
        AgmonGrid {
            thetas: vec![0.0, 0.7, 2.1, 4.0],
            xis: vec![-3.0, -1.0, 1.0, 3.0],
            radii: vec![0.0, 0.25, 1.0, 4.0],
            angle_fractions: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            normal_angles: 16,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AgmonViolation {
    pub theta: f64,
    pub xi: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgmonReport {
    pub cone: Sector,
    pub grid: AgmonGrid,
    pub spectrum_ok: bool,
    pub rank_ok: bool,
    pub pass: bool,
    pub violations: Vec<AgmonViolation>,
}

/// Sampled check that `sector` is a cone of Agmon directions for the disk
/// operator with boundary condition `bc`: (1) the principal symbol
/// `−ξ̸` has no eigenvalues in the cone for unit `(ξ, τ)`; (2)
/// `rank(b·q(λ)) = rank(q(λ))` for sampled `λ` in the cone and `|ξ| ≥ 1`.
pub fn check_agmon_cone(bc: &BoundaryCondition, sector: Sector, grid: &AgmonGrid) -> Result<AgmonReport> {
    let mut violations = Vec::new();
    let mut spectrum_ok = true;
    for &theta in &grid.thetas {
        let f = PolarFrame::new(theta);
        for j in 0..grid.normal_angles {
            let phi = 2.0 * PI * j as f64 / grid.normal_angles as f64;
            let sym = -&f.slash(cx(phi.cos()), cx(phi.sin()));
            for ev in sym.eigenvalues()? {
                if sector.contains(ev) {
                    spectrum_ok = false;
                    violations.push(AgmonViolation {
                        theta,
                        xi: phi.cos(),
                        lambda_re: ev.re,
                        lambda_im: ev.im,
                        detail: "principal symbol eigenvalue inside the cone".into(),
                    });
                }
            }
        }
    }
    let mut rank_ok = true;
    for &theta in &grid.thetas {
        for &xi in &grid.xis {
            for &r in &grid.radii {
                let fractions: &[f64] = if r == 0.0 { &[0.0] } else { &grid.angle_fractions };
                for &fr in fractions {
                    let lambda = Complex64::from_polar(r, sector.center + fr * sector.half_width);
                    let q = match disk_q_lambda(theta, xi, lambda) {
                        Ok(q) => q,
                        Err(e) => {
                            rank_ok = false;
                            violations.push(AgmonViolation {
                                theta,
                                xi,
                                lambda_re: lambda.re,
                                lambda_im: lambda.im,
                                detail: e.to_string(),
                            });
                            continue;
                        }
                    };
                    let bq = &bc.eval(theta, &[xi]) * &q;
                    let (rb, rq) = (bq.rank(), q.rank());
                    if rb != rq {
                        rank_ok = false;
                        violations.push(AgmonViolation {
                            theta,
                            xi,
                            lambda_re: lambda.re,
                            lambda_im: lambda.im,
                            detail: format!("rank(b·q(λ)) = {rb} but rank(q(λ)) = {rq}"),
                        });
                    }
                }
            }
        }
    }
    Ok(AgmonReport { cone: sector, grid: grid.clone(), spectrum_ok, rank_ok, pass: spectrum_ok && rank_ok, violations })
}
