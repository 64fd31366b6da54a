//! `ln Det(D_α)_B` for the disk: the α-derivative of the determinant, its
//! bulk and boundary contributions, and independent oracles for each.

mod contour;

pub use contour::ContourSpec;

use crate::clifford::{polar_gammas, ComplexMatrix};
use crate::error::{Error, Result};
use crate::greens::{free_green, singularity_coefficient, DiskProblem, PlanePoint};
use crate::quadrature::{
    bessel_j, circle_mean, gauss_legendre, integrate_adaptive, integrate_adaptive_with, integrate_oscillatory_tail,
    AdaptiveOptions, QuadratureResult,
};
use crate::seeley::{c_minus1, c_minus2, d_tilde_minus1, decay_root, m_coefficient, GaugeField};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Number of unit-circle nodes for angular averages of symbols; the
/// integrands are trigonometric polynomials of low degree.
const ANGULAR_NODES: usize = 32;

const FINE: AdaptiveOptions = AdaptiveOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_nodes: 200_000 };

/// Total flux `Φ = ∮ A_θ R dθ = −2πR φ′(R)`.
pub fn flux(gauge: &GaugeField) -> f64 {
    -2.0 * PI * gauge.radius * gauge.dphi(gauge.radius)
}

/// `∮ A·dx` along `|x| = R` from the Cartesian components of the field.
pub fn flux_by_quadrature(gauge: &GaugeField) -> Result<f64> {
    let r = gauge.radius;
    let q = integrate_adaptive_with(
        |th| {
            let a = gauge.cartesian([r * th.cos(), r * th.sin()]);
            cx(r * (-a[0] * th.sin() + a[1] * th.cos()))
        },
        0.0,
        2.0 * PI,
        &FINE,
    )?;
    Ok(q.re())
}

/// `∫_Ω A_νA_ν d²x = 2π∫₀^R A_θ(r)² r dr`.
pub fn field_energy(gauge: &GaugeField) -> Result<f64> {
    let q = integrate_adaptive_with(|r| cx(gauge.a_theta(r).powi(2) * r), 0.0, gauge.radius, &FINE)?;
    Ok(2.0 * PI * q.re())
}

/// Bulk contribution of `c₋₂`, `−(α/2π)∫A_νA_ν d²x`.
pub fn bulk_c2_term(gauge: &GaugeField, alpha: f64) -> Result<f64> {
    Ok(-alpha / (2.0 * PI) * field_energy(gauge)?)
}

/// `∫_split^∞ J₂(u) du/u`.
pub fn bessel_j2_moment(split: f64) -> Result<f64> {
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::Argument(format!("split must lie in (0, 1), got {split}")));
    }
    let head = integrate_adaptive_with(|u| cx(bessel_j(2, u) / u), split, 1.0, &FINE)?;
    let tail = integrate_oscillatory_tail(|u| cx(bessel_j(2, u) / u), 1.0, PI, 1e-13)?;
    Ok(head.re() + tail.re())
}

/// Bulk term from the coincidence limit `−(α/π)∫A² d²x · ∫_ε^∞ J₂(u) du/u`,
/// extrapolated to `ε → 0` from `ε, ε/2, ε/4` (the error is even in `ε`).
pub fn bulk_c2_bessel_oracle(gauge: &GaugeField, alpha: f64, split: f64) -> Result<f64> {
    let hs: Vec<f64> = (0..3).map(|k| (split / 2f64.powi(k)).powi(2)).collect();
    let mut t: Vec<f64> = Vec::with_capacity(3);
    for k in 0..3 {
        t.push(bessel_j2_moment(split / 2f64.powi(k))?);
    }
    for level in 1..3 {
        for i in (level..3).rev() {
            t[i] = (t[i] * hs[i - level] - t[i - 1] * hs[i]) / (hs[i - level] - hs[i]);
        }
    }
    Ok(-alpha / PI * field_energy(gauge)? * t[2])
}

/// `½∫_{|(ξ,τ)|=1} tr(γ_θ c₋₂) dσ` for unit `A_θ` and `α`.
fn c2_angular_trace(lambda: Complex64) -> Result<Complex64> {
    let (_, gt) = polar_gammas(0.0);
    let mean = m_coefficient(|xi, tau| c_minus2(0.0, 1.0, xi, tau, lambda, 1.0), ANGULAR_NODES)?;
    Ok((&gt * &mean).trace() * PI)
}

/// `∮_Γ (ln λ/λ)·½∫tr(γ_θ c₋₂) dσ dλ` for unit field strength.
fn bulk_log_contour(contour: &ContourSpec) -> Result<QuadratureResult> {
    contour.validate(&[cx(1.0), cx(-1.0)], 1e-3)?;
    contour.integrate(|l, ln| Ok(ln / l * c2_angular_trace(l)?))
}

/// Bulk contribution of the `ln λ` part of the resolvent trace,
/// `−(iα/4π³)∫A² d²x ∮_Γ (ln λ/λ)·½∫tr(γ_θ c₋₂) dσ dλ`, by contour and
/// angular quadrature.
pub fn bulk_log_term(gauge: &GaugeField, alpha: f64) -> Result<f64> {
    bulk_log_term_with(gauge, alpha, &ContourSpec::keyhole(0.5, 1e-12)?)
}

pub fn bulk_log_term_with(gauge: &GaugeField, alpha: f64, contour: &ContourSpec) -> Result<f64> {
    let energy = field_energy(gauge)?;
    if alpha == 0.0 || energy == 0.0 {
        return Ok(0.0);
    }
    let l = bulk_log_contour(contour)?;
    Ok((-I * alpha / (4.0 * PI.powi(3)) * energy * l.value).re)
}

/// Boundary contribution `−(Φ/4π) ln w²`, principal logarithm.
pub fn boundary_term(w: Complex64, flux: f64) -> Result<Complex64> {
    if w.norm() == 0.0 {
        return Err(Error::Domain("w = 0 is not an elliptic boundary condition".into()));
    }
    // Adding +0 turns a signed zero into +0 for w = ±1 or Φ = 0.
    Ok(-flux / (4.0 * PI) * (w * w).ln() + cx(0.0))
}

/// Boundary contribution from the resolvent's boundary coefficient:
///
/// `(iΦ/(2π)³) ∮_Γ (ln λ/λ) Σ_{ξ=±1} tr(γ_θ d̃₋₁(θ, 0, 0; ξ; λ))/(2√(ξ² − λ²)) dλ`,
///
/// where `1/(2√)` is the normal integral of `e^{−2t√}` at coinciding points.
pub fn boundary_contour_oracle(w: Complex64, flux: f64, contour: &ContourSpec) -> Result<Complex64> {
    if w.norm() == 0.0 {
        return Err(Error::Domain("w = 0 is not an elliptic boundary condition".into()));
    }
    if contour.detour_radius >= 1.0 {
        return Err(Error::Contour("detour must stay inside the branch points λ = ±1".into()));
    }
    contour.validate(&boundary_singular_points(w), 1e-6)?;
    if flux == 0.0 {
        return Ok(cx(0.0));
    }
    let (_, gt) = polar_gammas(0.0);
    let q = contour.integrate(|l, ln| {
        let mut acc = cx(0.0);
        for xi in [1.0, -1.0] {
            let d = d_tilde_minus1(0.0, 0.0, 0.0, xi, l, w).map_err(|e| match e {
                Error::NonElliptic(m) => Error::Contour(m),
                e => e,
            })?;
            acc += (&gt * &d).trace() / (2.0 * decay_root(xi, l)?);
        }
        Ok(acc * ln / l)
    })?;
    Ok(I * flux / (2.0 * PI).powi(3) * q.value)
}

/// Branch points `λ = ±1` and the zeros of `iwλ − ξ − √(ξ² − λ²)` for
/// `ξ = ±1`. Squaring gives the candidates `λ = iξ/u`, `u = (1 − w²)/2w`;
/// only those solving the unsquared equation are kept.
pub fn boundary_singular_points(w: Complex64) -> Vec<Complex64> {
    let mut pts = vec![cx(1.0), cx(-1.0)];
    let u = (cx(1.0) - w * w) / (2.0 * w);
    if u.norm() == 0.0 {
        return pts;
    }
    for xi in [1.0, -1.0] {
        let l = I * xi / u;
        let s = (cx(1.0) - l * l).sqrt();
        let s = if s.re < 0.0 { -s } else { s };
        if (I * w * l - xi - s).norm() <= 1e-9 * (1.0 + (w * l).norm()) {
            pts.push(l);
        }
    }
    pts
}

fn real_positive_w(w: Complex64) -> Result<f64> {
    if w.im != 0.0 || !(w.re > 0.0) {
        return Err(Error::Domain(format!("the real μ-integral form needs real w > 0, got {w}")));
    }
    Ok(w.re)
}

/// Boundary contribution from the real integral
/// `(Φ/2π) u∫₀^∞ dμ/(√(1+μ²)(μ√(1+u²) + √(1+μ²)))`, `u = (1 − w²)/2w`.
pub fn boundary_mu_integral(w: Complex64, flux: f64) -> Result<QuadratureResult> {
    let w = real_positive_w(w)?;
    let u = (1.0 - w * w) / (2.0 * w);
    let a = (1.0 + u * u).sqrt();
    let opts = AdaptiveOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_nodes: 200_000 };
    let q = integrate_adaptive_with(
        |mu| {
            let s = (1.0 + mu * mu).sqrt();
            cx(u / (s * (mu * a + s)))
        },
        0.0,
        f64::INFINITY,
        &opts,
    )?;
    let k = flux / (2.0 * PI);
    Ok(QuadratureResult { value: q.value * k, abs_error_estimate: q.abs_error_estimate * k.abs(), nodes_used: q.nodes_used })
}

/// Antiderivative `F(μ) = ln[(√(1+u²) + u√(1+μ²))/(√(1+u²) − u√(1+μ²)) · (1 − uμ)/(1 + uμ)]`
/// of `−2u/(√(1+μ²)(μ√(1+u²) + √(1+μ²)))`. `F(0) = −ln w²` and `F(∞) = 0`.
pub fn boundary_antiderivative(w: Complex64, mu: f64) -> Result<f64> {
    let w = real_positive_w(w)?;
    if mu < 0.0 {
        return Err(Error::Argument("μ must be non-negative".into()));
    }
    if mu.is_infinite() {
        return Ok(0.0);
    }
    let u = (1.0 - w * w) / (2.0 * w);
    let a = (1.0 + u * u).sqrt();
    let s = (1.0 + mu * mu).sqrt();
    // Both fractions vanish together at uμ = ±1; the product reduces to either
    // of two forms, each free of cancellation for one sign of u.
    let ratio = if u >= 0.0 { (a + u * s) / (1.0 + u * mu) } else { (1.0 - u * mu) / (a - u * s) };
    Ok(2.0 * ratio.ln())
}

/// The pieces of `∂_α ln Det(D_α)_B`.
#[derive(Debug, Clone, Serialize)]
pub struct DwTerms {
    pub alpha: f64,
    /// Green-function coincidence limit minus the `c₋₁` counterterm; zero
    /// because the singular parts cancel (see [`singularity_cancellation_check`]).
    pub green_limit: f64,
    pub singularity_defect: f64,
    pub bulk_c2: f64,
    pub bulk_log: f64,
    pub boundary: Complex64,
    pub total: Complex64,
}

/// α-independent ingredients of `∂_αW`.
struct UnitTerms {
    energy: f64,
    log_unit: f64,
    boundary: Complex64,
}

impl UnitTerms {
    fn new(p: &DiskProblem) -> Result<Self> {
        let energy = field_energy(&p.gauge)?;
        let log_unit = bulk_log_term(&p.gauge, 1.0)?;
        let boundary = boundary_term(p.w, flux(&p.gauge))?;
        Ok(UnitTerms { energy, log_unit, boundary })
    }

    fn derivative(&self, alpha: f64) -> Complex64 {
        cx(-alpha / (2.0 * PI) * self.energy + alpha * self.log_unit) + self.boundary
    }
}

/// `∂_α ln Det(D_α)_B` at `α = p.alpha` as the sum of the evaluated terms.
pub fn dw_dalpha(p: &DiskProblem) -> Result<DwTerms> {
    let bulk_c2 = bulk_c2_term(&p.gauge, p.alpha)?;
    let bulk_log = bulk_log_term(&p.gauge, p.alpha)?;
    let boundary = boundary_term(p.w, flux(&p.gauge))?;
    let check = singularity_cancellation_check(p, 0.5 * p.radius(), 0.3)?;
    Ok(DwTerms {
        alpha: p.alpha,
        green_limit: 0.0,
        singularity_defect: check.defect,
        bulk_c2,
        bulk_log,
        boundary,
        total: cx(bulk_c2 + bulk_log) + boundary,
    })
}

/// `∫₀^∞ J₁(u) du`.
pub fn bessel_j1_integral() -> Result<f64> {
    let head = integrate_adaptive_with(|u| cx(bessel_j(1, u)), 0.0, 1.0, &FINE)?;
    let tail = integrate_oscillatory_tail(|u| cx(bessel_j(1, u)), 1.0, PI, 1e-13)?;
    Ok(head.re() + tail.re())
}

/// Fourier transform of `c₋₁` at `λ = 0`, `∫d²k/(2π)² e^{ik·x} c₋₁(k)`.
/// Only the first angular harmonics of `c₋₁(k̂)` survive, giving
/// `(i/(2π)²|x|) ∫₀^∞J₁ · ∫dφ 2cos(φ − φ_x) c₋₁(k̂(φ))`.
pub fn c_minus1_fourier_kernel(x: [f64; 2]) -> Result<ComplexMatrix> {
    let rho = x[0].hypot(x[1]);
    if rho == 0.0 {
        return Err(Error::Singular("kernel at x = 0".into()));
    }
    let phx = x[1].atan2(x[0]);
    // In the frame θ = 0, γ_θ = σ₂ and γ_t = −σ₁, so k̸ = ξγ_θ + τγ_t for
    // ξ = k₁, τ = −k₀.
    let (cx_, sx_) = (phx.cos(), phx.sin());
    let ang = m_coefficient(
        |c, s| Ok(c_minus1(0.0, s, -c, cx(0.0))?.scale_re(2.0 * (c * cx_ + s * sx_))),
        ANGULAR_NODES,
    )?;
    let j1 = bessel_j1_integral()?;
    Ok(ang.scale(I * 2.0 * PI * j1 / ((2.0 * PI).powi(2) * rho)))
}

/// Distance between the Fourier transform of `c₋₁(λ = 0)` and `G₀(x, 0)`.
pub fn c_minus1_fourier_check(x: [f64; 2]) -> Result<f64> {
    let k = c_minus1_fourier_kernel(x)?;
    let g0 = free_green(PlanePoint::from_cartesian(x), PlanePoint::new(0.0, 0.0))?;
    Ok(k.distance(&g0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularityCheck {
    /// Coefficient of `1/(θ − φ)` in `tr{A_θγ_θ G_B}`.
    pub green_coefficient: Complex64,
    /// Same coefficient for the Fourier-transformed `c₋₁` counterterm.
    pub counterterm_coefficient: Complex64,
    /// `A_θ/(πi r)`.
    pub expected: Complex64,
    pub defect: f64,
}

/// Compares the angular pole of `tr{A_θγ_θ G_B}` at the diagonal with that of
/// the `c₋₁` counterterm.
pub fn singularity_cancellation_check(p: &DiskProblem, r: f64, theta: f64) -> Result<SingularityCheck> {
    let a = p.gauge.a_theta(r);
    let (_, gt) = polar_gammas(theta);
    let m = singularity_coefficient(p, r, theta)?;
    let green = (&gt * &m).trace() * a;
    // Along the diagonal x − y ≈ rδ θ̂; the kernel has degree −1.
    let theta_hat = [-theta.sin(), theta.cos()];
    let kernel = c_minus1_fourier_kernel(theta_hat)?.scale_re(1.0 / r);
    let counter = (&gt * &kernel).trace() * a;
    let expected = cx(a) / (PI * I * r);
    let scale = expected.norm().max(1e-300);
    let defect = if a == 0.0 {
        green.norm() + counter.norm()
    } else {
        ((green - expected).norm() + (counter - expected).norm()) / scale
    };
    Ok(SingularityCheck { green_coefficient: green, counterterm_coefficient: counter, expected, defect })
}

/// `ln Det(D)_B − ln Det(i∂̸)_B` with oracle residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantResult {
    pub bulk_term: f64,
    pub boundary_term: Complex64,
    pub total: Complex64,
    pub flux: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct FlatResult<'a> {
    bulk: f64,
    boundary_re: f64,
    boundary_im: f64,
    total_re: f64,
    total_im: f64,
    flux: f64,
    oracle_residuals: &'a BTreeMap<String, f64>,
}

impl Serialize for DeterminantResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlatResult {
            bulk: self.bulk_term,
            boundary_re: self.boundary_term.re,
            boundary_im: self.boundary_term.im,
            total_re: self.total.re,
            total_im: self.total.im,
            flux: self.flux,
            oracle_residuals: &self.diagnostics,
        }
        .serialize(s)
    }
}

impl DeterminantResult {
    /// Whether `ln w²` contributed an imaginary part.
    pub fn is_complex(&self) -> bool {
        self.boundary_term.im != 0.0
    }

    pub fn csv_header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["bulk", "boundary_re", "boundary_im", "total_re", "total_im", "flux"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        h.extend(self.diagnostics.keys().map(|k| format!("oracle_residuals.{k}")));
        h
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut r: Vec<String> = [
            self.bulk_term,
            self.boundary_term.re,
            self.boundary_term.im,
            self.total.re,
            self.total.im,
            self.flux,
        ]
        .iter()
        .map(|v| v.to_string())
        .collect();
        r.extend(self.diagnostics.values().map(|v| v.to_string()));
        r
    }
}

const ALPHA_NODES: usize = 16;

/// Integrates `∂_αW` over `α ∈ [0, 1]`. The bulk terms are linear in `α` and
/// the boundary term is constant, so the closed form is
/// `−(1/2π)∫A² d²x − (Φ/4π) ln w²`; a 16-node Gauss–Legendre rule over the
/// evaluated terms is recorded as `alpha_quadrature`.
pub fn ln_det_ratio(p: &DiskProblem) -> Result<DeterminantResult> {
    let units = UnitTerms::new(p)?;
    let phi = flux(&p.gauge);
    let bulk = -units.energy / (2.0 * PI);
    let total = cx(bulk) + units.boundary;

    let (x, wts) = gauss_legendre(ALPHA_NODES);
    let by_alpha: Complex64 = x.iter().zip(&wts).map(|(x, w)| units.derivative(0.5 * (x + 1.0)) * (0.5 * w)).sum();

    let mut diag = BTreeMap::new();
    diag.insert("alpha_quadrature".to_string(), (by_alpha - total).norm());
    diag.insert("bulk_log".to_string(), (units.log_unit - (-units.energy / (2.0 * PI))).abs());
    diag.insert("bulk_bessel".to_string(), (bulk_c2_bessel_oracle(&p.gauge, 1.0, 0.05)? - bulk).abs());
    diag.insert("flux_quadrature".to_string(), (flux_by_quadrature(&p.gauge)? - phi).abs());
    let contour = ContourSpec::for_boundary(p.w)?;
    let oracle = match boundary_contour_oracle(p.w, phi, &contour) {
        Ok(v) => (v - units.boundary).norm(),
        Err(Error::Contour(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    diag.insert("boundary_contour".to_string(), oracle);
    diag.insert("singularity".to_string(), singularity_cancellation_check(p, 0.5 * p.radius(), 0.3)?.defect);

    Ok(DeterminantResult { bulk_term: bulk, boundary_term: units.boundary, total, flux: phi, diagnostics: diag })
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidueReport {
    /// `∫_{|(ξ,τ)|=1}(τ² − ξ²) dσ`.
    pub angular_moment: f64,
    /// Largest `‖(1/2π)∫c₋₂(λ = 0) dσ‖` over sampled radii.
    pub c2_mean_norm: f64,
    /// `Σ_{ξ=±1}∫₀^∞ tr(γ_θ d̃₋₁(t, t; ξ; 0)) dt`.
    pub d_trace_gamma_theta: Complex64,
    /// `Σ_{ξ=±1}∫₀^∞ tr d̃₋₁(t, t; ξ; 0) dt`.
    pub d_trace: Complex64,
    /// Largest contraction of both residue integrals with `A̸`.
    pub contraction: f64,
}

/// Residue integrals of the resolvent trace at `z = 0` for the disk data.
pub fn residue_check(p: &DiskProblem) -> Result<ResidueReport> {
    let angular_moment = 2.0 * PI * circle_mean(|ph| cx(ph.sin().powi(2) - ph.cos().powi(2)), ANGULAR_NODES).re;
    let (_, gt) = polar_gammas(0.0);
    let mut c2_mean_norm: f64 = 0.0;
    let mut contraction: f64 = 0.0;
    for k in 1..=8 {
        let r = p.radius() * k as f64 / 8.0;
        let a = p.gauge.a_theta(r);
        let m = m_coefficient(|xi, tau| c_minus2(0.0, a, xi, tau, cx(0.0), p.alpha), ANGULAR_NODES)?;
        c2_mean_norm = c2_mean_norm.max(m.norm());
        contraction = contraction.max((&gt.scale_re(a) * &m).trace().norm());
    }
    let mut d_theta = cx(0.0);
    let mut d_tr = cx(0.0);
    for xi in [1.0, -1.0] {
        let tg = integrate_adaptive(
            |t| d_tilde_minus1(0.0, t, t, xi, cx(0.0), p.w).map(|d| (&gt * &d).trace()).unwrap_or(cx(f64::NAN)),
            0.0,
            f64::INFINITY,
            1e-13,
        )?;
        let tt = integrate_adaptive(
            |t| d_tilde_minus1(0.0, t, t, xi, cx(0.0), p.w).map(|d| d.trace()).unwrap_or(cx(f64::NAN)),
            0.0,
            f64::INFINITY,
            1e-13,
        )?;
        d_theta += tg.value;
        d_tr += tt.value;
    }
    contraction = contraction.max((d_theta * p.gauge.a_theta(p.radius())).norm());
    Ok(ResidueReport { angular_moment, c2_mean_norm, d_trace_gamma_theta: d_theta, d_trace: d_tr, contraction })
}
