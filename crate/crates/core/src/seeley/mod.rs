//! Resolvent symbol coefficients for the Dirac operator on the disk.
//!
//! Interior coefficients `c₋₁`, `c₋₂` live in the polar frame at a boundary
//! point, with `ξ` tangential and `τ` conjugate to the inward normal
//! coordinate `t`. Boundary coefficients `d₋₁`, `d̃₋₁` enforce the bag
//! condition `(1, w e^{−iθ})ψ = 0` and decay as `t → ∞`.

mod gauge;

pub use gauge::{GaugeField, GaugeProfile};

use crate::clifford::{make_rep_2d, ComplexMatrix, PolarFrame};
use crate::error::{Error, Result};
use crate::quadrature::{
    bessel_j_frac, bessel_j_frac_tail, circle_mean, contour_closed, digamma, integrate_adaptive,
    integrate_oscillatory_tail, QuadratureResult, EULER_GAMMA,
};
use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::cell::RefCell;
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Arguments of a symbol: boundary angle, normal distance, tangential and
/// normal covector components, spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolPoint {
    pub theta: f64,
    pub t: f64,
    pub xi: f64,
    pub tau: f64,
    pub lambda: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// Homogeneous in `(ξ, τ, λ)`.
    InteriorC,
    /// Homogeneous in `(1/t, ξ, τ, λ)`.
    BoundaryD,
}

type SymbolEval = Arc<dyn Fn(&SymbolPoint) -> Result<ComplexMatrix> + Send + Sync>;

/// A matrix-valued symbol with declared homogeneity degree.
#[derive(Clone)]
pub struct SymbolFn {
    pub degree: i32,
    pub kind: SymbolKind,
    eval: SymbolEval,
}

impl SymbolFn {
    pub fn new<F>(degree: i32, kind: SymbolKind, f: F) -> Self
    where
        F: Fn(&SymbolPoint) -> Result<ComplexMatrix> + Send + Sync + 'static,
    {
        SymbolFn { degree, kind, eval: Arc::new(f) }
    }

    pub fn eval(&self, p: &SymbolPoint) -> Result<ComplexMatrix> {
        (self.eval)(p)
    }

    /// Relative deviation from `σ(s·p) = s^degree σ(p)`, where `s·p` scales
    /// `(ξ, τ, λ)` by `s` and, for boundary symbols, `t` by `1/s`.
    pub fn homogeneity_defect(&self, p: &SymbolPoint, s: f64) -> Result<f64> {
        let q = SymbolPoint {
            xi: s * p.xi,
            tau: s * p.tau,
            lambda: p.lambda * s,
            t: if self.kind == SymbolKind::BoundaryD { p.t / s } else { p.t },
            ..*p
        };
        let base = self.eval(p)?;
        let scaled = self.eval(&q)?;
        let expected = base.scale_re(s.powi(self.degree));
        Ok(scaled.distance(&expected) / base.max_abs().max(f64::MIN_POSITIVE))
    }
}

impl std::fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolFn").field("degree", &self.degree).field("kind", &self.kind).finish()
    }
}

/// Principal symbol `a₁ = −ξ̸ − λ` of `D − λ` on the disk, with
/// `ξ̸ = ξγ_θ + τγ_t`.
pub fn disk_a1() -> SymbolFn {
    SymbolFn::new(1, SymbolKind::InteriorC, |p| {
        let f = PolarFrame::new(p.theta);
        Ok(&(-&f.slash(cx(p.xi), cx(p.tau))) - &ComplexMatrix::identity(2).scale(p.lambda))
    })
}

pub fn c_minus1_symbol() -> SymbolFn {
    SymbolFn::new(-1, SymbolKind::InteriorC, |p| c_minus1(p.theta, p.xi, p.tau, p.lambda))
}

pub fn c_minus2_symbol(a_theta: f64, alpha: f64) -> SymbolFn {
    SymbolFn::new(-2, SymbolKind::InteriorC, move |p| c_minus2(p.theta, a_theta, p.xi, p.tau, p.lambda, alpha))
}

pub fn d_minus1_symbol(w: Complex64) -> SymbolFn {
    SymbolFn::new(-1, SymbolKind::BoundaryD, move |p| d_minus1(p.theta, p.t, p.xi, p.tau, p.lambda, w))
}

fn check_denominator(den: Complex64, scale: f64, what: &str) -> Result<()> {
    if den.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) || den.norm() == 0.0 {
        return Err(Error::Singular(format!("{what}: λ² = ξ² + τ²")));
    }
    Ok(())
}

fn c_minus1_complex(f: &PolarFrame, xi: f64, tau: Complex64, lambda: Complex64) -> Result<ComplexMatrix> {
    let den = lambda * lambda - xi * xi - tau * tau;
    check_denominator(den, lambda.norm_sqr() + xi * xi + tau.norm_sqr(), "c₋₁")?;
    let num = &f.slash(cx(xi), tau) - &ComplexMatrix::identity(2).scale(lambda);
    Ok(num.scale(den.inv()))
}

/// Leading resolvent coefficient `c₋₁ = (ξ̸ − λ)/(λ² − ξ² − τ²) = a₁⁻¹`.
pub fn c_minus1(theta: f64, xi: f64, tau: f64, lambda: Complex64) -> Result<ComplexMatrix> {
    c_minus1_complex(&PolarFrame::new(theta), xi, cx(tau), lambda)
}

/// Subleading coefficient for the perturbation `a₀ = αA̸` with `A̸ = A_θγ_θ`:
///
/// `c₋₂ = α/(λ² − k²)² · (2λ(k·A) − (λ² − k²)A̸ − 2(k·A)k̸)`, `k² = ξ² + τ²`,
/// `k·A = ξA_θ`.
pub fn c_minus2(theta: f64, a_theta: f64, xi: f64, tau: f64, lambda: Complex64, alpha: f64) -> Result<ComplexMatrix> {
    let f = PolarFrame::new(theta);
    let k2 = xi * xi + tau * tau;
    let den = lambda * lambda - k2;
    check_denominator(den, lambda.norm_sqr() + k2, "c₋₂")?;
    let ka = xi * a_theta;
    let aslash = f.gamma_theta.scale_re(a_theta);
    let kslash = f.slash(cx(xi), cx(tau));
    let id = ComplexMatrix::identity(2);
    let num = &(&id.scale(lambda * 2.0 * ka) - &aslash.scale(den)) - &kslash.scale_re(2.0 * ka);
    Ok(num.scale(cx(alpha) / (den * den)))
}

/// Principal square root `√(ξ² − λ²)`, required to have positive real part.
pub fn decay_root(xi: f64, lambda: Complex64) -> Result<Complex64> {
    let z = cx(xi * xi) - lambda * lambda;
    if z.norm() == 0.0 {
        return Err(Error::Singular("ξ² = λ²".into()));
    }
    let s = z.sqrt();
    if !(s.re > 0.0) {
        return Err(Error::Branch(format!("√(ξ² − λ²) = {s} does not decay")));
    }
    Ok(s)
}

/// `ξ + √(ξ² − λ²)` without cancellation for negative `ξ`.
fn xi_plus_root(xi: f64, s: Complex64, lambda: Complex64) -> Complex64 {
    if xi < 0.0 {
        -(lambda * lambda) / (s - xi)
    } else {
        s + xi
    }
}

fn d_minus1_complex(
    theta: f64,
    t: f64,
    xi: f64,
    tau: Complex64,
    lambda: Complex64,
    w: Complex64,
) -> Result<ComplexMatrix> {
    let s = decay_root(xi, lambda)?;
    let k2 = tau * tau + xi * xi;
    let den1 = k2 - lambda * lambda;
    check_denominator(den1, lambda.norm_sqr() + xi * xi + tau.norm_sqr(), "d₋₁")?;
    let e = Complex64::from_polar(1.0, theta);
    let decay = (-s * t).exp();
    if lambda == cx(0.0) && xi < 0.0 {
        let m = ComplexMatrix::m2(cx(0.0), cx(0.0), -e * (I * xi - tau), (I * xi + tau) / w);
        return Ok(m.scale(decay / k2));
    }
    let p = xi_plus_root(xi, s, lambda);
    let den2 = w * lambda + I * p;
    if den2.norm() <= 1e-14 * (w.norm() * lambda.norm() + xi.abs() + s.norm()) {
        return Err(Error::NonElliptic(format!("wλ + iξ + i√(ξ² − λ²) vanishes at ξ = {xi}, λ = {lambda}")));
    }
    let l1 = lambda - w * (I * xi - tau);
    let l2 = w * lambda + I * xi + tau;
    let m = ComplexMatrix::m2(I * p * l1, I * e.conj() * p * l2, lambda * e * l1, lambda * l2);
    Ok(m.scale(decay / (den1 * den2)))
}

/// Boundary coefficient `d₋₁(θ, t; ξ, τ; λ)` for the bag condition with
/// parameter `w`. It solves `(−λ − ξγ_θ + iγ_t∂_t)d₋₁ = 0`, matches
/// `b₀d₋₁ = b₀c₋₁` at `t = 0` and decays like `e^{−t√(ξ² − λ²)}`.
pub fn d_minus1(theta: f64, t: f64, xi: f64, tau: f64, lambda: Complex64, w: Complex64) -> Result<ComplexMatrix> {
    if t < 0.0 {
        return Err(Error::Domain(format!("normal distance must be non-negative, got {t}")));
    }
    d_minus1_complex(theta, t, xi, cx(tau), lambda, w)
}

/// Fourier-transformed boundary coefficient `d̃₋₁(θ, t, u; ξ; λ)`,
/// proportional to `e^{−(u+t)√(ξ² − λ²)}`. At `λ = 0`, `ξ < 0` the closed form
/// is replaced by its limit `diag(0, −2πi e^{−(u+t)|ξ|}/w)`.
pub fn d_tilde_minus1(theta: f64, t: f64, u: f64, xi: f64, lambda: Complex64, w: Complex64) -> Result<ComplexMatrix> {
    if t < 0.0 || u < 0.0 {
        return Err(Error::Domain("t and u must be non-negative".into()));
    }
    let s = decay_root(xi, lambda)?;
    let decay = (-s * (u + t)).exp();
    if lambda == cx(0.0) && xi < 0.0 {
        return Ok(ComplexMatrix::diag(&[cx(0.0), -2.0 * PI * I * decay / w]));
    }
    let p = xi_plus_root(xi, s, lambda);
    let den = I * w * lambda - p;
    if den.norm() <= 1e-14 * (w.norm() * lambda.norm() + xi.abs() + s.norm()) {
        return Err(Error::NonElliptic(format!("iwλ − ξ − √(ξ² − λ²) vanishes at ξ = {xi}, λ = {lambda}")));
    }
    let e = Complex64::from_polar(1.0, theta);
    let q = I * w * lambda - xi + s;
    let r = I * lambda + w * p;
    let m = ComplexMatrix::m2(p * r, e.conj() * p * q, -I * lambda * e * r, -I * lambda * q);
    Ok(m.scale(PI * I * decay / (s * den)))
}

/// `−∮ e^{−iτu} d(τ) dτ` counterclockwise around `pole` on a circle of
/// the given radius, by the trapezoid rule.
pub fn tilde_transform<F>(d: F, u: f64, pole: Complex64, radius: f64, nodes: usize) -> Result<ComplexMatrix>
where
    F: Fn(Complex64) -> Result<ComplexMatrix>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let v = contour_closed(
        |tau| match d(tau) {
            Ok(m) => m.scale((-I * tau * u).exp()),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                ComplexMatrix::zeros(2, 2)
            }
        },
        pole,
        radius,
        1,
        nodes,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(-&v)
}

/// `d̃₋₁` obtained from `d₋₁` by the τ-contour transform around the pole
/// `τ = −i√(ξ² − λ²)`, where `e^{−iτu}` decays.
pub fn d_tilde_minus1_by_contour(
    theta: f64,
    t: f64,
    u: f64,
    xi: f64,
    lambda: Complex64,
    w: Complex64,
    nodes: usize,
) -> Result<ComplexMatrix> {
    let s = decay_root(xi, lambda)?;
    let pole = -I * s;
    let radius = 0.5 * s.re;
    tilde_transform(|tau| d_minus1_complex(theta, t, xi, tau, lambda, w), u, pole, radius, nodes)
}

type LocalEval = Arc<dyn Fn([f64; 2], [f64; 2], Complex64) -> ComplexMatrix + Send + Sync>;

/// A symbol in Cartesian coordinates `(x; k; λ)`, graded by degree.
#[derive(Clone)]
pub struct LocalSymbol {
    pub degree: i32,
    eval: LocalEval,
}

impl LocalSymbol {
    pub fn new<F>(degree: i32, f: F) -> Self
    where
        F: Fn([f64; 2], [f64; 2], Complex64) -> ComplexMatrix + Send + Sync + 'static,
    {
        LocalSymbol { degree, eval: Arc::new(f) }
    }

    pub fn eval(&self, x: [f64; 2], k: [f64; 2], lambda: Complex64) -> ComplexMatrix {
        (self.eval)(x, k, lambda)
    }
}

/// Sample point for [`compose_symbols_check`].
#[derive(Debug, Clone, Copy)]
pub struct LocalSample {
    pub x: [f64; 2],
    pub k: [f64; 2],
    pub lambda: Complex64,
}

fn central_diff<F: Fn(f64) -> ComplexMatrix>(f: F, h: f64) -> ComplexMatrix {
    let d = &(&f(-2.0 * h) - &f(2.0 * h)) + &(&f(h) - &f(-h)).scale_re(8.0);
    d.scale_re(1.0 / (12.0 * h))
}

/// Residual of the symbol composition `(Σ a) ∘ (Σ c) = Id` at the given
/// order, maximised over `samples`. Uses
/// `σ(a ∘ c) = Σ_{|β| ≤ 1} ∂_k^β a · (−i∂_x)^β c`, which is exact for first
/// order differential operators. Derivatives are fourth-order central
/// differences.
pub fn compose_symbols_check(a_list: &[LocalSymbol], c_list: &[LocalSymbol], order: i32, samples: &[LocalSample]) -> f64 {
    let mut worst: f64 = 0.0;
    for s in samples {
        let mut acc = ComplexMatrix::zeros(2, 2);
        if order == 0 {
            acc = -&ComplexMatrix::identity(2);
        }
        for a in a_list {
            for c in c_list {
                if a.degree + c.degree == order {
                    acc = &acc + &(&a.eval(s.x, s.k, s.lambda) * &c.eval(s.x, s.k, s.lambda));
                }
                if a.degree + c.degree - 1 == order {
                    for mu in 0..2 {
                        let hk = 1e-3 * (1.0 + s.k[mu].abs());
                        let hx = 1e-3 * (1.0 + s.x[mu].abs());
                        let da = central_diff(
                            |h| {
                                let mut k = s.k;
                                k[mu] += h;
                                a.eval(s.x, k, s.lambda)
                            },
                            hk,
                        );
                        let dc = central_diff(
                            |h| {
                                let mut x = s.x;
                                x[mu] += h;
                                c.eval(x, s.k, s.lambda)
                            },
                            hx,
                        );
                        acc = &acc + &(&da * &dc).scale(-I);
                    }
                }
            }
        }
        worst = worst.max(acc.max_abs());
    }
    worst
}

/// Cartesian symbols of `D_α − λ` on the disk and of its parametrix:
/// `a = [a₁, a₀]` with `a₁ = −k̸ − λ`, `a₀ = αA̸(x)`, and `c = [c₋₁, c₋₂]`.
pub fn disk_local_symbols(gauge: &GaugeField, alpha: f64) -> (Vec<LocalSymbol>, Vec<LocalSymbol>) {
    let rep = Arc::new(make_rep_2d());
    let slash = {
        let rep = rep.clone();
        move |k: [f64; 2]| rep.slash(&k).expect("two components")
    };
    let id = ComplexMatrix::identity(2);
    let a1 = {
        let (slash, id) = (slash.clone(), id.clone());
        LocalSymbol::new(1, move |_x, k, l| &(-&slash(k)) - &id.scale(l))
    };
    let a0 = {
        let (slash, g) = (slash.clone(), gauge.clone());
        LocalSymbol::new(0, move |x, _k, _l| slash(g.cartesian(x)).scale_re(alpha))
    };
    let c1 = {
        let (slash, id) = (slash.clone(), id.clone());
        LocalSymbol::new(-1, move |_x, k, l| {
            let den = l * l - (k[0] * k[0] + k[1] * k[1]);
            (&slash(k) - &id.scale(l)).scale(den.inv())
        })
    };
    let c2 = {
        let (slash, g) = (slash, gauge.clone());
        LocalSymbol::new(-2, move |x, k, l| {
            let a = g.cartesian(x);
            let den = l * l - (k[0] * k[0] + k[1] * k[1]);
            let ka = k[0] * a[0] + k[1] * a[1];
            let num = &(&id.scale(l * 2.0 * ka) - &slash(a).scale(den)) - &slash(k).scale_re(2.0 * ka);
            num.scale(cx(alpha) / (den * den))
        })
    };
    (vec![a1, a0], vec![c1, c2])
}

/// `K_ν = ln 2 − γ/2 + ψ(ν/2)/2`.
pub fn k_nu(nu: u32) -> f64 {
    LN_2 - 0.5 * EULER_GAMMA + 0.5 * digamma(0.5 * nu as f64)
}

/// `K_ν` from its Bessel-integral representation,
///
/// `2^{ν/2−1}Γ(ν/2) [∫₀¹ ρ^{−ν/2}(J_{ν/2−1}(ρ) − ρ^{ν/2−1}/(2^{ν/2−1}Γ(ν/2))) dρ
///                  + ∫₁^∞ ρ^{−ν/2} J_{ν/2−1}(ρ) dρ]`,
///
/// the constant term of `(2π)^{−ν/2}∫_{|z|}^∞ ρ^{−ν/2}J_{ν/2−1}(ρ) dρ` as
/// `|z| → 0`, in units of `Ω_ν/(2π)^ν`.
pub fn k_nu_bessel_quadrature(nu: u32) -> Result<QuadratureResult> {
    if nu < 2 {
        return Err(Error::Argument(format!("K_ν needs ν ≥ 2, got {nu}")));
    }
    let h = 0.5 * nu as f64;
    let order = h - 1.0;
    let head = integrate_adaptive(|r| cx(r.powf(-h) * bessel_j_frac_tail(order, r)), 0.0, 1.0, 1e-14)?;
    let tail = integrate_oscillatory_tail(|r| cx(r.powf(-h) * bessel_j_frac(order, r)), 1.0, PI, 1e-12)?;
    let norm = 2f64.powf(order) * gamma(h);
    Ok(QuadratureResult {
        value: (head.value + tail.value) * norm,
        abs_error_estimate: (head.abs_error_estimate + tail.abs_error_estimate) * norm,
        nodes_used: head.nodes_used + tail.nodes_used,
    })
}

/// Mean of a symbol over the unit `(ξ, τ)` circle, `(1/Ω₂)∫ c dσ`, with an
/// `n`-point trapezoid rule.
pub fn m_coefficient<F>(c: F, n: usize) -> Result<ComplexMatrix>
where
    F: Fn(f64, f64) -> Result<ComplexMatrix>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let m = circle_mean(
        |phi| match c(phi.cos(), phi.sin()) {
            Ok(m) => m,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                ComplexMatrix::zeros(2, 2)
            }
        },
        n,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(m),
    }
}
