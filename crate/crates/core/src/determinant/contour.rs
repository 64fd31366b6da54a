use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive_with, AdaptiveOptions, QuadratureResult};
use num_complex::Complex64;
use serde::Serialize;
use std::cell::RefCell;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Keyhole contour around the positive imaginary axis.
///
/// The path comes down the right lip `λ = iμ` (`arg λ = π/2`) from `μ = ∞`
/// to `μ = ρ₀`, turns clockwise around the origin on `|λ| = ρ₀` and goes back
/// up the left lip (`arg λ = −3π/2`). `ln λ` is taken on the branch with
/// `arg λ ∈ [−3π/2, π/2]`, whose cut is the positive imaginary axis, so the
/// path never crosses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub detour_radius: f64,
    pub tol: f64,
}

impl ContourSpec {
    pub fn keyhole(detour_radius: f64, tol: f64) -> Result<Self> {
        if !(detour_radius > 0.0 && detour_radius.is_finite()) {
            return Err(Error::Contour(format!("detour radius must be positive, got {detour_radius}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Argument("contour tolerance must be positive".into()));
        }
        Ok(ContourSpec { detour_radius, tol })
    }

    /// Keyhole suited to the boundary integrand with parameter `w`: the
    /// detour stays inside both `|λ| = 1` and `|λ| = |2w/(1 − w²)|`.
    pub fn for_boundary(w: Complex64) -> Result<Self> {
        if w.norm() == 0.0 {
            return Err(Error::Domain("w = 0".into()));
        }
        let u = (Complex64::new(1.0, 0.0) - w * w) / (2.0 * w);
        let pole = if u.norm() == 0.0 { f64::INFINITY } else { 1.0 / u.norm() };
        ContourSpec::keyhole(0.5 * pole.min(1.0), 1e-11)
    }

    /// Distance from `z` to the path.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let circle = (z.norm() - self.detour_radius).abs();
        let ray = if z.im >= self.detour_radius { z.re.abs() } else { (z - I * self.detour_radius).norm() };
        circle.min(ray)
    }

    /// Fails when a singular point of the integrand sits within `margin` of
    /// the path.
    pub fn validate(&self, singular_points: &[Complex64], margin: f64) -> Result<()> {
        for &z in singular_points {
            if self.distance_to(z) <= margin {
                return Err(Error::Contour(format!(
                    "singular point {z} within {margin} of the contour (ρ₀ = {})",
                    self.detour_radius
                )));
            }
        }
        Ok(())
    }

    /// `∮_Γ f(λ, ln λ) dλ`.
    pub fn integrate<F>(&self, f: F) -> Result<QuadratureResult>
    where
        F: Fn(Complex64, Complex64) -> Result<Complex64>,
    {
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let guarded = |l: Complex64, ln: Complex64| match f(l, ln) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        };
        let rho = self.detour_radius;
        let opts = AdaptiveOptions { abs_tol: self.tol, rel_tol: 0.0, max_nodes: 2_000_000 };
        // Both lips share λ = iμ, dλ = i dμ; the right lip runs downwards.
        let lips = integrate_adaptive_with(
            |mu| {
                let l = I * mu;
                let lm = mu.ln();
                I * (guarded(l, Complex64::new(lm, -1.5 * PI)) - guarded(l, Complex64::new(lm, 0.5 * PI)))
            },
            rho,
            f64::INFINITY,
            &opts,
        );
        let circle = integrate_adaptive_with(
            |psi| {
                let l = Complex64::from_polar(rho, psi);
                -guarded(l, Complex64::new(rho.ln(), psi)) * I * l
            },
            -1.5 * PI,
            0.5 * PI,
            &opts,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let (lips, circle) = (lips?, circle?);
        Ok(QuadratureResult {
            value: lips.value + circle.value,
            abs_error_estimate: lips.abs_error_estimate + circle.abs_error_estimate,
            nodes_used: lips.nodes_used + circle.nodes_used,
        })
    }
}
