use crate::error::{Error, Result};

/// Radial profile `φ(r)` of the gauge potential `A_μ = ε_{μν}∂_νφ`.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeProfile {
    /// `φ₀(1 − r²/R²)`.
    Poly2 { phi0: f64 },
    /// `φ₀ exp(−r²/s²)`.
    Gaussian { phi0: f64, width: f64 },
    /// `Σ_k c_k r^k`.
    Polynomial { coeffs: Vec<f64> },
}

/// A rotationally symmetric gauge field on the disk of radius `radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField {
    pub profile: GaugeProfile,
    pub radius: f64,
}

impl GaugeField {
    pub fn new(profile: GaugeProfile, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Argument(format!("disk radius must be positive, got {radius}")));
        }
        let finite = match &profile {
            GaugeProfile::Poly2 { phi0 } => phi0.is_finite(),
            GaugeProfile::Gaussian { phi0, width } => {
                if !(*width > 0.0) {
                    return Err(Error::Argument("gaussian width must be positive".into()));
                }
                phi0.is_finite() && width.is_finite()
            }
            GaugeProfile::Polynomial { coeffs } => coeffs.iter().all(|c| c.is_finite()),
        };
        if !finite {
            return Err(Error::Argument("profile parameters must be finite".into()));
        }
        Ok(GaugeField { profile, radius })
    }

    /// No gauge field at all.
    pub fn zero(radius: f64) -> Result<Self> {
        Self::new(GaugeProfile::Polynomial { coeffs: vec![] }, radius)
    }

    pub fn phi(&self, r: f64) -> f64 {
        match &self.profile {
            GaugeProfile::Poly2 { phi0 } => phi0 * (1.0 - r * r / (self.radius * self.radius)),
            GaugeProfile::Gaussian { phi0, width } => phi0 * (-(r * r) / (width * width)).exp(),
            GaugeProfile::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c),
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        match &self.profile {
            GaugeProfile::Poly2 { phi0 } => -2.0 * phi0 * r / (self.radius * self.radius),
            GaugeProfile::Gaussian { phi0, width } => {
                let s2 = width * width;
                -2.0 * r / s2 * phi0 * (-(r * r) / s2).exp()
            }
            GaugeProfile::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * r + k as f64 * c),
        }
    }

    /// Angular component `A_θ(r) = −φ′(r)`; the radial component vanishes.
    pub fn a_theta(&self, r: f64) -> f64 {
        -self.dphi(r)
    }

    /// Cartesian components `(A₀, A₁)` at `(x₀, x₁)`.
    pub fn cartesian(&self, x: [f64; 2]) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let a = self.a_theta(r);
        [-a * x[1] / r, a * x[0] / r]
    }

    /// The same field with `φ` multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let profile = match &self.profile {
            GaugeProfile::Poly2 { phi0 } => GaugeProfile::Poly2 { phi0: phi0 * s },
            GaugeProfile::Gaussian { phi0, width } => GaugeProfile::Gaussian { phi0: phi0 * s, width: *width },
            GaugeProfile::Polynomial { coeffs } => {
                GaugeProfile::Polynomial { coeffs: coeffs.iter().map(|c| c * s).collect() }
            }
        };
        GaugeField { profile, radius: self.radius }
    }

    /// Whether `φ` is constant, so that the field is pure gauge.
    pub fn is_trivial(&self) -> bool {
        match &self.profile {
            GaugeProfile::Poly2 { phi0 } | GaugeProfile::Gaussian { phi0, .. } => *phi0 == 0.0,
            GaugeProfile::Polynomial { coeffs } => coeffs.iter().skip(1).all(|c| *c == 0.0),
        }
    }
}
