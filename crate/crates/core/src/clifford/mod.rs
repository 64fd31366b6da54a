//! Gamma-matrix representations in two and four dimensions and the polar
//! frame used on the disk.

mod matrix;

pub use matrix::{ComplexMatrix, RANK_FLOOR, RANK_THRESHOLD};

use crate::error::{Error, Result};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn sigma1() -> ComplexMatrix {
    ComplexMatrix::m2(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> ComplexMatrix {
    ComplexMatrix::m2(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> ComplexMatrix {
    ComplexMatrix::m2(ONE, ZERO, ZERO, -ONE)
}

/// A concrete set of Euclidean gamma matrices.
#[derive(Debug, Clone)]
pub struct GammaRep {
    pub nu: usize,
    pub k: usize,
    pub gammas: Vec<ComplexMatrix>,
    pub gamma5: Option<ComplexMatrix>,
}

impl GammaRep {
    /// `Σ_μ p_μ γ_μ`.
    pub fn slash(&self, p: &[f64]) -> Result<ComplexMatrix> {
        if p.len() != self.nu {
            return Err(Error::Argument(format!("expected a {}-vector, got {}", self.nu, p.len())));
        }
        let mut out = ComplexMatrix::zeros(self.k, self.k);
        for (g, &c) in self.gammas.iter().zip(p) {
            out = &out + &g.scale_re(c);
        }
        Ok(out)
    }

    /// Largest entrywise deviation of `{γ_μ, γ_α} − 2δ_{μα}Id` over all pairs.
    pub fn clifford_defect(&self) -> f64 {
        let id = ComplexMatrix::identity(self.k);
        let mut worst: f64 = 0.0;
        for (m, gm) in self.gammas.iter().enumerate() {
            for (a, ga) in self.gammas.iter().enumerate() {
                let target = if m == a { id.scale_re(2.0) } else { ComplexMatrix::zeros(self.k, self.k) };
                worst = worst.max(gm.anticommutator(ga).distance(&target));
            }
        }
        worst
    }
}

/// Two-dimensional representation `γ₀ = σ₁`, `γ₁ = σ₂`, `γ₅ = σ₃`.
pub fn make_rep_2d() -> GammaRep {
    GammaRep { nu: 2, k: 2, gammas: vec![sigma1(), sigma2()], gamma5: Some(sigma3()) }
}

/// Four-dimensional boundary representation with `γ_n = i[[0, I], [−I, 0]]`
/// first and `γ_j = [[0, σ_j], [σ_j, 0]]`, `j = 1, 2, 3` after it. The
/// chirality matrix is `−γ_n γ₁ γ₂ γ₃ = diag(I, −I)`.
pub fn make_rep_4d_boundary() -> GammaRep {
    let z = ComplexMatrix::zeros(2, 2);
    let id = ComplexMatrix::identity(2);
    let gn = ComplexMatrix::blocks(&z, &id, &(-&id), &z).scale(I);
    let mut gammas = vec![gn];
    for s in [sigma1(), sigma2(), sigma3()] {
        gammas.push(ComplexMatrix::blocks(&z, &s, &s, &z));
    }
    let g5 = -&(&(&gammas[0] * &gammas[1]) * &(&gammas[2] * &gammas[3]));
    GammaRep { nu: 4, k: 4, gammas, gamma5: Some(g5) }
}

/// `(γ_r, γ_θ)` at polar angle `θ` for the two-dimensional representation.
pub fn polar_gammas(theta: f64) -> (ComplexMatrix, ComplexMatrix) {
    let e = Complex64::from_polar(1.0, theta);
    let em = e.conj();
    let gr = ComplexMatrix::m2(ZERO, em, e, ZERO);
    let gt = ComplexMatrix::m2(ZERO, -I * em, I * e, ZERO);
    (gr, gt)
}

/// Polar frame at a boundary point of the disk. The inward normal coordinate
/// is `t = R − r`, so `γ_t = −γ_r`.
#[derive(Debug, Clone)]
pub struct PolarFrame {
    pub theta: f64,
    pub gamma_r: ComplexMatrix,
    pub gamma_theta: ComplexMatrix,
    pub gamma_t: ComplexMatrix,
    pub gamma5: ComplexMatrix,
}

impl PolarFrame {
    pub fn new(theta: f64) -> Self {
        let (gamma_r, gamma_theta) = polar_gammas(theta);
        let gamma_t = -&gamma_r;
        PolarFrame { theta, gamma_r, gamma_theta, gamma_t, gamma5: sigma3() }
    }

    /// `ξ γ_θ + τ γ_t`.
    pub fn slash(&self, xi: Complex64, tau: Complex64) -> ComplexMatrix {
        &self.gamma_theta.scale(xi) + &self.gamma_t.scale(tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn two_dimensional_matrices() {
        let rep = make_rep_2d();
        assert_eq!(rep.gammas[0], ComplexMatrix::m2(ZERO, ONE, ONE, ZERO));
        assert_eq!(rep.gamma5.clone().unwrap(), ComplexMatrix::diag(&[ONE, -ONE]));
        let ac = rep.gammas[0].anticommutator(&rep.gammas[1]);
        assert!(ac.approx_eq(&ComplexMatrix::zeros(2, 2), 0.0));
        assert!(rep.clifford_defect() < 1e-14);
    }

    #[test]
    fn gamma5_is_product_of_generators() {
        let rep = make_rep_2d();
        let prod = (&rep.gammas[0] * &rep.gammas[1]).scale(-I);
        assert_eq!(prod, rep.gamma5.unwrap());
    }

    #[test]
    fn two_dimensional_product_rule() {
        let rep = make_rep_2d();
        let g5 = rep.gamma5.clone().unwrap();
        let eps = [[0.0, 1.0], [-1.0, 0.0]];
        for m in 0..2 {
            for n in 0..2 {
                let delta = if m == n { 1.0 } else { 0.0 };
                let expected = &ComplexMatrix::identity(2).scale_re(delta) + &g5.scale(I * eps[m][n]);
                assert!((&rep.gammas[m] * &rep.gammas[n]).approx_eq(&expected, 1e-15));
            }
        }
    }

    #[test]
    fn four_dimensional_matrices() {
        let rep = make_rep_4d_boundary();
        let gn = &rep.gammas[0];
        // γ_n squares to +Id₄, as the Clifford relation requires.
        assert!((gn * gn).approx_eq(&ComplexMatrix::identity(4), 1e-15));
        assert!(rep.clifford_defect() < 1e-14);
        for g in &rep.gammas[1..] {
            assert!(g.trace().norm() < 1e-15);
        }
        let g5 = rep.gamma5.unwrap();
        assert!(g5.approx_eq(&ComplexMatrix::diag(&[ONE, ONE, -ONE, -ONE]), 1e-15));
    }

    #[test]
    fn polar_frame_alignment() {
        let rep = make_rep_2d();
        let (gr, gt) = polar_gammas(0.0);
        assert!(gr.approx_eq(&rep.gammas[0], 1e-15));
        assert!(gt.approx_eq(&rep.gammas[1], 1e-15));
        let (gr, _) = polar_gammas(PI / 2.0);
        assert!(gr.approx_eq(&ComplexMatrix::m2(ZERO, -I, I, ZERO), 1e-15));
        assert!(gr.approx_eq(&rep.gammas[1], 1e-15));
    }

    #[test]
    fn polar_frame_chirality() {
        let f = PolarFrame::new(0.7);
        let lhs = &f.gamma_r * &f.gamma_theta;
        assert!(lhs.approx_eq(&f.gamma5.scale(I), 1e-15));
        assert!(f.gamma_t.approx_eq(&(-&f.gamma_r), 0.0));
    }

    #[test]
    fn slash_rejects_wrong_length() {
        assert!(make_rep_2d().slash(&[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn polar_gammas_anticommute(theta in -10.0f64..10.0) {
            let (gr, gt) = polar_gammas(theta);
            let id = ComplexMatrix::identity(2);
            prop_assert!(gr.anticommutator(&gt).max_abs() < 1e-14);
            prop_assert!((&gr * &gr).approx_eq(&id, 1e-14));
            prop_assert!((&gt * &gt).approx_eq(&id, 1e-14));
            prop_assert!(gr.approx_eq(&gr.adjoint(), 1e-15));
            prop_assert!(gt.approx_eq(&gt.adjoint(), 1e-15));
        }
    }
}
