//! Green functions of `D_α = i∂̸ + αA̸` on the disk under the bag-type
//! condition `(1, w e^{−iθ})ψ|_{r=R} = 0`, built by the method of images.

use crate::clifford::{make_rep_2d, polar_gammas, sigma3, ComplexMatrix};
use crate::error::{Error, Result};
use crate::seeley::GaugeField;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The boundary problem `(D_α)_B` on the disk of radius `gauge.radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskProblem {
    pub gauge: GaugeField,
    pub w: Complex64,
    pub alpha: f64,
}

impl DiskProblem {
    pub fn new(gauge: GaugeField, w: Complex64, alpha: f64) -> Result<Self> {
        if w.norm() == 0.0 || !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::Domain("w = 0 does not define an elliptic boundary problem".into()));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Argument(format!("α must lie in [0, 1], got {alpha}")));
        }
        if !(gauge.radius > 0.0) {
            return Err(Error::Argument("disk radius must be positive".into()));
        }
        Ok(DiskProblem { gauge, w, alpha })
    }

    pub fn radius(&self) -> f64 {
        self.gauge.radius
    }

    /// The same problem at another coupling.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        DiskProblem::new(self.gauge.clone(), self.w, alpha)
    }

    /// Row `(1, w e^{−iθ})` of the boundary operator.
    pub fn boundary_row(&self, theta: f64) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[cx(1.0), self.w * Complex64::from_polar(1.0, -theta)]])
    }

    /// `e^{αγ₅φ(r)}`.
    fn chiral_factor(&self, r: f64, sign: f64) -> ComplexMatrix {
        let a = sign * self.alpha * self.gauge.phi(r);
        ComplexMatrix::diag(&[cx(a.exp()), cx((-a).exp())])
    }
}

/// A point of the plane in polar coordinates, `X = r e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePoint {
    pub r: f64,
    pub theta: f64,
}

impl PlanePoint {
    pub fn new(r: f64, theta: f64) -> Self {
        PlanePoint { r, theta }
    }

    pub fn from_cartesian(x: [f64; 2]) -> Self {
        PlanePoint { r: x[0].hypot(x[1]), theta: x[1].atan2(x[0]) }
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    pub fn cartesian(&self) -> [f64; 2] {
        [self.r * self.theta.cos(), self.r * self.theta.sin()]
    }
}

const DIAGONAL_GUARD: f64 = 1e-8;

/// Green function of `i∂̸` in the plane, `G₀ = (1/2πi)(x̸ − y̸)/|x − y|²`.
pub fn free_green(x: PlanePoint, y: PlanePoint) -> Result<ComplexMatrix> {
    let d = x.complex() - y.complex();
    let scale = x.r.max(y.r).max(1.0);
    if d.norm() < DIAGONAL_GUARD * scale {
        return Err(Error::Singular("free Green function at coincident points".into()));
    }
    let k = (2.0 * PI * I).inv();
    Ok(ComplexMatrix::m2(cx(0.0), k / d, k / d.conj(), cx(0.0)))
}

/// Bag-condition Green function `G_B(x, y)` of `D_α` on the disk.
pub fn disk_green(p: &DiskProblem, x: PlanePoint, y: PlanePoint) -> Result<ComplexMatrix> {
    let big_r = p.radius();
    check_points(big_r, x, y)?;
    let (xz, yz) = (x.complex(), y.complex());
    let image = xz * yz.conj() - big_r * big_r;
    if image.norm() < DIAGONAL_GUARD * big_r * big_r {
        return Err(Error::Singular("image singularity: both points on the boundary at the same angle".into()));
    }
    let g = &p.gauge;
    let (px, py, pr) = (g.phi(x.r), g.phi(y.r), g.phi(big_r));
    let a = p.alpha;
    let k = (2.0 * PI * I).inv();
    let d = xz - yz;
    let m = ComplexMatrix::m2(
        p.w * big_r * (a * (px + py - 2.0 * pr)).exp() / image,
        cx((a * (px - py)).exp()) / d,
        cx((-a * (px - py)).exp()) / d.conj(),
        cx(big_r * (-a * (px + py - 2.0 * pr)).exp()) / (p.w * image.conj()),
    );
    Ok(m.scale(k))
}

fn check_points(big_r: f64, x: PlanePoint, y: PlanePoint) -> Result<()> {
    let slack = big_r * (1.0 + 1e-12);
    if x.r > slack || y.r > slack || x.r < 0.0 || y.r < 0.0 {
        return Err(Error::Domain("points must lie in the closed disk".into()));
    }
    if (x.complex() - y.complex()).norm() < DIAGONAL_GUARD * big_r {
        return Err(Error::Singular("Green function at coincident points".into()));
    }
    Ok(())
}

/// `G_B` assembled as `e^{αγ₅φ(x)}[G₀(x, y) + G₀(x, ỹ)H(y)]e^{αγ₅φ(y)}` with
/// the image point `ỹ = yR²/ρ²` and
/// `H(y) = e^{2αγ₅φ(R)}(R/ρ)[(1 + w²) + (1 − w²)γ₅]/(2w) γ_ρ`.
pub fn disk_green_factorized(p: &DiskProblem, x: PlanePoint, y: PlanePoint) -> Result<ComplexMatrix> {
    let big_r = p.radius();
    check_points(big_r, x, y)?;
    if y.r == 0.0 {
        return Err(Error::Domain("the image construction needs y ≠ 0".into()));
    }
    let image = PlanePoint::new(big_r * big_r / y.r, y.theta);
    let w = p.w;
    let (g_rho, _) = polar_gammas(y.theta);
    let mix = &ComplexMatrix::identity(2).scale(cx(1.0) + w * w) + &sigma3().scale(cx(1.0) - w * w);
    let h = &(&p.chiral_factor(big_r, 2.0) * &mix.scale((2.0 * w).inv() * (big_r / y.r))) * &g_rho;
    let inner = &free_green(x, y)? + &(&free_green(x, image)? * &h);
    Ok(&(&p.chiral_factor(x.r, 1.0) * &inner) * &p.chiral_factor(y.r, 1.0))
}

/// Largest `‖(1, w e^{−iθ})G_B(R e^{iθ}, y)‖` over `samples = [(θ, y)]`.
pub fn boundary_residual(p: &DiskProblem, samples: &[(f64, PlanePoint)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(theta, y) in samples {
        let x = PlanePoint::new(p.radius(), theta);
        let g = disk_green(p, x, y)?;
        worst = worst.max((&p.boundary_row(theta) * &g).norm());
    }
    Ok(worst)
}

fn apply_dirac<F>(g: F, x: [f64; 2], h: f64, a: [f64; 2], alpha: f64) -> Result<ComplexMatrix>
where
    F: Fn([f64; 2]) -> Result<ComplexMatrix>,
{
    let rep = make_rep_2d();
    let mut out = &rep.slash(&a)?.scale_re(alpha) * &g(x)?;
    for mu in 0..2 {
        let at = |s: f64| {
            let mut z = x;
            z[mu] += s;
            g(z)
        };
        let d = &(&at(-2.0 * h)? - &at(2.0 * h)?) + &(&at(h)? - &at(-h)?).scale_re(8.0);
        out = &out + &(&rep.gammas[mu] * &d).scale(I / (12.0 * h));
    }
    Ok(out)
}

/// Fourth-order finite-difference residual `‖D_α G_B(·, y)‖` at `x`, step
/// `h = 10⁻⁴R`.
pub fn dirac_residual(p: &DiskProblem, x: PlanePoint, y: PlanePoint) -> Result<f64> {
    let h = 1e-4 * p.radius();
    if x.r + 2.0 * h > p.radius() {
        return Err(Error::Argument("stencil leaves the disk".into()));
    }
    if (x.complex() - y.complex()).norm() < 10.0 * h {
        return Err(Error::Argument("stencil too close to the diagonal".into()));
    }
    let a = p.gauge.cartesian(x.cartesian());
    let r = apply_dirac(|z| disk_green(p, PlanePoint::from_cartesian(z), y), x.cartesian(), h, a, p.alpha)?;
    Ok(r.max_abs())
}

/// Finite-difference residual `‖i∂̸ G₀(·, y)‖` at `x` with step `h`.
pub fn free_dirac_residual(x: PlanePoint, y: PlanePoint, h: f64) -> Result<f64> {
    let r = apply_dirac(|z| free_green(PlanePoint::from_cartesian(z), y), x.cartesian(), h, [0.0, 0.0], 0.0)?;
    Ok(r.max_abs())
}

/// `lim_{δ→0} δ·G_B((r, θ), (r, θ − δ))` by Richardson extrapolation.
/// The Green function behaves as `γ_θ/(2πi r(θ − φ))` near the diagonal.
pub fn singularity_coefficient(p: &DiskProblem, r: f64, theta: f64) -> Result<ComplexMatrix> {
    if !(r > 0.0 && r < p.radius()) {
        return Err(Error::Domain("need an interior point with r > 0".into()));
    }
    richardson_diagonal(|y| disk_green(p, PlanePoint::new(r, theta), y), r, theta)
}

/// Same limit for the free Green function.
pub fn free_singularity_coefficient(r: f64, theta: f64) -> Result<ComplexMatrix> {
    richardson_diagonal(|y| free_green(PlanePoint::new(r, theta), y), r, theta)
}

fn richardson_diagonal<F>(g: F, r: f64, theta: f64) -> Result<ComplexMatrix>
where
    F: Fn(PlanePoint) -> Result<ComplexMatrix>,
{
    const LEVELS: usize = 6;
    let d0 = 0.05;
    let mut hs = Vec::with_capacity(LEVELS);
    let mut table: Vec<ComplexMatrix> = Vec::with_capacity(LEVELS);
    for k in 0..LEVELS {
        let d = d0 / 2f64.powi(k as i32);
        hs.push(d);
        table.push(g(PlanePoint::new(r, theta - d))?.scale_re(d));
    }
    // Neville's scheme evaluated at δ = 0.
    for level in 1..LEVELS {
        for i in (level..LEVELS).rev() {
            let (hi, hj) = (hs[i], hs[i - level]);
            let num = &table[i].scale_re(hj) - &table[i - 1].scale_re(hi);
            table[i] = num.scale_re(1.0 / (hj - hi));
        }
    }
    Ok(table[LEVELS - 1].clone())
}

/// Deviation from `(1/r)γ_r G₀(x̃, y) = −G₀(x, ỹ)(1/ρ)γ_ρ` with `x̃ = xR²/r²`,
/// `ỹ = yR²/ρ²`.
pub fn inversion_identity_defect(x: PlanePoint, y: PlanePoint, radius: f64) -> Result<f64> {
    if x.r == 0.0 || y.r == 0.0 {
        return Err(Error::Domain("inversion needs non-zero points".into()));
    }
    let xt = PlanePoint::new(radius * radius / x.r, x.theta);
    let yt = PlanePoint::new(radius * radius / y.r, y.theta);
    let (gr, _) = polar_gammas(x.theta);
    let (grho, _) = polar_gammas(y.theta);
    let lhs = (&gr * &free_green(xt, y)?).scale_re(1.0 / x.r);
    let rhs = (&free_green(x, yt)? * &grho).scale_re(-1.0 / y.r);
    Ok(lhs.distance(&rhs))
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroModeEntry {
    /// Angular index of the upper component; the lower one carries `n + 1`.
    pub n: i32,
    pub a_normalizable: bool,
    pub b_normalizable: bool,
    pub a_forced_zero: bool,
    pub b_forced_zero: bool,
    pub nullity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroModeReport {
    pub modes: Vec<ZeroModeEntry>,
    pub kernel_dimension: usize,
}

/// `∫₀ r^{2p} r dr` converges at the origin.
fn normalizable_at_origin(power: i32) -> bool {
    2 * power + 2 > 0
}

/// Scans angular modes for normalizable zero modes. Each pair
/// `ψ = (a_n rⁿ e^{αφ} e^{inθ}, b_{n+1} r^{−n−1} e^{−αφ} e^{i(n+1)θ})` solves
/// `D_α ψ = 0`; the boundary row couples `a_n` and `b_{n+1}` and
/// normalizability at the origin removes the rest. The kernel dimension is
/// the total nullity of these 2×2 constraint systems.
pub fn zero_mode_scan(p: &DiskProblem, n_min: i32, n_max: i32) -> Result<ZeroModeReport> {
    if n_min > n_max {
        return Err(Error::Argument("empty mode range".into()));
    }
    let big_r = p.radius();
    let e = (p.alpha * p.gauge.phi(big_r)).exp();
    let mut modes = Vec::new();
    let mut kernel = 0;
    for n in n_min..=n_max {
        let a_ok = normalizable_at_origin(n);
        let b_ok = normalizable_at_origin(-(n + 1));
        let mut rows: Vec<Vec<Complex64>> = vec![vec![cx(big_r.powi(n) * e), p.w * big_r.powi(-(n + 1)) / e]];
        if !a_ok {
            rows.push(vec![cx(1.0), cx(0.0)]);
        }
        if !b_ok {
            rows.push(vec![cx(0.0), cx(1.0)]);
        }
        let m = ComplexMatrix::from_vec(rows.len(), 2, rows.concat())?;
        let rank = m.rank();
        let nullity = 2 - rank;
        // A coefficient is forced to zero when the kernel has no component
        // along it; with full rank both are.
        let (a_zero, b_zero) = if nullity == 0 {
            (true, true)
        } else {
            let probe_a = ComplexMatrix::from_vec(rows.len() + 1, 2, [rows.concat(), vec![cx(0.0), cx(1.0)]].concat())?;
            let probe_b = ComplexMatrix::from_vec(rows.len() + 1, 2, [rows.concat(), vec![cx(1.0), cx(0.0)]].concat())?;
            (probe_a.rank() == 2 && nullity == 1, probe_b.rank() == 2 && nullity == 1)
        };
        kernel += nullity;
        modes.push(ZeroModeEntry {
            n,
            a_normalizable: a_ok,
            b_normalizable: b_ok,
            a_forced_zero: a_zero,
            b_forced_zero: b_zero,
            nullity,
        });
    }
    Ok(ZeroModeReport { modes, kernel_dimension: kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeley::GaugeProfile;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn problem(w: Complex64, alpha: f64) -> DiskProblem {
        let g = GaugeField::new(GaugeProfile::Gaussian { phi0: 0.9, width: 0.6 }, 1.3).unwrap();
        DiskProblem::new(g, w, alpha).unwrap()
    }

    #[test]
    fn invalid_problems() {
        let g = GaugeField::zero(1.0).unwrap();
        assert!(matches!(DiskProblem::new(g.clone(), cx(0.0), 0.5), Err(Error::Domain(_))));
        assert!(matches!(DiskProblem::new(g, cx(1.0), 1.5), Err(Error::Argument(_))));
    }

    #[test]
    fn free_green_entries() {
        let x = PlanePoint::new(0.4, 0.3);
        let y = PlanePoint::new(0.7, -1.0);
        let g = free_green(x, y).unwrap();
        let d = x.complex() - y.complex();
        let k = (2.0 * PI * I).inv();
        assert!((g.get(0, 1) - k / d).norm() < 1e-15);
        assert!((g.get(1, 0) - k / d.conj()).norm() < 1e-15);
        assert!(g.get(0, 0).norm() == 0.0 && g.get(1, 1).norm() == 0.0);
        assert!(g.approx_eq(&(-&free_green(y, x).unwrap()), 1e-15));
    }

    #[test]
    fn free_green_solves_dirac() {
        let r = free_dirac_residual(PlanePoint::new(0.4, 0.3), PlanePoint::new(0.7, -1.0), 1e-4).unwrap();
        assert!(r < 1e-6);
    }

    #[test]
    fn coincident_points_rejected() {
        let x = PlanePoint::new(0.4, 0.3);
        assert!(matches!(free_green(x, x), Err(Error::Singular(_))));
        assert!(matches!(disk_green(&problem(cx(1.0), 0.5), x, x), Err(Error::Singular(_))));
    }

    #[test]
    fn image_term_at_origin() {
        let g = GaugeField::zero(1.0).unwrap();
        let p = DiskProblem::new(g, cx(1.0), 0.0).unwrap();
        let gb = disk_green(&p, PlanePoint::new(0.5, 0.2), PlanePoint::new(0.0, 0.0)).unwrap();
        assert!((gb.get(0, 0) - (-(2.0 * PI * I).inv())).norm() < 1e-15);
    }

    #[test]
    fn boundary_condition_holds() {
        for (w, alpha) in [(cx(1.0), 0.0), (cx(-1.0), 0.0), (c(0.7, 0.5), 0.8)] {
            let p = problem(w, alpha);
            let samples: Vec<_> = (0..20).map(|k| (0.3 * k as f64, PlanePoint::new(0.05 * k as f64, 1.0 - 0.2 * k as f64))).collect();
            assert!(boundary_residual(&p, &samples).unwrap() < 1e-12);
        }
    }

    #[test]
    fn dirac_equation_holds() {
        let p = problem(c(0.7, 0.5), 0.8);
        let r = dirac_residual(&p, PlanePoint::new(0.5, -0.6), PlanePoint::new(0.54, 2.03)).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn factorized_form_agrees() {
        let p = problem(c(0.7, 0.5), 0.8);
        let x = PlanePoint::new(0.5, -0.6);
        let y = PlanePoint::new(0.9, 2.0);
        assert!(disk_green(&p, x, y).unwrap().approx_eq(&disk_green_factorized(&p, x, y).unwrap(), 1e-12));
    }

    #[test]
    fn singular_part_is_gamma_theta() {
        let p = problem(c(1.3, -0.2), 0.6);
        let (r, th) = (0.7, 1.1);
        let coeff = singularity_coefficient(&p, r, th).unwrap();
        let (_, gt) = polar_gammas(th);
        let expected = gt.scale((2.0 * PI * I * r).inv());
        assert!(coeff.distance(&expected) < 1e-4 * expected.max_abs());
    }

    #[test]
    fn inversion_identity() {
        let d = inversion_identity_defect(PlanePoint::new(0.5, -0.6), PlanePoint::new(0.54, 2.03), 1.3).unwrap();
        assert!(d < 1e-14);
    }

    #[test]
    fn no_zero_modes() {
        let rep = zero_mode_scan(&problem(c(0.7, 0.5), 0.8), -5, 5).unwrap();
        assert_eq!(rep.kernel_dimension, 0);
        for m in &rep.modes {
            if m.n < 0 {
                assert!(!m.a_normalizable && m.a_forced_zero);
            }
            if m.n + 1 > 0 {
                assert!(!m.b_normalizable && m.b_forced_zero);
            }
        }
    }

    #[test]
    fn dropping_the_boundary_row_would_leave_modes() {
        // Sanity check of the nullity bookkeeping: a single normalizability
        // row leaves one free coefficient.
        let m = ComplexMatrix::from_vec(1, 2, vec![cx(1.0), cx(0.0)]).unwrap();
        assert_eq!(2 - m.rank(), 1);
    }

    proptest! {
        #[test]
        fn boundary_residual_random(theta in 0.0f64..6.3, yr in 0.0f64..1.2, yt in 0.0f64..6.3, wr in 0.2f64..3.0, wi in -1.0f64..1.0, alpha in 0.0f64..1.0) {
            let p = problem(c(wr, wi), alpha);
            prop_assert!(boundary_residual(&p, &[(theta, PlanePoint::new(yr, yt))]).unwrap() < 1e-10);
        }
    }
}
