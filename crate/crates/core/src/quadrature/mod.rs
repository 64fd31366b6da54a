//! Deterministic quadrature: adaptive Gauss–Kronrod on finite and
//! semi-infinite ranges, oscillatory tails with Wynn acceleration, trapezoid
//! rules on circles and Gauss–Legendre nodes.

mod special;

pub use special::{bessel_j, bessel_j_frac, bessel_j_frac_tail, digamma, EULER_GAMMA};

use crate::clifford::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Value of a quadrature together with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult { value: Complex64::new(0.0, 0.0), abs_error_estimate: 0.0, nodes_used: 0 }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    fn combine(self, other: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            nodes_used: self.nodes_used + other.nodes_used,
        }
    }
}

/// Stopping rules for [`integrate_adaptive_with`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl AdaptiveOptions {
    pub fn absolute(tol: f64) -> Self {
        AdaptiveOptions { abs_tol: tol, rel_tol: 0.0, max_nodes: 1_000_000 }
    }
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_nodes: 1_000_000 }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    splittable: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Unsplittable segments sink to the bottom of the heap.
        self.splittable
            .cmp(&other.splittable)
            .then(self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal))
    }
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut f1 = [Complex64::new(0.0, 0.0); 7];
    let mut f2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (l, r) = (f(c - dx), f(c + dx));
        f1[j] = l;
        f2[j] = r;
        k += (l + r) * WGK[j];
        resabs += (l.norm() + r.norm()) * WGK[j];
        if j % 2 == 1 {
            g += (l + r) * WG[j / 2];
        }
    }
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    let mean = k * 0.5;
    let mut resasc = (fc - mean).norm() * WGK[7];
    for j in 0..7 {
        resasc += ((f1[j] - mean).norm() + (f2[j] - mean).norm()) * WGK[j];
    }
    let (k, resabs, resasc) = (k * h, resabs * h.abs(), resasc * h.abs());
    let mut err = ((k - g * h).norm()).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((k, err, resabs))
}

/// Adaptive integral of `f` over `[a, b]` to absolute tolerance `tol`.
/// Either endpoint may be infinite.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, a, b, &AdaptiveOptions::absolute(tol))
}

/// Adaptive integral with explicit absolute/relative tolerances and node budget.
pub fn integrate_adaptive_with<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<QuadratureResult> {
    adaptive_dyn(&f, a, b, opts)
}

fn adaptive_dyn(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<QuadratureResult> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Argument("NaN integration limit".into()));
    }
    if a == b {
        return Ok(QuadratureResult::zero());
    }
    if a > b {
        let r = adaptive_dyn(f, b, a, opts)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => gk_adaptive(&f, a, b, opts),
        (true, false) => {
            let g = |s: f64| {
                let d = 1.0 - s;
                f(a + s / d) / (d * d)
            };
            gk_adaptive(&g, 0.0, 1.0, opts)
        }
        (false, true) => {
            let g = |s: f64| {
                let d = 1.0 - s;
                f(b - s / d) / (d * d)
            };
            gk_adaptive(&g, 0.0, 1.0, opts)
        }
        (false, false) => {
            let half = AdaptiveOptions { abs_tol: 0.5 * opts.abs_tol, ..*opts };
            let l = adaptive_dyn(f, f64::NEG_INFINITY, 0.0, &half)?;
            let r = adaptive_dyn(f, 0.0, f64::INFINITY, &half)?;
            Ok(l.combine(r))
        }
    }
}

fn gk_adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    opts: &AdaptiveOptions,
) -> Result<QuadratureResult> {
    let (v, e, _) = kronrod15(f, a, b)?;
    let mut nodes = 15usize;
    let mut heap = BinaryHeap::new();
    let mut total = v;
    let mut total_err = e;
    heap.push(Segment { a, b, value: v, error: e, splittable: true });
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        let worst = match heap.peek() {
            Some(s) if s.splittable => heap.pop().unwrap(),
            _ => break,
        };
        if nodes + 30 > opts.max_nodes {
            heap.push(worst);
            break;
        }
        let m = 0.5 * (worst.a + worst.b);
        let (vl, el, _) = kronrod15(f, worst.a, m)?;
        let (vr, er, _) = kronrod15(f, m, worst.b)?;
        nodes += 30;
        total += vl + vr - worst.value;
        total_err += el + er - worst.error;
        let tiny = |lo: f64, hi: f64| (hi - lo) <= 64.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        heap.push(Segment { a: worst.a, b: m, value: vl, error: el, splittable: !tiny(worst.a, m) });
        heap.push(Segment { a: m, b: worst.b, value: vr, error: er, splittable: !tiny(m, worst.b) });
    }
    // Re-sum to shed the drift of incremental updates.
    let (mut value, mut err) = (Complex64::new(0.0, 0.0), 0.0);
    for s in heap.iter() {
        value += s.value;
        err += s.error;
    }
    let target = opts.abs_tol.max(opts.rel_tol * value.norm());
    if err > target {
        return Err(Error::Accuracy { value, estimate: err, tol: target });
    }
    Ok(QuadratureResult { value, abs_error_estimate: err, nodes_used: nodes })
}

/// Integral over `[a, ∞)` of a decaying oscillatory function, summed over
/// consecutive pieces of width `step` and accelerated with Wynn's epsilon.
pub fn integrate_oscillatory_tail<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    step: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(step > 0.0) {
        return Err(Error::Argument("oscillatory step must be positive".into()));
    }
    let piece = AdaptiveOptions { abs_tol: tol * 1e-2, rel_tol: 1e-13, max_nodes: 1_000_000 };
    let mut partial = Vec::new();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut nodes = 0;
    let mut piece_err = 0.0;
    let mut last: Option<Complex64> = None;
    let mut stable = 0;
    for k in 0..400 {
        let lo = a + step * k as f64;
        let r = integrate_adaptive_with(&f, lo, lo + step, &piece)?;
        sum += r.value;
        nodes += r.nodes_used;
        piece_err += r.abs_error_estimate;
        partial.push(sum);
        if partial.len() < 6 {
            continue;
        }
        let (est, _) = wynn_epsilon(&partial);
        if let Some(prev) = last {
            let d = (est - prev).norm();
            if d <= tol {
                stable += 1;
                if stable >= 2 {
                    return Ok(QuadratureResult { value: est, abs_error_estimate: d + piece_err, nodes_used: nodes });
                }
            } else {
                stable = 0;
            }
        }
        last = Some(est);
    }
    let value = last.unwrap_or(sum);
    Err(Error::Accuracy { value, estimate: f64::INFINITY, tol })
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums. Returns the
/// accelerated limit and the difference between the two last even-column
/// estimates.
pub fn wynn_epsilon(seq: &[Complex64]) -> (Complex64, f64) {
    let n = seq.len();
    if n == 0 {
        return (Complex64::new(0.0, 0.0), f64::INFINITY);
    }
    if n < 3 {
        return (seq[n - 1], f64::INFINITY);
    }
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = seq.to_vec();
    let mut best = seq[n - 1];
    let mut best_prev = seq[n - 2];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d.norm() == 0.0 {
                return (cur[i + 1], 0.0);
            }
            next.push(prev[i + 1] + d.inv());
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            let last = cur[cur.len() - 1];
            if last.re.is_finite() && last.im.is_finite() {
                best_prev = best;
                best = last;
            }
        }
    }
    (best, (best - best_prev).norm())
}

/// Values that can be accumulated by the contour rules.
pub trait ContourValue: Clone {
    fn scaled(&self, c: Complex64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn is_finite_value(&self) -> bool;
}

impl ContourValue for Complex64 {
    fn scaled(&self, c: Complex64) -> Self {
        self * c
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl ContourValue for ComplexMatrix {
    fn scaled(&self, c: Complex64) -> Self {
        self.scale(c)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

/// Trapezoid rule for `∮ f(z) dz` over the circle `|z − center| = radius`,
/// counterclockwise for `orientation = +1` and clockwise for `−1`.
pub fn contour_closed<T: ContourValue, F: Fn(Complex64) -> T>(
    f: F,
    center: Complex64,
    radius: f64,
    orientation: i32,
    n: usize,
) -> Result<T> {
    if orientation != 1 && orientation != -1 {
        return Err(Error::Argument("orientation must be +1 or -1".into()));
    }
    if n == 0 || !(radius > 0.0) {
        return Err(Error::Argument("contour needs n > 0 and radius > 0".into()));
    }
    let mut acc: Option<T> = None;
    let weight = 2.0 * PI / n as f64 * orientation as f64;
    for j in 0..n {
        let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let z = center + e * radius;
        let v = f(z);
        if !v.is_finite_value() {
            return Err(Error::NonFinite(format!("contour sample at z = {z}")));
        }
        let term = v.scaled(Complex64::i() * e * radius * weight);
        acc = Some(match acc {
            None => term,
            Some(a) => a.plus(&term),
        });
    }
    Ok(acc.unwrap())
}

/// Mean of `f` over the unit circle, parametrised by angle, with `n`
/// equispaced nodes.
pub fn circle_mean<T: ContourValue, F: Fn(f64) -> T>(f: F, n: usize) -> T {
    let mut acc: Option<T> = None;
    let w = Complex64::new(1.0 / n as f64, 0.0);
    for j in 0..n {
        let v = f(2.0 * PI * j as f64 / n as f64).scaled(w);
        acc = Some(match acc {
            None => v,
            Some(a) => a.plus(&v),
        });
    }
    acc.expect("circle_mean needs n > 0")
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm) = if n == 0 { (1.0, 0.0) } else if n == 1 { (z, 1.0) } else { (p1, p0) };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rational_tail_integral() {
        let r = integrate_adaptive(|m| c(m / (m * m + 1.0).powi(2)), 0.0, f64::INFINITY, 1e-12).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-12, "{:?}", r);
        assert!(r.abs_error_estimate <= 1e-12);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_adaptive(|_| c(0.0), 0.0, 1.0, 1e-14).unwrap();
        assert_eq!(r.value, c(0.0));
    }

    #[test]
    fn bessel_j2_over_u() {
        let head = integrate_adaptive(|u| c(bessel_j(2, u) / u), 0.0, 2.0, 1e-13).unwrap();
        let tail = integrate_oscillatory_tail(|u| c(bessel_j(2, u) / u), 2.0, PI, 1e-11).unwrap();
        assert!((head.value.re + tail.value.re - 0.5).abs() < 1e-8);
    }

    #[test]
    fn log_singularity_converges() {
        let r = integrate_adaptive(|x| c(x.ln()), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let a = integrate_adaptive(|x| c(x.exp()), 0.0, 1.0, 1e-13).unwrap();
        let b = integrate_adaptive(|x| c(x.exp()), 1.0, 0.0, 1e-13).unwrap();
        assert!((a.value + b.value).norm() < 1e-15);
    }

    #[test]
    fn budget_exhaustion_reports_accuracy_error() {
        let opts = AdaptiveOptions { abs_tol: 1e-14, rel_tol: 0.0, max_nodes: 60 };
        let err = integrate_adaptive_with(|x| c((50.0 * x).sin() / x.sqrt()), 1e-9, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn closed_contour_residue() {
        let v = contour_closed(|z: Complex64| z.inv(), c(0.0), 1.0, 1, 64).unwrap();
        assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-14);
        let v = contour_closed(|z: Complex64| z.inv(), c(0.0), 1.0, -1, 64).unwrap();
        assert!((v + Complex64::new(0.0, 2.0 * PI)).norm() < 1e-14);
    }

    #[test]
    fn closed_contour_excluded_pole() {
        let v = contour_closed(|z: Complex64| (z - 5.0).inv(), c(0.0), 1.0, 1, 64).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn closed_contour_spectral_convergence() {
        let f = |z: Complex64| (z * z + 0.3).inv() * (z - 3.0).inv();
        let a = contour_closed(f, c(0.0), 1.0, 1, 128).unwrap();
        let b = contour_closed(f, c(0.0), 1.0, 1, 256).unwrap();
        assert!((a - b).norm() < 1e-12);
        let coarse = contour_closed(f, c(0.0), 1.0, 1, 16).unwrap();
        let mid = contour_closed(f, c(0.0), 1.0, 1, 32).unwrap();
        assert!((mid - b).norm() < 1e-3 * (coarse - b).norm());
    }

    #[test]
    fn nan_sample_is_an_error() {
        let r = contour_closed(|_z: Complex64| Complex64::new(f64::NAN, 0.0), c(0.0), 1.0, 1, 8);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        let mut s = c(0.0);
        let seq: Vec<Complex64> = (0..12)
            .map(|k| {
                s += c((-1f64).powi(k) / (k as f64 + 1.0));
                s
            })
            .collect();
        let (v, _) = wynn_epsilon(&seq);
        assert!((v.re - 2f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn deterministic_results() {
        let f = |x: f64| c((3.0 * x).cos() * (-x).exp());
        let a = integrate_adaptive(f, 0.0, f64::INFINITY, 1e-12).unwrap();
        let b = integrate_adaptive(f, 0.0, f64::INFINITY, 1e-12).unwrap();
        assert_eq!(a, b);
    }
}
