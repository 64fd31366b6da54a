//! Bessel functions of the first kind and the digamma function.

use super::gauss_legendre;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 8.0;
const HANKEL_LIMIT: f64 = 25.0;

/// Bessel function `J_n(x)` of integer order.
///
/// Power series for `|x| ≤ 8`; above that, the trapezoid rule on Bessel's
/// integral `(1/2π)∫₀^{2π} cos(nτ − x sin τ) dτ`, which converges
/// geometrically once the node count exceeds `n + |x|`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 0 { v } else { -v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        let half = 0.5 * x;
        let mut term = 1.0;
        for k in 1..=n {
            term *= half / k as f64;
        }
        let mut sum = term;
        let q = half * half;
        for k in 1..200 {
            term *= -q / (k as f64 * (k + n) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    let nodes = 2 * ((n as f64 + x + 40.0 + 10.0 * x.cbrt()) / 2.0).ceil() as usize;
    let nf = n as f64;
    let mut sum = 0.0;
    for j in 0..nodes {
        let t = 2.0 * PI * j as f64 / nodes as f64;
        sum += (nf * t - x * t.sin()).cos();
    }
    sum / nodes as f64
}

/// Bessel function `J_ν(x)` for real order `ν > −1` and `x ≥ 0`.
pub fn bessel_j_frac(order: f64, x: f64) -> f64 {
    if order.fract() == 0.0 && order >= 0.0 {
        return bessel_j(order as u32, x);
    }
    if x == 0.0 {
        return if order == 0.0 { 1.0 } else if order > 0.0 { 0.0 } else { f64::INFINITY };
    }
    if x <= SERIES_LIMIT {
        return frac_series(order, x, 0);
    }
    if x >= HANKEL_LIMIT && order.abs() <= 10.0 {
        return hankel_asymptotic(order, x);
    }
    schlafli(order, x)
}

/// `J_ν(x)` minus the leading term `(x/2)^ν/Γ(ν+1)` of its power series,
/// computed without cancellation for small `x`.
pub fn bessel_j_frac_tail(order: f64, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        frac_series(order, x, 1)
    } else {
        bessel_j_frac(order, x) - (0.5 * x).powf(order) / gamma(order + 1.0)
    }
}

fn frac_series(order: f64, x: f64, skip: usize) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = half.powf(order) / gamma(order + 1.0);
    let mut sum = 0.0;
    for k in 0..200usize {
        if k >= skip {
            sum += term;
        }
        let kf = (k + 1) as f64;
        term *= -q / (kf * (kf + order));
        if k >= skip && term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn hankel_asymptotic(order: f64, x: f64) -> f64 {
    let mu = 4.0 * order * order;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * order + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn schlafli(order: f64, x: f64) -> f64 {
    // Both integrands are entire and the ranges short, so a fixed
    // Gauss–Legendre rule reaches machine precision for x ≤ 25.
    let first = fixed_legendre(|t| (order * t - x * t.sin()).cos(), 0.0, PI) / PI;
    let s = (order * PI).sin();
    if s == 0.0 {
        return first;
    }
    let upper = (40.0 / x).asinh() + 1.0;
    let second = fixed_legendre(|t| (-x * t.sinh() - order * t).exp(), 0.0, upper);
    first - s / PI * second
}

fn fixed_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (x, w) = RULE.get_or_init(|| gauss_legendre(96));
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(w).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Digamma function `ψ(x) = Γ′(x)/Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let r = 1.0 / (y * y);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                    - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    shift + y.ln() - 0.5 / y - series
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bessel_values_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(2, 0.0), 0.0);
    }

    #[test]
    fn bessel_reference_values() {
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 10.0) - 0.043_472_746_168_861_44).abs() < 1e-14);
        assert!((bessel_j(2, 30.0) - 0.078_451_246_073_265_38).abs() < 1e-14);
        assert!((bessel_j_frac(0.7, 15.0) - 0.174_956_717_613_438_26).abs() < 1e-13);
    }

    #[test]
    fn first_zero_of_j0() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if bessel_j(0, lo) * bessel_j(0, m) <= 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        assert!((lo - 2.404_825_557_695_773).abs() < 1e-12);
    }

    #[test]
    fn series_and_integral_agree_at_switch() {
        for n in 0..5 {
            let a = bessel_j(n, SERIES_LIMIT);
            let nodes = 64;
            let mut s = 0.0;
            for j in 0..nodes {
                let t = 2.0 * PI * j as f64 / nodes as f64;
                s += (n as f64 * t - SERIES_LIMIT * t.sin()).cos();
            }
            assert!((a - s / nodes as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn half_order_closed_form() {
        for &x in &[0.3, 2.0, 7.9, 8.5, 12.0, 24.0, 26.0, 60.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j_frac(0.5, x) - exact).abs() < 1e-12, "x = {x}");
            let exact_m = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((bessel_j_frac(-0.5, x) - exact_m).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn fractional_tail_removes_leading_term() {
        let x = 1e-3;
        let t = bessel_j_frac_tail(0.5, x);
        let lead = (0.5 * x).powf(0.5) / gamma(1.5);
        assert!((t - (bessel_j_frac(0.5, x) - lead)).abs() < 1e-17);
        assert!(t < 0.0);
    }

    #[test]
    fn digamma_special_values() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(2.0) - (1.0 - EULER_GAMMA)).abs() < 1e-14);
        assert!((digamma(0.5) - (-EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-13);
        assert!(digamma(0.0).is_nan());
    }

    proptest! {
        #[test]
        fn digamma_recurrence(x in 0.05f64..50.0) {
            prop_assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-12);
        }

        #[test]
        fn bessel_recurrence(n in 1u32..6, x in 0.1f64..40.0) {
            let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x);
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn fractional_recurrence(x in 0.2f64..45.0) {
            let nu = 0.3;
            let lhs = bessel_j_frac(nu - 1.0, x) + bessel_j_frac(nu + 1.0, x);
            let rhs = 2.0 * nu / x * bessel_j_frac(nu, x);
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
