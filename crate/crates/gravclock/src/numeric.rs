//! Shared numeric helpers: log-space combinatorics, angle reduction, a scalar
//! minimiser, and log-spaced grids.

use std::f64::consts::{PI, TAU};

/// 2π split for compensated angle reduction: `TAU_HI + TAU_LO` carries 2π to
/// roughly 107 bits.
const TAU_HI: f64 = TAU;
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Reduce an angle into `[0, 2π)`.
///
/// Uses a two-part representation of 2π so the result keeps close to full
/// precision even when `x` is many periods long (Cody–Waite style reduction).
pub fn reduce_angle(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let k = (x / TAU).round();
    let mut r = x - k * TAU_HI - k * TAU_LO;
    if r < 0.0 {
        r += TAU;
    }
    if r >= TAU {
        r -= TAU;
    }
    r
}

/// Signed distance between two angles, folded into `(-π, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = reduce_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Cumulative table of ln(n!) for n = 0..=max.
pub(crate) fn ln_factorial_table(max: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(max + 1);
    t.push(0.0);
    let mut acc = 0.0;
    for n in 1..=max {
        acc += (n as f64).ln();
        t.push(acc);
    }
    t
}

/// ln C(n, k) in log space; exact enough for n up to a few thousand.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k > n");
    let t = ln_factorial_table(n as usize);
    t[n as usize] - t[k as usize] - t[(n - k) as usize]
}

/// ln Γ(x) for x a positive integer or half-integer, given as `two_x = 2x`.
///
/// Integer case is a factorial; half-integer uses
/// Γ(n + 1/2) = (2n)! √π / (4ⁿ n!).
pub(crate) fn ln_gamma_half(two_x: u64) -> f64 {
    assert!(two_x > 0, "ln_gamma_half: nonpositive argument");
    if two_x % 2 == 0 {
        let n = (two_x / 2) as usize;
        ln_factorial_table(n - 1)[n - 1]
    } else {
        let n = ((two_x - 1) / 2) as usize;
        let t = ln_factorial_table(2 * n);
        0.5 * PI.ln() + t[2 * n] - (n as f64) * 4f64.ln() - t[n]
    }
}

/// ln B(a, b) for a, b positive integers or half-integers (`two_a = 2a`).
pub(crate) fn ln_beta_half(two_a: u64, two_b: u64) -> f64 {
    ln_gamma_half(two_a) + ln_gamma_half(two_b) - ln_gamma_half(two_a + two_b)
}

/// Accurate ln[(1 + cos θ)/2] = 2 ln|cos(θ/2)|, stable near θ = 0 where the
/// naive form loses all precision.
pub fn ln_half_one_plus_cos(theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    (-s * s).ln_1p()
}

/// Golden-section search for a local minimum of `f` on `[a, b]`.
///
/// Assumes `f` is unimodal on the bracket; refines until the bracket width is
/// below `rel_tol` relative to the midpoint (or an absolute floor for brackets
/// straddling zero). Returns `(x_min, f(x_min))`.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    assert!(b > a, "minimize_scalar: empty bracket");
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    loop {
        let mid = 0.5 * (lo + hi);
        let scale = mid.abs().max(1e-30);
        if (hi - lo) <= rel_tol * scale {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    if f1 < fx && f1 < f2 {
        (x1, f1)
    } else if f2 < fx {
        (x2, f2)
    } else {
        (x, fx)
    }
}

/// `steps` logarithmically spaced points covering `[min, max]` inclusive.
pub fn log_space(min: f64, max: f64, steps: usize) -> Vec<f64> {
    assert!(min > 0.0 && max > min && steps >= 2, "log_space: bad range");
    let (l0, l1) = (min.ln(), max.ln());
    (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            (l0 + t * (l1 - l0)).exp()
        })
        .collect()
}

/// Least-squares slope of y against x.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reduce_angle_periods() {
        assert_abs_diff_eq!(reduce_angle(0.0), 0.0);
        assert_abs_diff_eq!(reduce_angle(TAU), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(reduce_angle(-0.5), TAU - 0.5, epsilon = 1e-15);
        // many periods: 1e6 * 2π + 1.25
        let x = 1.0e6 * TAU + 1.25;
        assert_abs_diff_eq!(reduce_angle(x), 1.25, epsilon = 1e-9);
    }

    #[test]
    fn binomials_match_direct_products() {
        assert_abs_diff_eq!(ln_binomial(10, 3).exp(), 120.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ln_binomial(400, 200), 274.036_723_598_430_6, epsilon = 1e-9);
    }

    #[test]
    fn gamma_half_integers() {
        // Γ(1/2) = √π, Γ(3/2) = √π/2, Γ(5) = 24
        assert_abs_diff_eq!(ln_gamma_half(1).exp(), PI.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(ln_gamma_half(3).exp(), PI.sqrt() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ln_gamma_half(10).exp(), 24.0, epsilon = 1e-9);
    }

    #[test]
    fn ln_half_one_plus_cos_small_angle() {
        // θ = 2e-8: (1+cosθ)/2 ≈ 1 - 1e-16; naive log would be 0
        let v = ln_half_one_plus_cos(2.0e-8);
        assert_abs_diff_eq!(v, -1.0e-16, epsilon = 1e-22);
    }

    #[test]
    fn minimize_quadratic() {
        let (x, fx) = minimize_scalar(|x| (x - 3.25).powi(2) + 1.0, 0.0, 10.0, 1e-9);
        assert_abs_diff_eq!(x, 3.25, epsilon = 1e-6);
        assert_abs_diff_eq!(fx, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn log_space_endpoints() {
        let g = log_space(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert_abs_diff_eq!(g[0], 1e-3, epsilon = 1e-15);
        assert_abs_diff_eq!(g[6], 1e3, epsilon = 1e-9);
        assert_abs_diff_eq!(g[3], 1.0, epsilon = 1e-12);
    }
}
