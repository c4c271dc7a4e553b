//! Log-space special functions.
//!
//! The binomial and Poisson kernels use Loader's saddle-point decomposition
//! (Stirling remainder plus deviance term), which keeps relative accuracy near
//! machine precision even when `ln C(n, k)` is in the tens of millions.

use statrs::function::gamma::ln_gamma as statrs_ln_gamma;

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    statrs_ln_gamma(x)
}

/// `ln(1 + t) - t`, accurate for small `t`.
pub fn log1pmx(t: f64) -> f64 {
    if t.abs() < 0.25 {
        // alternating series -t^2/2 + t^3/3 - ...
        let mut term = t * t;
        let mut sum = -0.5 * term;
        let mut j = 3.0;
        loop {
            term *= -t;
            let next = sum - term / j;
            if next == sum {
                return sum;
            }
            sum = next;
            j += 1.0;
        }
    } else {
        t.ln_1p() - t
    }
}

/// Stirling remainder `lnΓ(z) - (z - 1/2) ln z + z - ln √(2π)`.
///
/// Equal to `lnΓ(n + 1) - (n + 1/2) ln n + n - ln √(2π)` at integers, which is
/// the form Loader's kernels use.
pub fn stirling_remainder(z: f64) -> f64 {
    if z < 15.0 {
        return ln_gamma(z) - (z - 0.5) * z.ln() + z - LN_SQRT_2PI;
    }
    const C: [f64; 7] =
        [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360_360.0, 1.0 / 156.0];
    let zz = 1.0 / (z * z);
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * zz + c;
    }
    acc / z
}

/// Deviance term `x ln(x / m) + m - x`, stable when `x ≈ m`.
pub fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        if s.abs() < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        let mut j = 1u32;
        while j < 1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `lnΓ(a) - lnΓ(b)` without cancellation when both arguments are large.
///
/// When `a` is `b` plus a small offset, prefer [`ln_gamma_ratio`]: forming
/// `b + m` in floating point already loses `ulp(b) * ln b`.
pub fn ln_gamma_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    ln_gamma_ratio(b, a - b)
}

/// `lnΓ(x + m) - lnΓ(x)` with the shift `m` taken exactly.
pub fn ln_gamma_ratio(x: f64, m: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let a = x + m;
    if x.min(a) >= 10.0 {
        let t = m / x;
        m * a.ln() + x * log1pmx(t) - 0.5 * t.ln_1p() + stirling_remainder(a) - stirling_remainder(x)
    } else if x < 10.0 && a >= 20.0 {
        let (j, s) = shift_up(x);
        s + ln_gamma_ratio(x + j, m - j)
    } else {
        ln_gamma(a) - ln_gamma(x)
    }
}

/// `(j, ln(x (x+1) ... (x+j-1)))` with `x + j >= 10`.
fn shift_up(x: f64) -> (f64, f64) {
    let mut j = 0.0;
    let mut s = 0.0;
    while x + j < 10.0 {
        s += (x + j).ln();
        j += 1.0;
    }
    (j, s)
}

/// Binomial log-pmf for `0 <= k <= n` and `p + q = 1`, both in `(0, 1)`.
pub(crate) fn binomial_log_pmf_raw(n: u64, k: u64, p: f64, q: f64) -> f64 {
    let nf = n as f64;
    if k == 0 {
        return nf * ln_of(q, p);
    }
    if k == n {
        return nf * ln_of(p, q);
    }
    let kf = k as f64;
    let rest = (n - k) as f64;
    let lc = stirling_remainder(nf)
        - stirling_remainder(kf)
        - stirling_remainder(rest)
        - bd0(kf, nf * p)
        - bd0(rest, nf * q);
    let lf = LN_2PI + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

/// Poisson log-pmf for `lambda > 0`.
pub(crate) fn poisson_log_pmf_raw(k: u64, lambda: f64) -> f64 {
    if k == 0 {
        return -lambda;
    }
    let kf = k as f64;
    -stirling_remainder(kf) - bd0(kf, lambda) - 0.5 * (LN_2PI + kf.ln())
}

/// `ln C(n, k)`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    let j = k.min(n - k);
    if j == 0 {
        return 0.0;
    }
    ln_gamma_diff((n + 1) as f64, (n - j + 1) as f64) - ln_gamma((j + 1) as f64)
}

/// Complementary error function, absolute error below 1e-15.
///
/// Positive-term series `erf(x) = 2/√π e^{-x²} Σ 2^j x^{2j+1} / (2j+1)!!` below
/// 2.5, Lentz continued fraction above.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x.is_nan() {
        return f64::NAN;
    }
    let two_over_sqrt_pi = std::f64::consts::FRAC_2_SQRT_PI;
    if x < 2.5 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut j = 0.0;
        loop {
            j += 1.0;
            term *= 2.0 * x2 / (2.0 * j + 1.0);
            sum += term;
            if term <= sum * 1e-17 {
                break;
            }
        }
        1.0 - two_over_sqrt_pi * (-x2).exp() * sum
    } else {
        // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for i in 1..500 {
            let a = f64::from(i) / 2.0;
            d = x + a * d;
            d = if d.abs() < tiny { tiny } else { d };
            c = x + a / c;
            c = if c.abs() < tiny { tiny } else { c };
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        two_over_sqrt_pi / 2.0 * (-x * x).exp() / f
    }
}

/// Two-sided normal tail probability `P(|Z| >= |z|)`.
pub fn normal_two_sided(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// `ln(v)` given `v` and `1 - v`; goes through `ln_1p` when `v` is near 1.
#[inline]
fn ln_of(v: f64, one_minus_v: f64) -> f64 {
    if one_minus_v < 0.5 {
        (-one_minus_v).ln_1p()
    } else {
        v.ln()
    }
}
