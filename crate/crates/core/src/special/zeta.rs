//! Riemann zeta at integers and Catalan's constant.

use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::precision::{pi, real, Integer, Rational, Real, GUARD_BITS};

/// Bernoulli numbers `B_0, B_1, …, B_n` (with `B_1 = −1/2`).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)])).lock().unwrap();
    while cache.len() <= n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let m = cache.len();
        let mut acc = Rational::new();
        for (k, b) in cache.iter().enumerate() {
            if k > 1 && k % 2 == 1 {
                continue;
            }
            let c = Integer::from(Integer::binomial_u(m as u32 + 1, k as u32));
            acc += Rational::from(b * c);
        }
        let next = -acc / Rational::from(m as u32 + 1);
        cache.push(next);
    }
    cache[..=n].to_vec()
}

/// `ζ(s)` for integer `s ≥ 2`, by Euler–Maclaurin.
pub fn zeta_int(s: u32, prec: u32) -> Result<Real> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta_int needs s ≥ 2, got {s}")));
    }
    let wp = prec + GUARD_BITS;
    // Truncation at N leaves a remainder of size about e^(−2πN).
    let n = prec / 8 + 10;
    let mut sum = real(wp, 0);
    for m in (1..n).rev() {
        sum += Real::with_val(wp, Real::u_pow_u(m, s)).recip();
    }
    let big_n = real(wp, n);
    let n_pow = Real::with_val(wp, Real::u_pow_u(n, s)).recip();
    // N^{1−s}/(s−1) + N^{−s}/2
    sum += Real::with_val(wp, &n_pow * n) / (s - 1);
    sum += Real::with_val(wp, &n_pow / 2u32);
    let eps = real(wp, 1) >> (wp + 4);
    let max_j = (3 * n as usize).max(8);
    let bern = bernoulli(2 * max_j);
    let n_sq = Real::with_val(wp, &big_n * &big_n);
    // (s)_{2j−1} N^{−s−2j+1} / (2j)!, built incrementally
    let mut factor = Real::with_val(wp, &n_pow * s) / &big_n / 2u32;
    for j in 1..=max_j {
        let term = Real::with_val(wp, &factor * &bern[2 * j]);
        sum += &term;
        if term.abs() < eps {
            return Ok(Real::with_val(prec, sum));
        }
        let jj = 2 * j as u32;
        factor *= (s + jj - 1) * (s + jj);
        factor /= (jj + 1) * (jj + 2);
        factor /= &n_sq;
    }
    Err(Error::NoConvergence {
        what: format!("zeta({s}) Euler-Maclaurin"),
        steps: max_j,
        best: Real::with_val(prec, sum),
        error_estimate: f64::NAN,
    })
}

/// `ζ′(−2) = −ζ(3)/(4π²)`.
pub fn zeta_prime_minus2(prec: u32) -> Real {
    let wp = prec + 8;
    let z3 = zeta_int(3, wp).expect("ζ(3) converges at every precision");
    let p = pi(wp);
    let denom = Real::with_val(wp, &p * &p) * 4u32;
    Real::with_val(prec, -(z3 / denom))
}

/// Catalan's constant `G = Σ_{n≥0} (−1)^n/(2n+1)²`.
///
/// Uses the Cohen–Rodriguez Villegas–Zagier weights, which gain a factor
/// `3+√8` per term on alternating series with completely monotone terms.
pub fn catalan(prec: u32) -> Real {
    let wp = prec + GUARD_BITS;
    let sum = alternating_sum(wp, |k| {
        let d = 2 * k as u64 + 1;
        Real::with_val(wp, d * d).recip()
    });
    Real::with_val(prec, sum)
}

/// `Σ_{k≥0} (−1)^k a_k` for a totally monotone sequence `a_k`.
pub(crate) fn alternating_sum(wp: u32, a: impl Fn(u32) -> Real) -> Real {
    let n = (f64::from(wp) * std::f64::consts::LN_2 / (3.0 + 8f64.sqrt()).ln()).ceil() as u32 + 2;
    let root = Real::with_val(wp, 8u32).sqrt() + 3u32;
    let mut d = Real::with_val(wp, (&root).pow(n));
    d = (Real::with_val(wp, d.recip_ref()) + &d) / 2u32;
    let mut b = real(wp, -1);
    let mut c = Real::with_val(wp, -&d);
    let mut s = real(wp, 0);
    for k in 0..n {
        c = Real::with_val(wp, &b - &c);
        s += Real::with_val(wp, &c * a(k));
        let kk = i64::from(k);
        let nn = i64::from(n);
        b *= (kk + nn) * (kk - nn);
        b /= Real::with_val(wp, kk * 2 + 1) * (kk + 1);
        b *= 2u32;
    }
    s / d
}
