//! Complete elliptic integrals of the first kind via the AGM.

use crate::error::{Error, Result};
use crate::precision::{pi, real, Real, GUARD_BITS};

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(a: &Real, b: &Real) -> Result<Real> {
    if *a <= 0 || *b <= 0 || a.is_nan() || b.is_nan() {
        return Err(Error::InvalidArgument(format!("agm requires positive arguments, got ({a}, {b})")));
    }
    let prec = a.prec().max(b.prec());
    let wp = prec + 8;
    let mut x = Real::with_val(wp, a);
    let mut y = Real::with_val(wp, b);
    // Quadratic convergence once x/y ≈ 1; the first few steps close the gap.
    for _ in 0..64 + 2 * (32 - prec.leading_zeros()) {
        let diff = Real::with_val(wp, &x - &y).abs();
        if diff <= Real::with_val(wp, &x >> (prec + 2)) {
            break;
        }
        let mean = Real::with_val(wp, &x + &y) / 2u32;
        y = Real::with_val(wp, &x * &y).sqrt();
        x = mean;
    }
    Ok(Real::with_val(prec, x + y) / 2u32)
}

/// `K(k)` for `0 ≤ k < 1`.
pub fn ell_k(k: &Real) -> Result<Real> {
    if *k < 0 || *k >= 1 || k.is_nan() {
        return Err(Error::Domain(format!("ell_k requires 0 ≤ k < 1, got {k}")));
    }
    let prec = k.prec();
    let one_minus_k = Real::with_val(prec + GUARD_BITS, 1 - Real::with_val(prec + GUARD_BITS, k));
    Ok(elliptic_pair(k, &one_minus_k)?.0)
}

/// `K′(k) = K(√(1−k²))` for `0 < k ≤ 1`.
pub fn ell_kprime(k: &Real) -> Result<Real> {
    if *k <= 0 || *k > 1 || k.is_nan() {
        return Err(Error::Domain(format!("ell_kprime requires 0 < k ≤ 1, got {k}")));
    }
    let prec = k.prec();
    let wp = prec + GUARD_BITS;
    let m = agm(&real(wp, 1), &Real::with_val(wp, k))?;
    Ok(Real::with_val(prec, pi(wp) / (m * 2u32)))
}

/// `(K(k), K′(k))` given `k` together with its exact complement `1 − k`.
///
/// The complementary modulus is formed as `√((1−k)(1+k))`, so moduli within
/// a few ulps of 1 keep their full relative accuracy.
pub fn elliptic_pair(k: &Real, one_minus_k: &Real) -> Result<(Real, Real)> {
    if *k < 0 || *one_minus_k <= 0 {
        return Err(Error::Domain(format!("elliptic_pair requires 0 ≤ k < 1, got {k}")));
    }
    let prec = k.prec();
    let wp = prec + GUARD_BITS;
    let one_plus_k = Real::with_val(wp, k + 1u32);
    let kc = Real::with_val(wp, one_minus_k * &one_plus_k).sqrt();
    let half_pi = pi(wp) / 2u32;
    let big_k = Real::with_val(prec, &half_pi / agm(&real(wp, 1), &kc)?);
    let big_kp = if k.is_zero() {
        Real::with_val(prec, rug::float::Special::Infinity)
    } else {
        Real::with_val(prec, &half_pi / agm(&real(wp, 1), &Real::with_val(wp, k))?)
    };
    Ok((big_k, big_kp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::abs_diff_f64;

    #[test]
    fn agm_fixed_point_and_recurrence() {
        let one = real(128, 1);
        assert_eq!(agm(&one, &one).unwrap(), 1);
        let a = real(128, 3);
        let b = real(128, 0.25);
        let m = agm(&a, &b).unwrap();
        let next_a = Real::with_val(128, &a + &b) / 2u32;
        let next_b = Real::with_val(128, &a * &b).sqrt();
        assert!(abs_diff_f64(&m, &agm(&next_a, &next_b).unwrap()) < 1e-36);
    }

    #[test]
    fn agm_rejects_nonpositive() {
        assert!(matches!(agm(&real(64, 0), &real(64, 1)), Err(Error::InvalidArgument(_))));
        assert!(matches!(agm(&real(64, 1), &real(64, -2)), Err(Error::InvalidArgument(_))));
    }

    /// Midpoint rule on ∫₀^{π/2} dθ/√(1−k² sin²θ); the integrand is smooth
    /// and periodic so the rule converges geometrically.
    fn k_by_quadrature(k: f64) -> f64 {
        let n = 400;
        let h = std::f64::consts::FRAC_PI_2 / n as f64;
        (0..n)
            .map(|i| {
                let s = ((i as f64 + 0.5) * h).sin();
                h / (1.0 - k * k * s * s).sqrt()
            })
            .sum()
    }

    #[test]
    fn k_of_inverse_sqrt2() {
        let k = real(128, 0.5).sqrt();
        let v = ell_k(&k).unwrap();
        // π/(2·agm(1, 1/√2))
        let m = agm(&real(128, 1), &k).unwrap();
        let via_agm = pi(128) / (m * 2u32);
        assert!(abs_diff_f64(&v, &via_agm) < 1e-36);
        assert!((v.to_f64() - k_by_quadrature(std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-13);
        assert!((v.to_f64() - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn k_at_zero_is_half_pi() {
        let v = ell_k(&real(96, 0)).unwrap();
        assert!(abs_diff_f64(&v, &(pi(96) / 2u32)) < 1e-28);
    }

    #[test]
    fn symmetric_point() {
        let k = real(128, 0.5).sqrt();
        assert!(abs_diff_f64(&ell_k(&k).unwrap(), &ell_kprime(&k).unwrap()) < 1e-36);
    }

    #[test]
    fn landen_pair() {
        // K((1−k)/(1+k)) = (1+k)/2·K′(k) and K′((1−k)/(1+k)) = (1+k)·K(k)
        for i in 1..=20 {
            let k = real(128, i) / 21u32;
            let one_plus = Real::with_val(128, &k + 1u32);
            let l = Real::with_val(128, 1 - Real::with_val(128, &k)) / &one_plus;
            let lhs = ell_k(&l).unwrap();
            let rhs = Real::with_val(128, &one_plus * ell_kprime(&k).unwrap()) / 2u32;
            assert!(abs_diff_f64(&lhs, &rhs) < 1e-34, "k = {k}");
            let lhs2 = ell_kprime(&l).unwrap();
            let rhs2 = Real::with_val(128, &one_plus * ell_k(&k).unwrap());
            assert!(abs_diff_f64(&lhs2, &rhs2) < 1e-34, "k = {k}");
        }
    }

    #[test]
    fn complement_keeps_accuracy_near_one() {
        // 1 − k = 2^-200 is not representable next to 1 at 128 bits.
        let prec = 128;
        let kc = real(prec, 1) >> 200u32;
        let k = Real::with_val(prec, 1 - Real::with_val(400, &kc));
        let (big_k, _) = elliptic_pair(&k, &kc).unwrap();
        // K ≈ log(4/k') with k' = √(2·2^-200)
        let kprime = Real::with_val(prec, Real::with_val(prec, &kc * 2u32).sqrt());
        let approx = Real::with_val(prec, Real::with_val(prec, 4u32 / kprime).ln());
        assert!(abs_diff_f64(&big_k, &approx) < 1e-50);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(ell_k(&real(64, 1)), Err(Error::Domain(_))));
        assert!(matches!(ell_kprime(&real(64, 0)), Err(Error::Domain(_))));
        assert!(matches!(ell_k(&real(64, -0.1)), Err(Error::Domain(_))));
    }
}
