//! Gamma at half-integers, the exponential integral and the upper incomplete
//! gamma function.

use crate::error::{Error, Result};
use crate::precision::{euler_gamma, pi, real, Integer, Rational, Real, GUARD_BITS};

/// `Γ(twice_s / 2)` for `twice_s ≥ 1`.
pub fn gamma_half_int(twice_s: i64, prec: u32) -> Result<Real> {
    if twice_s < 1 {
        return Err(Error::Domain(format!("gamma_half_int needs a positive argument, got {twice_s}/2")));
    }
    if twice_s % 2 == 0 {
        let n = (twice_s / 2 - 1) as u32;
        return Ok(Real::with_val(prec, Integer::from(Integer::factorial(n))));
    }
    // Γ(n + 1/2) = (2n)! / (4^n n!) · √π
    let n = ((twice_s - 1) / 2) as u32;
    let num = Integer::from(Integer::factorial(2 * n));
    let den = Integer::from(Integer::factorial(n)) << (2 * n);
    let q = Rational::from((num, den));
    let wp = prec + 8;
    Ok(Real::with_val(prec, Real::with_val(wp, &q) * pi(wp).sqrt()))
}

/// `E₁(x) = ∫ₓ^∞ e^(−t)/t dt` for `x > 0`.
pub fn exp_integral_e1(x: &Real) -> Result<Real> {
    if *x <= 0 || x.is_nan() {
        return Err(Error::Domain(format!("exp_integral_e1 requires x > 0, got {x}")));
    }
    let prec = x.prec();
    if *x <= 4 {
        e1_series(x, prec)
    } else {
        e1_fraction(x, prec)
    }
}

fn e1_series(x: &Real, prec: u32) -> Result<Real> {
    // The alternating series loses about x/ln 2 bits to cancellation.
    let wp = prec + GUARD_BITS + 8;
    let x = Real::with_val(wp, x);
    let eps = real(wp, 1) >> (wp - 4);
    let mut term = real(wp, 1);
    let mut sum = real(wp, 0);
    for n in 1..10_000u32 {
        term *= &x;
        term /= n;
        term = -term;
        let t = Real::with_val(wp, &term / n);
        sum -= &t;
        if t.abs() < eps {
            let v = -euler_gamma(wp) - Real::with_val(wp, x.ln_ref()) + sum;
            return Ok(Real::with_val(prec, v));
        }
    }
    Err(Error::NoConvergence {
        what: "E1 series".into(),
        steps: 10_000,
        best: Real::with_val(prec, sum),
        error_estimate: f64::NAN,
    })
}

fn e1_fraction(x: &Real, prec: u32) -> Result<Real> {
    // e^x E₁(x) = 1/(x+1− 1/(x+3− 4/(x+5− …))), modified Lentz.
    let wp = prec + GUARD_BITS;
    let x = Real::with_val(wp, x);
    let tiny = real(wp, 1) >> (4 * wp);
    let eps = real(wp, 1) >> (wp - 2);
    let mut b = Real::with_val(wp, &x + 1u32);
    let mut c = Real::with_val(wp, 1u32 / &tiny);
    let mut d = Real::with_val(wp, 1u32 / &b);
    let mut h = d.clone();
    for i in 1..200_000u64 {
        let an = -Real::with_val(wp, i) * i;
        b += 2u32;
        d = Real::with_val(wp, &an * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        d.recip_mut();
        c = Real::with_val(wp, &an / &c) + &b;
        if c.is_zero() {
            c = tiny.clone();
        }
        let delta = Real::with_val(wp, &c * &d);
        h *= &delta;
        if Real::with_val(wp, delta - 1u32).abs() < eps {
            let v = h * Real::with_val(wp, -x).exp();
            return Ok(Real::with_val(prec, v));
        }
    }
    Err(Error::NoConvergence {
        what: "E1 continued fraction".into(),
        steps: 200_000,
        best: Real::with_val(prec, h),
        error_estimate: f64::NAN,
    })
}

/// `Γ(s, x) = ∫ₓ^∞ t^(s−1) e^(−t) dt` for rational `s ≥ 0` and `x > 0`.
///
/// Integer `s` uses the finite closed form, `s = 0` is `E₁`, anything else
/// goes through Legendre's continued fraction, which needs `x` of order one
/// or larger to converge quickly.
pub fn upper_incomplete_gamma(s: &Rational, x: &Real) -> Result<Real> {
    if *x <= 0 || x.is_nan() {
        return Err(Error::Domain(format!("incomplete gamma requires x > 0, got {x}")));
    }
    if *s < 0 {
        return Err(Error::Domain(format!("incomplete gamma requires s ≥ 0, got {s}")));
    }
    let prec = x.prec();
    if *s == 0 {
        return exp_integral_e1(x);
    }
    if *s.denom() == 1 {
        let n = s.numer().to_u32().ok_or_else(|| Error::InvalidArgument(format!("order {s} too large")))?;
        // Γ(n, x) = (n−1)! e^(−x) Σ_{j<n} x^j / j!
        let wp = prec + GUARD_BITS;
        let x = Real::with_val(wp, x);
        let mut term = real(wp, 1);
        let mut sum = real(wp, 1);
        for j in 1..n {
            term *= &x;
            term /= j;
            sum += &term;
        }
        let v = sum * Real::with_val(wp, -&x).exp() * Integer::from(Integer::factorial(n - 1));
        return Ok(Real::with_val(prec, v));
    }
    legendre_fraction(s, x, prec)
}

fn legendre_fraction(s: &Rational, x: &Real, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let a = Real::with_val(wp, s);
    let x = Real::with_val(wp, x);
    let tiny = real(wp, 1) >> (4 * wp);
    let eps = real(wp, 1) >> (wp - 2);
    let mut b = Real::with_val(wp, &x + 1u32) - &a;
    let mut c = Real::with_val(wp, 1u32 / &tiny);
    let mut d = Real::with_val(wp, 1u32 / &b);
    let mut h = d.clone();
    const MAX_STEPS: u64 = 200_000;
    for i in 1..MAX_STEPS {
        let an = -Real::with_val(wp, i) * Real::with_val(wp, i - &a);
        b += 2u32;
        d = Real::with_val(wp, &an * &d) + &b;
        if d.is_zero() {
            d = tiny.clone();
        }
        d.recip_mut();
        c = Real::with_val(wp, &an / &c) + &b;
        if c.is_zero() {
            c = tiny.clone();
        }
        let delta = Real::with_val(wp, &c * &d);
        h *= &delta;
        if Real::with_val(wp, delta - 1u32).abs() < eps {
            let log_pref = Real::with_val(wp, &a * Real::with_val(wp, x.ln_ref())) - &x;
            return Ok(Real::with_val(prec, h * log_pref.exp()));
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma continued fraction".into(),
        steps: MAX_STEPS as usize,
        best: Real::with_val(prec, h),
        error_estimate: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::abs_diff_f64;
    use rug::ops::Pow;

    #[test]
    fn half_integer_values() {
        assert_eq!(gamma_half_int(2, 64).unwrap(), 1);
        assert_eq!(gamma_half_int(8, 64).unwrap(), 6);
        let sqrt_pi = pi(128).sqrt();
        assert!(abs_diff_f64(&gamma_half_int(1, 128).unwrap(), &sqrt_pi) < 1e-36);
        let expected = Real::with_val(128, &sqrt_pi * 15u32) / 8u32;
        assert!(abs_diff_f64(&gamma_half_int(7, 128).unwrap(), &expected) < 1e-36);
        assert!(matches!(gamma_half_int(0, 64), Err(Error::Domain(_))));
        assert!(matches!(gamma_half_int(-3, 64), Err(Error::Domain(_))));
    }

    #[test]
    fn half_integer_recurrence() {
        for t in 1..30 {
            let lhs = gamma_half_int(t + 2, 192).unwrap();
            let rhs = Real::with_val(192, gamma_half_int(t, 192).unwrap() * t) / 2u32;
            let rel = abs_diff_f64(&lhs, &rhs) / lhs.to_f64();
            assert!(rel < 1e-50, "twice_s = {t}");
        }
    }

    /// Composite Simpson on [1, 40]; the tail beyond 40 is below e^-40/40.
    fn e1_quadrature_at_one() -> f64 {
        let n = 200_000;
        let (a, b) = (1.0f64, 40.0f64);
        let h = (b - a) / n as f64;
        let f = |t: f64| (-t).exp() / t;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn e1_at_one() {
        let oracle = e1_quadrature_at_one();
        assert!((oracle - 0.219_383_934_395_520_27).abs() < 1e-13);
        let v = exp_integral_e1(&real(128, 1)).unwrap();
        assert!((v.to_f64() - oracle).abs() < 1e-13);
        let frozen = Real::parse("0.21938393439552027367716377546012164903").unwrap();
        assert!(abs_diff_f64(&v, &real(128, frozen)) < 1e-36);
    }

    #[test]
    fn e1_asymptotics() {
        let x = real(96, 50);
        let v = exp_integral_e1(&x).unwrap();
        let scaled = v * Real::with_val(96, x.exp_ref()) * 50u32;
        assert!((scaled.to_f64() - 1.0).abs() < 0.02);
    }

    #[test]
    fn e1_series_identity() {
        let x = real(128, 0.5);
        let v = exp_integral_e1(&x).unwrap();
        let lhs = v + Real::with_val(128, x.ln_ref()) + euler_gamma(128);
        let mut rhs = real(128, 0);
        let mut pow = real(128, 1);
        for n in 1..60u32 {
            pow *= &x;
            pow /= n;
            let t = Real::with_val(128, &pow / n);
            if n % 2 == 1 {
                rhs += t;
            } else {
                rhs -= t;
            }
        }
        assert!(abs_diff_f64(&lhs, &rhs) < 1e-36);
    }

    #[test]
    fn e1_branches_agree_at_crossover() {
        let x = real(160, 4);
        let a = e1_series(&x, 160).unwrap();
        let b = e1_fraction(&x, 160).unwrap();
        let rel = abs_diff_f64(&a, &b) / a.to_f64();
        assert!(rel < 2f64.powi(8 - 160), "rel {rel:e}");
    }

    #[test]
    fn e1_domain() {
        assert!(matches!(exp_integral_e1(&real(64, 0)), Err(Error::Domain(_))));
    }

    #[test]
    fn incomplete_gamma_integer_and_fraction_agree() {
        // The continued fraction is valid for integer orders too.
        for n in 1..6 {
            let s = Rational::from(n);
            let x = real(128, 1.7);
            let closed = upper_incomplete_gamma(&s, &x).unwrap();
            let cf = legendre_fraction(&s, &x, 128).unwrap();
            assert!(abs_diff_f64(&closed, &cf) < 1e-35, "n = {n}");
        }
    }

    #[test]
    fn incomplete_gamma_half_integer() {
        // Γ(1/2, x) = √π·erfc(√x)
        let x = real(128, 2.25);
        let v = upper_incomplete_gamma(&Rational::from((1, 2)), &x).unwrap();
        let expected = pi(128).sqrt() * Real::with_val(128, 1.5).erfc();
        assert!(abs_diff_f64(&v, &expected) < 1e-36);
        // Γ(s+1, x) = sΓ(s, x) + x^s e^(−x)
        let s = Rational::from((3, 4));
        let s1 = Rational::from((7, 4));
        let a = upper_incomplete_gamma(&s1, &x).unwrap();
        let b = upper_incomplete_gamma(&s, &x).unwrap() * real(128, &s)
            + Real::with_val(128, (&x).pow(&real(128, &s))) * Real::with_val(128, -&x).exp();
        assert!(abs_diff_f64(&a, &b) < 1e-36);
    }

    #[test]
    fn incomplete_gamma_order_zero_is_e1() {
        let x = real(96, 3);
        let a = upper_incomplete_gamma(&Rational::new(), &x).unwrap();
        assert_eq!(a, exp_integral_e1(&x).unwrap());
    }
}
