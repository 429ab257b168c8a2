//! L-values of eta-product newforms through the smoothed Mellin split.
//!
//! With `F(t) = Σ a_n e^{−2πnt/√N}` the completed function is
//! `Λ(s) = (√N/2π)^s Γ(s) L(s) = ∫₀^∞ F(t) t^{s−1} dt`, and the Fricke
//! relation `F(1/t) = ε t^k F(t)` folds the part below `t₀` onto `(1/t₀, ∞)`:
//!
//! `Λ(s) = Σ a_n [c_n^{−s} Γ(s, c_n t₀) + ε c_n^{s−k} Γ(k−s, c_n/t₀)]`,
//! `c_n = 2πn/√N`.
//!
//! The result does not depend on `t₀` exactly when the sign and
//! coefficients are right, which is what [`fricke_check`] measures.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modular::newform::NewformSpec;
use crate::precision::{pi, real, Rational, Real, GUARD_BITS};
use crate::special::{gamma_half_int, upper_incomplete_gamma};

/// Off-centre points at which the functional equation is tested.
pub const FRICKE_POINTS: [(i64, i64); 3] = [(9, 4), (5, 2), (3, 1)];

/// Split point used by [`fricke_check`]; any `t₀ ≠ 1` breaks the built-in
/// symmetry of the `t₀ = 1` formula.
const CHECK_SPLIT: f64 = 1.2;

/// `Λ(s)` with the split at `t0`, using the form's Fricke sign.
pub fn completed_lambda(spec: &NewformSpec, s: &Rational, t0: &Real, prec: u32) -> Result<Real> {
    let k = Rational::from(spec.weight);
    let mirror = Rational::from(&k - s);
    if *s < 0 || mirror < 0 {
        return Err(Error::Domain(format!("split formula needs 0 ≤ s ≤ {k}, got {s}")));
    }
    let wp = prec + GUARD_BITS;
    let t0 = Real::with_val(wp, t0);
    let t0_inv = Real::with_val(wp, t0.recip_ref());
    let root_level = Real::with_val(wp, spec.level).sqrt();
    let c1 = Real::with_val(wp, pi(wp) * 2u32) / &root_level;
    // Terms decay like n^k e^{−c_n·min(t0, 1/t0)}.
    let m = c1.to_f64() * t0.to_f64().min(t0_inv.to_f64());
    let budget = f64::from(wp) * std::f64::consts::LN_2 + 10.0;
    let mut terms = 1usize;
    while m * terms as f64 - f64::from(2 * spec.weight + 2) * (terms as f64 + 1.0).ln() < budget {
        terms += 1;
    }
    let coefficients = spec.coefficients(terms)?;
    let sign = spec.fricke_sign;
    let contributions: Vec<Result<Real>> = coefficients
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            if *a == 0 {
                return Ok(real(wp, 0));
            }
            let c = Real::with_val(wp, &c1 * (i as u32 + 1));
            let ln_c = Real::with_val(wp, c.ln_ref());
            let x_direct = Real::with_val(wp, &c * &t0);
            let x_mirror = Real::with_val(wp, &c * &t0_inv);
            let direct = upper_incomplete_gamma(s, &x_direct)?
                * Real::with_val(wp, Real::with_val(wp, -Real::with_val(wp, s) * &ln_c).exp());
            let mirror_term = upper_incomplete_gamma(&mirror, &x_mirror)?
                * Real::with_val(wp, Real::with_val(wp, -Real::with_val(wp, &mirror) * &ln_c).exp());
            let total = if sign >= 0 { direct + mirror_term } else { direct - mirror_term };
            Ok(total * a)
        })
        .collect();
    let mut acc = real(wp + 64, 0);
    for c in contributions {
        acc += c?;
    }
    Ok(Real::with_val(prec, acc))
}

/// `(√N/2π)^s Γ(s)` for `2s ∈ ℤ`, `s > 0`.
fn gamma_factor(spec: &NewformSpec, s: &Rational, wp: u32) -> Result<Real> {
    let twice = Rational::from(s * 2u32);
    if *twice.denom() != 1 || *s <= 0 {
        return Err(Error::InvalidArgument(format!(
            "L-values are available at positive half-integers only, got s = {s}"
        )));
    }
    let twice = twice.numer().to_i64().ok_or_else(|| Error::InvalidArgument(format!("s = {s} too large")))?;
    let base = Real::with_val(wp, spec.level).sqrt() / (pi(wp) * 2u32);
    let power = Real::with_val(wp, Real::with_val(wp, base.ln() * Real::with_val(wp, s)).exp());
    Ok(power * gamma_half_int(twice, wp)?)
}

/// `L(spec, s)` for half-integral `0 < s ≤ weight`.
pub fn l_value(spec: &NewformSpec, s: &Rational, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let factor = gamma_factor(spec, s, wp)?;
    let lambda = completed_lambda(spec, s, &real(wp, 1), wp)?;
    Ok(Real::with_val(prec, lambda / factor))
}

/// `L′(spec, 0) = Λ(0) = ε·Λ(k)`, after confirming the functional equation.
pub fn l_prime_at_0(spec: &NewformSpec, prec: u32) -> Result<Real> {
    fricke_check(spec, 64)?;
    let wp = prec + GUARD_BITS;
    let k = Rational::from(spec.weight);
    let lambda = completed_lambda(spec, &k, &real(wp, 1), wp)?;
    let v = if spec.fricke_sign >= 0 { lambda } else { -lambda };
    Ok(Real::with_val(prec, v))
}

/// `max |Λ(s) − ε Λ(k − s)|` over the off-centre test points, each side
/// computed with the split at `t₀ = 1.2`.
pub fn fricke_asymmetry(spec: &NewformSpec, prec: u32) -> Result<f64> {
    let wp = prec + GUARD_BITS;
    let t0 = real(wp, CHECK_SPLIT);
    let k = Rational::from(spec.weight);
    let mut worst = 0.0f64;
    for (num, den) in FRICKE_POINTS {
        let s = Rational::from((num, den));
        let mirror = Rational::from(&k - &s);
        let left = completed_lambda(spec, &s, &t0, wp)?;
        let right = completed_lambda(spec, &mirror, &t0, wp)?;
        let right = if spec.fricke_sign >= 0 { right } else { -right };
        worst = worst.max(Real::with_val(wp, left - right).abs().to_f64());
    }
    Ok(worst)
}

/// Fails with a functional-equation error when the asymmetry exceeds
/// `2^(20−P)`; returns the asymmetry otherwise.
pub fn fricke_check(spec: &NewformSpec, prec: u32) -> Result<f64> {
    let asymmetry = fricke_asymmetry(spec, prec)?;
    let threshold = 2f64.powi(20 - prec as i32);
    if asymmetry < threshold {
        Ok(asymmetry)
    } else {
        Err(Error::FunctionalEquation { asymmetry, threshold })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::abs_diff_f64;
    use crate::special::zeta_int;

    #[test]
    fn f_at_four_against_raw_dirichlet_series() {
        let f = NewformSpec::f();
        let n = 100_000;
        let a = f.coefficients(n).unwrap();
        let mut raw = 0.0f64;
        for (i, c) in a.iter().enumerate().rev() {
            let x = (i + 1) as f64;
            raw += c.to_f64() / (x * x * x * x);
        }
        let v = l_value(&f, &Rational::from(4), 64).unwrap();
        assert!((v.to_f64() - raw).abs() < 1e-9, "{} vs {raw}", v);
    }

    #[test]
    fn split_point_independence() {
        let f = NewformSpec::f();
        let s = Rational::from(4);
        let a = completed_lambda(&f, &s, &real(160, 1), 160).unwrap();
        let b = completed_lambda(&f, &s, &real(160, 0.8), 160).unwrap();
        assert!(abs_diff_f64(&a, &b) < 1e-40);
    }

    #[test]
    fn functional_equation_for_f() {
        let f = NewformSpec::f();
        assert!(fricke_check(&f, 64).unwrap() < 1e-12);
        assert!(fricke_check(&f, 192).unwrap() < 2f64.powi(20 - 192));
    }

    #[test]
    fn functional_equation_for_h() {
        let h = NewformSpec::h();
        assert!(fricke_check(&h, 64).unwrap() < 1e-12);
        assert!(fricke_check(&h, 160).unwrap() < 2f64.powi(20 - 160));
    }

    #[test]
    fn flipped_sign_is_detected() {
        for spec in [NewformSpec::f(), NewformSpec::h()] {
            let wrong = spec.with_fricke_sign(-spec.fricke_sign);
            assert!(fricke_asymmetry(&wrong, 64).unwrap() > 1e-3);
            assert!(matches!(fricke_check(&wrong, 64), Err(Error::FunctionalEquation { .. })));
        }
    }

    #[test]
    fn derivative_conversions() {
        let f = NewformSpec::f();
        let lf4 = l_value(&f, &Rational::from(4), 128).unwrap();
        let p = pi(128);
        let p4 = Real::with_val(128, &p * &p).square();
        let expected = Real::with_val(128, &lf4 * 24u32) / &p4;
        let d = l_prime_at_0(&f, 128).unwrap();
        assert!(d > 0);
        assert!(abs_diff_f64(&d, &expected) < 1e-36);

        let h = NewformSpec::h();
        let lh3 = l_value(&h, &Rational::from(3), 128).unwrap();
        let p3 = Real::with_val(128, &p * &p) * &p;
        let expected = Real::with_val(128, &lh3 * 16u32) / &p3;
        assert!(abs_diff_f64(&l_prime_at_0(&h, 128).unwrap(), &expected) < 1e-36);
    }

    #[test]
    fn half_integer_point() {
        // Λ(5/2) = Λ(3/2) pins the Γ(5/2) and Γ(3/2) factors.
        let f = NewformSpec::f();
        let a = l_value(&f, &Rational::from((5, 2)), 96).unwrap();
        let b = l_value(&f, &Rational::from((3, 2)), 96).unwrap();
        let wp = 96;
        let ratio = gamma_factor(&f, &Rational::from((3, 2)), wp).unwrap()
            / gamma_factor(&f, &Rational::from((5, 2)), wp).unwrap();
        assert!(abs_diff_f64(&a, &(b * ratio)) < 1e-25);
    }

    #[test]
    fn non_half_integer_rejected() {
        let f = NewformSpec::f();
        assert!(matches!(l_value(&f, &Rational::from((7, 3)), 64), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn measure_relation_is_consistent() {
        // 8·L′(f,0) − 28ζ′(−2) = 192·L(f,4)/π⁴ + 7ζ(3)/π²
        let prec = 160;
        let f = NewformSpec::f();
        let lf4 = l_value(&f, &Rational::from(4), prec).unwrap();
        let p = pi(prec);
        let p2 = Real::with_val(prec, &p * &p);
        let z3 = zeta_int(3, prec).unwrap();
        let rhs = Real::with_val(prec, &lf4 * 192u32) / Real::with_val(prec, &p2 * &p2)
            + Real::with_val(prec, &z3 * 7u32) / &p2;
        let lhs = l_prime_at_0(&f, prec).unwrap() * 8u32 - crate::special::zeta_prime_minus2(prec) * 28u32;
        assert!(abs_diff_f64(&lhs, &rhs) < 1e-45);
    }
}
