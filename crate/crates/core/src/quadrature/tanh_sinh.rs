//! Double-exponential quadrature on `(0, 1)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::precision::{pi, real, Real, GUARD_BITS};
use crate::quadrature::QuadratureResult;

pub const DEFAULT_MAX_LEVEL: u32 = 12;

/// One node of the rule: abscissa, its complement and the weight.
struct Node {
    x: Real,
    xc: Real,
    w: Real,
}

/// `x = 1/(1+e^{−2u})`, `1 − x = 1/(1+e^{2u})`, `u = (π/2)·sinh t`.
fn node(t: &Real, wp: u32) -> Node {
    let half_pi = pi(wp) / 2u32;
    let (sinh, cosh) = Real::with_val(wp, t).sinh_cosh(Real::new(wp));
    let u = Real::with_val(wp, &half_pi * &sinh);
    let e = Real::with_val(wp, Real::with_val(wp, &u * 2u32).exp());
    let x = Real::with_val(wp, Real::with_val(wp, e.recip_ref()) + 1u32).recip();
    let xc = Real::with_val(wp, &e + 1u32).recip();
    let cu = Real::with_val(wp, u.cosh_ref());
    // dx/dt = (π/4)·cosh t / cosh² u
    let w = half_pi * cosh / Real::with_val(wp, &cu * &cu) / 2u32;
    Node { x, xc, w }
}

/// Integrates `f` over `(0, 1)`.
///
/// `f(x, 1−x)` receives the abscissa together with its complement, both
/// accurate to full relative precision, so integrands with structure at
/// `x = 1` can avoid forming `1 − x` themselves.
pub fn tanh_sinh<F>(f: F, tolerance: f64, prec: u32) -> Result<QuadratureResult>
where
    F: Fn(&Real, &Real) -> Real + Sync,
{
    tanh_sinh_with_level(f, tolerance, prec, DEFAULT_MAX_LEVEL)
}

pub fn tanh_sinh_with_level<F>(f: F, tolerance: f64, prec: u32, max_level: u32) -> Result<QuadratureResult>
where
    F: Fn(&Real, &Real) -> Real + Sync,
{
    let wp = prec + GUARD_BITS;
    // Cover t until e^{−2u} is far below 2^{−2wp}; algebraic endpoint
    // singularities x^{−a} then still decay past the working precision.
    let t_max = (4.0 * f64::from(wp) * std::f64::consts::LN_2 / std::f64::consts::PI).asinh();
    let eval = |k: i64, h: &Real| -> Result<Real> {
        let t = Real::with_val(wp, h * k);
        let nd = node(&t, wp);
        let y = f(&nd.x, &nd.xc);
        if y.is_nan() || y.is_infinite() {
            return Err(Error::Integrand { abscissa: nd.x.to_string(), value: y.to_string() });
        }
        Ok(Real::with_val(wp, y * &nd.w))
    };
    let sum_indices = |ks: Vec<i64>, h: &Real| -> Result<Real> {
        let terms: Vec<Result<Real>> = ks.par_iter().map(|&k| eval(k, h)).collect();
        let mut acc = real(wp + 64, 0);
        for term in terms {
            acc += term?;
        }
        Ok(acc)
    };

    // Level 0 at h = 1 uses every integer t in range; each later level adds
    // the odd multiples of the halved step.
    let mut h = real(wp, 1);
    let n0 = t_max.floor() as i64;
    let mut raw = sum_indices((-n0..=n0).collect(), &h)?;
    let mut evaluations = (2 * n0 + 1) as u64;
    let mut estimate = Real::with_val(wp, &raw * &h);
    let mut error = f64::INFINITY;
    for level in 1..=max_level {
        h /= 2u32;
        let n = (t_max * f64::from(1u32 << level)).floor() as i64;
        let ks: Vec<i64> = (-n..=n).filter(|k| k % 2 != 0).collect();
        evaluations += ks.len() as u64;
        raw += sum_indices(ks, &h)?;
        let next = Real::with_val(wp, &raw * &h);
        error = Real::with_val(wp, &next - &estimate).abs().to_f64();
        estimate = next;
        if level >= 3 && error < tolerance {
            return Ok(QuadratureResult {
                value: Real::with_val(prec, &estimate),
                error_estimate: error,
                evaluations,
                converged: true,
                discarded: 0,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "tanh-sinh quadrature".into(),
        steps: max_level as usize,
        best: Real::with_val(prec, estimate),
        error_estimate: error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::abs_diff_f64;
    use crate::special::{elliptic_pair, zeta_int};
    use rug::ops::Pow;

    #[test]
    fn log_endpoint() {
        let r = tanh_sinh(|x, _| Real::with_val(x.prec(), x.ln_ref()), 1e-30, 128).unwrap();
        assert!(abs_diff_f64(&r.value, &real(128, -1)) < 1e-30);
        assert!(r.converged && r.error_estimate >= 0.0);
    }

    #[test]
    fn monomials() {
        for m in 0..=8u32 {
            let r = tanh_sinh(|x, _| Real::with_val(x.prec(), x.pow(m)), 1e-30, 128).unwrap();
            let exact = real(128, 1) / (m + 1);
            assert!(abs_diff_f64(&r.value, &exact) < 1e-28, "m = {m}");
        }
    }

    #[test]
    fn inverse_square_root_singularity() {
        let r = tanh_sinh(|x, _| Real::with_val(x.prec(), x.sqrt_ref()).recip(), 1e-25, 128).unwrap();
        assert!(abs_diff_f64(&r.value, &real(128, 2)) < 1e-25);
    }

    #[test]
    fn weighted_square_of_k() {
        // ∫₀¹ k·K(k)² dk = 7ζ(3)/4
        let r = tanh_sinh(
            |k, kc| {
                let (big_k, _) = elliptic_pair(k, kc).unwrap();
                Real::with_val(k.prec(), &big_k * &big_k) * k
            },
            1e-25,
            128,
        )
        .unwrap();
        let expected = zeta_int(3, 128).unwrap() * 7u32 / 4u32;
        assert!(abs_diff_f64(&r.value, &expected) < 1e-24, "{}", r.value);
    }

    #[test]
    fn wan_integral() {
        // ∫₀¹ (−log(1−k²)/k)·K(k)K′(k) dk = 7πζ(3)/8
        let r = tanh_sinh(
            |k, kc| {
                let p = k.prec();
                let (big_k, big_kp) = elliptic_pair(k, kc).unwrap();
                let one_minus_sq = Real::with_val(p, kc * Real::with_val(p, k + 1u32));
                let log = Real::with_val(p, one_minus_sq.ln());
                -log / k * big_k * big_kp
            },
            1e-22,
            128,
        )
        .unwrap();
        let expected = zeta_int(3, 128).unwrap() * pi(128) * 7u32 / 8u32;
        assert!(abs_diff_f64(&r.value, &expected) < 1e-20, "{}", r.value);
    }

    #[test]
    fn reflection_invariance() {
        let f = |x: &Real| Real::with_val(x.prec(), x.ln_ref()) * Real::with_val(x.prec(), x * 3u32).cos();
        let a = tanh_sinh(|x, _| f(x), 1e-25, 128).unwrap();
        let b = tanh_sinh(|_, xc| f(xc), 1e-25, 128).unwrap();
        assert!(abs_diff_f64(&a.value, &b.value) < a.error_estimate.max(b.error_estimate).max(1e-25));
    }

    #[test]
    fn nan_is_reported() {
        let r = tanh_sinh(|x, _| if *x > 0.5 { Real::with_val(x.prec(), rug::float::Special::Nan) } else { x.clone() }, 1e-10, 64);
        assert!(matches!(r, Err(Error::Integrand { .. })));
    }

    #[test]
    fn level_cap_reports_best() {
        // Oscillation the rule cannot resolve at two levels.
        let r = tanh_sinh_with_level(|x, _| Real::with_val(x.prec(), x * 400u32).sin(), 1e-30, 64, 2);
        match r {
            Err(Error::NoConvergence { steps, .. }) => assert_eq!(steps, 2),
            other => panic!("expected no-convergence, got {other:?}"),
        }
    }
}
