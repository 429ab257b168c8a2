//! Legendre's chi function `χ₃` and the trilogarithm on `[0, 1]`.

use crate::error::{Error, Result};
use crate::precision::{real, Real, GUARD_BITS};
use crate::special::zeta::{bernoulli, zeta_int};

/// `χ₃(α) = Σ_{n≥0} α^{2n+1}/(2n+1)³` for `0 ≤ α ≤ 1`.
pub fn legendre_chi3(alpha: &Real) -> Result<Real> {
    if alpha.is_nan() || *alpha < 0 || *alpha > 1 {
        return Err(Error::Domain(format!("legendre_chi3 requires 0 ≤ α ≤ 1, got {alpha}")));
    }
    let prec = alpha.prec();
    let wp = prec + GUARD_BITS;
    if alpha.is_zero() {
        return Ok(real(prec, 0));
    }
    if *alpha == 1 {
        return Ok(Real::with_val(prec, zeta_int(3, wp)? * 7u32 / 8u32));
    }
    if *alpha < 0.5 {
        return Ok(Real::with_val(prec, chi3_direct(alpha, wp)));
    }
    // χ₃(α) = Li₃(α) − Li₃(α²)/8
    let a = Real::with_val(wp, alpha);
    let mu = Real::with_val(wp, a.ln_ref());
    let li_a = li3_exp(&mu, wp)?;
    let li_a2 = li3_exp(&Real::with_val(wp, &mu * 2u32), wp)?;
    Ok(Real::with_val(prec, li_a - li_a2 / 8u32))
}

fn chi3_direct(alpha: &Real, wp: u32) -> Real {
    let a = Real::with_val(wp, alpha);
    let a2 = Real::with_val(wp, &a * &a);
    let mut pow = a;
    let mut sum = real(wp, 0);
    let eps = real(wp, 1) >> (wp + 2);
    for n in 0u64.. {
        let d = 2 * n + 1;
        let t = Real::with_val(wp, &pow / (d * d * d));
        sum += &t;
        // Tail below t·α²/(1−α²) ≤ t·α²·4/3 for α < 1/2.
        if t < eps {
            break;
        }
        pow *= &a2;
    }
    sum
}

/// `Li₃(e^μ)` for `−2π < μ < 0`, from the expansion about `μ = 0`:
/// `ζ(3) + ζ(2)μ + (μ²/2)(3/2 − log(−μ)) + Σ_{k≥3} ζ(3−k) μ^k/k!`.
pub fn li3_exp(mu: &Real, wp: u32) -> Result<Real> {
    if *mu >= 0 {
        return Err(Error::Domain(format!("li3_exp requires μ < 0, got {mu}")));
    }
    let mu = Real::with_val(wp, mu);
    let z2 = zeta_int(2, wp)?;
    let z3 = zeta_int(3, wp)?;
    let mu2 = Real::with_val(wp, &mu * &mu);
    let log_term = Real::with_val(wp, 1.5) - Real::with_val(wp, (-mu.clone()).ln());
    let mut sum = z3 + Real::with_val(wp, &z2 * &mu) + Real::with_val(wp, &mu2 * &log_term) / 2u32;
    let eps = real(wp, 1) >> (wp + 2);
    // k = 3 uses ζ(0) = −1/2; beyond, ζ(−m) = −B_{m+1}/(m+1) vanishes for even m.
    let mut pow = Real::with_val(wp, &mu2 * &mu) / 6u32;
    sum -= Real::with_val(wp, &pow / 2u32);
    let max_k = 4 * wp as usize;
    let bern = bernoulli(max_k);
    for k in 4..max_k {
        pow *= &mu;
        pow /= k as u32;
        let m = k - 3;
        if m % 2 == 0 {
            continue;
        }
        let zeta_neg = -bern[m + 1].clone() / rug::Rational::from(m as u32 + 1);
        let t = Real::with_val(wp, &pow * &zeta_neg);
        sum += &t;
        if t.abs() < eps && pow.clone().abs() < 1 {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        what: "Li3 expansion".into(),
        steps: max_k,
        best: sum,
        error_estimate: f64::NAN,
    })
}
