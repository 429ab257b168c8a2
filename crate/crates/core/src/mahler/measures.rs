//! Mahler measures by torus integration and by their one-dimensional
//! representations.

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::mahler::descriptor::LaurentDescriptor;
use crate::precision::{pi, real, sum_series, Rational, Real, Scheme, SeriesSpec, GUARD_BITS};
use crate::quadrature::{tanh_sinh, torus_qmc, QuadratureResult, TorusIntegrand, DEFAULT_SEED};
use crate::special::{ell_k, elliptic_pair, legendre_chi3, pfq, PFQSpec};

/// Lattice size, shift count and seed for torus integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmcSettings {
    pub samples: u64,
    pub shifts: u32,
    pub seed: u64,
}

impl Default for QmcSettings {
    fn default() -> Self {
        Self { samples: 1 << 20, shifts: 16, seed: DEFAULT_SEED }
    }
}

/// `m(P)` by randomly shifted lattice integration of `log|P|`.
pub fn mahler_numeric(poly: &LaurentDescriptor, settings: &QmcSettings) -> Result<QuadratureResult> {
    let f = TorusIntegrand::new(poly.dimension(), |t| poly.log_abs(t)).with_note(format!("zeros of {}", poly.name));
    torus_qmc(&f, settings.samples, settings.shifts, settings.seed)
}

fn six_f_five(x: Real) -> Result<PFQSpec> {
    let h = Rational::from((3, 2));
    PFQSpec::new(
        vec![h.clone(), h.clone(), h.clone(), h, Rational::from(1), Rational::from(1)],
        vec![Rational::from(2); 5],
        x,
    )
}

/// `m(R_k) = log|k| − (8/k²)·₆F₅(3/2,3/2,3/2,3/2,1,1; 2,2,2,2,2; 256/k²)`
/// for real `|k| ≥ 16`.
pub fn m_rk_hypergeometric(k: &Real, target: f64) -> Result<Real> {
    if k.is_nan() || Real::with_val(k.prec(), k.abs_ref()) < 16 {
        return Err(Error::Domain(format!("the hypergeometric formula needs |k| ≥ 16, got {k}")));
    }
    let prec = k.prec();
    let wp = prec + GUARD_BITS;
    let k2 = Real::with_val(wp, k * k);
    let x = Real::with_val(wp, 256u32 / &k2);
    // The prefactor 8/k² ≤ 1/32 relaxes the series target.
    let f = pfq(&six_f_five(x)?, target * 16.0)?;
    let log_k = Real::with_val(wp, k.abs_ref()).ln();
    Ok(Real::with_val(prec, log_k - f * 8u32 / k2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRoute {
    /// `4 Σ C(2n,n)² (α/4)^{2n+1}/(2n+1)`
    Series,
    /// `(2/π) ∫₀^α K(k) dk`
    Integral,
}

/// `m(4α) = m(x + x⁻¹ + y + y⁻¹ + 4α)` for `0 ≤ α ≤ 1`, at `alpha`'s
/// precision.
pub fn m_alpha(alpha: &Real, route: MRoute) -> Result<Real> {
    if alpha.is_nan() || *alpha < 0 || *alpha > 1 {
        return Err(Error::Domain(format!("m_alpha requires 0 ≤ α ≤ 1, got {alpha}")));
    }
    let prec = alpha.prec();
    if alpha.is_zero() {
        return Ok(real(prec, 0));
    }
    let target = f64::powi(2.0, -(prec as i32) - 2);
    match route {
        MRoute::Series => m_series(alpha, target, prec),
        MRoute::Integral => m_integral(alpha, target, prec),
    }
}

fn m_series(alpha: &Real, target: f64, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let a = Real::with_val(wp, alpha);
    let a2 = Real::with_val(wp, &a * &a);
    // t_n = C(2n,n)²/16ⁿ · α^{2n+1}/(2n+1)
    let step = |n: u64, t: &Real, p: u32| {
        let r = Rational::from(((2 * n + 1) * (2 * n + 1), (2 * n + 2) * (2 * n + 2)))
            * Rational::from((2 * n + 1, 2 * n + 3));
        Real::with_val(p, t * Real::with_val(p, &a2 * Real::with_val(p, &r)))
    };
    let first = |_: u64, p: u32| Real::with_val(p, &a);
    let spec = SeriesSpec::new("m(4α) series", first).with_step(step);
    let sum = if *alpha == 1 {
        sum_series(&spec.algebraic(1, false).accelerate(Scheme::Richardson), target, wp)?
    } else {
        // Term ratios increase to α² and C(2n,n)²/16ⁿ ≤ 1/(πn), so the tail
        // after t_n is below α^{2n+1}/(πn(2n+1)) · α²/(1−α²).
        let q = Real::with_val(wp, &a2 / Real::with_val(wp, 1 - &a2));
        let inv_pi = Real::with_val(wp, pi(wp).recip());
        let (a1, a2c) = (a.clone(), a2.clone());
        let spec = spec.with_tail_bound(move |n, p| {
            let n = n.max(1);
            let t = Real::with_val(p, &a1) * Real::with_val(p, a2c.clone().pow(n as u32));
            t * &q * &inv_pi / (n * (2 * n + 1))
        });
        sum_series(&spec, target, wp)?
    };
    Ok(Real::with_val(prec, sum.value))
}

fn m_integral(alpha: &Real, target: f64, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let a = Real::with_val(wp, alpha);
    let full = *alpha == 1;
    let r = tanh_sinh(
        |x, xc| {
            let k = Real::with_val(wp, &a * x);
            let kk = if full {
                elliptic_pair(&k, xc).map(|(k, _)| k)
            } else {
                ell_k(&k)
            };
            kk.unwrap_or_else(|_| real(wp, f64::NAN))
        },
        target,
        wp,
    )?;
    Ok(Real::with_val(prec, r.value * a * 2u32 / pi(wp)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RRoute {
    /// `(4/π²) χ₃(α)`
    Polylog,
    /// `(4/π²) ∫₀¹ m(4αk) K′(k) dk`
    KIntegral,
    /// Four-dimensional lattice integration of the defining polynomial.
    Torus(QmcSettings),
}

/// `R(α) = m(α(u+u⁻¹)(z+z⁻¹) + (x+x⁻¹)(y+y⁻¹))` for `0 ≤ α ≤ 1`.
///
/// The torus route is only accurate to its statistical error; use
/// [`r_alpha_torus`] to obtain it.
pub fn r_alpha(alpha: &Real, route: RRoute) -> Result<Real> {
    if alpha.is_nan() || *alpha < 0 || *alpha > 1 {
        return Err(Error::Domain(format!("R(α) routes are implemented for 0 ≤ α ≤ 1, got {alpha}")));
    }
    let prec = alpha.prec();
    let wp = prec + GUARD_BITS;
    let p = pi(wp);
    let scale = Real::with_val(wp, 4u32 / Real::with_val(wp, &p * &p));
    match route {
        RRoute::Polylog => {
            let chi = legendre_chi3(&Real::with_val(wp, alpha))?;
            Ok(Real::with_val(prec, chi * scale))
        }
        RRoute::KIntegral => {
            let v = r_k_integral(alpha, prec)?;
            Ok(Real::with_val(prec, v * scale))
        }
        RRoute::Torus(settings) => Ok(Real::with_val(prec, r_alpha_torus(alpha.to_f64(), &settings)?.value)),
    }
}

/// `∫₀¹ m(4αk) K′(k) dk`; the inner measure switches to the integral route
/// where its series would converge slowly.
fn r_k_integral(alpha: &Real, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let a = Real::with_val(wp, alpha);
    let target = f64::powi(2.0, -(prec as i32));
    let r = tanh_sinh(
        |x, xc| {
            let beta = Real::with_val(wp, &a * x);
            let route = if beta <= 0.9 { MRoute::Series } else { MRoute::Integral };
            match (m_alpha(&beta, route), elliptic_pair(x, xc)) {
                (Ok(m), Ok((_, k_prime))) => m * k_prime,
                _ => real(wp, f64::NAN),
            }
        },
        target,
        wp,
    )?;
    Ok(Real::with_val(prec, r.value))
}

/// `R(α)` by lattice integration of
/// `log|4α cos(2πθ₁)cos(2πθ₂) + 4cos(2πθ₃)cos(2πθ₄)|`.
pub fn r_alpha_torus(alpha: f64, settings: &QmcSettings) -> Result<QuadratureResult> {
    use std::f64::consts::TAU;
    let f = TorusIntegrand::new(4, move |t| {
        let c = |i: usize| (TAU * t[i]).cos();
        (4.0 * alpha * c(0) * c(1) + 4.0 * c(2) * c(3)).abs().ln()
    })
    .with_note("zero set of the R(α) polynomial");
    torus_qmc(&f, settings.samples, settings.shifts, settings.seed)
}
