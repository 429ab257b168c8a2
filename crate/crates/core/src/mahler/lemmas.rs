//! Numerical checks of the elliptic-integral lemmas behind `R(α)`.

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::mahler::measures::{m_alpha, MRoute};
use crate::precision::{ln2, pi, real, Rational, Real, GUARD_BITS};
use crate::quadrature::tanh_sinh;
use crate::special::{ell_k, elliptic_pair, gamma_half_int, pfq, PFQSpec};

/// The three Fourier expansions with coefficients `c_n = C(2n,n)²/16ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierSeries {
    /// `K(sin θ)cos θ = (π/2) Σ c_n (sin 4nθ + sin(4n+2)θ)`
    KSin,
    /// `K(cos θ)cos θ = (π/2) Σ c_n (cos 4nθ + cos(4n+2)θ)`
    KCos,
    /// `m(4 sin θ) = log 2 − Σ_{n≥1} c_n cos(4nθ)/(4n) − Σ_{n≥0} c_n cos((4n+2)θ)/(4n+2)`
    MSin,
}

#[derive(Debug, Clone)]
pub struct FourierCheck {
    pub partial_sum: Real,
    pub direct: Real,
    pub deviation: f64,
    /// Proven bound on the truncation error.
    pub tail_bound: f64,
}

fn validate(theta: &Real, terms: u64, half_pi: &Real) -> Result<()> {
    if theta.is_nan() || *theta <= 0 || *theta >= *half_pi {
        return Err(Error::Domain(format!("θ must lie in (0, π/2), got {theta}")));
    }
    if terms < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 Fourier terms, got {terms}")));
    }
    Ok(())
}

/// Partial sums `S_1 … S_terms` of the expansion at `theta`, together with
/// the directly evaluated function.
fn partial_sums(which: FourierSeries, theta: &Real, terms: u64, wp: u32) -> Result<(Vec<Real>, Real)> {
    let half_pi = Real::with_val(wp, pi(wp) / 2u32);
    validate(theta, terms, &half_pi)?;
    let th = Real::with_val(wp, theta);
    let (sin, cos) = th.clone().sin_cos(Real::new(wp));
    let mut c = real(wp, 1);
    let mut acc = real(wp, 0);
    let mut sums = Vec::with_capacity(terms as usize);
    for n in 0..terms {
        let a = Real::with_val(wp, &th * (4 * n));
        let b = Real::with_val(wp, &th * (4 * n + 2));
        let t = match which {
            FourierSeries::KSin => Real::with_val(wp, a.sin() + b.sin()) * &c,
            FourierSeries::KCos => Real::with_val(wp, a.cos() + b.cos()) * &c,
            FourierSeries::MSin => {
                let mut t = Real::with_val(wp, &c * b.cos()) / (4 * n + 2);
                if n > 0 {
                    t += Real::with_val(wp, &c * a.cos()) / (4 * n);
                }
                t
            }
        };
        acc += t;
        sums.push(match which {
            FourierSeries::KSin | FourierSeries::KCos => Real::with_val(wp, &acc * &half_pi),
            FourierSeries::MSin => Real::with_val(wp, ln2(wp) - &acc),
        });
        let r = Real::with_val(wp, Rational::from((2 * n + 1, 2 * n + 2)));
        c *= Real::with_val(wp, &r * &r);
    }
    let direct = match which {
        FourierSeries::KSin => ell_k(&sin)? * &cos,
        FourierSeries::KCos => ell_k(&cos)? * &cos,
        FourierSeries::MSin => m_alpha(&sin, MRoute::Integral)?,
    };
    Ok((sums, direct))
}

/// Compares the first `terms` coefficients of `which` at `theta` with the
/// function evaluated directly.
///
/// Since `c_n ≤ 1/(πn)` decreases and the partial sums of `e^{i(4n+1)θ}`
/// are at most `1/|sin 2θ|`, summation by parts bounds the remainder by
/// `1/(2N sin θ)` for the elliptic series and by `1/(2πN²|sin 2θ|)` for the
/// measure.
pub fn fourier_check(which: FourierSeries, theta: &Real, terms: u64) -> Result<FourierCheck> {
    let prec = theta.prec();
    let wp = prec + GUARD_BITS;
    let (sums, direct) = partial_sums(which, theta, terms, wp)?;
    let partial = sums.last().expect("at least 8 terms").clone();
    let (s, c) = (theta.to_f64().sin(), theta.to_f64().cos());
    let n = terms as f64;
    let tail_bound = match which {
        FourierSeries::KSin | FourierSeries::KCos => 1.0 / (2.0 * n * s),
        FourierSeries::MSin => 1.0 / (2.0 * std::f64::consts::PI * n * n * (2.0 * s * c).abs()),
    };
    let deviation = Real::with_val(wp, &partial - &direct).abs().to_f64();
    Ok(FourierCheck {
        partial_sum: Real::with_val(prec, partial),
        direct: Real::with_val(prec, direct),
        deviation,
        tail_bound,
    })
}

/// Width of the window over which the truncation error is maximised; the
/// error oscillates with the residue of `N` modulo the period of `4θ/2π`.
pub const DECAY_WINDOW: u64 = 12;

/// Observed algebraic decay order of the truncation error between `terms/4`
/// and `terms`, measured on the maximum over [`DECAY_WINDOW`] consecutive
/// truncation points.
pub fn fourier_decay_order(which: FourierSeries, theta: &Real, terms: u64) -> Result<f64> {
    let wp = theta.prec() + GUARD_BITS;
    let lo = terms / 4;
    let (sums, direct) = partial_sums(which, theta, terms + DECAY_WINDOW, wp)?;
    let envelope = |start: u64| {
        sums[start as usize - 1..(start + DECAY_WINDOW) as usize - 1]
            .iter()
            .map(|s| Real::with_val(wp, s - &direct).abs().to_f64())
            .fold(0.0f64, f64::max)
    };
    let (e_lo, e_hi) = (envelope(lo.max(8)), envelope(terms));
    Ok((e_lo / e_hi).ln() / (terms as f64 / lo.max(8) as f64).ln())
}

const LEMMA_PRECISION: u32 = 96;

/// `|∫∫ F(|cos 2πt · cos 2πs|) ds dt − (4/π²) ∫₀¹ F(k) K′(k) dk|` for
/// `F(k) = k^m`, the left side by a tensor tanh-sinh rule on a quarter
/// period.
pub fn density_integral_check(m: u32, tolerance: f64) -> Result<f64> {
    if m > 6 {
        return Err(Error::InvalidArgument(format!("density check supports 0 ≤ m ≤ 6, got {m}")));
    }
    let wp = LEMMA_PRECISION + GUARD_BITS;
    let target = tolerance / 16.0;
    let quarter_turn = Real::with_val(wp, pi(wp) / 2u32);
    // cos(2π·x/4) for x ∈ (0,1); sin of the complement keeps accuracy at x → 1.
    let cosine = |xc: &Real| Real::with_val(wp, xc * &quarter_turn).sin();
    let inner = |c: &Real| -> Real {
        tanh_sinh(|_, sc| Real::with_val(wp, c * cosine(sc)).pow(m), target, wp)
            .map(|r| r.value)
            .unwrap_or_else(|_| real(wp, f64::NAN))
    };
    let outer = tanh_sinh(|_, tc| inner(&cosine(tc)), target, wp)?;
    // The fold onto a quarter period and the rescaling to (0,1) cancel.
    let lhs = outer.value;
    let rhs = tanh_sinh(
        |x, xc| match elliptic_pair(x, xc) {
            Ok((_, kp)) => Real::with_val(wp, x.clone().pow(m)) * kp,
            Err(_) => real(wp, f64::NAN),
        },
        target,
        wp,
    )?;
    let p = pi(wp);
    let rhs = rhs.value * 4u32 / Real::with_val(wp, &p * &p);
    Ok(Real::with_val(wp, lhs - rhs).abs().to_f64())
}

/// `(π²/8)·Γ((m+1)/2)²/Γ((m+2)/2)²·₄F₃(1/2,1/2,(m+1)/2,(m+1)/2; 1,(m+2)/2,(m+2)/2; 1)`,
/// the closed form of `∫₀¹ k^m K(k) K′(k) dk`.
pub fn wan_moment_formula(m: u32, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let twice = i64::from(m);
    let g1 = gamma_half_int(twice + 1, wp)?;
    let g2 = gamma_half_int(twice + 2, wp)?;
    let ratio = Real::with_val(wp, &g1 / &g2).square();
    let half = Rational::from((1, 2));
    let up = Rational::from((m + 1, 2));
    let down = Rational::from((m + 2, 2));
    let spec = PFQSpec::new(
        vec![half.clone(), half, up.clone(), up],
        vec![Rational::from(1), down.clone(), down],
        real(wp, 1),
    )?;
    let f = pfq(&spec, f64::powi(2.0, -(prec as i32)))?;
    let p = pi(wp);
    Ok(Real::with_val(prec, Real::with_val(wp, &p * &p) / 8u32 * ratio * f))
}

/// `|∫₀¹ k^m K K′ dk − wan_moment_formula(m)|`.
pub fn wan_moment_check(m: u32, tolerance: f64) -> Result<f64> {
    if m > 6 {
        return Err(Error::InvalidArgument(format!("moment check supports 0 ≤ m ≤ 6, got {m}")));
    }
    let wp = LEMMA_PRECISION + GUARD_BITS;
    let quad = tanh_sinh(
        |x, xc| match elliptic_pair(x, xc) {
            Ok((k, kp)) => Real::with_val(wp, x.clone().pow(m)) * k * kp,
            Err(_) => real(wp, f64::NAN),
        },
        tolerance / 16.0,
        wp,
    )?;
    let formula = wan_moment_formula(m, LEMMA_PRECISION)?;
    Ok(Real::with_val(wp, quad.value - formula).abs().to_f64())
}
