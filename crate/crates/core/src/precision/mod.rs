//! Arbitrary-precision carriers and the generic series machinery.
//!
//! [`Real`] is an MPFR float: every value carries its own precision in bits
//! and each basic operation is correctly rounded. [`Rational`] and
//! [`Integer`] are exact and always kept in lowest terms.

mod accel;
mod series;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

pub use rug::{Float as Real, Integer, Rational};

pub use accel::{accelerate, extrapolate_nodes, Extrapolation, Scheme, TailBasis};
pub use series::{sum_series, CompensatedSum, SeriesSpec, SeriesSum, TailShape};

use crate::error::{Error, Result};

pub const MIN_PRECISION: u32 = 32;
pub const MAX_PRECISION: u32 = 4096;

/// Guard bits added on top of a caller's precision inside multi-step kernels.
pub const GUARD_BITS: u32 = 32;

/// Working precision for a requested number of decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * 3.33).ceil() as u32 + GUARD_BITS
}

/// Number of decimal digits that faithfully represent a `prec`-bit value.
pub fn digits_for_bits(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn check_precision(prec: u32) -> Result<()> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&prec) {
        return Err(Error::InvalidArgument(format!(
            "precision {prec} outside [{MIN_PRECISION}, {MAX_PRECISION}] bits"
        )));
    }
    Ok(())
}

/// Shorthand for `Real::with_val`.
pub fn real<T>(prec: u32, value: T) -> Real
where
    Real: rug::Assign<T>,
{
    Real::with_val(prec, value)
}

/// `num / den` rounded to `prec` bits.
pub fn ratio(prec: u32, num: i64, den: i64) -> Real {
    Real::with_val(prec, num) / den
}

pub fn rational_to_real(prec: u32, q: &Rational) -> Real {
    Real::with_val(prec, q)
}

fn pi_cache() -> &'static RwLock<HashMap<u32, Real>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Real>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// π by the Gauss–Legendre (Brent–Salamin) iteration.
pub fn const_pi(prec: u32) -> Result<Real> {
    if prec < MIN_PRECISION {
        return Err(Error::InvalidArgument(format!(
            "precision {prec} below minimum {MIN_PRECISION}"
        )));
    }
    if let Some(p) = pi_cache().read().unwrap().get(&prec) {
        return Ok(p.clone());
    }
    let wp = prec + 16;
    let mut a = real(wp, 1);
    let mut b = real(wp, 0.5).sqrt();
    let mut t = real(wp, 0.25);
    let mut p = real(wp, 1);
    let eps = real(wp, 1) >> (wp / 2 + 2);
    loop {
        let next_a = Real::with_val(wp, &a + &b) / 2u32;
        b = Real::with_val(wp, &a * &b).sqrt();
        let d = Real::with_val(wp, &a - &next_a);
        t -= Real::with_val(wp, &p * &d) * &d;
        p *= 2u32;
        a = next_a;
        if Real::with_val(wp, &a - &b).abs() < eps {
            break;
        }
    }
    let s = Real::with_val(wp, &a + &b);
    let value = Real::with_val(prec, Real::with_val(wp, &s * &s) / (t * 4u32));
    pi_cache().write().unwrap().insert(prec, value.clone());
    Ok(value)
}

/// π at a precision known to be valid.
pub(crate) fn pi(prec: u32) -> Real {
    const_pi(prec.max(MIN_PRECISION))
        .map(|p| Real::with_val(prec, p))
        .expect("precision clamped to the supported range")
}

/// log 2 to `prec` bits.
pub fn ln2(prec: u32) -> Real {
    Real::with_val(prec, rug::float::Constant::Log2)
}

/// Euler–Mascheroni constant to `prec` bits.
pub fn euler_gamma(prec: u32) -> Real {
    Real::with_val(prec, rug::float::Constant::Euler)
}

/// Fixed-point decimal rendering with `digits` digits after the point.
pub fn to_fixed(x: &Real, digits: usize) -> String {
    if x.is_zero() {
        return format!("{:.*}", digits, 0.0);
    }
    // Enough significant digits to cover the integer part plus the fraction.
    let int_digits = {
        let e = x.get_exp().unwrap_or(0);
        (f64::from(e.max(0)) * std::f64::consts::LOG10_2).ceil() as usize + 1
    };
    let s = x.to_string_radix(10, Some(int_digits + digits + 1));
    // rug renders `d.ddddde±x`; re-anchor the point ourselves.
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (s.clone(), 0),
    };
    let negative = mant.starts_with('-');
    let mant = mant.trim_start_matches('-');
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let mut all: String = format!("{ip}{fp}");
    let mut point = ip.len() as i64 + exp;
    if point <= 0 {
        all = "0".repeat((1 - point) as usize) + &all;
        point = 1;
    }
    let point = point as usize;
    if all.len() < point + digits + 1 {
        all.push_str(&"0".repeat(point + digits + 1 - all.len()));
    }
    // Round half up on the digit string.
    let mut digits_vec: Vec<u8> = all.bytes().map(|b| b - b'0').collect();
    let keep = point + digits;
    let round_up = digits_vec[keep] >= 5;
    digits_vec.truncate(keep);
    if round_up {
        let mut i = keep;
        loop {
            if i == 0 {
                digits_vec.insert(0, 1);
                break;
            }
            i -= 1;
            if digits_vec[i] == 9 {
                digits_vec[i] = 0;
            } else {
                digits_vec[i] += 1;
                break;
            }
        }
    }
    let carried = digits_vec.len() - keep;
    let text: String = digits_vec.iter().map(|d| (d + b'0') as char).collect();
    let (ip, fp) = text.split_at(point + carried);
    let ip = ip.trim_start_matches('0');
    let ip = if ip.is_empty() { "0" } else { ip };
    let sign = if negative && text.bytes().any(|b| b != b'0') { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Scientific rendering with `sig` significant digits.
pub fn to_sci(x: &Real, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(sig.max(1)))
}

/// `|a - b|` as an f64, saturating rather than overflowing.
pub fn abs_diff_f64(a: &Real, b: &Real) -> f64 {
    let prec = a.prec().max(b.prec());
    Real::with_val(prec, a - b).abs().to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = const_pi(64).unwrap();
        assert!(to_fixed(&p, 17).starts_with("3.14159265358979324"));
    }

    #[test]
    fn pi_agrees_with_machin() {
        // Machin: π/4 = 4·atan(1/5) − atan(1/239), series summed directly.
        let prec = 256;
        let atan_inv = |m: u32| {
            let x = real(prec, 1) / m;
            let x2 = Real::with_val(prec, &x * &x);
            let mut pow = x;
            let mut s = real(prec, 0);
            for k in 0..200u32 {
                let t = Real::with_val(prec, &pow / (2 * k + 1));
                if k % 2 == 0 {
                    s += &t;
                } else {
                    s -= &t;
                }
                pow *= &x2;
            }
            s
        };
        let machin = (atan_inv(5) * 4u32 - atan_inv(239)) * 4u32;
        let p = const_pi(256).unwrap();
        assert!(abs_diff_f64(&p, &machin) < 1e-75);
    }

    #[test]
    fn pi_precision_monotone() {
        let lo = const_pi(128).unwrap();
        let hi = const_pi(256).unwrap();
        assert_eq!(to_fixed(&lo, 36), to_fixed(&hi, 36));
    }

    #[test]
    fn pi_rejects_low_precision() {
        assert!(matches!(const_pi(16), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fixed_formatting() {
        assert_eq!(to_fixed(&real(64, 0.5), 3), "0.500");
        assert_eq!(to_fixed(&real(64, -2.25), 1), "-2.3");
        assert_eq!(to_fixed(&real(64, 9.9996), 3), "10.000");
        assert_eq!(to_fixed(&real(64, 1e-5), 3), "0.000");
        assert_eq!(to_fixed(&real(64, 123.0), 0), "123");
    }

    #[test]
    fn rationals_are_exact() {
        let a = Rational::from((7, 12));
        let b = Rational::from((-5, 18));
        assert_eq!(Rational::from(&a + &b) - &b, a);
        assert_eq!(Rational::from(&a * &b) / &b, a);
    }
}
