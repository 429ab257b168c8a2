//! Truncated power series in `q` with exact integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::integer::Order;

use crate::precision::{Integer, Rational};

/// `Σ_{n=0}^{N} c_n q^n + O(q^{N+1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    coefficients: Vec<Integer>,
}

impl QSeries {
    /// Series known through `q^order`; missing coefficients are zero.
    pub fn new(mut coefficients: Vec<Integer>, order: usize) -> Self {
        coefficients.resize(order + 1, Integer::new());
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64], order: usize) -> Self {
        Self::new(coefficients.iter().map(|&c| Integer::from(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Integer::from(1)], order)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> &Integer {
        &self.coefficients[n]
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Integer> {
        self.coefficients
    }

    pub fn nonzero_count(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != 0).count()
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coefficients.resize(order.min(self.order()) + 1, Integer::new());
        self
    }

    /// `f(q) ↦ f(q^m)`, keeping the truncation order.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1, "substitution exponent must be positive");
        let n = self.order();
        let mut out = vec![Integer::new(); n + 1];
        for (i, c) in self.coefficients.iter().enumerate().take(n / m + 1) {
            out[i * m] = c.clone();
        }
        Self { coefficients: out }
    }

    /// `f(q) ↦ f(−q)`.
    pub fn negate_argument(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { Integer::from(-c) } else { c.clone() })
            .collect();
        Self { coefficients }
    }

    /// Multiplies by `q^k`; the truncation order is unchanged.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![Integer::new(); n + 1];
        if k <= n {
            out[k..].clone_from_slice(&self.coefficients[..=n - k]);
        }
        Self { coefficients: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = QSeries::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

/// Below this many coefficient pairs the schoolbook product wins.
const SPARSE_WORK_LIMIT: usize = 1 << 22;

fn multiply(a: &[Integer], b: &[Integer], order: usize) -> Vec<Integer> {
    let a = &a[..a.len().min(order + 1)];
    let b = &b[..b.len().min(order + 1)];
    let nz = |v: &[Integer]| v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, c.clone())).collect::<Vec<_>>();
    let (sa, sb) = (nz(a), nz(b));
    if sa.is_empty() || sb.is_empty() {
        return vec![Integer::new(); order + 1];
    }
    if sa.len().saturating_mul(sb.len()) <= SPARSE_WORK_LIMIT {
        let mut out = vec![Integer::new(); order + 1];
        for (i, x) in &sa {
            for (j, y) in &sb {
                if i + j > order {
                    break;
                }
                out[i + j] += Integer::from(x * y);
            }
        }
        return out;
    }
    kronecker(a, b, order)
}

/// Packs both operands into single integers at `2^B` spacing, multiplies
/// them with GMP and unpacks balanced digits.
fn kronecker(a: &[Integer], b: &[Integer], order: usize) -> Vec<Integer> {
    let bits = |v: &[Integer]| v.iter().map(|c| c.significant_bits()).max().unwrap_or(0);
    let len = a.len().min(b.len()) as u64;
    let need = u64::from(bits(a)) + u64::from(bits(b)) + (64 - len.leading_zeros() as u64) + 2;
    let limbs = need.div_ceil(64) as usize;
    let pack = |v: &[Integer]| {
        let mut pos = vec![0u64; v.len() * limbs];
        let mut neg = vec![0u64; v.len() * limbs];
        for (i, c) in v.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let digits = c.to_digits::<u64>(Order::Lsf);
            let target = if *c < 0 { &mut neg } else { &mut pos };
            target[i * limbs..i * limbs + digits.len()].copy_from_slice(&digits);
        }
        Integer::from_digits(&pos, Order::Lsf) - Integer::from_digits(&neg, Order::Lsf)
    };
    let mut product = pack(a) * pack(b);
    let total_limbs = (a.len() + b.len()) * limbs + 1;
    if product < 0 {
        product += Integer::from(1) << (64 * total_limbs as u32);
    }
    let mut digits = product.to_digits::<u64>(Order::Lsf);
    digits.resize(total_limbs, 0);
    let half = Integer::from(1) << (64 * limbs as u32 - 1);
    let full = Integer::from(1) << (64 * limbs as u32);
    let mut carry = 0u32;
    let mut out = Vec::with_capacity(order + 1);
    for i in 0..=order {
        let slot = &digits[(i * limbs).min(total_limbs)..((i + 1) * limbs).min(total_limbs)];
        let mut v = Integer::from_digits(slot, Order::Lsf) + carry;
        if v >= half {
            v -= &full;
            carry = 1;
        } else {
            carry = 0;
        }
        out.push(v);
    }
    out
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        QSeries { coefficients: multiply(&self.coefficients, &rhs.coefficients, order) }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let coefficients = (0..=order).map(|i| Integer::from(&self.coefficients[i] + &rhs.coefficients[i])).collect();
        QSeries { coefficients }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let coefficients = (0..=order).map(|i| Integer::from(&self.coefficients[i] - &rhs.coefficients[i])).collect();
        QSeries { coefficients }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coefficients: self.coefficients.iter().map(|c| Integer::from(-c)).collect() }
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().take(16) {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// `Π_{n≥1}(1 − q^n)` through `q^order`, by the pentagonal number theorem.
pub fn euler_product(order: usize) -> QSeries {
    let mut c = vec![Integer::new(); order + 1];
    c[0] = Integer::from(1);
    for k in 1.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = k * (3 * k - 1) / 2;
        if g1 > order {
            break;
        }
        c[g1] += sign;
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= order {
            c[g2] += sign;
        }
    }
    QSeries { coefficients: c }
}

/// `η(mτ)` without its prefactor: returns `Π(1 − q^{mn})` through `q^order`
/// together with the exponent `m/24` of the omitted `q` power.
pub fn eta_qexp(m: usize, order: usize) -> (QSeries, Rational) {
    assert!(m >= 1, "eta scale must be positive");
    let base = euler_product(order / m);
    let mut coefficients = vec![Integer::new(); order + 1];
    for (i, c) in base.coefficients().iter().enumerate() {
        if i * m <= order {
            coefficients[i * m] = c.clone();
        }
    }
    (QSeries { coefficients }, Rational::from((m as u32, 24u32)))
}

/// `ψ(q) = Σ_{n≥0} q^{n(n+1)/2}`.
pub fn theta_psi(order: usize) -> QSeries {
    let mut c = vec![Integer::new(); order + 1];
    let mut n = 0;
    while n * (n + 1) / 2 <= order {
        c[n * (n + 1) / 2] += 1;
        n += 1;
    }
    QSeries { coefficients: c }
}

/// `φ(q) = Σ_{n∈ℤ} q^{n²}`.
pub fn theta_phi(order: usize) -> QSeries {
    let mut c = vec![Integer::new(); order + 1];
    c[0] = Integer::from(1);
    let mut n = 1;
    while n * n <= order {
        c[n * n] += 2;
        n += 1;
    }
    QSeries { coefficients: c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &QSeries) -> Vec<i64> {
        v.coefficients().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn pentagonal_signs() {
        let (e, pre) = eta_qexp(1, 10);
        assert_eq!(ints(&e), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0]);
        assert_eq!(pre, Rational::from((1, 24)));
    }

    #[test]
    fn euler_product_by_multiplication() {
        let order = 60;
        let mut direct = QSeries::one(order);
        for n in 1..=order {
            let mut c = vec![0i64; order + 1];
            c[0] = 1;
            c[n] = -1;
            direct = &direct * &QSeries::from_i64(&c, order);
        }
        assert_eq!(direct, euler_product(order));
    }

    #[test]
    fn scaled_eta_lives_on_multiples() {
        let (e, pre) = eta_qexp(2, 41);
        assert_eq!(e.order(), 41);
        assert!(e.coefficients().iter().skip(1).step_by(2).all(|c| *c == 0));
        assert_eq!(pre, Rational::from((1, 12)));
        let (e4, _) = eta_qexp(4, 40);
        assert_eq!(*e4.coefficient(4), -1);
        assert_eq!(*e4.coefficient(8), -1);
    }

    #[test]
    fn theta_series() {
        assert_eq!(ints(&theta_psi(10)), vec![1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(ints(&theta_phi(9)), vec![1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
    }

    #[test]
    fn psi_fourth_power_is_odd_divisor_sum() {
        // q·ψ(q²)⁴ = Σ_{n,k≥0} (2n+1) q^{(2n+1)(2k+1)}
        let order = 60;
        let lhs = theta_psi(order).substitute_power(2).pow(4).shift(1);
        let mut rhs = vec![0i64; order + 1];
        for d in (1..=order).step_by(2) {
            for e in (1..=order / d).step_by(2) {
                rhs[d * e] += d as i64;
            }
        }
        assert_eq!(ints(&lhs), rhs);
    }

    #[test]
    fn jacobi_triple_product_cube() {
        // E(q)³ = Σ_{k≥0} (−1)^k (2k+1) q^{k(k+1)/2}
        let order = 200;
        let cube = euler_product(order).pow(3);
        let mut expected = vec![0i64; order + 1];
        let mut k = 0;
        while k * (k + 1) / 2 <= order {
            expected[k * (k + 1) / 2] = if k % 2 == 0 { 2 * k as i64 + 1 } else { -(2 * k as i64 + 1) };
            k += 1;
        }
        assert_eq!(ints(&cube), expected);
    }

    #[test]
    fn kronecker_matches_schoolbook_on_large_operands() {
        let order = 3000;
        let a = euler_product(order).pow(4);
        let b = theta_phi(order).negate_argument().pow(3);
        let fast = kronecker(a.coefficients(), b.coefficients(), order);
        let mut slow = vec![Integer::new(); order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                slow[i + j] += Integer::from(a.coefficient(i) * b.coefficient(j));
            }
        }
        assert_eq!(fast, slow);
    }

    proptest! {
        #[test]
        fn product_is_commutative_and_distributive(
            a in prop::collection::vec(-1000i64..1000, 1..40),
            b in prop::collection::vec(-1000i64..1000, 1..40),
            c in prop::collection::vec(-1000i64..1000, 1..40),
        ) {
            let order = 30;
            let (a, b, c) = (QSeries::from_i64(&a, order), QSeries::from_i64(&b, order), QSeries::from_i64(&c, order));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn kronecker_agrees_with_schoolbook(
            a in prop::collection::vec(any::<i64>(), 1..30),
            b in prop::collection::vec(any::<i64>(), 1..30),
        ) {
            let order = 40;
            let (a, b) = (QSeries::from_i64(&a, order), QSeries::from_i64(&b, order));
            let fast = kronecker(a.coefficients(), b.coefficients(), order);
            let mut slow = vec![Integer::new(); order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    slow[i + j] += Integer::from(a.coefficient(i) * b.coefficient(j));
                }
            }
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn truncation_order_is_minimum(n in 1usize..50, m in 1usize..50) {
            let p = &QSeries::one(n) * &QSeries::one(m);
            prop_assert_eq!(p.order(), n.min(m));
        }
    }
}
