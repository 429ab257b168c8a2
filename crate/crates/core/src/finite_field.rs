//! Characters of `F_p`, Greene's hypergeometric functions and point counts on
//! `(x²+1)(y²+1)(z²+1)(w²+1) = 16t·xyzw`.

use num_complex::Complex64;
use rug::ops::Pow;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modular::NewformSpec;
use crate::precision::{Integer, Rational};

/// Largest prime accepted by [`count_points`].
pub const MAX_COUNT_PRIME: u64 = 199;
/// Largest prime accepted by [`verify_4_1`].
pub const MAX_FORMULA_PRIME: u64 = 50;
const MAX_PRIMALITY_CHECK: u64 = 1_000_000;
/// Allowed distance from an integer before rounding a character sum.
const ROUNDING_SLACK: f64 = 1e-6;

fn check_odd_prime(p: u64) -> Result<()> {
    if p >= MAX_PRIMALITY_CHECK {
        return Err(Error::InvalidArgument(format!("primes are checked below {MAX_PRIMALITY_CHECK}, got {p}")));
    }
    let composite = p < 3 || p.is_multiple_of(2) || (3..).step_by(2).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d));
    if composite {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Quadratic residue symbol by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// The `p − 1` multiplicative characters `χ_j(g^a) = ω^{ja}`,
/// `ω = e^{2πi/(p−1)}`, extended by `χ_j(0) = 0` (the trivial one included).
#[derive(Debug, Clone)]
pub struct CharTable {
    pub prime: u64,
    pub generator: u64,
    log: Vec<usize>,
    roots: Vec<Complex64>,
}

impl CharTable {
    pub fn new(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let m = p - 1;
        let factors: Vec<u64> = (2..=m).filter(|q| m.is_multiple_of(*q) && (2..*q).all(|d| q % d != 0)).collect();
        let generator = (2..p)
            .find(|&g| factors.iter().all(|q| pow_mod(g, m / q, p) != 1))
            .unwrap_or(2);
        let mut log = vec![usize::MAX; p as usize];
        let mut x = 1u64;
        for a in 0..m as usize {
            log[x as usize] = a;
            x = x * generator % p;
        }
        let roots = (0..m)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64))
            .collect();
        Ok(Self { prime: p, generator, log, roots })
    }

    pub fn order(&self) -> usize {
        self.prime as usize - 1
    }

    /// Index of the quadratic character.
    pub fn quadratic(&self) -> usize {
        self.order() / 2
    }

    /// `χ_j(x)`.
    pub fn value(&self, j: usize, x: i64) -> Complex64 {
        let r = x.rem_euclid(self.prime as i64) as usize;
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.roots[j * self.log[r] % self.order()]
    }

    /// `J(χ_a, χ_b) = Σ_x χ_a(x) χ_b(1 − x)`.
    pub fn jacobi(&self, a: usize, b: usize) -> Complex64 {
        (2..self.prime as i64).map(|x| self.value(a, x) * self.value(b, 1 - x)).sum()
    }

    /// Greene's binomial `(A over B) = B(−1)/p · J(A, B̄)`.
    pub fn binomial(&self, a: usize, b: usize) -> Complex64 {
        let m = self.order();
        let b_bar = (m - b % m) % m;
        self.value(b, -1) * self.jacobi(a % m, b_bar) / self.prime as f64
    }
}

/// `_{n+1}F_n(φ, …, φ; ε, …, ε | x) = p/(p−1) Σ_χ (φχ over χ)^{n+1} χ(x)`,
/// returned exactly: `pⁿ·F` is rounded to the nearest integer.
pub fn greene_nfn(p: u64, n: u32, x: i64) -> Result<Rational> {
    if n != 1 && n != 3 {
        return Err(Error::InvalidArgument(format!("only ₂F₁ and ₄F₃ are supported, got n = {n}")));
    }
    let table = CharTable::new(p)?;
    greene_with_table(&table, n, x)
}

fn greene_with_table(table: &CharTable, n: u32, x: i64) -> Result<Rational> {
    let p = table.prime;
    if x.rem_euclid(p as i64) == 0 {
        return Ok(Rational::new());
    }
    let h = table.quadratic();
    let sum: Complex64 = (0..table.order())
        .map(|j| table.binomial(h + j, j).powu(n + 1) * table.value(j, x))
        .sum();
    let scaled = sum * (p as f64 / (p - 1) as f64) * (p as f64).powi(n as i32);
    let nearest = scaled.re.round();
    let residue = (scaled - Complex64::new(nearest, 0.0)).norm();
    if residue > ROUNDING_SLACK {
        return Err(Error::Consistency(format!(
            "p^{n}·F(p={p}, x={x}) = {scaled} is not within {ROUNDING_SLACK} of an integer"
        )));
    }
    Ok(Rational::from((Integer::from(nearest as i64), Integer::from(p).pow(n))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointCount {
    pub prime: u64,
    pub parameter: i64,
    pub count: u64,
}

/// Affine points of `H_t` over `F_p`: for each `(x, y, z)` the equation is a
/// quadratic `A w² − B w + A = 0` in `w`.
pub fn count_points(p: u64, t: i64) -> Result<PointCount> {
    check_odd_prime(p)?;
    if p > MAX_COUNT_PRIME {
        return Err(Error::Resource(format!("point counting is limited to p ≤ {MAX_COUNT_PRIME}, got {p}")));
    }
    let pi = p as i64;
    let t = t.rem_euclid(pi);
    let sq1: Vec<i64> = (0..pi).map(|x| (x * x + 1) % pi).collect();
    // Euler's criterion per residue, indexed by value.
    let chi: Vec<i64> = (0..pi)
        .map(|v| if v == 0 { 0 } else if pow_mod(v as u64, (p - 1) / 2, p) == 1 { 1 } else { -1 })
        .collect();
    let count: i64 = (0..pi)
        .into_par_iter()
        .map(|x| {
            let mut c = 0i64;
            for y in 0..pi {
                for z in 0..pi {
                    let a = sq1[x as usize] * sq1[y as usize] % pi * sq1[z as usize] % pi;
                    let b = 16 * t % pi * x % pi * y % pi * z % pi;
                    c += if a != 0 {
                        1 + chi[((b * b - 4 * a * a) % pi + pi) as usize % pi as usize]
                    } else if b == 0 {
                        pi
                    } else {
                        1
                    };
                }
            }
            c
        })
        .sum();
    Ok(PointCount { prime: p, parameter: t, count: count as u64 })
}

/// One row of [`verify_4_1`]; `residual = formula − count`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaRow {
    pub t: i64,
    pub count: u64,
    pub formula: Rational,
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaReport {
    pub prime: u64,
    pub rows: Vec<FormulaRow>,
}

impl FormulaReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.residual == 0)
    }

    pub fn max_abs_residual(&self) -> Rational {
        self.rows.iter().map(|r| Rational::from(r.residual.abs_ref())).max().unwrap_or_default()
    }
}

/// `p³₄F₃(t²) + 4φ(−1)p²₂F₁(t²) − 3ε(t²−1)p² + p³ + 8(φ(−1)+1)p²
///  − 16(φ(−1)+1)p − 3p + 8(φ(−1)+1) + 1 + offset`.
fn formula(table: &CharTable, t: i64, offset: i64) -> Result<Rational> {
    let p = table.prime as i64;
    let t2 = (t * t).rem_euclid(p);
    let phi = i64::from(legendre(-1, table.prime)?);
    let eps = i64::from((t2 - 1).rem_euclid(p) != 0);
    let f43 = greene_with_table(table, 3, t2)?;
    let f21 = greene_with_table(table, 1, t2)?;
    let poly = -3 * eps * p * p + p * p * p + 8 * (phi + 1) * p * p - 16 * (phi + 1) * p - 3 * p + 8 * (phi + 1) + 1;
    Ok(f43 * Rational::from(p * p * p) + f21 * Rational::from(4 * phi * p * p) + Rational::from(poly + offset))
}

/// Compares the displayed point-count formula with [`count_points`] for
/// every `t ∈ F_p*`.
pub fn verify_4_1(p: u64) -> Result<FormulaReport> {
    verify_4_1_with_offset(p, 0)
}

/// [`verify_4_1`] with `offset` added to the formula's constant term.
pub fn verify_4_1_with_offset(p: u64, offset: i64) -> Result<FormulaReport> {
    check_odd_prime(p)?;
    if p > MAX_FORMULA_PRIME {
        return Err(Error::Resource(format!("formula check is limited to p ≤ {MAX_FORMULA_PRIME}, got {p}")));
    }
    let table = CharTable::new(p)?;
    let rows = (1..p as i64)
        .map(|t| {
            let count = count_points(p, t)?.count;
            let formula = formula(&table, t, offset)?;
            let residual = Rational::from(&formula - Integer::from(count));
            Ok(FormulaRow { t, count, formula, residual })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormulaReport { prime: p, rows })
}

/// `(p³·₄F₃(1), −a_p − p)` with `a_p` the coefficient of the weight-4
/// level-8 eta product.
pub fn ahlgren_ono(p: u64) -> Result<(Rational, Integer)> {
    let lhs = greene_nfn(p, 3, 1)? * Rational::from(Integer::from(p).pow(3));
    let a_p = NewformSpec::f().coefficient(p as usize)?;
    Ok((lhs, -a_p - p))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_PRIMES: [u64; 14] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

    fn exhaustive_count(p: u64, t: i64) -> u64 {
        let p = p as i64;
        let mut c = 0;
        for x in 0..p {
            for y in 0..p {
                for z in 0..p {
                    for w in 0..p {
                        let lhs = (x * x + 1) * (y * y + 1) % p * (z * z + 1) % p * (w * w + 1) % p;
                        if (lhs - 16 * t % p * x % p * y % p * z % p * w).rem_euclid(p) == 0 {
                            c += 1;
                        }
                    }
                }
            }
        }
        c
    }

    #[test]
    fn legendre_supplements() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(-1, 3).unwrap(), -1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        for p in [4, 9, 2, 1, 91] {
            assert!(matches!(legendre(1, p), Err(Error::InvalidArgument(_))), "{p}");
        }
    }

    #[test]
    fn quadratic_reciprocity() {
        for &p in &SMALL_PRIMES {
            for &q in &SMALL_PRIMES {
                if p == q {
                    continue;
                }
                let sign = if (p % 4 == 3) && (q % 4 == 3) { -1 } else { 1 };
                assert_eq!(legendre(p as i64, q).unwrap() * legendre(q as i64, p).unwrap(), sign);
            }
        }
    }

    #[test]
    fn character_orthogonality_and_jacobi_sums() {
        for &p in &SMALL_PRIMES {
            let t = CharTable::new(p).unwrap();
            for j in 0..t.order() {
                let s: Complex64 = (0..p as i64).map(|x| t.value(j, x)).sum();
                let expected = if j == 0 { (p - 1) as f64 } else { 0.0 };
                assert!((s - expected).norm() < 1e-9, "p={p} j={j}");
                if j != 0 {
                    let jac = t.jacobi(j, t.order() - j);
                    assert!((jac + t.value(j, -1)).norm() < 1e-9, "p={p} j={j}");
                }
            }
            for x in 0..p as i64 {
                let phi = f64::from(legendre(x, p).unwrap());
                assert!((t.value(t.quadratic(), x) - phi).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn two_counting_methods_agree() {
        for p in [3u64, 5, 7] {
            for t in 0..p as i64 {
                assert_eq!(count_points(p, t).unwrap().count, exhaustive_count(p, t), "p={p} t={t}");
            }
        }
        assert_eq!(count_points(13, 1).unwrap().count, exhaustive_count(13, 1));
        assert_eq!(count_points(3, 0).unwrap().count, 0);
        assert!(matches!(count_points(211, 1), Err(Error::Resource(_))));
    }

    #[test]
    fn degenerate_arguments() {
        assert_eq!(greene_nfn(7, 3, 0).unwrap(), 0);
        assert_eq!(greene_nfn(7, 1, 14).unwrap(), 0);
        assert!(matches!(greene_nfn(7, 2, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn two_f_one_matches_legendre_sum() {
        // ₂F₁(x) = φ(−1)/p · Σ_y φ(y)φ(1−y)φ(1−xy) for x ≠ 0
        for &p in &SMALL_PRIMES[..8] {
            for x in 1..p as i64 {
                let s: i64 = (0..p as i64)
                    .map(|y| {
                        i64::from(legendre(y, p).unwrap() * legendre(1 - y, p).unwrap() * legendre(1 - x * y, p).unwrap())
                    })
                    .sum();
                let expected = Rational::from((s * i64::from(legendre(-1, p).unwrap()), p as i64));
                assert_eq!(greene_nfn(p, 1, x).unwrap(), expected, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn weil_bound() {
        for &p in &SMALL_PRIMES {
            for x in 1..p as i64 {
                let v = greene_nfn(p, 1, x).unwrap() * Rational::from(p);
                assert!(v.to_f64().abs() <= 4.0 * (p as f64).sqrt(), "p={p} x={x}");
            }
        }
    }

    #[test]
    fn deligne_bound() {
        let f = NewformSpec::f();
        for p in (3..100u64).filter(|&p| check_odd_prime(p).is_ok()) {
            let a = f.coefficient(p as usize).unwrap().to_f64();
            assert!(a.abs() <= 2.0 * (p as f64).powf(1.5), "p={p}");
        }
    }

    #[test]
    fn ahlgren_ono_relation() {
        let (lhs, rhs) = ahlgren_ono(3).unwrap();
        assert_eq!(lhs, 1);
        assert_eq!(rhs, 1);
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            let (lhs, rhs) = ahlgren_ono(p).unwrap();
            assert_eq!(lhs, rhs, "p={p}");
        }
    }

    #[test]
    fn formula_at_primes_congruent_to_three() {
        for p in [3u64, 7, 11, 19, 23, 31, 43, 47] {
            let r = verify_4_1(p).unwrap();
            assert!(r.passed(), "p={p}: {:?}", r.rows.iter().find(|x| x.residual != 0));
        }
    }

    #[test]
    fn formula_residual_at_primes_congruent_to_one() {
        // The displayed constant exceeds the count by 16(φ(−1)+1) = 32 at
        // every t whenever −1 is a square.
        for p in [5u64, 13, 17, 29] {
            let r = verify_4_1(p).unwrap();
            assert!(r.rows.iter().all(|x| x.residual == 32), "p={p}");
        }
    }

    #[test]
    fn perturbed_constant_shifts_every_residual() {
        for p in [3u64, 7] {
            let r = verify_4_1_with_offset(p, 1).unwrap();
            assert!(r.rows.iter().all(|x| x.residual == 1));
        }
        assert!(matches!(verify_4_1(53), Err(Error::Resource(_))));
    }

    #[test]
    fn formula_and_ahlgren_ono_at_t_one() {
        // Eliminate ₄F₃(1) using −a_p − p and solve for ₂F₁(1).
        for p in [3u64, 7, 11, 19, 23] {
            let table = CharTable::new(p).unwrap();
            let (_, ao) = ahlgren_ono(p).unwrap();
            let phi = i64::from(legendre(-1, p).unwrap());
            let pi = p as i64;
            let count = count_points(p, 1).unwrap().count as i64;
            let rest = Rational::from(ao) + Rational::from(pi * pi * pi + 8 * (phi + 1) * pi * pi - 16 * (phi + 1) * pi - 3 * pi + 8 * (phi + 1) + 1);
            let derived = (Rational::from(count) - rest) / Rational::from(4 * phi * pi * pi);
            assert_eq!(derived, greene_with_table(&table, 1, 1).unwrap(), "p={p}");
        }
    }
}
