//! Exact rational verification of WZ pairs and the binomial sums they
//! certify.

use std::fmt;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::precision::{extrapolate_nodes, Extrapolation, Integer, Rational, Real, TailBasis};

/// `C(n, k)` by the multiplicative formula; every partial product is an
/// exact binomial coefficient.
pub fn binom(n: i64, k: i64) -> Result<Integer> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::InvalidArgument(format!("binom needs 0 ≤ k ≤ n, got ({n}, {k})")));
    }
    let k = k.min(n - k);
    let mut r = Integer::from(1);
    for i in 0..k {
        r *= n - i;
        r.div_exact_mut(&Integer::from(i + 1));
    }
    Ok(r)
}

/// Central binomial coefficients `C(2j, j)` for `j = 0..len`.
fn central(len: usize) -> Vec<Integer> {
    let mut out = Vec::with_capacity(len);
    let mut c = Integer::from(1);
    for j in 0..len as u64 {
        out.push(c.clone());
        // C(2j+2, j+1) = C(2j, j)·2(2j+1)/(j+1)
        c *= 2 * (2 * j + 1);
        c.div_exact_mut(&Integer::from(j + 1));
    }
    out
}

type Term = Box<dyn Fn(i64, i64) -> Rational + Send + Sync>;

/// Functions with `f(n+1,k) − f(n,k) = g(n,k+1) − g(n,k)`.
pub struct WZPair {
    pub name: String,
    pub f: Term,
    pub g: Term,
}

impl fmt::Debug for WZPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WZPair").field("name", &self.name).finish()
    }
}

static CENTRAL_SQUARES: RwLock<Vec<Integer>> = RwLock::new(Vec::new());

/// `C(2j, j)²`, cached.
fn central_square(j: i64) -> Integer {
    let j = usize::try_from(j).expect("index ≥ 0");
    if let Some(v) = CENTRAL_SQUARES.read().unwrap_or_else(|e| e.into_inner()).get(j) {
        return v.clone();
    }
    let mut cache = CENTRAL_SQUARES.write().unwrap_or_else(|e| e.into_inner());
    if cache.len() <= j {
        let grown = central((j + 1).max(2 * cache.len()));
        *cache = grown.into_iter().map(|c| Integer::from(&c * &c)).collect();
    }
    cache[j].clone()
}

/// `C(2k,k)²·C(2n,n)²/2^{4k+4n}` as an exact rational.
fn kernel(n: i64, k: i64) -> Rational {
    let num = central_square(n) * central_square(k);
    Rational::from(num) >> (4 * (k + n)) as u32
}

impl WZPair {
    /// The pair whose `f` has the denominator `2n − 2k + 1`.
    pub fn odd_denominator() -> Self {
        Self {
            name: "odd-denominator pair".into(),
            f: Box::new(|n, k| kernel(n, k) * Rational::from(((2 * n + 1) * (2 * n + 1), 2 * n - 2 * k + 1))),
            g: Box::new(|n, k| {
                let r = Rational::from((k * k * (2 * n + 1) * (2 * n + 1), (n + 1) * (n + 1) * (2 * n - 2 * k + 3)));
                -kernel(n, k) * r
            }),
        }
    }

    /// The pair whose `f` has the denominator `n + k + 1`.
    pub fn sum_denominator() -> Self {
        Self {
            name: "sum-denominator pair".into(),
            f: Box::new(|n, k| kernel(n, k) * Rational::from(((2 * n + 1) * (2 * n + 1), n + k + 1))),
            g: Box::new(|n, k| {
                kernel(n, k) * Rational::from((k * k * (2 * n + 1) * (2 * n + 1), (n + 1) * (n + 1) * (n + k + 1)))
            }),
        }
    }

    /// The same `f` with `g` multiplied by `factor`.
    pub fn with_scaled_g(self, factor: i64) -> Self {
        let g = self.g;
        Self {
            name: format!("{} with g×{factor}", self.name),
            f: self.f,
            g: Box::new(move |n, k| g(n, k) * Rational::from(factor)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub n: i64,
    pub k: i64,
    pub residual: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WzReport {
    pub name: String,
    pub checked: u64,
    /// Sorted by `(n, k)`.
    pub violations: Vec<Violation>,
}

impl WzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the pair relation at every `0 ≤ k ≤ n ≤ n_max`.
///
/// The residual reported at `(n, k)` is
/// `f(n+1,k) − f(n,k) − g(n,k+1) + g(n,k)`.
pub fn wz_pair_verify(pair: &WZPair, n_max: i64) -> Result<WzReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 1, got {n_max}")));
    }
    let rows: Vec<(u64, Vec<Violation>)> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut bad = Vec::new();
            for k in 0..=n {
                let residual = (pair.f)(n + 1, k) - (pair.f)(n, k) - (pair.g)(n, k + 1) + (pair.g)(n, k);
                if residual != 0 {
                    bad.push(Violation { n, k, residual });
                }
            }
            (n as u64 + 1, bad)
        })
        .collect();
    let checked = rows.iter().map(|(c, _)| c).sum();
    let violations = rows.into_iter().flat_map(|(_, v)| v).collect();
    Ok(WzReport { name: pair.name.clone(), checked, violations })
}

/// Checks `h(n) = h(0) + Σ_{j=1}^{n} (f(j,j) + g(j−1,j) − g(j−1,0))` against
/// `h(n) = Σ_{k≤n} f(n,k)` for every `n ≤ n_max`.
///
/// Violations carry `k = n` and the difference between the telescoped and
/// the direct value.
pub fn telescope_reconstruct(pair: &WZPair, n_max: i64) -> Result<WzReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 1, got {n_max}")));
    }
    let steps: Vec<Rational> = (1..=n_max)
        .into_par_iter()
        .map(|j| (pair.f)(j, j) + (pair.g)(j - 1, j) - (pair.g)(j - 1, 0))
        .collect();
    let direct: Vec<Rational> = (0..=n_max)
        .into_par_iter()
        .map(|n| (0..=n).map(|k| (pair.f)(n, k)).fold(Rational::new(), |a, b| a + b))
        .collect();
    let mut h = (pair.f)(0, 0);
    let mut violations = Vec::new();
    for n in 0..=n_max {
        if n > 0 {
            h += &steps[n as usize - 1];
        }
        let residual = Rational::from(&h - &direct[n as usize]);
        if residual != 0 {
            violations.push(Violation { n, k: n, residual });
        }
    }
    Ok(WzReport { name: pair.name.clone(), checked: n_max as u64 + 1, violations })
}

/// The three sides
/// `Σ C(2k,k)²/(2^{4k}(2n−2k+1))`, `Σ C(2k,k)²/(2^{4k}(n+k+1))` and
/// `2^{4n}/((2n+1)²C(2n,n)²) · Σ (4k+1)C(2k,k)⁴/2^{8k}`, sums over `0 ≤ k ≤ n`.
pub fn identity_2_8_2_9(n: i64) -> Result<(Rational, Rational, Rational)> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("n must be nonnegative, got {n}")));
    }
    let c = central(n as usize + 1);
    let mut a = Rational::new();
    let mut b = Rational::new();
    let mut s = Rational::new();
    for k in 0..=n {
        let ck = &c[k as usize];
        let sq = Rational::from(Integer::from(ck * ck)) >> (4 * k) as u32;
        a += &sq / Rational::from(2 * n - 2 * k + 1);
        b += &sq / Rational::from(n + k + 1);
        s += Rational::from(&sq * &sq) * Rational::from(4 * k + 1);
    }
    let cn = &c[n as usize];
    let scale = Rational::from((Integer::from(1) << (4 * n) as u32, Integer::from(cn * cn) * ((2 * n + 1) * (2 * n + 1))));
    Ok((a, b, s * scale))
}

/// Checks the triple equality for every `n ≤ n_max`; violations carry
/// `k = 0` for the first equality and `k = 1` for the second.
pub fn identity_2_8_2_9_range(n_max: i64) -> Result<WzReport> {
    if n_max < 0 {
        return Err(Error::InvalidArgument(format!("n_max must be nonnegative, got {n_max}")));
    }
    let rows: Vec<Result<Vec<Violation>>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let (a, b, c) = identity_2_8_2_9(n)?;
            let mut bad = Vec::new();
            for (k, residual) in [(0, Rational::from(&a - &b)), (1, Rational::from(&b - &c))] {
                if residual != 0 {
                    bad.push(Violation { n, k, residual });
                }
            }
            Ok(bad)
        })
        .collect();
    let mut violations = Vec::new();
    for r in rows {
        violations.extend(r?);
    }
    Ok(WzReport { name: "binomial triple identity".into(), checked: n_max as u64 + 1, violations })
}

/// Exact partial sums `S_n = Σ_{k≤n} (4k+1) C(2k,k)⁴ / 2^{8k}`, held as the
/// integers `2^{8n} S_n`.
#[derive(Debug, Clone)]
pub struct RamanujanPartialSums {
    n: u64,
    central: Integer,
    scaled: Integer,
}

impl Default for RamanujanPartialSums {
    fn default() -> Self {
        Self::new()
    }
}

impl RamanujanPartialSums {
    pub fn new() -> Self {
        Self { n: 0, central: Integer::from(1), scaled: Integer::from(1) }
    }

    /// Index of the current partial sum.
    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn exact(&self) -> Rational {
        Rational::from(self.scaled.clone()) >> (8 * self.n) as u32
    }

    pub fn to_real(&self, prec: u32) -> Real {
        Real::with_val(prec, &self.scaled) >> (8 * self.n) as u32
    }

    pub fn advance(&mut self) {
        let n = self.n;
        self.central *= 2 * (2 * n + 1);
        self.central.div_exact_mut(&Integer::from(n + 1));
        let c2 = Integer::from(&self.central * &self.central);
        let c4 = Integer::from(&c2 * &c2);
        self.scaled <<= 8;
        self.scaled += c4 * (4 * n + 5);
        self.n += 1;
    }
}

/// Least-squares slope of `S_n` against `log n` over `n_lo ≤ n ≤ n_hi`
/// sampled at 64 log-spaced points; tends to `4/π²`.
pub fn ramanujan_growth_slope(n_lo: u64, n_hi: u64) -> Result<f64> {
    if n_lo < 1 || n_hi <= n_lo {
        return Err(Error::InvalidArgument(format!("need 1 ≤ n_lo < n_hi, got ({n_lo}, {n_hi})")));
    }
    let samples: Vec<u64> = (0..64)
        .map(|i| {
            let t = f64::from(i) / 63.0;
            ((n_lo as f64).ln() * (1.0 - t) + (n_hi as f64).ln() * t).exp().round() as u64
        })
        .collect();
    let mut points = Vec::with_capacity(samples.len());
    let mut sums = RamanujanPartialSums::new();
    for &n in &samples {
        while sums.index() < n {
            sums.advance();
        }
        points.push(((n as f64).ln(), sums.to_real(64).to_f64()));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Default number of doubling nodes `N = 32·2^i` for [`ramanujan_double_sum`].
pub const DOUBLE_SUM_LEVELS: u32 = 10;

/// `Σ_{n≥0} S_n/(2n+1)²` with the exact `S_n` of [`RamanujanPartialSums`].
///
/// The outer partial sums at `N = 32·2^i` are extrapolated in the basis
/// `N^{-j}, N^{-j} log N`.
pub fn ramanujan_double_sum(prec: u32, levels: u32) -> Result<Extrapolation> {
    if levels < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 levels, got {levels}")));
    }
    let wp = 2 * prec + 64;
    let last = 32u64 << (levels - 1);
    let mut sums = RamanujanPartialSums::new();
    let mut outer = Real::with_val(wp, 0);
    let mut nodes = Vec::with_capacity(levels as usize);
    let mut next = 32u64;
    for n in 0..last {
        let d = 2 * n + 1;
        outer += sums.to_real(wp) / (d * d);
        if n + 1 == next {
            nodes.push((next, outer.clone()));
            next *= 2;
        }
        sums.advance();
    }
    extrapolate_nodes(&nodes, TailBasis::with_log(1))
}
