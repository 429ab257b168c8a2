//! Sequence acceleration: Levin u, Richardson and Wynn epsilon.

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::precision::{real, Real};

/// Minimum number of partial sums accepted by [`accelerate`].
pub const MIN_PARTIAL_SUMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    LevinU,
    Richardson,
    WynnEpsilon,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "levin-u" | "levin" => Ok(Scheme::LevinU),
            "richardson" => Ok(Scheme::Richardson),
            "wynn-epsilon" | "wynn" | "epsilon" => Ok(Scheme::WynnEpsilon),
            other => Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Extrapolation {
    pub value: Real,
    /// Heuristic: difference between the last two extrapolants.
    pub error_estimate: f64,
    pub low_confidence: bool,
}

/// Extrapolates the limit of consecutive partial sums `S_0, S_1, …`.
///
/// The input is taken at face value; the caller supplies sums computed at
/// whatever precision the cancellation inside the scheme requires.
pub fn accelerate(partial_sums: &[Real], scheme: Scheme) -> Result<Extrapolation> {
    if partial_sums.len() < MIN_PARTIAL_SUMS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_PARTIAL_SUMS} partial sums, got {}",
            partial_sums.len()
        )));
    }
    let prec = partial_sums.iter().map(Real::prec).max().unwrap_or(64);
    let mut out = match scheme {
        Scheme::LevinU => {
            let a = levin_u(partial_sums, prec)?;
            let b = levin_u(&partial_sums[..partial_sums.len() - 1], prec)?;
            finish(a, &b, prec)
        }
        Scheme::Richardson => {
            let m = partial_sums.len();
            let a = richardson_consecutive(partial_sums, prec);
            let b = richardson_consecutive(&partial_sums[..m - 1], prec);
            finish(a, &b, prec)
        }
        Scheme::WynnEpsilon => wynn_epsilon(partial_sums, prec),
    };
    if !smooth_terms(partial_sums) {
        out.low_confidence = true;
    }
    Ok(out)
}

fn finish(value: Real, previous: &Real, prec: u32) -> Extrapolation {
    let err = Real::with_val(prec, &value - previous).abs().to_f64();
    let scale = value.to_f64().abs().max(1e-300);
    Extrapolation {
        low_confidence: !err.is_finite() || err > 1e-3 * scale.max(1.0),
        value,
        error_estimate: err,
    }
}

/// Terms either keep one sign or alternate strictly.
fn smooth_terms(sums: &[Real]) -> bool {
    let signs: Vec<i32> = sums
        .windows(2)
        .map(|w| match w[1].partial_cmp(&w[0]) {
            Some(std::cmp::Ordering::Greater) => 1,
            Some(std::cmp::Ordering::Less) => -1,
            _ => 0,
        })
        .collect();
    let constant = signs.iter().all(|&s| s == signs[0]);
    let alternating = signs.windows(2).all(|w| w[0] == -w[1] && w[0] != 0);
    constant || alternating
}

/// Levin u-transform `T_k^{(0)}` over all supplied sums, remainder estimate
/// `(n + 1)·a_n`.
fn levin_u(sums: &[Real], prec: u32) -> Result<Real> {
    let wp = prec + 32;
    let k = sums.len() - 1;
    let beta = 1u32;
    let mut num = real(wp, 0);
    let mut den = real(wp, 0);
    let mut binom = real(wp, 1);
    let base = Real::with_val(wp, beta + k as u32);
    for (j, s) in sums.iter().enumerate() {
        let term = if j == 0 {
            Real::with_val(wp, s)
        } else {
            Real::with_val(wp, s - &sums[j - 1])
        };
        if term.is_zero() {
            // A vanishing term means the sequence has already converged.
            return Ok(Real::with_val(prec, s));
        }
        let omega = term * (beta + j as u32);
        let ratio = Real::with_val(wp, beta + j as u32) / &base;
        let scale = ratio.pow(k as i32 - 1);
        let mut w = Real::with_val(wp, &binom * &scale) / &omega;
        if j % 2 == 1 {
            w = -w;
        }
        num += Real::with_val(wp, &w * s);
        den += &w;
        // C(k, j+1) = C(k, j)·(k − j)/(j + 1)
        binom *= (k - j) as u32;
        binom /= (j + 1) as u32;
    }
    if den.is_zero() {
        return Err(Error::Consistency("Levin u denominator vanished".into()));
    }
    Ok(Real::with_val(prec, num / den))
}

/// Polynomial extrapolation in `1/n` over the last half of the sums, where
/// `S_i` is the sum of the first `i + 1` terms.
fn richardson_consecutive(sums: &[Real], prec: u32) -> Real {
    let m = sums.len();
    let first = m / 2;
    let xs: Vec<Real> = (first..m).map(|i| real(prec + 64, 1) / (i as u32 + 1)).collect();
    let ys: Vec<Real> = sums[first..].iter().map(|s| Real::with_val(prec + 64, s)).collect();
    Real::with_val(prec, neville_at_zero(&xs, &ys))
}

/// Neville's scheme evaluated at `x = 0`.
fn neville_at_zero(xs: &[Real], ys: &[Real]) -> Real {
    let mut p: Vec<Real> = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let xi = &xs[i];
            let xj = &xs[i + level];
            // P = (x_j·P_i − x_i·P_{i+1}) / (x_j − x_i) evaluated at 0
            let num = Real::with_val(xi.prec(), xj * &p[i]) - Real::with_val(xi.prec(), xi * &p[i + 1]);
            let den = Real::with_val(xi.prec(), xj - xi);
            p[i] = num / den;
        }
    }
    p.swap_remove(0)
}

fn wynn_epsilon(sums: &[Real], prec: u32) -> Extrapolation {
    let wp = prec + 32;
    let n = sums.len();
    // prev = column k-1, cur = column k
    let mut prev: Vec<Real> = vec![real(wp, 0); n + 1];
    let mut cur: Vec<Real> = sums.iter().map(|s| Real::with_val(wp, s)).collect();
    let mut best = cur[n - 1].clone();
    let mut best_prev = cur[n.saturating_sub(2)].clone();
    let mut k = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut degenerate = false;
        for i in 0..cur.len() - 1 {
            let d = Real::with_val(wp, &cur[i + 1] - &cur[i]);
            if d.is_zero() {
                degenerate = true;
                break;
            }
            next.push(Real::with_val(wp, &prev[i + 1] + d.recip()));
        }
        if degenerate {
            break;
        }
        k += 1;
        prev = cur;
        cur = next;
        if k.is_multiple_of(2) {
            let last = cur.len() - 1;
            best_prev = if last > 0 { cur[last - 1].clone() } else { best.clone() };
            best = cur[last].clone();
        }
    }
    let value = Real::with_val(prec, &best);
    finish(value, &best_prev, prec)
}

/// Shape of the remainder `S − S_N` used by [`extrapolate_nodes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBasis {
    /// The remainder decays like `N^{-leading}`.
    pub leading: u32,
    /// Include `N^{-j}·log N` companions (single power of the logarithm).
    pub logarithmic: bool,
}

impl TailBasis {
    pub fn power(leading: u32) -> Self {
        Self { leading, logarithmic: false }
    }

    pub fn with_log(leading: u32) -> Self {
        Self { leading, logarithmic: true }
    }

    fn eval(&self, index: usize, n: u64, prec: u32) -> Real {
        let nn = real(prec, n);
        let (power, log) = if self.logarithmic {
            (self.leading + (index / 2) as u32, index.is_multiple_of(2))
        } else {
            (self.leading + index as u32, false)
        };
        let mut v = Real::with_val(prec, nn.clone().pow(power)).recip();
        if log {
            v *= nn.ln();
        }
        v
    }
}

/// Generalised Richardson extrapolation over sparse nodes.
///
/// Fits `S_N = S + Σ_j c_j g_j(N)` through every `(N, S_N)` node, where the
/// `g_j` come from `basis`, and returns `S`. The error estimate compares
/// against the fit that drops the smallest node.
pub fn extrapolate_nodes(nodes: &[(u64, Real)], basis: TailBasis) -> Result<Extrapolation> {
    if nodes.len() < 3 {
        return Err(Error::InvalidArgument("need at least 3 nodes".into()));
    }
    let prec = nodes.iter().map(|(_, s)| s.prec()).max().unwrap_or(64);
    let full = fit_limit(nodes, basis, prec)?;
    let reduced = fit_limit(&nodes[1..], basis, prec)?;
    Ok(finish(full, &reduced, prec))
}

fn fit_limit(nodes: &[(u64, Real)], basis: TailBasis, prec: u32) -> Result<Real> {
    let wp = prec + 64;
    let m = nodes.len();
    let mut a: Vec<Vec<Real>> = nodes
        .iter()
        .map(|(n, s)| {
            let mut row = Vec::with_capacity(m + 1);
            row.push(real(wp, 1));
            for j in 0..m - 1 {
                row.push(basis.eval(j, *n, wp));
            }
            row.push(Real::with_val(wp, s));
            row
        })
        .collect();
    // Column scaling keeps pivots comparable.
    for j in 1..m {
        let scale = a.iter().map(|r| r[j].clone().abs()).fold(real(wp, 0), |x, y| x.max(&y));
        if !scale.is_zero() {
            for row in a.iter_mut() {
                row[j] /= &scale;
            }
        }
    }
    let x = solve(a, wp)?;
    Ok(Real::with_val(prec, &x[0]))
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<Real>>, prec: u32) -> Result<Vec<Real>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap())
            .unwrap();
        if a[pivot][col].is_zero() {
            return Err(Error::Consistency("singular extrapolation system".into()));
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let factor = Real::with_val(prec, &a[row][col] / &a[col][col]);
            if factor.is_zero() {
                continue;
            }
            for k in col..=n {
                let t = Real::with_val(prec, &factor * &a[col][k]);
                a[row][k] -= t;
            }
        }
    }
    let mut x = vec![real(prec, 0); n];
    for row in (0..n).rev() {
        let mut s = a[row][n].clone();
        for k in row + 1..n {
            s -= Real::with_val(prec, &a[row][k] * &x[k]);
        }
        x[row] = s / &a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{abs_diff_f64, const_pi, ln2};

    fn basel_sums(count: usize, prec: u32) -> Vec<Real> {
        let mut s = real(prec, 0);
        (1..=count as u32)
            .map(|n| {
                s += real(prec, 1) / (u64::from(n) * u64::from(n));
                s.clone()
            })
            .collect()
    }

    fn basel(prec: u32) -> Real {
        let pi = const_pi(prec).unwrap();
        Real::with_val(prec, &pi * &pi) / 6u32
    }

    #[test]
    fn wynn_alternating_harmonic() {
        let prec = 128;
        let mut s = real(prec, 0);
        let sums: Vec<Real> = (0..20u32)
            .map(|n| {
                let t = real(prec, 1) / (n + 1);
                if n % 2 == 0 {
                    s += t;
                } else {
                    s -= t;
                }
                s.clone()
            })
            .collect();
        let r = accelerate(&sums, Scheme::WynnEpsilon).unwrap();
        assert!(abs_diff_f64(&r.value, &ln2(prec)) < 1e-10, "{}", r.value);
        assert!(!r.low_confidence);
    }

    #[test]
    fn richardson_basel() {
        let prec = 128;
        let r = accelerate(&basel_sums(30, prec), Scheme::Richardson).unwrap();
        assert!(abs_diff_f64(&r.value, &basel(prec)) < 1e-12, "{}", r.value);
    }

    #[test]
    fn levin_basel() {
        let prec = 256;
        let r = accelerate(&basel_sums(40, prec), Scheme::LevinU).unwrap();
        assert!(abs_diff_f64(&r.value, &basel(prec)) < 1e-20, "{}", r.value);
    }

    #[test]
    fn too_few_sums_rejected() {
        let sums = basel_sums(5, 64);
        assert!(matches!(accelerate(&sums, Scheme::LevinU), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn erratic_input_flagged() {
        let prec = 64;
        let sums: Vec<Real> = [1.0, 3.0, 2.5, 2.6, 4.0, 1.0, 1.2, 7.0, 0.5, 2.0]
            .iter()
            .map(|&v| real(prec, v))
            .collect();
        let r = accelerate(&sums, Scheme::LevinU).unwrap();
        assert!(r.low_confidence);
    }

    #[test]
    fn node_fit_with_logs() {
        // Σ_{n≥1} log(n)/n² = −ζ'(2) = 0.93754825431584375370…
        let prec = 192;
        let mut s = real(prec, 0);
        let mut nodes = Vec::new();
        let mut next = 64u64;
        for n in 1..=16384u64 {
            let nn = real(prec, n);
            s += Real::with_val(prec, nn.clone().ln()) / (nn.clone() * &nn);
            if n == next {
                nodes.push((n, s.clone()));
                next *= 2;
            }
        }
        let r = extrapolate_nodes(&nodes, TailBasis::with_log(1)).unwrap();
        let expected = real(prec, 0.937_548_254_315_843_8);
        assert!(abs_diff_f64(&r.value, &expected) < 1e-12, "{}", r.value);
    }
}
