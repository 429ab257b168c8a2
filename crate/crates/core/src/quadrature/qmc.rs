//! Randomly shifted rank-1 lattice rules on the unit torus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::precision::Real;
use crate::quadrature::QuadratureResult;

/// Leading components of Kuo's embedded lattice sequence
/// `lattice-33002-1024-1048576.9125`, good for `N = 2^10 … 2^20`.
pub const GENERATING_VECTOR: [u64; 4] = [1, 182_667, 213_731, 255_351];

pub const MAX_DIMENSION: usize = GENERATING_VECTOR.len();
pub const MIN_SAMPLES: u64 = 1 << 10;
pub const MAX_SAMPLES: u64 = 1 << 24;
pub const MIN_SHIFTS: u32 = 8;
pub const DEFAULT_SEED: u64 = 0x5EED;

/// A real-valued function on `[0,1)^d`, `1 ≤ d ≤ 4`.
pub struct TorusIntegrand<'a> {
    pub dimension: usize,
    pub evaluate: Box<dyn Fn(&[f64]) -> f64 + Send + Sync + 'a>,
    pub singular_set_note: String,
}

impl<'a> TorusIntegrand<'a> {
    pub fn new(dimension: usize, evaluate: impl Fn(&[f64]) -> f64 + Send + Sync + 'a) -> Self {
        Self { dimension, evaluate: Box::new(evaluate), singular_set_note: String::new() }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.singular_set_note = note.into();
        self
    }
}

impl std::fmt::Debug for TorusIntegrand<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusIntegrand")
            .field("dimension", &self.dimension)
            .field("singular_set_note", &self.singular_set_note)
            .finish()
    }
}

/// Points per reduction chunk; fixed so the summation order does not depend
/// on the thread count.
const CHUNK: u64 = 4096;

struct ShiftEstimate {
    sum: f64,
    kept: u64,
}

fn one_shift(f: &TorusIntegrand<'_>, n: u64, shift: &[f64]) -> Result<ShiftEstimate> {
    let d = f.dimension;
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<Result<(f64, u64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut point = [0.0f64; MAX_DIMENSION];
            let mut sum = 0.0f64;
            let mut comp = 0.0f64;
            let mut kept = 0u64;
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                for j in 0..d {
                    let k = (u128::from(i) * u128::from(GENERATING_VECTOR[j]) % u128::from(n)) as f64;
                    let y = k / n as f64 + shift[j];
                    point[j] = y - y.floor();
                }
                let v = (f.evaluate)(&point[..d]);
                if v == f64::NEG_INFINITY {
                    continue;
                }
                if !v.is_finite() {
                    return Err(Error::Integrand {
                        abscissa: format!("{:?}", &point[..d]),
                        value: v.to_string(),
                    });
                }
                // Kahan summation within the chunk.
                let y = v - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
                kept += 1;
            }
            Ok((sum, kept))
        })
        .collect();
    let mut sum = 0.0;
    let mut kept = 0;
    for p in partial {
        let (s, k) = p?;
        sum += s;
        kept += k;
    }
    Ok(ShiftEstimate { sum, kept })
}

/// Integrates `f` over `[0,1)^d` with `shifts` independent random shifts of
/// an `N`-point lattice, `N = samples` rounded up to a power of two.
///
/// The value is the median of the per-shift means and the error estimate is
/// the standard error of their mean. Points where `f` is `−∞` are dropped
/// and counted in `discarded`.
pub fn torus_qmc(f: &TorusIntegrand<'_>, samples: u64, shifts: u32, seed: u64) -> Result<QuadratureResult> {
    if f.dimension == 0 || f.dimension > MAX_DIMENSION {
        return Err(Error::InvalidArgument(format!(
            "torus dimension {} outside 1..={MAX_DIMENSION}",
            f.dimension
        )));
    }
    if !(MIN_SAMPLES..=MAX_SAMPLES).contains(&samples) {
        return Err(Error::InvalidArgument(format!(
            "sample count {samples} outside [{MIN_SAMPLES}, {MAX_SAMPLES}]"
        )));
    }
    if shifts < MIN_SHIFTS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SHIFTS} shifts, got {shifts}")));
    }
    let n = samples.next_power_of_two();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let shift_vectors: Vec<Vec<f64>> =
        (0..shifts).map(|_| (0..f.dimension).map(|_| rng.gen::<f64>()).collect()).collect();
    let mut means = Vec::with_capacity(shifts as usize);
    let mut discarded = 0u64;
    for shift in &shift_vectors {
        let est = one_shift(f, n, shift)?;
        discarded += n - est.kept;
        if est.kept == 0 {
            return Err(Error::Integrand {
                abscissa: "every lattice point".into(),
                value: "-inf".into(),
            });
        }
        means.push(est.sum / est.kept as f64);
    }
    let m = means.len() as f64;
    let mean = means.iter().sum::<f64>() / m;
    let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let stderr = (var / m).sqrt();
    let mut sorted = means.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };
    Ok(QuadratureResult {
        value: Real::with_val(53, median),
        error_estimate: stderr,
        evaluations: n * u64::from(shifts),
        converged: true,
        discarded,
    })
}
