//! Summation of convergent series with explicit tail bounds or acceleration.

use std::fmt;

use crate::error::{Error, Result};
use crate::precision::accel::{accelerate, extrapolate_nodes, Scheme, TailBasis};
use crate::precision::{real, Real, GUARD_BITS};

type TermFn<'a> = Box<dyn Fn(u64, u32) -> Real + Send + Sync + 'a>;
type StepFn<'a> = Box<dyn Fn(u64, &Real, u32) -> Real + Send + Sync + 'a>;
type BoundFn<'a> = Box<dyn Fn(u64, u32) -> Real + Send + Sync + 'a>;

/// Asymptotic form of the remainder after `N` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailShape {
    Geometric,
    /// Remainder behaves like `N^{-leading}` times a series in `1/N`,
    /// optionally with `log N` companions.
    Algebraic { leading: u32, logarithmic: bool },
}

/// An infinite series `Σ_{n ≥ start} t_n`.
pub struct SeriesSpec<'a> {
    name: String,
    start: u64,
    term: TermFn<'a>,
    step: Option<StepFn<'a>>,
    tail_bound: Option<BoundFn<'a>>,
    shape: TailShape,
    accelerate: Option<Scheme>,
    max_terms: u64,
}

impl fmt::Debug for SeriesSpec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesSpec")
            .field("name", &self.name)
            .field("start", &self.start)
            .field("shape", &self.shape)
            .field("accelerate", &self.accelerate)
            .field("max_terms", &self.max_terms)
            .finish()
    }
}

pub const DEFAULT_MAX_TERMS: u64 = 10_000_000;

impl<'a> SeriesSpec<'a> {
    /// `term(n, prec)` returns the `n`-th term at `prec` bits.
    pub fn new(name: impl Into<String>, term: impl Fn(u64, u32) -> Real + Send + Sync + 'a) -> Self {
        Self {
            name: name.into(),
            start: 0,
            term: Box::new(term),
            step: None,
            tail_bound: None,
            shape: TailShape::Geometric,
            accelerate: None,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn starting_at(mut self, start: u64) -> Self {
        self.start = start;
        self
    }

    /// Faster successor rule: `step(n, t_n, prec)` returns `t_{n+1}`.
    /// `term` is then only used for the first index.
    pub fn with_step(mut self, step: impl Fn(u64, &Real, u32) -> Real + Send + Sync + 'a) -> Self {
        self.step = Some(Box::new(step));
        self
    }

    /// `bound(n, prec)` must dominate `|Σ_{m > n} t_m|` and be nonincreasing.
    pub fn with_tail_bound(mut self, bound: impl Fn(u64, u32) -> Real + Send + Sync + 'a) -> Self {
        self.tail_bound = Some(Box::new(bound));
        self
    }

    pub fn algebraic(mut self, leading: u32, logarithmic: bool) -> Self {
        self.shape = TailShape::Algebraic { leading, logarithmic };
        self
    }

    pub fn accelerate(mut self, scheme: Scheme) -> Self {
        self.accelerate = Some(scheme);
        self
    }

    pub fn max_terms(mut self, n: u64) -> Self {
        self.max_terms = n;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> TailShape {
        self.shape
    }

    pub fn term(&self, n: u64, prec: u32) -> Real {
        (self.term)(n, prec)
    }

    /// Feeds `(n, t_n)` to `visit` until it returns `false`.
    fn for_each_term(&self, prec: u32, mut visit: impl FnMut(u64, &Real) -> bool) {
        let mut n = self.start;
        let mut t = (self.term)(n, prec);
        while visit(n, &t) {
            t = match &self.step {
                Some(step) => step(n, &t, prec),
                None => (self.term)(n + 1, prec),
            };
            n += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: Real,
    pub terms: u64,
    pub error_estimate: f64,
}

/// Accumulator carrying 64 bits beyond the working precision, so the
/// rounding of each addition is invisible at the caller's precision.
#[derive(Debug, Clone)]
pub struct CompensatedSum {
    sum: Real,
    prec: u32,
}

impl CompensatedSum {
    pub fn new(prec: u32) -> Self {
        Self { sum: real(prec + 64, 0), prec }
    }

    pub fn add(&mut self, x: &Real) {
        self.sum += x;
    }

    pub fn value(&self) -> Real {
        Real::with_val(self.prec, &self.sum)
    }
}

/// Sums `spec` to within `target` (absolute) at `prec` bits.
pub fn sum_series(spec: &SeriesSpec<'_>, target: f64, prec: u32) -> Result<SeriesSum> {
    match (spec.accelerate, &spec.tail_bound) {
        (None, Some(bound)) => sum_with_bound(spec, bound, target, prec),
        (Some(scheme), _) => sum_accelerated(spec, scheme, target, prec),
        (None, None) => Err(Error::InvalidArgument(format!(
            "series `{}` has neither a tail bound nor an acceleration scheme",
            spec.name
        ))),
    }
}

fn sum_with_bound(spec: &SeriesSpec<'_>, bound: &BoundFn<'_>, target: f64, prec: u32) -> Result<SeriesSum> {
    let wp = prec + GUARD_BITS;
    let mut acc = CompensatedSum::new(wp);
    let mut count = 0u64;
    let mut last_bound = f64::INFINITY;
    let mut done = false;
    spec.for_each_term(wp, |n, t| {
        acc.add(t);
        count += 1;
        // Evaluating the bound every step is wasteful for cheap terms.
        if count < 16 || count.is_multiple_of(8) {
            last_bound = bound(n, wp).to_f64();
            if last_bound <= target {
                done = true;
                return false;
            }
        }
        count < spec.max_terms
    });
    if done {
        return Ok(SeriesSum {
            value: Real::with_val(prec, acc.value()),
            terms: count,
            error_estimate: last_bound,
        });
    }
    Err(Error::NoConvergence {
        what: format!("series `{}`", spec.name),
        steps: count as usize,
        best: Real::with_val(prec, acc.value()),
        error_estimate: last_bound,
    })
}

/// Number of partial sums fed to the consecutive-sum schemes.
const CONSECUTIVE_SUMS: usize = 96;
/// First and last node of the doubling ladder used by Richardson.
const FIRST_NODE: u64 = 32;
const LADDER_LEVELS: u32 = 12;

fn sum_accelerated(spec: &SeriesSpec<'_>, scheme: Scheme, target: f64, prec: u32) -> Result<SeriesSum> {
    let basis = match spec.shape {
        TailShape::Algebraic { leading, logarithmic } => TailBasis { leading, logarithmic },
        TailShape::Geometric => TailBasis::power(1),
    };
    let (value, est, terms) = match scheme {
        Scheme::Richardson => richardson_ladder(spec, basis, target, prec)?,
        Scheme::LevinU | Scheme::WynnEpsilon => {
            // Both schemes cancel heavily; the sums carry twice the digits.
            let wp = 2 * prec + 64;
            let sums = partial_sums(spec, CONSECUTIVE_SUMS, wp);
            let ex = accelerate(&sums, scheme)?;
            // Cross-check against the independent Richardson ladder.
            let (cross, _, ladder_terms) = richardson_ladder(spec, basis, target, prec)?;
            let diff = Real::with_val(wp, &ex.value - &cross).abs().to_f64();
            let terms = ladder_terms.max(CONSECUTIVE_SUMS as u64);
            (Real::with_val(prec, &ex.value), ex.error_estimate.max(diff), terms)
        }
    };
    if est <= target {
        Ok(SeriesSum { value, terms, error_estimate: est })
    } else {
        Err(Error::NoConvergence {
            what: format!("accelerated series `{}`", spec.name),
            steps: terms as usize,
            best: value,
            error_estimate: est,
        })
    }
}

fn partial_sums(spec: &SeriesSpec<'_>, count: usize, wp: u32) -> Vec<Real> {
    let mut acc = CompensatedSum::new(wp);
    let mut sums = Vec::with_capacity(count);
    spec.for_each_term(wp, |_, t| {
        acc.add(t);
        sums.push(acc.value());
        sums.len() < count
    });
    sums
}

/// Partial sums at `N = 32, 64, …` extrapolated with the tail basis;
/// stops as soon as the estimate meets `target`.
fn richardson_ladder(
    spec: &SeriesSpec<'_>,
    basis: TailBasis,
    target: f64,
    prec: u32,
) -> Result<(Real, f64, u64)> {
    let wp = prec + 64;
    let mut acc = CompensatedSum::new(wp);
    let mut nodes: Vec<(u64, Real)> = Vec::new();
    let mut next_node = FIRST_NODE;
    let mut best: Option<(Real, f64)> = None;
    let mut count = 0u64;
    let last_node = FIRST_NODE << LADDER_LEVELS;
    let mut failure = None;
    spec.for_each_term(wp, |_, t| {
        acc.add(t);
        count += 1;
        if count < next_node {
            return true;
        }
        nodes.push((count, acc.value()));
        next_node *= 2;
        if nodes.len() >= 4 {
            match extrapolate_nodes(&nodes, basis) {
                Ok(ex) => {
                    let better = best.as_ref().is_none_or(|(_, e)| ex.error_estimate <= *e);
                    if better {
                        best = Some((ex.value.clone(), ex.error_estimate));
                    }
                    if ex.error_estimate <= target / 4.0 && nodes.len() >= 6 {
                        return false;
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    return false;
                }
            }
        }
        count < last_node && count.saturating_mul(2) <= spec.max_terms
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (value, est) = best.ok_or_else(|| Error::NoConvergence {
        what: format!("series `{}` ladder", spec.name),
        steps: count as usize,
        best: Real::with_val(prec, acc.value()),
        error_estimate: f64::INFINITY,
    })?;
    Ok((Real::with_val(prec, value), est, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{abs_diff_f64, const_pi};

    #[test]
    fn geometric_with_bound() {
        let spec = SeriesSpec::new("2^-n", |n, p| real(p, 1) >> n as u32)
            .with_tail_bound(|n, p| real(p, 1) >> n as u32);
        let s = sum_series(&spec, 1e-30, 128).unwrap();
        assert!(abs_diff_f64(&s.value, &real(128, 2)) < 1e-30);
    }

    #[test]
    fn basel_with_bound() {
        let spec = SeriesSpec::new("basel", |n, p| real(p, 1) / (n * n))
            .starting_at(1)
            .with_tail_bound(|n, p| real(p, 1) / n)
            .max_terms(200_000_000);
        let s = sum_series(&spec, 1e-8, 64).unwrap();
        let pi = const_pi(64).unwrap();
        let exact = Real::with_val(64, &pi * &pi) / 6u32;
        assert!(abs_diff_f64(&s.value, &exact) < 1e-8);
    }

    #[test]
    fn basel_accelerated() {
        let spec = SeriesSpec::new("basel", |n, p| real(p, 1) / (n * n))
            .starting_at(1)
            .algebraic(1, false)
            .accelerate(Scheme::Richardson);
        let s = sum_series(&spec, 1e-25, 128).unwrap();
        let pi = const_pi(128).unwrap();
        let exact = Real::with_val(128, &pi * &pi) / 6u32;
        assert!(abs_diff_f64(&s.value, &exact) < 1e-25, "{}", s.value);
    }

    #[test]
    fn arctan_one_with_alternating_bound() {
        // π/4 = Σ (−1)^n/(2n+1); alternating tail bounded by the next term.
        let spec = SeriesSpec::new("leibniz", |n, p| {
            let t = real(p, 1) / (2 * n + 1);
            if n % 2 == 0 { t } else { -t }
        })
        .with_tail_bound(|n, p| real(p, 1) / (2 * n + 3));
        let s = sum_series(&spec, 1e-5, 64).unwrap();
        let pi = const_pi(64).unwrap() / 4u32;
        assert!(abs_diff_f64(&s.value, &pi) < 1e-5);
    }

    #[test]
    fn missing_bound_is_rejected() {
        let spec = SeriesSpec::new("x", |_, p| real(p, 0));
        assert!(matches!(sum_series(&spec, 1e-5, 64), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn exhausted_budget_reports_best() {
        let spec = SeriesSpec::new("harmonic-ish", |n, p| real(p, 1) / (n * n))
            .starting_at(1)
            .with_tail_bound(|n, p| real(p, 1) / n)
            .max_terms(100);
        match sum_series(&spec, 1e-12, 64) {
            Err(Error::NoConvergence { steps, best, .. }) => {
                assert_eq!(steps, 100);
                assert!(best > 1.6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compensated_sum_recovers_small_addends() {
        let mut acc = CompensatedSum::new(53);
        acc.add(&real(53, 1.0));
        for _ in 0..1000 {
            acc.add(&real(53, 1e-17));
        }
        acc.add(&real(53, -1.0));
        assert!((acc.value().to_f64() - 1e-14).abs() < 1e-20);
    }
}
