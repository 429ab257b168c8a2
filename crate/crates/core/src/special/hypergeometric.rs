//! Generalized hypergeometric series `pFq`.

use std::fmt;

use crate::error::{Error, Result};
use crate::precision::{accelerate, real, sum_series, Integer, Rational, Real, Scheme, SeriesSpec, GUARD_BITS};

/// Direct summation is refused past this many estimated terms.
pub const MAX_DIRECT_TERMS: f64 = 1e8;

/// `pFq(a_1..a_p; b_1..b_q; x) = Σ_n Π(a_i)_n / Π(b_j)_n · x^n / n!`.
#[derive(Clone)]
pub struct PFQSpec {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Real,
}

impl fmt::Debug for PFQSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}F{}(", self.upper.len(), self.lower.len())?;
        let join = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "{}; {}; {})", join(&self.upper), join(&self.lower), self.argument)
    }
}

fn is_nonpositive_integer(q: &Rational) -> bool {
    *q.denom() == 1 && *q.numer() <= 0
}

impl PFQSpec {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, argument: Real) -> Result<Self> {
        let spec = Self { upper, lower, argument };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(b) = self.lower.iter().find(|b| is_nonpositive_integer(b)) {
            return Err(Error::InvalidArgument(format!("lower parameter {b} is a nonpositive integer")));
        }
        if self.argument.is_nan() || self.argument.is_infinite() {
            return Err(Error::InvalidArgument(format!("argument {} is not finite", self.argument)));
        }
        Ok(())
    }

    /// Number of nonzero terms when some upper parameter is `−m`.
    pub fn terminating_length(&self) -> Option<u64> {
        self.upper
            .iter()
            .filter(|a| is_nonpositive_integer(a))
            .map(|a| (-a.numer().clone()).to_u64().unwrap_or(u64::MAX) + 1)
            .min()
    }

    /// `Σ b_j − Σ a_i`.
    pub fn excess(&self) -> Rational {
        let sb: Rational = self.lower.iter().sum();
        let sa: Rational = self.upper.iter().sum();
        sb - sa
    }

    /// The coefficient of `x^n`, from the Pochhammer definition.
    pub fn coefficient(&self, n: u64) -> Rational {
        let poch = |c: &Rational| {
            let mut acc = Rational::from(1);
            for m in 0..n {
                acc *= Rational::from(c + m);
            }
            acc
        };
        let mut num = Rational::from(1);
        for a in &self.upper {
            num *= poch(a);
        }
        let mut den = Rational::from(Integer::factorial(n as u32));
        for b in &self.lower {
            den *= poch(b);
        }
        num / den
    }

    /// `c_{n+1}/c_n = Π(a_i + n) / (Π(b_j + n)·(n+1))`.
    pub fn ratio(&self, n: u64) -> Rational {
        let mut num = Rational::from(1);
        for a in &self.upper {
            num *= Rational::from(a + n);
        }
        let mut den = Rational::from(n + 1);
        for b in &self.lower {
            den *= Rational::from(b + n);
        }
        num / den
    }

    /// Checks the ratio recurrence against the Pochhammer form for `n ≤ 20`.
    pub fn self_check(&self) -> Result<()> {
        let mut c = Rational::from(1);
        for n in 0..=20u64 {
            let direct = self.coefficient(n);
            if c != direct {
                return Err(Error::Consistency(format!(
                    "{self:?}: coefficient {n} is {c} by recurrence but {direct} by definition"
                )));
            }
            c *= self.ratio(n);
        }
        Ok(())
    }

    fn ratio_real(&self, n: u64, prec: u32) -> Real {
        Real::with_val(prec, self.ratio(n))
    }
}

/// Evaluates `spec` to absolute error `target` at the argument's precision.
pub fn pfq(spec: &PFQSpec, target: f64) -> Result<Real> {
    spec.validate()?;
    spec.self_check()?;
    let prec = spec.argument.prec();
    let p = spec.upper.len();
    let q = spec.lower.len();
    if let Some(len) = spec.terminating_length() {
        return Ok(polynomial(spec, len, prec));
    }
    let x = &spec.argument;
    let abs_x = Real::with_val(prec, x.abs_ref());
    if p > q + 1 && !x.is_zero() {
        return Err(Error::Domain(format!("{spec:?} diverges: p > q + 1")));
    }
    if p == q + 1 {
        if abs_x > 1 {
            return Err(Error::Domain(format!("{spec:?} diverges: |x| > 1")));
        }
        if abs_x == 1 {
            let excess = spec.excess();
            if *x != 1 || excess <= 0 {
                return Err(Error::Domain(format!(
                    "{spec:?} is outside the supported convergence region (x = 1 with positive parameter excess)"
                )));
            }
            return unit_argument(spec, &excess, target, prec);
        }
        let estimate = target.ln() / abs_x.to_f64().ln();
        if estimate > MAX_DIRECT_TERMS {
            return Err(Error::Resource(format!(
                "{spec:?} needs about {estimate:.2e} terms for direct summation"
            )));
        }
    }
    direct(spec, p == q + 1, target, prec)
}

fn polynomial(spec: &PFQSpec, len: u64, prec: u32) -> Real {
    let wp = prec + GUARD_BITS;
    let x = Real::with_val(wp, &spec.argument);
    // Horner on the exact coefficients' ratios.
    let mut acc = real(wp, 1);
    for n in (0..len.saturating_sub(1)).rev() {
        acc = acc * spec.ratio_real(n, wp) * &x + 1u32;
    }
    Real::with_val(prec, acc)
}

fn direct(spec: &PFQSpec, unit_radius: bool, target: f64, prec: u32) -> Result<Real> {
    let wp = prec + GUARD_BITS;
    let x = Real::with_val(wp, &spec.argument);
    let abs_x = Real::with_val(wp, x.abs_ref()).to_f64();
    // The ratio bound is trustworthy once n exceeds the parameter sizes.
    let scale = spec
        .upper
        .iter()
        .chain(&spec.lower)
        .map(|c| c.to_f64().abs())
        .fold(0.0f64, f64::max)
        .ceil() as u64
        * 2
        + 2;
    let limit = if unit_radius { abs_x } else { 0.0 };
    let mut t = real(wp, 1);
    let mut sum = real(wp + 64, 1);
    let max_terms = MAX_DIRECT_TERMS as u64;
    for n in 0..max_terms {
        let r = spec.ratio_real(n, wp) * &x;
        t *= &r;
        sum += &t;
        if n + 1 < scale {
            continue;
        }
        let rho = r.to_f64().abs().max(limit);
        if rho < 1.0 {
            let bound = t.to_f64().abs() * rho / (1.0 - rho);
            if bound <= target || t.is_zero() {
                return Ok(Real::with_val(prec, sum));
            }
        }
    }
    Err(Error::NoConvergence {
        what: format!("{spec:?} direct summation"),
        steps: max_terms as usize,
        best: Real::with_val(prec, sum),
        error_estimate: f64::INFINITY,
    })
}

/// Consecutive partial sums fed to Levin's transform at unit argument.
const LEVIN_SUMS: usize = 96;

fn unit_argument(spec: &PFQSpec, excess: &Rational, target: f64, prec: u32) -> Result<Real> {
    // Terms decay like n^(−1−s); the remainder after N terms like N^(−s).
    if *excess.denom() == 1 {
        let s = excess.numer().to_u32().unwrap_or(u32::MAX);
        let series = SeriesSpec::new(format!("{spec:?}"), |n, p| Real::with_val(p, spec.coefficient(n)))
            .with_step(|n, t, p| Real::with_val(p, t * spec.ratio_real(n, p)))
            .algebraic(s, false)
            .accelerate(Scheme::LevinU);
        return sum_series(&series, target, prec).map(|s| s.value);
    }
    let wp = 2 * prec + 64;
    let mut t = real(wp, 1);
    let mut acc = real(wp + 64, 1);
    let mut sums = Vec::with_capacity(LEVIN_SUMS);
    sums.push(Real::with_val(wp, &acc));
    for n in 0..LEVIN_SUMS as u64 - 1 {
        t *= spec.ratio_real(n, wp);
        acc += &t;
        sums.push(Real::with_val(wp, &acc));
    }
    let ex = accelerate(&sums, Scheme::LevinU)?;
    if ex.error_estimate <= target {
        Ok(Real::with_val(prec, ex.value))
    } else {
        Err(Error::NoConvergence {
            what: format!("{spec:?} at unit argument"),
            steps: LEVIN_SUMS,
            best: Real::with_val(prec, ex.value),
            error_estimate: ex.error_estimate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{abs_diff_f64, pi};
    use crate::special::elliptic::ell_k;

    fn half() -> Rational {
        Rational::from((1, 2))
    }

    fn k_spec(k: &Real) -> PFQSpec {
        let x = Real::with_val(k.prec(), k * k);
        PFQSpec::new(vec![half(), half()], vec![Rational::from(1)], x).unwrap()
    }

    #[test]
    fn zero_argument() {
        let spec = k_spec(&real(64, 0));
        assert_eq!(pfq(&spec, 1e-15).unwrap(), 1);
    }

    #[test]
    fn matches_agm_elliptic_k() {
        let k = real(128, 0.6);
        let v = pfq(&k_spec(&k), 1e-30).unwrap() * pi(128) / 2u32;
        assert!(abs_diff_f64(&v, &ell_k(&k).unwrap()) < 1e-25);
    }

    #[test]
    fn matches_agm_on_random_moduli() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let k = real(128, rng.gen_range(0.01..0.95));
            let v = pfq(&k_spec(&k), 1e-24).unwrap() * pi(128) / 2u32;
            assert!(abs_diff_f64(&v, &ell_k(&k).unwrap()) < 1e-20, "k = {k}");
        }
    }

    #[test]
    fn ratio_matches_pochhammer() {
        let spec = PFQSpec::new(
            vec![Rational::from((3, 2)), Rational::from((-7, 3)), Rational::from(4)],
            vec![Rational::from((5, 6)), Rational::from(2)],
            real(64, 0.1),
        )
        .unwrap();
        spec.self_check().unwrap();
        assert_eq!(spec.coefficient(0), 1);
        // (3/2)(−7/3)(4) / ((5/6)(2)(1))
        assert_eq!(spec.coefficient(1), Rational::from((-42, 5)));
    }

    #[test]
    fn rejects_bad_lower_parameter() {
        let r = PFQSpec::new(vec![half()], vec![Rational::from(-2)], real(64, 0.5));
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn terminating_series() {
        // 2F1(−3, 1; 1; x) = (1 − x)³
        let spec = PFQSpec::new(vec![Rational::from(-3), Rational::from(1)], vec![Rational::from(1)], real(96, 5)).unwrap();
        let v = pfq(&spec, 1e-20).unwrap();
        assert_eq!(v, -64);
    }

    #[test]
    fn exponential_and_geometric() {
        let e = pfq(&PFQSpec::new(vec![], vec![], real(128, 1)).unwrap(), 1e-35).unwrap();
        assert!(abs_diff_f64(&e, &real(128, 1).exp()) < 1e-35);
        // 1F0(1;;x) = 1/(1−x)
        let g = pfq(&PFQSpec::new(vec![Rational::from(1)], vec![], real(128, 0.75)).unwrap(), 1e-30).unwrap();
        assert!(abs_diff_f64(&g, &real(128, 4)) < 1e-30);
    }

    #[test]
    fn divergent_combinations() {
        let big = PFQSpec::new(vec![half(), half()], vec![Rational::from(1)], real(64, 1.5)).unwrap();
        assert!(matches!(pfq(&big, 1e-10), Err(Error::Domain(_))));
        // Zero excess at x = 1
        let log = PFQSpec::new(vec![half(), half()], vec![Rational::from(1)], real(64, 1)).unwrap();
        assert!(matches!(pfq(&log, 1e-10), Err(Error::Domain(_))));
        let wide = PFQSpec::new(vec![half(), half(), half()], vec![Rational::from(1)], real(64, 0.1)).unwrap();
        assert!(matches!(pfq(&wide, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn slow_radius_is_refused() {
        let x = Real::with_val(64, 1) - (real(64, 1) >> 40u32);
        let spec = PFQSpec::new(vec![half(), half()], vec![Rational::from(1)], x).unwrap();
        assert!(matches!(pfq(&spec, 1e-20), Err(Error::Resource(_))));
    }

    #[test]
    fn gauss_summation_at_unit_argument() {
        // 2F1(a, b; c; 1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)); with a = b = 1/2,
        // c = 3: Γ(3)Γ(2)/Γ(5/2)² = 2/(9π/16) = 32/(9π).
        let spec = PFQSpec::new(vec![half(), half()], vec![Rational::from(3)], real(128, 1)).unwrap();
        let v = pfq(&spec, 1e-25).unwrap();
        let expected = real(128, 32) / (pi(128) * 9u32);
        assert!(abs_diff_f64(&v, &expected) < 1e-25);
    }

    #[test]
    fn gauss_summation_fractional_excess() {
        // a = b = 1/2, c = 3/2: Γ(3/2)Γ(1/2)/Γ(1)² = π/2
        let spec = PFQSpec::new(vec![half(), half()], vec![Rational::from((3, 2))], real(128, 1)).unwrap();
        let v = pfq(&spec, 1e-20).unwrap();
        assert!(abs_diff_f64(&v, &(pi(128) / 2u32)) < 1e-20);
    }
}
