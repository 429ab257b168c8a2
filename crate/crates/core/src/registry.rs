//! Named identity checks: each pairs two independent computations with a
//! tolerance and reports a [`CheckResult`].

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use rug::ops::Pow;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::finite_field::{ahlgren_ono, verify_4_1};
use crate::mahler::{
    density_integral_check, fourier_check, fourier_decay_order, m_rk_hypergeometric, mahler_numeric, r_alpha,
    wan_moment_check, FourierSeries, LaurentDescriptor, QmcSettings, RRoute,
};
use crate::modular::{fricke_asymmetry, l_prime_at_0, l_value, theta_phi, theta_psi, NewformSpec, QSeries};
use crate::precision::{
    abs_diff_f64, ln2, pi, real, sum_series, to_fixed, Integer, Rational, Real, Scheme, SeriesSpec, GUARD_BITS,
};
use crate::quadrature::{tanh_sinh, QuadratureResult};
use crate::special::{catalan, elliptic_pair, pfq, zeta_int, PFQSpec};
use crate::wz::{
    identity_2_8_2_9_range, ramanujan_double_sum, telescope_reconstruct, wz_pair_verify, WZPair, WzReport,
    DOUBLE_SUM_LEVELS,
};

pub const SCHEMA_VERSION: &str = "v1";
pub const STATISTICAL_FLOOR: f64 = 5e-3;
pub const SIGMA_MULTIPLIER: f64 = 6.0;
pub const WZ_RANGE: i64 = 500;
pub const FF_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
pub const RAMANUJAN_ORDER: usize = 200;
pub const HECKE_RANGE: usize = 1000;
pub const FOURIER_TERMS: u64 = 400;
pub const MIN_DECAY_ORDER: f64 = 0.9;
/// Precision of the nested-quadrature routes, whose tolerances do not
/// tighten with the run precision.
const LOW_PRECISION: u32 = 64;
/// Inner computations aim this far below the check tolerance.
const TARGET_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Exact,
    HighPrecision,
    Statistical,
}

impl CheckKind {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::HighPrecision => "high-precision",
            Self::Statistical => "statistical",
        }
    }
}

/// Everything a plan may read.
pub struct Context {
    pub precision: u32,
    pub qmc: QmcSettings,
    pub digits: usize,
    pub f: NewformSpec,
    pub h: NewformSpec,
}

impl Context {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let (f, h) = cfg.forms()?;
        Ok(Self { precision: cfg.precision, qmc: cfg.qmc(), digits: cfg.report_digits(), f, h })
    }

    fn wp(&self) -> u32 {
        self.precision + GUARD_BITS
    }

    fn show(&self, x: &Real) -> String {
        to_fixed(x, self.digits)
    }

    fn compare(&self, lhs: &Real, rhs: &Real, evals: u64, note: impl Into<String>) -> Outcome {
        Outcome {
            lhs: self.show(lhs),
            rhs: self.show(rhs),
            deviation: abs_diff_f64(lhs, rhs),
            evals,
            sigma: None,
            note: note.into(),
            failure: None,
        }
    }
}

struct Outcome {
    lhs: String,
    rhs: String,
    deviation: f64,
    evals: u64,
    sigma: Option<f64>,
    note: String,
    /// A side condition that fails the check regardless of the deviation.
    failure: Option<String>,
}

type Plan = fn(&Context, f64) -> Result<Outcome>;

pub struct IdentityCheck {
    pub id: &'static str,
    pub aliases: &'static [&'static str],
    pub kind: CheckKind,
    pub topic: &'static str,
    pub description: &'static str,
    /// Smallest tolerance a high-precision check is held to.
    pub floor: f64,
    plan: Plan,
}

impl std::fmt::Debug for IdentityCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityCheck").field("id", &self.id).field("kind", &self.kind).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub schema: &'static str,
    pub id: String,
    pub kind: CheckKind,
    pub lhs: String,
    pub rhs: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_ms: u64,
    pub evals: u64,
    pub seed: u64,
    pub precision: u32,
    pub note: String,
}

impl IdentityCheck {
    /// Tolerance before any coupling to a statistical error estimate.
    pub fn tolerance(&self, precision: u32) -> f64 {
        match self.kind {
            CheckKind::Exact => 0.0,
            CheckKind::HighPrecision => self.floor.max(10f64.powf(-(0.3 * f64::from(precision) - 10.0))),
            CheckKind::Statistical => STATISTICAL_FLOOR,
        }
    }

    /// Any listed tag equal to the kind, the topic or the id selects the check.
    pub fn matches(&self, filter: &[String]) -> bool {
        filter.is_empty()
            || filter.iter().any(|t| {
                let t = t.to_ascii_lowercase();
                t == self.kind.tag() || t == self.topic || t == self.id || self.aliases.contains(&t.as_str())
            })
    }

    pub fn run(&self, ctx: &Context) -> CheckResult {
        let start = Instant::now();
        let tolerance = self.tolerance(ctx.precision);
        let outcome = (self.plan)(ctx, tolerance);
        let wall_ms = start.elapsed().as_millis() as u64;
        let seed = if self.kind == CheckKind::Statistical { ctx.qmc.seed } else { 0 };
        let mut result = CheckResult {
            schema: SCHEMA_VERSION,
            id: self.id.into(),
            kind: self.kind,
            lhs: String::new(),
            rhs: String::new(),
            deviation: f64::NAN,
            tolerance,
            pass: false,
            wall_ms,
            evals: 0,
            seed,
            precision: ctx.precision,
            note: String::new(),
        };
        match outcome {
            Ok(o) => {
                if let Some(sigma) = o.sigma {
                    result.tolerance = tolerance.max(SIGMA_MULTIPLIER * sigma);
                }
                result.pass = o.deviation <= result.tolerance && o.failure.is_none();
                result.lhs = o.lhs;
                result.rhs = o.rhs;
                result.deviation = o.deviation;
                result.evals = o.evals;
                result.note = match o.failure {
                    Some(why) if o.note.is_empty() => why,
                    Some(why) => format!("{why}; {}", o.note),
                    None => o.note,
                };
            }
            Err(e) => result.note = format!("failed: {e}"),
        }
        result
    }
}

fn ids_suggestion(id: &str) -> Vec<String> {
    let mut scored: Vec<(f64, &str)> = registry()
        .iter()
        .flat_map(|c| std::iter::once(c.id).chain(c.aliases.iter().copied()))
        .map(|cand| (strsim::normalized_levenshtein(id, cand), cand))
        .filter(|(s, _)| *s >= 0.4)
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    scored.into_iter().take(3).map(|(_, c)| c.to_string()).collect()
}

pub fn lookup(id: &str) -> Result<&'static IdentityCheck> {
    let key = id.trim().to_ascii_lowercase();
    registry()
        .iter()
        .find(|c| c.id == key || c.aliases.contains(&key.as_str()))
        .ok_or_else(|| Error::NotFound { id: id.into(), suggestions: ids_suggestion(&key) })
}

pub fn run_check(id: &str, cfg: &RunConfig) -> Result<CheckResult> {
    let check = lookup(id)?;
    let ctx = Context::from_config(cfg)?;
    Ok(check.run(&ctx))
}

/// Every check selected by `cfg.filter`, in registry order.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let ctx = Context::from_config(cfg)?;
    let selected: Vec<&IdentityCheck> = registry().iter().filter(|c| c.matches(&cfg.filter)).collect();
    Ok(selected.par_iter().map(|c| c.run(&ctx)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let passed = results.iter().filter(|r| r.pass).count();
    Summary { total: results.len(), passed, failed: results.len() - passed }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a report. Machine-readable formats carry `wall_ms = 0` unless
/// `timing` is set, so identical runs give identical bytes.
pub fn render(results: &[CheckResult], format: OutputFormat, timing: bool) -> String {
    let scrub = |r: &CheckResult| {
        let mut r = r.clone();
        if !timing {
            r.wall_ms = 0;
        }
        r
    };
    match format {
        OutputFormat::Json => {
            let rows: Vec<CheckResult> = results.iter().map(scrub).collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("check results serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("schema,id,kind,lhs,rhs,deviation,tolerance,pass,wall_ms,evals,seed,precision,note\n");
            for r in results.iter().map(scrub) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{:e},{:e},{},{},{},{},{},{}",
                    r.schema,
                    r.id,
                    r.kind.tag(),
                    csv_field(&r.lhs),
                    csv_field(&r.rhs),
                    r.deviation,
                    r.tolerance,
                    r.pass,
                    r.wall_ms,
                    r.evals,
                    r.seed,
                    r.precision,
                    csv_field(&r.note)
                );
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in results {
                let _ = writeln!(
                    s,
                    "{} {:<20} {:<14} deviation {:.3e}  tolerance {:.3e}  ({} ms)",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.kind.tag(),
                    r.deviation,
                    r.tolerance,
                    r.wall_ms
                );
                let _ = writeln!(s, "     lhs = {}", r.lhs);
                let _ = writeln!(s, "     rhs = {}", r.rhs);
                if !r.note.is_empty() {
                    let _ = writeln!(s, "     {}", r.note);
                }
            }
            let sum = summarize(results);
            let _ = writeln!(s, "{} checks: {} passed, {} failed", sum.total, sum.passed, sum.failed);
            s
        }
    }
}

// ---------------------------------------------------------------------------
// Shared quantities

struct Constants {
    pi2: Real,
    pi3: Real,
    pi4: Real,
    zeta3: Real,
}

impl Constants {
    fn new(wp: u32) -> Result<Self> {
        let p = pi(wp);
        let pi2 = Real::with_val(wp, p.square_ref());
        let pi3 = Real::with_val(wp, &pi2 * &p);
        let pi4 = Real::with_val(wp, pi2.square_ref());
        Ok(Self { pi2, pi3, pi4, zeta3: zeta_int(3, wp)? })
    }
}

fn l_f_4(ctx: &Context, wp: u32) -> Result<Real> {
    l_value(&ctx.f, &Rational::from(4), wp)
}

/// `192/π⁴·L(f,4) + 7ζ(3)/π²`.
fn main_value(ctx: &Context, wp: u32) -> Result<Real> {
    let c = Constants::new(wp)?;
    let l = l_f_4(ctx, wp)?;
    Ok(l * 192u32 / &c.pi4 + Real::with_val(wp, &c.zeta3 * 7u32) / &c.pi2)
}

/// `Σ_{n ≥ start} w(n)·C(2n,n)⁴/2^{8n}`, accelerated.
fn binomial4_series(start: u64, w: fn(u64) -> Rational, prec: u32, target: f64) -> Result<(Real, u64)> {
    let spec = SeriesSpec::new("weighted fourth powers of central binomials", move |n, p| {
        let c = Integer::from(Integer::binomial_u(2 * n as u32, n as u32));
        let b = Rational::from(c.pow(4)) >> (8 * n) as u32;
        Real::with_val(p, b * w(n))
    })
    .starting_at(start)
    .with_step(move |n, t, p| {
        let r = Rational::from((2 * n + 1, 2 * n + 2)).pow(4);
        let q = r * w(n + 1) / w(n);
        Real::with_val(p, t * q)
    })
    .algebraic(2, false)
    .accelerate(Scheme::LevinU);
    let s = sum_series(&spec, target, prec)?;
    Ok((s.value, s.terms))
}

/// `ln a` from `a` and `1 − a`, accurate at both ends.
fn ln_pair(a: &Real, ac: &Real) -> Real {
    if *a < 0.5 {
        Real::with_val(a.prec(), a.ln_ref())
    } else {
        Real::with_val(a.prec(), -ac).ln_1p()
    }
}

fn ln_1p(a: &Real) -> Real {
    Real::with_val(a.prec(), a.ln_1p_ref())
}

/// `∫₀¹ w(k)·K(k)K′(k) dk`.
fn kk_integral(wp: u32, target: f64, weight: impl Fn(&Real, &Real) -> Real + Sync) -> Result<QuadratureResult> {
    tanh_sinh(
        |k, kc| match elliptic_pair(k, kc) {
            Ok((big_k, big_kp)) => weight(k, kc) * big_k * big_kp,
            Err(_) => real(k.prec(), f64::NAN),
        },
        target,
        wp,
    )
}

/// `(8/π³)∫₀¹ K K′ log((1+k)/(1−k)) dk/k`.
fn log_ratio_integral(wp: u32, target: f64) -> Result<QuadratureResult> {
    let c = Constants::new(wp)?;
    let mut q = kk_integral(wp, target, |k, kc| (ln_1p(k) - ln_pair(kc, k)) / k)?;
    q.value = q.value * 8u32 / &c.pi3;
    Ok(q)
}

fn wz_outcome(reports: &[WzReport]) -> Outcome {
    let worst = reports
        .iter()
        .flat_map(|r| r.violations.iter())
        .map(|v| Rational::from(v.residual.abs_ref()))
        .max()
        .unwrap_or_default();
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
    let first = reports
        .iter()
        .find_map(|r| r.violations.first().map(|v| format!("; first violation at (n, k) = ({}, {})", v.n, v.k)))
        .unwrap_or_default();
    Outcome {
        lhs: worst.to_string(),
        rhs: "0".into(),
        deviation: worst.to_f64(),
        evals: checked,
        sigma: None,
        note: format!("{checked} relations, {violations} nonzero residuals{first}"),
        failure: None,
    }
}

fn torus_outcome(ctx: &Context, name: &str, rhs: Real) -> Result<Outcome> {
    let poly = LaurentDescriptor::builtin(name)
        .ok_or_else(|| Error::InvalidArgument(format!("no built-in polynomial `{name}`")))?;
    let q = mahler_numeric(&poly, &ctx.qmc)?;
    Ok(Outcome {
        lhs: to_fixed(&q.value, 10),
        rhs: to_fixed(&rhs, ctx.digits.min(16)),
        deviation: abs_diff_f64(&q.value, &rhs),
        evals: q.evaluations,
        sigma: Some(q.error_estimate),
        note: format!(
            "m({name}) by lattice QMC, {} samples × {} shifts, σ = {:.2e}, {} points on the zero set",
            ctx.qmc.samples, ctx.qmc.shifts, q.error_estimate, q.discarded
        ),
        failure: None,
    })
}

// ---------------------------------------------------------------------------
// Plans: exact

fn plan_wz_pair_1(_: &Context, _: f64) -> Result<Outcome> {
    Ok(wz_outcome(&[wz_pair_verify(&WZPair::odd_denominator(), WZ_RANGE)?]))
}

fn plan_wz_pair_2(_: &Context, _: f64) -> Result<Outcome> {
    Ok(wz_outcome(&[wz_pair_verify(&WZPair::sum_denominator(), WZ_RANGE)?]))
}

fn plan_wz_telescope(_: &Context, _: f64) -> Result<Outcome> {
    Ok(wz_outcome(&[
        telescope_reconstruct(&WZPair::odd_denominator(), WZ_RANGE)?,
        telescope_reconstruct(&WZPair::sum_denominator(), WZ_RANGE)?,
    ]))
}

fn plan_wz_triple(_: &Context, _: f64) -> Result<Outcome> {
    Ok(wz_outcome(&[identity_2_8_2_9_range(WZ_RANGE)?]))
}

fn plan_ff_4_1(_: &Context, _: f64) -> Result<Outcome> {
    let mut worst = Rational::new();
    let mut rows = 0u64;
    let mut parts = Vec::new();
    for p in FF_PRIMES {
        let report = verify_4_1(p)?;
        rows += report.rows.len() as u64;
        let m = report.max_abs_residual();
        let residuals: std::collections::BTreeSet<String> = report.rows.iter().map(|r| r.residual.to_string()).collect();
        parts.push(format!("p={p}: formula − count ∈ {{{}}}", residuals.into_iter().collect::<Vec<_>>().join(", ")));
        worst = worst.max(m);
    }
    Ok(Outcome {
        lhs: worst.to_string(),
        rhs: "0".into(),
        deviation: worst.to_f64(),
        evals: rows,
        sigma: None,
        note: parts.join("; "),
        failure: None,
    })
}

fn plan_ff_ahlgren_ono(_: &Context, _: f64) -> Result<Outcome> {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut worst = Rational::new();
    for p in FF_PRIMES {
        let (a, b) = ahlgren_ono(p)?;
        worst = worst.max(Rational::from(Rational::from(&a - &b).abs_ref()));
        lhs.push(a.to_string());
        rhs.push(b.to_string());
    }
    Ok(Outcome {
        lhs: format!("[{}]", lhs.join(", ")),
        rhs: format!("[{}]", rhs.join(", ")),
        deviation: worst.to_f64(),
        evals: FF_PRIMES.len() as u64,
        sigma: None,
        note: format!("p³·₄F₃(1) against −a_p − p for p ∈ {FF_PRIMES:?}"),
        failure: None,
    })
}

/// `qψ⁴(q²)` through `q^order`.
fn q_psi4_q2(order: usize) -> QSeries {
    theta_psi(order).substitute_power(2).pow(4).shift(1)
}

fn plan_qexp_ramanujan(_: &Context, _: f64) -> Result<Outcome> {
    let n = RAMANUJAN_ORDER;
    let lhs = q_psi4_q2(n);
    let mut rhs = vec![Integer::new(); n + 1];
    for a in (1..=n).step_by(2) {
        for b in (1..=n / a).step_by(2) {
            rhs[a * b] += a as u64;
        }
    }
    let worst = (0..=n)
        .map(|i| Integer::from(lhs.coefficient(i) - &rhs[i]).abs())
        .max()
        .unwrap_or_default();
    Ok(Outcome {
        lhs: format!("{} nonzero coefficients", lhs.nonzero_count()),
        rhs: format!("{} nonzero coefficients", rhs.iter().filter(|c| **c != 0).count()),
        deviation: worst.to_f64(),
        evals: n as u64 + 1,
        sigma: None,
        note: format!("qψ⁴(q²) against Σ(2n+1)q^((2n+1)(2k+1)) through q^{n}"),
        failure: None,
    })
}

fn plan_qexp_f_coeffs(ctx: &Context, _: f64) -> Result<Outcome> {
    let n = HECKE_RANGE;
    let a: Vec<Integer> = std::iter::once(Integer::new()).chain(ctx.f.coefficients(n)?).collect();
    let mut failures: Vec<String> = Vec::new();
    let mut checked = 0u64;
    let mut expect = |ok: bool, what: String| {
        checked += 1;
        if !ok {
            failures.push(what);
        }
    };
    expect(a[1] == 1, "a_1 = 1".into());
    for m in (2..=n).step_by(2) {
        expect(a[m] == 0, format!("a_{m} = 0"));
    }
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    for i in 2..=n {
        for j in i + 1..=n / i {
            if gcd(i, j) == 1 {
                expect(a[i * j] == Integer::from(&a[i] * &a[j]), format!("a_{} = a_{i}·a_{j}", i * j));
            }
        }
    }
    let is_prime = |p: usize| p > 1 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    for p in (3..=n).filter(|&p| is_prime(p)) {
        let p3 = Integer::from(p).pow(3);
        let (mut prev, mut cur, mut pk) = (Integer::from(1), a[p].clone(), p);
        while pk * p <= n {
            let next = Integer::from(&a[p] * &cur) - Integer::from(&p3 * &prev);
            expect(a[pk * p] == next, format!("Hecke recursion at {}", pk * p));
            (prev, cur, pk) = (cur, next, pk * p);
        }
    }
    let theta = &q_psi4_q2(n) * &theta_phi(n).negate_argument().substitute_power(2).pow(4);
    for (i, c) in a.iter().enumerate() {
        expect(theta.coefficient(i) == c, format!("qψ⁴(q²)φ⁴(−q²) at q^{i}"));
    }
    Ok(Outcome {
        lhs: format!("{} violations", failures.len()),
        rhs: "0".into(),
        deviation: failures.len() as f64,
        evals: checked,
        sigma: None,
        note: match failures.first() {
            Some(f) => format!("first failure: {f}"),
            None => format!("a_n for n ≤ {n}: normalization, multiplicativity, Hecke recursion, theta product"),
        },
        failure: None,
    })
}

// ---------------------------------------------------------------------------
// Plans: high precision

fn plan_thm_1_1(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let (s, terms) = binomial4_series(1, |n| Rational::from((1, 2 * n)), wp, tol * TARGET_MARGIN)?;
    let lhs = ln2(wp) * 4u32 - s;
    let rhs = main_value(ctx, wp)?;
    Ok(ctx.compare(&lhs, &rhs, terms, "4 log 2 − Σ C(2n,n)⁴/(2n·2^{8n}) against 192/π⁴·L(f,4) + 7ζ(3)/π²"))
}

fn plan_eq_1_5(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let h = Rational::from((3, 2));
    let spec = PFQSpec::new(
        vec![h.clone(), h.clone(), h.clone(), h, Rational::from(1), Rational::from(1)],
        vec![Rational::from(2); 5],
        real(wp, 1),
    )?;
    let lhs = pfq(&spec, tol * TARGET_MARGIN)?;
    let c = Constants::new(wp)?;
    let l = l_f_4(ctx, wp)?;
    let rhs = ln2(wp) * 128u32 - l * 6144u32 / &c.pi4 - Real::with_val(wp, &c.zeta3 * 224u32) / &c.pi2;
    Ok(ctx.compare(&lhs, &rhs, 0, "₆F₅(3/2,3/2,3/2,3/2,1,1; 2,2,2,2,2; 1) by Levin-u"))
}

fn plan_eq_2_4(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let q = kk_integral(wp, tol * TARGET_MARGIN, |k, kc| {
        let p = k.prec();
        let num = Real::with_val(p, k.square_ref()) + 1u32;
        let den = Real::with_val(p, kc * Real::with_val(p, k + 1u32));
        num / den * ln_pair(k, kc) * (-8i32)
    })?;
    let lhs = l_f_4(ctx, wp)? * 192u32 / pi(wp);
    Ok(ctx.compare(&lhs, &q.value, q.evaluations, "−8∫(1+k²)/(1−k²)·KK′·log k dk by tanh-sinh"))
}

fn plan_eq_2_5(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let q = kk_integral(wp, tol * TARGET_MARGIN, |k, kc| {
        let p = k.prec();
        let den = Real::with_val(p, kc * Real::with_val(p, k + 1u32));
        Real::with_val(p, k * 2u32) / den * ln_pair(k, kc) * (-8i32)
    })?;
    let lhs = zeta_int(3, wp)? * 7u32 * pi(wp);
    Ok(ctx.compare(&lhs, &q.value, q.evaluations, "−8∫2k/(1−k²)·KK′·log k dk by tanh-sinh"))
}

fn plan_e_wan(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let q = kk_integral(wp, tol * TARGET_MARGIN, |k, kc| -(ln_pair(kc, k) + ln_1p(k)) / k)?;
    let lhs = zeta_int(3, wp)? * 7u32 * pi(wp) / 8u32;
    Ok(ctx.compare(&lhs, &q.value, q.evaluations, "∫−log(1−k²)/k·KK′ dk by tanh-sinh"))
}

fn plan_eq_2_6(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let lhs = main_value(ctx, wp)?;
    let q = log_ratio_integral(wp, tol * TARGET_MARGIN)?;
    Ok(ctx.compare(&lhs, &q.value, q.evaluations, "(8/π³)∫KK′·log((1+k)/(1−k)) dk/k by tanh-sinh"))
}

fn plan_eq_2_7(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let q = kk_integral(wp, tol * TARGET_MARGIN, |k, _| ln_1p(k) / k)?;
    let lhs = l_f_4(ctx, wp)? * 12u32 / pi(wp);
    Ok(ctx.compare(&lhs, &q.value, q.evaluations, "∫KK′·log(1+k) dk/k by tanh-sinh"))
}

fn plan_eq_2_8_analytic(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let q = kk_integral(wp, tol * TARGET_MARGIN, |k, kc| ln_pair(kc, k) / k)?;
    let p = pi(wp);
    let lhs = -(l_f_4(ctx, wp)? * 12u32 / &p) - zeta_int(3, wp)? * 7u32 * &p / 8u32;
    Ok(ctx.compare(&lhs, &q.value, q.evaluations, "∫KK′·log(1−k) dk/k by tanh-sinh"))
}

fn double_sum(ctx: &Context) -> Result<Real> {
    let e = ramanujan_double_sum(ctx.wp(), DOUBLE_SUM_LEVELS)?;
    Ok(e.value * 2u32)
}

const DOUBLE_SUM_NODES: u64 = 32 << (DOUBLE_SUM_LEVELS - 1);

fn plan_eq_2_10(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let q = log_ratio_integral(wp, tol * TARGET_MARGIN)?;
    let rhs = double_sum(ctx)?;
    Ok(ctx.compare(
        &q.value,
        &rhs,
        q.evaluations + DOUBLE_SUM_NODES,
        "integral by tanh-sinh; 2Σ S_n/(2n+1)² with exact S_n = Σ_{k≤n}(4k+1)C(2k,k)⁴/2^{8k}, outer sum extrapolated",
    ))
}

fn plan_eq_2_11(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let c = Constants::new(wp)?;
    let (s, terms) = binomial4_series(0, |n| Rational::from((1, 2 * n + 1)), wp, tol * TARGET_MARGIN)?;
    let lhs = Real::with_val(wp, &c.zeta3 * 14u32) / &c.pi2 + s;
    let rhs = double_sum(ctx)?;
    Ok(ctx.compare(&lhs, &rhs, terms + DOUBLE_SUM_NODES, "14ζ(3)/π² + Σ C(2n,n)⁴/((2n+1)2^{8n}) against the double sum"))
}

fn plan_eq_3_2(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let c = Constants::new(wp)?;
    let lhs = ln2(wp) * 4u32 - Real::with_val(wp, &c.zeta3 * 14u32) / &c.pi2;
    let (s, terms) =
        binomial4_series(1, |n| Rational::from((4 * n + 1, 2 * n * (2 * n + 1))), wp, tol * TARGET_MARGIN)?;
    let rhs = s + 1u32;
    Ok(ctx.compare(&lhs, &rhs, terms, "1 + Σ (4n+1)/((2n)(2n+1))·C(2n,n)⁴/2^{8n}"))
}

fn plan_eq_4_3(ctx: &Context, tol: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let c = Constants::new(wp)?;
    let lhs = l_f_4(ctx, wp)? * 192u32 / &c.pi4 - Real::with_val(wp, &c.zeta3 * 7u32) / &c.pi2;
    let (rhs, terms) = binomial4_series(0, |n| Rational::from((1, 2 * n + 1)), wp, tol * TARGET_MARGIN)?;
    Ok(ctx.compare(&lhs, &rhs, terms, "Σ C(2n,n)⁴/((2n+1)2^{8n})"))
}

fn plan_wan_moments(_: &Context, tol: f64) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for m in 0..=6 {
        let d = wan_moment_check(m, tol * TARGET_MARGIN)?;
        worst = worst.max(d);
        parts.push(format!("m={m}: {d:.1e}"));
    }
    Ok(Outcome {
        lhs: "∫₀¹ kᵐ K K′ dk, m = 0..6".into(),
        rhs: "(π²/8)Γ((m+1)/2)²/Γ((m+2)/2)²·₄F₃(1)".into(),
        deviation: worst,
        evals: 7,
        sigma: None,
        note: parts.join(", "),
        failure: None,
    })
}

fn plan_eq_3_5(ctx: &Context, _: f64) -> Result<Outcome> {
    let wp = ctx.wp();
    let c = Constants::new(wp)?;
    let lhs = r_alpha(&real(wp, 1), RRoute::Polylog)?;
    let rhs = Real::with_val(wp, &c.zeta3 * 7u32) / Real::with_val(wp, &c.pi2 * 2u32);
    Ok(ctx.compare(&lhs, &rhs, 0, "R(1) = (4/π²)χ₃(1)"))
}

fn plan_eq_3_5_vs_3_6(ctx: &Context, _: f64) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
    for (num, den) in [(3, 10), (7, 10), (1, 1)] {
        let a = Real::with_val(LOW_PRECISION, Rational::from((num, den)));
        let poly = r_alpha(&a, RRoute::Polylog)?;
        let integral = r_alpha(&a, RRoute::KIntegral)?;
        let d = abs_diff_f64(&poly, &integral);
        worst = worst.max(d);
        parts.push(format!("α={num}/{den}: {d:.1e}"));
        lhs.push(to_fixed(&poly, ctx.digits.min(16)));
        rhs.push(to_fixed(&integral, ctx.digits.min(16)));
    }
    Ok(Outcome {
        lhs: format!("[{}]", lhs.join(", ")),
        rhs: format!("[{}]", rhs.join(", ")),
        deviation: worst,
        evals: 3,
        sigma: None,
        note: format!("trilogarithm route against (4/π²)∫m(4αk)K′(k)dk at {LOW_PRECISION} bits; {}", parts.join(", ")),
        failure: None,
    })
}

fn plan_eq_3_7(_: &Context, tol: f64) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for m in 0..=4 {
        let d = density_integral_check(m, tol * TARGET_MARGIN)?;
        worst = worst.max(d);
        parts.push(format!("m={m}: {d:.1e}"));
    }
    Ok(Outcome {
        lhs: "∫∫|cos 2πt·cos 2πs|ᵐ ds dt, m = 0..4".into(),
        rhs: "(4/π²)∫kᵐK′(k) dk".into(),
        deviation: worst,
        evals: 5,
        sigma: None,
        note: parts.join(", "),
        failure: None,
    })
}

fn fourier(ctx: &Context, which: FourierSeries, fraction: u32) -> Result<Outcome> {
    let prec = 96;
    let theta = pi(prec) / fraction;
    let c = fourier_check(which, &theta, FOURIER_TERMS)?;
    let order = fourier_decay_order(which, &theta, FOURIER_TERMS)?;
    let failure = (order < MIN_DECAY_ORDER).then(|| format!("observed decay order {order:.2} below {MIN_DECAY_ORDER}"));
    Ok(Outcome {
        lhs: to_fixed(&c.partial_sum, ctx.digits.min(16)),
        rhs: to_fixed(&c.direct, ctx.digits.min(16)),
        deviation: c.deviation,
        evals: FOURIER_TERMS,
        sigma: None,
        note: format!(
            "θ = π/{fraction}, {FOURIER_TERMS} terms, tail bound {:.2e}, observed decay order {order:.2}",
            c.tail_bound
        ),
        failure,
    })
}

fn plan_fourier_k_sin(ctx: &Context, _: f64) -> Result<Outcome> {
    fourier(ctx, FourierSeries::KSin, 6)
}

fn plan_fourier_k_cos(ctx: &Context, _: f64) -> Result<Outcome> {
    fourier(ctx, FourierSeries::KCos, 4)
}

fn plan_fourier_m_sin(ctx: &Context, _: f64) -> Result<Outcome> {
    fourier(ctx, FourierSeries::MSin, 3)
}

fn lambda_symmetry(spec: &NewformSpec) -> Result<Outcome> {
    let a = fricke_asymmetry(spec, LOW_PRECISION)?;
    Ok(Outcome {
        lhs: format!("{a:e}"),
        rhs: "0".into(),
        deviation: a,
        evals: 3,
        sigma: None,
        note: format!(
            "max |Λ(s) − εΛ({}−s)| at {LOW_PRECISION} bits, level {}, ε = {:+}",
            spec.weight, spec.level, spec.fricke_sign
        ),
        failure: None,
    })
}

fn plan_lambda_f(ctx: &Context, _: f64) -> Result<Outcome> {
    lambda_symmetry(&ctx.f)
}

fn plan_lambda_h(ctx: &Context, _: f64) -> Result<Outcome> {
    lambda_symmetry(&ctx.h)
}

// ---------------------------------------------------------------------------
// Plans: statistical

fn plan_eq_1_1(ctx: &Context, _: f64) -> Result<Outcome> {
    let rhs = catalan(LOW_PRECISION) * 4u32 / pi(LOW_PRECISION);
    torus_outcome(ctx, "prod2:4", rhs)
}

fn plan_eq_1_2(ctx: &Context, _: f64) -> Result<Outcome> {
    let rhs = l_prime_at_0(&ctx.h, LOW_PRECISION)? * 4u32;
    torus_outcome(ctx, "prod3:8", rhs)
}

fn plan_thm_1_1_torus(ctx: &Context, _: f64) -> Result<Outcome> {
    torus_outcome(ctx, "r:16", main_value(ctx, LOW_PRECISION)?)
}

fn plan_eq_4_4(ctx: &Context, _: f64) -> Result<Outcome> {
    let c = Constants::new(LOW_PRECISION)?;
    let rhs = Real::with_val(LOW_PRECISION, &c.zeta3 * 7u32) / Real::with_val(LOW_PRECISION, &c.pi2 * 2u32);
    torus_outcome(ctx, "s:0", rhs)
}

fn plan_m_r32(ctx: &Context, _: f64) -> Result<Outcome> {
    let rhs = m_rk_hypergeometric(&real(LOW_PRECISION, 32), 1e-15)?;
    torus_outcome(ctx, "r:32", rhs)
}

// ---------------------------------------------------------------------------

macro_rules! check {
    ($id:expr, $aliases:expr, $kind:ident, $topic:expr, $floor:expr, $plan:expr, $desc:expr) => {
        IdentityCheck {
            id: $id,
            aliases: $aliases,
            kind: CheckKind::$kind,
            topic: $topic,
            description: $desc,
            floor: $floor,
            plan: $plan,
        }
    };
}

static CHECKS: &[IdentityCheck] = &[
    check!("wz-pair-1", &[], Exact, "wz", 0.0, plan_wz_pair_1,
        "WZ relation F(n+1,k) − F(n,k) = G(n,k+1) − G(n,k) for the pair with denominator 2n−2k+1, n ≤ 500"),
    check!("wz-pair-2", &[], Exact, "wz", 0.0, plan_wz_pair_2,
        "WZ relation for the pair with denominator n+k+1, n ≤ 500"),
    check!("wz-telescope", &[], Exact, "wz", 0.0, plan_wz_telescope,
        "h(n) = h(0) + Σ_{j≤n} (F(j,j) + G(j−1,j) − G(j−1,0)) for both pairs, n ≤ 500"),
    check!("wz-2.8-2.9", &[], Exact, "wz", 0.0, plan_wz_triple,
        "Σ C(2k,k)²/(2^{4k}(2n−2k+1)) = Σ C(2k,k)²/(2^{4k}(n+k+1)) = 2^{4n}/((2n+1)²C(2n,n)²)·Σ(4k+1)C(2k,k)⁴/2^{8k}, n ≤ 500"),
    check!("ff-4.1", &[], Exact, "finite-field", 0.0, plan_ff_4_1,
        "#H_t(F_p) against the Greene hypergeometric point-count formula, t ∈ F_p*, p ≤ 13"),
    check!("ff-ahlgren-ono", &[], Exact, "finite-field", 0.0, plan_ff_ahlgren_ono,
        "p³·₄F₃(1) = −a_p − p with a_p from η(2τ)⁴η(4τ)⁴, p ≤ 13"),
    check!("qexp-ramanujan", &[], Exact, "modular", 0.0, plan_qexp_ramanujan,
        "qψ⁴(q²) = Σ_{n,k≥0} (2n+1) q^((2n+1)(2k+1)) through q^200"),
    check!("qexp-f-coeffs", &[], Exact, "modular", 0.0, plan_qexp_f_coeffs,
        "Hecke structure of the coefficients of f = η(2τ)⁴η(4τ)⁴ and f = qψ⁴(q²)φ⁴(−q²)"),
    check!("thm-1.1", &["eq-1.4"], HighPrecision, "l-value", 1e-20, plan_thm_1_1,
        "m(R₁₆) = 192/π⁴·L(f,4) + 7ζ(3)/π², binomial series against L-value and ζ(3)"),
    check!("eq-1.5", &[], HighPrecision, "hypergeometric", 1e-10, plan_eq_1_5,
        "₆F₅(3/2,3/2,3/2,3/2,1,1; 2,2,2,2,2; 1) = 128 log 2 − 6144/π⁴·L(f,4) − 224ζ(3)/π²"),
    check!("eq-2.4", &[], HighPrecision, "integral", 1e-15, plan_eq_2_4,
        "192/π·L(f,4) = −8∫₀¹ (1+k²)/(1−k²)·K K′ log k dk"),
    check!("eq-2.5", &[], HighPrecision, "integral", 1e-15, plan_eq_2_5,
        "7πζ(3) = −8∫₀¹ 2k/(1−k²)·K K′ log k dk"),
    check!("e-wan", &[], HighPrecision, "integral", 1e-15, plan_e_wan,
        "(7/8)πζ(3) = ∫₀¹ −log(1−k²)/k·K K′ dk"),
    check!("eq-2.6", &[], HighPrecision, "integral", 1e-15, plan_eq_2_6,
        "192/π⁴·L(f,4) + 7ζ(3)/π² = (8/π³)∫₀¹ K K′ log((1+k)/(1−k)) dk/k"),
    check!("eq-2.7", &[], HighPrecision, "integral", 1e-15, plan_eq_2_7,
        "12/π·L(f,4) = ∫₀¹ K K′ log(1+k) dk/k"),
    check!("eq-2.8-analytic", &[], HighPrecision, "integral", 1e-15, plan_eq_2_8_analytic,
        "−12/π·L(f,4) − (7/8)πζ(3) = ∫₀¹ K K′ log(1−k) dk/k"),
    check!("eq-2.10", &[], HighPrecision, "series", 1e-10, plan_eq_2_10,
        "(8/π³)∫₀¹ K K′ log((1+k)/(1−k)) dk/k = 2Σ_n (2n+1)⁻² Σ_{k≤n} (4k+1)C(2k,k)⁴/2^{8k}"),
    check!("eq-2.11", &[], HighPrecision, "series", 1e-10, plan_eq_2_11,
        "14ζ(3)/π² + Σ C(2n,n)⁴/((2n+1)2^{8n}) = 2Σ_n (2n+1)⁻² Σ_{k≤n} (4k+1)C(2k,k)⁴/2^{8k}"),
    check!("wan-moments", &[], HighPrecision, "integral", 1e-8, plan_wan_moments,
        "∫₀¹ kᵐ K K′ dk = (π²/8)Γ((m+1)/2)²/Γ((m+2)/2)²·₄F₃(1/2,1/2,(m+1)/2,(m+1)/2; 1,(m+2)/2,(m+2)/2; 1), m = 0..6"),
    check!("eq-3.2", &[], HighPrecision, "series", 1e-10, plan_eq_3_2,
        "4 log 2 − 14ζ(3)/π² = 1 + Σ_{n≥1} (4n+1)/((2n)(2n+1))·C(2n,n)⁴/2^{8n}"),
    check!("eq-3.5", &[], HighPrecision, "mahler", 1e-25, plan_eq_3_5,
        "R(1) = (4/π²)Σ 1/(2n+1)³ = 7ζ(3)/(2π²)"),
    check!("eq-3.5-vs-3.6", &[], HighPrecision, "mahler", 1e-8, plan_eq_3_5_vs_3_6,
        "R(α) by trilogarithm against (4/π²)∫₀¹ m(4αk) K′(k) dk, α ∈ {0.3, 0.7, 1}"),
    check!("eq-3.7", &[], HighPrecision, "mahler", 1e-8, plan_eq_3_7,
        "∫∫ F(|cos 2πt cos 2πs|) ds dt = (4/π²)∫₀¹ F(k) K′(k) dk for F = kᵐ, m = 0..4"),
    check!("fourier-3.8", &[], HighPrecision, "fourier", 1e-3, plan_fourier_k_sin,
        "K(sin θ)cos θ = (π/2)Σ C(2n,n)²/2^{4n}·(sin 4nθ + sin(4n+2)θ)"),
    check!("fourier-3.9", &[], HighPrecision, "fourier", 1e-3, plan_fourier_k_cos,
        "K(cos θ)cos θ = (π/2)Σ C(2n,n)²/2^{4n}·(cos 4nθ + cos(4n+2)θ)"),
    check!("fourier-3.10", &[], HighPrecision, "fourier", 1e-3, plan_fourier_m_sin,
        "m(4 sin θ) = log 2 − Σ C(2n,n)²/2^{4n}·cos(4nθ)/(4n) − Σ C(2n,n)²/2^{4n}·cos((4n+2)θ)/(4n+2)"),
    check!("eq-4.3", &[], HighPrecision, "series", 1e-10, plan_eq_4_3,
        "192/π⁴·L(f,4) − 7ζ(3)/π² = Σ C(2n,n)⁴/((2n+1)2^{8n})"),
    check!("lambda-symmetry-f", &[], HighPrecision, "l-value", 1e-12, plan_lambda_f,
        "Λ(f,s) = Λ(f,4−s), Λ(s) = (√8/2π)^s Γ(s) L(f,s)"),
    check!("lambda-symmetry-h", &[], HighPrecision, "l-value", 1e-12, plan_lambda_h,
        "Λ(h,s) = Λ(h,3−s), Λ(s) = (4/2π)^s Γ(s) L(h,s)"),
    check!("eq-1.1", &[], Statistical, "torus", 0.0, plan_eq_1_1,
        "m((x+x⁻¹)(y+y⁻¹) − 4) = 4G/π"),
    check!("eq-1.2", &[], Statistical, "torus", 0.0, plan_eq_1_2,
        "m((x+x⁻¹)(y+y⁻¹)(z+z⁻¹) − 8) = 4L′(h,0)"),
    check!("thm-1.1-torus", &[], Statistical, "torus", 0.0, plan_thm_1_1_torus,
        "m(R₁₆) on the 4-torus against 192/π⁴·L(f,4) + 7ζ(3)/π²"),
    check!("eq-4.4", &[], Statistical, "torus", 0.0, plan_eq_4_4,
        "m(x+x⁻¹+y+y⁻¹+z+z⁻¹+w+w⁻¹) = 7ζ(3)/(2π²)"),
    check!("m-r32", &[], Statistical, "torus", 0.0, plan_m_r32,
        "m(R₃₂) on the 4-torus against log 32 − (1/128)·₆F₅(…; 1/4)"),
];

pub fn registry() -> &'static [IdentityCheck] {
    CHECKS
}

/// Ids a complete registry must answer to.
pub const REQUIRED_IDS: &[&str] = &[
    "wz-pair-1", "wz-pair-2", "wz-telescope", "wz-2.8-2.9", "ff-4.1", "ff-ahlgren-ono", "qexp-ramanujan",
    "qexp-f-coeffs", "thm-1.1", "eq-1.4", "eq-1.5", "eq-2.4", "eq-2.5", "e-wan", "eq-2.6", "eq-2.7",
    "eq-2.8-analytic", "eq-2.10", "eq-2.11", "wan-moments", "eq-3.2", "eq-3.5-vs-3.6", "eq-3.7", "fourier-3.8",
    "fourier-3.9", "fourier-3.10", "eq-4.3", "lambda-symmetry-f", "lambda-symmetry-h", "eq-1.1", "eq-1.2",
    "thm-1.1-torus", "eq-4.4", "m-r32",
];

/// Anchors with no check of their own and the reason.
pub const UNCHECKED_ANCHORS: &[(&str, &str)] = &[
    ("eq-1.3", "definition of R_k; exercised by thm-1.1-torus and m-r32"),
    ("thm-1.2", "hypergeometric formula for m(R_k), |k| ≥ 16; exercised by m-r32 and eq-1.5"),
    ("eq-2.1", "definition of F(α) = ₂F₁(1/2,1/2;1;α)"),
    ("eq-2.2", "definition of K and K′; exercised by every integral check"),
    ("eq-2.12", "telescoped WZ sum; checked as wz-telescope"),
    ("eq-3.3", "definition of m(α); exercised by eq-3.5-vs-3.6"),
    ("eq-3.4", "definition of R(α); exercised by eq-3.5 and eq-3.5-vs-3.6"),
    ("eq-3.6", "integral form of R(α); checked as eq-3.5-vs-3.6"),
    ("tensor-l-function", "L(f₂⊗f₃, s) relation; out of scope, open"),
    ("families-s-t", "S_k and T_k beyond k = 0 of S_k; out of scope"),
];
