//! Single quantities by name, as driven by `mahlerlab compute`.

use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::finite_field::count_points;
use crate::mahler::{m_alpha, m_rk_hypergeometric, mahler_numeric, r_alpha, LaurentDescriptor, MRoute, RRoute};
use crate::modular::{l_prime_at_0, l_value};
use crate::precision::{bits_for_digits, check_precision, ln2, pi, to_fixed, Rational, Real, MAX_PRECISION};
use crate::special::{catalan, ell_k, ell_kprime, legendre_chi3, zeta_int};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Computed {
    pub quantity: String,
    /// Decimal rendering, exact for integer quantities.
    pub value: String,
    pub route: String,
    pub error_estimate: f64,
}

/// Usage lines for every quantity.
pub const QUANTITIES: &[(&str, &str)] = &[
    ("L <f|h> <s>", "L-value of a newform at rational s; s = 0 for h gives L′(h,0)"),
    ("zeta <n>", "ζ(n) for n ≥ 2"),
    ("catalan", "Catalan's constant"),
    ("pi", "π"),
    ("log2", "log 2"),
    ("K <k>", "complete elliptic integral K(k), 0 ≤ k < 1"),
    ("Kprime <k>", "K′(k) = K(√(1−k²)), 0 < k ≤ 1"),
    ("m <alpha>", "m(x + 1/x + y + 1/y + 4α), 0 ≤ α ≤ 1"),
    ("R <alpha>", "R(α) = (4/π²)χ₃(α), 0 ≤ α ≤ 1"),
    ("chi3 <alpha>", "Legendre chi function χ₃(α), 0 ≤ α ≤ 1"),
    ("mRk <k>", "m(R_k) by the ₆F₅ formula, |k| ≥ 16"),
    ("mahler <name|file>", "m(P) by lattice QMC for a built-in name (p:4, prod3:8, r:16, s:0, …) or a polynomial file"),
    ("ap <n> [f|h]", "n-th q-expansion coefficient of f (default) or h"),
    ("count <p> <t>", "affine point count of H_t over F_p"),
];

fn arg<'a>(args: &'a [String], i: usize, what: &str) -> Result<&'a str> {
    args.get(i).map(String::as_str).ok_or_else(|| Error::InvalidArgument(format!("missing argument <{what}>")))
}

fn real_arg(args: &[String], i: usize, what: &str, prec: u32) -> Result<Real> {
    let text = arg(args, i, what)?;
    let parsed = Real::parse(text).map_err(|_| Error::Parse(format!("<{what}> = `{text}` is not a number")))?;
    Ok(Real::with_val(prec, parsed))
}

fn int_arg<T: std::str::FromStr>(args: &[String], i: usize, what: &str) -> Result<T> {
    let text = arg(args, i, what)?;
    text.parse().map_err(|_| Error::Parse(format!("<{what}> = `{text}` is not an integer")))
}

fn no_extra(args: &[String], n: usize) -> Result<()> {
    match args.get(n) {
        Some(extra) => Err(Error::InvalidArgument(format!("unexpected argument `{extra}`"))),
        None => Ok(()),
    }
}

/// Evaluates `quantity args…` at the configured precision, raised when
/// more digits are requested than it carries.
pub fn compute(quantity: &str, args: &[String], cfg: &RunConfig) -> Result<Computed> {
    let digits = cfg.report_digits();
    let prec = cfg.precision.max(bits_for_digits(digits as u32)).min(MAX_PRECISION);
    check_precision(prec)?;
    let ulp = 2f64.powi(-(prec as i32));
    let (f, h) = cfg.forms()?;
    let fixed = |x: &Real| to_fixed(x, digits);
    let numeric = |value: Real, route: &str, err: f64| Computed {
        quantity: String::new(),
        value: fixed(&value),
        route: route.into(),
        error_estimate: err,
    };
    let exact = |value: String, route: &str| Computed { quantity: String::new(), value, route: route.into(), error_estimate: 0.0 };
    let mut out = match quantity {
        "L" => {
            no_extra(args, 2)?;
            let form = match arg(args, 0, "form")? {
                "f" => f,
                "h" => h,
                other => return Err(Error::NotFound { id: other.into(), suggestions: vec!["f".into(), "h".into()] }),
            };
            let s: Rational = arg(args, 1, "s")?
                .parse()
                .map_err(|_| Error::Parse(format!("<s> = `{}` is not a rational", args[1])))?;
            if s == 0 && form.name == "h" {
                numeric(l_prime_at_0(&form, prec)?, "derivative at 0 by the functional equation and Mellin split", ulp)
            } else {
                numeric(l_value(&form, &s, prec)?, "Mellin split with incomplete gamma kernels", ulp)
            }
        }
        "zeta" => {
            no_extra(args, 1)?;
            let n: u32 = int_arg(args, 0, "n")?;
            numeric(zeta_int(n, prec)?, "Euler–Maclaurin", ulp)
        }
        "catalan" => {
            no_extra(args, 0)?;
            numeric(catalan(prec), "MPFR", ulp)
        }
        "pi" => {
            no_extra(args, 0)?;
            numeric(pi(prec), "MPFR", ulp)
        }
        "log2" => {
            no_extra(args, 0)?;
            numeric(ln2(prec), "MPFR", ulp)
        }
        "K" => {
            no_extra(args, 1)?;
            numeric(ell_k(&real_arg(args, 0, "k", prec)?)?, "AGM", ulp)
        }
        "Kprime" => {
            no_extra(args, 1)?;
            numeric(ell_kprime(&real_arg(args, 0, "k", prec)?)?, "AGM on the complementary modulus", ulp)
        }
        "m" => {
            no_extra(args, 1)?;
            let a = real_arg(args, 0, "alpha", prec)?;
            let route = if a <= 0.9 { MRoute::Series } else { MRoute::Integral };
            let name = if route == MRoute::Series { "binomial series" } else { "(2/π)∫K by tanh-sinh" };
            numeric(m_alpha(&a, route)?, name, ulp)
        }
        "R" => {
            no_extra(args, 1)?;
            numeric(r_alpha(&real_arg(args, 0, "alpha", prec)?, RRoute::Polylog)?, "(4/π²)χ₃(α)", ulp)
        }
        "chi3" => {
            no_extra(args, 1)?;
            numeric(legendre_chi3(&real_arg(args, 0, "alpha", prec)?)?, "trilogarithms", ulp)
        }
        "mRk" => {
            no_extra(args, 1)?;
            let k = real_arg(args, 0, "k", prec)?;
            numeric(m_rk_hypergeometric(&k, ulp)?, "log|k| − (8/k²)·₆F₅(256/k²)", ulp)
        }
        "mahler" => {
            no_extra(args, 1)?;
            let name = arg(args, 0, "name|file")?;
            let poly = match LaurentDescriptor::builtin(name) {
                Some(p) => p,
                None if Path::new(name).is_file() => {
                    let text = std::fs::read_to_string(name).map_err(|e| Error::Io(format!("{name}: {e}")))?;
                    LaurentDescriptor::parse(name, &text)?
                }
                None => return Err(Error::NotFound { id: name.into(), suggestions: vec!["p:4".into(), "prod3:8".into(), "r:16".into()] }),
            };
            let q = mahler_numeric(&poly, &cfg.qmc())?;
            let route = format!("lattice QMC, {} samples × {} shifts, seed {:#x}", cfg.samples, cfg.qmc().shifts, cfg.seed);
            let meaningful = (2.0 - q.error_estimate.max(1e-300).log10()).ceil() as usize;
            Computed {
                quantity: String::new(),
                value: to_fixed(&q.value, digits.min(meaningful)),
                route,
                error_estimate: q.error_estimate,
            }
        }
        "ap" | "an" => {
            no_extra(args, 2)?;
            let n: usize = int_arg(args, 0, "n")?;
            let form = match args.get(1).map(String::as_str) {
                None | Some("f") => f,
                Some("h") => h,
                Some(other) => return Err(Error::NotFound { id: other.into(), suggestions: vec!["f".into(), "h".into()] }),
            };
            if n == 0 {
                return Err(Error::InvalidArgument("coefficients are indexed from 1".into()));
            }
            exact(form.coefficient(n)?.to_string(), "eta-product q-expansion")
        }
        "count" => {
            no_extra(args, 2)?;
            let pc = count_points(int_arg(args, 0, "p")?, int_arg(args, 1, "t")?)?;
            exact(pc.count.to_string(), "direct enumeration over F_p³")
        }
        other => {
            let names: Vec<&str> = QUANTITIES.iter().map(|(u, _)| u.split(' ').next().unwrap_or(u)).collect();
            let mut suggestions: Vec<(f64, &str)> =
                names.iter().map(|n| (strsim::normalized_levenshtein(other, n), *n)).filter(|(s, _)| *s >= 0.3).collect();
            suggestions.sort_by(|a, b| b.0.total_cmp(&a.0));
            return Err(Error::NotFound {
                id: other.into(),
                suggestions: suggestions.into_iter().take(3).map(|(_, n)| n.to_string()).collect(),
            });
        }
    };
    out.quantity = std::iter::once(quantity).chain(args.iter().map(String::as_str)).collect::<Vec<_>>().join(" ");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(q: &str, args: &[&str], digits: Option<usize>) -> Result<Computed> {
        let cfg = RunConfig { digits, samples: 1 << 12, ..RunConfig::default() };
        compute(q, &args.iter().map(|s| s.to_string()).collect::<Vec<_>>(), &cfg)
    }

    #[test]
    fn documented_values() {
        assert_eq!(run("zeta", &["3"], Some(30)).unwrap().value, "1.202056903159594285399738161511");
        assert_eq!(run("ap", &["7"], None).unwrap().value, "24");
        assert_eq!(run("catalan", &[], Some(20)).unwrap().value, "0.91596559417721901505");
        assert_eq!(run("count", &["3", "1"], None).unwrap().route, "direct enumeration over F_p³");
    }

    #[test]
    fn large_k_limit() {
        let c = run("mRk", &["1e6"], Some(12)).unwrap();
        let v: f64 = c.value.parse().unwrap();
        assert!((v - 1e6f64.ln()).abs() < 1e-11, "{}", c.value);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(run("zeta", &[], None), Err(Error::InvalidArgument(_))));
        assert!(matches!(run("zeta", &["x"], None), Err(Error::Parse(_))));
        assert!(matches!(run("K", &["1.5"], None), Err(Error::Domain(_))));
        assert!(matches!(run("zeta", &["3", "4"], None), Err(Error::InvalidArgument(_))));
        match run("zetta", &["3"], None) {
            Err(Error::NotFound { suggestions, .. }) => assert_eq!(suggestions[0], "zeta"),
            other => panic!("{other:?}"),
        }
    }
}
