//! Sparse Laurent polynomials on the unit torus.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 4;
pub const MAX_EXPONENT: i32 = 8;

/// Families with a cosine-reduced integrand: every `x + x⁻¹` becomes
/// `2cos(2πθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `Σ (xᵢ + xᵢ⁻¹) − k`
    Sum { dimension: usize, k: i64 },
    /// `Π (xᵢ + xᵢ⁻¹) − k`
    Product { dimension: usize, k: i64 },
}

impl Family {
    pub fn dimension(&self) -> usize {
        match *self {
            Family::Sum { dimension, .. } | Family::Product { dimension, .. } => dimension,
        }
    }

    pub fn evaluate_abs(&self, theta: &[f64]) -> f64 {
        match *self {
            Family::Sum { k, .. } => theta.iter().map(|t| 2.0 * (TAU * t).cos()).sum::<f64>() - k as f64,
            Family::Product { k, .. } => theta.iter().map(|t| 2.0 * (TAU * t).cos()).product::<f64>() - k as f64,
        }
        .abs()
    }
}

/// `Σ c_e x^e` in one to four variables with integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentDescriptor {
    pub name: String,
    dimension: usize,
    terms: BTreeMap<Vec<i32>, i64>,
    family: Option<Family>,
}

impl fmt::Debug for LaurentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (", self.name)?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·x^{e:?}")?;
        }
        write!(f, ")")
    }
}

impl LaurentDescriptor {
    pub fn new(name: impl Into<String>, dimension: usize, terms: impl IntoIterator<Item = (Vec<i32>, i64)>) -> Result<Self> {
        if dimension == 0 || dimension > MAX_DIMENSION {
            return Err(Error::InvalidArgument(format!("dimension {dimension} outside 1..={MAX_DIMENSION}")));
        }
        let mut map: BTreeMap<Vec<i32>, i64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dimension {
                return Err(Error::InvalidArgument(format!(
                    "exponent vector {e:?} does not have {dimension} entries"
                )));
            }
            if let Some(bad) = e.iter().find(|x| x.abs() > MAX_EXPONENT) {
                return Err(Error::InvalidArgument(format!("exponent {bad} exceeds ±{MAX_EXPONENT}")));
            }
            let slot = map.entry(e).or_insert(0);
            *slot = slot
                .checked_add(c)
                .ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?;
        }
        map.retain(|_, c| *c != 0);
        if map.is_empty() {
            return Err(Error::InvalidArgument("the zero polynomial has no Mahler measure".into()));
        }
        Ok(Self { name: name.into(), dimension, terms: map, family: None })
    }

    /// Reads lines of `coefficient e₁ … e_d`; blank lines and `#` comments
    /// are skipped.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut dimension = None;
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{line}`", lineno + 1));
            let c: i64 = fields.next().unwrap_or("").parse().map_err(|_| bad("bad coefficient"))?;
            let e: Vec<i32> = fields
                .map(|f| f.parse().map_err(|_| bad("bad exponent")))
                .collect::<Result<_>>()?;
            match dimension {
                None => dimension = Some(e.len()),
                Some(d) if d != e.len() => return Err(bad("inconsistent number of exponents")),
                _ => {}
            }
            terms.push((e, c));
        }
        let dimension = dimension.ok_or_else(|| Error::Parse("empty polynomial description".into()))?;
        Self::new(name, dimension, terms)
    }

    /// Built-ins: `p:k`, `q:k`, `r:k`, `s:k` (also written `p4`, `q8`,
    /// `r16`, `s0`) and `prod2:k`, `prod3:k`, `prod4:k`.
    ///
    /// `p` and `q` are the two- and three-variable sums `Σ(xᵢ+xᵢ⁻¹) − k`,
    /// `s` the four-variable sum, `r` the four-variable product
    /// `Π(xᵢ+xᵢ⁻¹) − k`.
    pub fn builtin(name: &str) -> Option<Self> {
        let name = name.trim();
        let (head, k) = match name.split_once(':') {
            Some((h, k)) => (h, k.trim().parse::<i64>().ok()?),
            None => {
                let split = name.find(|c: char| c.is_ascii_digit() || c == '-')?;
                let (h, k) = name.split_at(split);
                if h.len() != 1 {
                    return None;
                }
                (h, k.parse::<i64>().ok()?)
            }
        };
        let family = match head.to_ascii_lowercase().as_str() {
            "p" => Family::Sum { dimension: 2, k },
            "q" => Family::Sum { dimension: 3, k },
            "s" => Family::Sum { dimension: 4, k },
            "r" | "prod4" => Family::Product { dimension: 4, k },
            "prod2" => Family::Product { dimension: 2, k },
            "prod3" => Family::Product { dimension: 3, k },
            "prod1" => Family::Product { dimension: 1, k },
            _ => return None,
        };
        Some(Self::from_family(family))
    }

    pub fn from_family(family: Family) -> Self {
        let d = family.dimension();
        let unit = |j: usize, s: i32| {
            let mut e = vec![0; d];
            e[j] = s;
            e
        };
        let mut terms: Vec<(Vec<i32>, i64)> = Vec::new();
        let (name, k) = match family {
            Family::Sum { k, .. } => {
                for j in 0..d {
                    terms.push((unit(j, 1), 1));
                    terms.push((unit(j, -1), 1));
                }
                (format!("{}:{k}", ['?', '?', 'p', 'q', 's'][d]), k)
            }
            Family::Product { k, .. } => {
                for signs in 0..1u32 << d {
                    let e = (0..d).map(|j| if signs >> j & 1 == 1 { 1 } else { -1 }).collect();
                    terms.push((e, 1));
                }
                let name = if d == 4 { format!("r:{k}") } else { format!("prod{d}:{k}") };
                (name, k)
            }
        };
        terms.push((vec![0; d], -k));
        // Degenerate constants (e.g. sums with k = 0) keep the nonconstant part.
        let mut desc = Self::new(name, d, terms).expect("built-in families are nonzero");
        desc.family = Some(family);
        desc
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], i64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    /// `|P(e^{2πiθ})|` by direct complex summation.
    pub fn evaluate_abs(&self, theta: &[f64]) -> f64 {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (e, c) in &self.terms {
            let phase: f64 = e.iter().zip(theta).map(|(&k, &t)| f64::from(k) * t).sum();
            let (s, co) = (TAU * phase).sin_cos();
            re += *c as f64 * co;
            im += *c as f64 * s;
        }
        re.hypot(im)
    }

    /// `log|P|` on the torus, through the cosine-reduced form for built-ins.
    pub fn log_abs(&self, theta: &[f64]) -> f64 {
        let v = match self.family {
            Some(f) => f.evaluate_abs(theta),
            None => self.evaluate_abs(theta),
        };
        v.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtin_names() {
        for name in ["p4", "p:4", "q8", "r16", "r:-16", "s0", "prod3:8", "prod2:4"] {
            assert!(LaurentDescriptor::builtin(name).is_some(), "{name}");
        }
        for name in ["x4", "p", "r:abc", "prod9:1", "pp4"] {
            assert!(LaurentDescriptor::builtin(name).is_none(), "{name}");
        }
        assert_eq!(LaurentDescriptor::builtin("r16").unwrap().terms().count(), 17);
        assert_eq!(LaurentDescriptor::builtin("s0").unwrap().terms().count(), 8);
    }

    #[test]
    fn cosine_reduction_matches_complex_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["p:4", "q:2", "r:16", "r:-7", "s:0", "prod2:4", "prod3:8", "prod1:3"] {
            let d = LaurentDescriptor::builtin(name).unwrap();
            let f = d.family().unwrap();
            for _ in 0..200 {
                let t: Vec<f64> = (0..d.dimension()).map(|_| rng.gen()).collect();
                let a = d.evaluate_abs(&t);
                let b = f.evaluate_abs(&t);
                assert!((a - b).abs() < 1e-12 * (1.0 + b), "{name}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let d = LaurentDescriptor::parse("x-2", "1 1\n-2 0  # constant\n\n").unwrap();
        assert_eq!(d.dimension(), 1);
        assert!((d.evaluate_abs(&[0.5]) - 3.0).abs() < 1e-15);
        let merged = LaurentDescriptor::parse("m", "1 1 0\n2 1 0\n-3 0 1").unwrap();
        assert_eq!(merged.terms().collect::<Vec<_>>(), vec![(&[0, 1][..], -3), (&[1, 0][..], 3)]);
    }

    #[test]
    fn parse_rejections() {
        assert!(matches!(LaurentDescriptor::parse("e", ""), Err(Error::Parse(_))));
        assert!(matches!(LaurentDescriptor::parse("e", "1 1\n1 1 1"), Err(Error::Parse(_))));
        assert!(matches!(LaurentDescriptor::parse("e", "a 1"), Err(Error::Parse(_))));
        assert!(matches!(LaurentDescriptor::parse("e", "1 9"), Err(Error::InvalidArgument(_))));
        assert!(matches!(LaurentDescriptor::parse("e", "1 1\n-1 1"), Err(Error::InvalidArgument(_))));
        assert!(matches!(LaurentDescriptor::parse("e", "1 1 1 1 1 1"), Err(Error::InvalidArgument(_))));
    }
}
