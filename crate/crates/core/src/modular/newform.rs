//! The two eta-product newforms and their coefficient caches.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::modular::qseries::{eta_qexp, QSeries};
use crate::precision::{Integer, Rational};

/// Largest coefficient index the cache will grow to.
pub const MAX_COEFFICIENT_INDEX: usize = 1_000_000;

/// `Π η(m_i τ)^{e_i}` as pairs `(m_i, e_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaRecipe {
    pub factors: Vec<(usize, u32)>,
}

impl EtaRecipe {
    /// Exponent of the leading `q` power, `Σ m_i e_i / 24`.
    pub fn q_power(&self) -> Rational {
        let total: usize = self.factors.iter().map(|&(m, e)| m * e as usize).sum();
        Rational::from((total as u64, 24u64))
    }

    /// Coefficients `a_0..=a_order` of the full eta product.
    pub fn expand(&self, order: usize) -> Result<QSeries> {
        let shift = self.q_power();
        if *shift.denom() != 1 {
            return Err(Error::InvalidArgument(format!("eta product has fractional q-power {shift}")));
        }
        let shift = shift.numer().to_usize().unwrap_or(usize::MAX);
        if shift > order {
            return Ok(QSeries::zero(order));
        }
        let inner = order - shift;
        let mut product = QSeries::one(inner);
        for &(m, e) in &self.factors {
            let (eta, _) = eta_qexp(m, inner);
            product = &product * &eta.pow(e);
        }
        Ok(QSeries::new(product.into_coefficients(), order).shift(shift))
    }
}

#[derive(Debug, Default)]
struct CoefficientCache {
    /// `a_0, a_1, …`; `a_0 = 0` for cusp forms.
    coefficients: Vec<Integer>,
    file: Option<PathBuf>,
}

/// A normalized Hecke newform given as an eta product.
#[derive(Clone)]
pub struct NewformSpec {
    pub name: String,
    pub weight: u32,
    pub level: u32,
    pub fricke_sign: i32,
    pub recipe: EtaRecipe,
    pub character_note: String,
    cache: Arc<RwLock<CoefficientCache>>,
}

impl fmt::Debug for NewformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NewformSpec")
            .field("name", &self.name)
            .field("weight", &self.weight)
            .field("level", &self.level)
            .field("fricke_sign", &self.fricke_sign)
            .field("recipe", &self.recipe)
            .finish()
    }
}

impl NewformSpec {
    pub fn new(name: &str, weight: u32, level: u32, fricke_sign: i32, recipe: EtaRecipe, note: &str) -> Self {
        Self {
            name: name.into(),
            weight,
            level,
            fricke_sign,
            recipe,
            character_note: note.into(),
            cache: Arc::default(),
        }
    }

    /// `f = η(2τ)⁴η(4τ)⁴ ∈ S₄(Γ₀(8))`.
    pub fn f() -> Self {
        Self::new(
            "f",
            4,
            8,
            1,
            EtaRecipe { factors: vec![(2, 4), (4, 4)] },
            "trivial character",
        )
    }

    /// `h = η(4τ)⁶ ∈ S₃(Γ₀(16), χ₋₄)`.
    pub fn h() -> Self {
        Self::new(
            "h",
            3,
            16,
            1,
            EtaRecipe { factors: vec![(4, 6)] },
            "nebentypus χ₋₄; coefficients are real so the Fricke involution preserves h",
        )
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "f" => Ok(Self::f()),
            "h" => Ok(Self::h()),
            other => Err(Error::NotFound {
                id: other.into(),
                suggestions: vec!["f".into(), "h".into()],
            }),
        }
    }

    /// Same form with the opposite Fricke sign; coefficients are shared.
    pub fn with_fricke_sign(&self, sign: i32) -> Self {
        Self { fricke_sign: sign, ..self.clone() }
    }

    /// Backs the coefficient cache with a text file of `n a_n` lines.
    ///
    /// Existing entries are read and checked against a fresh expansion of
    /// the first few coefficients before use.
    pub fn with_cache_file(self, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let loaded = if path.exists() { read_cache_file(&path)? } else { Vec::new() };
        if loaded.len() > 1 {
            let check = (loaded.len() - 1).min(64);
            let fresh = self.recipe.expand(check)?;
            if fresh.coefficients()[1..=check] != loaded[1..=check] {
                return Err(Error::Consistency(format!(
                    "coefficient cache {} does not match the {} expansion",
                    path.display(),
                    self.name
                )));
            }
        }
        {
            let mut cache = self.cache.write().unwrap();
            if loaded.len() > cache.coefficients.len() {
                cache.coefficients = loaded;
            }
            cache.file = Some(path);
        }
        Ok(self)
    }

    /// Number of coefficients currently cached.
    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().coefficients.len()
    }

    fn ensure(&self, n: usize) -> Result<()> {
        if n < self.cached_len() {
            return Ok(());
        }
        if n > MAX_COEFFICIENT_INDEX {
            return Err(Error::Resource(format!(
                "coefficient a_{n} of {} exceeds the cache limit {MAX_COEFFICIENT_INDEX}",
                self.name
            )));
        }
        let mut cache = self.cache.write().unwrap();
        if n < cache.coefficients.len() {
            return Ok(());
        }
        let target = n.max(2 * cache.coefficients.len()).clamp(64, MAX_COEFFICIENT_INDEX);
        let series = self.recipe.expand(target)?;
        cache.coefficients = series.into_coefficients();
        if let Some(path) = &cache.file {
            write_cache_file(path, &cache.coefficients)?;
        }
        Ok(())
    }

    /// `a_n`.
    pub fn coefficient(&self, n: usize) -> Result<Integer> {
        if n == 0 {
            return Err(Error::InvalidArgument("newform coefficients start at n = 1".into()));
        }
        self.ensure(n)?;
        Ok(self.cache.read().unwrap().coefficients[n].clone())
    }

    /// `a_1, …, a_n`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<Integer>> {
        self.ensure(n)?;
        Ok(self.cache.read().unwrap().coefficients[1..=n].to_vec())
    }
}

/// `a_n` of a newform.
pub fn newform_coefficient(spec: &NewformSpec, n: usize) -> Result<Integer> {
    spec.coefficient(n)
}

fn read_cache_file(path: &Path) -> Result<Vec<Integer>> {
    let text = fs::read_to_string(path)?;
    let mut out = vec![Integer::new()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse_err = || Error::Parse(format!("{}:{}: expected `n a_n`", path.display(), lineno + 1));
        let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        let a: Integer = parts.next().and_then(|s| s.parse().ok()).ok_or_else(parse_err)?;
        if n != out.len() {
            return Err(Error::Parse(format!(
                "{}:{}: expected index {}, found {n}",
                path.display(),
                lineno + 1,
                out.len()
            )));
        }
        out.push(a);
    }
    Ok(out)
}

fn write_cache_file(path: &Path, coefficients: &[Integer]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        for (n, a) in coefficients.iter().enumerate().skip(1) {
            writeln!(w, "{n} {a}")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
