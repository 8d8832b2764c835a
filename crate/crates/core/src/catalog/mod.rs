//! Built-in tensor systems.
//!
//! Gauge conventions (the data is fixed up to gauge; these are the shipped
//! representatives):
//!
//! * every associator entry with the identity among `a, b, c` is `1`, and so is
//!   every braiding entry with the identity as a factor;
//! * `F` blocks are real orthogonal and symmetric where possible, so `Fbar` is
//!   the transpose of `F`;
//! * Fibonacci: `(F^{τττ}_τ)` over channels `(1, τ)` is
//!   `[[φ⁻¹, φ^{-1/2}], [φ^{-1/2}, -φ⁻¹]]`, `R^{ττ}_1 = e^{-4πi/5}`,
//!   `R^{ττ}_τ = e^{3πi/5}`;
//! * Ising: `(F^{σσσ}_σ) = [[1, 1], [1, -1]]/√2` over `(1, ψ)`,
//!   `(F^{σψσ}_ψ)^σ_σ = (F^{ψσψ}_σ)^σ_σ = -1`, `R^{σσ}_1 = e^{-πi/8}`,
//!   `R^{σσ}_ψ = e^{3πi/8}`, `R^{σψ}_σ = R^{ψσ}_σ = -i`, `R^{ψψ}_1 = -1`;
//! * su(2)_k: unitary quantum 6j symbols at `q = exp(iπ/(k+2))` and
//!   `R^{ab}_c = (-1)^{c-a-b} q^{c(c+1)-a(a+1)-b(b+1)}`;
//! * cyclic: trivial associator and trivial braiding.

mod su2k;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{one, phase, real, Real, Scalar};
use crate::tensor_system::{
    direct_product, BraidedTensorSystem, FKey, FusionRules, LabelSet, RKey, TensorSystem, TensorSystemBuilder,
};

pub use su2k::{su2k, su2k_label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogKey {
    Fibonacci,
    Ising,
    Su2k { k: u32 },
    Cyclic { n: u32 },
    FibXFib,
    /// Fusion table over `{0, 1, τ}` without identity; no associator data.
    Section33Rules,
}

pub const VALID_KEYS: &str = "fibonacci, ising, su2k:<k>=1.., cyclic:<n>=1.., fib_x_fib, section33_rules";

impl CatalogKey {
    /// Builds a key from a name and integer parameters (`k` for su2k, `n` for cyclic).
    pub fn new(name: &str, params: &HashMap<String, i64>) -> Result<Self> {
        let param = |p: &str| -> Result<u32> {
            let v = *params
                .get(p)
                .ok_or_else(|| Error::CatalogParam(format!("`{name}` requires parameter `{p}`")))?;
            if v < 1 {
                return Err(Error::CatalogParam(format!("`{name}` requires {p} >= 1, got {v}")));
            }
            u32::try_from(v).map_err(|_| Error::CatalogParam(format!("{p} = {v} too large")))
        };
        Ok(match name {
            "fibonacci" => Self::Fibonacci,
            "ising" => Self::Ising,
            "su2k" => Self::Su2k { k: param("k")? },
            "cyclic" => Self::Cyclic { n: param("n")? },
            "fib_x_fib" => Self::FibXFib,
            "section33_rules" => Self::Section33Rules,
            other => return Err(Error::UnknownCatalogKey { given: other.into(), valid: VALID_KEYS.into() }),
        })
    }
}

impl FromStr for CatalogKey {
    type Err = Error;

    /// Accepts `name`, `name:<v>` or `name(p=<v>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, value) = if let Some((n, v)) = s.split_once(':') {
            (n, Some(v.to_string()))
        } else if let Some((n, rest)) = s.split_once('(') {
            let inner = rest.trim_end_matches(')');
            let v = inner.split_once('=').map_or(inner, |(_, v)| v);
            (n, Some(v.to_string()))
        } else {
            (s, None)
        };
        let mut params = HashMap::new();
        if let Some(v) = value {
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::CatalogParam(format!("cannot parse parameter `{v}` in `{s}`")))?;
            let p = if name == "cyclic" { "n" } else { "k" };
            params.insert(p.to_string(), v);
        }
        Self::new(name, &params)
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fibonacci => f.write_str("fibonacci"),
            Self::Ising => f.write_str("ising"),
            Self::Su2k { k } => write!(f, "su2k:{k}"),
            Self::Cyclic { n } => write!(f, "cyclic:{n}"),
            Self::FibXFib => f.write_str("fib_x_fib"),
            Self::Section33Rules => f.write_str("section33_rules"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum CatalogEntry<T: Real> {
    Braided(BraidedTensorSystem<T>),
    Plain(TensorSystem<T>),
    RulesOnly(FusionRules),
}

impl<T: Real> CatalogEntry<T> {
    pub fn rules(&self) -> &FusionRules {
        match self {
            Self::Braided(b) => b.base().rules(),
            Self::Plain(s) => s.rules(),
            Self::RulesOnly(r) => r,
        }
    }

    pub fn tensor_system(&self) -> Result<&TensorSystem<T>> {
        match self {
            Self::Braided(b) => Ok(b.base()),
            Self::Plain(s) => Ok(s),
            Self::RulesOnly(_) => {
                Err(Error::Unsupported("this catalog entry ships fusion rules only, no F data".into()))
            }
        }
    }

    pub fn braided(&self) -> Option<&BraidedTensorSystem<T>> {
        match self {
            Self::Braided(b) => Some(b),
            _ => None,
        }
    }
}

/// Returns the catalog entry, validated at the default relation tolerance.
pub fn get_system<T: Real>(key: CatalogKey) -> Result<CatalogEntry<T>> {
    let tol = T::relation_tol();
    Ok(match key {
        CatalogKey::Fibonacci => CatalogEntry::Braided(fibonacci::<T>()?.into_validated(tol)?),
        CatalogKey::Ising => CatalogEntry::Braided(ising::<T>()?.into_validated(tol)?),
        CatalogKey::Su2k { k } => CatalogEntry::Braided(su2k::<T>(k)?.into_validated(tol)?),
        CatalogKey::Cyclic { n } => CatalogEntry::Braided(cyclic::<T>(n)?.into_validated(tol)?),
        CatalogKey::FibXFib => {
            let fib = fibonacci::<T>()?.into_validated(tol)?.into_base();
            CatalogEntry::Plain(direct_product(&fib, &fib)?.into_validated(tol)?)
        }
        CatalogKey::Section33Rules => CatalogEntry::RulesOnly(section33_rules()?),
    })
}

/// Fills every admissible associator entry not yet set with `1`, mirrors `F`
/// into `Fbar` as its transpose, and attaches braiding data.
pub(crate) fn finish_real_orthogonal<T: Real>(
    builder: &TensorSystemBuilder<T>,
    special: &HashMap<FKey, Scalar<T>>,
    r: HashMap<RKey, Scalar<T>>,
) -> Result<BraidedTensorSystem<T>> {
    let skeleton = builder.build()?;
    let n = skeleton.len();
    let mut b = builder.clone();
    for a in 0..n {
        for bb in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (es, fs) = skeleton.block_channels(a, bb, c, d);
                    for &e in &es {
                        for &f in &fs {
                            let k = [a, bb, c, d, e, f];
                            let v = special.get(&k).copied().unwrap_or_else(one);
                            b.f_by_id(k, v);
                            b.fbar_by_id(k, v);
                        }
                    }
                }
            }
        }
    }
    BraidedTensorSystem::with_inverse_rbar(b.build()?, r)
}

fn self_dual_with_identity<T: Real>(b: &mut TensorSystemBuilder<T>, unit: &str) -> Result<()> {
    b.identity(unit)?;
    let names: Vec<String> = b.labels().labels().iter().map(|l| l.0.clone()).collect();
    for x in &names {
        b.dual(x, x)?;
    }
    Ok(())
}

/// Golden ratio `(1 + √5) / 2`.
pub fn golden<T: Real>() -> T {
    (T::one() + T::lit(5.0).sqrt()) / T::lit(2.0)
}

pub fn fibonacci<T: Real>() -> Result<BraidedTensorSystem<T>> {
    let mut b = TensorSystemBuilder::<T>::new(["1", "τ"])?;
    for (x, y, z) in [("1", "1", "1"), ("1", "τ", "τ"), ("τ", "1", "τ"), ("τ", "τ", "1"), ("τ", "τ", "τ")] {
        b.fuse(x, y, z)?;
    }
    self_dual_with_identity(&mut b, "1")?;
    let (u, t) = (b.labels().id("1")?, b.labels().id("τ")?);
    let phi = golden::<T>();
    let inv = phi.recip();
    let isq = inv.sqrt();
    let special: HashMap<FKey, Scalar<T>> = [
        ([t, t, t, t, u, u], real(inv)),
        ([t, t, t, t, u, t], real(isq)),
        ([t, t, t, t, t, u], real(isq)),
        ([t, t, t, t, t, t], real(-inv)),
    ]
    .into_iter()
    .collect();
    let pi = T::PI();
    let five = T::lit(5.0);
    let r: HashMap<RKey, Scalar<T>> = [
        ([u, u, u], one()),
        ([u, t, t], one()),
        ([t, u, t], one()),
        ([t, t, u], phase(-T::lit(4.0) * pi / five)),
        ([t, t, t], phase(T::lit(3.0) * pi / five)),
    ]
    .into_iter()
    .collect();
    finish_real_orthogonal(&b, &special, r)
}

pub fn ising<T: Real>() -> Result<BraidedTensorSystem<T>> {
    let mut b = TensorSystemBuilder::<T>::new(["1", "σ", "ψ"])?;
    for (x, y, z) in [
        ("1", "1", "1"),
        ("1", "σ", "σ"),
        ("σ", "1", "σ"),
        ("1", "ψ", "ψ"),
        ("ψ", "1", "ψ"),
        ("σ", "σ", "1"),
        ("σ", "σ", "ψ"),
        ("σ", "ψ", "σ"),
        ("ψ", "σ", "σ"),
        ("ψ", "ψ", "1"),
    ] {
        b.fuse(x, y, z)?;
    }
    self_dual_with_identity(&mut b, "1")?;
    let (u, s, p) = (b.labels().id("1")?, b.labels().id("σ")?, b.labels().id("ψ")?);
    let h = T::lit(0.5).sqrt();
    let special: HashMap<FKey, Scalar<T>> = [
        ([s, s, s, s, u, u], real(h)),
        ([s, s, s, s, u, p], real(h)),
        ([s, s, s, s, p, u], real(h)),
        ([s, s, s, s, p, p], real(-h)),
        ([s, p, s, p, s, s], real(-T::one())),
        ([p, s, p, s, s, s], real(-T::one())),
    ]
    .into_iter()
    .collect();
    let pi8 = T::PI() / T::lit(8.0);
    let minus_i = Scalar::new(T::zero(), -T::one());
    let r: HashMap<RKey, Scalar<T>> = [
        ([u, u, u], one()),
        ([u, s, s], one()),
        ([s, u, s], one()),
        ([u, p, p], one()),
        ([p, u, p], one()),
        ([s, s, u], phase(-pi8)),
        ([s, s, p], phase(T::lit(3.0) * pi8)),
        ([s, p, s], minus_i),
        ([p, s, s], minus_i),
        ([p, p, u], real(-T::one())),
    ]
    .into_iter()
    .collect();
    finish_real_orthogonal(&b, &special, r)
}

/// `Z_n` fusion with trivial associator and braiding.
pub fn cyclic<T: Real>(n: u32) -> Result<BraidedTensorSystem<T>> {
    if n < 1 {
        return Err(Error::CatalogParam(format!("cyclic requires n >= 1, got {n}")));
    }
    let names: Vec<String> = (0..n).map(|a| a.to_string()).collect();
    let mut b = TensorSystemBuilder::<T>::new(names.iter().cloned())?;
    for a in 0..n {
        for c in 0..n {
            b.fuse(&names[a as usize], &names[c as usize], &names[((a + c) % n) as usize])?;
        }
        b.dual(&names[a as usize], &names[((n - a) % n) as usize])?;
    }
    b.identity("0")?;
    let ids = b.labels().clone();
    let mut r = HashMap::new();
    for a in 0..n {
        for c in 0..n {
            let k = [
                ids.id(&names[a as usize])?,
                ids.id(&names[c as usize])?,
                ids.id(&names[((a + c) % n) as usize])?,
            ];
            r.insert(k, one());
        }
    }
    finish_real_orthogonal(&b, &HashMap::new(), r)
}

/// The printed fusion table over `{0, 1, τ}` (no identity, no duals, no F data).
pub fn section33_rules() -> Result<FusionRules> {
    let labels = LabelSet::new(["0", "1", "τ"])?;
    FusionRules::from_named(
        labels,
        [
            ("0", "0", "1"),
            ("0", "1", "1"),
            ("0", "τ", "τ"),
            ("1", "0", "1"),
            ("1", "1", "1"),
            ("1", "τ", "τ"),
            ("τ", "0", "τ"),
            ("τ", "1", "τ"),
            ("τ", "τ", "1"),
            ("τ", "τ", "τ"),
        ],
    )
}

/// ASCII spellings accepted for the Greek catalog labels.
pub fn resolve_label(labels: &LabelSet, token: &str) -> Result<usize> {
    if let Ok(id) = labels.id(token) {
        return Ok(id);
    }
    let alias = match token {
        "tau" => "τ",
        "sigma" => "σ",
        "psi" => "ψ",
        _ => token,
    };
    labels.id(alias)
}

#[cfg(test)]
mod tests;
