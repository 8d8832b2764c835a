//! JSON file format for tensor systems.
//!
//! ```json
//! {
//!   "labels": ["1", "τ"],
//!   "fusion": [["1", "1", "1"], ["τ", "τ", "1"], ...],
//!   "F": [{"a": "τ", "b": "τ", "c": "τ", "d": "τ", "e": "1", "f": "1", "re": 0.618, "im": 0.0}, ...],
//!   "Fbar": [...],
//!   "R": [{"a": "τ", "b": "τ", "c": "1", "re": -0.809, "im": -0.588}, ...],
//!   "Rbar": [...],
//!   "identity": "1",
//!   "dual": {"1": "1", "τ": "τ"}
//! }
//! ```
//!
//! `F` and `Fbar` entries share the key layout: `e` is the `(ab)` channel and
//! `f` the `(bc)` channel. Absent entries are zero. When `Fbar` is missing it is
//! computed by block inversion; when `R` is given without `Rbar`, `Rbar^{ba}_c`
//! is taken as `1 / R^{ab}_c`. Floats are written in shortest round-trip form.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::scalar::{from_c64, to_c64, Real, Scalar};
use crate::tensor_system::{BraidedTensorSystem, FKey, FSymbolTable, LabelSet, RKey, TensorSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub f: String,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct REntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Serialized form of a (possibly braided) tensor system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub labels: Vec<String>,
    pub fusion: Vec<[String; 3]>,
    #[serde(rename = "F")]
    pub f: Vec<FEntry>,
    #[serde(rename = "Fbar", default, skip_serializing_if = "Option::is_none")]
    pub fbar: Option<Vec<FEntry>>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<REntry>>,
    #[serde(rename = "Rbar", default, skip_serializing_if = "Option::is_none")]
    pub rbar: Option<Vec<REntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<BTreeMap<String, String>>,
}

fn lookup(labels: &LabelSet, field: &str, token: &str) -> Result<usize> {
    labels
        .id(token)
        .map_err(|_| Error::Structural(format!("{field}: unknown label `{token}`")))
}

fn f_table<T: Real>(labels: &LabelSet, field: &str, entries: &[FEntry]) -> Result<HashMap<FKey, Scalar<T>>> {
    let mut out = HashMap::new();
    for (i, en) in entries.iter().enumerate() {
        let at = format!("{field}[{i}]");
        let mut k = [0; 6];
        for (slot, (name, tok)) in k.iter_mut().zip([
            ("a", &en.a),
            ("b", &en.b),
            ("c", &en.c),
            ("d", &en.d),
            ("e", &en.e),
            ("f", &en.f),
        ]) {
            *slot = lookup(labels, &format!("{at}.{name}"), tok)?;
        }
        if out.insert(k, from_c64(Complex::new(en.re, en.im))).is_some() {
            return Err(Error::Structural(format!("{at}: duplicate entry")));
        }
    }
    Ok(out)
}

fn r_table<T: Real>(labels: &LabelSet, field: &str, entries: &[REntry]) -> Result<HashMap<RKey, Scalar<T>>> {
    let mut out = HashMap::new();
    for (i, en) in entries.iter().enumerate() {
        let at = format!("{field}[{i}]");
        let k = [
            lookup(labels, &format!("{at}.a"), &en.a)?,
            lookup(labels, &format!("{at}.b"), &en.b)?,
            lookup(labels, &format!("{at}.c"), &en.c)?,
        ];
        if out.insert(k, from_c64(Complex::new(en.re, en.im))).is_some() {
            return Err(Error::Structural(format!("{at}: duplicate entry")));
        }
    }
    Ok(out)
}

impl SystemFile {
    /// Builds the system described by the file. Validation is attempted at `tol`;
    /// the result carries the validated flag only if every axiom passed.
    pub fn into_system<T: Real>(self, tol: T) -> Result<CatalogEntry<T>> {
        let mut b = TensorSystem::<T>::builder(self.labels.iter().cloned())?;
        let labels = b.labels().clone();
        for (i, [x, y, z]) in self.fusion.iter().enumerate() {
            for (name, tok) in [("0", x), ("1", y), ("2", z)] {
                lookup(&labels, &format!("fusion[{i}][{name}]"), tok)?;
            }
            b.fuse(x, y, z)?;
        }
        for (k, v) in f_table::<T>(&labels, "F", &self.f)? {
            b.f_by_id(k, v);
        }
        if let Some(fbar) = &self.fbar {
            for (k, v) in f_table::<T>(&labels, "Fbar", fbar)? {
                b.fbar_by_id(k, v);
            }
        }
        if let Some(id) = &self.identity {
            lookup(&labels, "identity", id)?;
            b.identity(id)?;
        }
        if let Some(dual) = &self.dual {
            for (x, y) in dual {
                lookup(&labels, &format!("dual.{x}"), x)?;
                lookup(&labels, &format!("dual.{x}"), y)?;
                b.dual(x, y)?;
            }
        }
        let raw = b.build()?;
        let base = if self.fbar.is_some() {
            let checked = raw.validate(tol).passed;
            if checked {
                raw.into_validated(tol)?
            } else {
                raw
            }
        } else {
            raw.complete_fbar(tol)?
        };
        let Some(r) = &self.r else {
            if self.rbar.is_some() {
                return Err(Error::Structural("Rbar given without R".into()));
            }
            return Ok(CatalogEntry::Plain(base));
        };
        let r = r_table::<T>(&labels, "R", r)?;
        let bsys = match &self.rbar {
            Some(rbar) => BraidedTensorSystem::new(base, r, r_table::<T>(&labels, "Rbar", rbar)?)?,
            None => BraidedTensorSystem::with_inverse_rbar(base, r)?,
        };
        if bsys.base().is_validated() && bsys.validate_braiding(tol)?.passed {
            return Ok(CatalogEntry::Braided(bsys.into_validated(tol)?));
        }
        Ok(CatalogEntry::Braided(bsys))
    }

    pub fn from_system<T: Real>(sys: &TensorSystem<T>) -> Self {
        let name = |i: usize| sys.name(i).to_string();
        let f_entries = |it: Vec<(&FKey, &Scalar<T>)>| -> Vec<FEntry> {
            let mut v: Vec<_> = it.into_iter().filter(|(_, z)| z.norm() > T::zero()).collect();
            v.sort_by_key(|(k, _)| **k);
            v.into_iter()
                .map(|(k, z)| {
                    let z = to_c64(*z);
                    FEntry {
                        a: name(k[0]),
                        b: name(k[1]),
                        c: name(k[2]),
                        d: name(k[3]),
                        e: name(k[4]),
                        f: name(k[5]),
                        re: z.re,
                        im: z.im,
                    }
                })
                .collect()
        };
        let fsym: &FSymbolTable<T> = sys.fsym();
        Self {
            labels: sys.labels().labels().iter().map(|l| l.0.clone()).collect(),
            fusion: sys.rules().support().iter().map(|&(a, b, c)| [name(a), name(b), name(c)]).collect(),
            f: f_entries(fsym.f_entries().collect()),
            fbar: Some(f_entries(fsym.fbar_entries().collect())),
            r: None,
            rbar: None,
            identity: sys.identity().map(name),
            dual: sys.dual().map(|d| d.iter().enumerate().map(|(a, &b)| (name(a), name(b))).collect()),
        }
    }

    pub fn from_braided<T: Real>(bsys: &BraidedTensorSystem<T>) -> Self {
        let sys = bsys.base();
        let r_entries = |table: &HashMap<RKey, Scalar<T>>| -> Vec<REntry> {
            let mut v: Vec<_> = table.iter().filter(|(_, z)| z.norm() > T::zero()).collect();
            v.sort_by_key(|(k, _)| **k);
            v.into_iter()
                .map(|(k, z)| {
                    let z = to_c64(*z);
                    REntry { a: sys.name(k[0]).into(), b: sys.name(k[1]).into(), c: sys.name(k[2]).into(), re: z.re, im: z.im }
                })
                .collect()
        };
        Self {
            r: Some(r_entries(bsys.r_table())),
            rbar: Some(r_entries(bsys.rbar_table())),
            ..Self::from_system(sys)
        }
    }

    pub fn from_entry<T: Real>(entry: &CatalogEntry<T>) -> Result<Self> {
        Ok(match entry {
            CatalogEntry::Braided(b) => Self::from_braided(b),
            CatalogEntry::Plain(s) => Self::from_system(s),
            CatalogEntry::RulesOnly(_) => {
                return Err(Error::Unsupported("fusion rules without F data cannot be exported".into()))
            }
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Parses a system from JSON text. Syntax errors carry line and column.
pub fn parse_system<T: Real>(text: &str, tol: T) -> Result<CatalogEntry<T>> {
    let file: SystemFile = serde_json::from_str(text)?;
    file.into_system(tol)
}

pub fn load_system<T: Real>(path: &Path, tol: T) -> Result<CatalogEntry<T>> {
    parse_system(&std::fs::read_to_string(path)?, tol)
}

pub fn save_system<T: Real>(entry: &CatalogEntry<T>, path: &Path) -> Result<()> {
    std::fs::write(path, SystemFile::from_entry(entry)?.to_json()?)?;
    Ok(())
}
