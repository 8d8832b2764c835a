//! Data model and validators for multiplicity-free (braided) tensor systems.

mod braided;
mod fbar;
mod fsym;
mod fusion;
mod gauge;
mod onedim;
mod product;
mod validate;

use std::collections::HashMap;

pub use braided::{BraidedTensorSystem, RKey};
pub use fsym::{FKey, FSymbolTable};
pub use fusion::{FusionRules, Label, LabelSet};
pub use gauge::{apply_gauge, GaugeTransform};
pub use onedim::OneDimProfile;
pub use product::direct_product;
pub use validate::{validate_system, AxiomCheck, ValidationReport};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Labels, fusion rules and associator data `(I, N, F, Fbar)`, optionally with an
/// identity object and a duality involution.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorSystem<T: Real> {
    rules: FusionRules,
    fsym: FSymbolTable<T>,
    identity: Option<usize>,
    dual: Option<Vec<usize>>,
    validated: bool,
}

impl<T: Real> TensorSystem<T> {
    /// Assembles a system from parts. Keys of `fsym` must be in range; the result
    /// is not validated.
    pub fn from_parts(
        rules: FusionRules,
        fsym: FSymbolTable<T>,
        identity: Option<usize>,
        dual: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = rules.len();
        let bad_key = fsym.f.keys().chain(fsym.fbar.keys()).find(|k| k.iter().any(|&x| x >= n));
        if let Some(k) = bad_key {
            return Err(Error::Structural(format!("F entry {k:?} references an unknown label")));
        }
        if identity.is_some_and(|i| i >= n) {
            return Err(Error::Structural("identity label out of range".into()));
        }
        if let Some(d) = &dual {
            if d.len() != n || d.iter().any(|&x| x >= n) {
                return Err(Error::Structural("dual map must cover every label".into()));
            }
            if (0..n).any(|a| d[d[a]] != a) {
                return Err(Error::Structural("dual map is not an involution".into()));
            }
        }
        Ok(Self { rules, fsym, identity, dual, validated: false })
    }

    pub fn builder<I, S>(labels: I) -> Result<TensorSystemBuilder<T>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TensorSystemBuilder::new(labels)
    }

    pub fn rules(&self) -> &FusionRules {
        &self.rules
    }

    pub fn labels(&self) -> &LabelSet {
        self.rules.labels()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn id(&self, name: &str) -> Result<usize> {
        self.labels().id(name)
    }

    pub fn name(&self, id: usize) -> &str {
        self.labels().name(id)
    }

    #[inline]
    pub fn has(&self, a: usize, b: usize, c: usize) -> bool {
        self.rules.has(a, b, c)
    }

    #[inline]
    pub fn outcomes(&self, a: usize, b: usize) -> &[usize] {
        self.rules.outcomes(a, b)
    }

    /// `(F^{abc}_d)^e_f`.
    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Scalar<T> {
        self.fsym.f([a, b, c, d, e, f])
    }

    /// `(Fbar^{abc}_d)^f_e` (note the index placement: `e` is the `(ab)` channel).
    #[inline]
    pub fn fbar(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Scalar<T> {
        self.fsym.fbar([a, b, c, d, e, f])
    }

    pub fn fsym(&self) -> &FSymbolTable<T> {
        &self.fsym
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn dual(&self) -> Option<&[usize]> {
        self.dual.as_deref()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub(crate) fn require_validated(&self, what: &str) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::NotValidated(format!("{what} requires a validated tensor system")))
        }
    }

    /// Runs every axiom check and marks the system validated when all pass.
    pub fn into_validated(mut self, tol: T) -> Result<Self> {
        let report = self.validate(tol);
        if report.passed {
            self.validated = true;
            Ok(self)
        } else {
            Err(Error::Validation(Box::new(report)))
        }
    }

    /// `(ab)`-channels `e` and `(bc)`-channels `f` of the block `(a,b,c;d)`.
    pub fn block_channels(&self, a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
        let es = self.outcomes(a, b).iter().copied().filter(|&e| self.has(e, c, d)).collect();
        let fs = self.outcomes(b, c).iter().copied().filter(|&f| self.has(a, f, d)).collect();
        (es, fs)
    }

    pub(crate) fn with_fsym(&self, fsym: FSymbolTable<T>) -> Self {
        Self {
            rules: self.rules.clone(),
            fsym,
            identity: self.identity,
            dual: self.dual.clone(),
            validated: false,
        }
    }

    pub(crate) fn mark_validated(&mut self) {
        self.validated = true;
    }

    /// `(F^{aaa}_d)^e_e`. Returns zero at positions forced to vanish.
    pub fn gauge_invariant_diagonal(&self, a: usize, d: usize, e: usize) -> Result<Scalar<T>> {
        self.require_validated("gauge_invariant_diagonal")?;
        Ok(self.f(a, a, a, d, e, e))
    }

    /// `N_{seq}^b`, the extended fusion coefficient.
    pub fn extended_fusion(&self, seq: &[usize], b: usize) -> Result<u64> {
        self.rules.extended(seq, b)
    }

    pub fn extended_fusion_named(&self, seq: &[&str], b: &str) -> Result<u64> {
        let ids = seq.iter().map(|s| self.id(s)).collect::<Result<Vec<_>>>()?;
        self.rules.extended(&ids, self.id(b)?)
    }
}

/// Name-based builder used by the catalog and the file loader.
#[derive(Clone, Debug)]
pub struct TensorSystemBuilder<T: Real> {
    labels: LabelSet,
    fusion: Vec<(usize, usize, usize, i64)>,
    fsym: FSymbolTable<T>,
    identity: Option<usize>,
    dual: HashMap<usize, usize>,
}

impl<T: Real> TensorSystemBuilder<T> {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Ok(Self {
            labels: LabelSet::new(labels)?,
            fusion: Vec::new(),
            fsym: FSymbolTable::new(),
            identity: None,
            dual: HashMap::new(),
        })
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn fuse(&mut self, a: &str, b: &str, c: &str) -> Result<&mut Self> {
        self.coefficient(a, b, c, 1)
    }

    pub fn coefficient(&mut self, a: &str, b: &str, c: &str, n: i64) -> Result<&mut Self> {
        let t = (self.labels.id(a)?, self.labels.id(b)?, self.labels.id(c)?, n);
        self.fusion.push(t);
        Ok(self)
    }

    fn key(&self, k: [&str; 6]) -> Result<FKey> {
        let mut out = [0; 6];
        for (o, s) in out.iter_mut().zip(k) {
            *o = self.labels.id(s)?;
        }
        Ok(out)
    }

    pub fn f(&mut self, k: [&str; 6], v: Scalar<T>) -> Result<&mut Self> {
        let key = self.key(k)?;
        self.fsym.set_f(key, v);
        Ok(self)
    }

    pub fn fbar(&mut self, k: [&str; 6], v: Scalar<T>) -> Result<&mut Self> {
        let key = self.key(k)?;
        self.fsym.set_fbar(key, v);
        Ok(self)
    }

    pub fn f_by_id(&mut self, k: FKey, v: Scalar<T>) -> &mut Self {
        self.fsym.set_f(k, v);
        self
    }

    pub fn fbar_by_id(&mut self, k: FKey, v: Scalar<T>) -> &mut Self {
        self.fsym.set_fbar(k, v);
        self
    }

    pub fn identity(&mut self, name: &str) -> Result<&mut Self> {
        self.identity = Some(self.labels.id(name)?);
        Ok(self)
    }

    pub fn dual(&mut self, a: &str, b: &str) -> Result<&mut Self> {
        let (a, b) = (self.labels.id(a)?, self.labels.id(b)?);
        self.dual.insert(a, b);
        Ok(self)
    }

    pub fn build(&self) -> Result<TensorSystem<T>> {
        let rules = FusionRules::from_coefficients(self.labels.clone(), self.fusion.iter().copied())?;
        let dual = if self.dual.is_empty() {
            None
        } else {
            let n = self.labels.len();
            let mut d = Vec::with_capacity(n);
            for a in 0..n {
                let x = self.dual.get(&a).copied().ok_or_else(|| {
                    Error::Structural(format!("dual map has no entry for `{}`", self.labels.name(a)))
                })?;
                d.push(x);
            }
            Some(d)
        };
        TensorSystem::from_parts(rules, self.fsym.clone(), self.identity, dual)
    }
}

#[cfg(test)]
mod tests;
