use std::collections::HashMap;

use super::TensorSystem;
use crate::error::{Error, Result};
use crate::scalar::{zero, Real, Scalar};

pub type RKey = [usize; 3];

/// A tensor system with braiding tables `R^{ab}_c` and `Rbar^{ab}_c`.
///
/// Index convention: `R^{ab}_c` multiplies the first hexagon as
/// `R^{ac}_e (F^{acb}_d)^e_g R^{bc}_g = sum_f (F^{cab}_d)^e_f R^{fc}_d (F^{abc}_d)^f_g`,
/// and `R^{ab}_c Rbar^{ba}_c = 1` on the fusion support.
#[derive(Clone, Debug, PartialEq)]
pub struct BraidedTensorSystem<T: Real> {
    base: TensorSystem<T>,
    r: HashMap<RKey, Scalar<T>>,
    rbar: HashMap<RKey, Scalar<T>>,
    validated: bool,
}

impl<T: Real> BraidedTensorSystem<T> {
    pub fn new(
        base: TensorSystem<T>,
        r: HashMap<RKey, Scalar<T>>,
        rbar: HashMap<RKey, Scalar<T>>,
    ) -> Result<Self> {
        let n = base.len();
        if let Some(k) = r.keys().chain(rbar.keys()).find(|k| k.iter().any(|&x| x >= n)) {
            return Err(Error::Structural(format!("R entry {k:?} references an unknown label")));
        }
        Ok(Self { base, r, rbar, validated: false })
    }

    /// Builds `Rbar^{ba}_c = 1 / R^{ab}_c` on the support when only `R` is known.
    pub fn with_inverse_rbar(base: TensorSystem<T>, r: HashMap<RKey, Scalar<T>>) -> Result<Self> {
        let rbar = r
            .iter()
            .filter(|(_, v)| v.norm() > T::zero())
            .map(|(&[a, b, c], v)| ([b, a, c], v.inv()))
            .collect();
        Self::new(base, r, rbar)
    }

    pub fn base(&self) -> &TensorSystem<T> {
        &self.base
    }

    pub fn into_base(self) -> TensorSystem<T> {
        self.base
    }

    #[inline]
    pub fn r(&self, a: usize, b: usize, c: usize) -> Scalar<T> {
        self.r.get(&[a, b, c]).copied().unwrap_or_else(zero)
    }

    #[inline]
    pub fn rbar(&self, a: usize, b: usize, c: usize) -> Scalar<T> {
        self.rbar.get(&[a, b, c]).copied().unwrap_or_else(zero)
    }

    pub fn r_entries(&self) -> impl Iterator<Item = (&RKey, &Scalar<T>)> {
        self.r.iter()
    }

    pub fn rbar_entries(&self) -> impl Iterator<Item = (&RKey, &Scalar<T>)> {
        self.rbar.iter()
    }

    pub fn r_table(&self) -> &HashMap<RKey, Scalar<T>> {
        &self.r
    }

    pub fn rbar_table(&self) -> &HashMap<RKey, Scalar<T>> {
        &self.rbar
    }

    pub fn is_validated(&self) -> bool {
        self.validated && self.base.is_validated()
    }

    pub(crate) fn require_validated(&self, what: &str) -> Result<()> {
        if self.is_validated() {
            Ok(())
        } else {
            Err(Error::NotValidated(format!("{what} requires a validated braided system")))
        }
    }

    /// Validates the base (if needed) and the braiding; marks both validated on success.
    pub fn into_validated(mut self, tol: T) -> Result<Self> {
        if !self.base.is_validated() {
            self.base = self.base.into_validated(tol)?;
        }
        let report = self.validate_braiding(tol)?;
        if report.passed {
            self.validated = true;
            Ok(self)
        } else {
            Err(Error::Validation(Box::new(report)))
        }
    }

    pub(crate) fn with_tables(
        &self,
        base: TensorSystem<T>,
        r: HashMap<RKey, Scalar<T>>,
        rbar: HashMap<RKey, Scalar<T>>,
    ) -> Self {
        Self { base, r, rbar, validated: false }
    }
}
