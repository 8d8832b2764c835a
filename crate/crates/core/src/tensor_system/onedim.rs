use std::collections::{BTreeMap, BTreeSet};

use super::TensorSystem;
use crate::error::Result;
use crate::scalar::Real;

/// Where `nu` fuses simply: `left_set` holds the `mu` with `nu ⊗ mu` simple,
/// `right_set` the `mu` with `mu ⊗ nu` simple, and the maps give the unique outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneDimProfile {
    pub nu: usize,
    pub left_set: BTreeSet<usize>,
    pub right_set: BTreeSet<usize>,
    pub phi_left: BTreeMap<usize, usize>,
    pub phi_right: BTreeMap<usize, usize>,
    pub is_one_dimensional: bool,
}

impl<T: Real> TensorSystem<T> {
    pub fn one_dim_profile(&self, nu: usize) -> Result<OneDimProfile> {
        self.require_validated("one_dim_profile")?;
        if nu >= self.len() {
            return Err(crate::Error::UnknownLabel(format!("#{nu}")));
        }
        Ok(self.one_dim_profile_unchecked(nu))
    }

    pub(crate) fn one_dim_profile_unchecked(&self, nu: usize) -> OneDimProfile {
        let n = self.len();
        let mut p = OneDimProfile {
            nu,
            left_set: BTreeSet::new(),
            right_set: BTreeSet::new(),
            phi_left: BTreeMap::new(),
            phi_right: BTreeMap::new(),
            is_one_dimensional: false,
        };
        for mu in 0..n {
            if let [only] = self.outcomes(nu, mu) {
                p.left_set.insert(mu);
                p.phi_left.insert(mu, *only);
            }
            if let [only] = self.outcomes(mu, nu) {
                p.right_set.insert(mu);
                p.phi_right.insert(mu, *only);
            }
        }
        p.is_one_dimensional = p.left_set.len() == n && p.right_set.len() == n;
        p
    }

    /// `phi^l_nu(mu)`: the unique outcome of `nu ⊗ mu`, if simple.
    pub fn phi_left(&self, nu: usize, mu: usize) -> Option<usize> {
        match self.outcomes(nu, mu) {
            [only] => Some(*only),
            _ => None,
        }
    }

    /// `phi^r_nu(mu)`: the unique outcome of `mu ⊗ nu`, if simple.
    pub fn phi_right(&self, nu: usize, mu: usize) -> Option<usize> {
        match self.outcomes(mu, nu) {
            [only] => Some(*only),
            _ => None,
        }
    }
}
