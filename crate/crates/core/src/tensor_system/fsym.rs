use std::collections::HashMap;

use crate::scalar::{zero, Real, Scalar};

pub type FKey = [usize; 6];

/// Associator tables keyed by `(a, b, c, d, e, f)`.
///
/// `f[(a,b,c,d,e,f)]` is `(F^{abc}_d)^e_f` and `fbar[(a,b,c,d,e,f)]` is
/// `(Fbar^{abc}_d)^f_e`; in both, `e` is the `(ab)` channel and `f` the `(bc)`
/// channel, so for fixed `(a,b,c,d)` the `fbar` block is the matrix inverse of
/// the `f` block. Absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FSymbolTable<T: Real> {
    pub(crate) f: HashMap<FKey, Scalar<T>>,
    pub(crate) fbar: HashMap<FKey, Scalar<T>>,
}

impl<T: Real> FSymbolTable<T> {
    pub fn new() -> Self {
        Self { f: HashMap::new(), fbar: HashMap::new() }
    }

    #[inline]
    pub fn f(&self, k: FKey) -> Scalar<T> {
        self.f.get(&k).copied().unwrap_or_else(zero)
    }

    #[inline]
    pub fn fbar(&self, k: FKey) -> Scalar<T> {
        self.fbar.get(&k).copied().unwrap_or_else(zero)
    }

    pub fn set_f(&mut self, k: FKey, v: Scalar<T>) {
        if v.re == T::zero() && v.im == T::zero() {
            self.f.remove(&k);
        } else {
            self.f.insert(k, v);
        }
    }

    pub fn set_fbar(&mut self, k: FKey, v: Scalar<T>) {
        if v.re == T::zero() && v.im == T::zero() {
            self.fbar.remove(&k);
        } else {
            self.fbar.insert(k, v);
        }
    }

    pub fn f_entries(&self) -> impl Iterator<Item = (&FKey, &Scalar<T>)> {
        self.f.iter()
    }

    pub fn fbar_entries(&self) -> impl Iterator<Item = (&FKey, &Scalar<T>)> {
        self.fbar.iter()
    }

    pub fn has_fbar(&self) -> bool {
        !self.fbar.is_empty()
    }

    /// Largest entrywise difference between two tables (both `f` and `fbar`).
    pub fn max_difference(&self, other: &Self) -> T {
        let mut m = T::zero();
        for (tab, otab) in [(&self.f, &other.f), (&self.fbar, &other.fbar)] {
            for (k, v) in tab {
                let o = otab.get(k).copied().unwrap_or_else(zero);
                m = m.max((*v - o).norm());
            }
            for (k, o) in otab {
                if !tab.contains_key(k) {
                    m = m.max(o.norm());
                }
            }
        }
        m
    }
}
