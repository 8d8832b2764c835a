use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BraidedTensorSystem, FSymbolTable, TensorSystem};
use crate::error::{Error, Result};
use crate::scalar::{one, phase, Real, Scalar};

/// Gauge constants `u^{ab}_c`, defined on the fusion support.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransform<T: Real> {
    u: HashMap<[usize; 3], Scalar<T>>,
}

impl<T: Real> GaugeTransform<T> {
    pub fn from_map(u: HashMap<[usize; 3], Scalar<T>>) -> Result<Self> {
        if let Some(k) = u.iter().find(|(_, v)| !(v.norm() > T::zero())).map(|(k, _)| k) {
            return Err(Error::ZeroGauge { a: k[0].to_string(), b: k[1].to_string(), c: k[2].to_string() });
        }
        Ok(Self { u })
    }

    pub fn identity(sys: &TensorSystem<T>) -> Self {
        Self { u: sys.rules().support().iter().map(|&(a, b, c)| ([a, b, c], one())).collect() }
    }

    /// Seeded random phases on every vertex.
    pub fn random_unit_modulus(sys: &TensorSystem<T>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sys
            .rules()
            .support()
            .iter()
            .map(|&(a, b, c)| ([a, b, c], phase(T::lit(rng.gen_range(0.0..std::f64::consts::TAU)))))
            .collect();
        Self { u }
    }

    /// Seeded random phases and magnitudes in `[0.5, 2)`.
    pub fn random_general(sys: &TensorSystem<T>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sys
            .rules()
            .support()
            .iter()
            .map(|&(a, b, c)| {
                let mag = T::lit(rng.gen_range(0.5..2.0));
                let th = T::lit(rng.gen_range(0.0..std::f64::consts::TAU));
                ([a, b, c], phase(th) * mag)
            })
            .collect();
        Self { u }
    }

    /// Seeded random phases with `u^{ab}_c = u^{ba}_c`.
    pub fn random_symmetric(sys: &TensorSystem<T>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = HashMap::new();
        for &(a, b, c) in sys.rules().support() {
            let v = phase(T::lit(rng.gen_range(0.0..std::f64::consts::TAU)));
            let v = *u.entry([b, a, c]).or_insert(v);
            u.insert([a, b, c], v);
        }
        Self { u }
    }

    pub fn inverse(&self) -> Self {
        Self { u: self.u.iter().map(|(&k, v)| (k, v.inv())).collect() }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Option<Scalar<T>> {
        self.u.get(&[a, b, c]).copied()
    }

    fn at(&self, a: usize, b: usize, c: usize) -> Scalar<T> {
        self.u[&[a, b, c]]
    }

    fn check_complete(&self, sys: &TensorSystem<T>) -> Result<()> {
        for &(a, b, c) in sys.rules().support() {
            match self.u.get(&[a, b, c]) {
                None => {
                    return Err(Error::IncompleteGauge {
                        a: sys.name(a).into(),
                        b: sys.name(b).into(),
                        c: sys.name(c).into(),
                    })
                }
                Some(v) if !(v.norm() > T::zero()) => {
                    return Err(Error::ZeroGauge { a: sys.name(a).into(), b: sys.name(b).into(), c: sys.name(c).into() })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `u^{af}_d u^{bc}_f / (u^{ab}_e u^{ec}_d)`, the factor picked up by `(F^{abc}_d)^e_f`.
    fn f_factor(&self, sys: &TensorSystem<T>, k: &[usize; 6]) -> Option<Scalar<T>> {
        let [a, b, c, d, e, f] = *k;
        if !(sys.has(a, b, e) && sys.has(e, c, d) && sys.has(b, c, f) && sys.has(a, f, d)) {
            return None;
        }
        Some(self.at(a, f, d) * self.at(b, c, f) / (self.at(a, b, e) * self.at(e, c, d)))
    }

    /// Returns the gauge-transformed system (unvalidated): fusion rules unchanged,
    /// `F` scaled by the vertex factor and `Fbar` by its inverse.
    pub fn apply(&self, sys: &TensorSystem<T>) -> Result<TensorSystem<T>> {
        self.check_complete(sys)?;
        let mut out = FSymbolTable::new();
        for (k, v) in sys.fsym().f_entries() {
            let x = self.f_factor(sys, k).map_or(*v, |s| *v * s);
            out.set_f(*k, x);
        }
        for (k, v) in sys.fsym().fbar_entries() {
            let x = self.f_factor(sys, k).map_or(*v, |s| *v / s);
            out.set_fbar(*k, x);
        }
        Ok(sys.with_fsym(out))
    }

    /// Braided variant: also scales `R^{ab}_c` and `Rbar^{ab}_c` by `u^{ab}_c / u^{ba}_c`.
    pub fn apply_braided(&self, bsys: &BraidedTensorSystem<T>) -> Result<BraidedTensorSystem<T>> {
        let base = self.apply(bsys.base())?;
        let sys = bsys.base();
        let scale = |&[a, b, c]: &[usize; 3], v: &Scalar<T>| {
            if sys.has(a, b, c) && sys.has(b, a, c) {
                *v * self.at(a, b, c) / self.at(b, a, c)
            } else {
                *v
            }
        };
        let r = bsys.r_table().iter().map(|(k, v)| (*k, scale(k, v))).collect();
        let rbar = bsys.rbar_table().iter().map(|(k, v)| (*k, scale(k, v))).collect();
        Ok(bsys.with_tables(base, r, rbar))
    }
}

pub fn apply_gauge<T: Real>(sys: &TensorSystem<T>, g: &GaugeTransform<T>) -> Result<TensorSystem<T>> {
    g.apply(sys)
}
