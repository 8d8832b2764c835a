use nalgebra::DMatrix;
use num_complex::Complex;

use super::TensorSystem;
use crate::error::{Error, Result};
use crate::scalar::{one, to_c64, zero, Real, Scalar};

/// Gauss-Jordan inverse with partial pivoting. `None` when a pivot vanishes.
pub(crate) fn invert<T: Real>(m: &[Vec<Scalar<T>>]) -> Option<Vec<Vec<Scalar<T>>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar<T>>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar<T>>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { one() } else { zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())?;
        if !(a[piv][col].norm() > T::zero()) {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv();
        for j in 0..n {
            a[col][j] = a[col][j] * p;
            inv[col][j] = inv[col][j] * p;
        }
        for row in 0..n {
            if row != col {
                let factor = a[row][col];
                if factor.norm() > T::zero() {
                    for j in 0..n {
                        a[row][j] = a[row][j] - factor * a[col][j];
                        inv[row][j] = inv[row][j] - factor * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

pub(crate) fn smallest_singular_value<T: Real>(m: &[Vec<Scalar<T>>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return f64::INFINITY;
    }
    let cols = m[0].len();
    let dm = DMatrix::<Complex<f64>>::from_fn(n, cols, |i, j| to_c64(m[i][j]));
    dm.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

impl<T: Real> TensorSystem<T> {
    /// Fills `Fbar` by inverting every `(a,b,c;d)` block of `F`, then reruns
    /// validation; the result is marked validated when every axiom passes.
    pub fn complete_fbar(&self, tol: T) -> Result<TensorSystem<T>> {
        let n = self.len();
        let mut fsym = self.fsym().clone();
        fsym.fbar.clear();
        let tol_f = tol.to_f64().unwrap_or(0.0);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let (es, fs) = self.block_channels(a, b, c, d);
                        if es.is_empty() && fs.is_empty() {
                            continue;
                        }
                        let singular = |sv: f64| Error::SingularBlock {
                            a: self.name(a).into(),
                            b: self.name(b).into(),
                            c: self.name(c).into(),
                            d: self.name(d).into(),
                            smallest_singular_value: sv,
                        };
                        if es.len() != fs.len() {
                            return Err(singular(0.0));
                        }
                        let m: Vec<Vec<Scalar<T>>> =
                            es.iter().map(|&e| fs.iter().map(|&f| self.f(a, b, c, d, e, f)).collect()).collect();
                        let sv = smallest_singular_value(&m);
                        if !(sv > tol_f) {
                            return Err(singular(sv));
                        }
                        let inv = invert(&m).ok_or_else(|| singular(sv))?;
                        // inv[f][e] = (Fbar^{abc}_d)^f_e
                        for (fi, &f) in fs.iter().enumerate() {
                            for (ei, &e) in es.iter().enumerate() {
                                fsym.set_fbar([a, b, c, d, e, f], inv[fi][ei]);
                            }
                        }
                    }
                }
            }
        }
        let mut out = self.with_fsym(fsym);
        if out.validate(tol).passed {
            out.mark_validated();
        }
        Ok(out)
    }
}
