use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{fmt_real, zero, Real, Scalar};

use super::PathBasis;

/// Sparse matrix on a path basis, stored as sorted rows without exact zeros.
#[derive(Clone, Debug)]
pub struct SparseOperator<T: Real> {
    basis: Arc<PathBasis>,
    rows: Vec<Vec<(usize, Scalar<T>)>>,
}

impl<T: Real> PartialEq for SparseOperator<T> {
    fn eq(&self, other: &Self) -> bool {
        same_basis(&self.basis, &other.basis) && self.rows == other.rows
    }
}

fn same_basis(a: &Arc<PathBasis>, b: &Arc<PathBasis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<T: Real> SparseOperator<T> {
    pub fn zero(basis: &Arc<PathBasis>) -> Self {
        Self { basis: basis.clone(), rows: vec![Vec::new(); basis.dim()] }
    }

    pub fn identity(basis: &Arc<PathBasis>) -> Self {
        Self::diagonal(basis, |_| Scalar::new(T::one(), T::zero()))
    }

    pub fn diagonal(basis: &Arc<PathBasis>, f: impl Fn(usize) -> Scalar<T>) -> Self {
        let rows = (0..basis.dim())
            .map(|r| {
                let v = f(r);
                if v == zero() {
                    Vec::new()
                } else {
                    vec![(r, v)]
                }
            })
            .collect();
        Self { basis: basis.clone(), rows }
    }

    /// Sums duplicate positions and drops exact zeros.
    pub fn from_triplets(
        basis: &Arc<PathBasis>,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar<T>)>,
    ) -> Result<Self> {
        let dim = basis.dim();
        let mut rows: Vec<Vec<(usize, Scalar<T>)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::Structural(format!("entry ({r}, {c}) outside dimension {dim}")));
            }
            rows[r].push((c, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Scalar<T>)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 = last.1 + v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != zero());
            *row = merged;
        }
        Ok(Self { basis: basis.clone(), rows })
    }

    pub fn basis(&self) -> &Arc<PathBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar<T> {
        self.rows[r].binary_search_by_key(&c, |e| e.0).map_or_else(|_| zero(), |k| self.rows[r][k].1)
    }

    pub fn row(&self, r: usize) -> &[(usize, Scalar<T>)] {
        &self.rows[r]
    }

    /// `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Scalar<T>)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_basis(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    fn combine(&self, other: &Self, sign: T) -> Result<Self> {
        self.check(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let next = match (a.get(i), b.get(j)) {
                        (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                            i += 1;
                            j += 1;
                            (ca, va + vb * sign)
                        }
                        (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                            i += 1;
                            (ca, va)
                        }
                        (Some(&(ca, va)), None) => {
                            i += 1;
                            (ca, va)
                        }
                        (_, Some(&(cb, vb))) => {
                            j += 1;
                            (cb, vb * sign)
                        }
                        (None, None) => unreachable!(),
                    };
                    if next.1 != zero() {
                        out.push(next);
                    }
                }
                out
            })
            .collect();
        Ok(Self { basis: self.basis.clone(), rows })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -T::one())
    }

    pub fn scale(&self, z: Scalar<T>) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(c, v)| (c, v * z)).filter(|e| e.1 != zero()).collect())
            .collect();
        Self { basis: self.basis.clone(), rows }
    }

    /// Matrix product `self · other`, row by row with a sparse accumulator.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let dim = self.dim();
        let mut acc = vec![zero::<T>(); dim];
        let mut touched = vec![false; dim];
        let mut cols: Vec<usize> = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        if !touched[j] {
                            touched[j] = true;
                            cols.push(j);
                        }
                        acc[j] = acc[j] + a * b;
                    }
                }
                cols.sort_unstable();
                let out: Vec<(usize, Scalar<T>)> =
                    cols.iter().map(|&j| (j, acc[j])).filter(|e| e.1 != zero()).collect();
                for &j in &cols {
                    acc[j] = zero();
                    touched[j] = false;
                }
                cols.clear();
                out
            })
            .collect();
        Ok(Self { basis: self.basis.clone(), rows })
    }

    /// Product of a non-empty sequence of operators, left to right.
    pub fn product(ops: &[&Self]) -> Result<Self> {
        let (first, rest) = ops.split_first().ok_or_else(|| Error::Structural("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, op| acc.mul(op))
    }

    pub fn max_abs(&self) -> T {
        self.entries().map(|(_, _, v)| v.norm()).fold(T::zero(), T::max)
    }

    pub fn trace(&self) -> Scalar<T> {
        (0..self.dim()).map(|r| self.get(r, r)).fold(zero(), |a, b| a + b)
    }

    /// Frobenius inner product `Σ conj(self) · other`.
    pub fn inner(&self, other: &Self) -> Result<Scalar<T>> {
        self.check(other)?;
        let mut s = zero();
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                s = s + v.conj() * other.get(r, c);
            }
        }
        Ok(s)
    }

    /// Dense copy, for small spectra and debugging.
    pub fn to_dense(&self) -> Vec<Vec<Scalar<T>>> {
        let mut m = vec![vec![zero(); self.dim()]; self.dim()];
        for (r, c, v) in self.entries() {
            m[r][c] = v;
        }
        m
    }

    /// One `row col re im` line per stored entry (0-based), preceded by a header
    /// `dim nnz`.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim(), self.nnz());
        for (r, c, v) in self.entries() {
            let _ = writeln!(s, "{r} {c} {} {}", fmt_real(v.re), fmt_real(v.im));
        }
        s
    }
}

/// Max-norm of `a - b`.
pub fn operator_residual<T: Real>(a: &SparseOperator<T>, b: &SparseOperator<T>) -> Result<T> {
    Ok(a.sub(b)?.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fibonacci;
    use crate::path_space::{enumerate_basis, ChainSpec};
    use num_complex::Complex;

    fn basis() -> Arc<PathBasis> {
        let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
        let t = sys.id("τ").unwrap();
        enumerate_basis(&sys, &ChainSpec::homogeneous(sys.rules(), t, 3, None).unwrap()).unwrap()
    }

    fn dense_mul(a: &[Vec<Complex<f64>>], b: &[Vec<Complex<f64>>]) -> Vec<Vec<Complex<f64>>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    fn pseudo_random(b: &Arc<PathBasis>, seed: u64) -> SparseOperator<f64> {
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let n = b.dim();
        let mut t = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if next() > 0.2 {
                    t.push((r, c, Complex::new(next(), next())));
                }
            }
        }
        SparseOperator::from_triplets(b, t).unwrap()
    }

    #[test]
    fn multiplication_matches_dense() {
        let b = basis();
        let (x, y) = (pseudo_random(&b, 1), pseudo_random(&b, 2));
        let sparse = x.mul(&y).unwrap().to_dense();
        let dense = dense_mul(&x.to_dense(), &y.to_dense());
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                assert!((sparse[i][j] - dense[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn residual_examples() {
        let b = basis();
        let x = pseudo_random(&b, 3);
        assert_eq!(operator_residual(&x, &x).unwrap(), 0.0);
        let twice = x.scale(Complex::new(2.0, 0.0));
        assert!((operator_residual(&x, &twice).unwrap() - x.max_abs()).abs() < 1e-15);
    }

    #[test]
    fn no_stored_zeros() {
        let b = basis();
        let x = pseudo_random(&b, 4);
        assert!(x.sub(&x).unwrap().is_zero());
        let t = SparseOperator::from_triplets(&b, [(0, 0, Complex::new(1.0, 0.0)), (0, 0, Complex::new(-1.0, 0.0))]).unwrap();
        assert_eq!(t.nnz(), 0);
    }

    #[test]
    fn basis_mismatch() {
        let b = basis();
        let other = {
            let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
            let t = sys.id("τ").unwrap();
            enumerate_basis(&sys, &ChainSpec::homogeneous(sys.rules(), t, 2, None).unwrap()).unwrap()
        };
        let (x, y) = (SparseOperator::<f64>::identity(&b), SparseOperator::<f64>::identity(&other));
        assert!(matches!(x.mul(&y), Err(Error::BasisMismatch)));
        assert!(matches!(operator_residual(&x, &y), Err(Error::BasisMismatch)));
    }

    #[test]
    fn coordinate_text() {
        let b = basis();
        let id = SparseOperator::<f64>::identity(&b);
        let text = id.to_coordinate_text();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("{} {}", b.dim(), b.dim()));
        assert!(lines.next().unwrap().starts_with("0 0 1.0000000000000 0"));
    }
}
