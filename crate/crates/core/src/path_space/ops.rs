use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relations::RelationReport;
use crate::scalar::{Real, Scalar};
use crate::tensor_system::{BraidedTensorSystem, TensorSystem};

use super::{PathBasis, SparseOperator};

fn check_site<T: Real>(sys: &TensorSystem<T>, basis: &PathBasis, i: usize) -> Result<()> {
    sys.require_validated("projector")?;
    if basis.n_labels() != sys.len() {
        return Err(Error::BasisMismatch);
    }
    let hi = basis.spec().len().saturating_sub(1);
    if i < 1 || i > hi {
        return Err(Error::SiteOutOfRange { index: i, lo: 1, hi });
    }
    Ok(())
}

/// Two-site projector `p_i^(ν)` onto channel `ν` of sites `i, i+1`:
/// `⟨μ'|p|μ⟩ = Fbar(μ_{i-1} λ_i λ_{i+1}; μ_{i+1})^ν_{μ'_i} · F(…)^{μ_i}_ν`, all other
/// slots equal.
pub fn projector<T: Real>(
    sys: &TensorSystem<T>,
    basis: &Arc<PathBasis>,
    i: usize,
    nu: usize,
) -> Result<SparseOperator<T>> {
    check_site(sys, basis, i)?;
    if nu >= sys.len() {
        return Err(Error::UnknownLabel(format!("#{nu}")));
    }
    let spec = basis.spec();
    let (li, lj) = (spec.lambda(i), spec.lambda(i + 1));
    if !sys.has(li, lj, nu) {
        return Ok(SparseOperator::zero(basis));
    }
    let mut triplets = Vec::new();
    let mut row_path = Vec::with_capacity(spec.len() + 1);
    for (col, path) in basis.paths().iter().enumerate() {
        let (a, m, d) = (path[i - 1], path[i], path[i + 1]);
        let right = sys.f(a, li, lj, d, m, nu);
        if right.norm() == T::zero() {
            continue;
        }
        for &x in sys.outcomes(a, li) {
            if !sys.has(x, lj, d) {
                continue;
            }
            let left = sys.fbar(a, li, lj, d, x, nu);
            row_path.clear();
            row_path.extend_from_slice(path);
            row_path[i] = x;
            let row = basis.position(&row_path).expect("slot change keeps admissibility");
            triplets.push((row, col, left * right));
        }
    }
    SparseOperator::from_triplets(basis, triplets)
}

/// `R_i = Σ_μ R^{λλ}_μ p_i^(μ)` on a homogeneous chain; `inverse` uses `Rbar`.
pub fn braid_operator<T: Real>(
    bsys: &BraidedTensorSystem<T>,
    basis: &Arc<PathBasis>,
    i: usize,
    inverse: bool,
) -> Result<SparseOperator<T>> {
    let sys = bsys.base();
    check_site(sys, basis, i)?;
    let lambda = basis
        .spec()
        .homogeneous_label()
        .ok_or_else(|| Error::Unsupported("braid operators need a homogeneous chain".into()))?;
    let mut out = SparseOperator::zero(basis);
    for &mu in sys.outcomes(lambda, lambda) {
        let table = if inverse { bsys.rbar_table() } else { bsys.r_table() };
        let coef = *table.get(&[lambda, lambda, mu]).ok_or_else(|| {
            let which = if inverse { "Rbar" } else { "R" };
            Error::MissingBraiding(format!("{which}^({},{})_{}", sys.name(lambda), sys.name(lambda), sys.name(mu)))
        })?;
        out = out.add(&projector(sys, basis, i, mu)?.scale(coef))?;
    }
    Ok(out)
}

/// Every projector `p_i^(ν)` of one chain, built once.
#[derive(Clone, Debug)]
pub struct ChainOperators<T: Real> {
    basis: Arc<PathBasis>,
    /// `[i - 1][ν]`
    projectors: Vec<Vec<SparseOperator<T>>>,
}

impl<T: Real> ChainOperators<T> {
    pub fn new(sys: &TensorSystem<T>, basis: &Arc<PathBasis>) -> Result<Self> {
        let bonds = basis.spec().len().saturating_sub(1);
        let projectors = (1..=bonds)
            .map(|i| (0..sys.len()).map(|nu| projector(sys, basis, i, nu)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { basis: basis.clone(), projectors })
    }

    pub fn basis(&self) -> &Arc<PathBasis> {
        &self.basis
    }

    pub fn bonds(&self) -> usize {
        self.projectors.len()
    }

    pub fn p(&self, i: usize, nu: usize) -> &SparseOperator<T> {
        &self.projectors[i - 1][nu]
    }

    /// `Σ_μ coef(μ) p_i^(μ)`.
    pub fn combination(&self, i: usize, coef: impl Fn(usize) -> Scalar<T>) -> Result<SparseOperator<T>> {
        let mut out = SparseOperator::zero(&self.basis);
        for (nu, p) in self.projectors[i - 1].iter().enumerate() {
            if !p.is_zero() {
                out = out.add(&p.scale(coef(nu)))?;
            }
        }
        Ok(out)
    }
}

/// Checks idempotency, orthogonality, completeness, far commutation and locality
/// of every projector on the chain. One sub-report per property.
pub fn projector_family_check<T: Real>(
    sys: &TensorSystem<T>,
    basis: &Arc<PathBasis>,
    tol: T,
) -> Result<RelationReport> {
    const NAME: &str = "projector family";
    if basis.is_empty() {
        return Ok(RelationReport::vacuous(NAME, tol, "empty basis"));
    }
    let ops = ChainOperators::new(sys, basis)?;
    let bonds = ops.bonds();
    let n = sys.len();
    let identity = SparseOperator::identity(basis);

    let mut idem = T::zero();
    let mut orth = T::zero();
    let mut compl = T::zero();
    let mut comm = T::zero();
    let mut local = T::zero();
    let mut commuting_pairs = 0usize;
    for i in 1..=bonds {
        let mut sum = SparseOperator::zero(basis);
        for nu in 0..n {
            let p = ops.p(i, nu);
            sum = sum.add(p)?;
            idem = idem.max(p.mul(p)?.sub(p)?.max_abs());
            for nu2 in (0..n).filter(|&x| x != nu) {
                orth = orth.max(p.mul(ops.p(i, nu2))?.max_abs());
            }
            for (r, c, v) in p.entries() {
                let (pr, pc) = (basis.path(r), basis.path(c));
                if pr.iter().zip(pc).enumerate().any(|(s, (x, y))| s != i && x != y) {
                    local = local.max(v.norm());
                }
            }
            for j in (i + 2)..=bonds {
                commuting_pairs += 1;
                for nu2 in 0..n {
                    let q = ops.p(j, nu2);
                    comm = comm.max(p.mul(q)?.sub(&q.mul(p)?)?.max_abs());
                }
            }
        }
        compl = compl.max(sum.sub(&identity)?.max_abs());
    }
    let part = |name: &str, r: T, any: bool| {
        if any {
            RelationReport::from_residual(name, r, tol)
        } else {
            RelationReport::vacuous(name, tol, "no site pairs to check")
        }
    };
    let details = vec![
        part("idempotency", idem, bonds > 0),
        part("orthogonality", orth, bonds > 0),
        part("completeness", compl, bonds > 0),
        part("far commutation", comm, commuting_pairs > 0),
        part("locality", local, bonds > 0),
    ];
    Ok(RelationReport::all(NAME, tol, details).with_note(format!("dimension {}", basis.dim())))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex;

    use super::*;
    use crate::catalog::{fibonacci, get_system, ising, CatalogKey};
    use crate::path_space::{enumerate_basis, operator_residual, ChainSpec};

    fn chain(b: &BraidedTensorSystem<f64>, lambda: &str, len: usize, seeds: Option<Vec<usize>>) -> Arc<PathBasis> {
        let sys = b.base();
        let l = sys.id(lambda).unwrap();
        enumerate_basis(sys, &ChainSpec::homogeneous(sys.rules(), l, len, seeds).unwrap()).unwrap()
    }

    fn fib() -> BraidedTensorSystem<f64> {
        fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap()
    }

    #[test]
    fn fibonacci_and_ising_families_pass() {
        let f = fib();
        let r = projector_family_check(f.base(), &chain(&f, "τ", 5, None), 1e-9).unwrap();
        assert!(r.satisfied, "{r}");
        assert_eq!(r.details.len(), 5);
        let is = ising::<f64>().unwrap().into_validated(1e-9).unwrap();
        let r = projector_family_check(is.base(), &chain(&is, "σ", 4, None), 1e-9).unwrap();
        assert!(r.satisfied, "{r}");
    }

    #[test]
    fn dimension_one_passes() {
        let f = fib();
        let one = f.base().id("1").unwrap();
        let b = chain(&f, "1", 3, Some(vec![one]));
        assert_eq!(b.dim(), 1);
        let r = projector_family_check(f.base(), &b, 1e-9).unwrap();
        assert!(r.satisfied, "{r}");
    }

    #[test]
    fn fibonacci_two_sites_trace_and_idempotency() {
        let f = fib();
        let sys = f.base();
        let b = chain(&f, "τ", 2, None);
        let one = sys.id("1").unwrap();
        let p = projector(sys, &b, 1, one).unwrap();
        // rank counts outer pairs (μ0, μ2) that route through 1, i.e. μ2 = μ0
        let admissible: std::collections::BTreeSet<usize> =
            b.paths().iter().filter(|q| q[0] == q[2]).map(|q| q[0]).collect();
        let admissible = admissible.len();
        assert!((p.trace().re - admissible as f64).abs() < 1e-12);
        assert!(operator_residual(&p, &p.mul(&p).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn inadmissible_channel_is_zero() {
        let is = ising::<f64>().unwrap().into_validated(1e-9).unwrap();
        let b = chain(&is, "σ", 3, None);
        let s = is.base().id("σ").unwrap();
        assert!(projector(is.base(), &b, 1, s).unwrap().is_zero());
    }

    #[test]
    fn site_and_label_errors() {
        let f = fib();
        let b = chain(&f, "τ", 3, None);
        assert!(matches!(projector(f.base(), &b, 0, 0), Err(Error::SiteOutOfRange { .. })));
        assert!(matches!(projector(f.base(), &b, 3, 0), Err(Error::SiteOutOfRange { index: 3, lo: 1, hi: 2 })));
        assert!(matches!(projector(f.base(), &b, 1, 9), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn braid_inverse_and_commutation() {
        for b in [fib(), ising::<f64>().unwrap().into_validated(1e-9).unwrap()] {
            let lambda = if b.base().len() == 2 { "τ" } else { "σ" };
            let basis = chain(&b, lambda, 3, None);
            let id = SparseOperator::identity(&basis);
            for i in 1..=2 {
                let r = braid_operator(&b, &basis, i, false).unwrap();
                let ri = braid_operator(&b, &basis, i, true).unwrap();
                assert!(operator_residual(&r.mul(&ri).unwrap(), &id).unwrap() < 1e-12);
                for nu in 0..b.base().len() {
                    let p = projector(b.base(), &basis, i, nu).unwrap();
                    assert!(operator_residual(&r.mul(&p).unwrap(), &p.mul(&r).unwrap()).unwrap() < 1e-12);
                }
            }
            let r1 = braid_operator(&b, &basis, 1, false).unwrap();
            let r2 = braid_operator(&b, &basis, 2, false).unwrap();
            let lhs = SparseOperator::product(&[&r1, &r2, &r1]).unwrap();
            let rhs = SparseOperator::product(&[&r2, &r1, &r2]).unwrap();
            assert!(operator_residual(&lhs, &rhs).unwrap() < 1e-9);
        }
    }

    #[test]
    fn ising_braid_eigenvalues() {
        // R_i is diagonal in the channel basis: R_i p^(μ) = R_μ p^(μ) for each channel
        let b = ising::<f64>().unwrap().into_validated(1e-9).unwrap();
        let basis = chain(&b, "σ", 2, None);
        let sys = b.base();
        let (s, one, psi) = (sys.id("σ").unwrap(), sys.id("1").unwrap(), sys.id("ψ").unwrap());
        let r = braid_operator(&b, &basis, 1, false).unwrap();
        for mu in [one, psi] {
            let p = projector(sys, &basis, 1, mu).unwrap();
            assert!(!p.is_zero());
            let expect = p.scale(b.r(s, s, mu));
            assert!(operator_residual(&r.mul(&p).unwrap(), &expect).unwrap() < 1e-12);
        }
        // eigenvalues of R restricted to the 2x2 mixing block (μ0 = μ2 = σ)
        let rows: Vec<usize> = (0..basis.dim()).filter(|&k| basis.path(k)[0] == s && basis.path(k)[2] == s).collect();
        assert_eq!(rows.len(), 2);
        let m: Vec<Vec<Complex<f64>>> = rows.iter().map(|&x| rows.iter().map(|&y| r.get(x, y)).collect()).collect();
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let disc = (tr * tr - det * 4.0).sqrt();
        let mut eig = [(tr + disc) / 2.0, (tr - disc) / 2.0];
        let want = [b.r(s, s, one), b.r(s, s, psi)];
        if (eig[0] - want[0]).norm() > 1e-9 {
            eig.swap(0, 1);
        }
        assert!((eig[0] - want[0]).norm() < 1e-9 && (eig[1] - want[1]).norm() < 1e-9, "{eig:?}");
    }

    #[test]
    fn braid_needs_homogeneous_chain() {
        let is = get_system::<f64>(CatalogKey::Ising).unwrap().braided().unwrap().clone();
        let sys = is.base();
        let (s, p) = (sys.id("σ").unwrap(), sys.id("ψ").unwrap());
        let b = enumerate_basis(sys, &ChainSpec::new(sys.rules(), vec![s, p, s], None).unwrap()).unwrap();
        assert!(matches!(braid_operator(&is, &b, 1, false), Err(Error::Unsupported(_))));
    }

    #[test]
    fn missing_braiding_data() {
        let f = fib();
        let basis = chain(&f, "τ", 2, None);
        let stripped = f.with_tables(f.base().clone(), Default::default(), Default::default());
        assert!(matches!(braid_operator(&stripped, &basis, 1, false), Err(Error::MissingBraiding(_))));
    }
}
