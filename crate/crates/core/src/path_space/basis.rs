use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor_system::{FusionRules, TensorSystem};

/// Chain data `(λ_1 … λ_L)` and the seed set for `μ_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainSpec {
    lambdas: Vec<usize>,
    seeds: Vec<usize>,
}

impl ChainSpec {
    /// `seeds = None` means every label.
    pub fn new(rules: &FusionRules, lambdas: Vec<usize>, seeds: Option<Vec<usize>>) -> Result<Self> {
        let n = rules.len();
        if lambdas.is_empty() {
            return Err(Error::Structural("chain needs at least one site".into()));
        }
        if let Some(&bad) = lambdas.iter().find(|&&l| l >= n) {
            return Err(Error::UnknownLabel(format!("#{bad}")));
        }
        let mut seeds = seeds.unwrap_or_else(|| (0..n).collect());
        seeds.sort_unstable();
        seeds.dedup();
        if seeds.is_empty() {
            return Err(Error::Structural("seed set is empty".into()));
        }
        if let Some(&bad) = seeds.iter().find(|&&l| l >= n) {
            return Err(Error::UnknownLabel(format!("#{bad}")));
        }
        Ok(Self { lambdas, seeds })
    }

    pub fn from_names<T: Real>(sys: &TensorSystem<T>, lambdas: &[&str], seeds: Option<&[&str]>) -> Result<Self> {
        let l = lambdas.iter().map(|s| sys.id(s)).collect::<Result<Vec<_>>>()?;
        let s = seeds.map(|s| s.iter().map(|x| sys.id(x)).collect::<Result<Vec<_>>>()).transpose()?;
        Self::new(sys.rules(), l, s)
    }

    pub fn homogeneous(rules: &FusionRules, lambda: usize, len: usize, seeds: Option<Vec<usize>>) -> Result<Self> {
        Self::new(rules, vec![lambda; len], seeds)
    }

    pub fn lambdas(&self) -> &[usize] {
        &self.lambdas
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    /// Chain length `L`.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `λ_i` for `1 <= i <= L`.
    pub fn lambda(&self, i: usize) -> usize {
        self.lambdas[i - 1]
    }

    /// The common label when every site carries the same one.
    pub fn homogeneous_label(&self) -> Option<usize> {
        let first = self.lambdas[0];
        self.lambdas.iter().all(|&l| l == first).then_some(first)
    }
}

/// Admissible fusion paths `μ_0 μ_1 … μ_L` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBasis {
    spec: ChainSpec,
    n_labels: usize,
    paths: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl PathBasis {
    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn path(&self, idx: usize) -> &[usize] {
        &self.paths[idx]
    }

    pub fn position(&self, path: &[usize]) -> Option<usize> {
        self.index.get(path).copied()
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn format_path<T: Real>(&self, sys: &TensorSystem<T>, idx: usize) -> String {
        self.paths[idx].iter().map(|&l| sys.name(l)).collect::<Vec<_>>().join(" ")
    }
}

/// Depth-first enumeration; visiting labels in id order yields lexicographic order.
pub fn enumerate_basis<T: Real>(sys: &TensorSystem<T>, spec: &ChainSpec) -> Result<Arc<PathBasis>> {
    sys.require_validated("enumerate_basis")?;
    Ok(Arc::new(enumerate_rules(sys.rules(), spec)?))
}

pub(crate) fn enumerate_rules(rules: &FusionRules, spec: &ChainSpec) -> Result<PathBasis> {
    let n = rules.len();
    if spec.lambdas.iter().chain(&spec.seeds).any(|&x| x >= n) {
        return Err(Error::UnknownLabel("chain label out of range".into()));
    }
    let mut paths = Vec::new();
    let mut stack: Vec<usize> = Vec::with_capacity(spec.len() + 1);
    fn walk(rules: &FusionRules, lambdas: &[usize], stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let depth = stack.len() - 1;
        if depth == lambdas.len() {
            out.push(stack.clone());
            return;
        }
        let last = *stack.last().unwrap();
        for &next in rules.outcomes(last, lambdas[depth]) {
            stack.push(next);
            walk(rules, lambdas, stack, out);
            stack.pop();
        }
    }
    for &s in &spec.seeds {
        stack.clear();
        stack.push(s);
        walk(rules, &spec.lambdas, &mut stack, &mut paths);
    }
    let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok(PathBasis { spec: spec.clone(), n_labels: n, paths, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fibonacci;

    fn brute_force_count(rules: &FusionRules, spec: &ChainSpec) -> usize {
        // every label sequence, filtered
        let n = rules.len();
        let len = spec.len() + 1;
        let mut count = 0;
        let total = n.pow(len as u32);
        for code in 0..total {
            let mut c = code;
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let d = c % n;
                    c /= n;
                    d
                })
                .collect();
            if !spec.seeds().contains(&seq[0]) {
                continue;
            }
            if (1..len).all(|i| rules.has(seq[i - 1], spec.lambda(i), seq[i])) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn fibonacci_dimensions() {
        let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
        let (one, tau) = (sys.id("1").unwrap(), sys.id("τ").unwrap());
        let spec = ChainSpec::homogeneous(sys.rules(), tau, 4, Some(vec![one])).unwrap();
        assert_eq!(brute_force_count(sys.rules(), &spec), 5);
        assert_eq!(enumerate_basis(&sys, &spec).unwrap().dim(), 5);

        let spec = ChainSpec::homogeneous(sys.rules(), tau, 2, Some(vec![one, tau])).unwrap();
        assert_eq!(brute_force_count(sys.rules(), &spec), 5);
        assert_eq!(enumerate_basis(&sys, &spec).unwrap().dim(), 5);
    }

    #[test]
    fn fibonacci_recurrence() {
        let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
        let (one, tau) = (sys.id("1").unwrap(), sys.id("τ").unwrap());
        let dims: Vec<usize> = (0..=10)
            .map(|l| {
                if l == 0 {
                    return 1;
                }
                let spec = ChainSpec::homogeneous(sys.rules(), tau, l, Some(vec![one])).unwrap();
                let d = enumerate_basis(&sys, &spec).unwrap().dim();
                assert_eq!(d, brute_force_count(sys.rules(), &spec));
                d
            })
            .collect();
        for l in 2..=10 {
            assert_eq!(dims[l], dims[l - 1] + dims[l - 2], "L = {l}");
        }
    }

    #[test]
    fn paths_are_admissible_and_sorted() {
        let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
        let tau = sys.id("τ").unwrap();
        let spec = ChainSpec::homogeneous(sys.rules(), tau, 5, None).unwrap();
        let basis = enumerate_basis(&sys, &spec).unwrap();
        for w in basis.paths().windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, p) in basis.paths().iter().enumerate() {
            assert_eq!(basis.position(p), Some(i));
            for s in 1..p.len() {
                assert!(sys.has(p[s - 1], tau, p[s]));
            }
        }
    }

    #[test]
    fn single_site_dimension_is_fusion_count() {
        let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
        let tau = sys.id("τ").unwrap();
        let spec = ChainSpec::new(sys.rules(), vec![tau], Some(vec![tau])).unwrap();
        assert_eq!(enumerate_basis(&sys, &spec).unwrap().dim(), sys.outcomes(tau, tau).len());
    }

    #[test]
    fn empty_basis_allowed() {
        // no identity: 0 ⊗ x never reaches a label listed as seed-only
        let labels = crate::tensor_system::LabelSet::new(["a", "b"]).unwrap();
        let rules = FusionRules::from_named(labels, [("a", "a", "a")]).unwrap();
        let spec = ChainSpec::new(&rules, vec![1], Some(vec![0])).unwrap();
        assert_eq!(enumerate_rules(&rules, &spec).unwrap().dim(), 0);
    }

    #[test]
    fn unknown_label_in_spec() {
        let sys = fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
        assert!(matches!(ChainSpec::from_names(&sys, &["x"], None), Err(Error::UnknownLabel(_))));
    }
}
