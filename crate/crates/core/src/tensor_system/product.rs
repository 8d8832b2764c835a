use std::collections::BTreeSet;

use super::{FSymbolTable, FusionRules, LabelSet, TensorSystem};
use crate::error::Result;
use crate::scalar::Real;

fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Direct product: labels are pairs, `N` and the associators multiply componentwise.
pub fn direct_product<T: Real>(s1: &TensorSystem<T>, s2: &TensorSystem<T>) -> Result<TensorSystem<T>> {
    s1.require_validated("direct_product")?;
    s2.require_validated("direct_product")?;
    let (n1, n2) = (s1.len(), s2.len());
    let names: Vec<String> = (0..n1)
        .flat_map(|a| (0..n2).map(move |b| (a, b)))
        .map(|(a, b)| pair_name(s1.name(a), s2.name(b)))
        .collect();
    let labels = LabelSet::new(names.iter().cloned())?;
    // id of (a, a') in the product
    let pid: Vec<usize> = names.iter().map(|s| labels.id(s).expect("product label")).collect();
    let p = |a: usize, b: usize| pid[a * n2 + b];

    let mut support = BTreeSet::new();
    for &(a, b, c) in s1.rules().support() {
        for &(x, y, z) in s2.rules().support() {
            support.insert((p(a, x), p(b, y), p(c, z)));
        }
    }
    let rules = FusionRules::from_support(labels, support);

    let mut fsym = FSymbolTable::new();
    for (k1, v1) in s1.fsym().f_entries() {
        for (k2, v2) in s2.fsym().f_entries() {
            fsym.set_f(std::array::from_fn(|i| p(k1[i], k2[i])), *v1 * *v2);
        }
    }
    for (k1, v1) in s1.fsym().fbar_entries() {
        for (k2, v2) in s2.fsym().fbar_entries() {
            fsym.set_fbar(std::array::from_fn(|i| p(k1[i], k2[i])), *v1 * *v2);
        }
    }
    let identity = match (s1.identity(), s2.identity()) {
        (Some(a), Some(b)) => Some(p(a, b)),
        _ => None,
    };
    let dual = match (s1.dual(), s2.dual()) {
        (Some(d1), Some(d2)) if identity.is_some() => {
            let mut d = vec![0; n1 * n2];
            for a in 0..n1 {
                for b in 0..n2 {
                    d[p(a, b)] = p(d1[a], d2[b]);
                }
            }
            Some(d)
        }
        _ => None,
    };
    TensorSystem::from_parts(rules, fsym, identity, dual)
}
