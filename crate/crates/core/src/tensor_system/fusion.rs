use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Identifier of a simple object, unique within one system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub String);

impl Label {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

/// Lexicographically ordered label set; positions double as label ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<Label>,
    index: HashMap<String, usize>,
}

impl LabelSet {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<Label> = ids.into_iter().map(|s| Label(s.into())).collect();
        if labels.is_empty() {
            return Err(Error::Structural("label set is empty".into()));
        }
        labels.sort();
        for w in labels.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateLabel(w[0].0.clone()));
            }
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.0.clone(), i)).collect();
        Ok(Self { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn id(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn name(&self, id: usize) -> &str {
        &self.labels[id].0
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn ids(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }
}

/// Multiplicity-free fusion coefficients: the support set of triples with `N = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRules {
    labels: LabelSet,
    support: BTreeSet<(usize, usize, usize)>,
    dense: Vec<bool>,
    outcomes: Vec<Vec<usize>>,
}

impl FusionRules {
    /// Builds the rules from `(a, b, c, N)` coefficients. Repeated triples add up,
    /// so a triple listed twice is a multiplicity of two and is rejected.
    pub fn from_coefficients<I>(labels: LabelSet, coefficients: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, i64)>,
    {
        let n = labels.len();
        let mut acc: HashMap<(usize, usize, usize), i64> = HashMap::new();
        for (a, b, c, v) in coefficients {
            if a >= n || b >= n || c >= n {
                return Err(Error::Structural(format!("label index out of range in ({a},{b},{c})")));
            }
            *acc.entry((a, b, c)).or_insert(0) += v;
        }
        let mut support = BTreeSet::new();
        let mut bad: Vec<_> = acc.iter().filter(|(_, &v)| v != 0 && v != 1).collect();
        bad.sort();
        if let Some((&(a, b, c), &value)) = bad.first() {
            return Err(Error::Multiplicity {
                a: labels.name(a).into(),
                b: labels.name(b).into(),
                c: labels.name(c).into(),
                value,
            });
        }
        for (&t, &v) in &acc {
            if v == 1 {
                support.insert(t);
            }
        }
        Ok(Self::from_support(labels, support))
    }

    pub fn from_support(labels: LabelSet, support: BTreeSet<(usize, usize, usize)>) -> Self {
        let n = labels.len();
        let mut dense = vec![false; n * n * n];
        let mut outcomes = vec![Vec::new(); n * n];
        for &(a, b, c) in &support {
            dense[(a * n + b) * n + c] = true;
            outcomes[a * n + b].push(c);
        }
        Self { labels, support, dense, outcomes }
    }

    pub fn from_named<'a, I>(labels: LabelSet, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let coeffs = triples
            .into_iter()
            .map(|(a, b, c)| Ok((labels.id(a)?, labels.id(b)?, labels.id(c)?, 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coefficients(labels, coeffs)
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `N_ab^c` as a flag.
    #[inline]
    pub fn has(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.labels.len();
        self.dense[(a * n + b) * n + c]
    }

    /// `N_ab^c` as an integer.
    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> u64 {
        u64::from(self.has(a, b, c))
    }

    /// The `c` with `N_ab^c = 1`, ascending.
    #[inline]
    pub fn outcomes(&self, a: usize, b: usize) -> &[usize] {
        &self.outcomes[a * self.labels.len() + b]
    }

    pub fn support(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.support
    }

    /// `N_{a0 a1 ... an}^b`: number of fusion trees from the sequence to `b`.
    pub fn extended(&self, seq: &[usize], b: usize) -> Result<u64> {
        let n = self.labels.len();
        let (&first, rest) = seq.split_first().ok_or_else(|| Error::Structural("empty fusion sequence".into()))?;
        if first >= n || b >= n || rest.iter().any(|&x| x >= n) {
            return Err(Error::Structural("label index out of range".into()));
        }
        Ok(self.extended_counts(seq)[b])
    }

    /// Tree counts `N_{seq}^b` for every `b` at once. An empty sequence gives all zeros.
    pub fn extended_counts(&self, seq: &[usize]) -> Vec<u64> {
        let n = self.labels.len();
        let mut counts = vec![0u64; n];
        let Some((&first, rest)) = seq.split_first() else {
            return counts;
        };
        counts[first] = 1;
        for &a in rest {
            let mut next = vec![0u64; n];
            for (x, &cnt) in counts.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                for &y in self.outcomes(x, a) {
                    next[y] += cnt;
                }
            }
            counts = next;
        }
        counts
    }

    /// Labels reachable from any seed after fusing with `prefix`, i.e. the `b` with
    /// `sum_{s in seeds} N_{s prefix}^b >= 1`. An empty prefix returns the seeds.
    pub fn reachable(&self, seeds: &[usize], prefix: &[usize]) -> Vec<bool> {
        let n = self.labels.len();
        let mut reach = vec![false; n];
        for &s in seeds {
            reach[s] = true;
        }
        for &a in prefix {
            let mut next = vec![false; n];
            for x in 0..n {
                if reach[x] {
                    for &y in self.outcomes(x, a) {
                        next[y] = true;
                    }
                }
            }
            reach = next;
        }
        reach
    }

    /// Largest violation of `sum_e N_ab^e N_ec^d = sum_e N_ae^d N_bc^e`, with its location.
    pub fn associativity_defect(&self) -> Option<(usize, usize, usize, usize, i64)> {
        let n = self.labels.len();
        let mut worst: Option<(usize, usize, usize, usize, i64)> = None;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let left: i64 = self.outcomes(a, b).iter().filter(|&&e| self.has(e, c, d)).count() as i64;
                        let right: i64 = self.outcomes(b, c).iter().filter(|&&e| self.has(a, e, d)).count() as i64;
                        let diff = (left - right).abs();
                        if diff > 0 && worst.is_none_or(|w| diff > w.4) {
                            worst = Some((a, b, c, d, diff));
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn is_commutative(&self) -> bool {
        self.support.iter().all(|&(a, b, c)| self.has(b, a, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> FusionRules {
        let labels = LabelSet::new(["1", "τ"]).unwrap();
        FusionRules::from_named(
            labels,
            [("1", "1", "1"), ("1", "τ", "τ"), ("τ", "1", "τ"), ("τ", "τ", "1"), ("τ", "τ", "τ")],
        )
        .unwrap()
    }

    #[test]
    fn labels_sorted_lexicographically() {
        let ls = LabelSet::new(["τ", "1", "0"]).unwrap();
        let names: Vec<_> = ls.labels().iter().map(|l| l.as_str()).collect();
        assert_eq!(names, ["0", "1", "τ"]);
    }

    #[test]
    fn duplicate_label_rejected() {
        assert!(matches!(LabelSet::new(["a", "a"]), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn repeated_triple_is_multiplicity_error() {
        let labels = LabelSet::new(["a"]).unwrap();
        let err = FusionRules::from_named(labels, [("a", "a", "a"), ("a", "a", "a")]).unwrap_err();
        match err {
            Error::Multiplicity { a, value, .. } => {
                assert_eq!(a, "a");
                assert_eq!(value, 2);
            }
            other => panic!("unexpected {other}"),
        }
    }

    // brute force over all intermediate labels
    fn brute_extended(r: &FusionRules, seq: &[usize], b: usize) -> u64 {
        if seq.len() == 1 {
            return u64::from(seq[0] == b);
        }
        let n = r.len();
        let inner = seq.len() - 2;
        let mut total = 0;
        let mut mids = vec![0usize; inner];
        loop {
            let mut prod = 1;
            let mut cur = seq[0];
            for (k, &a) in seq[1..].iter().enumerate() {
                let next = if k < inner { mids[k] } else { b };
                prod *= r.n(cur, a, next);
                cur = next;
            }
            total += prod;
            let mut k = 0;
            loop {
                if k == inner {
                    return total;
                }
                mids[k] += 1;
                if mids[k] < n {
                    break;
                }
                mids[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn extended_fusion_fibonacci() {
        let r = fib();
        let tau = 1;
        assert_eq!(brute_extended(&r, &[tau, tau, tau], 0), 1);
        assert_eq!(brute_extended(&r, &[tau, tau, tau], tau), 2);
        assert_eq!(r.extended(&[tau, tau, tau], 0).unwrap(), 1);
        assert_eq!(r.extended(&[tau, tau, tau], tau).unwrap(), 2);
        assert_eq!(r.extended(&[tau], tau).unwrap(), 1);
        assert_eq!(r.extended(&[tau], 0).unwrap(), 0);
        for len in 1..7 {
            let seq = vec![tau; len];
            for b in 0..2 {
                assert_eq!(r.extended(&seq, b).unwrap(), brute_extended(&r, &seq, b));
            }
        }
    }

    #[test]
    fn extended_fusion_rejects_empty_and_unknown() {
        let r = fib();
        assert!(r.extended(&[], 0).is_err());
        assert!(r.extended(&[5], 0).is_err());
    }

    #[test]
    fn fibonacci_is_associative() {
        assert!(fib().associativity_defect().is_none());
        assert!(fib().is_commutative());
    }

    #[test]
    fn non_associative_rules_detected() {
        let labels = LabelSet::new(["a", "b"]).unwrap();
        let r = FusionRules::from_named(labels, [("a", "a", "b"), ("b", "a", "a")]).unwrap();
        assert!(r.associativity_defect().is_some());
    }
}
