use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde_json::{json, Value};

use crate::scalar::{fmt_real, fmt_scalar, to_c64, Real, Scalar};

/// Outcome of one relation check. `details` holds per-family sub-reports when the
/// check covers several relation families.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub relation: String,
    pub satisfied: bool,
    pub residual: f64,
    pub tol: f64,
    pub constants: BTreeMap<String, Complex<f64>>,
    pub notes: Vec<String>,
    /// Nothing to check (empty basis, no admissible site, zero projector).
    pub vacuous: bool,
    pub details: Vec<RelationReport>,
}

impl RelationReport {
    /// `satisfied` iff `residual < tol`.
    pub fn from_residual<T: Real>(relation: impl Into<String>, residual: T, tol: T) -> Self {
        let r = residual.to_f64().unwrap_or(f64::NAN);
        let t = tol.to_f64().unwrap_or(0.0);
        Self {
            relation: relation.into(),
            satisfied: r < t,
            residual: r,
            tol: t,
            constants: BTreeMap::new(),
            notes: Vec::new(),
            vacuous: false,
            details: Vec::new(),
        }
    }

    pub fn vacuous<T: Real>(relation: impl Into<String>, tol: T, why: impl Into<String>) -> Self {
        let mut r = Self::from_residual(relation, T::zero(), tol);
        r.satisfied = true;
        r.vacuous = true;
        r.notes.push(why.into());
        r
    }

    /// A logical check with no numeric residual.
    pub fn logical<T: Real>(relation: impl Into<String>, ok: bool, tol: T) -> Self {
        let mut r = Self::from_residual(relation, T::zero(), tol);
        r.satisfied = ok;
        r
    }

    /// Aggregate: satisfied iff every part is, residual is the largest part residual,
    /// vacuous iff every part is.
    pub fn all<T: Real>(relation: impl Into<String>, tol: T, details: Vec<RelationReport>) -> Self {
        let mut r = Self::from_residual(relation, T::zero(), tol);
        r.residual = details.iter().map(|d| d.residual).fold(0.0, f64::max);
        r.satisfied = details.iter().all(|d| d.satisfied);
        r.vacuous = !details.is_empty() && details.iter().all(|d| d.vacuous);
        r.details = details;
        r
    }

    pub fn with_constant<T: Real>(mut self, name: impl Into<String>, z: Scalar<T>) -> Self {
        self.constants.insert(name.into(), to_c64(z));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn detail(&self, relation: &str) -> Option<&RelationReport> {
        self.details.iter().find(|d| d.relation == relation)
    }

    /// Every failing leaf, depth first.
    pub fn failures(&self) -> Vec<&RelationReport> {
        if self.details.is_empty() {
            return if self.satisfied { Vec::new() } else { vec![self] };
        }
        self.details.iter().flat_map(|d| d.failures()).collect()
    }

    /// `{"relation", "satisfied", "constant", "residual", …}`; `constant` is the
    /// first named constant or `null`.
    pub fn to_json(&self) -> Value {
        let c = |z: &Complex<f64>| json!({"re": z.re, "im": z.im});
        let constant = self.constants.values().next().map_or(Value::Null, c);
        let constants: serde_json::Map<String, Value> =
            self.constants.iter().map(|(k, v)| (k.clone(), c(v))).collect();
        let mut v = json!({
            "relation": self.relation,
            "satisfied": self.satisfied,
            "constant": constant,
            "residual": self.residual,
            "tol": self.tol,
            "vacuous": self.vacuous,
            "constants": constants,
            "notes": self.notes,
        });
        if !self.details.is_empty() {
            v["details"] = Value::Array(self.details.iter().map(Self::to_json).collect());
        }
        v
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        let status = match (self.satisfied, self.vacuous) {
            (true, true) => "pass (vacuous)",
            (true, false) => "pass",
            (false, _) => "FAIL",
        };
        writeln!(f, "{pad}{}: {status}, residual {}", self.relation, fmt_real(self.residual))?;
        for (k, v) in &self.constants {
            writeln!(f, "{pad}  {k} = {}", fmt_scalar(*v))?;
        }
        for n in &self.notes {
            writeln!(f, "{pad}  note: {n}")?;
        }
        for d in &self.details {
            d.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate() {
        let a = RelationReport::from_residual("a", 1e-12, 1e-9);
        let b = RelationReport::from_residual("b", 1e-3, 1e-9);
        let all = RelationReport::all("both", 1e-9, vec![a.clone(), b]);
        assert!(!all.satisfied);
        assert_eq!(all.residual, 1e-3);
        assert_eq!(all.failures().len(), 1);
        assert!(RelationReport::all("one", 1e-9, vec![a]).satisfied);
    }

    #[test]
    fn json_shape() {
        let r = RelationReport::from_residual("x", 0.0, 1e-9).with_constant("d", Complex::new(1.5, 0.0));
        let v = r.to_json();
        assert_eq!(v["relation"], "x");
        assert_eq!(v["satisfied"], true);
        assert_eq!(v["constant"]["re"], 1.5);
        assert_eq!(v["residual"], 0.0);
    }

    #[test]
    fn vacuous_passes() {
        let r = RelationReport::vacuous("x", 1e-9, "empty basis");
        assert!(r.satisfied && r.vacuous);
    }
}
