use std::fmt;

use serde::Serialize;

use super::{BraidedTensorSystem, TensorSystem};
use crate::error::{Error, Result};
use crate::scalar::{fmt_real, one, zero, Real, Scalar};

/// Outcome of one axiom family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub max_residual: f64,
    /// Index tuple of the largest residual, as label names.
    pub location: Option<String>,
    pub passed: bool,
    /// Number of index tuples inspected.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tol: f64,
    pub checks: Vec<AxiomCheck>,
    pub passed: bool,
}

impl ValidationReport {
    fn new(tol: f64, checks: Vec<AxiomCheck>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { tol, checks, passed }
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    /// The failing check with the largest residual.
    pub fn worst_failure(&self) -> Option<&AxiomCheck> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .max_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{:<24} {:<4} max residual {}",
                c.axiom,
                if c.passed { "ok" } else { "FAIL" },
                fmt_real(c.max_residual)
            )?;
            if let Some(loc) = &c.location {
                if !c.passed || c.max_residual > 0.0 {
                    write!(f, " at {loc}")?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "overall: {} (tol {})", if self.passed { "pass" } else { "FAIL" }, fmt_real(self.tol))
    }
}

/// Running maximum with a lazily formatted location.
struct Worst {
    value: f64,
    location: Option<String>,
    checked: usize,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, location: None, checked: 0 }
    }

    fn offer<T: Real>(&mut self, residual: T, loc: impl FnOnce() -> String) {
        self.checked += 1;
        let r = residual.to_f64().unwrap_or(f64::INFINITY);
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if r > self.value || (self.location.is_none() && r == self.value && r > 0.0) {
            self.value = r;
            self.location = Some(loc());
        }
    }

    fn finish(self, axiom: &str, tol: f64) -> AxiomCheck {
        AxiomCheck {
            axiom: axiom.to_string(),
            max_residual: self.value,
            location: self.location,
            passed: self.value <= tol,
            checked: self.checked,
        }
    }
}

fn exact_check(axiom: &str, defect: Option<String>, checked: usize) -> AxiomCheck {
    AxiomCheck {
        axiom: axiom.to_string(),
        max_residual: if defect.is_some() { 1.0 } else { 0.0 },
        passed: defect.is_none(),
        location: defect,
        checked,
    }
}

impl<T: Real> TensorSystem<T> {
    fn names(&self, ids: &[usize]) -> String {
        let parts: Vec<&str> = ids.iter().map(|&i| self.name(i)).collect();
        format!("({})", parts.join(","))
    }

    /// Checks N.1, N.3/N.4 when present, and F.1 through F.4 at tolerance `tol`.
    pub fn validate(&self, tol: T) -> ValidationReport {
        let tol_f = tol.to_f64().unwrap_or(0.0);
        let n = self.len();
        let mut checks = Vec::new();

        // Multiplicity is enforced when the rules are built; recorded for completeness.
        checks.push(exact_check("multiplicity-free", None, self.rules().support().len()));

        let assoc = self.rules().associativity_defect().map(|(a, b, c, d, _)| self.names(&[a, b, c, d]));
        checks.push(exact_check("N.1 associativity", assoc, n.pow(4)));

        if let Some(one_id) = self.identity() {
            let mut defect = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    let expect = a == b;
                    if self.has(a, one_id, b) != expect || self.has(one_id, a, b) != expect {
                        defect = Some(self.names(&[a, b]));
                        break 'outer;
                    }
                }
            }
            checks.push(exact_check("N.3 identity", defect, n * n));
        }
        if let (Some(one_id), Some(dual)) = (self.identity(), self.dual()) {
            let mut defect = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    let expect = b == dual[a];
                    if self.has(a, b, one_id) != expect || self.has(b, a, one_id) != expect {
                        defect = Some(self.names(&[a, b]));
                        break 'outer;
                    }
                }
            }
            checks.push(exact_check("N.4 duals", defect, n * n));
        } else if self.dual().is_some() {
            checks.push(exact_check("N.4 duals", Some("dual map given without identity".into()), 0));
        }

        checks.push(self.check_zero_condition(tol_f));
        checks.push(self.check_pentagon(tol_f));
        let (left, right) = self.check_inverses(tol_f);
        checks.push(left);
        checks.push(right);
        ValidationReport::new(tol_f, checks)
    }

    fn admissible(&self, k: &[usize; 6]) -> bool {
        let [a, b, c, d, e, f] = *k;
        self.has(a, b, e) && self.has(b, c, f) && self.has(a, f, d) && self.has(e, c, d)
    }

    fn check_zero_condition(&self, tol: f64) -> AxiomCheck {
        let mut w = Worst::new();
        for (k, v) in self.fsym().f_entries() {
            if !self.admissible(k) {
                w.offer(v.norm(), || format!("F{}", self.names(k)));
            }
        }
        for (k, v) in self.fsym().fbar_entries() {
            if !self.admissible(k) {
                w.offer(v.norm(), || format!("Fbar{}", self.names(k)));
            }
        }
        w.finish("F.1 zero condition", tol)
    }

    fn check_pentagon(&self, tol: f64) -> AxiomCheck {
        let n = self.len();
        let mut w = Worst::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for &f in self.outcomes(a, b) {
                            for &g in self.outcomes(f, c) {
                                for &e in self.outcomes(g, d) {
                                    for &l in self.outcomes(c, d) {
                                        for &k in self.outcomes(b, l) {
                                            if !self.has(a, k, e) {
                                                continue;
                                            }
                                            let mut lhs = zero::<T>();
                                            for &h in self.outcomes(b, c) {
                                                lhs = lhs
                                                    + self.f(a, b, c, g, f, h)
                                                        * self.f(a, h, d, e, g, k)
                                                        * self.f(b, c, d, k, h, l);
                                            }
                                            let rhs = self.f(f, c, d, e, g, l) * self.f(a, b, l, e, f, k);
                                            w.offer((lhs - rhs).norm(), || {
                                                format!(
                                                    "(a,b,c,d,e,f,g,k,l)={}",
                                                    self.names(&[a, b, c, d, e, f, g, k, l])
                                                )
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        w.finish("F.2 pentagon", tol)
    }

    fn check_inverses(&self, tol: f64) -> (AxiomCheck, AxiomCheck) {
        let n = self.len();
        let mut left = Worst::new();
        let mut right = Worst::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let (es, fs) = self.block_channels(a, b, c, d);
                        if es.is_empty() && fs.is_empty() {
                            continue;
                        }
                        for &e in &es {
                            for &e2 in &es {
                                let mut s = zero::<T>();
                                for &f in &fs {
                                    s = s + self.f(a, b, c, d, e, f) * self.fbar(a, b, c, d, e2, f);
                                }
                                let target = if e == e2 { one() } else { zero() };
                                left.offer((s - target).norm(), || {
                                    format!("(a,b,c,d,e,e')={}", self.names(&[a, b, c, d, e, e2]))
                                });
                            }
                        }
                        for &f in &fs {
                            for &f2 in &fs {
                                let mut s = zero::<T>();
                                for &e in &es {
                                    s = s + self.fbar(a, b, c, d, e, f2) * self.f(a, b, c, d, e, f);
                                }
                                let target = if f == f2 { one() } else { zero() };
                                right.offer((s - target).norm(), || {
                                    format!("(a,b,c,d,f,f')={}", self.names(&[a, b, c, d, f, f2]))
                                });
                            }
                        }
                    }
                }
            }
        }
        (left.finish("F.3 left inverse", tol), right.finish("F.4 right inverse", tol))
    }
}

/// Validates `(I, N, F, Fbar)`; see [`TensorSystem::validate`].
pub fn validate_system<T: Real>(sys: &TensorSystem<T>, tol: T) -> ValidationReport {
    sys.validate(tol)
}

impl<T: Real> BraidedTensorSystem<T> {
    /// Checks N-symmetry and R.1 through R.4. The base system must be validated.
    pub fn validate_braiding(&self, tol: T) -> Result<ValidationReport> {
        let base = self.base();
        if !base.is_validated() {
            return Err(Error::NotValidated("validate_braiding requires a validated base system".into()));
        }
        let tol_f = tol.to_f64().unwrap_or(0.0);
        let n = base.len();
        let mut checks = Vec::new();

        let asym = base
            .rules()
            .support()
            .iter()
            .find(|&&(a, b, c)| !base.has(b, a, c))
            .map(|&(a, b, c)| base.names(&[a, b, c]));
        checks.push(exact_check("N symmetry", asym, base.rules().support().len()));

        let mut zero_cond = Worst::new();
        for (k, v) in self.r_entries().chain(self.rbar_entries()) {
            if !base.has(k[0], k[1], k[2]) {
                zero_cond.offer(v.norm(), || format!("R{}", base.names(k)));
            }
        }
        checks.push(zero_cond.finish("R.1 zero condition", tol_f));

        let hex = |rtab: &dyn Fn(usize, usize, usize) -> Scalar<T>, name: &str| {
            let mut w = Worst::new();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            for &e in base.outcomes(a, c) {
                                if !base.has(e, b, d) {
                                    continue;
                                }
                                for &g in base.outcomes(b, c) {
                                    if !base.has(a, g, d) {
                                        continue;
                                    }
                                    let lhs = rtab(a, c, e) * base.f(a, c, b, d, e, g) * rtab(b, c, g);
                                    let mut rhs = zero::<T>();
                                    for &f in base.outcomes(a, b) {
                                        rhs = rhs + base.f(c, a, b, d, e, f) * rtab(f, c, d) * base.f(a, b, c, d, f, g);
                                    }
                                    w.offer((lhs - rhs).norm(), || {
                                        format!("(a,b,c,d,e,g)={}", base.names(&[a, b, c, d, e, g]))
                                    });
                                }
                            }
                        }
                    }
                }
            }
            w.finish(name, tol_f)
        };
        checks.push(hex(&|a, b, c| self.r(a, b, c), "R.2 hexagon"));
        checks.push(hex(&|a, b, c| self.rbar(a, b, c), "R.3 hexagon"));

        let mut inv = Worst::new();
        for &(a, b, c) in base.rules().support() {
            inv.offer((self.r(a, b, c) * self.rbar(b, a, c) - one::<T>()).norm(), || base.names(&[a, b, c]));
        }
        checks.push(inv.finish("R.4 inverse", tol_f));
        Ok(ValidationReport::new(tol_f, checks))
    }
}
