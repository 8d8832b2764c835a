use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::path_space::{enumerate_basis, projector, ChainOperators, ChainSpec, PathBasis, SparseOperator};
use crate::scalar::{cluster, fmt_real, square_roots, Real, Scalar};
use crate::tensor_system::TensorSystem;

use super::RelationReport;

/// Which neighbour the middle projector sits on: `p_i p_{i+1} p_i` or `p_i p_{i-1} p_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Next,
    Prev,
}

impl Direction {
    pub fn neighbour(self, i: usize) -> usize {
        match self {
            Self::Next => i + 1,
            Self::Prev => i - 1,
        }
    }

    /// Sites `i` for which the relation is defined on a chain of length `len`.
    pub fn sites(self, len: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            Self::Next => 1..=len.saturating_sub(2),
            Self::Prev => 2..=len.saturating_sub(1),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Next => "next",
            Self::Prev => "prev",
        })
    }
}

/// The gauge-invariant condition for `p_i^(ν) p_j^(ν') p_i^(ν) = c p_i^(ν)`.
///
/// `condition_set` holds one product `F · Fbar` per admissible outer channel `υ₁`
/// (listed in `upsilons`). The relation holds iff the set is empty or clusters to a
/// single value, which is then `constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct TlCertificate<T: Real> {
    pub direction: Direction,
    pub site: usize,
    pub nu: usize,
    pub nu_prime: usize,
    pub upsilons: Vec<usize>,
    pub condition_set: Vec<Scalar<T>>,
    pub constant: Option<Scalar<T>>,
    pub singleton: bool,
    /// No admissible `υ₁`: every `c` works.
    pub vacuous: bool,
    pub matrix_residual: Option<T>,
}

impl<T: Real> TlCertificate<T> {
    /// The relation holds for some scalar.
    pub fn holds(&self) -> bool {
        self.singleton || self.vacuous
    }

    /// Set when the constant has a non-negligible imaginary part.
    pub fn complex_note(&self, tol: T) -> Option<String> {
        self.constant
            .filter(|c| c.im.abs() > tol)
            .map(|c| format!("constant has imaginary part {}", fmt_real(c.im)))
    }
}

fn check_direction_site(len: usize, i: usize, direction: Direction) -> Result<()> {
    let sites = direction.sites(len);
    if sites.contains(&i) {
        Ok(())
    } else {
        Err(Error::SiteOutOfRange { index: i, lo: *sites.start(), hi: *sites.end() })
    }
}

/// Enumerates the condition set of the Temperley-Lieb-like relation at site `i`.
///
/// Next direction: `υ₁ ∈ ν ⊗ λ_{i+2}` such that some `υ₂` reachable from the seeds
/// through `λ_1 … λ_{i-1}` fuses with `υ₁`; the value is
/// `(F^{λ_i λ_{i+1} λ_{i+2}}_{υ₁})^ν_{ν'} (Fbar^{…}_{υ₁})^{ν'}_ν`.
/// Prev direction: `υ₁ ∈ λ_{i-1} ⊗ ν`, `υ₂` reachable through `λ_1 … λ_{i-2}`, value
/// `(Fbar^{λ_{i-1} λ_i λ_{i+1}}_{υ₁})^ν_{ν'} (F^{…}_{υ₁})^{ν'}_ν`.
pub fn tl_condition<T: Real>(
    sys: &TensorSystem<T>,
    spec: &ChainSpec,
    i: usize,
    nu: usize,
    nu_prime: usize,
    direction: Direction,
    tol: T,
) -> Result<TlCertificate<T>> {
    sys.require_validated("tl_condition")?;
    let n = sys.len();
    if nu >= n || nu_prime >= n {
        return Err(Error::UnknownLabel(format!("#{}", nu.max(nu_prime))));
    }
    check_direction_site(spec.len(), i, direction)?;
    let lam = |k: usize| spec.lambda(k);
    let rules = sys.rules();

    let mut upsilons = Vec::new();
    let mut values = Vec::new();
    if sys.has(lam(i), lam(i + 1), nu) {
        let (candidates, prefix_end) = match direction {
            Direction::Next => (sys.outcomes(nu, lam(i + 2)).to_vec(), i - 1),
            Direction::Prev => (sys.outcomes(lam(i - 1), nu).to_vec(), i - 2),
        };
        let reach = rules.reachable(spec.seeds(), &spec.lambdas()[..prefix_end]);
        for u1 in candidates {
            let continues = (0..n).any(|u2| reach[u2] && !rules.outcomes(u2, u1).is_empty());
            if !continues {
                continue;
            }
            let v = match direction {
                Direction::Next => {
                    let (a, b, c) = (lam(i), lam(i + 1), lam(i + 2));
                    sys.f(a, b, c, u1, nu, nu_prime) * sys.fbar(a, b, c, u1, nu, nu_prime)
                }
                Direction::Prev => {
                    let (a, b, c) = (lam(i - 1), lam(i), lam(i + 1));
                    sys.fbar(a, b, c, u1, nu_prime, nu) * sys.f(a, b, c, u1, nu_prime, nu)
                }
            };
            upsilons.push(u1);
            values.push(v);
        }
    }
    let clusters = cluster(&values, tol);
    let singleton = clusters.len() == 1;
    Ok(TlCertificate {
        direction,
        site: i,
        nu,
        nu_prime,
        upsilons,
        vacuous: values.is_empty(),
        condition_set: values,
        constant: singleton.then(|| clusters[0]),
        singleton,
        matrix_residual: None,
    })
}

/// Least-squares fit of `c` in `p_i p_j p_i ≈ c p_i`, with the max-norm residual at
/// that `c`. `None` when `p_i = 0`.
pub fn fit_projector_constant<T: Real>(
    ops: &ChainOperators<T>,
    i: usize,
    j: usize,
    nu: usize,
    nu_prime: usize,
) -> Result<(Option<Scalar<T>>, T)> {
    let (p, q) = (ops.p(i, nu), ops.p(j, nu_prime));
    let pqp = SparseOperator::product(&[p, q, p])?;
    if p.is_zero() {
        return Ok((None, pqp.max_abs()));
    }
    let c = p.inner(&pqp)? / p.inner(p)?;
    Ok((Some(c), pqp.sub(&p.scale(c))?.max_abs()))
}

fn identity_residual<T: Real>(
    ops: &ChainOperators<T>,
    i: usize,
    j: usize,
    nu: usize,
    nu_prime: usize,
    c: Scalar<T>,
) -> Result<T> {
    let (p, q) = (ops.p(i, nu), ops.p(j, nu_prime));
    let pqp = SparseOperator::product(&[p, q, p])?;
    Ok(pqp.sub(&p.scale(c))?.max_abs())
}

/// `p_i^(ν) p_j^(ν') p_i^(ν) − c p_i^(ν)` by sparse arithmetic, `|i − j| = 1`.
#[allow(clippy::too_many_arguments)]
pub fn verify_projector_identity<T: Real>(
    sys: &TensorSystem<T>,
    basis: &Arc<PathBasis>,
    i: usize,
    j: usize,
    nu: usize,
    nu_prime: usize,
    c: Scalar<T>,
    tol: T,
) -> Result<RelationReport> {
    if i.abs_diff(j) != 1 {
        return Err(Error::Precondition(format!("sites {i} and {j} are not adjacent")));
    }
    let name = format!("p_{i} p_{j} p_{i} = c p_{i}");
    if basis.is_empty() {
        return Ok(RelationReport::vacuous(&name, tol, "empty basis").with_constant("c", c));
    }
    let p = projector(sys, basis, i, nu)?;
    let q = projector(sys, basis, j, nu_prime)?;
    let pqp = SparseOperator::product(&[&p, &q, &p])?;
    let r = pqp.sub(&p.scale(c))?.max_abs();
    let mut rep = RelationReport::from_residual(name, r, tol).with_constant("c", c);
    if p.is_zero() {
        rep.vacuous = true;
        rep.notes.push("p_i is zero on this basis".into());
    }
    Ok(rep)
}

/// Same as [`verify_projector_identity`] reusing prebuilt projectors.
pub fn verify_projector_identity_with<T: Real>(
    ops: &ChainOperators<T>,
    i: usize,
    j: usize,
    nu: usize,
    nu_prime: usize,
    c: Scalar<T>,
    tol: T,
) -> Result<RelationReport> {
    if i.abs_diff(j) != 1 {
        return Err(Error::Precondition(format!("sites {i} and {j} are not adjacent")));
    }
    let r = identity_residual(ops, i, j, nu, nu_prime, c)?;
    Ok(RelationReport::from_residual(format!("p_{i} p_{j} p_{i} = c p_{i}"), r, tol).with_constant("c", c))
}

/// Fills `matrix_residual` by checking the certificate's constant on `ops`.
pub fn attach_matrix_residual<T: Real>(cert: &mut TlCertificate<T>, ops: &ChainOperators<T>) -> Result<()> {
    let j = cert.direction.neighbour(cert.site);
    let r = match cert.constant {
        Some(c) => identity_residual(ops, cert.site, j, cert.nu, cert.nu_prime, c)?,
        None => fit_projector_constant(ops, cert.site, j, cert.nu, cert.nu_prime)?.1,
    };
    cert.matrix_residual = Some(r);
    Ok(())
}

/// The constant of the one-dimensional shortcut.
///
/// Next: `ν ⊗ λ_{i+2}` must be simple with outcome `φ`, and the constant is
/// `(F^{λ_i λ_{i+1} λ_{i+2}}_φ)^ν_{ν'} (Fbar^{…}_φ)^{ν'}_ν`. Prev: `λ_{i-1} ⊗ ν` simple,
/// constant `(F^{λ_{i-1} λ_i λ_{i+1}}_φ)^{ν'}_ν (Fbar^{…}_φ)^ν_{ν'}`.
pub fn onedim_tl_constant<T: Real>(
    sys: &TensorSystem<T>,
    lambdas: &[usize],
    i: usize,
    nu: usize,
    nu_prime: usize,
    direction: Direction,
) -> Result<Scalar<T>> {
    sys.require_validated("onedim_tl_constant")?;
    check_direction_site(lambdas.len(), i, direction)?;
    let lam = |k: usize| lambdas[k - 1];
    match direction {
        Direction::Next => {
            let (a, b, c) = (lam(i), lam(i + 1), lam(i + 2));
            let phi = sys.phi_left(nu, c).ok_or_else(|| {
                Error::NotOneDimensional(format!("{} ⊗ {} is not simple", sys.name(nu), sys.name(c)))
            })?;
            Ok(sys.f(a, b, c, phi, nu, nu_prime) * sys.fbar(a, b, c, phi, nu, nu_prime))
        }
        Direction::Prev => {
            let (a, b, c) = (lam(i - 1), lam(i), lam(i + 1));
            let phi = sys.phi_right(nu, a).ok_or_else(|| {
                Error::NotOneDimensional(format!("{} ⊗ {} is not simple", sys.name(a), sys.name(nu)))
            })?;
            Ok(sys.f(a, b, c, phi, nu_prime, nu) * sys.fbar(a, b, c, phi, nu_prime, nu))
        }
    }
}

/// `(F^{λλλ}_φ)^ν_ν (Fbar^{λλλ}_φ)^ν_ν` with `φ = φ_ν(λ)`, after checking that `ν`
/// acts one-dimensionally on `λ` and `N_λλ^ν = 1`.
pub(crate) fn homogeneous_constant<T: Real>(sys: &TensorSystem<T>, lambda: usize, nu: usize) -> Result<(usize, Scalar<T>)> {
    sys.require_validated("homogeneous chain construction")?;
    let n = sys.len();
    if lambda >= n || nu >= n {
        return Err(Error::UnknownLabel(format!("#{}", lambda.max(nu))));
    }
    if !sys.has(lambda, lambda, nu) {
        return Err(Error::Precondition(format!(
            "{} does not occur in {} ⊗ {}",
            sys.name(nu),
            sys.name(lambda),
            sys.name(lambda)
        )));
    }
    let phi = sys.phi_left(nu, lambda).ok_or_else(|| {
        Error::NotOneDimensional(format!("{} ⊗ {} is not simple", sys.name(nu), sys.name(lambda)))
    })?;
    let phi_r = sys.phi_right(nu, lambda).ok_or_else(|| {
        Error::NotOneDimensional(format!("{} ⊗ {} is not simple", sys.name(lambda), sys.name(nu)))
    })?;
    if phi != phi_r {
        return Err(Error::NotOneDimensional(format!(
            "left and right products of {} with {} differ",
            sys.name(nu),
            sys.name(lambda)
        )));
    }
    Ok((phi, sys.f(lambda, lambda, lambda, phi, nu, nu) * sys.fbar(lambda, lambda, lambda, phi, nu, nu)))
}

/// Temperley-Lieb generators `U_i = d p_i^(ν)` on a homogeneous chain.
#[derive(Clone, Debug)]
pub struct TlChain<T: Real> {
    pub lambda: usize,
    pub nu: usize,
    /// `(F)^ν_ν (Fbar)^ν_ν = d⁻²`.
    pub c: Scalar<T>,
    /// Principal root of `d² = c⁻¹`.
    pub d: Scalar<T>,
    /// Both roots, principal first.
    pub d_roots: [Scalar<T>; 2],
    pub basis: Arc<PathBasis>,
    /// `U_1 … U_{L-1}`.
    pub generators: Vec<SparseOperator<T>>,
}

/// Builds `U_i = d p_i^(ν)` on `(λ, …, λ)` of length `len` with every label as seed.
pub fn build_tl_chain<T: Real>(sys: &TensorSystem<T>, lambda: usize, nu: usize, len: usize) -> Result<TlChain<T>> {
    let spec = ChainSpec::homogeneous(sys.rules(), lambda, len, None)?;
    build_tl_chain_on(sys, &enumerate_basis(sys, &spec)?, nu)
}

pub fn build_tl_chain_on<T: Real>(sys: &TensorSystem<T>, basis: &Arc<PathBasis>, nu: usize) -> Result<TlChain<T>> {
    let lambda = basis
        .spec()
        .homogeneous_label()
        .ok_or_else(|| Error::Unsupported("Temperley-Lieb chains need a homogeneous chain".into()))?;
    let (_, c) = homogeneous_constant(sys, lambda, nu)?;
    if c.norm() <= T::table_tol() {
        return Err(Error::Degenerate(format!("d⁻² = {} is zero", fmt_real(c.norm()))));
    }
    let d_roots = square_roots(c.inv());
    let d = d_roots[0];
    let generators = (1..basis.spec().len())
        .map(|i| Ok(projector(sys, basis, i, nu)?.scale(d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TlChain { lambda, nu, c, d, d_roots, basis: basis.clone(), generators })
}

/// `U_i² = d U_i`, `U_i U_{i±1} U_i = U_i` and `U_i U_j = U_j U_i` for `|i − j| ≥ 2`.
pub fn verify_tl_relations<T: Real>(chain: &TlChain<T>, tol: T) -> Result<RelationReport> {
    let u = &chain.generators;
    let m = u.len();
    let mut sq = T::zero();
    let mut braid = T::zero();
    let mut far = T::zero();
    for i in 0..m {
        sq = sq.max(u[i].mul(&u[i])?.sub(&u[i].scale(chain.d))?.max_abs());
        for j in [i.wrapping_sub(1), i + 1] {
            if j < m {
                braid = braid.max(SparseOperator::product(&[&u[i], &u[j], &u[i]])?.sub(&u[i])?.max_abs());
            }
        }
        for j in (i + 2)..m {
            far = far.max(u[i].mul(&u[j])?.sub(&u[j].mul(&u[i])?)?.max_abs());
        }
    }
    let part = |name: &str, r: T, any: bool| {
        if any {
            RelationReport::from_residual(name, r, tol)
        } else {
            RelationReport::vacuous(name, tol, "no generator pairs")
        }
    };
    let details = vec![
        part("U_i^2 = d U_i", sq, m >= 1),
        part("U_i U_{i±1} U_i = U_i", braid, m >= 2),
        part("U_i U_j = U_j U_i", far, m >= 3),
    ];
    Ok(RelationReport::all("temperley-lieb", tol, details)
        .with_constant("d", chain.d)
        .with_constant("d (other root)", chain.d_roots[1]))
}

/// Per-bond constants `c_i` for one-dimensional labels `ν_1 … ν_{L-1}` and the check
/// that they coincide:
/// `c_i = (F^{λ_i λ_{i+1} λ_{i+2}}_φ)^{ν_i}_{ν_{i+1}} (Fbar^{…}_φ)^{ν_{i+1}}_{ν_i}`,
/// `φ = φ^l_{ν_i}(λ_{i+2})`.
pub fn check_homogeneity<T: Real>(
    sys: &TensorSystem<T>,
    lambdas: &[usize],
    nus: &[usize],
    tol: T,
) -> Result<RelationReport> {
    sys.require_validated("check_homogeneity")?;
    let len = lambdas.len();
    if nus.len() + 1 != len {
        return Err(Error::Precondition(format!("{} bond labels given for a chain of length {len}", nus.len())));
    }
    for (k, &nu) in nus.iter().enumerate() {
        if !sys.one_dim_profile(nu)?.is_one_dimensional {
            return Err(Error::NotOneDimensional(format!("{} is not one-dimensional", sys.name(nu))));
        }
        if !sys.has(lambdas[k], lambdas[k + 1], nu) {
            return Err(Error::Precondition(format!("projector onto {} at bond {} is zero", sys.name(nu), k + 1)));
        }
    }
    const NAME: &str = "homogeneity of c_i";
    if len < 3 {
        return Ok(RelationReport::vacuous(NAME, tol, "fewer than two bonds"));
    }
    let cs: Vec<Scalar<T>> = (0..len - 2)
        .map(|k| {
            let (a, b, c) = (lambdas[k], lambdas[k + 1], lambdas[k + 2]);
            let (nu, nu2) = (nus[k], nus[k + 1]);
            let phi = sys.phi_left(nu, c).expect("one-dimensional");
            sys.f(a, b, c, phi, nu, nu2) * sys.fbar(a, b, c, phi, nu, nu2)
        })
        .collect();
    let spread = cs.iter().map(|c| (*c - cs[0]).norm()).fold(T::zero(), T::max);
    let mut rep = RelationReport::from_residual(NAME, spread, tol);
    for (k, c) in cs.iter().enumerate() {
        rep = rep.with_constant(format!("c_{}", k + 1), *c);
    }
    Ok(rep)
}
