use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::path_space::{braid_operator, enumerate_basis, ChainOperators, ChainSpec, PathBasis, SparseOperator};
use crate::scalar::{fmt_scalar, one, square_roots, Real, Scalar};
use crate::tensor_system::BraidedTensorSystem;

use super::tl::homogeneous_constant;
use super::RelationReport;

/// Scalars entering the mixed braid / projector relations for `(λ, ν)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BmwScalars<T: Real> {
    pub lambda: usize,
    pub nu: usize,
    /// `φ_ν(λ)`.
    pub phi: usize,
    /// `(F^{λλλ}_φ)^ν_ν (Fbar^{λλλ}_φ)^ν_ν`.
    pub c: Scalar<T>,
    /// `Σ_υ (F^{λλλ}_φ)^υ_ν R^{λλ}_υ (Fbar^{λλλ}_φ)^ν_υ`.
    pub s: Scalar<T>,
    /// The same sum with `Rbar^{λλ}_υ`.
    pub s_bar: Scalar<T>,
    pub r_nu: Scalar<T>,
    pub rbar_nu: Scalar<T>,
    /// The four single-term rewritings of `s`:
    /// `R^{νλ}_φ F^ν_ν Rbar^{λλ}_ν`, `R^{λλ}_ν Fbar^ν_ν Rbar^{λν}_φ`,
    /// `Rbar^{νλ}_φ F^ν_ν R^{λλ}_ν`, `Rbar^{λλ}_ν Fbar^ν_ν R^{λν}_φ`.
    pub variants: [Scalar<T>; 4],
}

pub fn bmw_scalars<T: Real>(bsys: &BraidedTensorSystem<T>, lambda: usize, nu: usize) -> Result<BmwScalars<T>> {
    bsys.require_validated("BMW construction")?;
    let sys = bsys.base();
    let (phi, c) = homogeneous_constant(sys, lambda, nu)?;
    if c.norm() <= T::table_tol() {
        return Err(Error::Degenerate("(F)^ν_ν (Fbar)^ν_ν vanishes".into()));
    }
    let need = |table: &std::collections::HashMap<[usize; 3], Scalar<T>>, k: [usize; 3], what: &str| {
        table.get(&k).copied().ok_or_else(|| {
            Error::MissingBraiding(format!("{what}^({},{})_{}", sys.name(k[0]), sys.name(k[1]), sys.name(k[2])))
        })
    };
    let (r, rb) = (bsys.r_table(), bsys.rbar_table());
    let mut s = Scalar::new(T::zero(), T::zero());
    let mut s_bar = s;
    for &u in sys.outcomes(lambda, lambda) {
        let ff = sys.f(lambda, lambda, lambda, phi, u, nu) * sys.fbar(lambda, lambda, lambda, phi, u, nu);
        s = s + ff * need(r, [lambda, lambda, u], "R")?;
        s_bar = s_bar + ff * need(rb, [lambda, lambda, u], "Rbar")?;
    }
    let f_nn = sys.f(lambda, lambda, lambda, phi, nu, nu);
    let fb_nn = sys.fbar(lambda, lambda, lambda, phi, nu, nu);
    let r_nu = need(r, [lambda, lambda, nu], "R")?;
    let rbar_nu = need(rb, [lambda, lambda, nu], "Rbar")?;
    let variants = [
        need(r, [nu, lambda, phi], "R")? * f_nn * rbar_nu,
        r_nu * fb_nn * need(rb, [lambda, nu, phi], "Rbar")?,
        need(rb, [nu, lambda, phi], "Rbar")? * f_nn * r_nu,
        rbar_nu * fb_nn * need(r, [lambda, nu, phi], "R")?,
    ];
    Ok(BmwScalars { lambda, nu, phi, c, s, s_bar, r_nu, rbar_nu, variants })
}

/// Largest pairwise distance among the four rewritings.
pub fn variant_spread<T: Real>(sc: &BmwScalars<T>) -> T {
    let mut worst = T::zero();
    for a in 0..4 {
        for b in (a + 1)..4 {
            worst = worst.max((sc.variants[a] - sc.variants[b]).norm());
        }
    }
    worst
}

pub fn hexagon_variant_report<T: Real>(sc: &BmwScalars<T>, tol: T) -> RelationReport {
    let mut rep = RelationReport::from_residual("hexagon variants agree", variant_spread(sc), tol)
        .with_constant("sum", sc.s)
        .with_constant("sum with Rbar", sc.s_bar);
    for (k, v) in sc.variants.iter().enumerate() {
        rep = rep.with_constant(format!("variant {}", k + 1), *v);
    }
    let off: Vec<String> = sc
        .variants
        .iter()
        .enumerate()
        .filter(|(_, v)| (**v - sc.s).norm() >= tol)
        .map(|(k, v)| format!("variant {} = {} differs from the sum", k + 1, fmt_scalar(*v)))
        .collect();
    rep.notes.extend(off);
    rep
}

struct Braids<T: Real> {
    r: Vec<SparseOperator<T>>,
    rinv: Vec<SparseOperator<T>>,
}

impl<T: Real> Braids<T> {
    fn new(bsys: &BraidedTensorSystem<T>, basis: &Arc<PathBasis>) -> Result<Self> {
        let bonds = basis.spec().len().saturating_sub(1);
        let r = (1..=bonds).map(|i| braid_operator(bsys, basis, i, false)).collect::<Result<Vec<_>>>()?;
        let rinv = (1..=bonds).map(|i| braid_operator(bsys, basis, i, true)).collect::<Result<Vec<_>>>()?;
        Ok(Self { r, rinv })
    }
}

fn neighbours(i: usize, bonds: usize) -> impl Iterator<Item = usize> {
    [i.wrapping_sub(1), i + 1].into_iter().filter(move |&j| j >= 1 && j <= bonds)
}

fn res<T: Real>(a: &SparseOperator<T>, b: &SparseOperator<T>) -> Result<T> {
    Ok(a.sub(b)?.max_abs())
}

fn family<T: Real>(name: &str, r: T, any: bool, tol: T) -> RelationReport {
    if any {
        RelationReport::from_residual(name, r, tol)
    } else {
        RelationReport::vacuous(name, tol, "no admissible sites")
    }
}

/// The six mixed relation families between `p_i^(ν)` and `R_i^{±1}`, plus agreement
/// of the four hexagon rewritings of the bracketed sum.
pub fn bmw_mixed_relations<T: Real>(
    bsys: &BraidedTensorSystem<T>,
    lambda: usize,
    nu: usize,
    basis: &Arc<PathBasis>,
    tol: T,
) -> Result<RelationReport> {
    let sys = bsys.base();
    if basis.spec().homogeneous_label() != Some(lambda) {
        return Err(Error::Unsupported(format!("basis is not the homogeneous {} chain", sys.name(lambda))));
    }
    let sc = bmw_scalars(bsys, lambda, nu)?;
    const NAME: &str = "mixed braid-projector relations";
    if basis.is_empty() {
        return Ok(RelationReport::vacuous(NAME, tol, "empty basis"));
    }
    let ops = ChainOperators::new(sys, basis)?;
    let br = Braids::new(bsys, basis)?;
    let bonds = ops.bonds();
    let cinv = sc.c.inv();
    let (mut f1, mut f2, mut f3, mut f4, mut f5, mut f6) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    // family 6 with R inside the sum instead of Rbar, reported for comparison only
    let mut f6_with_r = T::zero();
    let mut adjacent = false;
    for i in 1..=bonds {
        let p = ops.p(i, nu);
        let (r, ri) = (&br.r[i - 1], &br.rinv[i - 1]);
        let rp = p.scale(sc.r_nu);
        f1 = f1.max(res(&r.mul(p)?, &rp)?).max(res(&p.mul(r)?, &rp)?);
        let rbp = p.scale(sc.rbar_nu);
        f2 = f2.max(res(&ri.mul(p)?, &rbp)?).max(res(&p.mul(ri)?, &rbp)?);
        for j in neighbours(i, bonds) {
            adjacent = true;
            let (rj, rij) = (&br.r[j - 1], &br.rinv[j - 1]);
            f3 = f3.max(res(&SparseOperator::product(&[p, rj, p])?, &p.scale(sc.s))?);
            f4 = f4.max(res(&SparseOperator::product(&[p, rij, p])?, &p.scale(sc.s_bar))?);
            let pj = ops.p(j, nu);
            let pjp = pj.mul(p)?;
            let target5 = pjp.scale(cinv * sc.r_nu * sc.s);
            let rr = r.mul(rj)?;
            f5 = f5.max(res(&rr.mul(p)?, &target5)?).max(res(&pj.mul(&rr)?, &target5)?);
            let target6 = pjp.scale(cinv * sc.rbar_nu * sc.s_bar);
            let rrinv = ri.mul(rij)?;
            let (left6, right6) = (rrinv.mul(p)?, pj.mul(&rrinv)?);
            f6 = f6.max(res(&left6, &target6)?).max(res(&right6, &target6)?);
            let target6r = pjp.scale(cinv * sc.rbar_nu * sc.s);
            f6_with_r = f6_with_r.max(res(&left6, &target6r)?).max(res(&right6, &target6r)?);
        }
    }
    let details = vec![
        family("R_i p_i = p_i R_i = R_ν p_i", f1, bonds > 0, tol),
        family("R_i^-1 p_i = p_i R_i^-1 = Rbar_ν p_i", f2, bonds > 0, tol),
        family("p_i R_{i±1} p_i = s p_i", f3, adjacent, tol),
        family("p_i R_{i±1}^-1 p_i = sbar p_i", f4, adjacent, tol),
        family("R_i R_{i±1} p_i = p_{i±1} R_i R_{i±1} = c^-1 R_ν s p_{i±1} p_i", f5, adjacent, tol),
        family("R_i^-1 R_{i±1}^-1 p_i = p_{i±1} R_i^-1 R_{i±1}^-1 = c^-1 Rbar_ν sbar p_{i±1} p_i", f6, adjacent, tol)
            .with_note(format!(
                "with s in place of sbar the residual is {}",
                crate::scalar::fmt_real(f6_with_r)
            )),
        hexagon_variant_report(&sc, tol),
    ];
    Ok(RelationReport::all(NAME, tol, details)
        .with_constant("s", sc.s)
        .with_constant("sbar", sc.s_bar)
        .with_constant("c", sc.c))
}

/// Outcome of the skein check for one `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkeinOutcome<T: Real> {
    /// `(g⁻¹ − g)/(1 − d)`.
    pub m_value: Scalar<T>,
    /// `Some(m)` iff every eigenvalue condition holds.
    pub m: Option<Scalar<T>>,
    pub scalar_ok: bool,
    pub scalar_residual: T,
    pub matrix_residual: T,
    pub matrix_ok: bool,
    /// Scalar and matrix forms agree.
    pub consistent: bool,
    pub report: RelationReport,
}

/// `G − G⁻¹ = m (I − U)` as eigenvalue conditions
/// `g R^{λλ}_υ − (g R^{λλ}_υ)⁻¹ = m` for `υ ≠ ν`, cross-checked as a matrix identity
/// on the length-3 chain.
pub fn check_skein<T: Real>(
    bsys: &BraidedTensorSystem<T>,
    lambda: usize,
    nu: usize,
    d: Scalar<T>,
    g: Scalar<T>,
    tol: T,
) -> Result<SkeinOutcome<T>> {
    let sys = bsys.base();
    if (d - one()).norm() <= tol {
        return Err(Error::Degenerate("d = 1 makes m = (g⁻¹ − g)/(1 − d) undefined".into()));
    }
    if g.norm() <= tol {
        return Err(Error::Degenerate("g = 0".into()));
    }
    let m = (g.inv() - g) / (one::<T>() - d);
    let others: Vec<usize> = sys.outcomes(lambda, lambda).iter().copied().filter(|&u| u != nu).collect();
    let mut scalar_residual = T::zero();
    for &u in &others {
        let r = *bsys.r_table().get(&[lambda, lambda, u]).ok_or_else(|| {
            Error::MissingBraiding(format!("R^({},{})_{}", sys.name(lambda), sys.name(lambda), sys.name(u)))
        })?;
        let x = g * r;
        scalar_residual = scalar_residual.max((x - x.inv() - m).norm());
    }
    let scalar_ok = scalar_residual < tol;

    let spec = ChainSpec::homogeneous(sys.rules(), lambda, 3, None)?;
    let basis = enumerate_basis(sys, &spec)?;
    let ops = ChainOperators::new(sys, &basis)?;
    let br = Braids::new(bsys, &basis)?;
    let id = SparseOperator::identity(&basis);
    let mut matrix_residual = T::zero();
    for i in 1..=2 {
        let gi = br.r[i - 1].scale(g);
        let gi_inv = br.rinv[i - 1].scale(g.inv());
        let u = ops.p(i, nu).scale(d);
        let lhs = gi.sub(&gi_inv)?;
        let rhs = id.sub(&u)?.scale(m);
        matrix_residual = matrix_residual.max(res(&lhs, &rhs)?);
    }
    let matrix_ok = matrix_residual < tol;
    let consistent = scalar_ok == matrix_ok;

    let mut scalar_rep = if others.is_empty() {
        RelationReport::vacuous("skein eigenvalue conditions", tol, "ν is the only channel of λ ⊗ λ")
    } else {
        RelationReport::from_residual("skein eigenvalue conditions", scalar_residual, tol)
    };
    scalar_rep = scalar_rep.with_constant("m", m);
    let matrix_rep = RelationReport::from_residual("G - G^-1 = m (I - U) at L = 3", matrix_residual, tol);
    let cons_rep = RelationReport::logical("scalar and matrix forms agree", consistent, tol);
    let report = RelationReport::all("skein relation", tol, vec![scalar_rep, matrix_rep, cons_rep])
        .with_constant("m", m)
        .with_constant("g", g);
    Ok(SkeinOutcome {
        m_value: m,
        m: scalar_ok.then_some(m),
        scalar_ok,
        scalar_residual,
        matrix_residual,
        matrix_ok,
        consistent,
        report,
    })
}

/// Per-root results of [`build_bmw`].
#[derive(Clone, Debug)]
pub struct BmwRootResult<T: Real> {
    pub g: Scalar<T>,
    pub relation_residuals: BTreeMap<String, T>,
    pub report: RelationReport,
    /// `None` when `d = 1`.
    pub skein: Option<SkeinOutcome<T>>,
}

/// `U_i = d p_i^(ν)`, `G_i = g R_i` with `d⁻¹ = s` and `g⁻² = R^{λλ}_ν`, checked for
/// both roots `g`.
#[derive(Clone, Debug)]
pub struct BmwCertificate<T: Real> {
    pub lambda: usize,
    pub nu: usize,
    pub scalars: BmwScalars<T>,
    pub d: Scalar<T>,
    pub g_candidates: Vec<Scalar<T>>,
    /// `|d⁻² − (F)^ν_ν (Fbar)^ν_ν|`.
    pub proof_identity_residual: T,
    pub roots: Vec<BmwRootResult<T>>,
    pub skein_m: Option<Scalar<T>>,
    pub skein_ok: bool,
}

impl<T: Real> BmwCertificate<T> {
    /// Some root satisfies all nine families.
    pub fn relations_hold(&self) -> bool {
        self.roots.iter().any(|r| r.report.satisfied)
    }

    pub fn best_root(&self) -> &BmwRootResult<T> {
        self.roots
            .iter()
            .min_by(|a, b| a.report.residual.total_cmp(&b.report.residual))
            .expect("two roots")
    }

    /// Summary: best root's nine families, the proof identity and the skein check.
    pub fn report(&self, tol: T) -> RelationReport {
        let best = self.best_root();
        let mut details = vec![best.report.clone()];
        details.push(
            RelationReport::from_residual("d^-2 = (F)^ν_ν (Fbar)^ν_ν", self.proof_identity_residual, tol)
                .with_constant("d^-2", (self.d * self.d).inv())
                .with_constant("c", self.scalars.c),
        );
        if let Some(sk) = &best.skein {
            details.push(RelationReport::logical("skein cross-consistency", sk.consistent, tol)
                .with_constant("m", sk.m_value)
                .with_note(if sk.scalar_ok { "skein relation holds" } else { "skein relation does not hold" }));
        }
        RelationReport::all("bmw", tol, details).with_constant("d", self.d).with_constant("g", best.g)
    }
}

/// Builds the candidate BMW generators on `(λ, …, λ)` of length `len` and checks the
/// nine relation families for each `g` root.
pub fn build_bmw<T: Real>(
    bsys: &BraidedTensorSystem<T>,
    lambda: usize,
    nu: usize,
    len: usize,
    tol: T,
) -> Result<BmwCertificate<T>> {
    let sys = bsys.base();
    let sc = bmw_scalars(bsys, lambda, nu)?;
    if sc.s.norm() <= T::table_tol() {
        return Err(Error::Degenerate("d⁻¹ vanishes".into()));
    }
    if sc.r_nu.norm() <= T::table_tol() {
        return Err(Error::Degenerate("R^{λλ}_ν vanishes".into()));
    }
    let d = sc.s.inv();
    let proof_identity_residual = (sc.s * sc.s - sc.c).norm();
    let g_candidates = square_roots(sc.r_nu.inv()).to_vec();

    let spec = ChainSpec::homogeneous(sys.rules(), lambda, len, None)?;
    let basis = enumerate_basis(sys, &spec)?;
    let ops = ChainOperators::new(sys, &basis)?;
    let br = Braids::new(bsys, &basis)?;
    let bonds = ops.bonds();

    let mut roots = Vec::new();
    for &g in &g_candidates {
        let u: Vec<SparseOperator<T>> = (1..=bonds).map(|i| ops.p(i, nu).scale(d)).collect();
        let gg: Vec<SparseOperator<T>> = br.r.iter().map(|r| r.scale(g)).collect();
        let ginv: Vec<SparseOperator<T>> = br.rinv.iter().map(|r| r.scale(g.inv())).collect();
        let mut w = [T::zero(); 9];
        let mut adjacent = false;
        let mut far_pairs = false;
        for i in 0..bonds {
            if i + 1 < bonds {
                let a = SparseOperator::product(&[&gg[i], &gg[i + 1], &gg[i]])?;
                let b = SparseOperator::product(&[&gg[i + 1], &gg[i], &gg[i + 1]])?;
                w[0] = w[0].max(res(&a, &b)?);
            }
            for j in neighbours(i + 1, bonds).map(|j| j - 1) {
                adjacent = true;
                w[1] = w[1].max(res(&SparseOperator::product(&[&u[i], &u[j], &u[i]])?, &u[i])?);
                let ggu = SparseOperator::product(&[&gg[i], &gg[j], &u[i]])?;
                let ugg = SparseOperator::product(&[&u[j], &gg[i], &gg[j]])?;
                let uu = u[j].mul(&u[i])?;
                w[2] = w[2].max(res(&ggu, &ugg)?).max(res(&ugg, &uu)?);
                let gug = SparseOperator::product(&[&gg[j], &u[i], &gg[j]])?;
                let gug_inv = SparseOperator::product(&[&ginv[i], &u[j], &ginv[i]])?;
                w[3] = w[3].max(res(&gug, &gug_inv)?);
                w[4] = w[4].max(res(&SparseOperator::product(&[&u[i], &gg[j], &u[i]])?, &u[i].scale(g))?);
            }
            let gu = gg[i].mul(&u[i])?;
            let ug = u[i].mul(&gg[i])?;
            let target = u[i].scale(g.inv());
            w[5] = w[5].max(res(&gu, &target)?).max(res(&ug, &target)?);
            w[6] = w[6].max(res(&u[i].mul(&u[i])?, &u[i].scale(d))?);
            for j in (i + 2)..bonds {
                far_pairs = true;
                w[7] = w[7].max(res(&gg[i].mul(&gg[j])?, &gg[j].mul(&gg[i])?)?);
                w[8] = w[8].max(res(&u[i].mul(&u[j])?, &u[j].mul(&u[i])?)?);
            }
        }
        let names = [
            "G_i G_{i+1} G_i = G_{i+1} G_i G_{i+1}",
            "U_i U_{i±1} U_i = U_i",
            "G_i G_{i±1} U_i = U_{i±1} G_i G_{i±1} = U_{i±1} U_i",
            "G_{i±1} U_i G_{i±1} = G_i^-1 U_{i±1} G_i^-1",
            "U_i G_{i±1} U_i = g U_i",
            "G_i U_i = U_i G_i = g^-1 U_i",
            "U_i^2 = d U_i",
            "G_i G_j = G_j G_i",
            "U_i U_j = U_j U_i",
        ];
        let present = [bonds >= 2, adjacent, adjacent, adjacent, adjacent, bonds >= 1, bonds >= 1, far_pairs, far_pairs];
        let details: Vec<RelationReport> =
            (0..9).map(|k| family(names[k], w[k], present[k] && !basis.is_empty(), tol)).collect();
        let relation_residuals = names.iter().zip(w).map(|(n, r)| (n.to_string(), r)).collect();
        let report = RelationReport::all("bmw relation families", tol, details).with_constant("g", g);
        let skein = match check_skein(bsys, lambda, nu, d, g, tol) {
            Ok(s) => Some(s),
            Err(Error::Degenerate(_)) => None,
            Err(e) => return Err(e),
        };
        roots.push(BmwRootResult { g, relation_residuals, report, skein });
    }
    let skein_m = roots.iter().find_map(|r| r.skein.as_ref().and_then(|s| s.m));
    Ok(BmwCertificate {
        lambda,
        nu,
        scalars: sc,
        d,
        g_candidates,
        proof_identity_residual,
        skein_ok: skein_m.is_some(),
        skein_m,
        roots,
    })
}
