//! Characteristic p: defect-zero blocks, the Brauer homomorphism, defect
//! groups, the Glauberman pipeline, cocycle lifting over W_N and the
//! truncated integral isomorphism.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    central_idempotent, centralizer_subalgebra, corner_algebra, full_idempotent_check, is_defect_zero, orbit_sums,
    product_idempotent, trace_idempotent, AlgebraElement, SubalgebraBasis,
};
use crate::characters::{character_table, ClassFunction};
use crate::config::{validate_configuration, Configuration, Flavor, RawConfiguration};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{rank, rref, solve};
use crate::magic::{
    extract_cocycle, make_magic, make_magic_crossed, projective_rep, CosetSpace, MagicRep, MagicSetup, SolverOptions,
    Status, TraceModel,
};
use crate::scalar::{
    ext_gcd, lcm, residue_reduction, witt_lift, witt_reduce, CycloScalar, FixedField, ModScalar, ResidueMap, Scalar,
    WittMap, WittScalar,
};

/// Conductor of ℚ(χ).
pub fn values_conductor(chi: &ClassFunction) -> u64 {
    chi.values.iter().fold(1, |acc, v| lcm(acc, v.shrink().conductor()))
}

/// A block idempotent of GF(p^f)K of defect zero.
#[derive(Clone, Debug)]
pub struct BlockData {
    pub k: Arc<Subgroup>,
    pub p: u64,
    pub residue: ResidueMap,
    pub e: AlgebraElement<ModScalar>,
    pub theta: ClassFunction,
    /// a with Σ_k k a k⁻¹ = ē.
    pub witness: AlgebraElement<ModScalar>,
    pub defect_group: Option<Arc<Subgroup>>,
}

fn reduce_elem(x: &AlgebraElement<CycloScalar>, res: &ResidueMap) -> Result<AlgebraElement<ModScalar>> {
    x.map(&res.field, |c| res.reduce(c))
}

fn witt_elem(x: &AlgebraElement<CycloScalar>, wm: &WittMap) -> Result<AlgebraElement<WittScalar>> {
    x.map(&wm.ring, |c| wm.reduce(c))
}

fn reduce_witt_elem(x: &AlgebraElement<WittScalar>, field: &Arc<crate::scalar::FiniteRing>) -> AlgebraElement<ModScalar> {
    x.map(field, |c| Ok(witt_reduce(c))).expect("reduction is total")
}

/// Σ_{k ∈ K} k a k⁻¹ = ē solved for a supported on K.
fn trace_witness<R: Scalar>(e: &AlgebraElement<R>, k: &Subgroup) -> Result<Option<AlgebraElement<R>>> {
    let g = e.g.clone();
    let ctx = e.ctx();
    let cols: Vec<AlgebraElement<R>> = k
        .elements()
        .iter()
        .map(|&x| {
            let mut acc = AlgebraElement::<R>::zero(&g, &ctx);
            for &y in k.elements() {
                let c = g.conj(x, g.inv(y));
                acc.coeffs[c] = acc.coeffs[c].add(&R::one(&ctx));
            }
            acc
        })
        .collect();
    let a: Vec<Vec<R>> = (0..g.order()).map(|r| cols.iter().map(|c| c.coeffs[r].clone()).collect()).collect();
    Ok(solve(&a, &e.coeffs, cols.len(), &ctx)?.map(|sol| {
        let mut w = AlgebraElement::zero(&g, &ctx);
        for (c, &x) in sol.into_iter().zip(k.elements()) {
            w.coeffs[x] = c;
        }
        w
    }))
}

fn class_sums<R: Scalar>(k: &Subgroup, ctx: &R::Ctx) -> Vec<AlgebraElement<R>> {
    k.classes().iter().map(|c| AlgebraElement::sum_of(k.group(), c, ctx)).collect()
}

/// dim Z(R K)·e.
fn central_rank<R: Scalar>(e: &AlgebraElement<R>, k: &Subgroup) -> Result<usize> {
    let rows: Vec<Vec<R>> = class_sums(k, &e.ctx()).iter().map(|c| c.mul(e).coeffs).collect();
    rank(&rows)
}

/// Every θ ∈ Irr(K) of p-defect zero with its reduced block idempotent, over
/// the residue field of the compositum of their fields of values.
pub fn defect_zero_blocks(k: &Arc<Subgroup>, p: u64) -> Result<Vec<BlockData>> {
    let table = character_table(k)?;
    let chars: Vec<&ClassFunction> = table.irr.iter().filter(|c| is_defect_zero(c, p)).collect();
    let m = chars.iter().fold(1, |acc, c| lcm(acc, values_conductor(c)));
    let residue = residue_reduction(m, p)?;
    let mut out = Vec::new();
    for theta in chars {
        let e = reduce_elem(&central_idempotent(theta), &residue)?;
        check_block(&e, k)?;
        let witness = trace_witness(&e, k)?
            .ok_or_else(|| Error::Algebra("defect-zero block without a trace witness".into()))?;
        out.push(BlockData {
            k: k.clone(),
            p,
            residue: residue.clone(),
            e,
            theta: theta.clone(),
            witness,
            defect_group: None,
        });
    }
    Ok(out)
}

fn check_block<R: Scalar>(e: &AlgebraElement<R>, k: &Subgroup) -> Result<()> {
    if e.is_zero() || !e.is_idempotent() || !e.commutes_with_group(k.generators()) {
        return Err(Error::Algebra("reduced e_θ is not a central idempotent".into()));
    }
    if central_rank(e, k)? != 1 {
        return Err(Error::Algebra("reduced e_θ is not primitive in the centre".into()));
    }
    Ok(())
}

/// br_P: truncation of a P-fixed element to C_G(P).
pub fn brauer_hom<R: Scalar>(x: &AlgebraElement<R>, p: &Subgroup) -> Result<AlgebraElement<R>> {
    for &g in p.generators() {
        if x.conj(g) != *x {
            return Err(Error::Validation("element is not P-fixed".into()));
        }
    }
    let c = p.centralizer_in(&x.g.full());
    let mut out = x.clone();
    for (y, v) in out.coeffs.iter_mut().enumerate() {
        if !c.contains(y) {
            *v = R::zero(&v.ctx());
        }
    }
    Ok(out)
}

fn br_nonzero<R: Scalar>(e: &AlgebraElement<R>, d: &Subgroup) -> Result<bool> {
    Ok(!brauer_hom(e, d)?.is_zero())
}

fn conjugate_in(a: &Subgroup, b: &Subgroup, m: &Subgroup) -> bool {
    a.order() == b.order() && m.elements().iter().any(|&g| *a.conjugate(g) == *b)
}

/// A maximal p-subgroup D ≤ M with br_D(e) ≠ 0, searched inside one Sylow
/// subgroup; all such maxima are checked M-conjugate to D.
pub fn defect_group<R: Scalar>(e: &AlgebraElement<R>, m: &Subgroup, p: u64) -> Result<Arc<Subgroup>> {
    if m.generators().iter().any(|&g| e.conj(g) != *e) {
        return Err(Error::Validation("block idempotent is not M-fixed".into()));
    }
    let syl = m.sylow(p as usize);
    let mut best: Option<Arc<Subgroup>> = None;
    for d in syl.all_subgroups() {
        if br_nonzero(e, &d)? && best.as_ref().is_none_or(|b| d.order() > b.order()) {
            best = Some(d);
        }
    }
    let best = best.expect("br_1 is the identity on a nonzero block");
    let qualifying: Vec<Arc<Subgroup>> = m
        .all_subgroups()
        .into_iter()
        .filter(|q| q.is_p_group(p as usize))
        .filter(|q| br_nonzero(e, q).unwrap_or(false))
        .collect();
    for q in &qualifying {
        let maximal = !qualifying.iter().any(|o| o.order() > q.order() && q.is_subgroup_of(o));
        if maximal && !conjugate_in(q, &best, m) {
            return Err(Error::Verification("maximal Brauer-nonvanishing p-subgroups are not conjugate".into()));
        }
    }
    Ok(best)
}

/// Glauberman data: the configuration with H = N_G(P), L = C_K(P) and φ
/// the defect-zero character with br_P(ē_θ) = ē_φ.
#[derive(Clone, Debug)]
pub struct GlaubermanSetup {
    pub config: Configuration,
    pub p: u64,
    pub p_group: Arc<Subgroup>,
    pub m: Arc<Subgroup>,
    pub residue: ResidueMap,
    pub e_theta: AlgebraElement<ModScalar>,
    pub e_phi: AlgebraElement<ModScalar>,
    /// The defect group found by search; conjugate to `p_group` in M.
    pub found_defect_group: Arc<Subgroup>,
}

pub fn glauberman_setup(
    g: &Arc<Subgroup>,
    k: &Arc<Subgroup>,
    pg: &Arc<Subgroup>,
    p: u64,
    theta: &ClassFunction,
    field: &FixedField,
) -> Result<GlaubermanSetup> {
    let err = |s: &str| Err(Error::Validation(s.to_string()));
    if !pg.is_p_group(p as usize) {
        return err("P is not a p-group");
    }
    if !pg.is_subgroup_of(g) {
        return err("P not a subgroup of G");
    }
    if !k.is_normal_in(g) {
        return err("K not normal");
    }
    if pg.intersection(k).order() != 1 {
        return err("P ∩ K ≠ 1");
    }
    let m = k.join(pg);
    if !m.is_normal_in(g) {
        return err("KP not normal in G");
    }
    if pg.generators().iter().any(|&x| theta.conjugate_by(x) != *theta) {
        return err("θ not M-invariant");
    }
    if !is_defect_zero(theta, p) {
        return err("θ not of p-defect zero");
    }
    let h = pg.normalizer_in(g);
    let l = h.intersection(k);
    if *l != *pg.centralizer_in(k) {
        return err("H ∩ K ≠ C_K(P)");
    }
    let l_table = character_table(&l)?;
    let cands: Vec<&ClassFunction> = l_table.irr.iter().filter(|c| is_defect_zero(c, p)).collect();
    let m_all = cands.iter().fold(values_conductor(theta), |acc, c| lcm(acc, values_conductor(c)));
    let wide = residue_reduction(m_all, p)?;
    let br = brauer_hom(&reduce_elem(&central_idempotent(theta), &wide)?, pg)?;
    let mut hits = Vec::new();
    for c in cands {
        if reduce_elem(&central_idempotent(c), &wide)? == br {
            hits.push(c.clone());
        }
    }
    if hits.len() != 1 {
        return Err(Error::Validation(format!("br_P(ē_θ) matches {} defect-zero blocks of L", hits.len())));
    }
    let phi = hits.pop().unwrap();
    let residue = residue_reduction(lcm(values_conductor(theta), values_conductor(&phi)), p)?;
    let e_theta = reduce_elem(&central_idempotent(theta), &residue)?;
    let e_phi = reduce_elem(&central_idempotent(&phi), &residue)?;
    let found = defect_group(&e_theta, &m, p)?;
    if !conjugate_in(&found, pg, &m) {
        return Err(Error::Validation("P is not a defect group of ē_θ in KP".into()));
    }
    let raw = RawConfiguration {
        g: g.clone(),
        k: k.clone(),
        h,
        theta: theta.clone(),
        phi,
        field: field.clone(),
        prime: Some(p),
        flavor: Flavor::ModularGlauberman,
    };
    let config = validate_configuration(raw)?;
    Ok(GlaubermanSetup { config, p, p_group: pg.clone(), m, residue, e_theta, e_phi, found_defect_group: found })
}

/// Pairs the P-invariant defect-zero characters of K with the defect-zero
/// characters of C_K(P) through br_P(ē_θ) = ē_φ.
pub fn glauberman_pairing(k: &Arc<Subgroup>, pg: &Arc<Subgroup>, p: u64) -> Result<Vec<(ClassFunction, ClassFunction)>> {
    let l = pg.centralizer_in(k);
    let kb = defect_zero_blocks(k, p)?;
    let lb = defect_zero_blocks(&l, p)?;
    let m = kb.iter().chain(&lb).fold(1, |acc, b| lcm(acc, values_conductor(&b.theta)));
    let res = residue_reduction(m, p)?;
    let lidem: Vec<AlgebraElement<ModScalar>> =
        lb.iter().map(|b| reduce_elem(&central_idempotent(&b.theta), &res)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut used = vec![false; lb.len()];
    for b in &kb {
        if pg.generators().iter().any(|&x| b.theta.conjugate_by(x) != b.theta) {
            continue;
        }
        let br = brauer_hom(&reduce_elem(&central_idempotent(&b.theta), &res)?, pg)?;
        let j = lidem
            .iter()
            .position(|e| *e == br)
            .ok_or_else(|| Error::Verification("br_P(ē_θ) is not a block of L".into()))?;
        if used[j] {
            return Err(Error::Verification("Glauberman pairing is not injective".into()));
        }
        used[j] = true;
        out.push((b.theta.clone(), lb[j].theta.clone()));
    }
    if used.iter().any(|u| !u) {
        return Err(Error::Verification("Glauberman pairing is not surjective".into()));
    }
    Ok(out)
}

/// The GF(p^f) setup: ī = reduction of i, S₀ and traces from matrix units.
pub fn setup_modular(gs: &GlaubermanSetup) -> Result<Arc<MagicSetup<ModScalar>>> {
    let c = &gs.config;
    let i = reduce_elem(&product_idempotent(c)?, &gs.residue)?;
    Ok(Arc::new(MagicSetup::new(&c.k, &c.h, &c.l, i, c.n, None, None)?))
}

/// Dade P-algebra facts for S.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DadeReport {
    pub dim: usize,
    /// Size of the greedy P-stable basis containing the unit.
    pub stable_basis: usize,
    /// Number of P-fixed basis elements, i.e. dim S(P).
    pub brauer_quotient_dim: usize,
    pub dim_mod_p: u64,
}

impl DadeReport {
    pub fn passed(&self) -> bool {
        self.stable_basis == self.dim && self.brauer_quotient_dim == 1 && self.dim_mod_p == 1
    }
}

/// Greedy P-stable basis of S from P-orbits of the i·O·i, starting at i.
pub fn dade_check<R: Scalar>(setup: &MagicSetup<R>, pg: &Subgroup, p: u64) -> Result<DadeReport> {
    let ctx = setup.ctx();
    let mut cands = vec![setup.i.clone()];
    cands.extend(orbit_sums(&setup.k, &setup.l, &ctx).iter().map(|o| setup.i.mul(o).mul(&setup.i)));
    let mut rows: Vec<Vec<R>> = Vec::new();
    let mut fixed = 0;
    for s in cands {
        if s.is_zero() {
            continue;
        }
        let mut orbit: Vec<AlgebraElement<R>> = Vec::new();
        for &g in pg.elements() {
            let t = s.conj(g);
            if !orbit.contains(&t) {
                orbit.push(t);
            }
        }
        let mut trial = rows.clone();
        trial.extend(orbit.iter().map(|t| t.coeffs.clone()));
        if matches!(rref(trial.clone(), setup.i.g.order()), Ok(e) if e.rank() == trial.len()) {
            rows = trial;
            if orbit.len() == 1 {
                fixed += 1;
            }
        }
        if rows.len() == setup.s.dim() {
            break;
        }
    }
    let dim = setup.s.dim();
    Ok(DadeReport { dim, stable_basis: rows.len(), brauer_quotient_dim: fixed, dim_mod_p: dim as u64 % p })
}

/// A magic σ over GF(p^f) normalized by br_P(σ(h)) = f on C_G(P).
#[derive(Clone, Debug)]
pub struct GlaubermanRep {
    pub rep: MagicRep<ModScalar>,
    /// f = br_P(ī).
    pub f: AlgebraElement<ModScalar>,
    /// Scalars applied for the Brauer normalization.
    pub br_scaling: Vec<ModScalar>,
    pub dade: DadeReport,
}

fn scalar_multiple<R: Scalar>(x: &AlgebraElement<R>, f: &AlgebraElement<R>) -> Option<R> {
    let a = *f.support().first()?;
    let c = x.coeffs[a].div(&f.coeffs[a])?;
    (f.scale(&c) == *x).then_some(c)
}

/// Homomorphisms H/L → E* extending the given values on some cosets.
fn extend_character(cs: &CosetSpace, h: &Subgroup, given: &[Option<ModScalar>], field: &Arc<crate::scalar::FiniteRing>) -> Option<Vec<ModScalar>> {
    let units: Vec<ModScalar> = ModScalar::all(field).into_iter().filter(|x| !x.is_zero()).collect();
    let gens: Vec<usize> = h.generators().iter().map(|&x| cs.of(x)).collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(l) = generate_character(cs, &gens, &choice.iter().map(|&c| units[c].clone()).collect::<Vec<_>>(), field) {
            if given.iter().zip(&l).all(|(g, v)| g.as_ref().is_none_or(|g| g == v)) {
                return Some(l);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < units.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn generate_character(cs: &CosetSpace, gens: &[usize], vals: &[ModScalar], field: &Arc<crate::scalar::FiniteRing>) -> Option<Vec<ModScalar>> {
    let mut l: Vec<Option<ModScalar>> = vec![None; cs.len()];
    l[0] = Some(ModScalar::one(field));
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for (g, v) in gens.iter().zip(vals) {
            let y = cs.mul(x, *g);
            let val = l[x].as_ref().unwrap().mul(v);
            match &l[y] {
                None => {
                    l[y] = Some(val);
                    queue.push(y);
                }
                Some(w) if *w != val => return None,
                _ => {}
            }
        }
    }
    let l: Vec<ModScalar> = l.into_iter().collect::<Option<_>>()?;
    let ok = (0..cs.len()).all(|x| (0..cs.len()).all(|y| l[x].mul(&l[y]) == l[cs.mul(x, y)]));
    ok.then_some(l)
}

/// Crossed magic σ over GF(p^f), rescaled so that br_P(σ(h)) = f on C_G(P);
/// the Dade facts are recorded alongside.
pub fn magic_glauberman(gs: &GlaubermanSetup) -> Result<GlaubermanRep> {
    let setup = setup_modular(gs)?;
    let rep = if setup.is_crossed() {
        make_magic_crossed(&setup, SolverOptions::default())?
    } else {
        make_magic(&setup, SolverOptions::default())?
    };
    let f = brauer_hom(&setup.i, &gs.p_group)?;
    let cs = &setup.cosets;
    let g = &gs.config.g;
    let cg = gs.p_group.centralizer_in(g);
    if !cg.is_subgroup_of(&gs.config.h) {
        return Err(Error::Validation("C_G(P) ⊄ H".into()));
    }
    let mut given: Vec<Option<ModScalar>> = vec![None; cs.len()];
    for &c in cg.elements() {
        let x = cs.of(c);
        if given[x].is_some() {
            continue;
        }
        let br = brauer_hom(&rep.sigma[x], &gs.p_group)
            .map_err(|_| Error::Verification(format!("σ(h) not P-fixed for h = {}", g.group().element(c).to_cycles())))?;
        let v = scalar_multiple(&br, &f).and_then(|v| v.inv()).ok_or_else(|| {
            Error::Verification(format!("br_P(σ(h)) is not an invertible multiple of f for h = {}", g.group().element(c).to_cycles()))
        })?;
        given[x] = Some(v);
    }
    let scaling = extend_character(cs, &gs.config.h, &given, &gs.residue.field)
        .ok_or_else(|| Error::Verification("Brauer normalization does not extend to a character of H/L".into()))?;
    let rep = rep.rescale(&scaling, rep.status)?;
    rep.verify()?;
    check_brauer_normalized(&rep, gs, &f)?;
    let dade = dade_check(&setup, &gs.p_group, gs.p)?;
    Ok(GlaubermanRep { rep, f, br_scaling: scaling, dade })
}

/// br_P(σ(h)) = f for every h ∈ C_G(P).
pub fn check_brauer_normalized(rep: &MagicRep<ModScalar>, gs: &GlaubermanSetup, f: &AlgebraElement<ModScalar>) -> Result<()> {
    let g = gs.config.g.group();
    for &c in gs.p_group.centralizer_in(&gs.config.g).elements() {
        let x = rep.setup.cosets.of(c);
        if brauer_hom(&rep.sigma[x], &gs.p_group)? != *f {
            return Err(Error::Verification(format!("br_P(σ(h)) ≠ f for h = {}", g.element(c).to_cycles())));
        }
    }
    Ok(())
}

/// σ' = −σ off the trivial coset (or σ scaled by a non-identity unit when
/// −1 = 1): satisfies the conjugation property but not the normalization.
pub fn unnormalize(rep: &MagicRep<ModScalar>) -> Result<Option<MagicRep<ModScalar>>> {
    let ctx = rep.setup.ctx();
    let Some(u) = ModScalar::all(&ctx).into_iter().find(|x| !x.is_zero() && !x.is_one()) else {
        return Ok(None);
    };
    if rep.setup.cosets.len() == 1 {
        return Ok(None);
    }
    let c: Vec<ModScalar> = (0..rep.setup.cosets.len()).map(|x| if x == 0 { ModScalar::one(&ctx) } else { u.clone() }).collect();
    Ok(Some(rep.rescale(&c, Status::Projective)?))
}

fn alg_pow<R: Scalar>(x: &AlgebraElement<R>, mut e: u64, unit: &AlgebraElement<R>) -> AlgebraElement<R> {
    let mut acc = unit.clone();
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

/// Central primitive idempotents of GF(q)U·e (e central): the Frobenius
/// x ↦ x^q fixes exactly the span of the primitive idempotents of Z(GF(q)U)e,
/// which is then split by Lagrange idempotents 1 − (b − λ)^{q−1}.
pub fn block_idempotents(e: &AlgebraElement<ModScalar>, u: &Subgroup) -> Result<Vec<AlgebraElement<ModScalar>>> {
    let ctx = e.ctx();
    let q = ModScalar::all(&ctx).len() as u64;
    let elems: Vec<AlgebraElement<ModScalar>> = class_sums(u, &ctx).iter().map(|c| c.mul(e)).collect();
    let z = SubalgebraBasis::span(&elems, e)?;
    let d = z.dim();
    let mut rows: Vec<Vec<ModScalar>> = Vec::new();
    let frob: Vec<Vec<ModScalar>> = z
        .basis
        .iter()
        .map(|b| z.coords(&alg_pow(b, q, e)).ok_or_else(|| Error::Algebra("Frobenius leaves the centre".into())))
        .collect::<Result<_>>()?;
    for r in 0..d {
        rows.push(
            (0..d)
                .map(|c| {
                    let v = frob[c][r].clone();
                    if r == c {
                        v.sub(&ModScalar::one(&ctx))
                    } else {
                        v
                    }
                })
                .collect(),
        );
    }
    let ker = crate::linalg::kernel(rows, d, &ctx)?;
    let fixed: Vec<AlgebraElement<ModScalar>> = ker.iter().map(|c| z.element(c)).collect();
    let scalars = ModScalar::all(&ctx);
    let mut idems = vec![e.clone()];
    for b in &fixed {
        let mut next = Vec::new();
        for u0 in &idems {
            for lam in &scalars {
                let shifted = b.sub(&e.scale(lam));
                let part = e.sub(&alg_pow(&shifted, q - 1, e));
                let v = u0.mul(&part);
                if !v.is_zero() {
                    next.push(v);
                }
            }
        }
        idems = next;
    }
    for x in &idems {
        if !x.is_idempotent() || !x.commutes_with_group(u.generators()) {
            return Err(Error::Algebra("block splitting produced a non-central idempotent".into()));
        }
    }
    Ok(idems)
}

fn kappa_linear<R: Scalar>(rep: &MagicRep<R>, c: &AlgebraElement<R>) -> AlgebraElement<R> {
    let mut acc = AlgebraElement::zero(&c.g, &c.ctx());
    for h in c.support() {
        acc = acc.add(&rep.kappa(h).scale(&c.coeffs[h]));
    }
    acc
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BrauerPair {
    pub block_g: Vec<(usize, String)>,
    pub block_h: Vec<(usize, String)>,
    /// br_P(b) = c.
    pub brauer_ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockCheck {
    pub pairs: Vec<BrauerPair>,
    /// br_P(κ(h)) = h·f for every h ∈ C_G(P).
    pub generators_ok: bool,
    pub fullness_terms: Option<usize>,
    /// rank κ(H), dim GF(q)H·f, dim C_{iGF(q)Gi}(S).
    pub kappa_ranks: (usize, usize, usize),
    pub failures: Vec<String>,
}

impl BlockCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Pairs blocks b of GF(q)Ge with blocks c of GF(q)Hf via b·i = κ(c) and
/// checks br_P(b) = c, the generator identity br_P(κ(h)) = h·f, fullness of
/// i and the κ-isomorphism onto C_{iGF(q)Gi}(S) by ranks.
pub fn block_bijection_check(rep: &MagicRep<ModScalar>, gs: &GlaubermanSetup) -> Result<BlockCheck> {
    let c = &gs.config;
    let setup = &rep.setup;
    let i = &setup.i;
    let e = reduce_elem(&trace_idempotent(&c.theta, &c.field), &gs.residue)?;
    let f_h = reduce_elem(&trace_idempotent(&c.phi, &c.field), &gs.residue)?;
    let bg = block_idempotents(&e, &c.g)?;
    let bh = block_idempotents(&f_h, &c.h)?;
    let mut failures = Vec::new();
    if bg.len() != bh.len() {
        return Err(Error::Verification(format!("{} blocks over e but {} over f", bg.len(), bh.len())));
    }
    let mut pairs = Vec::new();
    let mut used = vec![false; bh.len()];
    for b in &bg {
        let bi = b.mul(i);
        let j = bh
            .iter()
            .position(|cb| kappa_linear(rep, cb) == bi)
            .filter(|&j| !used[j])
            .ok_or_else(|| Error::Verification("block pairing b·i = κ(c) is not bijective".into()))?;
        used[j] = true;
        let brauer_ok = brauer_hom(b, &gs.p_group)? == bh[j];
        if !brauer_ok {
            failures.push("br_P(b) ≠ c".to_string());
        }
        pairs.push(BrauerPair { block_g: b.coeff_strings(), block_h: bh[j].coeff_strings(), brauer_ok });
    }
    let f = brauer_hom(i, &gs.p_group)?;
    let ctx = setup.ctx();
    let mut generators_ok = true;
    for &h in gs.p_group.centralizer_in(&c.g).elements() {
        let lhs = brauer_hom(&rep.kappa(h), &gs.p_group);
        let rhs = AlgebraElement::basis(&i.g, h, &ctx).mul(&f);
        if lhs.as_ref().ok() != Some(&rhs) {
            generators_ok = false;
        }
    }
    if !generators_ok {
        failures.push("br_P(κ(h)) ≠ h·f on C_G(P)".to_string());
    }
    let fullness = full_idempotent_check(i, &e, &c.g)?;
    if fullness.is_none() {
        failures.push("no fullness certificate for i in GF(q)Ge".to_string());
    }
    let kap: Vec<Vec<ModScalar>> = c.h.elements().iter().map(|&h| rep.kappa(h).coeffs).collect();
    let hf: Vec<Vec<ModScalar>> =
        c.h.elements().iter().map(|&h| f_h.left_mul_group(h).coeffs).collect();
    let corner = corner_algebra(i, &c.g)?;
    let cent = centralizer_subalgebra(&corner, &setup.s.basis)?;
    let ranks = (rank(&kap)?, rank(&hf)?, cent.dim());
    if ranks.0 != ranks.1 || ranks.1 != ranks.2 {
        failures.push(format!("κ rank mismatch {:?}", ranks));
    }
    let all_in = c.h.elements().iter().all(|&h| cent.contains(&rep.kappa(h)));
    if !all_in {
        failures.push("κ(h) outside C_{iGi}(S)".to_string());
    }
    Ok(BlockCheck { pairs, generators_ok, fullness_terms: fullness.map(|t| t.len()), kappa_ranks: ranks, failures })
}

/// Coset-indexed Witt-vector map as strings of p-adic digits.
fn witt_strings(v: &[WittScalar]) -> Vec<String> {
    v.iter().map(|x| x.expansion()).collect()
}

/// Certificate of the iteration μ_{n+1}(x) = λ(x)^a μ_n(x)^{bp}.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LiftCertificate {
    pub p: u64,
    pub precision: u32,
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub lambda: Vec<String>,
    /// μ₁ … μ_N.
    pub iterates: Vec<Vec<String>>,
    pub mu: Vec<String>,
}

/// μ with ∂μ = α in W_N, given α ≡ 1, λ ≡ 1 mod p, p ∤ k and α^k = ∂λ.
pub fn lift_cocycle(
    alpha: &[Vec<WittScalar>],
    cs: &CosetSpace,
    k: i64,
    lambda: &[WittScalar],
) -> Result<(Vec<WittScalar>, LiftCertificate)> {
    let ring = alpha[0][0].ctx();
    let p = ring.p;
    let n_prec = ring.prec;
    let one = WittScalar::one(&ring);
    let bad = |s: &str| Err(Error::Validation(s.to_string()));
    if k.rem_euclid(p as i64) == 0 {
        return bad("p divides k");
    }
    if alpha.iter().flatten().any(|v| !v.congruent(&one, 1)) {
        return bad("α ≢ 1 mod p");
    }
    if lambda.iter().any(|v| !v.congruent(&one, 1)) {
        return bad("λ ≢ 1 mod p");
    }
    let dl = crate::magic::coboundary(lambda, cs);
    for x in 0..cs.len() {
        for y in 0..cs.len() {
            if alpha[x][y].powi(k).expect("unit") != dl[x][y] {
                return bad("α^k ≠ ∂λ");
            }
        }
    }
    let (_, a, b) = ext_gcd(k, p as i64);
    let mut mu = vec![one.clone(); cs.len()];
    let mut iterates = vec![mu.clone()];
    for step in 1..n_prec {
        let next: Vec<WittScalar> = mu
            .iter()
            .zip(lambda)
            .map(|(m, l)| l.powi(a).expect("unit").mul(&m.powi(b * p as i64).expect("unit")))
            .collect();
        if next.iter().zip(&mu).any(|(x, y)| !x.congruent(y, step)) {
            return Err(Error::Verification(format!("μ_{} ≢ μ_{} mod p^{}", step + 1, step, step)));
        }
        mu = next;
        iterates.push(mu.clone());
    }
    if crate::magic::coboundary(&mu, cs) != alpha {
        return Err(Error::Verification("∂μ ≠ α mod p^N".into()));
    }
    let cert = LiftCertificate {
        p,
        precision: n_prec,
        k,
        a,
        b,
        lambda: witt_strings(lambda),
        iterates: iterates.iter().map(|v| witt_strings(v)).collect(),
        mu: witt_strings(&mu),
    };
    Ok((mu, cert))
}

/// The W_N setup: î from the Witt map, traces θ(g)/φ(1).
pub fn setup_witt(gs: &GlaubermanSetup, prec: u32) -> Result<Arc<MagicSetup<WittScalar>>> {
    let c = &gs.config;
    let wm = gs.residue.witt(prec);
    let i = witt_elem(&product_idempotent(c)?, &wm)?;
    let d = WittScalar::from_int(&wm.ring, c.phi_degree());
    let dinv = d.inv().ok_or_else(|| Error::NotInvertible("φ(1) mod p".into()))?;
    let values: Vec<WittScalar> = (0..c.g.group().order())
        .map(|x| {
            if c.k.contains(x) {
                wm.reduce(c.theta.at(x)).map(|v| v.mul(&dinv))
            } else {
                Ok(WittScalar::zero(&wm.ring))
            }
        })
        .collect::<Result<_>>()?;
    Ok(Arc::new(MagicSetup::new(&c.k, &c.h, &c.l, i, c.n, Some(TraceModel::Character(values)), None)?))
}

#[derive(Clone, Debug)]
pub struct LiftedRep {
    pub rep: MagicRep<WittScalar>,
    pub certificate: LiftCertificate,
}

/// σ̂ over W_N with σ̂ ≡ σ mod p: Skolem–Noether over W_N, rescaled to reduce
/// to σ, then corrected by the trivializer of the 1 + pW discrepancy cocycle.
pub fn lift_magic(modular: &MagicRep<ModScalar>, gs: &GlaubermanSetup, prec: u32) -> Result<LiftedRep> {
    let setup = setup_witt(gs, prec)?;
    let p = gs.p;
    let n = setup.n as i64;
    let r = setup.cosets.len() as i64;
    if setup.cosets.reps != modular.setup.cosets.reps {
        return Err(Error::Algebra("coset spaces differ".into()));
    }
    let raw = projective_rep(&setup, SolverOptions::default())?;
    let field = &modular.setup.i.ctx();
    let mut c = Vec::new();
    for (x, s) in raw.sigma.iter().enumerate() {
        let red = reduce_witt_elem(s, field);
        let cb = scalar_multiple(&modular.sigma[x], &red)
            .ok_or_else(|| Error::Verification(format!("W_N solution on coset {x} does not reduce to a multiple of σ")))?;
        c.push(witt_lift(&cb, prec));
    }
    let lifted = raw.rescale(&c, Status::Projective)?;
    let (_, alpha) = extract_cocycle(&lifted)?;
    let alpha = alpha.ok_or_else(|| Error::Algebra("discrepancy cocycle not scalar".into()))?;
    let (k, lambda) = if r % p as i64 != 0 {
        let lambda: Vec<WittScalar> = alpha.iter().map(|row| row.iter().fold(WittScalar::one(&setup.ctx()), |a, v| a.mul(v))).collect();
        (r, lambda)
    } else if n % p as i64 != 0 {
        let nu = lifted.norms()?;
        let lambda: Vec<WittScalar> = nu
            .iter()
            .map(|v| v.teichmuller().inv().map(|t| v.mul(&t)).ok_or_else(|| Error::NotInvertible("ν".into())))
            .collect::<Result<_>>()?;
        (n, lambda)
    } else {
        return Err(Error::Validation("neither |H/L| nor n is prime to p".into()));
    };
    let (mu, certificate) = lift_cocycle(&alpha, &setup.cosets, k, &lambda)?;
    let mu_inv: Vec<WittScalar> = mu.iter().map(|m| m.inv().expect("unit")).collect();
    let status = if modular.status == Status::MagicCrossed { Status::MagicCrossed } else { Status::Magic };
    let mut rep = lifted.rescale(&mu_inv, status)?;
    rep.trivialization = format!("lift_cocycle k={k}");
    rep.verify()?;
    for (x, s) in rep.sigma.iter().enumerate() {
        if reduce_witt_elem(s, field) != modular.sigma[x] {
            return Err(Error::Verification(format!("σ̂ on coset {x} does not reduce to σ")));
        }
    }
    Ok(LiftedRep { rep, certificate })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IntegralReport {
    pub precision: u32,
    pub rank_image: usize,
    pub rank_source: usize,
    pub rank_corner: usize,
    pub multiplicative: bool,
    pub fullness_terms: Option<usize>,
    /// ρ̂ reduces to j̄·κ̄ coefficientwise.
    pub matches_modular: bool,
    pub failures: Vec<String>,
}

impl IntegralReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A primitive idempotent ĵ of Ŝ lifting a matrix unit Ē₁₁ of S̄, by
/// e ← 3e² − 2e³.
pub fn lift_idempotent(lifted: &MagicRep<WittScalar>, ebar: &AlgebraElement<ModScalar>) -> Result<AlgebraElement<WittScalar>> {
    let s = &lifted.setup.s;
    let ring = s.ctx();
    let field = ebar.ctx();
    let reduced: Vec<AlgebraElement<ModScalar>> = s.basis.iter().map(|b| reduce_witt_elem(b, &field)).collect();
    let a: Vec<Vec<ModScalar>> =
        (0..ebar.g.order()).map(|r| reduced.iter().map(|b| b.coeffs[r].clone()).collect()).collect();
    let coords = solve(&a, &ebar.coeffs, reduced.len(), &field)?
        .ok_or_else(|| Error::Algebra("Ē₁₁ outside the reduction of Ŝ".into()))?;
    let mut j = AlgebraElement::zero(&ebar.g, &ring);
    for (c, b) in coords.iter().zip(&s.basis) {
        j = j.add(&b.scale(&witt_lift(c, ring.prec)));
    }
    let three = WittScalar::from_int(&ring, 3);
    let two = WittScalar::from_int(&ring, 2);
    for _ in 0..=2 * ring.prec + 2 {
        if j.is_idempotent() {
            break;
        }
        let j2 = j.mul(&j);
        j = j2.scale(&three).sub(&j2.mul(&j).scale(&two));
    }
    if !j.is_idempotent() || reduce_witt_elem(&j, &field) != *ebar {
        return Err(Error::Algebra("idempotent lifting failed".into()));
    }
    Ok(j)
}

/// h ↦ ĵ·h·σ̂(Lh)⁻¹ checked multiplicative and onto ĵ(W_N G)ĵ by ranks, with
/// a fullness certificate for ĵ in (W_N G)ê.
pub fn integral_iso_check(lifted: &MagicRep<WittScalar>, modular: &MagicRep<ModScalar>, gs: &GlaubermanSetup) -> Result<IntegralReport> {
    let c = &gs.config;
    let setup = &lifted.setup;
    let ring = setup.ctx();
    let wm = gs.residue.witt(ring.prec);
    let ebar = match &modular.setup.trace {
        TraceModel::MatrixUnits(mu) => mu.e[0][0].clone(),
        TraceModel::Character(_) => modular.setup.i.clone(),
    };
    let j = lift_idempotent(lifted, &ebar)?;
    let mut failures = Vec::new();
    let hs = c.h.elements();
    let rho: Vec<AlgebraElement<WittScalar>> = hs.iter().map(|&h| j.mul(&lifted.kappa(h))).collect();
    let g = c.g.group();
    let mut multiplicative = true;
    for (a, &x) in hs.iter().enumerate() {
        for (b, &y) in hs.iter().enumerate() {
            let xy = hs.iter().position(|&z| z == g.mul(x, y)).expect("closed");
            if rho[a].mul(&rho[b]) != rho[xy] {
                multiplicative = false;
            }
        }
    }
    if !multiplicative {
        failures.push("h ↦ ĵκ̂(h) is not multiplicative".into());
    }
    if rho.iter().any(|r| r.mul(&j) != *r) {
        failures.push("ĵκ̂(h) outside ĵ(W G)ĵ".into());
    }
    let e_phi = witt_elem(&trace_idempotent(&c.phi, &c.field), &wm)?;
    let e_theta = witt_elem(&trace_idempotent(&c.theta, &c.field), &wm)?;
    let rk = |rows: Vec<Vec<WittScalar>>, what: &str, failures: &mut Vec<String>| match rank(&rows) {
        Ok(r) => r,
        Err(_) => {
            failures.push(format!("{what}: not free with unit pivots"));
            0
        }
    };
    let rank_image = rk(rho.iter().map(|r| r.coeffs.clone()).collect(), "image", &mut failures);
    let rank_source = rk(hs.iter().map(|&h| e_phi.left_mul_group(h).coeffs).collect(), "W H e_φ", &mut failures);
    let rank_corner = rk(
        c.g.elements().iter().map(|&x| j.mul(&AlgebraElement::basis(&j.g, x, &ring)).mul(&j).coeffs).collect(),
        "ĵ W G ĵ",
        &mut failures,
    );
    if rank_image != rank_source || rank_image != rank_corner || rank_image == 0 {
        failures.push(format!("rank mismatch: image {rank_image}, source {rank_source}, corner {rank_corner}"));
    }
    let fullness = full_idempotent_check(&j, &e_theta, &c.g).ok().flatten();
    if fullness.is_none() {
        failures.push("no fullness certificate for ĵ".into());
    }
    let field = ebar.ctx();
    let matches_modular = hs
        .iter()
        .zip(&rho)
        .all(|(&h, r)| reduce_witt_elem(r, &field) == ebar.mul(&modular.kappa(h)));
    if !matches_modular {
        failures.push("ρ̂ does not reduce to the GF(p^f) map".into());
    }
    Ok(IntegralReport {
        precision: ring.prec,
        rank_image,
        rank_source,
        rank_corner,
        multiplicative,
        fullness_terms: fullness.map(|t| t.len()),
        matches_modular,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::int_of;
    use crate::spec::{corpus, parse_elements, resolve};

    fn sl23_setup() -> GlaubermanSetup {
        let r = resolve(&corpus::sl23(Flavor::ModularGlauberman)).unwrap();
        let c = &r.config;
        glauberman_setup(&c.g, &c.k, r.defect_group.as_ref().unwrap(), 3, &c.theta, &c.field).unwrap()
    }

    #[test]
    fn q8_blocks_at_three() {
        let g = crate::group::GroupTable::from_cycle_strings(&corpus::Q8_GENS).unwrap();
        let blocks = defect_zero_blocks(&g.full(), 3).unwrap();
        assert_eq!(blocks.len(), 5);
        let two = blocks.iter().find(|b| int_of(b.theta.degree()) == 2).unwrap();
        let z = parse_elements(&g, &[corpus::SL23_Z.to_string()]).unwrap()[0];
        let mut expect = AlgebraElement::zero(&g, &two.residue.field);
        expect.coeffs[0] = ModScalar::from_int(&two.residue.field, 2);
        expect.coeffs[z] = ModScalar::from_int(&two.residue.field, -2);
        assert_eq!(two.e, expect);
    }

    #[test]
    fn c3_at_three_has_no_defect_zero_block() {
        let g = crate::group::GroupTable::from_cycle_strings(&["(1,2,3)"]).unwrap();
        assert!(defect_zero_blocks(&g.full(), 3).unwrap().is_empty());
    }

    #[test]
    fn sl23_setup_and_defect_group() {
        let gs = sl23_setup();
        assert_eq!(gs.config.h.order(), 6);
        assert_eq!(gs.config.l.order(), 2);
        assert_eq!(gs.config.n, 2);
        assert_eq!(gs.found_defect_group.order(), 3);
        let pairs = glauberman_pairing(&gs.config.k, &gs.p_group, 3).unwrap();
        assert_eq!(pairs.len(), 2);
    }

    #[test]
    fn sl23_glauberman_pipeline() {
        let gs = sl23_setup();
        let gr = magic_glauberman(&gs).unwrap();
        assert_eq!(gr.dade.dim, 4);
        assert!(gr.dade.passed(), "{:?}", gr.dade);
        let bc = block_bijection_check(&gr.rep, &gs).unwrap();
        assert!(bc.passed(), "{:?}", bc.failures);
        let bad = unnormalize(&gr.rep).unwrap().unwrap();
        let bc = block_bijection_check(&bad, &gs).unwrap();
        assert!(!bc.generators_ok);
        for prec in [1, 2, 4] {
            let lifted = lift_magic(&gr.rep, &gs, prec).unwrap();
            let t = parse_elements(gs.config.g.group(), &[corpus::SL23_T.to_string()]).unwrap()[0];
            let x = lifted.rep.setup.cosets.of(t);
            let s = &lifted.rep.sigma[x];
            assert_eq!(s.mul(s).mul(s), lifted.rep.setup.i);
            let rep = integral_iso_check(&lifted.rep, &gr.rep, &gs).unwrap();
            assert!(rep.passed(), "{:?}", rep);
            assert_eq!(rep.rank_image, 3);
        }
    }

    #[test]
    fn s3_glauberman_pipeline() {
        let r = resolve(&corpus::s3_glauberman()).unwrap();
        let c = &r.config;
        let gs = glauberman_setup(&c.g, &c.k, r.defect_group.as_ref().unwrap(), 2, &c.theta, &c.field).unwrap();
        assert_eq!(gs.config.n, 1);
        let gr = magic_glauberman(&gs).unwrap();
        assert!(gr.rep.sigma.iter().all(|s| *s == gr.rep.setup.i));
        assert!(gr.dade.passed());
        assert!(block_bijection_check(&gr.rep, &gs).unwrap().passed());
        let lifted = lift_magic(&gr.rep, &gs, 4).unwrap();
        assert!(lifted.rep.sigma.iter().all(|s| *s == lifted.rep.setup.i));
    }

    #[test]
    fn lift_cocycle_recovers_coboundary() {
        let t = crate::group::GroupTable::from_cycle_strings(&["(1,2)"]).unwrap();
        let cs = CosetSpace::new(&t.full(), &Subgroup::generated(&t, &[]));
        let ring = crate::scalar::FiniteRing::new(3, 4, vec![0, 1]);
        let c = vec![WittScalar::one(&ring), WittScalar::from_int(&ring, 4)];
        let alpha = crate::magic::coboundary(&c, &cs);
        let c2: Vec<WittScalar> = c.iter().map(|v| v.mul(v)).collect();
        let (mu, cert) = lift_cocycle(&alpha, &cs, 2, &c2).unwrap();
        assert_eq!(crate::magic::coboundary(&mu, &cs), alpha);
        assert_eq!(cert.iterates.len(), 4);
        let bad = vec![WittScalar::one(&ring), WittScalar::from_int(&ring, 2)];
        assert!(lift_cocycle(&alpha, &cs, 2, &bad).is_err());
    }
}
