//! The character correspondence ι(σ): materialization from a magic
//! representation, exhaustive verification of its properties, central
//! correspondents, composition along a tower and Galois twists.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{central_idempotent, AlgebraElement};
use crate::characters::{
    above, character_table, field_of_values, induce, inner_product, int_of, restrict, CharacterTable, ClassFunction,
};
use crate::config::{Configuration, Flavor};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::magic::{MagicRep, MagicSetup, SolverOptions, Status, TraceModel};
use crate::scalar::{subgroup_closure, CycloScalar, GaloisElement, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    NotApplicable,
    OutOfScope,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub status: VerdictStatus,
    pub detail: String,
}

impl Verdict {
    fn new(id: &str, failures: Vec<String>, checked: usize) -> Self {
        match failures.into_iter().next() {
            None => Verdict { id: id.into(), status: VerdictStatus::Pass, detail: format!("{checked} checks") },
            Some(w) => Verdict { id: id.into(), status: VerdictStatus::Fail, detail: w },
        }
    }

    fn with(id: &str, status: VerdictStatus, detail: &str) -> Self {
        Verdict { id: id.into(), status, detail: detail.into() }
    }

    pub fn passed(&self) -> bool {
        self.status != VerdictStatus::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BijectionEntry {
    /// Index in the deterministic order of Irr(U).
    pub chi: usize,
    pub degree: i64,
    /// Index in Irr(U ∩ H), when χ^ι is irreducible.
    pub image: Option<usize>,
    pub image_degree: Option<i64>,
    pub image_values: Vec<String>,
    /// [F(χ) : F]
    pub field_degree: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BijectionTable {
    pub u_order: usize,
    pub v_order: usize,
    pub entries: Vec<BijectionEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub s0: String,
    pub psi: Vec<String>,
    pub tables: Vec<BijectionTable>,
    pub verdicts: Vec<Verdict>,
}

impl CorrespondenceReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }
}

/// χ^ι(v) = χ(s₀σ(Lv)⁻¹v) on the class representatives of V = U ∩ H.
pub fn iota_with(rep: &MagicRep<CycloScalar>, s0: &AlgebraElement<CycloScalar>, chi: &ClassFunction, v: &Arc<Subgroup>) -> ClassFunction {
    let m = chi.values[0].conductor().max(s0.ctx());
    ClassFunction::from_fn(v, |x| {
        let a = s0.mul(&rep.sigma_inv[rep.setup.cosets.of(x)]).right_mul_group(x);
        a.support()
            .into_iter()
            .fold(CycloScalar::zero_in(m), |acc, g| acc.add(&a.coeffs[g].mul(chi.at(g))))
    })
}

/// s₀ = i/n.
pub fn default_s0(setup: &MagicSetup<CycloScalar>) -> AlgebraElement<CycloScalar> {
    let ctx = setup.ctx();
    setup.i.scale(&CycloScalar::from_int_in(ctx, setup.n as i64).inv().expect("n ≠ 0"))
}

/// Another trace-one element of S₀, when dim S₀ > 1.
pub fn second_s0(setup: &MagicSetup<CycloScalar>) -> Option<AlgebraElement<CycloScalar>> {
    let s0 = default_s0(setup);
    setup.s0.basis.iter().find_map(|b| {
        let t = setup.trace.trace(b);
        let d = b.sub(&s0.scale(&t));
        (!d.is_zero()).then(|| s0.add(&d))
    })
}

pub fn iota_apply(rep: &MagicRep<CycloScalar>, chi: &ClassFunction, v: &Arc<Subgroup>) -> ClassFunction {
    iota_with(rep, &default_s0(&rep.setup), chi, v)
}

/// The pairs (U, U ∩ H) with U = KV for L ≤ V ≤ H, U increasing.
pub fn intermediate_subgroups(c: &Configuration) -> Vec<(Arc<Subgroup>, Arc<Subgroup>)> {
    let mut out: Vec<(Arc<Subgroup>, Arc<Subgroup>)> = Vec::new();
    for v in c.h.all_subgroups() {
        if !c.l.is_subgroup_of(&v) {
            continue;
        }
        let u = c.k.join(&v);
        if out.iter().any(|(x, _)| **x == *u) {
            continue;
        }
        out.push((u, v));
    }
    out.sort_by_key(|(u, _)| u.order());
    out
}

/// ψ on V and, through U/K ≅ V/L, on U.
fn psi_on(rep: &MagicRep<CycloScalar>, v: &Arc<Subgroup>) -> ClassFunction {
    ClassFunction::from_fn(v, |x| rep.psi_of(x))
}

fn psi_on_u(rep: &MagicRep<CycloScalar>, k: &Subgroup, u: &Arc<Subgroup>, v: &Subgroup) -> ClassFunction {
    let g = u.group();
    ClassFunction::from_fn(u, |x| {
        let h = v.elements().iter().copied().find(|&y| k.contains(g.mul(x, g.inv(y)))).expect("U = KV");
        rep.psi_of(h)
    })
}

struct Level {
    u: Arc<Subgroup>,
    v: Arc<Subgroup>,
    tu: CharacterTable,
    tv: CharacterTable,
    above_u: Vec<usize>,
    above_v: Vec<usize>,
    images: Vec<ClassFunction>,
}

/// Property identifiers accepted by `skip`.
pub const PROPERTIES: [&str; 12] =
    ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "s0"];

/// Materializes ι on the intermediate lattice and checks every property.
pub fn verify_theorem(rep: &MagicRep<CycloScalar>, c: &Configuration, skip: &[String]) -> Result<CorrespondenceReport> {
    let setup = &rep.setup;
    let s0 = default_s0(setup);
    let mut levels = Vec::new();
    for (u, v) in intermediate_subgroups(c) {
        let tu = character_table(&u)?;
        let tv = character_table(&v)?;
        let above_u = tu.above(&c.theta);
        let above_v = tv.above(&c.phi);
        let images = above_u.iter().map(|&j| iota_with(rep, &s0, &tu.irr[j], &v)).collect();
        levels.push(Level { u, v, tu, tv, above_u, above_v, images });
    }
    let skipped = |id: &str| skip.iter().any(|s| s == id);
    let mut verdicts = Vec::new();
    let run = |id: &str, f: &mut dyn FnMut() -> (Vec<String>, usize)| {
        if skipped(id) {
            Verdict::with(id, VerdictStatus::Skipped, "skipped by request")
        } else {
            let (fails, n) = f();
            Verdict::new(id, fails, n)
        }
    };
    let fmt = |f: &ClassFunction| f.value_strings().join(",");

    verdicts.push(run("i", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for lv in &levels {
            let mut hit = Vec::new();
            for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                n += 1;
                match lv.tv.find(img) {
                    Some(t) if lv.above_v.contains(&t) => hit.push(t),
                    _ => fails.push(format!("|U| = {}: χ_{j}^ι = [{}] is not in Irr(U∩H|φ)", lv.u.order(), fmt(img))),
                }
            }
            hit.sort();
            hit.dedup();
            if hit.len() != lv.above_v.len() || lv.above_u.len() != lv.above_v.len() {
                fails.push(format!(
                    "|U| = {}: ι is not a bijection ({} characters above θ, {} above φ, {} distinct images)",
                    lv.u.order(),
                    lv.above_u.len(),
                    lv.above_v.len(),
                    hit.len()
                ));
            }
        }
        (fails, n)
    }));
    verdicts.push(run("ii", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for lv in &levels {
            for (a, &ja) in lv.above_u.iter().enumerate() {
                for (b, &jb) in lv.above_u.iter().enumerate() {
                    n += 1;
                    let lhs = inner_product(&lv.images[a], &lv.images[b]);
                    let rhs = inner_product(&lv.tu.irr[ja], &lv.tu.irr[jb]);
                    if lhs != rhs {
                        fails.push(format!("|U| = {}: (χ_{ja}^ι, χ_{jb}^ι) = {lhs} ≠ {rhs}", lv.u.order()));
                    }
                }
            }
        }
        (fails, n)
    }));
    verdicts.push(run("iii", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        let (t1, p1) = (c.theta.degree().clone(), c.phi.degree().clone());
        for lv in &levels {
            for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                n += 1;
                let chi = &lv.tu.irr[j];
                if chi.degree().mul(&p1) != img.degree().mul(&t1) {
                    fails.push(format!("|U| = {}: χ_{j}(1)/θ(1) ≠ χ^ι(1)/φ(1)", lv.u.order()));
                }
            }
        }
        (fails, n)
    }));
    verdicts.push(run("iv", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for (a, lo) in levels.iter().enumerate() {
            for hi in &levels[a + 1..] {
                if !lo.u.is_subgroup_of(&hi.u) {
                    continue;
                }
                for (img, &j) in hi.images.iter().zip(&hi.above_u) {
                    n += 1;
                    let lhs = iota_with(rep, &s0, &restrict(&hi.tu.irr[j], &lo.u), &lo.v);
                    let rhs = restrict(img, &lo.v);
                    if lhs != rhs {
                        fails.push(format!("({}→{}) χ_{j}: [{}] ≠ [{}]", hi.u.order(), lo.u.order(), fmt(&lhs), fmt(&rhs)));
                    }
                }
            }
        }
        (fails, n)
    }));
    verdicts.push(run("v", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for (a, lo) in levels.iter().enumerate() {
            for hi in &levels[a + 1..] {
                if !lo.u.is_subgroup_of(&hi.u) {
                    continue;
                }
                for (img, &j) in lo.images.iter().zip(&lo.above_u) {
                    n += 1;
                    let lhs = iota_with(rep, &s0, &induce(&lo.tu.irr[j], &hi.u), &hi.v);
                    let rhs = induce(img, &hi.v);
                    if lhs != rhs {
                        fails.push(format!("({}→{}) τ_{j}: [{}] ≠ [{}]", lo.u.order(), hi.u.order(), fmt(&lhs), fmt(&rhs)));
                    }
                }
            }
        }
        (fails, n)
    }));
    verdicts.push(run("vi", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for lv in &levels {
            for &h in c.h.elements() {
                if !lv.u.is_normalized_by(h) {
                    continue;
                }
                for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                    n += 1;
                    let lhs = img.conjugate_by(h);
                    let rhs = iota_with(rep, &s0, &lv.tu.irr[j].conjugate_by(h), &lv.v);
                    if lhs != rhs {
                        fails.push(format!("|U| = {}, h = {}: χ_{j}", lv.u.order(), c.g.group().element(h).to_cycles()));
                    }
                }
            }
        }
        (fails, n)
    }));
    verdicts.push(run("vii", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for lv in &levels {
            for b in lv.tu.over_quotient(&c.k) {
                let beta = &lv.tu.irr[b];
                for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                    n += 1;
                    let lhs = iota_with(rep, &s0, &beta.mul(&lv.tu.irr[j]), &lv.v);
                    let rhs = restrict(beta, &lv.v).mul(img);
                    if lhs != rhs {
                        fails.push(format!("|U| = {}: β_{b}·χ_{j}", lv.u.order()));
                    }
                }
            }
        }
        (fails, n)
    }));
    let gal = galois_generators(c);
    verdicts.push(run("viii", &mut || {
        let mut fails = Vec::new();
        let mut n = 0;
        for lv in &levels {
            for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                let chi = &lv.tu.irr[j];
                for a in &gal {
                    n += 1;
                    let lhs = iota_with(rep, &s0, &chi.galois(a), &lv.v);
                    if lhs != img.galois(a) {
                        fails.push(format!("|U| = {}: χ_{j} under ζ ↦ ζ^{}", lv.u.order(), a.k));
                    }
                }
                n += 1;
                if field_of_values(chi, &c.field).group != field_of_values(img, &c.field).group {
                    fails.push(format!("|U| = {}: F(χ_{j}) ≠ F(χ_{j}^ι)", lv.u.order()));
                }
            }
        }
        (fails, n)
    }));
    verdicts.push(Verdict::with("ix", VerdictStatus::OutOfScope, "Brauer-class identity not implemented"));
    let invariant = c.flavor == Flavor::Invariant;
    if invariant {
        verdicts.push(run("x", &mut || {
            let mut fails = Vec::new();
            let mut n = 0;
            for lv in &levels {
                let psi = psi_on(rep, &lv.v);
                for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                    n += 1;
                    match above(&restrict(&lv.tu.irr[j], &lv.v), &c.phi, &lv.tv) {
                        Ok(lhs) => {
                            let rhs = psi.mul(img);
                            if lhs != rhs {
                                fails.push(format!("|U| = {}: χ_{j}: [{}] ≠ ψ·χ^ι = [{}]", lv.u.order(), fmt(&lhs), fmt(&rhs)));
                            }
                        }
                        Err(e) => fails.push(e.to_string()),
                    }
                }
            }
            (fails, n)
        }));
        verdicts.push(run("xi", &mut || {
            let mut fails = Vec::new();
            let mut n = 0;
            for lv in &levels {
                let psi_bar = psi_on_u(rep, &c.k, &lv.u, &lv.v).conj();
                for &t in &lv.above_v {
                    n += 1;
                    let xi = &lv.tv.irr[t];
                    let Some(pos) = lv.images.iter().position(|img| img == xi) else {
                        fails.push(format!("|U| = {}: ξ_{t} has no preimage", lv.u.order()));
                        continue;
                    };
                    let pre = &lv.tu.irr[lv.above_u[pos]];
                    match above(&induce(xi, &lv.u), &c.theta, &lv.tu) {
                        Ok(lhs) => {
                            if lhs != psi_bar.mul(pre) {
                                fails.push(format!("|U| = {}: ξ_{t}", lv.u.order()));
                            }
                        }
                        Err(e) => fails.push(e.to_string()),
                    }
                }
            }
            (fails, n)
        }));
    } else {
        verdicts.push(Verdict::with("x", VerdictStatus::NotApplicable, "semi-invariant configuration"));
        verdicts.push(Verdict::with("xi", VerdictStatus::NotApplicable, "semi-invariant configuration"));
    }
    verdicts.push(run("s0", &mut || match second_s0(setup) {
        None => (vec![], 0),
        Some(t0) => {
            let mut fails = Vec::new();
            let mut n = 0;
            for lv in &levels {
                for (img, &j) in lv.images.iter().zip(&lv.above_u) {
                    n += 1;
                    if iota_with(rep, &t0, &lv.tu.irr[j], &lv.v) != *img {
                        fails.push(format!("|U| = {}: χ_{j} depends on s₀", lv.u.order()));
                    }
                }
            }
            (fails, n)
        }
    }));

    let tables = levels
        .iter()
        .map(|lv| BijectionTable {
            u_order: lv.u.order(),
            v_order: lv.v.order(),
            entries: lv
                .images
                .iter()
                .zip(&lv.above_u)
                .map(|(img, &j)| {
                    let image = lv.tv.find(img);
                    BijectionEntry {
                        chi: j,
                        degree: int_of(lv.tu.irr[j].degree()),
                        image,
                        image_degree: image.map(|t| int_of(lv.tv.irr[t].degree())),
                        image_values: img.value_strings(),
                        field_degree: field_of_values(&lv.tu.irr[j], &c.field).degree(),
                    }
                })
                .collect(),
        })
        .collect();
    Ok(CorrespondenceReport {
        s0: "i/n".into(),
        psi: rep.psi().iter().map(|v| v.to_string()).collect(),
        tables,
        verdicts,
    })
}

/// A generating set of Gal(ℚ(ζ_M)/F).
pub fn galois_generators(c: &Configuration) -> Vec<GaloisElement> {
    let m = c.field.m;
    let mut gens: Vec<u64> = Vec::new();
    for &k in &c.field.group {
        if !subgroup_closure(m, &gens).contains(&k) {
            gens.push(k);
        }
    }
    gens.into_iter().map(|k| GaloisElement::new(m, k as i64)).collect()
}

/// ι on Irr(G|θ) as index pairs into the tables of G and H.
pub fn iota_table(rep: &MagicRep<CycloScalar>, c: &Configuration) -> Result<Vec<(usize, Option<usize>)>> {
    let tg = character_table(&c.g)?;
    let th = character_table(&c.h)?;
    Ok(tg
        .above(&c.theta)
        .into_iter()
        .map(|j| (j, th.find(&iota_apply(rep, &tg.irr[j], &c.h))))
        .collect())
}

/// For n = 1: χ ↦ (χ_H)_φ, computed from inner products only.
pub fn oracle_table(c: &Configuration) -> Result<Vec<(usize, Option<usize>)>> {
    let tg = character_table(&c.g)?;
    let th = character_table(&c.h)?;
    tg.above(&c.theta)
        .into_iter()
        .map(|j| {
            let part = above(&restrict(&tg.irr[j], &c.h), &c.phi, &th)?;
            Ok((j, th.find(&part)))
        })
        .collect()
}

/// σ multiplied by `factor` on one non-trivial coset.
pub fn corrupt(rep: &MagicRep<CycloScalar>, coset: usize, factor: i64) -> Result<MagicRep<CycloScalar>> {
    let ctx = rep.setup.ctx();
    let mut c = vec![CycloScalar::from_int_in(ctx, 1); rep.sigma.len()];
    c[coset] = CycloScalar::from_int_in(ctx, factor);
    rep.rescale(&c, Status::Projective)
}

/// Pairs χ ∈ Irr(KC|θ) with the unique ξ ∈ Irr(C|φ) below it, for
/// L ≤ C ≤ C_H(S); the multiplicity is n in every case.
pub fn central_correspondent(setup: &MagicSetup<CycloScalar>, c: &Configuration, cgroup: &Arc<Subgroup>) -> Result<Vec<(usize, usize)>> {
    if !c.l.is_subgroup_of(cgroup) || !cgroup.is_subgroup_of(&c.h) {
        return Err(Error::Validation("need L ≤ C ≤ H".into()));
    }
    for &x in cgroup.generators() {
        if setup.s.basis.iter().any(|b| b.conj(x) != *b) {
            return Err(Error::Validation("C does not centralize S".into()));
        }
    }
    let kc = c.k.join(cgroup);
    let tkc = character_table(&kc)?;
    let tc = character_table(cgroup)?;
    let n = CycloScalar::from_int_in(1, c.n as i64);
    let mut pairs = Vec::new();
    let mut used = Vec::new();
    for j in tkc.above(&c.theta) {
        let res = restrict(&tkc.irr[j], cgroup);
        let hits: Vec<usize> = tc
            .above(&c.phi)
            .into_iter()
            .filter(|&t| !inner_product(&res, &tc.irr[t]).is_zero())
            .collect();
        if hits.len() != 1 || inner_product(&res, &tc.irr[hits[0]]) != n {
            return Err(Error::Algebra(format!("central correspondent of χ_{j} is not unique with multiplicity n")));
        }
        used.push(hits[0]);
        pairs.push((j, hits[0]));
    }
    used.sort();
    used.dedup();
    if used.len() != tc.above(&c.phi).len() || used.len() != pairs.len() {
        return Err(Error::Algebra("central correspondence is not a bijection".into()));
    }
    Ok(pairs)
}

/// The magic representation of the outer configuration built from σ₁ on
/// (G, U, K, N, θ, η) and σ₂ on (U, H, N, L, η, φ): σ(h)j = σ₁(h)σ₂(h)
/// with j = e_θe_ηe_φ. Also returns whether ι(σ) = ι(σ₁)∘ι(σ₂) on every
/// irreducible of G above θ.
pub fn compose(
    rep1: &MagicRep<CycloScalar>,
    c1: &Configuration,
    rep2: &MagicRep<CycloScalar>,
    c2: &Configuration,
    outer: &Arc<MagicSetup<CycloScalar>>,
    c: &Configuration,
) -> Result<(MagicRep<CycloScalar>, Vec<String>)> {
    if c1.flavor != Flavor::Invariant || c2.flavor != Flavor::Invariant {
        return Err(Error::Validation("composition hypothesis unverified".into()));
    }
    if *c1.h != *c2.g || *c1.l != *c2.k || c1.phi != c2.theta || *c2.h != *c.h || *c1.k != *c.k {
        return Err(Error::Validation("configurations do not stack".into()));
    }
    let j = central_idempotent(&c1.theta).mul(&central_idempotent(&c1.phi)).mul(&central_idempotent(&c2.phi));
    let raw = crate::magic::projective_rep(outer, SolverOptions::default())?;
    let mut scalars = Vec::with_capacity(raw.sigma.len());
    for (x, &h) in outer.cosets.reps.iter().enumerate() {
        let tau = rep1.sigma[rep1.setup.cosets.of(h)].mul(&rep2.sigma[rep2.setup.cosets.of(h)]);
        let sj = raw.sigma[x].mul(&j);
        let a = tau
            .support()
            .first()
            .copied()
            .ok_or_else(|| Error::Algebra("σ₁(h)σ₂(h) = 0".into()))?;
        let ratio = tau.coeffs[a].div(&sj.coeffs[a]).ok_or_else(|| Error::Algebra("σ(h)j and σ₁σ₂ have different support".into()))?;
        if sj.scale(&ratio) != tau {
            return Err(Error::Algebra(format!("σ(h)j is not proportional to σ₁(h)σ₂(h) on coset {x}")));
        }
        scalars.push(ratio);
    }
    let mut rep = raw.rescale(&scalars, Status::Magic)?;
    rep.trivialization = "composition".into();
    rep.verify()?;
    let tg = character_table(&c.g)?;
    let tu = character_table(&c1.h)?;
    let mut fails = Vec::new();
    for idx in tg.above(&c.theta) {
        let chi = &tg.irr[idx];
        let direct = iota_apply(&rep, chi, &c.h);
        let mid = iota_apply(rep1, chi, &c1.h);
        let stepwise = iota_apply(rep2, &mid, &c2.h);
        if direct != stepwise {
            fails.push(format!("χ_{idx}: ι(σ) = [{}] ≠ ι(σ₂)ι(σ₁) = [{}]", direct.value_strings().join(","), stepwise.value_strings().join(",")));
        }
        if tu.find(&mid).is_none() {
            fails.push(format!("χ_{idx}: ι(σ₁)χ is not irreducible"));
        }
    }
    Ok((rep, fails))
}

/// σ^α(h) = σ(h)^α on the twisted configuration (θ^α, φ^α), with
/// (χ^α)^{ι(σ^α)} = (χ^{ι(σ)})^α checked on Irr(G|θ).
pub fn galois_twist(rep: &MagicRep<CycloScalar>, c: &Configuration, a: &GaloisElement) -> Result<(MagicRep<CycloScalar>, Configuration)> {
    if !c.field.group.contains(&a.k) && c.field.m > 1 {
        return Err(Error::Validation("α does not fix F".into()));
    }
    let mut tc = c.clone();
    tc.theta = c.theta.galois(a);
    tc.phi = c.phi.galois(a);
    let setup = &rep.setup;
    let i = setup.i.galois(a);
    let trace = match &setup.trace {
        TraceModel::Character(v) => Some(TraceModel::Character(v.iter().map(|x| a.apply(x)).collect())),
        TraceModel::MatrixUnits(_) => None,
    };
    let s0 = (setup.s0.dim() != setup.s.dim()).then(|| setup.s0.basis.iter().map(|b| b.galois(a)).collect());
    let twisted = Arc::new(MagicSetup::new(&setup.k, &setup.h, &setup.l, i, setup.n, trace, s0)?);
    let sigma = rep.sigma.iter().map(|s| s.galois(a)).collect();
    let out = MagicRep::from_sigma(&twisted, sigma, rep.status)?;
    out.verify()?;
    let tg = character_table(&c.g)?;
    for j in tg.above(&c.theta) {
        let chi = &tg.irr[j];
        let lhs = iota_apply(&out, &chi.galois(a), &c.h);
        let rhs = iota_apply(rep, chi, &c.h).galois(a);
        if lhs != rhs {
            return Err(Error::Verification(format!("(χ_{j}^α)^ι(σ^α) ≠ (χ_{j}^ι(σ))^α")));
        }
    }
    Ok((out, tc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic::{make_magic, make_magic_crossed, setup_char0};
    use crate::spec::{corpus, resolve};

    #[test]
    fn sl23_all_properties() {
        let r = resolve(&corpus::sl23(Flavor::Invariant)).unwrap();
        let setup = setup_char0(&r.config).unwrap();
        let rep = make_magic(&setup, SolverOptions::default()).unwrap();
        let report = verify_theorem(&rep, &r.config, &[]).unwrap();
        for v in &report.verdicts {
            assert!(v.passed(), "{v:?}");
        }
        let top = report.tables.last().unwrap();
        assert_eq!(top.entries.len(), 3);
        assert!(top.entries.iter().all(|e| e.image_degree == Some(1) && e.degree == 2));
    }

    #[test]
    fn corrupted_sigma_is_caught() {
        let r = resolve(&corpus::sl23(Flavor::Invariant)).unwrap();
        let setup = setup_char0(&r.config).unwrap();
        let rep = make_magic(&setup, SolverOptions::default()).unwrap();
        let bad = corrupt(&rep, 1, 2).unwrap();
        let report = verify_theorem(&bad, &r.config, &[]).unwrap();
        assert_eq!(report.verdict("i").unwrap().status, VerdictStatus::Fail);
    }

    #[test]
    fn n1_matches_oracle() {
        for spec in [corpus::s3_trivial(), corpus::a4_trivial(), corpus::s4_d8()] {
            let r = resolve(&spec).unwrap();
            let setup = setup_char0(&r.config).unwrap();
            let rep = make_magic(&setup, SolverOptions::default()).unwrap();
            assert_eq!(iota_table(&rep, &r.config).unwrap(), oracle_table(&r.config).unwrap());
        }
    }

    #[test]
    fn semi_invariant_report() {
        let r = resolve(&corpus::s3_semi()).unwrap();
        let setup = setup_char0(&r.config).unwrap();
        let rep = make_magic_crossed(&setup, SolverOptions::default()).unwrap();
        let report = verify_theorem(&rep, &r.config, &[]).unwrap();
        assert!(report.all_pass(), "{:?}", report.verdicts);
        assert_eq!(report.verdict("x").unwrap().status, VerdictStatus::NotApplicable);
    }

    #[test]
    fn central_correspondent_q8() {
        let r = resolve(&corpus::sl23(Flavor::Invariant)).unwrap();
        let setup = setup_char0(&r.config).unwrap();
        let pairs = central_correspondent(&setup, &r.config, &r.config.l).unwrap();
        assert_eq!(pairs.len(), 1);
    }

    #[test]
    fn conjugation_twist_on_sl23() {
        let r = resolve(&corpus::sl23(Flavor::Invariant)).unwrap();
        let setup = setup_char0(&r.config).unwrap();
        let rep = make_magic(&setup, SolverOptions::default()).unwrap();
        let m = r.config.conductor();
        galois_twist(&rep, &r.config, &GaloisElement::new(m, -1)).unwrap();
        galois_twist(&rep, &r.config, &GaloisElement::identity(m)).unwrap();
    }

    #[test]
    fn tower_composition() {
        let (outer, s1, s2) = corpus::tower();
        let table = crate::spec::group_of(&outer).unwrap();
        let c = crate::spec::resolve_in(&table, &outer).unwrap().config;
        let c1 = crate::spec::resolve_in(&table, &s1).unwrap().config;
        let c2 = crate::spec::resolve_in(&table, &s2).unwrap().config;
        assert_eq!((c.n, c1.n, c2.n), (2, 2, 1));
        let r1 = crate::magic::make_magic_cyclo(&setup_char0(&c1).unwrap(), SolverOptions::default()).unwrap();
        let r2 = crate::magic::make_magic_cyclo(&setup_char0(&c2).unwrap(), SolverOptions::default()).unwrap();
        let outer_setup = setup_char0(&c).unwrap();
        let (rep, fails) = compose(&r1, &c1, &r2, &c2, &outer_setup, &c).unwrap();
        assert!(fails.is_empty(), "{fails:?}");
        assert_eq!(rep.status, Status::Magic);
    }
}
