//! Exact linear algebra inside R[G]: elements, central and trace
//! idempotents, subalgebras with structure constants, centralizers,
//! reduced traces and fullness certificates.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::characters::{galois_group_over, ClassFunction};
use crate::config::{Configuration, Flavor};
use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::linalg::{rref, Echelon};
use crate::scalar::{CycloScalar, FixedField, GaloisElement, ModScalar, ResidueMap, Scalar};

/// Element of R[G], stored as a coefficient vector indexed by the parent
/// table (zero coefficients are skipped in products and printing).
#[derive(Clone)]
pub struct AlgebraElement<R: Scalar> {
    pub g: Arc<GroupTable>,
    pub coeffs: Vec<R>,
}

impl<R: Scalar> PartialEq for AlgebraElement<R> {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

impl<R: Scalar> fmt::Debug for AlgebraElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<R: Scalar> fmt::Display for AlgebraElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.support().into_iter().map(|x| format!("({}) * g{}", self.coeffs[x], x)).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<R: Scalar> AlgebraElement<R> {
    pub fn zero(g: &Arc<GroupTable>, ctx: &R::Ctx) -> Self {
        AlgebraElement { g: g.clone(), coeffs: vec![R::zero(ctx); g.order()] }
    }

    pub fn one(g: &Arc<GroupTable>, ctx: &R::Ctx) -> Self {
        Self::basis(g, 0, ctx)
    }

    /// The group element x as an algebra element.
    pub fn basis(g: &Arc<GroupTable>, x: usize, ctx: &R::Ctx) -> Self {
        let mut a = Self::zero(g, ctx);
        a.coeffs[x] = R::one(ctx);
        a
    }

    pub fn ctx(&self) -> R::Ctx {
        self.coeffs[0].ctx()
    }

    /// Sum of the elements of a subset (e.g. a subgroup or class).
    pub fn sum_of(g: &Arc<GroupTable>, elems: &[usize], ctx: &R::Ctx) -> Self {
        let mut a = Self::zero(g, ctx);
        for &x in elems {
            a.coeffs[x] = a.coeffs[x].add(&R::one(ctx));
        }
        a
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&x| !self.coeffs[x].is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        AlgebraElement { g: self.g.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        AlgebraElement { g: self.g.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { g: self.g.clone(), coeffs: self.coeffs.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        AlgebraElement { g: self.g.clone(), coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let ctx = self.ctx();
        let mut out = vec![R::zero(&ctx); self.coeffs.len()];
        let sa = self.support();
        let sb = o.support();
        for &x in &sa {
            for &y in &sb {
                let z = self.g.mul(x, y);
                out[z] = out[z].add(&self.coeffs[x].mul(&o.coeffs[y]));
            }
        }
        AlgebraElement { g: self.g.clone(), coeffs: out }
    }

    /// a^h = h⁻¹ a h.
    pub fn conj(&self, h: usize) -> Self {
        let ctx = self.ctx();
        let mut out = vec![R::zero(&ctx); self.coeffs.len()];
        for x in self.support() {
            out[self.g.conj(x, h)] = self.coeffs[x].clone();
        }
        AlgebraElement { g: self.g.clone(), coeffs: out }
    }

    /// Left multiplication by the group element h.
    pub fn left_mul_group(&self, h: usize) -> Self {
        let ctx = self.ctx();
        let mut out = vec![R::zero(&ctx); self.coeffs.len()];
        for x in self.support() {
            out[self.g.mul(h, x)] = self.coeffs[x].clone();
        }
        AlgebraElement { g: self.g.clone(), coeffs: out }
    }

    /// Right multiplication by the group element h.
    pub fn right_mul_group(&self, h: usize) -> Self {
        let ctx = self.ctx();
        let mut out = vec![R::zero(&ctx); self.coeffs.len()];
        for x in self.support() {
            out[self.g.mul(x, h)] = self.coeffs[x].clone();
        }
        AlgebraElement { g: self.g.clone(), coeffs: out }
    }

    pub fn map<S: Scalar>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> Result<S>) -> Result<AlgebraElement<S>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { Ok(S::zero(ctx)) } else { f(c) })
            .collect::<Result<Vec<S>>>()?;
        Ok(AlgebraElement { g: self.g.clone(), coeffs })
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Commutes with every element of the given group elements.
    pub fn commutes_with_group(&self, elems: &[usize]) -> bool {
        elems.iter().all(|&g| self.conj(g) == *self)
    }

    pub fn supported_in(&self, u: &Subgroup) -> bool {
        self.support().into_iter().all(|x| u.contains(x))
    }

    pub fn coeff_strings(&self) -> Vec<(usize, String)> {
        self.support().into_iter().map(|x| (x, self.coeffs[x].to_string())).collect()
    }
}

impl AlgebraElement<CycloScalar> {
    pub fn galois(&self, a: &GaloisElement) -> Self {
        AlgebraElement { g: self.g.clone(), coeffs: self.coeffs.iter().map(|c| a.apply(c)).collect() }
    }
}

/// χ extended linearly: χ(a) = Σ a_g χ(g).
pub fn eval_char(chi: &ClassFunction, a: &AlgebraElement<CycloScalar>) -> CycloScalar {
    let m = chi.values[0].conductor();
    let mut acc = CycloScalar::zero_in(m);
    for x in a.support() {
        if chi.sub.contains(x) {
            acc = acc.add(&a.coeffs[x].mul(chi.at(x)));
        } else {
            panic!("element not supported in the character's subgroup");
        }
    }
    acc
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// e_θ = θ(1)/|K| Σ_k θ(k⁻¹) k.
pub fn central_idempotent(theta: &ClassFunction) -> AlgebraElement<CycloScalar> {
    let k = &theta.sub;
    let g = k.group().clone();
    let m = theta.values[0].conductor();
    let d = crate::characters::int_of(theta.degree());
    let f = CycloScalar::from_rational(m, rat(d, k.order() as i64));
    let mut e = AlgebraElement::zero(&g, &m);
    for &x in k.elements() {
        e.coeffs[x] = theta.at(g.inv(x)).mul(&f);
    }
    e
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

pub fn is_defect_zero(theta: &ClassFunction, p: u64) -> bool {
    let d = crate::characters::int_of(theta.degree()) as u64;
    p_part(d, p) == p_part(theta.sub.order() as u64, p)
}

/// ē_θ over GF(p^f); θ must have p-defect zero.
pub fn central_idempotent_mod(theta: &ClassFunction, red: &ResidueMap) -> Result<AlgebraElement<ModScalar>> {
    if !is_defect_zero(theta, red.p) {
        return Err(Error::Validation(format!("θ does not have {}-defect zero", red.p)));
    }
    central_idempotent(theta).map(&red.field, |c| red.reduce(c))
}

/// e_(θ,F) = Σ_{α ∈ Gal(F(θ)/F)} e_θ^α.
pub fn trace_idempotent(theta: &ClassFunction, f: &FixedField) -> AlgebraElement<CycloScalar> {
    let e = central_idempotent(theta);
    let ft = crate::characters::field_of_values(theta, f);
    let mut acc = AlgebraElement::zero(&e.g, &f.m);
    for a in galois_group_over(&ft, f) {
        acc = acc.add(&e.galois(&a));
    }
    acc
}

/// i = e_φ e_θ, or Σ_γ (e_φ e_θ)^γ over Gal(F(θ)/F) in the semi-invariant
/// flavors; checked idempotent, H-invariant and absorbed by both trace
/// idempotents.
pub fn product_idempotent(c: &Configuration) -> Result<AlgebraElement<CycloScalar>> {
    let base = central_idempotent(&c.phi).mul(&central_idempotent(&c.theta));
    let i = match c.flavor {
        Flavor::Invariant => base,
        _ => {
            let mut acc = AlgebraElement::zero(&base.g, &c.conductor());
            for a in c.galois_packet() {
                acc = acc.add(&base.galois(&a));
            }
            acc
        }
    };
    if i.is_zero() {
        return Err(Error::Algebra("i = 0 (n = 0)".into()));
    }
    if !i.is_idempotent() {
        return Err(Error::Algebra("i is not idempotent".into()));
    }
    if !i.commutes_with_group(c.h.elements()) {
        return Err(Error::Algebra("i is not H-invariant".into()));
    }
    if i.mul(&trace_idempotent(&c.theta, &c.field)) != i || i.mul(&trace_idempotent(&c.phi, &c.field)) != i {
        return Err(Error::Algebra("i not absorbed by the trace idempotents".into()));
    }
    Ok(i)
}

/// A subalgebra (or subspace) of R[G] with an echelon basis and structure
/// constants.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis<R: Scalar> {
    pub g: Arc<GroupTable>,
    pub ech: Echelon<R>,
    pub basis: Vec<AlgebraElement<R>>,
    /// structure[a][b] = coordinates of basis[a]·basis[b]
    pub structure: Vec<Vec<Vec<R>>>,
    pub unit: AlgebraElement<R>,
    pub unit_coords: Vec<R>,
}

impl<R: Scalar> SubalgebraBasis<R> {
    /// Span of the given elements, which must be closed under products and
    /// contain `unit` as identity.
    pub fn span(elems: &[AlgebraElement<R>], unit: &AlgebraElement<R>) -> Result<Self> {
        let g = unit.g.clone();
        let n = g.order();
        let rows: Vec<Vec<R>> = elems.iter().map(|e| e.coeffs.clone()).collect();
        let ech = rref(rows, n)?;
        let basis: Vec<AlgebraElement<R>> =
            ech.rows.iter().map(|r| AlgebraElement { g: g.clone(), coeffs: r.clone() }).collect();
        let unit_coords = ech.coords(&unit.coeffs).ok_or_else(|| Error::Algebra("unit outside span".into()))?;
        let mut structure = Vec::with_capacity(basis.len());
        for a in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in &basis {
                let p = a.mul(b);
                row.push(ech.coords(&p.coeffs).ok_or_else(|| Error::Algebra("span not closed under products".into()))?);
            }
            structure.push(row);
        }
        Ok(SubalgebraBasis { g, ech, basis, structure, unit: unit.clone(), unit_coords })
    }

    /// Subspace only (no structure constants); used for ideals.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ctx(&self) -> R::Ctx {
        self.unit.ctx()
    }

    pub fn coords(&self, x: &AlgebraElement<R>) -> Option<Vec<R>> {
        self.ech.coords(&x.coeffs)
    }

    pub fn contains(&self, x: &AlgebraElement<R>) -> bool {
        self.coords(x).is_some()
    }

    pub fn element(&self, c: &[R]) -> AlgebraElement<R> {
        let ctx = self.ctx();
        let mut out = AlgebraElement::zero(&self.g, &ctx);
        for (k, b) in c.iter().zip(&self.basis) {
            if !k.is_zero() {
                out = out.add(&b.scale(k));
            }
        }
        out
    }

    /// Product in coordinates via structure constants.
    pub fn mul_coords(&self, x: &[R], y: &[R]) -> Vec<R> {
        let ctx = self.ctx();
        let d = self.dim();
        let mut out = vec![R::zero(&ctx); d];
        for a in 0..d {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..d {
                if y[b].is_zero() {
                    continue;
                }
                let f = x[a].mul(&y[b]);
                for (o, s) in out.iter_mut().zip(&self.structure[a][b]) {
                    if !s.is_zero() {
                        *o = o.add(&f.mul(s));
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by x on the subalgebra (columns = images of basis).
    pub fn left_matrix(&self, x: &[R]) -> Vec<Vec<R>> {
        let d = self.dim();
        let ctx = self.ctx();
        let cols: Vec<Vec<R>> = (0..d)
            .map(|b| {
                let mut e = vec![R::zero(&ctx); d];
                e[b] = R::one(&ctx);
                self.mul_coords(x, &e)
            })
            .collect();
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Inverse inside the subalgebra, if any.
    pub fn inverse(&self, x: &AlgebraElement<R>) -> Option<AlgebraElement<R>> {
        let c = self.coords(x)?;
        let m = self.left_matrix(&c);
        let sol = crate::linalg::solve(&m, &self.unit_coords, self.dim(), &self.ctx()).ok()??;
        let y = self.element(&sol);
        if y.mul(x) == self.unit && x.mul(&y) == self.unit {
            Some(y)
        } else {
            None
        }
    }

    /// Checksum over the canonical scalar strings of the structure constants.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for row in &self.structure {
            for cell in row {
                for s in cell {
                    h.update(s.to_string().as_bytes());
                    h.update(b";");
                }
            }
        }
        hex::encode(&h.finalize()[..8])
    }
}

/// Elements of `ambient` commuting with every element of `with`.
pub fn centralizer_subalgebra<R: Scalar>(
    ambient: &SubalgebraBasis<R>,
    with: &[AlgebraElement<R>],
) -> Result<SubalgebraBasis<R>> {
    let d = ambient.dim();
    let n = ambient.g.order();
    let ctx = ambient.ctx();
    let mut rows: Vec<Vec<R>> = Vec::new();
    for t in with {
        let comm: Vec<AlgebraElement<R>> = ambient.basis.iter().map(|b| b.mul(t).sub(&t.mul(b))).collect();
        for x in 0..n {
            let row: Vec<R> = comm.iter().map(|c| c.coeffs[x].clone()).collect();
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    let ker = if rows.is_empty() {
        (0..d)
            .map(|j| {
                let mut v = vec![R::zero(&ctx); d];
                v[j] = R::one(&ctx);
                v
            })
            .collect()
    } else {
        crate::linalg::kernel(rows, d, &ctx)?
    };
    let elems: Vec<AlgebraElement<R>> = ker.iter().map(|c| ambient.element(c)).collect();
    SubalgebraBasis::span(&elems, &ambient.unit)
}

/// Center of a subalgebra.
pub fn center<R: Scalar>(s: &SubalgebraBasis<R>) -> Result<SubalgebraBasis<R>> {
    centralizer_subalgebra(s, &s.basis)
}

/// tr(s) = θ(s)/φ(1).
pub fn reduced_trace(s: &AlgebraElement<CycloScalar>, theta: &ClassFunction, phi_degree: i64) -> CycloScalar {
    let m = theta.values[0].conductor();
    eval_char(theta, s).mul(&CycloScalar::from_rational(m, rat(1, phi_degree)))
}

/// Certificate Σ c_k · x_k · e · y_k = target with x_k, y_k group elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FullnessCertificate {
    /// (coefficient, x, y) triples; coefficients as canonical strings.
    pub terms: Vec<(String, usize, usize)>,
}

/// Searches for a fullness certificate of e inside the two-sided ideal
/// generated by `target` (e.g. the block idempotent) in R[U].
pub fn full_idempotent_check<R: Scalar>(
    e: &AlgebraElement<R>,
    target: &AlgebraElement<R>,
    u: &Subgroup,
) -> Result<Option<Vec<(R, usize, usize)>>> {
    let g = e.g.clone();
    let n = g.order();
    let ctx = e.ctx();
    let target_rank = {
        // dimension of R[U]·target
        let rows: Vec<Vec<R>> = u.elements().iter().map(|&x| target.left_mul_group(x).coeffs).collect();
        let mut span_rows = Vec::new();
        for r in rows {
            let el = AlgebraElement { g: g.clone(), coeffs: r };
            for &y in u.elements() {
                span_rows.push(el.right_mul_group(y).coeffs);
            }
        }
        rref(span_rows, n)?.rank()
    };
    // greedy independent set among x e y
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let mut rows: Vec<Vec<R>> = Vec::new();
    let mut ech: Option<Echelon<R>> = None;
    'outer: for &x in u.elements() {
        let xe = e.left_mul_group(x);
        for &y in u.elements() {
            let v = xe.right_mul_group(y);
            if v.is_zero() {
                continue;
            }
            if let Some(ec) = &ech {
                if ec.coords(&v.coeffs).is_some() {
                    continue;
                }
            }
            let mut trial = rows.clone();
            trial.push(v.coeffs.clone());
            match rref(trial.clone(), n) {
                Ok(ec) if ec.rank() == rows.len() + 1 => {
                    rows = trial;
                    chosen.push((x, y));
                    ech = Some(ec);
                    if rows.len() == target_rank {
                        break 'outer;
                    }
                }
                _ => {}
            }
        }
    }
    // express target in the chosen vectors: solve Σ c_k v_k = target
    let cols = rows.len();
    if cols == 0 {
        return Ok(None);
    }
    let a: Vec<Vec<R>> = (0..n).map(|i| rows.iter().map(|r| r[i].clone()).collect()).collect();
    let sol = match crate::linalg::solve(&a, &target.coeffs, cols, &ctx) {
        Ok(Some(s)) => s,
        _ => return Ok(None),
    };
    let terms: Vec<(R, usize, usize)> =
        sol.into_iter().zip(chosen).filter(|(c, _)| !c.is_zero()).map(|(c, (x, y))| (c, x, y)).collect();
    // verify by multiplication
    let mut acc = AlgebraElement::zero(&g, &ctx);
    for (c, x, y) in &terms {
        acc = acc.add(&e.left_mul_group(*x).right_mul_group(*y).scale(c));
    }
    if acc != *target {
        return Ok(None);
    }
    Ok(Some(terms))
}

/// Re-checks a certificate by multiplication.
pub fn verify_fullness<R: Scalar>(e: &AlgebraElement<R>, target: &AlgebraElement<R>, terms: &[(R, usize, usize)]) -> bool {
    let ctx = e.ctx();
    let mut acc = AlgebraElement::zero(&e.g, &ctx);
    for (c, x, y) in terms {
        acc = acc.add(&e.left_mul_group(*x).right_mul_group(*y).scale(c));
    }
    acc == *target
}

/// L-orbit sums on K: a basis of (R K)^L.
pub fn orbit_sums<R: Scalar>(k: &Subgroup, l: &Subgroup, ctx: &R::Ctx) -> Vec<AlgebraElement<R>> {
    let g = k.group().clone();
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for &x in k.elements() {
        if seen[x] {
            continue;
        }
        let mut orbit = vec![x];
        seen[x] = true;
        let mut idx = 0;
        while idx < orbit.len() {
            let y = orbit[idx];
            for &s in l.generators() {
                let z = g.conj(y, s);
                if !seen[z] {
                    seen[z] = true;
                    orbit.push(z);
                }
            }
            idx += 1;
        }
        out.push(AlgebraElement::sum_of(&g, &orbit, ctx));
    }
    out
}

/// S = (i·R K·i)^L, spanned by i·O·i over L-orbit sums O.
pub fn s_algebra<R: Scalar>(i: &AlgebraElement<R>, k: &Subgroup, l: &Subgroup) -> Result<SubalgebraBasis<R>> {
    let ctx = i.ctx();
    let elems: Vec<AlgebraElement<R>> = orbit_sums(k, l, &ctx).iter().map(|o| i.mul(o).mul(i)).collect();
    SubalgebraBasis::span(&elems, i)
}

/// i·R U·i as a subalgebra.
pub fn corner_algebra<R: Scalar>(i: &AlgebraElement<R>, u: &Subgroup) -> Result<SubalgebraBasis<R>> {
    let ctx = i.ctx();
    let g = i.g.clone();
    let elems: Vec<AlgebraElement<R>> =
        u.elements().iter().map(|&x| i.mul(&AlgebraElement::basis(&g, x, &ctx)).mul(i)).collect();
    SubalgebraBasis::span(&elems, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{character_table, rationals};

    #[test]
    fn idempotents_of_c2() {
        let g = GroupTable::from_cycle_strings(&["(1,2)"]).unwrap();
        let t = character_table(&g.full()).unwrap();
        let sign = &t.irr[0];
        let e = central_idempotent(sign);
        assert!(e.is_idempotent());
        assert_eq!(e.coeffs[0], CycloScalar::from_rational(2, rat(1, 2)));
        assert_eq!(e.coeffs[1], CycloScalar::from_rational(2, rat(-1, 2)));
        assert_eq!(trace_idempotent(sign, &rationals(2)), e);
    }

    #[test]
    fn trace_idempotent_c3() {
        let g = GroupTable::from_cycle_strings(&["(1,2,3)"]).unwrap();
        let full = g.full();
        let t = character_table(&full).unwrap();
        let faithful = t.irr.iter().find(|c| !c.values.iter().all(|v| v.is_one())).unwrap();
        let e = trace_idempotent(faithful, &rationals(3));
        let m = 3;
        let mut expect = AlgebraElement::<CycloScalar>::sum_of(&g, &[0, 1, 2], &m).scale(&CycloScalar::from_rational(3, rat(-1, 3)));
        expect.coeffs[0] = expect.coeffs[0].add(&CycloScalar::from_int_in(3, 1));
        assert_eq!(e, expect);
        assert!(e.is_idempotent());
    }

    #[test]
    fn full_idempotent_two_blocks_fails() {
        // C2 × C2: a primitive idempotent of one block is not full in the algebra
        let g = GroupTable::from_cycle_strings(&["(1,2)", "(3,4)"]).unwrap();
        let full = g.full();
        let t = character_table(&full).unwrap();
        let e = central_idempotent(&t.irr[0]);
        let one = AlgebraElement::one(&g, &2u64);
        assert!(full_idempotent_check(&e, &one, &full).unwrap().is_none());
        let cert = full_idempotent_check(&one, &one, &full).unwrap().unwrap();
        assert!(verify_fullness(&one, &one, &cert));
    }
}
