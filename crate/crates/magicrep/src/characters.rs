//! Character tables (Dixon–Schneider modulo a prime ℓ, lifted to
//! cyclotomic integers) and the class-function calculus used throughout.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::scalar::{inv_mod, is_prime, pow_mod, prime_factors, CycloScalar, FixedField, GaloisElement, Scalar};

/// A class function on a subgroup, valued in ℚ(ζ_M) with M the exponent of
/// the parent group.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    pub sub: Arc<Subgroup>,
    pub values: Vec<CycloScalar>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, o: &Self) -> bool {
        *self.sub == *o.sub && self.values == o.values
    }
}

pub fn ambient_conductor(sub: &Subgroup) -> u64 {
    sub.group().exponent() as u64
}

impl ClassFunction {
    pub fn zero(sub: &Arc<Subgroup>) -> Self {
        let m = ambient_conductor(sub);
        ClassFunction { sub: sub.clone(), values: vec![CycloScalar::zero_in(m); sub.class_count()] }
    }

    pub fn trivial(sub: &Arc<Subgroup>) -> Self {
        let m = ambient_conductor(sub);
        ClassFunction { sub: sub.clone(), values: vec![CycloScalar::from_int_in(m, 1); sub.class_count()] }
    }

    /// Regular character.
    pub fn regular(sub: &Arc<Subgroup>) -> Self {
        let mut f = Self::zero(sub);
        f.values[0] = CycloScalar::from_int_in(ambient_conductor(sub), sub.order() as i64);
        f
    }

    pub fn from_fn(sub: &Arc<Subgroup>, f: impl Fn(usize) -> CycloScalar) -> Self {
        let values = sub.class_reps().into_iter().map(f).collect();
        ClassFunction { sub: sub.clone(), values }
    }

    pub fn at(&self, x: usize) -> &CycloScalar {
        &self.values[self.sub.class_of(x)]
    }

    pub fn degree(&self) -> &CycloScalar {
        &self.values[0]
    }

    pub fn add(&self, o: &Self) -> Self {
        ClassFunction { sub: self.sub.clone(), values: self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ClassFunction { sub: self.sub.clone(), values: self.values.iter().zip(&o.values).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        ClassFunction { sub: self.sub.clone(), values: self.values.iter().map(|a| a.mul(c)).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Self {
        ClassFunction { sub: self.sub.clone(), values: self.values.iter().zip(&o.values).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn conj(&self) -> Self {
        ClassFunction { sub: self.sub.clone(), values: self.values.iter().map(|a| a.conj()).collect() }
    }

    pub fn galois(&self, g: &GaloisElement) -> Self {
        ClassFunction { sub: self.sub.clone(), values: self.values.iter().map(|a| g.apply(a)).collect() }
    }

    /// χ^g(x) = χ(g x g⁻¹), for g normalizing the subgroup.
    pub fn conjugate_by(&self, g: usize) -> Self {
        let gt = self.sub.group().clone();
        let gi = gt.inv(g);
        Self::from_fn(&self.sub, |x| self.at(gt.conj(x, gi)).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Values on the chosen class representatives, for reports.
    pub fn value_strings(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_string()).collect()
    }
}

/// (a, b) = |U|⁻¹ Σ_g a(g) conj(b(g)).
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> CycloScalar {
    assert!(*a.sub == *b.sub, "class functions on different subgroups");
    let m = ambient_conductor(&a.sub);
    let mut acc = CycloScalar::zero_in(m);
    for ((x, y), size) in a.values.iter().zip(&b.values).zip(a.sub.class_sizes()) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add(&x.mul(&y.conj()).mul(&CycloScalar::from_int_in(m, size as i64)));
    }
    let n = BigRational::new(BigInt::from(1), BigInt::from(a.sub.order()));
    acc.mul(&CycloScalar::from_rational(m, n))
}

pub fn restrict(chi: &ClassFunction, v: &Arc<Subgroup>) -> ClassFunction {
    assert!(v.is_subgroup_of(&chi.sub), "restriction to a non-subgroup");
    ClassFunction::from_fn(v, |x| chi.at(x).clone())
}

/// τ^U(g) = |U| / (|V|·|g^U|) · Σ_{v ∈ g^U ∩ V} τ(v).
pub fn induce(tau: &ClassFunction, u: &Arc<Subgroup>) -> ClassFunction {
    let v = &tau.sub;
    assert!(v.is_subgroup_of(u), "induction from a non-subgroup");
    let m = ambient_conductor(u);
    let values = u
        .classes()
        .iter()
        .map(|cls| {
            let mut s = CycloScalar::zero_in(m);
            for &x in cls {
                if v.contains(x) {
                    s = s.add(tau.at(x));
                }
            }
            let f = BigRational::new(BigInt::from(u.order()), BigInt::from(v.order() * cls.len()));
            s.mul(&CycloScalar::from_rational(m, f))
        })
        .collect();
    ClassFunction { sub: u.clone(), values }
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub sub: Arc<Subgroup>,
    pub irr: Vec<ClassFunction>,
    pub conductor: u64,
    /// power_maps[c][j] = class of rep(c)^j for 0 ≤ j < order(rep(c)).
    pub power_maps: Vec<Vec<usize>>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.irr.iter().map(|c| int_of(c.degree())).collect()
    }

    pub fn find(&self, f: &ClassFunction) -> Option<usize> {
        self.irr.iter().position(|c| c == f)
    }

    /// Multiplicities (γ, χ) for every irreducible χ.
    pub fn decompose(&self, gamma: &ClassFunction) -> Vec<CycloScalar> {
        self.irr.iter().map(|chi| inner_product(gamma, chi)).collect()
    }

    /// Indices of Irr(U | θ) for θ a character of a subgroup K ≤ U.
    pub fn above(&self, theta: &ClassFunction) -> Vec<usize> {
        (0..self.irr.len()).filter(|&i| !inner_product(&restrict(&self.irr[i], &theta.sub), theta).is_zero()).collect()
    }

    /// Indices of Irr(U) with K in the kernel.
    pub fn over_quotient(&self, k: &Subgroup) -> Vec<usize> {
        (0..self.irr.len())
            .filter(|&i| {
                let d = self.irr[i].degree();
                k.elements().iter().all(|&x| self.irr[i].at(x) == d)
            })
            .collect()
    }
}

pub fn int_of(x: &CycloScalar) -> i64 {
    x.to_integer().and_then(|b| i64::try_from(b).ok()).expect("integer value")
}

/// Smallest prime ℓ ≡ 1 (mod e) with ℓ > 2√n.
fn dixon_prime(e: u64, n: u64) -> u64 {
    let mut l = e + 1;
    while !(is_prime(l) && (l * l) > 4 * n) {
        l += e;
    }
    l
}

fn primitive_root_mod(l: u64) -> u64 {
    let fs = prime_factors(l - 1);
    (2..l).find(|&g| fs.iter().all(|&q| pow_mod(g, (l - 1) / q, l) != 1)).unwrap_or(1)
}

fn mat_rank_mod(mut a: Vec<Vec<u64>>, l: u64) -> (usize, Vec<Vec<u64>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut piv = Vec::new();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = inv_mod(a[r][c], l).unwrap();
        for x in a[r].iter_mut() {
            *x = *x * inv % l;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + l * l - f * a[r][j] % l) % l;
                }
            }
        }
        piv.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    a.truncate(r);
    (r, a, piv)
}

fn nullspace_mod(a: Vec<Vec<u64>>, ncols: usize, l: u64) -> Vec<Vec<u64>> {
    let (_, rows, piv) = mat_rank_mod(a, l);
    let mut is_piv = vec![false; ncols];
    for &c in &piv {
        is_piv[c] = true;
    }
    let mut out = Vec::new();
    for free in 0..ncols {
        if is_piv[free] {
            continue;
        }
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &c) in rows.iter().zip(&piv) {
            v[c] = (l - row[free]) % l;
        }
        out.push(v);
    }
    out
}

/// Exact character table of a subgroup.
pub fn character_table(sub: &Arc<Subgroup>) -> Result<CharacterTable> {
    let g = sub.group().clone();
    let n = sub.order() as u64;
    let k = sub.class_count();
    let m = ambient_conductor(sub);
    let l = dixon_prime(m, n);
    let reps = sub.class_reps();
    let sizes = sub.class_sizes();

    // class multiplication coefficients a[r][s][t]
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for t in 0..k {
        let gt = reps[t];
        for r in 0..k {
            for &x in &sub.classes()[r] {
                let y = g.mul(g.inv(x), gt);
                a[r][sub.class_of(y)][t] += 1;
            }
        }
    }

    // split F_ℓ^k into common eigenspaces of the class matrices
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| {
            let mut v = vec![0u64; k];
            v[i] = 1;
            v
        })
        .collect()];
    for r in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for w in spaces {
            if w.len() == 1 {
                next.push(w);
                continue;
            }
            let d = w.len();
            // image of each basis vector under A_r, expressed in the basis w
            let mut mat = vec![vec![0u64; d]; d];
            for (i, b) in w.iter().enumerate() {
                let img: Vec<u64> = (0..k).map(|s| (0..k).map(|t| a[r][s][t] % l * b[t] % l).sum::<u64>() % l).collect();
                let wcoords = coords_in(&w, &img, l);
                for j in 0..d {
                    mat[j][i] = wcoords[j];
                }
            }
            let mut pieces = Vec::new();
            for lam in 0..l {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| (0..d).map(|j| (mat[i][j] + if i == j { l - lam } else { 0 }) % l).collect())
                    .collect();
                let ns = nullspace_mod(shifted, d, l);
                if ns.is_empty() {
                    continue;
                }
                let vecs: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| (0..k).map(|t| (0..d).map(|j| c[j] * w[j][t] % l).sum::<u64>() % l).collect())
                    .collect();
                pieces.push(vecs);
            }
            let total: usize = pieces.iter().map(|p| p.len()).sum();
            if total != d {
                return Err(Error::Algebra("class algebra did not split modulo ℓ".into()));
            }
            next.extend(pieces);
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Algebra("class algebra did not split into lines".into()));
    }

    let inv_class: Vec<usize> = reps.iter().map(|&x| sub.class_of(g.inv(x))).collect();
    let z = pow_mod(primitive_root_mod(l), (l - 1) / m, l);
    let power_maps: Vec<Vec<usize>> = reps
        .iter()
        .map(|&x| {
            let o = g.element_order(x);
            let mut y = 0;
            (0..o)
                .map(|_| {
                    let c = sub.class_of(y);
                    y = g.mul(y, x);
                    c
                })
                .collect()
        })
        .collect();

    let mut irr = Vec::new();
    for sp in spaces {
        let mut v = sp[0].clone();
        let inv0 = inv_mod(v[0], l).ok_or_else(|| Error::Algebra("eigenvector vanishes at 1".into()))?;
        for x in v.iter_mut() {
            *x = *x * inv0 % l;
        }
        let mut s = 0u64;
        for t in 0..k {
            s = (s + v[t] * v[inv_class[t]] % l * inv_mod(sizes[t] as u64 % l, l).unwrap()) % l;
        }
        let d2 = n % l * inv_mod(s, l).unwrap() % l;
        let d = (1..=n).take_while(|d| d * d <= n).find(|d| d * d % l == d2).ok_or_else(|| Error::Algebra("degree recovery failed".into()))?;
        let chi_mod: Vec<u64> = (0..k).map(|t| d % l * v[t] % l * inv_mod(sizes[t] as u64 % l, l).unwrap() % l).collect();
        let mut values = Vec::with_capacity(k);
        for t in 0..k {
            let o = power_maps[t].len() as u64;
            let zo = pow_mod(z, m / o, l);
            let inv_o = inv_mod(o % l, l).unwrap();
            let mut val = CycloScalar::zero_in(m);
            for kk in 0..o {
                let mut mk = 0u64;
                for j in 0..o {
                    let e = (l - 1 - (j * kk) % (l - 1)) % (l - 1);
                    mk = (mk + chi_mod[power_maps[t][j as usize]] * pow_mod(zo, e, l)) % l;
                }
                mk = mk * inv_o % l;
                if mk > d {
                    return Err(Error::Algebra(format!("eigenvalue multiplicity {mk} exceeds degree {d}")));
                }
                if mk > 0 {
                    let term = CycloScalar::zeta_pow(m, ((m / o) * kk) as i64).mul(&CycloScalar::from_int_in(m, mk as i64));
                    val = val.add(&term);
                }
            }
            values.push(val);
        }
        irr.push(ClassFunction { sub: sub.clone(), values });
    }
    irr.sort_by(|a, b| {
        let da = int_of(a.degree());
        let db = int_of(b.degree());
        da.cmp(&db).then_with(|| {
            for (x, y) in a.values.iter().zip(&b.values) {
                match x.lex_cmp(y) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
            Ordering::Equal
        })
    });
    let sum: i64 = irr.iter().map(|c| int_of(c.degree()).pow(2)).sum();
    if sum as u64 != n {
        return Err(Error::Algebra(format!("degree check failed: Σχ(1)² = {sum} ≠ {n}")));
    }
    Ok(CharacterTable { sub: sub.clone(), irr, conductor: m, power_maps })
}

fn coords_in(w: &[Vec<u64>], target: &[u64], l: u64) -> Vec<u64> {
    let d = w.len();
    let aug: Vec<Vec<u64>> = (0..target.len())
        .map(|t| {
            let mut row: Vec<u64> = (0..d).map(|j| w[j][t]).collect();
            row.push(target[t]);
            row
        })
        .collect();
    let (_, rows, piv) = mat_rank_mod(aug, l);
    let mut c = vec![0u64; d];
    for (row, &p) in rows.iter().zip(&piv) {
        if p < d {
            c[p] = row[d];
        }
    }
    c
}

/// Sub-field of ℚ(ζ_M) described by the subgroup of (ℤ/M)^* fixing it.
pub fn rationals(m: u64) -> FixedField {
    FixedField::of(m, &GaloisElement::all(m))
}

/// F(χ): the fixed field of the stabilizer of χ in Gal(ℚ(ζ_M)/F).
pub fn field_of_values(chi: &ClassFunction, f: &FixedField) -> FixedField {
    let m = f.m;
    let stab: Vec<GaloisElement> = f
        .group
        .iter()
        .map(|&k| GaloisElement::new(m, k as i64))
        .filter(|g| chi.galois(g) == *chi)
        .collect();
    FixedField::of(m, &stab)
}

/// Gal(F(χ)/F) as coset representatives (smallest exponent per coset).
pub fn galois_group_over(chi_field: &FixedField, f: &FixedField) -> Vec<GaloisElement> {
    let m = f.m;
    let mut reps: Vec<u64> = Vec::new();
    let mut covered: Vec<u64> = Vec::new();
    for &k in &f.group {
        if covered.contains(&k) {
            continue;
        }
        reps.push(k);
        for &s in &chi_field.group {
            covered.push(k * s % m.max(1));
        }
    }
    reps.into_iter().map(|k| GaloisElement::new(m, k as i64)).collect()
}

/// The map g ↦ α_g with θ^{g α_g} = θ (α_g the least exponent in its coset).
#[derive(Clone, Debug)]
pub struct SemiInvariance {
    pub m: u64,
    /// (element, exponent) for every element of the acting group.
    pub gamma: Vec<(usize, u64)>,
    /// exponents of Stab(θ) inside Gal(ℚ(ζ_M)/F)
    pub stabilizer: Vec<u64>,
}

impl SemiInvariance {
    pub fn exponent_of(&self, g: usize) -> u64 {
        self.gamma.iter().find(|(x, _)| *x == g).map(|x| x.1).expect("element of acting group")
    }

    pub fn same_coset(&self, a: u64, b: u64) -> bool {
        let m = self.m.max(1);
        self.stabilizer.iter().any(|&s| a * s % m == b % m)
    }
}

pub fn semi_invariance(theta: &ClassFunction, over: &Subgroup, f: &FixedField) -> Result<SemiInvariance> {
    let m = f.m;
    let stabilizer: Vec<u64> =
        f.group.iter().copied().filter(|&k| theta.galois(&GaloisElement::new(m, k as i64)) == *theta).collect();
    let mut gamma = Vec::new();
    for &g in over.elements() {
        let tg = theta.conjugate_by(g);
        let k = f
            .group
            .iter()
            .copied()
            .find(|&k| tg.galois(&GaloisElement::new(m, k as i64)) == *theta)
            .ok_or_else(|| Error::Validation(format!("not semi-invariant: no γ_h exists for h = {}", over.group().element(g).to_cycles())))?;
        gamma.push((g, k));
    }
    let si = SemiInvariance { m, gamma, stabilizer };
    let gt = over.group();
    for &(x, kx) in &si.gamma {
        for &(y, ky) in &si.gamma {
            let kxy = si.exponent_of(gt.mul(x, y));
            if !si.same_coset(kx * ky % m.max(1), kxy) {
                return Err(Error::Algebra("γ map is not a homomorphism".into()));
            }
        }
    }
    Ok(si)
}

/// γ_θ = Σ_{χ ∈ Irr(G|θ)} (γ, χ) χ for θ invariant in G.
pub fn above(gamma: &ClassFunction, theta: &ClassFunction, table: &CharacterTable) -> Result<ClassFunction> {
    for &g in table.sub.generators() {
        if theta.conjugate_by(g) != *theta {
            return Err(Error::Validation("θ not invariant".into()));
        }
    }
    let mut acc = ClassFunction::zero(&table.sub);
    for i in table.above(theta) {
        let c = inner_product(gamma, &table.irr[i]);
        acc = acc.add(&table.irr[i].scale(&c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    #[test]
    fn c2_table() {
        let g = GroupTable::from_cycle_strings(&["(1,2)"]).unwrap();
        let t = character_table(&g.full()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(int_of(&t.irr[0].values[1]), -1);
        assert_eq!(int_of(&t.irr[1].values[1]), 1);
    }

    #[test]
    fn s3_degrees_and_induction() {
        let g = GroupTable::from_cycle_strings(&["(1,2)", "(1,2,3)"]).unwrap();
        let full = g.full();
        let t = character_table(&full).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        let c3 = g.index_of(&crate::group::Perm::parse_cycles("(1,2,3)", 3).unwrap()).unwrap();
        let a3 = Subgroup::generated(&g, &[c3]);
        let ind = induce(&ClassFunction::trivial(&a3), &full);
        let sign_plus_one = t.irr[0].add(&t.irr[1]);
        assert_eq!(ind, sign_plus_one);
        let reg = ClassFunction::regular(&full);
        assert!(inner_product(&ClassFunction::trivial(&full), &reg).is_one());
    }
}
