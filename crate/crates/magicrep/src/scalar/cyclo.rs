use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Scalar;
use crate::error::{Error, Result};

type Q = BigRational;

pub fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|&k| num_integer::gcd(k, m) == 1).count() as u64
}

/// Integer coefficients of the m-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let den = cyclotomic_poly(d);
            num = int_exact_div(&num, &den);
        }
    }
    num
}

fn int_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    q
}

#[derive(Debug)]
pub(crate) struct CycloField {
    pub m: u64,
    pub deg: usize,
    phi: Vec<BigInt>,
    /// Reduced power-basis coordinates of ζ^k for 0 ≤ k < m.
    powers: Vec<Vec<Q>>,
}

fn field(m: u64) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&m) {
        return f.clone();
    }
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![Q::zero(); deg];
    cur[0] = Q::one();
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce
        let mut next = vec![Q::zero(); deg + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] = c.clone();
        }
        let top = next[deg].clone();
        if !top.is_zero() {
            for j in 0..deg {
                next[j] -= &top * Q::from_integer(phi[j].clone());
            }
        }
        next.truncate(deg);
        cur = next;
    }
    let f = Arc::new(CycloField { m, deg, phi, powers });
    cache.lock().unwrap().insert(m, f.clone());
    f
}

/// Element of ℚ(ζ_m) in the power basis 1, ζ, …, ζ^{φ(m)−1}.
#[derive(Clone)]
pub struct CycloScalar {
    f: Arc<CycloField>,
    c: Vec<Q>,
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}", self)
    }
}

impl CycloScalar {
    pub fn zero_in(m: u64) -> Self {
        let f = field(m);
        let c = vec![Q::zero(); f.deg];
        CycloScalar { f, c }
    }

    pub fn from_rational(m: u64, r: Q) -> Self {
        let mut x = Self::zero_in(m);
        x.c[0] = r;
        x
    }

    pub fn from_int_in(m: u64, n: i64) -> Self {
        Self::from_rational(m, Q::from_integer(BigInt::from(n)))
    }

    /// ζ_m^k.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let f = field(m);
        let c = f.powers[k.rem_euclid(m as i64) as usize].clone();
        CycloScalar { f, c }
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<Q>) -> Self {
        let f = field(m);
        let c = reduce(&f, coeffs);
        CycloScalar { f, c }
    }

    pub fn conductor(&self) -> u64 {
        self.f.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn to_rational(&self) -> Option<Q> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Integer value if the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    /// Image in ℚ(ζ_{m'}) for m | m'.
    pub fn embed(&self, m2: u64) -> Self {
        let m = self.f.m;
        if m == m2 {
            return self.clone();
        }
        assert!(m2 % m == 0, "conductor {m} does not divide {m2}");
        let g = field(m2);
        let r = (m2 / m) as usize;
        let mut c = vec![Q::zero(); g.deg];
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &g.powers[(j * r) % m2 as usize];
            for (k, b) in p.iter().enumerate() {
                if !b.is_zero() {
                    c[k] += a * b;
                }
            }
        }
        CycloScalar { f: g, c }
    }

    /// Smallest conductor dividing the current one that contains the element.
    pub fn shrink(&self) -> Self {
        let m = self.f.m;
        for d in super::divisors(m) {
            if d == m {
                break;
            }
            let cand = CycloScalar::zero_in(d);
            // test membership by checking Gal(ζ_m / ζ_d) invariance
            let fixed = (1..m)
                .filter(|&k| num_integer::gcd(k, m) == 1 && k % d == 1 % d)
                .all(|k| self.galois(k) == *self);
            if fixed {
                // solve by coefficient matching on the embedded power basis
                let mut best = cand;
                let img: Vec<Vec<Q>> = (0..best.f.deg)
                    .map(|j| CycloScalar::zeta_pow(d, j as i64).embed(m).c)
                    .collect();
                if let Some(sol) = solve_small(&img, &self.c) {
                    best.c = sol;
                    return best;
                }
            }
        }
        self.clone()
    }

    /// Galois automorphism ζ ↦ ζ^k.
    pub fn galois(&self, k: u64) -> Self {
        let m = self.f.m;
        let mut c = vec![Q::zero(); self.f.deg];
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &self.f.powers[((j as u64 * k) % m) as usize];
            for (t, b) in p.iter().enumerate() {
                if !b.is_zero() {
                    c[t] += a * b;
                }
            }
        }
        CycloScalar { f: self.f.clone(), c }
    }

    pub fn conj(&self) -> Self {
        let m = self.f.m;
        self.galois(m - 1 % m)
    }

    /// Lexicographic comparison of coefficient tuples after embedding into
    /// a common conductor.
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        let (a, b) = common(self, o);
        for (x, y) in a.c.iter().zip(b.c.iter()) {
            match x.cmp(y) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_cyclo(s)
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.to_rational() {
            return Some(Self::from_rational(self.f.m, r.recip()));
        }
        // extended Euclid: s·a + t·Φ = 1
        let phi: Vec<Q> = self.f.phi.iter().map(|x| Q::from_integer(x.clone())).collect();
        let a = trim(self.c.clone());
        let (g, s) = poly_ext_gcd(&a, &phi);
        if g.len() != 1 {
            return None;
        }
        let inv_g = g[0].recip();
        let s: Vec<Q> = s.into_iter().map(|x| x * &inv_g).collect();
        Some(CycloScalar { f: self.f.clone(), c: reduce(&self.f, s) })
    }
}

fn solve_small(cols: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    // cols[j] is the image of basis vector j; solve Σ x_j cols[j] = target.
    let n = cols.len();
    let rows = target.len();
    let mut a: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Q> = (0..n).map(|j| cols[j][r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) {
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for k in 0..=n {
                        let v = &a[r][k] * &f;
                        a[i][k] -= v;
                    }
                }
            }
            piv.push(c);
            r += 1;
        }
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.len() > 1 && v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(Q::zero());
    }
    v
}

fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip();
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (vec![Q::zero()], trim(r));
    }
    let mut q = vec![Q::zero(); r.len() - db];
    for k in (0..r.len() - db).rev() {
        let c = &r[k + db] * &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

/// Returns (g, s) with s·a ≡ g mod b.
fn poly_ext_gcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![Q::one()], vec![Q::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn reduce(f: &CycloField, mut v: Vec<Q>) -> Vec<Q> {
    let d = f.deg;
    while v.len() > d {
        let top = v.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = v.len() - d;
        for j in 0..d {
            if !f.phi[j].is_zero() {
                v[k + j] -= &top * Q::from_integer(f.phi[j].clone());
            }
        }
    }
    v.resize(d, Q::zero());
    v
}

fn common(a: &CycloScalar, b: &CycloScalar) -> (CycloScalar, CycloScalar) {
    if a.f.m == b.f.m {
        (a.clone(), b.clone())
    } else {
        let m = num_integer::lcm(a.f.m, b.f.m);
        (a.embed(m), b.embed(m))
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, o: &Self) -> bool {
        if self.f.m == o.f.m {
            self.c == o.c
        } else {
            let (a, b) = common(self, o);
            a.c == b.c
        }
    }
}

impl Eq for CycloScalar {}

impl Scalar for CycloScalar {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.f.m
    }
    fn zero(ctx: &u64) -> Self {
        Self::zero_in(*ctx)
    }
    fn one(ctx: &u64) -> Self {
        Self::from_int_in(*ctx, 1)
    }
    fn from_int(ctx: &u64, n: i64) -> Self {
        Self::from_int_in(*ctx, n)
    }
    fn add(&self, o: &Self) -> Self {
        if self.f.m != o.f.m {
            let (a, b) = common(self, o);
            return a.add(&b);
        }
        let c = self.c.iter().zip(o.c.iter()).map(|(x, y)| x + y).collect();
        CycloScalar { f: self.f.clone(), c }
    }
    fn sub(&self, o: &Self) -> Self {
        if self.f.m != o.f.m {
            let (a, b) = common(self, o);
            return a.sub(&b);
        }
        let c = self.c.iter().zip(o.c.iter()).map(|(x, y)| x - y).collect();
        CycloScalar { f: self.f.clone(), c }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.f.m != o.f.m {
            let (a, b) = common(self, o);
            return a.mul(&b);
        }
        if let Some(r) = o.to_rational() {
            let c = self.c.iter().map(|x| x * &r).collect();
            return CycloScalar { f: self.f.clone(), c };
        }
        if let Some(r) = self.to_rational() {
            let c = o.c.iter().map(|x| x * &r).collect();
            return CycloScalar { f: self.f.clone(), c };
        }
        let d = self.f.deg;
        let mut prod = vec![Q::zero(); 2 * d - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycloScalar { f: self.f.clone(), c: reduce(&self.f, prod) }
    }
    fn neg(&self) -> Self {
        CycloScalar { f: self.f.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn characteristic(_: &u64) -> u64 {
        0
    }
    fn torsion_bound(&self) -> Option<u64> {
        let x = self.shrink();
        (!x.is_zero() && x.is_algebraic_integer()).then(|| num_integer::lcm(2, x.conductor()))
    }

    fn root_of_unity(ctx: &u64, order: u64) -> Option<Self> {
        let m = num_integer::lcm(*ctx, order);
        Some(Self::zeta_pow(m, (m / order) as i64))
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.f.m;
        let mut first = true;
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match j {
                0 => String::new(),
                1 => format!("z{m}"),
                _ => format!("z{m}^{j}"),
            };
            if j == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn parse_cyclo(s: &str) -> Result<CycloScalar> {
    let bad = || Error::Parse(format!("bad cyclotomic scalar '{s}'"));
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (idx, ch) in t.char_indices() {
        if (ch == '+' || ch == '-') && (idx == 0 || !cur.trim().is_empty()) {
            if !cur.trim().is_empty() {
                terms.push((neg, cur.trim().to_string()));
            }
            cur.clear();
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur.trim().to_string()));
    } else if !terms.is_empty() || t != "0" {
        if terms.is_empty() {
            return Err(bad());
        }
    }
    let mut m = 1u64;
    let mut parsed: Vec<(Q, usize)> = Vec::new();
    for (neg, term) in terms {
        let (coef, mono) = match term.find('z') {
            None => (term.as_str(), None),
            Some(p) => {
                let c = term[..p].trim_end_matches('*').trim();
                (c, Some(&term[p + 1..]))
            }
        };
        let mut q = if coef.is_empty() {
            Q::one()
        } else {
            parse_rational(coef).ok_or_else(bad)?
        };
        if neg {
            q = -q;
        }
        let pow = match mono {
            None => 0,
            Some(mono) => {
                let (mm, e) = match mono.split_once('^') {
                    Some((a, b)) => (a, b.parse::<usize>().map_err(|_| bad())?),
                    None => (mono, 1),
                };
                let mm: u64 = mm.parse().map_err(|_| bad())?;
                if mm == 0 || (m != 1 && mm != m) {
                    return Err(bad());
                }
                m = mm;
                e
            }
        };
        parsed.push((q, pow));
    }
    let mut x = CycloScalar::zero_in(m);
    for (q, pow) in parsed {
        let term = CycloScalar::zeta_pow(m, pow as i64).mul(&CycloScalar::from_rational(m, q));
        x = x.add(&term);
    }
    Ok(x)
}

pub(crate) fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Galois automorphism ζ_m ↦ ζ_m^k of ℚ(ζ_m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisElement {
    pub m: u64,
    pub k: u64,
}

impl GaloisElement {
    pub fn new(m: u64, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as u64;
        assert!(num_integer::gcd(k, m) == 1 || m == 1, "exponent not coprime to conductor");
        GaloisElement { m, k: if m == 1 { 0 } else { k } }
    }

    pub fn identity(m: u64) -> Self {
        Self::new(m, 1)
    }

    pub fn apply(&self, x: &CycloScalar) -> CycloScalar {
        let x = x.embed(num_integer::lcm(self.m, x.conductor()));
        let mm = x.conductor();
        // lift k to the larger conductor: any k' ≡ k mod m, coprime to mm
        let k = lift_exponent(self.k, self.m, mm);
        x.galois(k)
    }

    pub fn compose(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        Self::new(self.m, ((self.k * o.k) % self.m.max(1)) as i64)
    }

    /// The full group (ℤ/m)^*.
    pub fn all(m: u64) -> Vec<Self> {
        if m == 1 {
            return vec![Self::identity(1)];
        }
        (1..m).filter(|&k| num_integer::gcd(k, m) == 1).map(|k| Self::new(m, k as i64)).collect()
    }
}

pub(crate) fn lift_exponent(k: u64, m: u64, mm: u64) -> u64 {
    if mm == m {
        return k.max(1) % mm.max(1);
    }
    let mut c = if m == 1 { 1 } else { k };
    while num_integer::gcd(c, mm) != 1 {
        c += m.max(1);
    }
    c % mm
}

/// Fixed subfield of ℚ(ζ_m) under a set of automorphisms.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedField {
    pub m: u64,
    /// The subgroup of (ℤ/m)^* fixing the field, sorted.
    pub group: Vec<u64>,
    /// Orbit sums of the powers of ζ_m; they span the fixed field.
    pub generators: Vec<CycloScalar>,
}

impl FixedField {
    pub fn of(m: u64, gens: &[GaloisElement]) -> Self {
        let group = subgroup_closure(m, &gens.iter().map(|g| g.k).collect::<Vec<_>>());
        let mut seen = vec![false; m as usize];
        let mut generators = Vec::new();
        for j in 0..m {
            if seen[j as usize] {
                continue;
            }
            let mut sum = CycloScalar::zero_in(m);
            for &k in &group {
                let e = (j * k) % m;
                if !seen[e as usize] {
                    seen[e as usize] = true;
                    sum = sum.add(&CycloScalar::zeta_pow(m, e as i64));
                }
            }
            generators.push(sum);
        }
        FixedField { m, group, generators }
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.m) / self.group.len() as u64
    }

    pub fn contains(&self, x: &CycloScalar) -> bool {
        let x = x.embed(num_integer::lcm(self.m, x.conductor()));
        let mm = x.conductor();
        self.group.iter().all(|&k| x.galois(lift_exponent(k, self.m, mm)) == x)
    }
}

pub fn subgroup_closure(m: u64, gens: &[u64]) -> Vec<u64> {
    let one = 1 % m.max(1);
    let mut set = vec![one];
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = (x * g) % m.max(1);
            if !set.contains(&y) {
                set.push(y);
                frontier.push(y);
            }
        }
    }
    set.sort();
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn zeta4_squared() {
        let z = CycloScalar::zeta_pow(4, 1);
        assert_eq!(z.mul(&z), CycloScalar::from_int_in(4, -1));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = CycloScalar::from_int_in(3, 1)
            .add(&CycloScalar::zeta_pow(3, 1))
            .add(&CycloScalar::zeta_pow(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_one_minus_zeta5() {
        let x = CycloScalar::from_int_in(5, 1).sub(&CycloScalar::zeta_pow(5, 1));
        let y = x.inv().unwrap();
        assert!(y.mul(&x).is_one());
    }

    #[test]
    fn phi_polys() {
        let p12: Vec<i64> = cyclotomic_poly(12).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(p12, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(1).len(), 2);
    }

    #[test]
    fn display_roundtrip() {
        let x = CycloScalar::from_rational(4, q(1, 2)).sub(&CycloScalar::zeta_pow(4, 1).mul(&CycloScalar::from_rational(4, q(1, 2))));
        assert_eq!(x.to_string(), "1/2 - 1/2*z4");
        assert_eq!(CycloScalar::parse("1/2 - 1/2*z4").unwrap(), x);
        let w = CycloScalar::zeta_pow(12, 3).add(&CycloScalar::from_int_in(12, -2));
        assert_eq!(CycloScalar::parse(&w.to_string()).unwrap(), w);
        assert_eq!(CycloScalar::parse("0").unwrap(), CycloScalar::zero_in(1));
        assert!(CycloScalar::parse("1 + z3 + z4").is_err());
    }

    #[test]
    fn conj_on_zeta3() {
        let z = CycloScalar::zeta_pow(3, 1);
        assert_eq!(GaloisElement::new(3, -1).apply(&z), CycloScalar::zeta_pow(3, 2));
        let ff = FixedField::of(3, &[GaloisElement::new(3, -1)]);
        assert_eq!(ff.degree(), 1);
    }

    #[test]
    fn gaussian_period_seven() {
        let ff = FixedField::of(7, &[GaloisElement::new(7, 2)]);
        assert_eq!(ff.degree(), 2);
        let eta = CycloScalar::zeta_pow(7, 1).add(&CycloScalar::zeta_pow(7, 2)).add(&CycloScalar::zeta_pow(7, 4));
        assert!(ff.generators.contains(&eta));
        assert!(ff.contains(&eta));
        assert!(!ff.contains(&CycloScalar::zeta_pow(7, 1)));
    }

    #[test]
    fn embedding_is_multiplicative() {
        let a = CycloScalar::zeta_pow(3, 1).add(&CycloScalar::from_int_in(3, 2));
        let b = CycloScalar::zeta_pow(3, 2);
        assert_eq!(a.mul(&b).embed(12), a.embed(12).mul(&b.embed(12)));
        assert_eq!(a.embed(12), a);
        assert_eq!(a.embed(12).shrink().conductor(), 3);
    }
}
