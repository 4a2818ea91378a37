use std::fmt;
use std::sync::Arc;

use super::Scalar;

/// (ℤ/p^N)[t]/(g(t)) for a monic g whose reduction mod p is irreducible.
/// With N = 1 this is GF(p^f).
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FiniteRing {
    pub p: u64,
    pub prec: u32,
    pub q: u64,
    /// Monic modulus, constant term first (length f + 1).
    pub modulus: Vec<u64>,
}

impl FiniteRing {
    pub fn new(p: u64, prec: u32, modulus: Vec<u64>) -> Arc<Self> {
        let q = p.checked_pow(prec).expect("p^N overflows u64");
        assert!(q < (1u64 << 62), "p^N too large");
        assert_eq!(*modulus.last().unwrap() % q, 1, "modulus must be monic");
        let modulus = modulus.into_iter().map(|c| c % q).collect();
        Arc::new(FiniteRing { p, prec, q, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Same modulus read at another precision.
    pub fn with_prec(&self, prec: u32) -> Arc<Self> {
        FiniteRing::new(self.p, prec, self.modulus.clone())
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    fn mul_poly(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.degree();
        let mut prod = vec![0u64; 2 * f.max(1) - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(x, y)) % self.q;
            }
        }
        self.reduce(prod)
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let f = self.degree();
        while v.len() > f {
            let top = v.pop().unwrap();
            if top == 0 {
                continue;
            }
            let k = v.len() - f;
            for j in 0..f {
                let s = self.mulmod(top, self.modulus[j]);
                v[k + j] = (v[k + j] + self.q - s) % self.q;
            }
        }
        v.resize(f, 0);
        v
    }
}

/// Shared element representation of ModScalar and WittScalar.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Elem {
    r: Arc<FiniteRing>,
    c: Vec<u64>,
}

impl Elem {
    fn zero(r: &Arc<FiniteRing>) -> Self {
        Elem { r: r.clone(), c: vec![0; r.degree()] }
    }
    fn from_int(r: &Arc<FiniteRing>, n: i64) -> Self {
        let mut e = Self::zero(r);
        e.c[0] = n.rem_euclid(r.q as i64) as u64;
        e
    }
    fn add(&self, o: &Self) -> Self {
        let q = self.r.q;
        Elem { r: self.r.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % q).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        let q = self.r.q;
        Elem { r: self.r.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| (a + q - b) % q).collect() }
    }
    fn neg(&self) -> Self {
        let q = self.r.q;
        Elem { r: self.r.clone(), c: self.c.iter().map(|a| (q - a) % q).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        Elem { r: self.r.clone(), c: self.r.mul_poly(&self.c, &o.c) }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn residue_zero(&self) -> bool {
        self.c.iter().all(|&x| x % self.r.p == 0)
    }
    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(&self.r, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
    fn inv(&self) -> Option<Self> {
        if self.residue_zero() {
            return None;
        }
        let p = self.r.p;
        let f = self.r.degree() as u32;
        // inverse of the residue via x^{p^f - 2} in GF(p^f), then Newton
        let res_ring = self.r.with_prec(1);
        let res = Elem { r: res_ring.clone(), c: self.c.iter().map(|x| x % p).collect() };
        let order = p.pow(f) - 1;
        let rinv = res.pow(order - 1);
        let mut y = Elem { r: self.r.clone(), c: rinv.c };
        let two = Self::from_int(&self.r, 2);
        let mut prec = 1;
        while prec < self.r.prec {
            y = y.mul(&two.sub(&self.mul(&y)));
            prec *= 2;
        }
        debug_assert!(self.mul(&y) == Self::from_int(&self.r, 1));
        Some(y)
    }
    fn fmt_poly(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (j, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}*t")?,
                (_, 1) => write!(f, "t^{j}")?,
                _ => write!(f, "{a}*t^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn primitive_root<F: Fn(u64) -> Elem>(ring: &Arc<FiniteRing>, elem: F) -> Elem {
    // search elements of GF(p^f)^* in index order for a generator
    let p = ring.p;
    let f = ring.degree() as u32;
    let order = p.pow(f) - 1;
    let primes = super::prime_factors(order);
    for idx in 1..=order {
        let x = elem(idx);
        if primes.iter().all(|&l| x.pow(order / l) != Elem::from_int(ring, 1)) {
            return x;
        }
    }
    Elem::from_int(ring, 1)
}

fn index_elem(ring: &Arc<FiniteRing>, mut idx: u64) -> Elem {
    let mut e = Elem::zero(ring);
    for j in 0..ring.degree() {
        e.c[j] = idx % ring.p;
        idx /= ring.p;
    }
    e
}

/// Element of GF(p^f).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModScalar(Elem);

/// Element of the truncated unramified ring W_N = (ℤ/p^N)[t]/(g).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittScalar(Elem);

macro_rules! ring_impl {
    ($t:ident) => {
        impl $t {
            pub fn ring(&self) -> &Arc<FiniteRing> {
                &self.0.r
            }
            pub fn coeffs(&self) -> &[u64] {
                &self.0.c
            }
            pub fn from_coeffs(r: &Arc<FiniteRing>, c: &[u64]) -> Self {
                let mut v: Vec<u64> = c.iter().map(|x| x % r.q).collect();
                v.resize(r.degree().max(v.len()), 0);
                $t(Elem { r: r.clone(), c: r.reduce(v) })
            }
            /// The generator t of the ring over its prime ring.
            pub fn gen(r: &Arc<FiniteRing>) -> Self {
                Self::from_coeffs(r, &[0, 1])
            }
        }

        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_poly(f)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_poly(f)
            }
        }

        impl Scalar for $t {
            type Ctx = Arc<FiniteRing>;
            fn ctx(&self) -> Arc<FiniteRing> {
                self.0.r.clone()
            }
            fn zero(ctx: &Arc<FiniteRing>) -> Self {
                $t(Elem::zero(ctx))
            }
            fn one(ctx: &Arc<FiniteRing>) -> Self {
                $t(Elem::from_int(ctx, 1))
            }
            fn from_int(ctx: &Arc<FiniteRing>, n: i64) -> Self {
                $t(Elem::from_int(ctx, n))
            }
            fn add(&self, o: &Self) -> Self {
                $t(self.0.add(&o.0))
            }
            fn sub(&self, o: &Self) -> Self {
                $t(self.0.sub(&o.0))
            }
            fn mul(&self, o: &Self) -> Self {
                $t(self.0.mul(&o.0))
            }
            fn neg(&self) -> Self {
                $t(self.0.neg())
            }
            fn is_zero(&self) -> bool {
                self.0.is_zero()
            }
            fn inv(&self) -> Option<Self> {
                self.0.inv().map($t)
            }
            fn is_unit(&self) -> bool {
                !self.0.residue_zero()
            }
            fn characteristic(ctx: &Arc<FiniteRing>) -> u64 {
                ctx.q
            }
            fn torsion_bound(&self) -> Option<u64> {
                let r = &self.0.r;
                let q = r.p.pow(r.degree() as u32);
                self.is_unit().then(|| (q - 1) * r.p.pow(r.prec as u32 - 1))
            }

            fn root_of_unity(ctx: &Arc<FiniteRing>, order: u64) -> Option<Self> {
                let f = ctx.degree() as u32;
                let group = ctx.p.pow(f) - 1;
                if group % order != 0 {
                    return None;
                }
                let res = ctx.with_prec(1);
                let g = primitive_root(&res, |i| index_elem(&res, i));
                let z = Elem { r: ctx.clone(), c: g.c };
                // Teichmüller: z ↦ z^{p^{f(N-1)}} fixes roots of unity of order prime to p
                let t = z.pow(ctx.p.pow(f * (ctx.prec - 1)));
                Some($t(t.pow(group / order)))
            }
        }
    };
}

ring_impl!(ModScalar);
ring_impl!(WittScalar);

impl ModScalar {
    /// Frobenius x ↦ x^p.
    pub fn frobenius(&self) -> Self {
        ModScalar(self.0.pow(self.0.r.p))
    }

    /// Every element of GF(p^f) in a fixed index order.
    pub fn all(r: &Arc<FiniteRing>) -> Vec<Self> {
        let total = r.p.pow(r.degree() as u32);
        (0..total).map(|i| ModScalar(index_elem(r, i))).collect()
    }
}

impl WittScalar {
    pub fn precision(&self) -> u32 {
        self.0.r.prec
    }

    /// p-adic valuation (prec when zero).
    pub fn valuation(&self) -> u32 {
        let p = self.0.r.p;
        let mut v = self.0.r.prec;
        for &c in &self.0.c {
            if c == 0 {
                continue;
            }
            let mut k = 0;
            let mut x = c;
            while x % p == 0 {
                x /= p;
                k += 1;
            }
            v = v.min(k);
        }
        v
    }

    /// Congruence modulo p^k.
    pub fn congruent(&self, o: &Self, k: u32) -> bool {
        let m = self.0.r.p.pow(k.min(self.0.r.prec));
        self.0.c.iter().zip(&o.0.c).all(|(a, b)| a % m == b % m)
    }

    /// Reading at a lower precision.
    /// Teichmüller representative of the residue: the unique root of unity
    /// of order prime to p congruent to self mod p.
    pub fn teichmuller(&self) -> Self {
        let r = &self.0.r;
        let q = r.p.pow(r.degree() as u32);
        WittScalar(self.0.pow(q.pow(r.prec.saturating_sub(1))))
    }

    pub fn truncate(&self, prec: u32) -> Self {
        let r = self.0.r.with_prec(prec);
        WittScalar::from_coeffs(&r, &self.0.c)
    }

    /// Truncated p-adic digits of every coefficient, lowest digit first.
    pub fn expansion(&self) -> String {
        let p = self.0.r.p;
        let parts: Vec<String> = self
            .0
            .c
            .iter()
            .map(|&c| {
                let mut x = c;
                let digits: Vec<String> = (0..self.0.r.prec)
                    .map(|_| {
                        let d = x % p;
                        x /= p;
                        d.to_string()
                    })
                    .collect();
                format!("[{}]", digits.join(","))
            })
            .collect();
        format!("{}-adic {}", p, parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_field() {
        // x^2 + 1 over GF(3)
        let r = FiniteRing::new(3, 1, vec![1, 0, 1]);
        let all = ModScalar::all(&r);
        assert_eq!(all.len(), 9);
        for x in &all[1..] {
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
        let t = ModScalar::gen(&r);
        assert_eq!(t.mul(&t), ModScalar::from_int(&r, -1));
        assert_eq!(t.frobenius(), t.neg());
        let z8 = ModScalar::root_of_unity(&r, 8).unwrap();
        assert!(z8.pow(8).is_one() && !z8.pow(4).is_one());
    }

    #[test]
    fn witt_units() {
        let r = FiniteRing::new(5, 4, vec![2, 1]);
        let x = WittScalar::from_int(&r, 7);
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert!(WittScalar::from_int(&r, 10).inv().is_none());
        assert_eq!(WittScalar::from_int(&r, 50).valuation(), 2);
        let z = WittScalar::root_of_unity(&r, 4).unwrap();
        assert!(z.pow(4).is_one() && !z.pow(2).is_one());
    }
}
