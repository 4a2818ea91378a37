//! Exact scalar rings: cyclotomic fields, finite fields and truncated
//! unramified p-adic rings, behind one arithmetic trait.

mod cyclo;
mod finite;
mod reduction;

pub use cyclo::{cyclotomic_poly, euler_phi, subgroup_closure, CycloScalar, FixedField, GaloisElement};
pub use finite::{FiniteRing, ModScalar, WittScalar};
pub use reduction::{hensel_root, residue_reduction, witt_lift, witt_reduce, ResidueMap, WittMap};

use std::fmt;

/// Commutative ring arithmetic shared by every scalar type.
///
/// `inv` returns `None` exactly for non-units.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_int(ctx: &Self::Ctx, n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// 0 for characteristic zero rings.
    fn characteristic(ctx: &Self::Ctx) -> u64;
    /// A primitive root of unity of the given order, if the ring has one
    /// (cyclotomic scalars may return an element of a larger conductor).
    fn root_of_unity(ctx: &Self::Ctx, order: u64) -> Option<Self>;
    /// A multiple of the order of `self` when it has finite order; None
    /// when it visibly has none.
    fn torsion_bound(&self) -> Option<u64>;

    fn is_unit(&self) -> bool {
        self.inv().is_some()
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|x| self.mul(&x))
    }
}

/// Extended Euclid on signed integers: returns (g, a, b) with a·x + b·y = g.
pub fn ext_gcd(x: i64, y: i64) -> (i64, i64, i64) {
    if y == 0 {
        if x < 0 {
            (-x, -1, 0)
        } else {
            (x, 1, 0)
        }
    } else {
        let (g, a, b) = ext_gcd(y, x.rem_euclid(y));
        (g, b, a - x.div_euclid(y) * b)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i64 % m as i64, m as i64);
    if g != 1 {
        None
    } else {
        Some(x.rem_euclid(m as i64) as u64)
    }
}

/// Multiplicative order of a ring element, if finite.
pub fn element_order<R: Scalar>(x: &R) -> Option<u64> {
    let bound = x.torsion_bound()?;
    divisors(bound).into_iter().find(|&d| x.pow(d).is_one())
}
