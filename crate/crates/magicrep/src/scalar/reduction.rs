use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{cyclotomic_poly, inv_mod, mult_order, CycloScalar, FiniteRing, ModScalar, Scalar, WittScalar};
use crate::error::{Error, Result};

fn rat_mod(r: &BigRational, p: u64, q: u64) -> Result<u64> {
    let qb = BigInt::from(q);
    let den = r.denom().clone() % &qb;
    let den = ((den + &qb) % &qb).to_u64().unwrap();
    if den % p == 0 {
        return Err(Error::NonIntegral(p));
    }
    let num = ((r.numer() % &qb) + &qb) % &qb;
    let num = num.to_u64().unwrap();
    let inv = inv_mod(den, q).ok_or(Error::NonIntegral(p))?;
    Ok(((num as u128 * inv as u128) % q as u128) as u64)
}

fn poly_rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let top = r.pop().unwrap() % p;
        if top == 0 {
            continue;
        }
        let k = r.len() - db;
        for j in 0..db {
            r[k + j] = (r[k + j] + p * p - top * b[j] % p) % p;
        }
    }
    r
}

/// Reduction ℤ_(p)[ζ_m] → GF(p^f) through the lexicographically least
/// irreducible factor of Φ_m mod p.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    pub m: u64,
    pub p: u64,
    pub f: u32,
    pub field: Arc<FiniteRing>,
}

pub fn residue_reduction(m: u64, p: u64) -> Result<ResidueMap> {
    if m % p == 0 {
        return Err(Error::RamifiedPrime { p, m });
    }
    let f = mult_order(p, m) as u32;
    let phi: Vec<u64> = cyclotomic_poly(m)
        .iter()
        .map(|c| (((c % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p)).to_u64().unwrap())
        .collect();
    let total = p.checked_pow(f).filter(|&t| t <= 50_000_000).ok_or_else(|| {
        Error::Algebra(format!("residue field GF({p}^{f}) too large"))
    })?;
    // enumerate monic degree-f polynomials, coefficient tuple (c_0, …, c_{f-1}) in lexicographic order
    for idx in 0..total {
        let mut g = vec![0u64; f as usize + 1];
        let mut x = idx;
        for j in (0..f as usize).rev() {
            g[j] = x % p;
            x /= p;
        }
        g[f as usize] = 1;
        if poly_rem_mod(&phi, &g, p).iter().all(|&c| c == 0) {
            let field = FiniteRing::new(p, 1, g);
            return Ok(ResidueMap { m, p, f, field });
        }
    }
    Err(Error::Algebra(format!("no degree-{f} factor of Φ_{m} mod {p}")))
}

impl ResidueMap {
    pub fn reduce(&self, x: &CycloScalar) -> Result<ModScalar> {
        let x = fit_conductor(x, self.m)?;
        let t = ModScalar::gen(&self.field);
        let mut acc = ModScalar::zero(&self.field);
        let mut pw = ModScalar::one(&self.field);
        for c in x.coeffs() {
            if !c.is_zero() {
                let v = rat_mod(c, self.p, self.p)?;
                acc = acc.add(&pw.mul(&ModScalar::from_int(&self.field, v as i64)));
            }
            pw = pw.mul(&t);
        }
        Ok(acc)
    }

    /// Image of ζ_m.
    pub fn zeta(&self) -> ModScalar {
        ModScalar::gen(&self.field)
    }

    pub fn witt(&self, prec: u32) -> WittMap {
        WittMap::new(self, prec)
    }
}

/// Reduction ℤ_(p)[ζ_m] → W_N sending ζ_m to the Hensel lift of its residue.
#[derive(Clone, Debug)]
pub struct WittMap {
    pub m: u64,
    pub p: u64,
    pub prec: u32,
    pub ring: Arc<FiniteRing>,
    pub zeta: WittScalar,
}

impl WittMap {
    pub fn new(res: &ResidueMap, prec: u32) -> Self {
        let ring = res.field.with_prec(prec);
        let phi: Vec<i64> = cyclotomic_poly(res.m).iter().map(|c| c.to_i64().unwrap()).collect();
        let approx = WittScalar::gen(&ring);
        let zeta = hensel_root(&phi, &approx).expect("simple root of Φ_m mod p");
        WittMap { m: res.m, p: res.p, prec, ring, zeta }
    }

    pub fn reduce(&self, x: &CycloScalar) -> Result<WittScalar> {
        let x = fit_conductor(x, self.m)?;
        let mut acc = WittScalar::zero(&self.ring);
        let mut pw = WittScalar::one(&self.ring);
        for c in x.coeffs() {
            if !c.is_zero() {
                let v = rat_mod(c, self.p, self.ring.q)?;
                acc = acc.add(&pw.mul(&WittScalar::from_int(&self.ring, v as i64)));
            }
            pw = pw.mul(&self.zeta);
        }
        Ok(acc)
    }
}

fn fit_conductor(x: &CycloScalar, m: u64) -> Result<CycloScalar> {
    let x = if m % x.conductor() != 0 { x.shrink() } else { x.clone() };
    if m % x.conductor() != 0 {
        return Err(Error::Algebra(format!("conductor {} does not divide {}", x.conductor(), m)));
    }
    Ok(x.embed(m))
}

fn eval_poly(poly: &[i64], x: &WittScalar) -> WittScalar {
    let r = x.ctx();
    let mut acc = WittScalar::zero(&r);
    for &c in poly.iter().rev() {
        acc = acc.mul(x).add(&WittScalar::from_int(&r, c));
    }
    acc
}

/// Newton refinement of a simple root of an integer polynomial, starting
/// from an approximation correct mod p and ending correct mod p^N.
pub fn hensel_root(poly: &[i64], approx: &WittScalar) -> Result<WittScalar> {
    let deriv: Vec<i64> = poly.iter().enumerate().skip(1).map(|(k, &c)| c * k as i64).collect();
    let mut x = approx.clone();
    let steps = 64 - (approx.precision() as u64).leading_zeros() + 1;
    for _ in 0..steps {
        let fx = eval_poly(poly, &x);
        if fx.is_zero() {
            break;
        }
        let d = eval_poly(&deriv, &x).inv().ok_or_else(|| Error::NotInvertible("derivative at root".into()))?;
        x = x.sub(&fx.mul(&d));
    }
    if !eval_poly(poly, &x).is_zero() {
        return Err(Error::Algebra("Newton iteration did not converge".into()));
    }
    Ok(x)
}

/// Coefficientwise lift of the canonical representatives.
pub fn witt_lift(x: &ModScalar, prec: u32) -> WittScalar {
    let r = x.ring().with_prec(prec);
    WittScalar::from_coeffs(&r, x.coeffs())
}

pub fn witt_reduce(w: &WittScalar) -> ModScalar {
    let r = w.ring().with_prec(1);
    ModScalar::from_coeffs(&r, w.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_mod_three() {
        let red = residue_reduction(1, 3).unwrap();
        let half = CycloScalar::from_rational(1, BigRational::new(1.into(), 2.into()));
        assert_eq!(red.reduce(&half).unwrap(), ModScalar::from_int(&red.field, 2));
        let third = CycloScalar::from_rational(1, BigRational::new(1.into(), 3.into()));
        assert!(red.reduce(&third).is_err());
    }

    #[test]
    fn zeta8_mod_three() {
        let red = residue_reduction(8, 3).unwrap();
        assert_eq!(red.f, 2);
        let z = red.zeta();
        assert!(z.pow(8).is_one() && !z.pow(4).is_one());
        assert!(residue_reduction(6, 3).is_err());
    }

    #[test]
    fn zeta3_mod_seven() {
        let red = residue_reduction(3, 7).unwrap();
        assert_eq!(red.f, 1);
        let z = red.zeta();
        let val = z.coeffs()[0];
        assert!(val == 2 || val == 4);
    }

    #[test]
    fn hensel_sqrt_minus_one() {
        let r = FiniteRing::new(5, 4, vec![0, 1]);
        let approx = WittScalar::from_int(&r, 2);
        let root = hensel_root(&[1, 0, 1], &approx).unwrap();
        assert!(root.mul(&root).add(&WittScalar::one(&r)).is_zero());
        assert!(root.congruent(&approx, 1));
    }

    #[test]
    fn witt_map_consistent_with_residue() {
        let red = residue_reduction(12, 5).unwrap();
        let w = red.witt(3);
        let x = CycloScalar::zeta_pow(12, 1).add(&CycloScalar::zeta_pow(12, 5));
        assert_eq!(witt_reduce(&w.reduce(&x).unwrap()), red.reduce(&x).unwrap());
        assert!(w.zeta.pow(12).is_one());
    }
}
