//! Configurations (G, H, K, L, θ, φ) and their validation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::{field_of_values, inner_product, int_of, restrict, semi_invariance, ClassFunction, SemiInvariance};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::scalar::{FixedField, GaloisElement, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Invariant,
    SemiInvariant,
    ModularGlauberman,
}

/// Unvalidated inputs; L is derived as H ∩ K.
#[derive(Clone, Debug)]
pub struct RawConfiguration {
    pub g: Arc<Subgroup>,
    pub k: Arc<Subgroup>,
    pub h: Arc<Subgroup>,
    pub theta: ClassFunction,
    pub phi: ClassFunction,
    pub field: FixedField,
    pub prime: Option<u64>,
    pub flavor: Flavor,
}

#[derive(Clone, Debug)]
pub struct Configuration {
    pub g: Arc<Subgroup>,
    pub k: Arc<Subgroup>,
    pub h: Arc<Subgroup>,
    pub l: Arc<Subgroup>,
    pub theta: ClassFunction,
    pub phi: ClassFunction,
    /// Base field F as a fixed field inside ℚ(ζ_M).
    pub field: FixedField,
    pub prime: Option<u64>,
    pub flavor: Flavor,
    /// n = (θ_L, φ).
    pub n: usize,
    /// h ↦ γ_h for the semi-invariant flavors.
    pub gamma: Option<SemiInvariance>,
}

impl Configuration {
    pub fn conductor(&self) -> u64 {
        self.field.m
    }

    /// Gal(F(θ)/F) as exponents (identity first).
    pub fn galois_packet(&self) -> Vec<GaloisElement> {
        let ft = field_of_values(&self.theta, &self.field);
        crate::characters::galois_group_over(&ft, &self.field)
    }

    pub fn theta_degree(&self) -> i64 {
        int_of(self.theta.degree())
    }

    pub fn phi_degree(&self) -> i64 {
        int_of(self.phi.degree())
    }
}

fn is_irreducible(chi: &ClassFunction) -> bool {
    inner_product(chi, chi).is_one() && chi.degree().to_integer().is_some_and(|d| d > 0.into())
}

fn p_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

fn defect_zero(chi: &ClassFunction, p: u64) -> bool {
    p_part(int_of(chi.degree()) as u64, p) == p_part(chi.sub.order() as u64, p)
}

pub fn validate_configuration(raw: RawConfiguration) -> Result<Configuration> {
    let RawConfiguration { g, k, h, theta, phi, field, prime, flavor } = raw;
    let err = |s: &str| Err(Error::Validation(s.to_string()));
    let table = g.group();
    if !Arc::ptr_eq(table, k.group()) || !Arc::ptr_eq(table, h.group()) {
        return err("subgroups live in different tables");
    }
    if !k.is_subgroup_of(&g) {
        return err("K not a subgroup of G");
    }
    if !h.is_subgroup_of(&g) {
        return err("H not a subgroup of G");
    }
    if !k.is_normal_in(&g) {
        return err("K not normal");
    }
    let l = h.intersection(&k);
    if h.order() * k.order() != g.order() * l.order() {
        return err("G ≠ HK");
    }
    if *theta.sub != *k {
        return err("θ is not a character of K");
    }
    if *phi.sub != *l {
        return err("φ is not a character of L = H ∩ K");
    }
    if !is_irreducible(&theta) {
        return err("θ not irreducible");
    }
    if !is_irreducible(&phi) {
        return err("φ not irreducible");
    }
    let n = int_of(&inner_product(&restrict(&theta, &l), &phi));
    if n <= 0 {
        return err("n = 0");
    }
    let mut gamma = None;
    match flavor {
        Flavor::Invariant => {
            for &x in h.generators() {
                if theta.conjugate_by(x) != theta {
                    return err("θ not H-invariant");
                }
                if phi.conjugate_by(x) != phi {
                    return err("φ not H-invariant");
                }
            }
            if field_of_values(&theta, &field).group != field.group {
                return err("F(θ) ≠ F");
            }
            if field_of_values(&phi, &field).group != field.group {
                return err("F(φ) ≠ F");
            }
        }
        Flavor::SemiInvariant | Flavor::ModularGlauberman => {
            if field_of_values(&phi, &field).group != field_of_values(&theta, &field).group {
                return err("F(φ) ≠ F(θ)");
            }
            let si = semi_invariance(&theta, &h, &field)?;
            for &(x, e) in &si.gamma {
                let a = GaloisElement::new(field.m, e as i64);
                if phi.conjugate_by(x).galois(&a) != phi {
                    return Err(Error::Validation(format!(
                        "no γ_h exists for h = {}",
                        table.element(x).to_cycles()
                    )));
                }
            }
            gamma = Some(si);
        }
    }
    if flavor == Flavor::ModularGlauberman {
        let p = prime.ok_or_else(|| Error::Validation("modular flavor needs a prime".into()))?;
        if !defect_zero(&theta, p) {
            return err("θ not of p-defect zero");
        }
        if !defect_zero(&phi, p) {
            return err("φ not of p-defect zero");
        }
    }
    Ok(Configuration { g, k, h, l, theta, phi, field, prime, flavor, n: n as usize, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{character_table, rationals};
    use crate::group::GroupTable;

    #[test]
    fn s3_configurations() {
        let t = GroupTable::from_cycle_strings(&["(1,2)", "(1,2,3)"]).unwrap();
        let g = t.full();
        let c3 = t.index_of(&crate::group::Perm::parse_cycles("(1,2,3)", 3).unwrap()).unwrap();
        let tr = t.index_of(&crate::group::Perm::parse_cycles("(1,2)", 3).unwrap()).unwrap();
        let k = Subgroup::generated(&t, &[c3]);
        let h = Subgroup::generated(&t, &[tr]);
        let l = h.intersection(&k);
        let raw = RawConfiguration {
            g: g.clone(),
            k: k.clone(),
            h: h.clone(),
            theta: ClassFunction::trivial(&k),
            phi: ClassFunction::trivial(&l),
            field: rationals(6),
            prime: None,
            flavor: Flavor::Invariant,
        };
        let c = validate_configuration(raw.clone()).unwrap();
        assert_eq!(c.n, 1);
        assert_eq!(c.l.order(), 1);
        let bad = RawConfiguration { k: h.clone(), h: k.clone(), theta: ClassFunction::trivial(&h), ..raw.clone() };
        assert_eq!(validate_configuration(bad).unwrap_err(), Error::Validation("K not normal".into()));
        // semi-invariant: G = H = S₃, K = L = C₃, θ = φ faithful
        let kt = character_table(&k).unwrap();
        let faithful = kt.irr.iter().find(|c| !c.values.iter().all(|v| v.is_one())).unwrap().clone();
        let semi = RawConfiguration {
            g: g.clone(),
            k: k.clone(),
            h: g.clone(),
            theta: faithful.clone(),
            phi: faithful.clone(),
            field: rationals(6),
            prime: None,
            flavor: Flavor::SemiInvariant,
        };
        let c = validate_configuration(semi.clone()).unwrap();
        assert_eq!(c.n, 1);
        assert!(validate_configuration(RawConfiguration { flavor: Flavor::Invariant, ..semi }).is_err());
    }
}
