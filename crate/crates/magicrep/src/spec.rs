//! JSON run specifications and their resolution into configurations.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::{ambient_conductor, character_table, int_of, rationals, ClassFunction};
use crate::config::{validate_configuration, Configuration, Flavor, RawConfiguration};
use crate::error::{Error, Result};
use crate::group::{GroupTable, Perm, Subgroup};
use crate::scalar::{CycloScalar, FixedField, GaloisElement, Scalar};

/// Picks an irreducible character by degree and, optionally, values at
/// named elements; `nth` breaks remaining ties in table order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharSelector {
    pub degree: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nth: Option<usize>,
    /// Selects the trivial character.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub trivial: bool,
}

impl CharSelector {
    pub fn degree(d: i64) -> Self {
        CharSelector { degree: d, ..Default::default() }
    }

    pub fn with(mut self, elem: &str, value: &str) -> Self {
        self.values.insert(elem.into(), value.into());
        self
    }

    pub fn trivial() -> Self {
        CharSelector { degree: 1, trivial: true, ..Default::default() }
    }

    pub fn nth(mut self, k: usize) -> Self {
        self.nth = Some(k);
        self
    }
}

/// F as the fixed field of the Galois automorphisms ζ ↦ ζ^k listed;
/// absent means ℚ.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_by: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gens: Vec<String>,
    /// Generators of G inside the generated group (default: all of it).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<String>>,
    pub k: Vec<String>,
    pub h: Vec<String>,
    pub theta: CharSelector,
    pub phi: CharSelector,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub flavor: Flavor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    /// Generators of the defect group P (modular flavor).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect_group: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skip: Vec<String>,
}

impl RunSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("spec: {e}")))
    }
}

/// A resolved spec: the validated configuration plus the optional P.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub table: Arc<GroupTable>,
    pub config: Configuration,
    pub defect_group: Option<Arc<Subgroup>>,
}

pub fn parse_elements(table: &Arc<GroupTable>, gens: &[String]) -> Result<Vec<usize>> {
    gens.iter()
        .map(|s| {
            let p = Perm::parse_cycles(s, table.degree())?;
            table.index_of(&p).ok_or_else(|| Error::Parse(format!("{s} is not in G")))
        })
        .collect()
}

pub fn parse_subgroup(table: &Arc<GroupTable>, gens: &[String]) -> Result<Arc<Subgroup>> {
    Ok(Subgroup::generated(table, &parse_elements(table, gens)?))
}

pub fn select_character(sub: &Arc<Subgroup>, sel: &CharSelector) -> Result<ClassFunction> {
    let table = character_table(sub)?;
    let g = sub.group();
    let mut wanted = Vec::new();
    for (elem, v) in &sel.values {
        let x = parse_elements(g, std::slice::from_ref(elem))?[0];
        if !sub.contains(x) {
            return Err(Error::Parse(format!("{elem} is not in the subgroup")));
        }
        let value = CycloScalar::parse(v)?.embed(ambient_conductor(sub));
        wanted.push((x, value));
    }
    let hits: Vec<&ClassFunction> = table
        .irr
        .iter()
        .filter(|c| int_of(c.degree()) == sel.degree && wanted.iter().all(|(x, v)| c.at(*x) == v))
        .filter(|c| !sel.trivial || c.values.iter().all(|v| v.is_one()))
        .collect();
    match (hits.len(), sel.nth) {
        (0, _) => Err(Error::Validation(format!("no irreducible character matches selector of degree {}", sel.degree))),
        (_, Some(k)) => hits
            .get(k)
            .map(|c| (*c).clone())
            .ok_or_else(|| Error::Validation(format!("selector index {k} out of range"))),
        (1, None) => Ok(hits[0].clone()),
        (n, None) => Err(Error::Validation(format!("character selector is ambiguous ({n} matches)"))),
    }
}

pub fn group_of(spec: &RunSpec) -> Result<Arc<GroupTable>> {
    let gens: Vec<&str> = spec.gens.iter().map(String::as_str).collect();
    GroupTable::from_cycle_strings(&gens)
}

pub fn resolve(spec: &RunSpec) -> Result<Resolved> {
    resolve_in(&group_of(spec)?, spec)
}

/// Resolution inside an existing table, so that several specs share it.
pub fn resolve_in(table: &Arc<GroupTable>, spec: &RunSpec) -> Result<Resolved> {
    let table = table.clone();
    let g = match &spec.g {
        None => table.full(),
        Some(gs) => parse_subgroup(&table, gs)?,
    };
    let k = parse_subgroup(&table, &spec.k)?;
    let h = parse_subgroup(&table, &spec.h)?;
    let m = ambient_conductor(&g);
    let field = match &spec.field.fixed_by {
        None => rationals(m),
        Some(ks) => {
            let gal = ks
                .iter()
                .map(|&k| {
                    if crate::scalar::gcd(k.rem_euclid(m as i64) as u64, m) != 1 {
                        return Err(Error::Parse(format!("{k} is not a unit mod {m}")));
                    }
                    Ok(GaloisElement::new(m, k))
                })
                .collect::<Result<Vec<_>>>()?;
            FixedField::of(m, &gal)
        }
    };
    let theta = select_character(&k, &spec.theta)?;
    let l = h.intersection(&k);
    let phi = select_character(&l, &spec.phi)?;
    let raw = RawConfiguration { g, k, h, theta, phi, field, prime: spec.prime, flavor: spec.flavor };
    let config = validate_configuration(raw)?;
    let defect_group = spec.defect_group.as_ref().map(|d| parse_subgroup(&table, d)).transpose()?;
    Ok(Resolved { table, config, defect_group })
}

/// Specs used throughout tests and examples.
pub mod corpus {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    pub const SL23_GENS: [&str; 2] = ["(1,6,2,3)(4,7,8,5)", "(1,4,7)(2,8,5)"];
    pub const Q8_GENS: [&str; 2] = ["(1,6,2,3)(4,7,8,5)", "(1,5,2,7)(3,4,6,8)"];
    pub const SL23_T: &str = "(1,4,7)(2,8,5)";
    pub const SL23_Z: &str = "(1,2)(3,6)(4,8)(5,7)";

    /// SL(2,3) with K = Q₈, H = ⟨t, z⟩ ≅ C₆, θ of degree 2, φ the sign of L = ⟨z⟩.
    pub fn sl23(flavor: Flavor) -> RunSpec {
        RunSpec {
            name: Some("SL(2,3) over Q8".into()),
            g: None,
            gens: s(&SL23_GENS),
            k: s(&Q8_GENS),
            h: s(&[SL23_T, SL23_Z]),
            theta: CharSelector::degree(2),
            phi: CharSelector::degree(1).with(SL23_Z, "-1"),
            field: FieldSpec::default(),
            prime: (flavor == Flavor::ModularGlauberman).then_some(3),
            flavor,
            precision: None,
            defect_group: (flavor == Flavor::ModularGlauberman).then(|| s(&[SL23_T])),
            skip: vec![],
        }
    }

    fn trivial_theta(name: &str, gens: &[&str], k: &[&str], h: &[&str]) -> RunSpec {
        RunSpec {
            name: Some(name.into()),
            g: None,
            gens: s(gens),
            k: s(k),
            h: s(h),
            theta: CharSelector::trivial(),
            phi: CharSelector::trivial(),
            field: FieldSpec::default(),
            prime: None,
            flavor: Flavor::Invariant,
            precision: None,
            defect_group: None,
            skip: vec![],
        }
    }

    pub fn s3_trivial() -> RunSpec {
        trivial_theta("S3, K = A3, theta = 1", &["(1,2)", "(1,2,3)"], &["(1,2,3)"], &["(1,2)"])
    }

    pub fn a4_trivial() -> RunSpec {
        trivial_theta("A4, K = V4, theta = 1", &["(1,2,3)", "(1,2)(3,4)"], &["(1,2)(3,4)", "(1,3)(2,4)"], &["(1,2,3)"])
    }

    pub fn d8_trivial() -> RunSpec {
        trivial_theta("D8, K = C4, theta = 1", &["(1,2,3,4)", "(1,3)"], &["(1,2,3,4)"], &["(1,3)"])
    }

    pub fn s4_trivial() -> RunSpec {
        trivial_theta(
            "S4, K = V4, theta = 1",
            &["(1,2,3,4)", "(1,2)"],
            &["(1,2)(3,4)", "(1,3)(2,4)"],
            &["(1,2,3)", "(1,2)"],
        )
    }

    /// A₄ with θ a non-trivial linear character of V₄ stabilized only by V₄:
    /// not H-invariant, so validation fails.
    pub fn a4_noninvariant() -> RunSpec {
        let mut r = a4_trivial();
        r.theta = CharSelector::degree(1).with("(1,2)(3,4)", "1").with("(1,3)(2,4)", "-1");
        r
    }

    /// S₄ over V₄ with θ = 1, H = D₈ (n = 1 with a non-trivial L).
    pub fn s4_d8() -> RunSpec {
        trivial_theta("S4, K = A4, H = D8", &["(1,2,3,4)", "(1,2)"], &["(1,2,3)", "(1,2)(3,4)"], &["(1,2,3,4)", "(1,3)"])
    }

    /// G = H = S₃, K = L = C₃, θ = φ faithful, F = ℚ.
    pub fn s3_semi() -> RunSpec {
        RunSpec {
            name: Some("S3 semi-invariant".into()),
            g: None,
            gens: s(&["(1,2)", "(1,2,3)"]),
            k: s(&["(1,2,3)"]),
            h: s(&["(1,2)", "(1,2,3)"]),
            theta: CharSelector::degree(1).with("(1,2,3)", "z3"),
            phi: CharSelector::degree(1).with("(1,2,3)", "z3"),
            field: FieldSpec::default(),
            prime: None,
            flavor: Flavor::SemiInvariant,
            precision: None,
            defect_group: None,
            skip: vec![],
        }
    }

    /// S₃ at p = 2: K = A₃, H = P = ⟨(1,2)⟩, θ = φ = 1.
    pub fn s3_glauberman() -> RunSpec {
        RunSpec {
            name: Some("S3 Glauberman, p = 2".into()),
            g: None,
            gens: s(&["(1,2)", "(1,2,3)"]),
            k: s(&["(1,2,3)"]),
            h: s(&["(1,2)"]),
            theta: CharSelector::trivial(),
            phi: CharSelector::trivial(),
            field: FieldSpec::default(),
            prime: Some(2),
            flavor: Flavor::ModularGlauberman,
            precision: None,
            defect_group: Some(s(&["(1,2)"])),
            skip: vec![],
        }
    }

    /// SL(2,3) × S₃ on 11 points, with K = Q₈ × A₃ and H = ⟨t, z⟩ × ⟨(9,10)⟩,
    /// split through U = H₁ × S₃ and N = ⟨z⟩ × A₃. Returns (outer, step 1, step 2).
    pub fn tower() -> (RunSpec, RunSpec, RunSpec) {
        let gens = s(&[SL23_GENS[0], SL23_GENS[1], "(9,10)", "(9,10,11)"]);
        let k = s(&[Q8_GENS[0], Q8_GENS[1], "(9,10,11)"]);
        let u = s(&[SL23_T, SL23_Z, "(9,10)", "(9,10,11)"]);
        let n = s(&[SL23_Z, "(9,10,11)"]);
        let h = s(&[SL23_T, SL23_Z, "(9,10)"]);
        let theta = CharSelector::degree(2).with("(9,10,11)", "2");
        let eta = CharSelector::degree(1).with(SL23_Z, "-1").with("(9,10,11)", "1");
        let phi = CharSelector::degree(1).with(SL23_Z, "-1");
        let base = RunSpec {
            name: Some("SL(2,3) x S3 tower".into()),
            gens,
            g: None,
            k: k.clone(),
            h: h.clone(),
            theta: theta.clone(),
            phi: phi.clone(),
            field: FieldSpec::default(),
            prime: None,
            flavor: Flavor::Invariant,
            precision: None,
            defect_group: None,
            skip: vec![],
        };
        let step1 = RunSpec { h: u.clone(), phi: eta.clone(), ..base.clone() };
        let step2 = RunSpec { g: Some(u), k: n, h, theta: eta, phi, ..base.clone() };
        (base, step1, step2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_sl23() {
        let r = resolve(&corpus::sl23(Flavor::Invariant)).unwrap();
        assert_eq!(r.table.order(), 24);
        assert_eq!(r.config.k.order(), 8);
        assert_eq!(r.config.h.order(), 6);
        assert_eq!(r.config.l.order(), 2);
        assert_eq!(r.config.n, 2);
    }

    #[test]
    fn json_round_trip() {
        let spec = corpus::s3_trivial();
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(RunSpec::from_json(&s).unwrap(), spec);
        assert!(matches!(RunSpec::from_json("{"), Err(Error::Parse(_))));
    }
}
