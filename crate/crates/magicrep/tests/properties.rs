use std::sync::Arc;

use proptest::prelude::*;

use magicrep::algebra::AlgebraElement;
use magicrep::characters::{character_table, induce, inner_product, restrict};
use magicrep::config::Flavor;
use magicrep::group::{GroupTable, Subgroup};
use magicrep::magic::{coboundary, make_magic, setup_char0, CosetSpace, SolverOptions, Status};
use magicrep::modular::{brauer_hom, lift_cocycle};
use magicrep::scalar::{residue_reduction, witt_reduce, CycloScalar, FiniteRing, GaloisElement, ModScalar, Scalar, WittScalar};
use magicrep::spec::{corpus, parse_elements, resolve};

fn cyclo12(c: &[i64]) -> CycloScalar {
    c.iter()
        .enumerate()
        .fold(CycloScalar::zero_in(12), |acc, (k, &v)| acc.add(&CycloScalar::zeta_pow(12, k as i64).mul(&CycloScalar::from_int_in(12, v))))
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms(a in coeffs(), b in coeffs(), c in coeffs()) {
        let (a, b, c) = (cyclo12(&a), cyclo12(&b), cyclo12(&c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn galois_automorphisms(a in coeffs(), b in coeffs(), k in prop::sample::select(vec![1i64, 5, 7, 11])) {
        let g = GaloisElement::new(12, k);
        let (a, b) = (cyclo12(&a), cyclo12(&b));
        prop_assert_eq!(g.apply(&a.mul(&b)), g.apply(&a).mul(&g.apply(&b)));
        prop_assert_eq!(g.apply(&a.add(&b)), g.apply(&a).add(&g.apply(&b)));
    }

    #[test]
    fn reduction_is_a_ring_map(a in coeffs(), b in coeffs()) {
        let res = residue_reduction(12, 5).unwrap();
        let (x, y) = (cyclo12(&a), cyclo12(&b));
        prop_assert_eq!(res.reduce(&x.mul(&y)).unwrap(), res.reduce(&x).unwrap().mul(&res.reduce(&y).unwrap()));
        prop_assert_eq!(res.reduce(&x.add(&y)).unwrap(), res.reduce(&x).unwrap().add(&res.reduce(&y).unwrap()));
        let wm = res.witt(3);
        let wx = wm.reduce(&x).unwrap();
        prop_assert_eq!(witt_reduce(&wx), res.reduce(&x).unwrap());
        prop_assert_eq!(wm.reduce(&x.mul(&y)).unwrap(), wx.mul(&wm.reduce(&y).unwrap()));
    }

    #[test]
    fn group_algebra_associativity(a in prop::collection::vec(-2i64..=2, 6), b in prop::collection::vec(-2i64..=2, 6), c in prop::collection::vec(-2i64..=2, 6)) {
        let g = GroupTable::from_cycle_strings(&["(1,2)", "(1,2,3)"]).unwrap();
        let el = |v: &[i64]| AlgebraElement { g: g.clone(), coeffs: v.iter().map(|&x| CycloScalar::from_int_in(6, x)).collect() };
        let (x, y, z) = (el(&a), el(&b), el(&c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn frobenius_reciprocity(sub in 0usize..64, i in 0usize..16, j in 0usize..16) {
        let g = GroupTable::from_cycle_strings(&["(1,2)", "(1,2,3,4)"]).unwrap();
        let full = g.full();
        let subs = full.all_subgroups();
        let u: Arc<Subgroup> = subs[sub % subs.len()].clone();
        let tg = character_table(&full).unwrap();
        let tu = character_table(&u).unwrap();
        let chi = &tg.irr[i % tg.len()];
        let tau = &tu.irr[j % tu.len()];
        prop_assert_eq!(inner_product(&induce(tau, &full), chi), inner_product(tau, &restrict(chi, &u)));
    }

    #[test]
    fn brauer_hom_is_multiplicative(a in prop::collection::vec(0u64..3, 8), b in prop::collection::vec(0u64..3, 8)) {
        let g = GroupTable::from_cycle_strings(&corpus::SL23_GENS).unwrap();
        let q8 = Subgroup::generated(&g, &parse_elements(&g, &corpus::Q8_GENS.map(String::from)).unwrap());
        let t = parse_elements(&g, &[corpus::SL23_T.to_string()]).unwrap()[0];
        let p = Subgroup::generated(&g, &[t]);
        let f = FiniteRing::new(3, 1, vec![0, 1]);
        let fixed = |v: &[u64]| {
            let mut x = AlgebraElement::<ModScalar>::zero(&g, &f);
            for (&k, &c) in q8.elements().iter().zip(v) {
                x.coeffs[k] = ModScalar::from_int(&f, c as i64);
            }
            p.elements().iter().fold(AlgebraElement::zero(&g, &f), |acc, &h| acc.add(&x.conj(h)))
        };
        let (x, y) = (fixed(&a), fixed(&b));
        let lhs = brauer_hom(&x.mul(&y), &p).unwrap();
        prop_assert_eq!(lhs, brauer_hom(&x, &p).unwrap().mul(&brauer_hom(&y, &p).unwrap()));
    }

    #[test]
    fn lifted_trivializer_is_recovered(c1 in 0i64..27) {
        let t = GroupTable::from_cycle_strings(&["(1,2)"]).unwrap();
        let cs = CosetSpace::new(&t.full(), &Subgroup::generated(&t, &[]));
        let ring = FiniteRing::new(3, 4, vec![0, 1]);
        let c = vec![WittScalar::one(&ring), WittScalar::from_int(&ring, 1 + 3 * c1)];
        let alpha = coboundary(&c, &cs);
        let lambda: Vec<WittScalar> = c.iter().map(|v| v.mul(v)).collect();
        let (mu, _) = lift_cocycle(&alpha, &cs, 2, &lambda).unwrap();
        // Hom(C₂, 1 + 3W) = 1, so the trivializer is c itself
        prop_assert_eq!(mu, c);
    }

    #[test]
    fn magic_scaling_by_characters(k in 0i64..3, junk in 2i64..5) {
        let r = resolve(&corpus::sl23(Flavor::Invariant)).unwrap();
        let setup = setup_char0(&r.config).unwrap();
        let rep = make_magic(&setup, SolverOptions::default()).unwrap();
        let m = setup.ctx();
        let cs = &setup.cosets;
        let t = parse_elements(&r.table, &[corpus::SL23_T.to_string()]).unwrap()[0];
        let xt = cs.of(t);
        // λ(t^j) = ω^{kj} is a character of H/L ≅ C₃
        let lambda: Vec<CycloScalar> = (0..cs.len())
            .map(|x| {
                let j = (0..3).find(|&j| cs.of(r.table.pow(t, j)) == x).unwrap();
                CycloScalar::zeta_pow(3, k * j).embed(m)
            })
            .collect();
        let twisted = rep.rescale(&lambda, Status::Magic).unwrap();
        prop_assert!(twisted.verify().is_ok());
        let mut bad = vec![CycloScalar::from_int_in(m, 1); cs.len()];
        bad[xt] = CycloScalar::from_int_in(m, junk);
        let broken = rep.rescale(&bad, Status::Projective).unwrap();
        prop_assert!(broken.check_conjugation().is_ok());
        prop_assert!(broken.check_multiplicative().is_err());
    }
}
