use magicrep::characters::{character_table, inner_product, int_of, CharacterTable};
use magicrep::group::GroupTable;
use magicrep::scalar::{CycloScalar, Scalar};

fn table(gens: &[&str]) -> CharacterTable {
    let g = GroupTable::from_cycle_strings(gens).unwrap();
    character_table(&g.full()).unwrap()
}

fn check_orthogonality(t: &CharacterTable) {
    let sub = &t.sub;
    for (a, x) in t.irr.iter().enumerate() {
        for (b, y) in t.irr.iter().enumerate() {
            let ip = inner_product(x, y);
            assert_eq!(ip.is_one(), a == b, "row orthogonality at ({a},{b})");
            if a != b {
                assert!(ip.is_zero());
            }
        }
    }
    let m = t.conductor;
    let sizes = sub.class_sizes();
    for c in 0..sub.class_count() {
        for d in 0..sub.class_count() {
            let s = t.irr.iter().fold(CycloScalar::zero_in(m), |acc, chi| acc.add(&chi.values[c].mul(&chi.values[d].conj())));
            let expect = if c == d { (sub.order() / sizes[c]) as i64 } else { 0 };
            assert_eq!(s, CycloScalar::from_int_in(m, expect), "column orthogonality at ({c},{d})");
        }
    }
    let sq: i64 = t.irr.iter().map(|c| int_of(c.degree()).pow(2)).sum();
    assert_eq!(sq as usize, sub.order());
}

#[test]
fn cyclic() {
    for (gens, n) in [(vec!["(1,2,3,4,5)"], 5), (vec!["(1,2,3,4,5,6)"], 6), (vec!["(1,2)(3,4,5)"], 6)] {
        let t = table(&gens);
        check_orthogonality(&t);
        assert_eq!(t.degrees(), vec![1; n]);
    }
}

#[test]
fn dihedral() {
    let d8 = table(&["(1,2,3,4)", "(1,3)"]);
    check_orthogonality(&d8);
    assert_eq!(d8.degrees(), vec![1, 1, 1, 1, 2]);
    let d10 = table(&["(1,2,3,4,5)", "(2,5)(3,4)"]);
    check_orthogonality(&d10);
    assert_eq!(d10.degrees(), vec![1, 1, 2, 2]);
}

#[test]
fn quaternion() {
    let t = table(&magicrep::spec::corpus::Q8_GENS);
    check_orthogonality(&t);
    assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
    // the degree-2 character vanishes off the centre
    let two = &t.irr[4];
    assert_eq!(two.values.iter().filter(|v| v.is_zero()).count(), 3);
}

#[test]
fn symmetric_and_alternating() {
    let s3 = table(&["(1,2)", "(1,2,3)"]);
    check_orthogonality(&s3);
    assert_eq!(s3.degrees(), vec![1, 1, 2]);
    let a4 = table(&["(1,2,3)", "(2,3,4)"]);
    check_orthogonality(&a4);
    assert_eq!(a4.degrees(), vec![1, 1, 1, 3]);
    // two linear characters of A₄ take the value ζ₃ on a 3-cycle
    let nonreal = a4.irr.iter().filter(|c| c.values.iter().any(|v| v.to_rational().is_none())).count();
    assert_eq!(nonreal, 2);
}

#[test]
fn sl23() {
    let t = table(&magicrep::spec::corpus::SL23_GENS);
    check_orthogonality(&t);
    assert_eq!(t.degrees(), vec![1, 1, 1, 2, 2, 2, 3]);
    assert_eq!(t.sub.class_count(), 7);
}
