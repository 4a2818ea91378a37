//! One PASS/FAIL line per acceptance criterion.

use std::time::{Duration, Instant};

use magicrep::algebra::{central_idempotent, full_idempotent_check, product_idempotent, trace_idempotent, verify_fullness};
use magicrep::characters::{above, character_table, ClassFunction};
use magicrep::config::{Configuration, Flavor};
use magicrep::correspondence::{compose, iota_apply, iota_table, oracle_table, verify_theorem, VerdictStatus};
use magicrep::group::GroupTable;
use magicrep::magic::{
    extract_cocycle, make_magic, make_magic_cyclo, projective_rep, setup_char0, trivialize_cocycle, SolverOptions, Trivialization,
};
use magicrep::modular::{
    block_bijection_check, glauberman_setup, integral_iso_check, lift_cocycle, lift_magic, magic_glauberman, setup_modular,
    unnormalize, GlaubermanSetup,
};
use magicrep::scalar::{gcd, witt_reduce, CycloScalar, FiniteRing, Scalar, WittScalar};
use magicrep::spec::{corpus, group_of, parse_elements, resolve, resolve_in, RunSpec};

const CHARACTER_BUDGET: Duration = Duration::from_secs(60);
const SL23_BUDGET: Duration = Duration::from_secs(10);
const LIFT_PRECISION: u32 = 4;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn config(spec: &RunSpec) -> Result<Configuration, String> {
    Ok(e(resolve(spec))?.config)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let corpus: Vec<(&str, Vec<&str>, Vec<i64>)> = vec![
        ("C5", vec!["(1,2,3,4,5)"], vec![1; 5]),
        ("C6", vec!["(1,2,3,4,5,6)"], vec![1; 6]),
        ("D8", vec!["(1,2,3,4)", "(1,3)"], vec![1, 1, 1, 1, 2]),
        ("D10", vec!["(1,2,3,4,5)", "(2,5)(3,4)"], vec![1, 1, 2, 2]),
        ("Q8", corpus::Q8_GENS.to_vec(), vec![1, 1, 1, 1, 2]),
        ("S3", vec!["(1,2)", "(1,2,3)"], vec![1, 1, 2]),
        ("A4", vec!["(1,2,3)", "(2,3,4)"], vec![1, 1, 1, 3]),
        ("SL(2,3)", corpus::SL23_GENS.to_vec(), vec![1, 1, 1, 2, 2, 2, 3]),
    ];
    for (name, gens, degrees) in &corpus {
        let g = e(GroupTable::from_cycle_strings(gens))?;
        let t = e(character_table(&g.full()))?;
        ensure(t.degrees() == *degrees, format!("{name}: degrees {:?}", t.degrees()))?;
        let sq: i64 = degrees.iter().map(|d| d * d).sum();
        ensure(sq as usize == g.order(), format!("{name}: Σχ(1)² ≠ |G|"))?;
        for (a, x) in t.irr.iter().enumerate() {
            for (b, y) in t.irr.iter().enumerate() {
                let ip = magicrep::characters::inner_product(x, y);
                ensure(if a == b { ip.is_one() } else { ip.is_zero() }, format!("{name}: rows {a},{b}"))?;
            }
        }
        let sizes = t.sub.class_sizes();
        for c in 0..sizes.len() {
            for d in 0..sizes.len() {
                let s = t.irr.iter().fold(CycloScalar::zero_in(t.conductor), |acc, chi| acc.add(&chi.values[c].mul(&chi.values[d].conj())));
                let want = if c == d { (g.order() / sizes[c]) as i64 } else { 0 };
                ensure(s == CycloScalar::from_int_in(t.conductor, want), format!("{name}: columns {c},{d}"))?;
            }
        }
    }
    let took = start.elapsed();
    ensure(took <= CHARACTER_BUDGET, format!("took {took:?}"))?;
    Ok(format!("{} groups, exact orthogonality, {:.2?} (budget {:?})", corpus.len(), took, CHARACTER_BUDGET))
}

fn criterion_2() -> Outcome {
    let specs = [
        corpus::sl23(Flavor::Invariant),
        corpus::s3_trivial(),
        corpus::a4_trivial(),
        corpus::d8_trivial(),
        corpus::s4_trivial(),
        corpus::s4_d8(),
        corpus::s3_semi(),
    ];
    let mut checked = 0;
    for spec in &specs {
        let c = config(spec)?;
        let name = spec.name.clone().unwrap_or_default();
        let et = central_idempotent(&c.theta);
        let ep = central_idempotent(&c.phi);
        let tt = trace_idempotent(&c.theta, &c.field);
        let tp = trace_idempotent(&c.phi, &c.field);
        ensure(et.is_idempotent() && et.commutes_with_group(c.k.generators()), format!("{name}: e_θ"))?;
        ensure(ep.is_idempotent() && ep.commutes_with_group(c.l.generators()), format!("{name}: e_φ"))?;
        ensure(tt.is_idempotent() && tt.commutes_with_group(c.g.generators()), format!("{name}: e_(θ,F)"))?;
        ensure(tp.is_idempotent() && tp.commutes_with_group(c.h.generators()), format!("{name}: e_(φ,F)"))?;
        let i = e(product_idempotent(&c))?;
        ensure(i.is_idempotent() && i.commutes_with_group(c.h.generators()), format!("{name}: i"))?;
        let setup = e(setup_char0(&c))?;
        let z = setup.z.dim();
        ensure(setup.s.dim() == c.n * c.n * z, format!("{name}: dim S = {}", setup.s.dim()))?;
        ensure(c.flavor != Flavor::Invariant || z == 1, format!("{name}: Z(S) ≠ F"))?;
        let n = CycloScalar::from_int_in(c.conductor(), c.n as i64);
        let tr = setup.trace.trace(&i);
        ensure(tr == n, format!("{name}: tr(i) = {tr}, n = {}, dim Z = {z}", c.n))?;
        let cert = e(full_idempotent_check(&i, &tt, &c.k))?.ok_or(format!("{name}: i not full"))?;
        ensure(verify_fullness(&i, &tt, &cert), format!("{name}: fullness certificate"))?;
        checked += 1;
    }
    Ok(format!("{checked} configurations: idempotents, dim S = n²·dim Z, tr(i) = n, fullness by multiplication"))
}

fn sl23_t(c: &Configuration) -> usize {
    parse_elements(c.g.group(), &[corpus::SL23_T.to_string()]).unwrap()[0]
}

fn glauberman(spec: &RunSpec, p: u64) -> Result<GlaubermanSetup, String> {
    let r = e(resolve(spec))?;
    let c = &r.config;
    e(glauberman_setup(&c.g, &c.k, r.defect_group.as_ref().ok_or("no P")?, p, &c.theta, &c.field))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let c = config(&corpus::sl23(Flavor::Invariant))?;
    ensure(c.h.order() == 6 && c.l.order() == 2 && c.n == 2, "configuration shape")?;
    let setup = e(setup_char0(&c))?;
    let rep = e(make_magic(&setup, SolverOptions::default()))?;
    let t = sl23_t(&c);
    let x = setup.cosets.of(t);
    let s = &rep.sigma[x];
    ensure(s.mul(s).mul(s) == setup.i, "σ(t)³ ≠ i over ℚ")?;
    let mut psi: Vec<String> = rep.psi().iter().map(|v| v.to_string()).collect();
    psi.sort();
    ensure(psi == ["-1", "-1", "2"], format!("ψ = {psi:?}"))?;
    let gs = glauberman(&corpus::sl23(Flavor::ModularGlauberman), 3)?;
    let msetup = e(setup_modular(&gs))?;
    let mrep = e(make_magic(&msetup, SolverOptions::default()))?;
    let ms = &mrep.sigma[msetup.cosets.of(t)];
    ensure(ms.mul(ms).mul(ms) == msetup.i, "σ(t)³ ≠ ī over GF(3)")?;
    let report = e(verify_theorem(&rep, &c, &[]))?;
    for id in ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "x", "xi"] {
        let v = report.verdict(id).ok_or(format!("no verdict {id}"))?;
        ensure(v.status == VerdictStatus::Pass, format!("property ({id}): {:?} {}", v.status, v.detail))?;
    }
    let table = e(iota_table(&rep, &c))?;
    let mut images: Vec<usize> = table.iter().filter_map(|(_, im)| *im).collect();
    images.sort();
    images.dedup();
    let th = e(character_table(&c.h))?;
    ensure(table.len() == 3 && images.len() == 3 && th.above(&c.phi).len() == 3, "ι is not 3 ↔ 3")?;
    let tg = e(character_table(&c.g))?;
    for j in tg.above(&c.theta) {
        let chi = &tg.irr[j];
        let part = e(above(&magicrep::characters::restrict(chi, &c.h), &c.phi, &th))?;
        let iota = iota_apply(&rep, chi, &c.h);
        let prod = ClassFunction::from_fn(&c.h, |h| rep.psi_of(h).mul(iota.at(h)));
        ensure(part == prod, format!("(χ_H)_φ ≠ ψχ^ι for χ_{j}"))?;
    }
    let took = start.elapsed();
    ensure(took <= SL23_BUDGET, format!("took {took:?}"))?;
    Ok(format!("ℚ and GF(3) magic, σ(t)³ = i, ψ = (2,-1,-1), ι 3↔3, (i)-(viii),(x),(xi) pass, {:.2?} (budget {:?})", took, SL23_BUDGET))
}

fn criterion_4() -> Outcome {
    let specs = [corpus::sl23(Flavor::Invariant), corpus::s3_trivial(), corpus::a4_trivial(), corpus::d8_trivial(), corpus::s4_trivial()];
    for spec in &specs {
        let name = spec.name.clone().unwrap_or_default();
        let c = config(spec)?;
        let setup = e(setup_char0(&c))?;
        ensure(gcd(c.n as u64, setup.cosets.len() as u64) == 1, format!("{name}: not coprime"))?;
        let raw = e(projective_rep(&setup, SolverOptions::default()))?;
        let (_, alpha) = e(extract_cocycle(&raw))?;
        let alpha = alpha.ok_or(format!("{name}: cocycle not scalar"))?;
        let nu = e(raw.norms())?;
        match trivialize_cocycle(&alpha, c.n, &setup.cosets, Some(&nu)) {
            Trivialization::Bezout { .. } | Trivialization::Trivial => {}
            other => return Err(format!("{name}: {}", other.describe())),
        }
        let a = e(make_magic(&setup, SolverOptions::default()))?;
        let b = e(make_magic(&setup, SolverOptions { reverse: true }))?;
        ensure(e(iota_table(&a, &c))? == e(iota_table(&b, &c))?, format!("{name}: ι tables differ"))?;
    }
    Ok(format!("{} coprime configurations: Bezout succeeds, forward/reversed ι tables agree", specs.len()))
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for (spec, p) in [(corpus::s3_glauberman(), 2), (corpus::sl23(Flavor::ModularGlauberman), 3)] {
        let name = spec.name.clone().unwrap_or_default();
        let gs = glauberman(&spec, p)?;
        let gr = e(magic_glauberman(&gs))?;
        ensure(gr.dade.passed(), format!("{name}: Dade {:?}", gr.dade))?;
        ensure(gr.dade.dim as u64 % p == 1, format!("{name}: dim S mod p"))?;
        let bc = e(block_bijection_check(&gr.rep, &gs))?;
        ensure(bc.passed() && bc.pairs.iter().all(|x| x.brauer_ok), format!("{name}: {:?}", bc.failures))?;
        match e(unnormalize(&gr.rep))? {
            Some(bad) => {
                let bad_check = e(block_bijection_check(&bad, &gs))?;
                ensure(!bad_check.passed(), format!("{name}: mutation accepted"))?;
                notes.push(format!(
                    "{name}: mutation rejected ({}); br_P(b) = c itself {}",
                    bad_check.failures.join("; "),
                    if bad_check.pairs.iter().all(|x| x.brauer_ok) { "unchanged (blocks are L-supported)" } else { "fails" }
                ));
            }
            None => notes.push(format!("{name}: no non-trivial mutation exists over GF({p})")),
        }
    }
    Ok(format!("S₃ (p=2) and SL(2,3) (p=3): br-normalized, Dade facts, blocks paired with br_P(b) = c; {}", notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let t = GroupTable::from_cycle_strings(&["(1,2)"]).unwrap();
    let cs = magicrep::magic::CosetSpace::new(&t.full(), &magicrep::group::Subgroup::generated(&t, &[]));
    let ring = FiniteRing::new(3, LIFT_PRECISION, vec![0, 1]);
    let c = vec![WittScalar::one(&ring), WittScalar::from_int(&ring, 31)];
    let alpha = magicrep::magic::coboundary(&c, &cs);
    let lambda: Vec<WittScalar> = c.iter().map(|v| v.mul(v)).collect();
    let (mu, cert) = e(lift_cocycle(&alpha, &cs, 2, &lambda))?;
    ensure(mu == c && cert.iterates.len() == LIFT_PRECISION as usize, "manufactured cocycle not recovered")?;
    let gs = glauberman(&corpus::sl23(Flavor::ModularGlauberman), 3)?;
    let gr = e(magic_glauberman(&gs))?;
    let lifted = e(lift_magic(&gr.rep, &gs, LIFT_PRECISION))?;
    let rep = &lifted.rep;
    e(rep.verify())?;
    for (x, s) in rep.sigma.iter().enumerate() {
        let red = s.map(&gr.rep.setup.ctx(), |v| Ok(witt_reduce(v))).unwrap();
        ensure(red == gr.rep.sigma[x], format!("coset {x}: σ̂ mod p ≠ σ"))?;
    }
    let x = rep.setup.cosets.of(sl23_t(&gs.config));
    let s = &rep.sigma[x];
    ensure(s.mul(s).mul(s) == rep.setup.i, "σ̂(t)³ ≠ î in W₄")?;
    Ok(format!("μ_(n+1) ≡ μ_n mod p^n and ∂μ = α in W_{LIFT_PRECISION}; σ̂ over W_{LIFT_PRECISION} reduces to σ, σ̂(t)³ = î"))
}

fn criterion_7() -> Outcome {
    let gs = glauberman(&corpus::sl23(Flavor::ModularGlauberman), 3)?;
    let gr = e(magic_glauberman(&gs))?;
    let bc = e(block_bijection_check(&gr.rep, &gs))?;
    let mut ranks = Vec::new();
    for n in [1, 2, 4] {
        let lifted = e(lift_magic(&gr.rep, &gs, n))?;
        let r = e(integral_iso_check(&lifted.rep, &gr.rep, &gs))?;
        ensure(r.passed(), format!("N = {n}: {:?}", r.failures))?;
        if n == 1 {
            ensure(r.matches_modular && r.rank_image == bc.kappa_ranks.0, "N = 1 differs from the GF(3) isomorphism")?;
        }
        ranks.push(format!("N={n}: rank {}", r.rank_image));
    }
    Ok(format!("{}; N = 1 coincides with GF(3)", ranks.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for spec in [corpus::s3_trivial(), corpus::a4_trivial(), corpus::d8_trivial(), corpus::s4_trivial(), corpus::s4_d8(), corpus::a4_noninvariant()] {
        let Ok(c) = config(&spec) else { continue };
        if c.n != 1 || c.flavor != Flavor::Invariant {
            continue;
        }
        let name = spec.name.clone().unwrap_or_default();
        let rep = e(make_magic(&e(setup_char0(&c))?, SolverOptions::default()))?;
        ensure(e(iota_table(&rep, &c))? == e(oracle_table(&c))?, format!("{name}: ι ≠ oracle"))?;
        count += 1;
    }
    ensure(count >= 4, format!("only {count} n = 1 configurations"))?;
    Ok(format!("{count} n = 1 configurations match the inner-product oracle"))
}

fn criterion_9() -> Outcome {
    let (outer, s1, s2) = corpus::tower();
    let table = e(group_of(&outer))?;
    let c = e(resolve_in(&table, &outer))?.config;
    let c1 = e(resolve_in(&table, &s1))?.config;
    let c2 = e(resolve_in(&table, &s2))?.config;
    let r1 = e(make_magic_cyclo(&e(setup_char0(&c1))?, SolverOptions::default()))?;
    let r2 = e(make_magic_cyclo(&e(setup_char0(&c2))?, SolverOptions::default()))?;
    let (_, fails) = e(compose(&r1, &c1, &r2, &c2, &e(setup_char0(&c))?, &c))?;
    ensure(fails.is_empty(), fails.join("; "))?;
    let n = e(character_table(&c.g))?.above(&c.theta).len();
    Ok(format!("tower |G| = {}: ι(σ) = ι(σ₂)∘ι(σ₁) on all {n} irreducibles above θ", c.g.order()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        match f() {
            Ok(d) => println!("PASS criterion {k}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {k}: {d}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
