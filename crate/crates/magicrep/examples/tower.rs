//! Compose two magic representations along a tower and compare with the direct one.

use magicrep::correspondence::compose;
use magicrep::magic::{make_magic_cyclo, setup_char0, SolverOptions};
use magicrep::spec::{corpus, group_of, resolve_in};

fn main() -> magicrep::error::Result<()> {
    let (outer, first, second) = corpus::tower();
    let table = group_of(&outer)?;
    let c = resolve_in(&table, &outer)?.config;
    let c1 = resolve_in(&table, &first)?.config;
    let c2 = resolve_in(&table, &second)?.config;
    let r1 = make_magic_cyclo(&setup_char0(&c1)?, SolverOptions::default())?;
    let r2 = make_magic_cyclo(&setup_char0(&c2)?, SolverOptions::default())?;
    let (_, fails) = compose(&r1, &c1, &r2, &c2, &setup_char0(&c)?, &c)?;
    println!("|G| = {}, |H₁| = {}, |H₂| = {}", c.g.order(), c1.h.order(), c2.h.order());
    if fails.is_empty() {
        println!("ι(σ) = ι(σ₂)∘ι(σ₁) on every character above θ");
    } else {
        println!("mismatches: {}", fails.join("; "));
    }
    Ok(())
}
