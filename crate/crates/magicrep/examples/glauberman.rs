//! Modular pipeline for SL(2,3) at p = 3: Dade facts, Brauer normalization, block pairing.

use magicrep::config::Flavor;
use magicrep::modular::{block_bijection_check, glauberman_setup, magic_glauberman, unnormalize};
use magicrep::spec::{corpus, resolve};

fn main() -> magicrep::error::Result<()> {
    let r = resolve(&corpus::sl23(Flavor::ModularGlauberman))?;
    let c = &r.config;
    let p_group = r.defect_group.as_ref().expect("spec fixes P");
    let gs = glauberman_setup(&c.g, &c.k, p_group, 3, &c.theta, &c.field)?;
    println!("residue field GF({}^{}), defect group order {}", gs.residue.p, gs.residue.f, gs.found_defect_group.order());

    let gr = magic_glauberman(&gs)?;
    println!("Dade: {:?}, passed {}", gr.dade, gr.dade.passed());
    println!("cocycle: {}", gr.rep.trivialization);

    let check = block_bijection_check(&gr.rep, &gs)?;
    for pair in &check.pairs {
        println!("block pair {:?}", pair);
    }
    println!("κ ranks {:?}, passed {}", check.kappa_ranks, check.passed());

    if let Some(bad) = unnormalize(&gr.rep)? {
        let bad_check = block_bijection_check(&bad, &gs)?;
        println!("mutated σ rejected: {} ({})", !bad_check.passed(), bad_check.failures.join("; "));
    }
    Ok(())
}
