//! Lift the GF(3) magic representation of SL(2,3) to W(GF(3)) mod 3^N and check the integral isomorphism.

use magicrep::config::Flavor;
use magicrep::modular::{glauberman_setup, integral_iso_check, lift_magic, magic_glauberman};
use magicrep::spec::{corpus, resolve};

fn main() -> magicrep::error::Result<()> {
    let r = resolve(&corpus::sl23(Flavor::ModularGlauberman))?;
    let c = &r.config;
    let gs = glauberman_setup(&c.g, &c.k, r.defect_group.as_ref().expect("spec fixes P"), 3, &c.theta, &c.field)?;
    let modular = magic_glauberman(&gs)?.rep;
    for n in [1, 2, 4] {
        let lifted = lift_magic(&modular, &gs, n)?;
        let integral = integral_iso_check(&lifted.rep, &modular, &gs)?;
        println!("N = {n}: cocycle certificate k = {}, λ = {:?}", lifted.certificate.k, lifted.certificate.lambda);
        println!(
            "       ranks {}/{}/{}, passed {}",
            integral.rank_image,
            integral.rank_source,
            integral.rank_corner,
            integral.passed()
        );
    }
    Ok(())
}
