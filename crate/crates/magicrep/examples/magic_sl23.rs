//! A magic representation for SL(2,3) over Q, with K = Q8 and H a Sylow 3-normalizer.

use magicrep::config::Flavor;
use magicrep::magic::{make_magic, setup_char0, SolverOptions};
use magicrep::spec::{corpus, parse_elements, resolve};

fn main() -> magicrep::error::Result<()> {
    let c = resolve(&corpus::sl23(Flavor::Invariant))?.config;
    let setup = setup_char0(&c)?;
    let rep = make_magic(&setup, SolverOptions::default())?;
    rep.verify()?;
    println!("status: {:?}", rep.status);
    println!("cocycle: {}", rep.trivialization);
    println!("ψ on H: {}", rep.psi().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "));

    let t = parse_elements(c.g.group(), &[corpus::SL23_T.to_string()])?[0];
    let s = &rep.sigma[setup.cosets.of(t)];
    println!("σ(t)³ = i: {}", s.mul(s).mul(s) == setup.i);
    Ok(())
}
