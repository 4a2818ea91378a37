//! Semi-invariant case: θ is not G-invariant, so Z(S) is larger than F and σ is crossed.

use magicrep::correspondence::verify_theorem;
use magicrep::magic::{make_magic_crossed, setup_char0, SolverOptions};
use magicrep::spec::{corpus, resolve};

fn main() -> magicrep::error::Result<()> {
    let c = resolve(&corpus::s3_semi())?.config;
    let setup = setup_char0(&c)?;
    println!("dim S = {}, dim Z(S) = {}", setup.s.dim(), setup.z.dim());
    let rep = make_magic_crossed(&setup, SolverOptions::default())?;
    rep.verify()?;
    println!("status: {:?}", rep.status);
    let report = verify_theorem(&rep, &c, &[])?;
    println!("all properties pass: {}", report.all_pass());
    Ok(())
}
