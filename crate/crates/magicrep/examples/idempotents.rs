//! Central idempotents, the product idempotent i and the algebra S = i·F[G]^H·i.

use magicrep::algebra::{central_idempotent, full_idempotent_check, product_idempotent, trace_idempotent};
use magicrep::config::Flavor;
use magicrep::magic::setup_char0;
use magicrep::spec::{corpus, resolve};

fn main() -> magicrep::error::Result<()> {
    let c = resolve(&corpus::sl23(Flavor::Invariant))?.config;
    let e_theta = central_idempotent(&c.theta);
    let e_phi = central_idempotent(&c.phi);
    println!("e_θ idempotent: {}, support {}", e_theta.is_idempotent(), e_theta.support().len());
    println!("e_φ idempotent: {}, support {}", e_phi.is_idempotent(), e_phi.support().len());

    let i = product_idempotent(&c)?;
    println!("i idempotent: {}, H-invariant: {}", i.is_idempotent(), i.commutes_with_group(c.h.generators()));

    let setup = setup_char0(&c)?;
    println!("dim S = {} = n²·dim Z with n = {}, dim Z = {}", setup.s.dim(), c.n, setup.z.dim());
    println!("tr(i) = {}", setup.trace.trace(&setup.i));

    let target = trace_idempotent(&c.theta, &c.field);
    let full = full_idempotent_check(&i, &target, &c.k)?;
    println!("i full in F[K]e_(θ,F): {}", full.is_some());
    Ok(())
}
