//! The character correspondence ι and the checked properties, for S4 over V4 with H = D8.

use magicrep::correspondence::verify_theorem;
use magicrep::magic::{make_magic, setup_char0, SolverOptions};
use magicrep::spec::{corpus, resolve};

fn main() -> magicrep::error::Result<()> {
    let c = resolve(&corpus::s4_d8())?.config;
    let rep = make_magic(&setup_char0(&c)?, SolverOptions::default())?;
    let report = verify_theorem(&rep, &c, &[])?;
    for t in &report.tables {
        println!("U of order {} → V of order {}", t.u_order, t.v_order);
        for e in &t.entries {
            match e.image {
                Some(j) => println!("  χ{} (deg {}) ↦ τ{} (deg {})", e.chi, e.degree, j, e.image_degree.unwrap_or(0)),
                None => println!("  χ{} (deg {}) ↦ not irreducible", e.chi, e.degree),
            }
        }
    }
    for v in &report.verdicts {
        println!("({}) {:?}: {}", v.id, v.status, v.detail);
    }
    Ok(())
}
