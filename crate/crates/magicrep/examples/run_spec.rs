//! Run a JSON spec, emit the report and certificate, then re-verify the certificate.
//!
//! `cargo run --example run_spec -- specs/s3_glauberman.json`

use magicrep::report::{run, to_json, verify_certificate, RunOptions};
use magicrep::spec::RunSpec;

fn main() -> magicrep::error::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/specs/s3_trivial.json").into());
    let json = std::fs::read_to_string(&path).map_err(|e| magicrep::error::Error::Parse(e.to_string()))?;
    let (report, cert) = run(&RunSpec::from_json(&json)?, &RunOptions::default())?;
    for v in &report.verdicts {
        println!("{:<14} {:?}", v.id, v.status);
    }
    println!("passed: {}", report.passed);
    let cert_json = to_json(&cert);
    verify_certificate(&cert_json)?;
    println!("certificate of {} bytes verified", cert_json.len());
    Ok(())
}
