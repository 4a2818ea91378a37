//! End-to-end runs from a `RunSpec`, the versioned JSON report and the
//! self-contained certificate with its re-verification.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::characters::ClassFunction;
use crate::config::{Configuration, Flavor};
use crate::correspondence::{verify_theorem, CorrespondenceReport, Verdict, VerdictStatus};
use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::magic::{
    coboundary, make_magic_crossed, make_magic_cyclo, setup_char0, CosetSpace, MagicRep, MagicSetup, SolverOptions,
    Status, TraceModel,
};
use crate::modular::{
    block_bijection_check, defect_zero_blocks, glauberman_setup, integral_iso_check, lift_magic, magic_glauberman,
    BlockCheck, DadeReport, IntegralReport, LiftCertificate,
};
use crate::scalar::{CycloScalar, FiniteRing, ModScalar, Scalar};
use crate::spec::{parse_elements, resolve, RunSpec};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_PRECISION: u32 = 4;

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::DegreeMismatch { .. } | Error::Index(_) => 2,
        Error::Validation(_) | Error::GroupTooLarge { .. } => 3,
        _ => 1,
    }
}

/// Scalars with a lossless text form for certificates.
pub trait CertScalar: Scalar {
    fn encode(&self) -> String;
    fn decode(ctx: &Self::Ctx, s: &str) -> Result<Self>;
}

impl CertScalar for CycloScalar {
    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(m: &u64, s: &str) -> Result<Self> {
        let x = CycloScalar::parse(s)?;
        let x = if *m % x.conductor() != 0 { x.shrink() } else { x };
        if *m % x.conductor() != 0 {
            return Err(Error::Parse(format!("scalar {s} outside ℚ(ζ_{m})")));
        }
        Ok(x.embed(*m))
    }
}

impl CertScalar for ModScalar {
    fn encode(&self) -> String {
        self.coeffs().iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }

    fn decode(r: &Arc<FiniteRing>, s: &str) -> Result<Self> {
        let c: Vec<u64> = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad finite-field scalar '{s}'"))))
            .collect::<Result<_>>()?;
        if c.len() != r.degree() || c.iter().any(|&v| v >= r.q) {
            return Err(Error::Parse(format!("bad finite-field scalar '{s}'")));
        }
        Ok(ModScalar::from_coeffs(r, &c))
    }
}

/// Sparse algebra element: (group element in cycle notation, coefficient).
pub type SparseElement = Vec<(String, String)>;

fn encode_elem<R: CertScalar>(x: &AlgebraElement<R>) -> SparseElement {
    x.support().into_iter().map(|g| (x.g.element(g).to_cycles(), x.coeffs[g].encode())).collect()
}

fn decode_elem<R: CertScalar>(g: &Arc<GroupTable>, ctx: &R::Ctx, s: &SparseElement) -> Result<AlgebraElement<R>> {
    let mut out = AlgebraElement::zero(g, ctx);
    for (e, c) in s {
        let x = parse_elements(g, std::slice::from_ref(e))?[0];
        out.coeffs[x] = R::decode(ctx, c)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingSpec {
    Cyclotomic { conductor: u64 },
    Finite { p: u64, modulus: Vec<u64> },
}

/// Everything needed to re-check a magic representation without solving
/// for σ again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicCertificate {
    pub ring: RingSpec,
    pub n: usize,
    pub i: SparseElement,
    /// θ(g)/φ(1) on K, when traces are taken through θ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<SparseElement>,
    /// Basis of S₀ when it is a proper subalgebra of S.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<Vec<SparseElement>>,
    pub transversal: Vec<String>,
    pub status: Status,
    pub sigma: Vec<SparseElement>,
    /// Cocycle of the raw Skolem–Noether solutions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_cocycle: Option<Vec<Vec<String>>>,
    /// σ(x) = normalization(x)·σ_raw(x).
    pub normalization: Vec<String>,
    pub trivialization: String,
    pub psi: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub gens: Vec<String>,
    pub k: Vec<String>,
    pub h: Vec<String>,
    pub reps: Vec<MagicCertificate>,
}

fn cycles(g: &GroupTable, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.element(x).to_cycles()).collect()
}

pub fn certify<R: CertScalar>(rep: &MagicRep<R>, ring: RingSpec) -> MagicCertificate {
    let setup = &rep.setup;
    let g = setup.i.g.clone();
    let trace = match &setup.trace {
        TraceModel::Character(v) => {
            let ctx = setup.ctx();
            let mut e = AlgebraElement::zero(&g, &ctx);
            e.coeffs.clone_from(v);
            Some(encode_elem(&e))
        }
        TraceModel::MatrixUnits(_) => None,
    };
    let s0 = (setup.s0.dim() != setup.s.dim()).then(|| setup.s0.basis.iter().map(encode_elem).collect());
    MagicCertificate {
        ring,
        n: setup.n,
        i: encode_elem(&setup.i),
        trace,
        s0,
        transversal: cycles(&g, &setup.cosets.reps),
        status: rep.status,
        sigma: rep.sigma.iter().map(encode_elem).collect(),
        raw_cocycle: rep.raw_cocycle.as_ref().map(|a| a.iter().map(|r| r.iter().map(CertScalar::encode).collect()).collect()),
        normalization: rep.normalization.iter().map(CertScalar::encode).collect(),
        trivialization: rep.trivialization.clone(),
        psi: rep.psi().iter().map(CertScalar::encode).collect(),
    }
}

fn malformed(s: &str) -> Error {
    Error::Parse(format!("malformed certificate: {s}"))
}

fn check_rep<R: CertScalar>(g: &Arc<GroupTable>, k: &Arc<Subgroup>, h: &Arc<Subgroup>, ctx: &R::Ctx, mc: &MagicCertificate) -> Result<()> {
    let r = mc.transversal.len();
    if mc.sigma.len() != r || mc.normalization.len() != r || mc.psi.len() != r {
        return Err(malformed("per-coset lists disagree in length"));
    }
    if let Some(a) = &mc.raw_cocycle {
        if a.len() != r || a.iter().any(|row| row.len() != r) {
            return Err(malformed("cocycle table is not |X| × |X|"));
        }
    }
    let l = h.intersection(k);
    let fail = |s: &str| Err(Error::Verification(s.to_string()));
    let i: AlgebraElement<R> = decode_elem(g, ctx, &mc.i)?;
    if !i.is_idempotent() {
        return fail("i² = i");
    }
    if !i.commutes_with_group(h.generators()) {
        return fail("i is H-invariant");
    }
    let cosets = CosetSpace::new(h, &l);
    let reps = parse_elements(g, &mc.transversal)?;
    if reps != cosets.reps {
        return fail("transversal is the canonical one");
    }
    let trace = match &mc.trace {
        Some(t) => Some(TraceModel::Character(decode_elem::<R>(g, ctx, t)?.coeffs)),
        None => None,
    };
    let s0 = match &mc.s0 {
        Some(b) => Some(b.iter().map(|x| decode_elem(g, ctx, x)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let setup = Arc::new(
        MagicSetup::new(k, h, &l, i, mc.n, trace, s0)
            .map_err(|e| Error::Verification(format!("dim S = n² dim Z(S): {e}")))?,
    );
    let sigma: Vec<AlgebraElement<R>> = mc.sigma.iter().map(|x| decode_elem(g, ctx, x)).collect::<Result<_>>()?;
    let rep = MagicRep::from_sigma(&setup, sigma, mc.status)
        .map_err(|e| Error::Verification(format!("σ(x) invertible in S: {e}")))?;
    rep.verify()?;
    let c: Vec<R> = mc.normalization.iter().map(|s| R::decode(ctx, s)).collect::<Result<_>>()?;
    if let Some(a) = &mc.raw_cocycle {
        let dc = coboundary(&c, &setup.cosets);
        for x in 0..r {
            for y in 0..r {
                if !R::decode(ctx, &a[x][y])?.mul(&dc[x][y]).is_one() {
                    return Err(Error::Verification(format!("raw cocycle = ∂(normalization)⁻¹ at ({x},{y})")));
                }
            }
        }
    }
    for (x, p) in mc.psi.iter().enumerate() {
        if setup.trace.trace(&rep.sigma[x]) != R::decode(ctx, p)? {
            return Err(Error::Verification(format!("ψ = tr σ on coset {x}")));
        }
    }
    Ok(())
}

/// Re-verifies every recorded identity from the serialized data alone.
/// Malformed input is a parse error; a failed identity is a verification error.
pub fn verify_certificate(json: &str) -> Result<()> {
    let cert: Certificate = serde_json::from_str(json).map_err(|e| malformed(&e.to_string()))?;
    if cert.schema != SCHEMA {
        return Err(malformed("unknown schema"));
    }
    let gens: Vec<&str> = cert.gens.iter().map(String::as_str).collect();
    let g = GroupTable::from_cycle_strings(&gens)?;
    let k = Subgroup::generated(&g, &parse_elements(&g, &cert.k)?);
    let h = Subgroup::generated(&g, &parse_elements(&g, &cert.h)?);
    if cert.reps.is_empty() {
        return Err(malformed("no representations"));
    }
    for mc in &cert.reps {
        match &mc.ring {
            RingSpec::Cyclotomic { conductor } => check_rep::<CycloScalar>(&g, &k, &h, conductor, mc)?,
            RingSpec::Finite { p, modulus } => {
                if *modulus.last().unwrap_or(&0) != 1 || !crate::scalar::is_prime(*p) {
                    return Err(malformed("bad finite field"));
                }
                check_rep::<ModScalar>(&g, &k, &h, &FiniteRing::new(*p, 1, modulus.clone()), mc)?
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the spec's precision.
    pub precision: Option<u32>,
    pub skip: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub flavor: Flavor,
    pub group_order: usize,
    pub k_order: usize,
    pub h_order: usize,
    pub l_order: usize,
    pub n: usize,
    pub theta: Vec<String>,
    pub phi: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicSection {
    pub status: Status,
    pub trivialization: String,
    pub transversal: Vec<String>,
    pub psi: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub theta: Vec<String>,
    pub idempotent: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrauerSection {
    pub defect_group: Vec<String>,
    pub residue_field: String,
    pub dade: DadeReport,
    pub br_scaling: Vec<String>,
    pub check: BlockCheck,
    /// The unnormalized mutation must fail the block certificate.
    pub mutation_rejected: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSection {
    pub precision: u32,
    pub note: String,
    pub certificate: LiftCertificate,
    pub integral: IntegralReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub configuration: ConfigEcho,
    pub magic: Option<MagicSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub correspondence: Option<CorrespondenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brauer_pairs: Option<BrauerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftSection>,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

fn values(chi: &ClassFunction) -> Vec<String> {
    chi.value_strings()
}

fn echo(c: &Configuration) -> ConfigEcho {
    ConfigEcho {
        flavor: c.flavor,
        group_order: c.g.order(),
        k_order: c.k.order(),
        h_order: c.h.order(),
        l_order: c.l.order(),
        n: c.n,
        theta: values(&c.theta),
        phi: values(&c.phi),
        prime: c.prime,
    }
}

/// Magic σ over ℚ(ζ_M): crossed when Z(S) is larger than the ground field.
pub fn char0_magic(c: &Configuration) -> Result<MagicRep<CycloScalar>> {
    let setup = setup_char0(c)?;
    if setup.is_crossed() {
        make_magic_crossed(&setup, SolverOptions::default())
    } else {
        make_magic_cyclo(&setup, SolverOptions::default())
    }
}

fn verdict(id: &str, ok: bool, detail: String) -> Verdict {
    Verdict { id: id.into(), status: if ok { VerdictStatus::Pass } else { VerdictStatus::Fail }, detail }
}

/// Runs the requested flavor end to end. Errors are configuration or
/// solver failures; failed verdicts are reported inside the report.
pub fn run(spec: &RunSpec, opts: &RunOptions) -> Result<(Report, Certificate)> {
    let resolved = resolve(spec)?;
    let c = &resolved.config;
    let table = resolved.table.clone();
    let mut skip = spec.skip.clone();
    skip.extend(opts.skip.iter().cloned());
    let mut verdicts = Vec::new();
    let mut certs = Vec::new();
    let rep = char0_magic(c)?;
    let m = c.conductor();
    certs.push(certify(&rep, RingSpec::Cyclotomic { conductor: m }));
    let magic = MagicSection {
        status: rep.status,
        trivialization: rep.trivialization.clone(),
        transversal: cycles(&table, &rep.setup.cosets.reps),
        psi: rep.psi().iter().map(|v| v.to_string()).collect(),
    };
    let corr = verify_theorem(&rep, c, &skip)?;
    verdicts.extend(corr.verdicts.iter().cloned());
    let mut report = Report {
        schema: SCHEMA,
        name: spec.name.clone(),
        configuration: echo(c),
        magic: Some(magic),
        failure: None,
        correspondence: Some(corr),
        blocks: None,
        brauer_pairs: None,
        lift: None,
        verdicts: Vec::new(),
        passed: false,
    };
    if c.flavor == Flavor::ModularGlauberman {
        let p = c.prime.ok_or_else(|| Error::Validation("modular flavor needs a prime".into()))?;
        let pg = resolved
            .defect_group
            .clone()
            .ok_or_else(|| Error::Validation("modular flavor needs defect_group".into()))?;
        let gs = glauberman_setup(&c.g, &c.k, &pg, p, &c.theta, &c.field)?;
        if *gs.config.h != *c.h || gs.config.phi != c.phi {
            return Err(Error::Validation("H or φ disagree with N_G(P) and the Brauer correspondent".into()));
        }
        let blocks = defect_zero_blocks(&c.k, p)?;
        report.blocks = Some(
            blocks.iter().map(|b| BlockEntry { theta: values(&b.theta), idempotent: b.e.coeff_strings() }).collect(),
        );
        let gr = magic_glauberman(&gs)?;
        certs.push(certify(&gr.rep, RingSpec::Finite { p, modulus: gs.residue.field.modulus.clone() }));
        verdicts.push(verdict("dade", gr.dade.passed(), format!("{:?}", gr.dade)));
        let check = block_bijection_check(&gr.rep, &gs)?;
        verdicts.push(verdict("brauer-pairs", check.passed(), check.failures.join("; ")));
        let mutation_rejected = match crate::modular::unnormalize(&gr.rep)? {
            Some(bad) => Some(!block_bijection_check(&bad, &gs)?.passed()),
            None => None,
        };
        if let Some(ok) = mutation_rejected {
            verdicts.push(verdict("mutation", ok, "unnormalized σ fails the block certificate".into()));
        }
        let prec = opts.precision.or(spec.precision.map(|x| x as u32)).unwrap_or(DEFAULT_PRECISION);
        let lifted = lift_magic(&gr.rep, &gs, prec)?;
        let integral = integral_iso_check(&lifted.rep, &gr.rep, &gs)?;
        verdicts.push(verdict("lift", true, format!("σ̂ over W_{prec} reduces to σ")));
        verdicts.push(verdict("integral", integral.passed(), integral.failures.join("; ")));
        report.brauer_pairs = Some(BrauerSection {
            defect_group: cycles(&table, pg.generators()),
            residue_field: format!("GF({}^{})", p, gs.residue.f),
            dade: gr.dade.clone(),
            br_scaling: gr.br_scaling.iter().map(|v| v.encode()).collect(),
            check,
            mutation_rejected,
        });
        report.lift = Some(LiftSection {
            precision: prec,
            note: format!("verified modulo p^{prec} only"),
            certificate: lifted.certificate,
            integral,
        });
    }
    report.passed = verdicts.iter().all(Verdict::passed);
    report.verdicts = verdicts;
    let cert = Certificate {
        schema: SCHEMA,
        gens: spec.gens.clone(),
        k: cycles(&table, c.k.generators()),
        h: cycles(&table, c.h.generators()),
        reps: certs,
    };
    Ok((report, cert))
}

/// Deterministic pretty JSON.
pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::corpus;

    #[test]
    fn s3_round_trip() {
        let (report, cert) = run(&corpus::s3_trivial(), &RunOptions::default()).unwrap();
        assert!(report.passed);
        let json = to_json(&cert);
        verify_certificate(&json).unwrap();
        let again = run(&corpus::s3_trivial(), &RunOptions::default()).unwrap();
        assert_eq!(to_json(&again.0), to_json(&report));
    }

    #[test]
    fn sl23_modular_run_and_tamper() {
        let (report, cert) = run(&corpus::sl23(Flavor::ModularGlauberman), &RunOptions::default()).unwrap();
        assert!(report.passed, "{:?}", report.verdicts);
        assert_eq!(report.lift.as_ref().unwrap().precision, 4);
        verify_certificate(&to_json(&cert)).unwrap();
        let mut bad = cert.clone();
        let entry = &mut bad.reps[0].sigma[1][0].1;
        *entry = format!("{} + 1", entry);
        assert_eq!(exit_code(&verify_certificate(&to_json(&bad)).unwrap_err()), 1);
        let mut trunc = cert.clone();
        trunc.reps[1].raw_cocycle.as_mut().unwrap().pop();
        assert_eq!(exit_code(&verify_certificate(&to_json(&trunc)).unwrap_err()), 2);
    }

    #[test]
    fn non_normal_k_exits_three() {
        let mut spec = corpus::s3_trivial();
        std::mem::swap(&mut spec.k, &mut spec.h);
        let err = run(&spec, &RunOptions::default()).unwrap_err();
        assert_eq!(exit_code(&err), 3);
        assert!(err.to_string().contains("K not normal"));
    }
}
