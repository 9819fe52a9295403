//! The `locality-forge` command line: classify, expand, normals, verify, quotient.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bits::Bits;
use crate::classify::{classify_subgroups, verify_proper_relations, Classification, Flags};
use crate::error::{Error, Result};
use crate::expansion::{subcentric_closure, verify_closure_universality, rigid_isomorphism, expand, TraceStep};
use crate::fusion::FusionSystem;
use crate::group::{Caps, FiniteGroup};
use crate::io::{self, locality_to_json, report_to_json, sha256_hex, Meta};
use crate::lattice::{SubId, SubLattice};
use crate::local::restrict;
use crate::locality::{Locality, SylowContext};
use crate::normal::{self, NormalLattice, LATTICE_CAP};
use crate::partial::{PartialGroup, VerifyBudget};
use crate::proper::check_proper;
use crate::quotient::{quotient, theta_quotient};
use crate::report::Report;
use crate::saturation::is_saturated;
use crate::strat::{stratification, verify_stratification, Stratification};
use crate::verify::verify_locality_axioms;
use crate::NONE;

#[derive(Debug, Parser)]
#[command(name = "locality-forge", version, about = "Localities, fusion systems and expansions of object sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the subgroups of S and write the base locality.
    Classify(Opts),
    /// Expand the base locality to a larger object set.
    Expand(Opts),
    /// Enumerate the partial normal subgroups of the base locality.
    Normals(Opts),
    /// Run the assertion suites.
    Verify(Opts),
    /// Form a quotient of the base locality.
    Quotient(Opts),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Opts {
    /// perm-group.v1 file.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// locality.v1 file (verify only).
    #[arg(long)]
    pub locality: Option<PathBuf>,
    /// The prime p.
    #[arg(long)]
    pub prime: Option<u32>,
    /// cr-closure, centric, quasicentric, subcentric, all, or a JSON list of
    /// subgroups given by 1-based generator images (`@FILE` reads it from a file).
    #[arg(long)]
    pub delta: Option<String>,
    /// Object set of the locality that `expand` starts from.
    #[arg(long)]
    pub base: Option<String>,
    /// `theta` or the index of a member of the normal lattice.
    #[arg(long)]
    pub normal: Option<String>,
    /// Comma separated suites for `verify`; empty runs nothing.
    #[arg(long)]
    pub suites: Option<String>,
    /// Output directory [default: locality-forge-out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest group order accepted; LOCALITY_FORGE_CAPS overrides it.
    #[arg(long)]
    pub cap_order: Option<usize>,
    /// Fail on an improper base instead of passing to L/Θ.
    #[arg(long)]
    pub no_theta: bool,
}

pub const ALL_SUITES: &[&str] =
    &["axioms", "stratification", "classification", "saturation", "proper", "expansion", "normals", "quotients"];

/// Exit code of an error: 1 internal, 2 parse, 3 domain, 4 resource, 5 io.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Domain { .. } => 3,
        Error::Internal(_) => 1,
        Error::Resource(_) => 4,
        Error::Io(_) => 5,
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
    witness: Option<&'a str>,
}

fn error_json(e: &Error) -> String {
    let (kind, witness) = match e {
        Error::Parse(_) => ("parse", None),
        Error::Domain { witness, .. } => ("domain", witness.as_deref()),
        Error::Internal(_) => ("internal", None),
        Error::Resource(_) => ("resource", None),
        Error::Io(_) => ("io", None),
    };
    serde_json::to_string(&ErrorRecord { error: kind, message: e.to_string(), witness }).unwrap_or_default()
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Classify(o) => cmd_classify(o),
        Command::Expand(o) => cmd_expand(o),
        Command::Normals(o) => cmd_normals(o),
        Command::Verify(o) => cmd_verify(o),
        Command::Quotient(o) => cmd_quotient(o),
    }
}

fn caps_of(o: &Opts) -> Result<Caps> {
    let mut base = Caps::default();
    if let Some(c) = o.cap_order {
        base.order = c;
    }
    Caps::with_env(base)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Hash of the resolved configuration: options plus the contents of input files.
fn config_hash(command: &str, o: &Opts) -> Result<String> {
    #[derive(Serialize)]
    struct Canon<'a> {
        command: &'a str,
        group_sha256: Option<String>,
        locality_sha256: Option<String>,
        delta_file_sha256: Option<String>,
        opts: Opts,
        caps: (usize, usize),
    }
    let file_hash = |p: &Option<PathBuf>| -> Result<Option<String>> {
        p.as_ref().map(|p| read(p).map(|t| sha256_hex(t.as_bytes()))).transpose()
    };
    let delta_file = o.delta.as_deref().and_then(|d| d.strip_prefix('@')).map(PathBuf::from);
    let caps = caps_of(o)?;
    let mut opts = o.clone();
    // paths are replaced by the hashes of their contents
    opts.group = None;
    opts.locality = None;
    opts.out = None;
    let canon = Canon {
        command,
        group_sha256: file_hash(&o.group)?,
        locality_sha256: file_hash(&o.locality)?,
        delta_file_sha256: file_hash(&delta_file)?,
        opts,
        caps: (caps.order, caps.subgroups),
    };
    Ok(sha256_hex(serde_json::to_string(&canon).map_err(|e| Error::internal(e.to_string()))?.as_bytes()))
}

fn out_dir(o: &Opts) -> Result<PathBuf> {
    let d = o.out.clone().unwrap_or_else(|| PathBuf::from("locality-forge-out"));
    std::fs::create_dir_all(&d)?;
    Ok(d)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

/// The group with its Sylow subgroup, fusion system and classification.
pub struct Ambient {
    pub ctx: SylowContext,
    pub f: FusionSystem,
    pub st: Stratification,
    pub cl: Classification,
}

impl Ambient {
    pub fn new(group: FiniteGroup, p: u32, caps: &Caps) -> Result<Self> {
        let ctx = SylowContext::new(Arc::new(group), p, caps)?;
        let full = ctx.group_locality()?;
        let f = FusionSystem::of_locality(&full)?;
        let st = stratification(&full)?;
        let cl = classify_subgroups(&f, &st, p)?;
        Ok(Ambient { ctx, f, st, cl })
    }

    fn lat(&self) -> &Arc<SubLattice> {
        &self.ctx.lat
    }

    /// Cycle notation for an element of G.
    fn cycles(&self, g: u32) -> String {
        let perm = self.ctx.group.perm(g).expect("permutation group");
        let mut seen = vec![false; perm.len()];
        let mut out = String::new();
        for start in 0..perm.len() {
            if seen[start] || perm[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = perm[i] as usize;
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }

    pub fn describe(&self, id: SubId) -> SubgroupRecord {
        let lat = self.lat();
        let sg = lat.group();
        let gens = sg.greedy_generators(lat.bits(id));
        SubgroupRecord {
            order: lat.order(id),
            s_members: lat.bits(id).to_vec(),
            generators: gens.iter().map(|&x| self.cycles(self.ctx.s_in_g[x as usize])).collect(),
        }
    }

    fn name(&self, id: SubId) -> String {
        let d = self.describe(id);
        format!("⟨{}⟩ of order {}", d.generators.join(", "), d.order)
    }

    pub fn resolve_delta(&self, spec: &str) -> Result<Vec<bool>> {
        let cl = &self.cl;
        let delta = match spec {
            "cr-closure" => self.f.f_closure(&cl.centric_radical()),
            "centric" => cl.centric(),
            "quasicentric" => cl.quasicentric(),
            "subcentric" => cl.subcentric(),
            "all" => vec![true; self.lat().len()],
            s if s.starts_with('[') => self.explicit_delta(s)?,
            s if s.starts_with('@') => self.explicit_delta(&read(Path::new(&s[1..]))?)?,
            other => return Err(Error::Parse(format!("unknown delta spec `{other}`"))),
        };
        if !delta.iter().any(|&d| d) {
            return Err(Error::domain(format!("delta spec `{spec}` resolves to the empty set")));
        }
        if let Some(x) = self.f.f_closed_violation(&delta) {
            return Err(Error::domain_with("Δ is not F-closed", format!("missing {}", self.name(x))));
        }
        Ok(delta)
    }

    fn explicit_delta(&self, text: &str) -> Result<Vec<bool>> {
        let list: Vec<Vec<Vec<u32>>> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("explicit delta list: {e}")))?;
        let g = &self.ctx.group;
        let mut delta = vec![false; self.lat().len()];
        for gens in list {
            let mut idx = Vec::new();
            for img in &gens {
                let perm = crate::group::perm_from_one_based(g.points(), img)?;
                idx.push(g.index_of_perm(&perm).ok_or_else(|| {
                    Error::domain_with("explicit delta: generator is not in the group", format!("{img:?}"))
                })?);
            }
            let h = g.generate(&idx);
            let id = self.ctx.sub_id(&h).ok_or_else(|| {
                Error::domain_with("explicit delta: subgroup is not inside the chosen Sylow subgroup", format!("{gens:?}"))
            })?;
            delta[id] = true;
        }
        Ok(delta)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupRecord {
    pub order: usize,
    pub s_members: Vec<u32>,
    pub generators: Vec<String>,
}

fn load_ambient(o: &Opts, caps: &Caps) -> Result<Ambient> {
    let path = o.group.as_ref().ok_or_else(|| Error::Parse("--group is required".into()))?;
    let p = o.prime.ok_or_else(|| Error::Parse("--prime is required".into()))?;
    let g = io::parse_perm_group(&read(path)?, caps)?;
    Ambient::new(g, p, caps)
}

/// A base locality with the data the pipelines need.
pub struct Base {
    pub l: Locality,
    pub f: FusionSystem,
    pub st: Stratification,
    pub cl: Classification,
}

impl Base {
    fn transporter(amb: &Ambient, delta: &[bool]) -> Result<Self> {
        let l = amb.ctx.transporter(delta)?;
        let st = stratification(&l)?;
        let cl = classify_subgroups(&amb.f, &st, amb.ctx.p)?;
        Ok(Base { l, f: amb.f.clone(), st, cl })
    }

    fn proper_report(&self) -> Result<Report> {
        check_proper(&self.l, &self.cl)
    }
}

#[derive(Serialize)]
struct ThetaRecord {
    theta_order: usize,
    quotient_order: usize,
}

/// The base if it is proper, else its Θ-quotient (unless disabled). The
/// returned map sends lattice ids of S to those of the new S.
fn make_proper(base: Base, no_theta: bool) -> Result<(Base, Option<ThetaRecord>, Vec<SubId>)> {
    let rep = base.proper_report()?;
    let ids: Vec<SubId> = base.l.lattice().ids().collect();
    if rep.ok() {
        return Ok((base, None, ids));
    }
    if no_theta {
        return Err(Error::domain_with("base locality is not proper", rep.violations.join("; ")));
    }
    let tq = theta_quotient(&base.l, &base.f, &base.cl)?;
    let lbar = tq.quotient.locality;
    let lat = base.l.lattice();
    let map = lat
        .ids()
        .map(|x| lbar.lattice().image(x, &tq.quotient.s_rho).ok_or_else(|| Error::internal("ρ does not map subgroups")))
        .collect::<Result<Vec<_>>>()?;
    let rec = ThetaRecord { theta_order: tq.theta.count(), quotient_order: lbar.size() };
    let f = FusionSystem::of_locality(&lbar)?;
    let st = stratification(&lbar)?;
    Ok((Base { l: lbar, f, st, cl: tq.classification }, Some(rec), map))
}

fn transport(delta: &[bool], map: &[SubId], len: usize) -> Vec<bool> {
    let mut out = vec![false; len];
    for (x, &d) in delta.iter().enumerate() {
        if d {
            out[map[x]] = true;
        }
    }
    out
}

#[derive(Serialize)]
struct ClassRecord {
    representative: SubgroupRecord,
    size: usize,
    flags: Flags,
    fully_normalized: Vec<bool>,
    witnesses: ClassWitnesses,
}

#[derive(Serialize)]
struct ClassWitnesses {
    /// The fully normalized conjugate on which the flags were decided.
    flags: SubgroupRecord,
    fully_normalized: Vec<SubgroupRecord>,
}

#[derive(Serialize)]
struct ClassificationBody {
    p: u32,
    group_order: usize,
    s_order: usize,
    degenerate: bool,
    classes: Vec<ClassRecord>,
    /// Class indices of each object set.
    sets: SetIndex,
}

#[derive(Serialize)]
struct SetIndex {
    centric_radical: Vec<usize>,
    cr_closure: Vec<usize>,
    centric: Vec<usize>,
    quasicentric: Vec<usize>,
    subcentric: Vec<usize>,
    p_set: Vec<usize>,
}

fn classification_body(amb: &Ambient) -> ClassificationBody {
    let cl = &amb.cl;
    let classes: Vec<ClassRecord> = cl
        .classes
        .iter()
        .map(|c| ClassRecord {
            representative: amb.describe(c.representative),
            size: c.members.len(),
            flags: c.flags.clone(),
            fully_normalized: c.members.iter().map(|&m| cl.fully_normalized[m]).collect(),
            witnesses: ClassWitnesses {
                flags: amb.describe(c.witness),
                fully_normalized: c.fully_normalized.iter().map(|&x| amb.describe(x)).collect(),
            },
        })
        .collect();
    let idx = |set: &[bool]| -> Vec<usize> { (0..cl.classes.len()).filter(|&i| set[cl.classes[i].representative]).collect() };
    let sets = SetIndex {
        centric_radical: idx(&cl.centric_radical()),
        cr_closure: idx(&amb.f.f_closure(&cl.centric_radical())),
        centric: idx(&cl.centric()),
        quasicentric: idx(&cl.quasicentric()),
        subcentric: idx(&cl.subcentric()),
        p_set: idx(&cl.p_set()),
    };
    ClassificationBody {
        p: amb.ctx.p,
        group_order: amb.ctx.group.order(),
        s_order: amb.lat().group().order(),
        degenerate: amb.lat().group().order() == 1,
        classes,
        sets,
    }
}

/// The classification.v1 report of an ambient group.
pub fn classification_json(amb: &Ambient, config_hash: &str, seed: u64) -> Result<String> {
    report_to_json(Meta::new("classification.v1", config_hash, seed), classification_body(amb))
}

pub fn cmd_classify(o: &Opts) -> Result<i32> {
    let caps = caps_of(o)?;
    let amb = load_ambient(o, &caps)?;
    let hash = config_hash("classify", o)?;
    let delta = amb.resolve_delta(o.delta.as_deref().unwrap_or("cr-closure"))?;
    let l = amb.ctx.transporter(&delta)?;
    let body = classification_body(&amb);
    let dir = out_dir(o)?;
    for (i, c) in body.classes.iter().enumerate() {
        let tags: Vec<&str> = [
            ("cr", body.sets.centric_radical.contains(&i)),
            ("c", c.flags.centric),
            ("q", c.flags.quasicentric),
            ("s", c.flags.subcentric),
        ]
        .iter()
        .filter(|t| t.1)
        .map(|t| t.0)
        .collect();
        println!("class {i}: order {} size {} [{}]", c.representative.order, c.size, tags.join(","));
    }
    write(&dir, "classification.json", &report_to_json(Meta::new("classification.v1", &hash, o.seed), body)?)?;
    write(&dir, "locality.json", &locality_to_json(&l)?)?;
    println!("wrote classification.json and locality.json ({} elements) to {}", l.size(), dir.display());
    Ok(0)
}

#[derive(Serialize)]
struct TraceBody {
    base_size: usize,
    base_objects: usize,
    theta: Option<ThetaRecord>,
    final_size: usize,
    final_objects: usize,
    steps: Vec<TraceStep>,
}

pub fn cmd_expand(o: &Opts) -> Result<i32> {
    let caps = caps_of(o)?;
    let amb = load_ambient(o, &caps)?;
    let hash = config_hash("expand", o)?;
    let base_delta = amb.resolve_delta(o.base.as_deref().unwrap_or("cr-closure"))?;
    let target = amb.resolve_delta(o.delta.as_deref().unwrap_or("subcentric"))?;
    let base = Base::transporter(&amb, &base_delta)?;
    let base_size = base.l.size();
    let base_objects = base.l.delta_ids().len();
    let (work, theta, map) = make_proper(base, o.no_theta)?;
    let target = transport(&target, &map, work.l.lattice().len());
    let e = expand(&work.l, &work.f, &work.st, &work.cl, &target)?;
    for (i, s) in e.trace.iter().enumerate() {
        println!(
            "step {i}: {:?} at order {} subgroup, {} objects, {} new elements",
            s.kind,
            s.representative.len(),
            s.class_count,
            s.new_elements
        );
    }
    let body = TraceBody {
        base_size,
        base_objects,
        theta,
        final_size: e.locality.size(),
        final_objects: e.locality.delta_ids().len(),
        steps: e.trace,
    };
    let dir = out_dir(o)?;
    write(&dir, "trace.json", &report_to_json(Meta::new("expansion-trace.v1", &hash, o.seed), &body)?)?;
    write(&dir, "locality.json", &locality_to_json(&e.locality)?)?;
    println!("expanded {} → {} elements; wrote trace.json and locality.json to {}", base_size, body.final_size, dir.display());
    Ok(0)
}

#[derive(Serialize)]
struct LatticeMember {
    size: usize,
    #[serde(rename = "S_cap_N")]
    s_cap_n: Vec<u32>,
    /// Indices of the members covering this one.
    hasse_edges: Vec<usize>,
    o_p_residual: usize,
    o_p_prime_residual: usize,
}

#[derive(Serialize)]
struct LatticeBody {
    locality_size: usize,
    members: Vec<LatticeMember>,
}

fn lattice_body(l: &Locality, lat: &NormalLattice) -> Result<LatticeBody> {
    let mut members = Vec::new();
    for (i, m) in lat.members.iter().enumerate() {
        let pos = |b: Bits| lat.position(&b).ok_or_else(|| Error::internal("residual outside the lattice"));
        members.push(LatticeMember {
            size: m.count(),
            s_cap_n: NormalLattice::s_part(l, m),
            hasse_edges: lat.hasse.iter().filter(|e| e.0 == i).map(|e| e.1).collect(),
            o_p_residual: pos(normal::o_p_residual(l, lat, m)?)?,
            o_p_prime_residual: pos(normal::o_p_prime_residual(l, lat, m)?)?,
        });
    }
    Ok(LatticeBody { locality_size: l.size(), members })
}

pub fn cmd_normals(o: &Opts) -> Result<i32> {
    let caps = caps_of(o)?;
    let amb = load_ambient(o, &caps)?;
    let hash = config_hash("normals", o)?;
    let delta = amb.resolve_delta(o.delta.as_deref().unwrap_or("cr-closure"))?;
    let l = amb.ctx.transporter(&delta)?;
    let lat = NormalLattice::of(&l, LATTICE_CAP)?;
    let body = lattice_body(&l, &lat)?;
    for (i, m) in body.members.iter().enumerate() {
        println!("member {i}: size {} S∩N {:?} covered by {:?}", m.size, m.s_cap_n, m.hasse_edges);
    }
    let dir = out_dir(o)?;
    write(&dir, "normal-lattice.json", &report_to_json(Meta::new("normal-lattice.v1", &hash, o.seed), body)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct QuotientBody {
    locality_size: usize,
    normal_size: usize,
    #[serde(rename = "S_cap_N")]
    s_cap_n: Vec<u32>,
    quotient_size: usize,
    rho: Vec<u32>,
    checks: Vec<Report>,
}

pub fn cmd_quotient(o: &Opts) -> Result<i32> {
    let caps = caps_of(o)?;
    let amb = load_ambient(o, &caps)?;
    let hash = config_hash("quotient", o)?;
    let delta = amb.resolve_delta(o.delta.as_deref().unwrap_or("cr-closure"))?;
    let base = Base::transporter(&amb, &delta)?;
    let l = &base.l;
    let (n, q, checks) = match o.normal.as_deref().unwrap_or("theta") {
        "theta" => {
            let tq = theta_quotient(l, &base.f, &base.cl)?;
            let mut rep = check_proper(&tq.quotient.locality, &tq.classification)?;
            rep.name = "quotient is proper".into();
            (tq.theta, tq.quotient, vec![rep])
        }
        k => {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("--normal expects `theta` or an index, got `{k}`")))?;
            let lat = NormalLattice::of(l, LATTICE_CAP)?;
            let n = lat.members.get(k).cloned().ok_or_else(|| {
                Error::domain_with("no such member of the normal lattice", format!("{k} of {}", lat.members.len()))
            })?;
            let q = quotient(l, &n)?;
            let rep = normal::verify_quotient_fusion(l, &base.f, &base.cl, &n)?;
            (n, q, vec![rep])
        }
    };
    let ok = checks.iter().all(Report::ok);
    let body = QuotientBody {
        locality_size: l.size(),
        normal_size: n.count(),
        s_cap_n: NormalLattice::s_part(l, &n),
        quotient_size: q.locality.size(),
        rho: q.rho.clone(),
        checks,
    };
    let dir = out_dir(o)?;
    write(&dir, "quotient.json", &report_to_json(Meta::new("quotient-report.v1", &hash, o.seed), &body)?)?;
    write(&dir, "locality.json", &locality_to_json(&q.locality)?)?;
    println!("|L| = {}, |N| = {}, |L/N| = {}", body.locality_size, body.normal_size, body.quotient_size);
    if !ok {
        dump(&body.checks);
        return Ok(1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct SuiteRecord {
    name: String,
    ok: bool,
    checks: u64,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct VerifyBody {
    ok: bool,
    suites: Vec<SuiteRecord>,
}

fn dump(reports: &[Report]) {
    for r in reports.iter().filter(|r| !r.ok()) {
        eprintln!("FAIL {}:", r.name);
        for v in &r.violations {
            eprintln!("  {v}");
        }
    }
}

fn suite(name: &str, run: impl FnOnce() -> Result<Report>) -> Report {
    match run() {
        Ok(mut r) => {
            r.name = name.into();
            r
        }
        Err(e) => {
            let mut r = Report::new(name);
            r.fail(e.to_string());
            r
        }
    }
}

fn parse_suites(spec: &str) -> Result<Vec<String>> {
    let list: Vec<String> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    if let Some(bad) = list.iter().find(|s| !ALL_SUITES.contains(&s.as_str())) {
        return Err(Error::Parse(format!("unknown suite `{bad}`; known: {}", ALL_SUITES.join(","))));
    }
    Ok(list)
}

pub fn cmd_verify(o: &Opts) -> Result<i32> {
    let suites = match &o.suites {
        Some(s) => parse_suites(s)?,
        None if o.locality.is_some() => vec!["axioms".into(), "stratification".into(), "saturation".into()],
        None => ALL_SUITES.iter().map(|s| s.to_string()).collect(),
    };
    if suites.is_empty() {
        println!("no suites requested");
        return Ok(0);
    }
    let caps = caps_of(o)?;
    let hash = config_hash("verify", o)?;
    let budget = VerifyBudget { seed: o.seed, ..VerifyBudget::default() };
    let reports = if let Some(path) = &o.locality {
        let l = io::parse_locality(&read(path)?, &caps)?;
        verify_file_suites(&l, &suites, &budget)?
    } else {
        let amb = load_ambient(o, &caps)?;
        let delta = amb.resolve_delta(o.delta.as_deref().unwrap_or("cr-closure"))?;
        let base = Base::transporter(&amb, &delta)?;
        verify_group_suites(&amb, base, &suites, &budget, o.no_theta)
    };
    let ok = reports.iter().all(Report::ok);
    for r in &reports {
        println!("{} {} ({} checks)", if r.ok() { "PASS" } else { "FAIL" }, r.name, r.checks);
    }
    let body = VerifyBody {
        ok,
        suites: reports
            .iter()
            .map(|r| SuiteRecord { name: r.name.clone(), ok: r.ok(), checks: r.checks, violations: r.violations.clone() })
            .collect(),
    };
    let dir = out_dir(o)?;
    write(&dir, "verify.json", &report_to_json(Meta::new("verify-report.v1", &hash, o.seed), body)?)?;
    if ok {
        Ok(0)
    } else {
        dump(&reports);
        Ok(1)
    }
}

/// Suites for a locality read from a file: only what the tables themselves determine.
fn verify_file_suites(l: &Locality, suites: &[String], budget: &VerifyBudget) -> Result<Vec<Report>> {
    let axioms = verify_locality_axioms(l, budget);
    let mut out = Vec::new();
    for s in suites {
        let r = match s.as_str() {
            "axioms" => {
                let mut r = axioms.clone();
                r.name = "axioms".into();
                r
            }
            _ if !axioms.ok() => {
                let mut r = Report::new(s.as_str());
                r.fail("skipped: the locality axioms fail");
                r
            }
            "stratification" => suite(s, || Ok(verify_stratification(l, &stratification(l)?))),
            "saturation" => suite(s, || is_saturated(&FusionSystem::of_locality(l)?, l.p())),
            other => {
                let mut r = Report::new(other);
                r.fail("needs --group: the ambient fusion system is not recorded in a locality file");
                r
            }
        };
        out.push(r);
    }
    Ok(out)
}

fn verify_group_suites(amb: &Ambient, base: Base, suites: &[String], budget: &VerifyBudget, no_theta: bool) -> Vec<Report> {
    let p = amb.ctx.p;
    let mut out = Vec::new();
    let want = |s: &str| suites.iter().any(|x| x == s);
    for s in suites {
        let r = match s.as_str() {
            "axioms" => suite(s, || Ok(verify_locality_axioms(&base.l, budget))),
            "stratification" => suite(s, || Ok(verify_stratification(&base.l, &base.st))),
            "classification" => suite(s, || verify_proper_relations(&amb.f, &amb.st, &amb.cl, p)),
            "saturation" => suite(s, || is_saturated(&amb.f, p)),
            "proper" => suite(s, || base.proper_report()),
            _ => continue,
        };
        out.push(r);
    }
    if !(want("expansion") || want("normals") || want("quotients")) {
        return out;
    }
    let in_group = base.proper_report().map(|r| r.ok()).unwrap_or(false);
    let work = match make_proper(base, no_theta) {
        Ok((w, _, _)) => w,
        Err(e) => {
            for s in ["expansion", "normals", "quotients"].into_iter().filter(|s| want(s)) {
                let mut r = Report::new(s);
                r.fail(e.to_string());
                out.push(r);
            }
            return out;
        }
    };
    let e = match subcentric_closure(&work.l, &work.f, &work.st, &work.cl) {
        Ok(e) => e,
        Err(err) => {
            for s in ["expansion", "normals", "quotients"].into_iter().filter(|s| want(s)) {
                let mut r = Report::new(s);
                r.fail(format!("expansion to F^s failed: {err}"));
                out.push(r);
            }
            return out;
        }
    };
    let lplus = &e.locality;
    let incl: Vec<u32> = (0..work.l.size() as u32).collect();
    if want("expansion") {
        out.push(suite("expansion", || {
            let mut rep = Report::new("expansion");
            let back = restrict(lplus, work.l.delta())?;
            rep.check(back.locality.structural_diff(&work.l).is_none(), || {
                format!("restriction does not return L: {}", back.locality.structural_diff(&work.l).unwrap_or_default())
            });
            rep.absorb(verify_locality_axioms(lplus, budget));
            rep.absorb(verify_closure_universality(&work.l, &work.f, &work.st, &work.cl, 8)?);
            if in_group {
                // the closure of a transporter locality is the transporter locality on F^s
                let ltilde = amb.ctx.transporter(&amb.cl.subcentric())?;
                let elems = &ltilde.origin().expect("transporter origin").elems;
                let mut pos = vec![NONE; amb.ctx.group.order()];
                for (i, &g) in elems.iter().enumerate() {
                    pos[g as usize] = i as u32;
                }
                let lo = &work.l.origin().expect("transporter origin").elems;
                let basemap: Vec<u32> =
                    (0..lplus.size()).map(|g| if g < lo.len() { pos[lo[g] as usize] } else { NONE }).collect();
                let iso = rigid_isomorphism(lplus, &ltilde, &basemap);
                rep.check(iso.is_ok(), || format!("no rigid isomorphism onto T_F^s(G): {}", iso.err().map(|e| e.to_string()).unwrap_or_default()));
            }
            Ok(rep)
        }));
    }
    let corr = if want("normals") || want("quotients") {
        normal::verify_normal_correspondence(&work.l, lplus, &incl, LATTICE_CAP)
    } else {
        Err(Error::internal("unused"))
    };
    if want("normals") {
        out.push(suite("normals", || {
            let corr = corr.as_ref().map_err(|e| Error::internal(e.to_string()))?;
            let mut rep = corr.report.clone();
            rep.absorb(normal::residual_expansion_compatibility(&work.l, lplus, &incl, corr)?);
            Ok(rep)
        }));
    }
    if want("quotients") {
        out.push(suite("quotients", || {
            let corr = corr.as_ref().map_err(|e| Error::internal(e.to_string()))?;
            let mut rep = Report::new("quotients");
            let target = work.cl.subcentric();
            for n in &corr.lower.members {
                rep.absorb(normal::verify_quotient_fusion(&work.l, &work.f, &work.cl, n)?);
                let sq = normal::quotient_expansion(&work.l, &work.f, &work.st, &work.cl, n, &target, LATTICE_CAP)?;
                rep.absorb(sq.report);
            }
            Ok(rep)
        }));
    }
    out
}
