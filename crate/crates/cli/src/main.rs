//! `bellcone`: exact cone computations for (n,2,2) Bell scenarios from the
//! command line. Every command is deterministic: identical invocations
//! produce byte-identical output, so results diff cleanly.
//!
//! Exit codes: 0 on success, 1 when a query answers "no" or a construction
//! hypothesis fails (a certificate is printed), 2 on malformed input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bellcone_core::cone::{
    cone_to_string, dual_hrep_to_vrep, dual_vrep_to_hrep, parse_cone, AnyCone,
};
use bellcone_core::error::Error as CoreError;
use bellcone_core::lifting::{
    self, Recognition, RecognizeOutcome,
};
use bellcone_core::rational::{format_rational, parse_rational, Rational};
use bellcone_core::scenario::{
    bell_cone, duality_count_obstruction, ns_cone, probabilities,
};
use bellcone_core::symmetry::{classify_orbits, parse_involution, SymmetryElement};
use bellcone_core::tensor::{
    entry_count, parse_tensor, tensor_to_string, write_tensor, AnyTensor, CorrelationTensor,
    Dualize, SettingWord, Variance,
};
use bellcone_core::{ConeHRep, ConeVRep, HMembership, VMembership};

#[derive(Parser)]
#[command(name = "bellcone", version, about = "Exact Bell / no-signaling cone toolkit")]
struct Cli {
    /// Mirror the result as a single JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Write the primary output document to a file instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioKind {
    Bell,
    Ns,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioCone {
    BellCone,
    NsCone,
}

#[derive(Args)]
struct ConeSource {
    /// Built-in scenario cone to use as the reference cone.
    #[arg(long, value_enum, requires = "parties")]
    scenario: Option<ScenarioKind>,

    /// Party count for --scenario.
    #[arg(short = 'n', long = "parties", value_name = "N")]
    parties: Option<usize>,

    /// Cone file to use as the reference cone.
    #[arg(long, value_name = "FILE", conflicts_with = "scenario")]
    cone: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a scenario cone: the Bell cone (generators) or the
    /// no-signaling cone (positivity constraints).
    Scenario {
        #[arg(value_enum)]
        which: ScenarioCone,
        #[arg(short = 'n', long = "parties", value_name = "N")]
        parties: usize,
    },
    /// Transform a tensor to the opposite variance: boxes become
    /// inequality coefficients and vice versa.
    Dualize { tensor: PathBuf },
    /// Evaluate a functional on a box.
    Pair { functional: PathBuf, r#box: PathBuf },
    /// Expand a box into its conditional outcome probabilities.
    Probabilities { tensor: PathBuf },
    /// Decide cone membership of a tensor, with a certificate either way.
    Membership {
        #[command(flatten)]
        source: ConeSource,
        tensor: PathBuf,
    },
    /// Decide whether a member spans an extreme ray (H-representation).
    Extreme {
        #[command(flatten)]
        source: ConeSource,
        tensor: PathBuf,
    },
    /// Enumerate extreme rays of an H-representation, or facets of a
    /// V-representation, with a symmetry-orbit summary.
    Enumerate {
        #[command(flatten)]
        source: ConeSource,
        /// Permit enumerations beyond two parties (they can run long).
        #[arg(long)]
        allow_long: bool,
    },
    /// Reinterpret a cone file in the dual space (V and H exchange roles).
    Dual { cone: PathBuf },
    /// Partition the rays of a cone file into symmetry orbits.
    Classify {
        cone: PathBuf,
        #[arg(short = 'n', long = "parties", value_name = "N")]
        parties: usize,
    },
    /// Involution-based party extensions.
    #[command(subcommand)]
    Lift(LiftCommand),
    /// The n-party Mermin-Klyshko inequality.
    Mk {
        #[arg(short = 'n', long = "parties", value_name = "N")]
        parties: usize,
    },
    /// Full-correlation locality test (Werner-Wolf / Zukowski-Brukner).
    WwTest {
        tensor: PathBuf,
        /// Also emit the facet inequalities binding on the box.
        #[arg(long)]
        emit_facets: bool,
    },
    /// Built-in boxes: gyni, pr, isotropic:<c>.
    Fixtures { name: String },
    /// Deterministic-point and facet counts for a general (n,k,l)
    /// scenario, and whether they permit a polyhedral duality.
    Counts {
        #[arg(short = 'n', value_name = "N")]
        n: u32,
        #[arg(short = 'k', value_name = "K")]
        k: u32,
        #[arg(short = 'l', value_name = "L")]
        l: u32,
    },
}

#[derive(Subcommand)]
enum LiftCommand {
    /// Extend a box by one party. With --kappa: one input box w (the
    /// two-involution construction). Without: two input boxes x y.
    Box {
        #[arg(long, value_name = "SPEC")]
        iota: String,
        #[arg(long, value_name = "SPEC")]
        kappa: Option<String>,
        #[arg(required = true)]
        tensors: Vec<PathBuf>,
    },
    /// Extend a Bell inequality by one party.
    Ineq {
        #[arg(long, value_name = "SPEC")]
        iota: String,
        #[arg(long, value_name = "SPEC")]
        kappa: String,
        tensor: PathBuf,
    },
    /// Decide whether a box arises from the extension construction, and
    /// recover its inputs.
    Recognize {
        #[arg(long, value_name = "SPEC")]
        iota: String,
        #[arg(long, value_name = "SPEC")]
        kappa: Option<String>,
        /// Slice along this party (1-based) instead of the last one.
        #[arg(long, value_name = "J")]
        party: Option<usize>,
        tensor: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Violation,
}

struct Outcome {
    status: Status,
    /// Primary document (tensor/cone file) when one exists.
    document: Option<String>,
    /// Human-readable result lines.
    text: String,
    payload: Value,
}

impl Outcome {
    fn ok(document: Option<String>, text: String, payload: Value) -> Self {
        Outcome { status: Status::Ok, document, text, payload }
    }

    fn violation(text: String, payload: Value) -> Self {
        Outcome { status: Status::Violation, document: None, text, payload }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let json = cli.json;
    let output = cli.output.clone();
    let command_name = command_name(&cli.command);
    match run(cli) {
        Ok(outcome) => {
            if let (Some(path), Some(doc)) = (&output, &outcome.document) {
                if let Err(e) = std::fs::write(path, doc) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if json {
                let mut envelope = json!({
                    "status": match outcome.status { Status::Ok => "ok", Status::Violation => "violation" },
                    "command": command_name,
                    "timing_ms": started.elapsed().as_millis() as u64,
                });
                if let Value::Object(map) = &mut envelope {
                    if let Value::Object(payload) = outcome.payload {
                        for (k, v) in payload {
                            map.insert(k, v);
                        }
                    }
                }
                println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
            } else {
                if let Some(doc) = &outcome.document {
                    if output.is_none() {
                        print!("{doc}");
                    }
                }
                if !outcome.text.is_empty() {
                    print!("{}", outcome.text);
                }
            }
            match outcome.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Violation => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Scenario { .. } => "scenario",
        Command::Dualize { .. } => "dualize",
        Command::Pair { .. } => "pair",
        Command::Probabilities { .. } => "probabilities",
        Command::Membership { .. } => "membership",
        Command::Extreme { .. } => "extreme",
        Command::Enumerate { .. } => "enumerate",
        Command::Dual { .. } => "dual",
        Command::Classify { .. } => "classify",
        Command::Lift(LiftCommand::Box { .. }) => "lift box",
        Command::Lift(LiftCommand::Ineq { .. }) => "lift ineq",
        Command::Lift(LiftCommand::Recognize { .. }) => "lift recognize",
        Command::Mk { .. } => "mk",
        Command::WwTest { .. } => "ww-test",
        Command::Fixtures { .. } => "fixtures",
        Command::Counts { .. } => "counts",
    }
}

/// Hypothesis failures carry certificates and exit 1; malformed input
/// exits 2.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<CoreError>() {
        Some(
            CoreError::Lift(_)
            | CoreError::NotInCone
            | CoreError::NotPointed { .. }
            | CoreError::ZeroTensor
            | CoreError::NotAnInvolution
            | CoreError::NonCommutingInvolutions,
        ) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Scenario { which, parties } => scenario_cmd(which, parties),
        Command::Dualize { tensor } => dualize_cmd(&tensor),
        Command::Pair { functional, r#box } => pair_cmd(&functional, &r#box),
        Command::Probabilities { tensor } => probabilities_cmd(&tensor),
        Command::Membership { source, tensor } => membership_cmd(&source, &tensor),
        Command::Extreme { source, tensor } => extreme_cmd(&source, &tensor),
        Command::Enumerate { source, allow_long } => enumerate_cmd(&source, allow_long),
        Command::Dual { cone } => dual_cmd(&cone),
        Command::Classify { cone, parties } => classify_cmd(&cone, parties),
        Command::Lift(lift) => lift_cmd(lift),
        Command::Mk { parties } => mk_cmd(parties),
        Command::WwTest { tensor, emit_facets } => ww_cmd(&tensor, emit_facets),
        Command::Fixtures { name } => fixtures_cmd(&name),
        Command::Counts { n, k, l } => counts_cmd(n, k, l),
    }
}

// ---------------------------------------------------------------------------
// File plumbing and JSON shapes
// ---------------------------------------------------------------------------

fn read_tensor(path: &PathBuf) -> anyhow::Result<AnyTensor> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(parse_tensor(&text)?)
}

fn read_box(path: &PathBuf) -> anyhow::Result<CorrelationTensor> {
    Ok(read_tensor(path)?.into_correlation()?)
}

fn read_cone(path: &PathBuf) -> anyhow::Result<AnyCone> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(parse_cone(&text)?)
}

fn tensor_json(n: usize, variance: Variance, entries: &[Rational]) -> Value {
    let mut map = serde_json::Map::new();
    for (idx, v) in entries.iter().enumerate() {
        if !is_zero(v) {
            let word = SettingWord::from_index(n, idx);
            map.insert(word.to_string(), Value::String(format_rational(v)));
        }
    }
    json!({ "n": n, "variance": variance.to_string(), "entries": Value::Object(map) })
}

fn any_tensor_json(t: &AnyTensor) -> Value {
    tensor_json(t.n(), t.variance(), t.entries())
}

fn cone_json(c: &AnyCone) -> Value {
    let rows: Vec<Value> = c
        .rows()
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|x| Value::String(format_rational(&Rational::from_integer(x.clone()))))
                    .collect(),
            )
        })
        .collect();
    json!({
        "dim": c.dim(),
        "rep": c.rep().to_string(),
        "count": c.rows().len(),
        "rows": rows,
    })
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

fn is_zero(v: &Rational) -> bool {
    use bellcone_core::rational::rat_int;
    *v == rat_int(0)
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn scenario_cmd(which: ScenarioCone, n: usize) -> anyhow::Result<Outcome> {
    let cone = match which {
        ScenarioCone::BellCone => AnyCone::V(bell_cone(n)?),
        ScenarioCone::NsCone => AnyCone::H(ns_cone(n)?),
    };
    let doc = cone_to_string(&cone);
    Ok(Outcome::ok(Some(doc), String::new(), json!({ "cone": cone_json(&cone) })))
}

fn dualize_cmd(path: &PathBuf) -> anyhow::Result<Outcome> {
    let out = match read_tensor(path)? {
        AnyTensor::Correlation(x) => AnyTensor::Functional(x.dualize()),
        AnyTensor::Functional(f) => AnyTensor::Correlation(f.dualize()),
    };
    Ok(Outcome::ok(
        Some(tensor_to_string(&out)),
        String::new(),
        json!({ "tensor": any_tensor_json(&out) }),
    ))
}

fn pair_cmd(functional: &PathBuf, r#box: &PathBuf) -> anyhow::Result<Outcome> {
    let f = read_tensor(functional)?.into_functional()?;
    let x = read_box(r#box)?;
    let value = f.pair(&x)?;
    Ok(Outcome::ok(
        None,
        format!("pair = {}\n", format_rational(&value)),
        json!({ "value": format_rational(&value) }),
    ))
}

fn probabilities_cmd(path: &PathBuf) -> anyhow::Result<Outcome> {
    let x = read_box(path)?;
    let table = probabilities(&x);
    let mut text = String::new();
    let mut rows = Vec::new();
    for (s, t, p) in table.rows() {
        let sw = SettingWord::new(s.clone())?;
        let tw = SettingWord::new(t.clone())?;
        writeln!(text, "P({tw} | {sw}) = {}", format_rational(p)).expect("string write");
        rows.push(json!({
            "settings": sw.to_string(),
            "outcomes": tw.to_string(),
            "p": format_rational(p),
        }));
    }
    Ok(Outcome::ok(None, text, json!({ "probabilities": rows })))
}

enum Reference {
    V(ConeVRep),
    H(ConeHRep),
}

fn resolve_source(source: &ConeSource) -> anyhow::Result<Reference> {
    match (&source.scenario, &source.cone) {
        (Some(kind), None) => {
            let n = source.parties.ok_or_else(|| anyhow!("--scenario requires -n"))?;
            Ok(match kind {
                ScenarioKind::Bell => Reference::V(bell_cone(n)?),
                ScenarioKind::Ns => Reference::H(ns_cone(n)?),
            })
        }
        (None, Some(path)) => Ok(match read_cone(path)? {
            AnyCone::V(c) => Reference::V(c),
            AnyCone::H(c) => Reference::H(c),
        }),
        _ => bail!("specify exactly one of --scenario <bell|ns> -n <N> or --cone <FILE>"),
    }
}

fn membership_cmd(source: &ConeSource, tensor: &PathBuf) -> anyhow::Result<Outcome> {
    let x = read_tensor(tensor)?;
    let coords = x.entries();
    match resolve_source(source)? {
        Reference::H(cone) => match cone.contains(coords)? {
            HMembership::Member => Ok(Outcome::ok(
                None,
                "member: yes\n".into(),
                json!({ "member": true }),
            )),
            HMembership::NotMember { violated } => Ok(Outcome::violation(
                format!(
                    "member: no\nviolated functional: {}\n",
                    join_rationals(&violated)
                ),
                json!({ "member": false, "violated_functional": rationals_json(&violated) }),
            )),
        },
        Reference::V(cone) => match cone.contains(coords)? {
            VMembership::Member { coefficients } => {
                let nonzero: Vec<String> = coefficients
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !is_zero(c))
                    .map(|(i, c)| format!("{i}:{}", format_rational(c)))
                    .collect();
                Ok(Outcome::ok(
                    None,
                    format!("member: yes\ncombination: {}\n", nonzero.join(" ")),
                    json!({ "member": true, "coefficients": rationals_json(&coefficients) }),
                ))
            }
            VMembership::NotMember { separator } => Ok(Outcome::violation(
                format!(
                    "member: no\nseparating functional: {}\n",
                    join_rationals(&separator)
                ),
                json!({ "member": false, "separating_functional": rationals_json(&separator) }),
            )),
        },
    }
}

fn extreme_cmd(source: &ConeSource, tensor: &PathBuf) -> anyhow::Result<Outcome> {
    let x = read_tensor(tensor)?;
    let cone = match resolve_source(source)? {
        Reference::H(cone) => cone,
        Reference::V(_) => bail!(
            "extremality testing needs an H-representation; enumerate facets first \
             (`enumerate` on the V-representation) or use --scenario ns"
        ),
    };
    let rank = cone.tight_rank(x.entries())?;
    let extreme = rank == cone.dim() - 1;
    let text = format!("extreme: {}\ntight rank: {rank} (dim {})\n", yesno(extreme), cone.dim());
    let payload = json!({ "extreme": extreme, "tight_rank": rank, "dim": cone.dim() });
    if extreme {
        Ok(Outcome::ok(None, text, payload))
    } else {
        Ok(Outcome::violation(text, payload))
    }
}

fn enumerate_cmd(source: &ConeSource, allow_long: bool) -> anyhow::Result<Outcome> {
    let (hrep, label) = match resolve_source(source)? {
        Reference::H(cone) => (cone, "rays"),
        // facets of a V-cone are the rays of its dual
        Reference::V(cone) => (dual_vrep_to_hrep(&cone)?, "facets"),
    };
    if hrep.dim() > entry_count(2) && !allow_long {
        bail!(
            "enumeration in dimension {} can run long; pass --allow-long to proceed",
            hrep.dim()
        );
    }
    let rays = hrep.enumerate_rays_with(|p| {
        if allow_long {
            eprintln!("enumerate: constraint {}/{}, rays={}", p.inserted, p.total, p.rays);
        }
    })?;
    let cone = AnyCone::V(rays.clone());
    let doc = cone_to_string(&cone);

    let mut text = format!("{label}: {}\n", rays.len());
    let mut payload = json!({ "cone": cone_json(&cone), "kind": label });
    if let Some(n) = dim_as_parties(rays.dim()) {
        let orbits = classify_orbits(&rays, n)?;
        writeln!(text, "orbits: {}", orbits.len()).expect("string write");
        let mut rows = Vec::new();
        for (i, o) in orbits.iter().enumerate() {
            writeln!(
                text,
                "orbit {i}: size={} stabilizer={} rep={}",
                o.size,
                o.stabilizer_order,
                join_display(&o.representative)
            )
            .expect("string write");
            rows.push(json!({
                "size": o.size,
                "stabilizer": o.stabilizer_order,
                "representative": Value::Array(
                    o.representative.iter().map(|x| Value::String(x.to_string())).collect()
                ),
            }));
        }
        if let Value::Object(map) = &mut payload {
            map.insert("orbits".into(), Value::Array(rows));
        }
    }
    Ok(Outcome::ok(Some(doc), text, payload))
}

fn dual_cmd(path: &PathBuf) -> anyhow::Result<Outcome> {
    let out = match read_cone(path)? {
        AnyCone::V(c) => AnyCone::H(dual_vrep_to_hrep(&c)?),
        AnyCone::H(c) => AnyCone::V(dual_hrep_to_vrep(&c)),
    };
    Ok(Outcome::ok(Some(cone_to_string(&out)), String::new(), json!({ "cone": cone_json(&out) })))
}

fn classify_cmd(path: &PathBuf, n: usize) -> anyhow::Result<Outcome> {
    let cone = match read_cone(path)? {
        AnyCone::V(c) => c,
        AnyCone::H(_) => bail!("classify expects a V-representation (a set of rays)"),
    };
    let orbits = classify_orbits(&cone, n)?;
    let mut text = format!("orbits: {}\n", orbits.len());
    let mut rows = Vec::new();
    for (i, o) in orbits.iter().enumerate() {
        writeln!(
            text,
            "orbit {i}: size={} stabilizer={} rep={}",
            o.size,
            o.stabilizer_order,
            join_display(&o.representative)
        )
        .expect("string write");
        rows.push(json!({
            "size": o.size,
            "stabilizer": o.stabilizer_order,
            "representative": Value::Array(
                o.representative.iter().map(|x| Value::String(x.to_string())).collect()
            ),
        }));
    }
    Ok(Outcome::ok(None, text, json!({ "orbits": rows })))
}

fn lift_cmd(lift: LiftCommand) -> anyhow::Result<Outcome> {
    match lift {
        LiftCommand::Box { iota, kappa, tensors } => {
            match (&kappa, tensors.as_slice()) {
                (Some(kappa), [w_path]) => {
                    let w = read_box(w_path)?;
                    let iota = parse_involution(w.n(), &iota)?;
                    let kappa = parse_involution(w.n(), kappa)?;
                    let z = lifting::extend_box2(&w, &iota, &kappa)?;
                    let doc = write_tensor(z.n(), Variance::Upper, z.entries());
                    Ok(Outcome::ok(
                        Some(doc),
                        String::new(),
                        json!({ "tensor": tensor_json(z.n(), Variance::Upper, z.entries()) }),
                    ))
                }
                (None, [x_path, y_path]) => {
                    let x = read_box(x_path)?;
                    let y = read_box(y_path)?;
                    let iota = parse_involution(x.n(), &iota)?;
                    let z = lifting::extend_box(&x, &y, &iota)?;
                    let doc = write_tensor(z.n(), Variance::Upper, z.entries());
                    Ok(Outcome::ok(
                        Some(doc),
                        String::new(),
                        json!({ "tensor": tensor_json(z.n(), Variance::Upper, z.entries()) }),
                    ))
                }
                (Some(_), _) => bail!("with --kappa, `lift box` takes exactly one tensor file"),
                (None, _) => bail!("without --kappa, `lift box` takes exactly two tensor files"),
            }
        }
        LiftCommand::Ineq { iota, kappa, tensor } => {
            let f = read_tensor(&tensor)?.into_functional()?;
            let iota = parse_involution(f.n(), &iota)?;
            let kappa = parse_involution(f.n(), &kappa)?;
            let out = lifting::extend_inequality(&f, &iota, &kappa)?;
            let doc = write_tensor(out.n(), Variance::Lower, out.entries());
            Ok(Outcome::ok(
                Some(doc),
                String::new(),
                json!({ "tensor": tensor_json(out.n(), Variance::Lower, out.entries()) }),
            ))
        }
        LiftCommand::Recognize { iota, kappa, party, tensor } => {
            let mut z = read_box(&tensor)?;
            let n = z.n();
            if let Some(j) = party {
                if j == 0 || j > n {
                    bail!("party {j} out of range 1..={n}");
                }
                z = rotate_party_last(&z, j - 1)?;
            }
            let iota = parse_involution(n - 1, &iota)?;
            let kappa = kappa.map(|k| parse_involution(n - 1, &k)).transpose()?;
            match lifting::recognize_extension(&z, &iota, kappa.as_ref())? {
                RecognizeOutcome::Recognized(Recognition::Single { x, y }) => {
                    let x_doc = write_tensor(x.n(), Variance::Upper, x.entries());
                    let y_doc = write_tensor(y.n(), Variance::Upper, y.entries());
                    Ok(Outcome::ok(
                        None,
                        format!("recognized: yes (single involution)\n{x_doc}{y_doc}"),
                        json!({
                            "recognized": true,
                            "mode": "single",
                            "x": tensor_json(x.n(), Variance::Upper, x.entries()),
                            "y": tensor_json(y.n(), Variance::Upper, y.entries()),
                        }),
                    ))
                }
                RecognizeOutcome::Recognized(Recognition::Double { w }) => {
                    let w_doc = write_tensor(w.n(), Variance::Upper, w.entries());
                    Ok(Outcome::ok(
                        None,
                        format!("recognized: yes (two involutions)\n{w_doc}"),
                        json!({
                            "recognized": true,
                            "mode": "double",
                            "w": tensor_json(w.n(), Variance::Upper, w.entries()),
                        }),
                    ))
                }
                RecognizeOutcome::NotRecognized(reason) => Ok(Outcome::violation(
                    format!("recognized: no\nfailed condition: {reason}\n"),
                    json!({ "recognized": false, "failed_condition": reason.to_string() }),
                )),
            }
        }
    }
}

/// Relabels parties so that party `j` (0-based) becomes the last one, the
/// others keeping their relative order.
fn rotate_party_last(z: &CorrelationTensor, j: usize) -> anyhow::Result<CorrelationTensor> {
    let n = z.n();
    let mut perm = vec![0usize; n];
    let mut next = 0;
    for (p, slot) in perm.iter_mut().enumerate() {
        if p == j {
            *slot = n - 1;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let sigma = SymmetryElement::new(perm, vec![false; n], vec![(false, false); n])?;
    Ok(sigma.act(z)?)
}

fn mk_cmd(n: usize) -> anyhow::Result<Outcome> {
    let f = lifting::mermin_klyshko(n)?;
    let doc = write_tensor(f.n(), Variance::Lower, f.entries());
    Ok(Outcome::ok(
        Some(doc),
        String::new(),
        json!({ "tensor": tensor_json(f.n(), Variance::Lower, f.entries()) }),
    ))
}

fn ww_cmd(path: &PathBuf, emit_facets: bool) -> anyhow::Result<Outcome> {
    let x = read_box(path)?;
    let local = lifting::ww_zb_local_test(&x)?;
    let mut text = format!("full-correlation local: {}\n", yesno(local));
    let mut payload = json!({ "local": local });
    if emit_facets {
        let facets = lifting::ww_zb_binding_facets(&x)?;
        writeln!(text, "binding facets: {}", facets.len()).expect("string write");
        let mut docs = Vec::new();
        for f in &facets {
            text.push_str(&write_tensor(f.n(), Variance::Lower, f.entries()));
            docs.push(tensor_json(f.n(), Variance::Lower, f.entries()));
        }
        if let Value::Object(map) = &mut payload {
            map.insert("binding_facets".into(), Value::Array(docs));
        }
    }
    if local {
        Ok(Outcome::ok(None, text, payload))
    } else {
        Ok(Outcome::violation(text, payload))
    }
}

fn fixtures_cmd(name: &str) -> anyhow::Result<Outcome> {
    let x = match name {
        "gyni" => lifting::gyni_box(),
        "pr" => bellcone_core::fixtures::pr_box(),
        other => match other.split_once(':') {
            Some(("isotropic", c)) => lifting::isotropic_box(&parse_rational(c)?),
            _ => bail!("unknown fixture `{other}`; available: gyni, pr, isotropic:<c>"),
        },
    };
    let doc = write_tensor(x.n(), Variance::Upper, x.entries());
    Ok(Outcome::ok(
        Some(doc),
        String::new(),
        json!({ "tensor": tensor_json(x.n(), Variance::Upper, x.entries()) }),
    ))
}

fn counts_cmd(n: u32, k: u32, l: u32) -> anyhow::Result<Outcome> {
    let c = duality_count_obstruction(n, k, l)?;
    Ok(Outcome::ok(
        None,
        format!("vertices={} facets={} duality={}\n", c.vertices, c.facets, c.duality_possible),
        json!({
            "vertices": c.vertices.to_string(),
            "facets": c.facets.to_string(),
            "duality": c.duality_possible,
        }),
    ))
}

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

fn yesno(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn join_rationals(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

fn join_display<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn dim_as_parties(dim: usize) -> Option<usize> {
    let mut n = 0;
    let mut p = 1;
    while p < dim {
        p *= 3;
        n += 1;
    }
    (p == dim && n >= 1).then_some(n)
}
