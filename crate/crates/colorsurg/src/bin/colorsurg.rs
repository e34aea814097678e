use clap::{Args, Parser, Subcommand, ValueEnum};
use colorsurg::anyons::{self, WallSpec};
use colorsurg::decoder::{self, FailureEstimate, SyndromeGraph};
use colorsurg::estimator::{self, AlgorithmSpec, SweepRow};
use colorsurg::lattice::{self, CodePatch};
use colorsurg::layout::{SurgeryLayout, Which};
use colorsurg::surgery::{self, DressedLogicals, LogicalPrep};
use colorsurg::{Error, PauliOperator, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const OUT_DIR_ENV: &str = "COLORSURG_OUT_DIR";
const DEFAULT_LA: &str = "X1 X3 Z4";
const DEFAULT_LB: &str = "Z1 Z2 Z3 Z4";

#[derive(Parser, Debug)]
#[command(name = "colorsurg", version, about = "Color-code lattice surgery toolkit")]
struct Cli {
    /// Worker threads for trial-parallel commands (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for relative output paths.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build and export code patches and surgery layouts.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Run the merge/split protocol against the reference tableau.
    #[command(subcommand)]
    Surgery(SurgeryCmd),
    /// Bell-measurement error decoding.
    #[command(subcommand)]
    Decode(DecodeCmd),
    /// Anyon boundaries and domain walls.
    #[command(subcommand)]
    Anyons(AnyonsCmd),
    /// Resource estimates.
    #[command(subcommand)]
    Estimate(EstimateCmd),
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Build a code patch and write it as JSON.
    Build(BuildArgs),
    /// Build a surgery layout for two logical words and write it as JSON.
    Layout(LayoutArgs),
}

#[derive(Subcommand, Debug)]
enum SurgeryCmd {
    /// Seeded protocol trials with per-trial reference comparison.
    Run(RunArgs),
}

#[derive(Subcommand, Debug)]
enum DecodeCmd {
    /// Monte Carlo failure rates over a list of error probabilities.
    Sweep(SweepArgs),
    /// Min-cut fault distance and an optional exhaustive low-weight sweep.
    Distance(DistanceArgs),
}

#[derive(Subcommand, Debug)]
enum AnyonsCmd {
    /// List boundaries or walls of one kind.
    Enumerate(EnumerateArgs),
}

#[derive(Subcommand, Debug)]
enum EstimateCmd {
    /// Color versus surface comparison over a log-spaced error-rate grid.
    Sweep(EstSweepArgs),
    /// Space, time and spacetime coefficients of both schemes.
    Table1(Table1Args),
    /// 15-to-1 distillation overheads.
    Distill(DistillArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Triangular,
    Thin,
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[arg(long, value_enum, default_value = "triangular")]
    family: Family,
    /// Distance of a triangular patch (odd, at least 3).
    #[arg(long)]
    distance: Option<usize>,
    /// X distance of a thin patch.
    #[arg(long)]
    dx: Option<usize>,
    /// Z distance of a thin patch.
    #[arg(long)]
    dz: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-read a lattice artifact instead of building.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LayoutArgs {
    #[arg(long)]
    distance: Option<usize>,
    #[arg(long)]
    la: Option<String>,
    #[arg(long)]
    lb: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RunArgs {
    /// Lattice or layout artifact.
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long)]
    la: Option<String>,
    #[arg(long)]
    lb: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Random logical words measured before the protocol in each trial.
    #[arg(long, default_value_t = 3)]
    prep: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long)]
    layout: Option<PathBuf>,
    #[arg(long)]
    la: Option<String>,
    #[arg(long)]
    lb: Option<String>,
    #[arg(long, value_delimiter = ',')]
    p_list: Vec<f64>,
    #[arg(long, default_value_t = 10000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DistanceArgs {
    #[arg(long)]
    layout: PathBuf,
    #[arg(long)]
    la: Option<String>,
    #[arg(long)]
    lb: Option<String>,
    /// Decode every Bell error up to this weight.
    #[arg(long)]
    exhaustive: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Boundaries,
    Transparent,
    Semitransparent,
    Opaque,
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Run the validators on every item; violations exit with code 3.
    #[arg(long)]
    validate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct EstSweepArgs {
    #[arg(long, default_value_t = 100)]
    n: u64,
    #[arg(long, default_value_t = 1e8)]
    tcount: f64,
    #[arg(long, default_value_t = 0.01)]
    budget: f64,
    #[arg(long, default_value_t = 5e-5)]
    p_min: f64,
    #[arg(long, default_value_t = 2e-3)]
    p_max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Table1Args {
    #[arg(long, default_value_t = 100)]
    n: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DistillArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => 2,
        Error::Validation(_) => 3,
        Error::Runtime(_) | Error::Io(_) => 1,
    }
}

fn error_line(kind: &str, code: u8, message: &str) -> String {
    json!({"error": {"kind": kind, "exit_code": code, "message": message}}).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e.render());
            eprintln!("{}", error_line("parse", 2, e.kind().as_str().unwrap_or("invalid arguments")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{}", error_line(e.kind(), code, &e.to_string()));
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Runtime(e.to_string()))?;
    }
    let out = Output { dir: cli.out_dir };
    match cli.cmd {
        Cmd::Lattice(LatticeCmd::Build(a)) => lattice_build(&a, &out),
        Cmd::Lattice(LatticeCmd::Layout(a)) => lattice_layout(&a, &out),
        Cmd::Surgery(SurgeryCmd::Run(a)) => surgery_run(&a, &out),
        Cmd::Decode(DecodeCmd::Sweep(a)) => decode_sweep(&a, &out),
        Cmd::Decode(DecodeCmd::Distance(a)) => decode_distance(&a, &out),
        Cmd::Anyons(AnyonsCmd::Enumerate(a)) => anyons_enumerate(&a, &out),
        Cmd::Estimate(EstimateCmd::Sweep(a)) => estimate_sweep(&a, &out),
        Cmd::Estimate(EstimateCmd::Table1(a)) => estimate_table1(&a, &out),
        Cmd::Estimate(EstimateCmd::Distill(a)) => estimate_distill(&a, &out),
    }
}

struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.dir {
            Some(d) if p.is_relative() => d.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// Write to `path` (relative to the output directory) or to stdout.
    fn emit(&self, path: Option<&PathBuf>, content: &str) -> Result<()> {
        match path {
            Some(p) => {
                let p = self.resolve(p);
                if let Some(parent) = p.parent().filter(|x| !x.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)?;
                }
                std::fs::write(&p, content)?;
                Ok(())
            }
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }
}

fn config_of<T: Serialize>(command: &str, args: &T) -> Result<Value> {
    let mut v = serde_json::to_value(args)?;
    if let Value::Object(m) = &mut v {
        m.remove("input");
        m.insert("command".into(), Value::String(command.into()));
    }
    Ok(v)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read_text(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Runtime(format!("cannot read {}: {e}", p.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(p)?)?)
}

/// CSV with a leading `# config: {...}` line.
fn write_csv<T: Serialize>(config: &Value, rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Runtime(e.to_string()))?)
        .map_err(|e| Error::Runtime(e.to_string()))?;
    Ok(format!("# config: {config}\n{body}"))
}

fn read_csv<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<(Value, Vec<T>)> {
    let text = read_text(p)?;
    let first = text.lines().next().unwrap_or_default();
    let config = match first.strip_prefix("# config: ") {
        Some(c) => serde_json::from_str(c)?,
        None => return Err(Error::Parse(format!("{} has no config line", p.display()))),
    };
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows = r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok((config, rows))
}

fn require<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Parse(format!("missing required argument {flag}")))
}

/// Number of patches referenced by sparse words such as "X1 X3 Z4".
fn patches_in(words: &[&str]) -> Result<usize> {
    let mut n = 0;
    for w in words {
        for tok in w.split(|c: char| c.is_whitespace() || c == ',' || c == '*').filter(|t| !t.is_empty()) {
            let digits = tok.trim_start_matches('-').get(1..).unwrap_or_default();
            let i: usize = digits.parse().map_err(|_| Error::Parse(format!("bad token '{tok}' in '{w}'")))?;
            n = n.max(i);
        }
    }
    if n == 0 {
        return Err(Error::Validation("logical words act on no patch".into()));
    }
    Ok(n)
}

fn parse_words(la: &str, lb: &str) -> Result<(PauliOperator, PauliOperator)> {
    let n = patches_in(&[la, lb])?;
    Ok((PauliOperator::from_sparse(la, n)?, PauliOperator::from_sparse(lb, n)?))
}

#[derive(Serialize, Deserialize)]
struct LatticeArtifact {
    kind: String,
    config: Value,
    family: String,
    distance: Option<usize>,
    num_qubits: usize,
    num_faces: usize,
    patch: CodePatch,
}

#[derive(Serialize, Deserialize)]
struct LayoutArtifact {
    kind: String,
    config: Value,
    layout: Value,
}

fn lattice_build(a: &BuildArgs, out: &Output) -> Result<()> {
    let art: LatticeArtifact = match &a.input {
        Some(p) => {
            let art: LatticeArtifact = read_json(p)?;
            let rep = lattice::verify_lattice(&art.patch.lattice);
            if !rep.is_valid() {
                return Err(Error::Validation(format!("{} holds an invalid lattice", p.display())));
            }
            art
        }
        None => {
            let (patch, distance) = match a.family {
                Family::Triangular => {
                    let d = require(&a.distance, "--distance")?;
                    (lattice::build_triangular_code(d)?, Some(d))
                }
                Family::Thin => (lattice::build_thin_code(require(&a.dx, "--dx")?, require(&a.dz, "--dz")?)?, None),
            };
            LatticeArtifact {
                kind: "lattice".into(),
                config: config_of("lattice build", a)?,
                family: serde_json::to_value(a.family)?.as_str().unwrap_or_default().into(),
                distance,
                num_qubits: patch.num_qubits(),
                num_faces: patch.lattice.faces.len(),
                patch,
            }
        }
    };
    out.emit(a.out.as_ref(), &to_json(&art)?)
}

fn layout_artifact(config: Value, layout: &SurgeryLayout) -> Result<LayoutArtifact> {
    Ok(LayoutArtifact {
        kind: "surgery-layout".into(),
        config,
        layout: serde_json::from_str(&layout.to_json()?)?,
    })
}

fn lattice_layout(a: &LayoutArgs, out: &Output) -> Result<()> {
    let art = match &a.input {
        Some(p) => {
            let art: LayoutArtifact = read_json(p)?;
            check_layout(&SurgeryLayout::from_json(&art.layout.to_string())?)?;
            art
        }
        None => {
            let (la, lb) = parse_words(
                a.la.as_deref().unwrap_or(DEFAULT_LA),
                a.lb.as_deref().unwrap_or(DEFAULT_LB),
            )?;
            let layout = SurgeryLayout::new(require(&a.distance, "--distance")?, &la, &lb)?;
            check_layout(&layout)?;
            layout_artifact(config_of("lattice layout", a)?, &layout)?
        }
    };
    out.emit(a.out.as_ref(), &to_json(&art)?)
}

fn check_layout(l: &SurgeryLayout) -> Result<()> {
    let issues = l.check();
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!("layout check failed: {}", issues.join("; "))))
    }
}

/// Surgery layout from a lattice artifact plus words, or from a layout artifact.
fn load_layout(p: &Path, la: Option<&str>, lb: Option<&str>) -> Result<SurgeryLayout> {
    let v: Value = read_json(p)?;
    match v.get("kind").and_then(Value::as_str) {
        Some("surgery-layout") => {
            let art: LayoutArtifact = serde_json::from_value(v)?;
            let layout = SurgeryLayout::from_json(&art.layout.to_string())?;
            if la.is_some() || lb.is_some() {
                let (wa, wb) = parse_words(la.unwrap_or(DEFAULT_LA), lb.unwrap_or(DEFAULT_LB))?;
                if wa != layout.la || wb != layout.lb {
                    return Err(Error::Validation("--la/--lb differ from the words stored in the layout".into()));
                }
            }
            Ok(layout)
        }
        Some("lattice") => {
            let art: LatticeArtifact = serde_json::from_value(v)?;
            let d = art
                .distance
                .filter(|_| art.family == "triangular")
                .ok_or_else(|| Error::Validation("surgery needs a triangular lattice artifact".into()))?;
            let (wa, wb) = parse_words(la.unwrap_or(DEFAULT_LA), lb.unwrap_or(DEFAULT_LB))?;
            let layout = SurgeryLayout::new(d, &wa, &wb)?;
            check_layout(&layout)?;
            Ok(layout)
        }
        _ => Err(Error::Parse(format!("{} is neither a lattice nor a layout artifact", p.display()))),
    }
}

#[derive(Serialize, Deserialize)]
struct TrialRecord {
    trial: u64,
    seed: u64,
    prep: Vec<String>,
    outcome_a: Option<i8>,
    outcome_b: Option<i8>,
    q_a: Option<i8>,
    s_a: Option<i8>,
    q_b: Option<i8>,
    s_b: Option<i8>,
    merge_windows: usize,
    mismatches: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SurgerySummary {
    trials: u64,
    agreements: u64,
    single_merge_window: bool,
    leakage_free: bool,
}

#[derive(Serialize, Deserialize)]
struct SurgeryArtifact {
    kind: String,
    config: Value,
    d: usize,
    patches: usize,
    qubits: usize,
    la: String,
    lb: String,
    summary: SurgerySummary,
    trials: Vec<TrialRecord>,
}

fn surgery_run(a: &RunArgs, out: &Output) -> Result<()> {
    if let Some(p) = &a.input {
        let art: SurgeryArtifact = read_json(p)?;
        return out.emit(a.out.as_ref(), &to_json(&art)?);
    }
    if a.trials == 0 {
        return Err(Error::Validation("--trials must be at least 1".into()));
    }
    let layout = load_layout(&require(&a.layout, "--layout")?, a.la.as_deref(), a.lb.as_deref())?;
    let dressed = DressedLogicals::new(&layout)?;
    let leakage = surgery::verify_no_leakage(&layout)?;
    let n = layout.num_patches();
    let trials: Vec<TrialRecord> = (0..a.trials)
        .into_par_iter()
        .map(|i| {
            let seed = a.seed.wrapping_add(i);
            let mut prng = ChaCha8Rng::seed_from_u64(seed);
            prng.set_stream(1);
            let prep = LogicalPrep::random(n, a.prep, &mut prng);
            let (trace, mismatches) = surgery::reference_trial(&layout, &dressed, &prep, seed)?;
            let r = &trace.result;
            Ok(TrialRecord {
                trial: i,
                seed,
                prep: prep.words.iter().map(|w| w.to_sparse()).collect(),
                outcome_a: r.outcome(Which::A),
                outcome_b: r.outcome(Which::B),
                q_a: r.q_a,
                s_a: r.s_a,
                q_b: r.q_b,
                s_b: r.s_b,
                merge_windows: trace.merge_windows(),
                mismatches,
            })
        })
        .collect::<Result<_>>()?;
    let summary = SurgerySummary {
        trials: a.trials,
        agreements: trials.iter().filter(|t| t.mismatches.is_empty()).count() as u64,
        single_merge_window: trials.iter().all(|t| t.merge_windows == 1),
        leakage_free: leakage.no_leakage(),
    };
    let art = SurgeryArtifact {
        kind: "surgery-run".into(),
        config: config_of("surgery run", a)?,
        d: layout.d,
        patches: n,
        qubits: layout.num_qubits(),
        la: layout.la.to_sparse(),
        lb: layout.lb.to_sparse(),
        summary,
        trials,
    };
    out.emit(a.out.as_ref(), &to_json(&art)?)
}

fn decode_sweep(a: &SweepArgs, out: &Output) -> Result<()> {
    let (config, rows) = match &a.input {
        Some(p) => read_csv::<FailureEstimate>(p)?,
        None => {
            if a.p_list.is_empty() {
                return Err(Error::Parse("missing required argument --p-list".into()));
            }
            let layout = load_layout(&require(&a.layout, "--layout")?, a.la.as_deref(), a.lb.as_deref())?;
            let g = SyndromeGraph::new(&layout)?;
            let rows = a
                .p_list
                .iter()
                .enumerate()
                .map(|(i, &p)| decoder::monte_carlo_failure(&g, layout.d, p, a.trials, a.seed.wrapping_add(i as u64)))
                .collect::<Result<Vec<_>>>()?;
            (config_of("decode sweep", a)?, rows)
        }
    };
    out.emit(a.csv.as_ref(), &write_csv(&config, &rows)?)
}

fn decode_distance(a: &DistanceArgs, out: &Output) -> Result<()> {
    let layout = load_layout(&a.layout, a.la.as_deref(), a.lb.as_deref())?;
    let g = SyndromeGraph::new(&layout)?;
    let exhaustive = match a.exhaustive {
        Some(w) => {
            let (tried, failed) = decoder::exhaustive_sweep(&g, w)?;
            Some(json!({"max_weight": w, "tried": tried, "failed": failed}))
        }
        None => None,
    };
    let v = json!({
        "kind": "fault-distance",
        "config": config_of("decode distance", a)?,
        "d": layout.d,
        "min_cut_a": g.min_cut_distance(Which::A),
        "min_cut_b": g.min_cut_distance(Which::B),
        "fault_distance": g.fault_distance(),
        "exhaustive": exhaustive,
    });
    out.emit(a.out.as_ref(), &to_json(&v)?)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Item {
    Boundary {
        condensed: Vec<anyons::Anyon>,
        line: String,
    },
    Wall(WallSpec),
}

#[derive(Serialize, Deserialize)]
struct AnyonArtifact {
    kind: String,
    config: Value,
    item_kind: Kind,
    count: usize,
    violations: Option<Vec<String>>,
    items: Vec<Item>,
}

fn item_violations(it: &Item) -> Vec<String> {
    match it {
        Item::Boundary { condensed, .. } => anyons::validate_boundary(&anyons::BoundarySpec {
            condensed: condensed.clone(),
        }),
        Item::Wall(w) => anyons::validate_wall(w),
    }
}

fn anyons_enumerate(a: &EnumerateArgs, out: &Output) -> Result<()> {
    let art = match &a.input {
        Some(p) => {
            let mut art: AnyonArtifact = read_json(p)?;
            if art.count != art.items.len() {
                return Err(Error::Validation(format!("count {} but {} items", art.count, art.items.len())));
            }
            if a.validate {
                art.violations = Some(art.items.iter().flat_map(item_violations).collect());
            }
            art
        }
        None => {
            let kind = require(&a.kind, "--kind")?;
            let items: Vec<Item> = match kind {
                Kind::Boundaries => anyons::enumerate_boundaries()
                    .into_iter()
                    .map(|b| Item::Boundary {
                        line: b.line(),
                        condensed: b.condensed,
                    })
                    .collect(),
                Kind::Transparent => anyons::enumerate_transparent_walls().into_iter().map(Item::Wall).collect(),
                Kind::Semitransparent => anyons::enumerate_semitransparent_walls().into_iter().map(Item::Wall).collect(),
                Kind::Opaque => anyons::enumerate_opaque_walls().into_iter().map(Item::Wall).collect(),
            };
            let violations = a.validate.then(|| items.iter().flat_map(item_violations).collect());
            AnyonArtifact {
                kind: "anyon-enumeration".into(),
                config: config_of("anyons enumerate", a)?,
                item_kind: kind,
                count: items.len(),
                violations,
                items,
            }
        }
    };
    match &a.out {
        Some(_) => {
            out.emit(a.out.as_ref(), &to_json(&art)?)?;
            println!("count {}", art.count);
        }
        None => out.emit(None, &to_json(&art)?)?,
    }
    if let Some(v) = art.violations.as_ref().filter(|v| !v.is_empty()) {
        return Err(Error::Validation(format!("{} validator violations, first: {}", v.len(), v[0])));
    }
    Ok(())
}

fn estimate_sweep(a: &EstSweepArgs, out: &Output) -> Result<()> {
    let (config, rows) = match &a.input {
        Some(p) => read_csv::<SweepRow>(p)?,
        None => {
            let alg = AlgorithmSpec::new(a.n, a.tcount, a.budget)?;
            let grid = estimator::log_grid(a.p_min, a.p_max, a.points)?;
            (config_of("estimate sweep", a)?, estimator::compare_sweep(&alg, &grid)?)
        }
    };
    out.emit(a.csv.as_ref(), &write_csv(&config, &rows)?)
}

#[derive(Serialize, Deserialize)]
struct Table1Artifact {
    kind: String,
    config: Value,
    table: estimator::Table1,
}

fn estimate_table1(a: &Table1Args, out: &Output) -> Result<()> {
    let art = match &a.input {
        Some(p) => read_json(p)?,
        None => {
            if a.n == 0 {
                return Err(Error::Validation("--n must be at least 1".into()));
            }
            Table1Artifact {
                kind: "table1".into(),
                config: config_of("estimate table1", a)?,
                table: estimator::table1(a.n),
            }
        }
    };
    out.emit(a.out.as_ref(), &to_json(&art)?)
}

#[derive(Serialize, Deserialize)]
struct DistillArtifact {
    kind: String,
    config: Value,
    color: estimator::DistillationOverhead,
    surface: estimator::DistillationOverhead,
    space_ratio: f64,
    time_speedup: f64,
    spacetime_improvement: f64,
}

fn estimate_distill(a: &DistillArgs, out: &Output) -> Result<()> {
    let art = match &a.input {
        Some(p) => read_json(p)?,
        None => {
            let c = estimator::distillation_overhead(estimator::Scheme::ColorFastBlock);
            let s = estimator::distillation_overhead(estimator::Scheme::SurfaceFastBlock);
            DistillArtifact {
                kind: "distillation".into(),
                config: config_of("estimate distill", a)?,
                space_ratio: c.space_d2 / s.space_d2,
                time_speedup: s.time_units / c.time_units,
                spacetime_improvement: s.spacetime / c.spacetime,
                color: c,
                surface: s,
            }
        }
    };
    out.emit(a.out.as_ref(), &to_json(&art)?)
}
