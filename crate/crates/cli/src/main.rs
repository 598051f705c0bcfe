use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ccalg::algebra::TruncatedAlgebra;
use ccalg::cc::{bq_conditions, cc_function};
use ccalg::error::Error;
use ccalg::graph::{build_graph, sign_coherent, ComponentGraph, Representative};
use ccalg::grassmannian::{chi_table, euler_char, Method};
use ccalg::hereditary::Hereditary;
use ccalg::io::{from_json, read_algebra, read_quiver, AlgebraSpec, LabeledRepDoc, RepDoc};
use ccalg::rep::{e_invariant, ext1, g_vector, hom_space, is_e_rigid, tau_minus, DecoratedRepresentation};
use ccalg::verify::{run_suite, Goldens, Options, DEFAULT_SEED};

const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "ccalg", version, about = "Exact g-vectors, E-invariants and Caldero-Chapoton functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect an algebra.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Invariants of representations.
    Rep {
        #[command(subcommand)]
        command: RepCommand,
    },
    /// Caldero-Chapoton function of a decorated representation.
    Cc(RepArgs),
    /// Euler characteristics of quiver Grassmannians.
    Chi {
        #[command(flatten)]
        rep: RepArgs,
        /// Subrepresentation dimension vector; all of them when omitted.
        #[arg(long, value_delimiter = ',')]
        e: Option<Vec<usize>>,
    },
    /// Component graph of a list of representatives.
    Graph {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        reps: PathBuf,
        #[command(flatten)]
        chi: ChiArgs,
        /// DOT output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report with vertices and clusters.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Canonical decomposition of a dimension vector over an acyclic quiver.
    Canon {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        dim: Vec<usize>,
    },
    /// Component graph of a hereditary path algebra.
    HereditaryGraph {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Conditions on the skew-symmetric matrix of the quiver.
    Bq {
        #[arg(long, required_unless_present = "quiver", conflicts_with = "quiver")]
        algebra: Option<PathBuf>,
        #[arg(long)]
        quiver: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Paper)]
        suite: Suite,
        /// Read golden files from this directory instead of the bundled copies.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Dimension, basis and indecomposable projectives and injectives.
    Info {
        #[arg(long)]
        algebra: PathBuf,
    },
}

#[derive(Subcommand)]
enum RepCommand {
    /// g-vector, E-invariants, Hom, Ext and the inverse translate.
    Compute {
        #[command(flatten)]
        rep: RepArgs,
        /// Comma-separated subset of g,E,hom,ext,tau,cc.
        #[arg(long, value_delimiter = ',', default_value = "g,E,hom,ext,tau,cc")]
        what: Vec<String>,
    },
}

#[derive(Args)]
struct RepArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    rep: PathBuf,
    #[command(flatten)]
    chi: ChiArgs,
}

#[derive(Args, Clone, Copy)]
struct ChiArgs {
    #[arg(long, default_value = "auto", value_parser = parse_method)]
    method: Method,
    /// Maximum number of subspace tuples enumerated per prime.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Input(String),
    Compute(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn load_algebra(path: &Path) -> Result<AlgebraSpec, Failure> {
    let text = read(path)?;
    read_algebra(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_rep(spec: &AlgebraSpec, path: &Path) -> Result<(TruncatedAlgebra, DecoratedRepresentation), Failure> {
    let doc: RepDoc = from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let dim = doc.total_dim(spec.quiver())?;
    let a = spec.level_for(&[dim, dim])?;
    let x = doc.build(&a)?;
    Ok((a, x))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli)).unwrap_or_else(|_| Err(Failure::Compute("internal error".into())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Algebra { command: AlgebraCommand::Info { algebra } } => algebra_info(&algebra),
        Command::Rep { command: RepCommand::Compute { rep, what } } => rep_compute(&rep, &what),
        Command::Cc(args) => {
            let spec = load_algebra(&args.algebra)?;
            let (a, x) = load_rep(&spec, &args.rep)?;
            println!("{}", cc_function(&a, &x, args.chi.method, args.chi.budget)?);
            Ok(())
        }
        Command::Chi { rep, e } => chi(&rep, e),
        Command::Graph { algebra, reps, chi, out, report } => {
            graph(&algebra, &reps, chi, out.as_deref(), report.as_deref())
        }
        Command::Canon { quiver, dim } => {
            let h = Hereditary::new(read_quiver(&read(&quiver)?)?)?;
            check_len(&dim, h.quiver().n())?;
            let parts = h.canonical_decomposition(&dim);
            print_json(&json!({ "dim": dim, "decomposition": parts, "schur_root": parts.len() == 1 }));
            Ok(())
        }
        Command::HereditaryGraph { quiver, bound, out, report } => {
            let h = Hereditary::new(read_quiver(&read(&quiver)?)?)?;
            emit_graph(&h.component_graph(bound), out.as_deref(), report.as_deref())
        }
        Command::Bq { algebra, quiver } => {
            let q = match (algebra, quiver) {
                (Some(a), _) => load_algebra(&a)?.quiver().clone(),
                (None, Some(q)) => read_quiver(&read(&q)?)?,
                (None, None) => return Err(Failure::Input("either --algebra or --quiver is required".into())),
            };
            print_json(&bq_conditions(&q.b_matrix())?.to_json());
            Ok(())
        }
        Command::Verify { suite: Suite::Paper, golden_dir, criteria, seed } => verify(golden_dir.as_deref(), criteria, seed),
    }
}

fn check_len(v: &[usize], n: usize) -> Outcome {
    if v.len() == n {
        Ok(())
    } else {
        Err(Failure::Input(format!("expected {n} entries, got {}", v.len())))
    }
}

fn algebra_info(path: &Path) -> Outcome {
    let spec = load_algebra(path)?;
    let a = spec.level_for(&[])?;
    let n = a.n();
    let projectives: Vec<Vec<usize>> = (0..n).map(|i| a.projective(i).dims().to_vec()).collect();
    let injectives: Vec<Vec<usize>> = (0..n).map(|i| a.injective(i).dims().to_vec()).collect();
    print_json(&json!({
        "vertices": n,
        "level": a.level(),
        "finite": a.is_finite(),
        "saturated": a.is_saturated(),
        "dimension": a.dim(),
        "basis": a.basis_names(),
        "projectives": projectives,
        "injectives": injectives,
        "b_matrix": a.quiver().b_matrix(),
    }));
    Ok(())
}

fn rep_compute(args: &RepArgs, what: &[String]) -> Outcome {
    const KNOWN: [&str; 6] = ["g", "E", "hom", "ext", "tau", "cc"];
    if let Some(bad) = what.iter().find(|w| !KNOWN.contains(&w.as_str())) {
        return Err(Failure::Input(format!("unknown quantity `{bad}` (expected one of {})", KNOWN.join(","))));
    }
    let wants = |k: &str| what.iter().any(|w| w == k);
    let spec = load_algebra(&args.algebra)?;
    let (a, x) = load_rep(&spec, &args.rep)?;
    let q = a.quiver();
    let mut out = serde_json::Map::new();
    out.insert("dims".into(), json!(x.module.dims()));
    out.insert("decoration".into(), json!(x.decoration));
    out.insert("level".into(), json!(a.level()));
    if wants("g") {
        out.insert("g".into(), json!(g_vector(&a, &x)?.0));
    }
    if wants("E") {
        let e = e_invariant(&a, &x, &x)?;
        out.insert("E".into(), json!(e));
        out.insert("e_rigid".into(), json!(is_e_rigid(&a, &x)?));
    }
    if wants("hom") {
        out.insert("hom".into(), json!(hom_space(q, &x.module, &x.module).dim));
    }
    if wants("ext") {
        out.insert("ext".into(), json!(ext1(&a, &x.module, &x.module)?));
    }
    if wants("tau") {
        out.insert("tau_minus".into(), json!(tau_minus(&a, &x.module)?.dims()));
    }
    if wants("cc") {
        out.insert("cc".into(), json!(cc_function(&a, &x, args.chi.method, args.chi.budget)?.to_string()));
    }
    print_json(&Value::Object(out));
    Ok(())
}

fn chi(args: &RepArgs, e: Option<Vec<usize>>) -> Outcome {
    let spec = load_algebra(&args.algebra)?;
    let (a, x) = load_rep(&spec, &args.rep)?;
    let (method, budget) = (args.chi.method, args.chi.budget);
    match e {
        Some(e) => {
            check_len(&e, a.n())?;
            let chi = euler_char(&a, &x.module, &e, method, budget)?;
            print_json(&json!({ "e": e, "chi": chi.to_string() }));
        }
        None => {
            let table = chi_table(a.quiver(), &x.module, method, budget)?;
            let rows: Vec<Value> =
                table.iter().map(|(e, chi)| json!({ "e": e, "chi": chi.to_string() })).collect();
            print_json(&Value::Array(rows));
        }
    }
    Ok(())
}

fn graph(algebra: &Path, reps: &Path, chi: ChiArgs, out: Option<&Path>, report: Option<&Path>) -> Outcome {
    let spec = load_algebra(algebra)?;
    let docs: Vec<LabeledRepDoc> = from_json(&read(reps)?).map_err(|e| Failure::Input(format!("{}: {e}", reps.display())))?;
    let q = spec.quiver();
    let mut dims = Vec::with_capacity(docs.len());
    for d in &docs {
        dims.push(d.rep.total_dim(q)?);
        if let Some(t) = &d.twin {
            dims.push(t.total_dim(q)?);
        }
    }
    let largest = dims.iter().copied().max().unwrap_or(0);
    let a = spec.level_for(&[largest, largest])?;
    let reps = docs
        .iter()
        .map(|d| {
            let mut r = Representative::new(d.label.clone(), d.rep.build(&a)?);
            r.twin = d.twin.as_ref().map(|t| t.build(&a)).transpose()?;
            Ok(r)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let g = build_graph(&a, &reps, chi.method, chi.budget)?;
    emit_graph(&g, out, report)
}

fn emit_graph(g: &ComponentGraph, out: Option<&Path>, report: Option<&Path>) -> Outcome {
    let dot = g.to_dot();
    match out {
        Some(p) => write(p, &dot)?,
        None => print!("{dot}"),
    }
    if let Some(p) = report {
        let text = serde_json::to_string_pretty(&graph_report(g)).expect("JSON values serialize");
        write(p, &(text + "\n"))?;
    }
    Ok(())
}

fn graph_report(g: &ComponentGraph) -> Value {
    let label = |i: &usize| g.vertices[*i].label.clone();
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            json!({
                "label": v.label,
                "g": v.g.0,
                "dims": v.dims,
                "decoration": v.decoration,
                "cc": v.cc.as_ref().map(ToString::to_string),
                "loop": g.has_loop(i),
                "self_E": v.self_e,
                "E": v.full_e,
                "e_rigid": v.is_e_rigid(),
            })
        })
        .collect();
    let clusters: Vec<Value> = g
        .component_clusters()
        .iter()
        .map(|c| {
            json!({
                "members": c.members.iter().map(label).collect::<Vec<_>>(),
                "e_rigid": c.e_rigid,
                "sign_coherent": sign_coherent(c.members.iter().map(|&i| &g.vertices[i].g)),
            })
        })
        .collect();
    let bound = g.loop_complete_bound();
    let two = g.two_completion_check();
    json!({
        "n": g.n,
        "vertices": vertices,
        "edges": g.edges().iter().map(|(i, j)| [label(i), label(j)]).collect::<Vec<_>>(),
        "e_matrix": g.e_matrix,
        "clusters": clusters,
        "loop_complete_bound": { "max_size": bound.max_size, "violated": bound.violated },
        "two_completion": {
            "holds": two.holds,
            "counts": two.counts.iter().map(|(c, k)| json!({
                "clique": c.iter().map(label).collect::<Vec<_>>(),
                "completions": k,
            })).collect::<Vec<_>>(),
        },
    })
}

fn verify(golden_dir: Option<&Path>, criteria: Option<Vec<u8>>, seed: u64) -> Outcome {
    let goldens = match golden_dir {
        Some(d) => Goldens::from_dir(d)?,
        None => Goldens::bundled(),
    };
    if let Some(bad) = criteria.iter().flatten().find(|c| !(1..=15).contains(*c)) {
        return Err(Failure::Input(format!("no criterion {bad}")));
    }
    let only = criteria.map(|c| c.into_iter().collect::<BTreeSet<u8>>());
    let reports = run_suite(&goldens, &Options { only, seed })?;
    for r in &reports {
        println!("{}", r.render());
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
