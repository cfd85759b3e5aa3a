//! `critlab`: classify, transform and survey product-set pairs.

mod commands;
mod literals;
mod report;
mod survey;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{CliError, ErrorKind, ReportDocument};

#[derive(Parser, Debug)]
#[command(name = "critlab", version, about = "Critical pairs of product sets in finite groups and on the circle")]
struct Cli {
    /// Machine-readable JSON output, errors included.
    #[arg(long, global = true)]
    json: bool,

    /// Largest group order accepted by the constructors.
    #[arg(long, global = true, env = "CRITLAB_CAP")]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a group from a spec and describe it.
    Group(GroupArgs),
    /// Classify a pair (A, B) by the measure of AB.
    Classify(PairArgs),
    /// Enumerate every pair in a family of groups.
    Survey(SurveyArgs),
    /// Run the Dyson transform until it stops.
    Dyson(DysonArgs),
    /// Kneser or Kemperman reduction certificate.
    Reduce(ReduceArgs),
    /// Progression structure of a critical pair in a group of prime order.
    Vosper(PairArgs),
    /// Build a sturmian pair on the circle, or detect one in a finite group.
    Sturmian(SturmianArgs),
    /// Stability of a pair of arc sets.
    Stability(StabilityArgs),
    /// Slices, relativization and local sub-criticality.
    Relative(RelativeArgs),
    /// Run acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// Zn, ZaxZb, Dn, Q8, A4 or sd:Zn,Zk,ACTION.
    spec: String,
    #[arg(long)]
    subgroups: bool,
    #[arg(long)]
    table: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    group: String,
    /// Element labels, indices or index ranges, comma separated.
    #[arg(long = "A", allow_hyphen_values = true)]
    a: String,
    #[arg(long = "B", allow_hyphen_values = true)]
    b: String,
}

#[derive(Args, Debug)]
pub struct DysonArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// least, greatest or seq:x;y;...
    #[arg(long, default_value = "least")]
    rule: String,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    unsafe_nonabelian: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReduceMethod {
    Kneser,
    Kemperman,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, value_enum, default_value = "kneser")]
    method: ReduceMethod,
}

#[derive(Args, Debug)]
pub struct SturmianArgs {
    /// plain or twisted.
    #[arg(long, default_value = "plain")]
    target: String,
    #[arg(long)]
    half_i: Option<String>,
    #[arg(long)]
    half_j: Option<String>,
    /// Shift of I: u or (u,+) / (u,-).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    t: String,
    /// Also round the spec down to the m-point model.
    #[arg(long)]
    discretize: Option<usize>,
    /// Detect a sturmian reduction of (A, B) in this group instead.
    #[arg(long)]
    group: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    /// Arcs lo..hi with optional +p / -p point corrections.
    #[arg(long = "I", allow_hyphen_values = true)]
    i: String,
    #[arg(long = "J", allow_hyphen_values = true)]
    j: String,
    /// Use I ⋊ {±1} and J ⋊ {±1} in the twisted torus.
    #[arg(long)]
    twisted: bool,
}

#[derive(Args, Debug)]
pub struct RelativeArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Normal subgroup to relativize to.
    #[arg(long = "U")]
    u: Option<String>,
    /// Decreasing chain of normal subgroups separated by `;`.
    #[arg(long, conflicts_with = "u")]
    chain: Option<String>,
    /// Search all subgroups, not only normal ones.
    #[arg(long)]
    widen: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Args, Debug)]
pub struct SurveyArgs {
    /// cyclic, dihedral, product or all.
    #[arg(long)]
    family: String,
    /// Family parameter: Z1..Zmax, D1..Dmax, Z2xZ1..Z2xZmax, or the largest order for `all`.
    #[arg(long)]
    max: usize,
    /// all, critical, full, subcritical or supercritical.
    #[arg(long, default_value = "all")]
    filter: String,
    /// none, kneser, kemperman or vosper.
    #[arg(long, default_value = "none")]
    check: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Progress file; an existing one resumes after its last completed group.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Add a count row after each group.
    #[arg(long)]
    counts: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// all, or criteria numbers like 1,2,5.
    #[arg(long, default_value = "all")]
    suite: String,
}

fn emit_error(e: &CliError, json: bool) -> ExitCode {
    if json {
        println!("{}", e.to_json());
    } else {
        eprintln!("error [{}]: {}", e.code(), e.message);
    }
    ExitCode::from(e.exit_code())
}

fn emit_doc(doc: &ReportDocument, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string(doc).expect("report serializes"));
    } else {
        print!("{}", doc.render_text());
    }
    if doc.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let json = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if json => return emit_error(&CliError::new(ErrorKind::Usage, e.kind()), true),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    if let Some(cap) = cli.cap {
        critlab_core::group::set_order_cap(cap);
    }
    let doc = match &cli.command {
        Command::Group(a) => commands::group(a),
        Command::Classify(a) => commands::classify(a),
        Command::Dyson(a) => commands::dyson(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Vosper(a) => commands::vosper(a),
        Command::Sturmian(a) => commands::sturmian(a),
        Command::Stability(a) => commands::stability(a),
        Command::Relative(a) => commands::relative(a),
        Command::Verify(a) => commands::verify(a),
        Command::Survey(a) => {
            let mut out = std::io::stdout().lock();
            return match survey::run(a, &mut out) {
                Ok(0) => ExitCode::SUCCESS,
                Ok(n) => {
                    let _ = out.flush();
                    emit_error(&CliError::new(ErrorKind::Validation, format!("{n} rows failed their check")), json)
                }
                Err(e) => emit_error(&e, json),
            };
        }
    };
    match doc {
        Ok(doc) => emit_doc(&doc, json),
        Err(e) => emit_error(&e, json),
    }
}
