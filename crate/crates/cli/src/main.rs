use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fqdyn_core::geometry::{Limits, DEFAULT_POINT_CAP};
use fqdyn_core::pipeline::{
    self, parse_relation, Check, CheckRecord, JobSpec, PipelineError, RelationsReport, Report,
};
use fqdyn_core::relations::IdempotentRelation;

#[derive(Parser)]
#[command(name = "fqdyn", version, about = "Finite-field dynamics with group actions: relations and point-count identities")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input document (variety spec, abstract model, model file or group table).
    input: PathBuf,
    /// Write JSON here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Cap on enumerated coordinate tuples.
    #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
    cap_points: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a variety spec into a model file.
    Build(Common),
    /// List subgroups and a basis of idempotent relations.
    Relations(Common),
    /// Run the checks and write a report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of A,B,C,D,bounds,iH,lemma.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<Check>>,
        /// Extension degrees for checks A and B.
        #[arg(long = "n", value_delimiter = ',')]
        n: Option<Vec<u64>>,
        /// Truncation degree for checks C and D.
        #[arg(long)]
        nmax: Option<usize>,
        /// Coefficients in subgroup order; repeat for several. Replaces the basis.
        #[arg(long, allow_hyphen_values = true)]
        relation: Vec<String>,
        /// Evaluate relations that fail the character test.
        #[arg(long)]
        force: bool,
    },
    /// Re-derive the verdicts of a stored report and summarize it.
    Report {
        report: PathBuf,
    },
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), PipelineError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| PipelineError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn limits(cap: u64) -> Limits {
    Limits {
        points: cap,
        ..Limits::default()
    }
}

fn fmt_rel(r: &[i64]) -> String {
    let parts: Vec<String> = r.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn print_relations(r: &RelationsReport) {
    eprintln!("group of order {} with {} subgroups", r.group.order, r.subgroups.len());
    for (i, h) in r.subgroups.iter().enumerate() {
        eprintln!("  H{i}: {} (order {})", h.name, h.order);
    }
    if r.relations.is_empty() {
        eprintln!("no nontrivial relations");
    }
    for rel in &r.relations {
        eprintln!("relation {}", fmt_rel(&rel.coefficients));
    }
}

fn describe(c: &CheckRecord) -> String {
    match c {
        CheckRecord::A(r) | CheckRecord::B(r) => {
            format!("{} {} n={} residual {}", c.kind(), fmt_rel(&r.relation), r.n, r.residual)
        }
        CheckRecord::C(r) | CheckRecord::D(r) => match r.result.first_bad {
            None => format!("{} {} product is 1 through t^{}", c.kind(), fmt_rel(&r.relation), r.result.n_max),
            Some(i) => format!("{} {} first bad coefficient t^{i}", c.kind(), fmt_rel(&r.relation)),
        },
        CheckRecord::Bounds(r) => format!("bounds M={} N={} |Per_N|={}", r.m, r.n, r.per_n_points),
        CheckRecord::IH(r) => format!(
            "iH {} counts {}/{}/{}",
            r.subgroup, r.result.per_n_orbits, r.result.per_n_quotient, r.result.periodic_quotient
        ),
        CheckRecord::Lemma(r) => format!("lemma {} periods divide M", r.subgroup),
    }
}

fn print_report(r: &Report) {
    eprintln!(
        "model: {} points, W = {}, {:?}; group of order {}",
        r.model.points, r.model.working_degree, r.model.completeness, r.group.order
    );
    for c in &r.checks {
        eprintln!("[{}] {}", if c.pass() { "PASS" } else { "FAIL" }, describe(c));
    }
    eprintln!("{}", if r.pass() { "all checks passed" } else { "some checks FAILED" });
}

fn run(cli: Cli) -> Result<i32, PipelineError> {
    match cli.command {
        Command::Build(c) => {
            let input = pipeline::read_input(&c.input)?;
            let model = pipeline::load_model(&input, &limits(c.cap_points))?;
            eprintln!(
                "{} points, W = {}, {:?}",
                model.len(),
                model.working_degree(),
                model.meta().completeness
            );
            write_out(c.output.as_deref(), &pipeline::model_json(&model))?;
            Ok(0)
        }
        Command::Relations(c) => {
            let input = pipeline::read_input(&c.input)?;
            let r = pipeline::relations_for_input(&input, &limits(c.cap_points), JobSpec::default().closure_bound)?;
            print_relations(&r);
            write_out(c.output.as_deref(), &(serde_json::to_string_pretty(&r).expect("serializes") + "\n"))?;
            Ok(0)
        }
        Command::Verify {
            common,
            checks,
            n,
            nmax,
            relation,
            force,
        } => {
            let input = pipeline::read_input(&common.input)?;
            let relations = if relation.is_empty() {
                None
            } else {
                Some(
                    relation
                        .iter()
                        .map(|s| parse_relation(s))
                        .collect::<Result<Vec<IdempotentRelation>, _>>()?,
                )
            };
            let job = JobSpec {
                checks,
                n_values: n,
                n_max: nmax,
                force,
                relations,
                ..JobSpec::default()
            };
            let report = pipeline::verify_input(&input, &job, &limits(common.cap_points))?;
            print_report(&report);
            write_out(
                common.output.as_deref(),
                &(serde_json::to_string_pretty(&report).expect("serializes") + "\n"),
            )?;
            Ok(report.exit_code())
        }
        Command::Report { report } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| PipelineError::Io(format!("{}: {e}", report.display())))?;
            let r: Report = serde_json::from_str(&text).map_err(|e| PipelineError::Parse(e.to_string()))?;
            print_report(&r);
            for (i, kind, ok) in pipeline::replay_report(&r) {
                if ok == Some(false) {
                    return Err(PipelineError::Validation(format!(
                        "record {i} ({kind}) does not follow from its recorded counts"
                    )));
                }
            }
            Ok(r.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
