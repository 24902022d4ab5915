use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};
use gdelta::io::{parse_problem, render_clauses, render_formula};
use gdelta::oracle::OracleConfig;
use gdelta::prover::{check_sat, herbrand_mode, oracle_mode, prove_valid, Question, Verdict};
use gdelta::{Answer, Limits};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Valid,
    Sat,
    Herbrand,
    Oracle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Ask {
    Valid,
    Sat,
}

/// Decide validity or 1-satisfiability of prenex formulas of Gödel logic with Δ.
#[derive(Debug, Parser)]
#[command(name = "prove", version)]
struct Args {
    #[arg(long, value_enum, default_value = "valid")]
    mode: Mode,
    /// Generated-clause limit per saturation.
    #[arg(long, default_value_t = 100_000)]
    max_clauses: usize,
    /// Time limit per saturation.
    #[arg(long, default_value_t = 10_000)]
    timeout_ms: u64,
    /// Herbrand term depth.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Herbrand disjunction width.
    #[arg(long, default_value_t = 2)]
    width: usize,
    /// Write refutation traces here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the translated clause sets here, before saturation.
    #[arg(long)]
    clauses: Option<PathBuf>,
    /// Question for the oracle mode.
    #[arg(long, value_enum, default_value = "valid")]
    question: Ask,
    file: PathBuf,
}

fn report(v: &Verdict) -> String {
    let mut out = format!("{}\n", v.answer);
    let _ = writeln!(out, "time: {} ms", v.elapsed.as_millis());
    if !v.stats.is_empty() {
        let _ = writeln!(out, "generated: {}", v.generated());
        let kept: usize = v.stats.iter().map(|s| s.kept).sum();
        let _ = writeln!(out, "kept: {kept}");
    }
    if let Some(sat) = &v.saturated {
        let _ = writeln!(out, "saturated: {} clauses", sat.len());
    }
    if let Some(w) = &v.witness {
        let rows: Vec<String> = w
            .iter()
            .map(|inst| {
                format!(
                    "[{}]",
                    inst.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
                )
            })
            .collect();
        let _ = writeln!(out, "witness: {}", rows.join(" "));
    }
    if let Some(r) = &v.reconstruction {
        let _ = writeln!(out, "reconstruction: {}", render_formula(r));
    }
    out
}

fn dump_clauses(v: &Verdict) -> String {
    let mut out = String::new();
    for (i, set) in v.clause_sets.iter().enumerate() {
        if v.clause_sets.len() > 1 {
            let _ = writeln!(out, "# conjunct {}", i + 1);
        }
        out.push_str(&render_clauses(&set.clauses));
        out.push_str("# theory\n");
        out.push_str(&render_clauses(&set.theory));
    }
    out
}

fn dump_traces(v: &Verdict) -> String {
    v.traces.iter().map(|t| t.to_string()).collect()
}

fn run(args: &Args) -> Result<Answer, String> {
    let text = fs::read_to_string(&args.file).map_err(|e| format!("{}: {e}", args.file.display()))?;
    let problem = parse_problem(&text).map_err(|e| format!("{}: {e}", args.file.display()))?;
    let limits = Limits {
        max_clauses: args.max_clauses,
        timeout: Duration::from_millis(args.timeout_ms),
    };
    let cfg = OracleConfig::default();
    let verdict = match args.mode {
        Mode::Valid => prove_valid(&problem, limits),
        Mode::Sat => check_sat(&problem, limits),
        Mode::Herbrand => herbrand_mode(&problem, args.depth, args.width, &cfg),
        Mode::Oracle => {
            let q = match args.question {
                Ask::Valid => Question::Valid,
                Ask::Sat => Question::Sat,
            };
            oracle_mode(&problem, q, &cfg)
        }
    }
    .map_err(|e| e.to_string())?;
    if let Some(path) = &args.clauses {
        fs::write(path, dump_clauses(&verdict)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(path) = &args.trace {
        fs::write(path, dump_traces(&verdict)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    print!("{}", report(&verdict));
    Ok(verdict.answer)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(Answer::Unknown) => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
