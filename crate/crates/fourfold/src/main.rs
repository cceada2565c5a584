use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fourfold::config::{AnalysisRequest, ConfigError};
use fourfold::cover::CoverGroup;
use fourfold::genus::lattice;
use fourfold::monodromy::{search, SearchMode, SearchStatus, WitnessFile, DEFAULT_BUDGET};
use fourfold::report::{self, analyze, reproduce_table, ReportError, TABLE_IDS};
use fourfold::suite::{verify_suite, Scope};

const EXIT_VALIDATION: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "fourfold", version, about = "Genus, isogeny and monodromy bookkeeping for covers with group inside S4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for the branch data in a TOML config.
    Analyze {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a human-readable rendering instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Recompute a reference table and diff it against the shipped values.
    ReproduceTable {
        /// Table id, or `all`.
        id: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        text: bool,
    },
    /// Search for a monodromy tuple realizing the config's branch data.
    Search {
        config: PathBuf,
        /// Where to write the witness, if one is found.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a witness file produced by `search`.
    VerifyWitness {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant checks and oracles.
    VerifySuite {
        #[arg(long, value_enum, default_value_t = ScopeArg::Fast)]
        scope: ScopeArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        text: bool,
    },
    /// Describe the supported groups, their branch symbols and quotient curves.
    ListGroups {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Fast,
    Exhaustive,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("cannot write to stdout: {e}")),
                _ => Ok(()),
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    messages: Vec<String>,
}

fn fail(kind: &str, messages: Vec<String>, code: u8) -> ExitCode {
    eprintln!("{}", json(&ErrorReport { error: kind, messages }));
    ExitCode::from(code)
}

fn load(config: &Path) -> Result<AnalysisRequest, ExitCode> {
    AnalysisRequest::from_path(config).map_err(|e| match e {
        ConfigError::Io { .. } => fail("io", vec![e.to_string()], 1),
        _ => fail("validation", vec![e.to_string()], EXIT_VALIDATION),
    })
}

#[derive(Serialize)]
struct GroupInfo {
    name: CoverGroup,
    order: u32,
    symbols: Vec<SymbolInfo>,
    curves: Vec<CurveInfo>,
}

#[derive(Serialize)]
struct SymbolInfo {
    key: &'static str,
    representative: String,
    order: u32,
}

#[derive(Serialize)]
struct CurveInfo {
    name: &'static str,
    subgroup: String,
}

#[derive(Serialize)]
struct SearchReport {
    status: SearchStatus,
    mode: SearchMode,
    nodes_explored: u64,
    max_depth: usize,
    witness: Option<WitnessFile>,
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let io = |e: String| fail("io", vec![e], 1);
    match cli.command {
        Command::Analyze { config, out, text } => {
            let req = load(&config)?;
            let r = analyze(&req).map_err(|e| match e {
                ReportError::Validation(v) => fail("validation", v, EXIT_VALIDATION),
                other => fail("validation", vec![other.to_string()], EXIT_VALIDATION),
            })?;
            let body = if text { r.render_text() } else { json(&r) };
            emit(&body, out.as_deref()).map_err(io)?;
            if r.realizability.status == SearchStatus::BudgetExceeded {
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ReproduceTable { id, budget, out, text } => {
            let ids: Vec<&str> = if id == "all" { TABLE_IDS.to_vec() } else { vec![id.as_str()] };
            let mut tables = Vec::new();
            for id in ids {
                tables.push(reproduce_table(id, budget).map_err(|e| {
                    fail("validation", vec![e.to_string(), format!("known tables: {}", TABLE_IDS.join(", "))], EXIT_VALIDATION)
                })?);
            }
            let body = if text {
                tables.iter().map(report::TableReport::render_text).collect::<Vec<_>>().join("\n")
            } else if tables.len() == 1 {
                json(&tables[0])
            } else {
                json(&tables)
            };
            emit(&body, out.as_deref()).map_err(io)?;
            if tables.iter().all(report::TableReport::matches) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_MISMATCH))
            }
        }
        Command::Search { config, witness, out } => {
            let req = load(&config)?;
            let violations = req.profile.parity_violations();
            if !violations.is_empty() {
                return Err(fail("validation", violations.iter().map(|v| v.to_string()).collect(), EXIT_VALIDATION));
            }
            let outcome = search(&req.profile, &req.search_options());
            let file = outcome.witness.as_ref().map(|t| WitnessFile::new(&req.profile, req.mode, t));
            if let (Some(path), Some(f)) = (&witness, &file) {
                std::fs::write(path, json(f)).map_err(|e| io(format!("cannot write {}: {e}", path.display())))?;
            }
            let r = SearchReport {
                status: outcome.status,
                mode: req.mode,
                nodes_explored: outcome.nodes_explored,
                max_depth: outcome.max_depth,
                witness: file,
            };
            emit(&json(&r), out.as_deref()).map_err(io)?;
            if outcome.status == SearchStatus::BudgetExceeded {
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyWitness { file, out } => {
            let src = std::fs::read_to_string(&file)
                .map_err(|e| fail("validation", vec![format!("cannot read {}: {e}", file.display())], EXIT_VALIDATION))?;
            let w: WitnessFile = serde_json::from_str(&src)
                .map_err(|e| fail("validation", vec![format!("malformed witness: {e}")], EXIT_VALIDATION))?;
            let check = w.verify().map_err(|e| fail("validation", vec![e.to_string()], EXIT_VALIDATION))?;
            emit(&json(&check), out.as_deref()).map_err(io)?;
            if check.ok() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_VALIDATION))
            }
        }
        Command::VerifySuite { scope, out, text } => {
            let scope = match scope {
                ScopeArg::Fast => Scope::Fast,
                ScopeArg::Exhaustive => Scope::Exhaustive,
            };
            let summary = verify_suite(scope);
            let body = if text { summary.render_text() } else { json(&summary) };
            emit(&body, out.as_deref()).map_err(io)?;
            if summary.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_MISMATCH))
            }
        }
        Command::ListGroups { out } => {
            let groups: Vec<GroupInfo> = CoverGroup::ALL
                .iter()
                .map(|&g| GroupInfo {
                    name: g,
                    order: g.order(),
                    symbols: g
                        .branch_classes()
                        .iter()
                        .map(|c| SymbolInfo { key: c.symbol.key(), representative: c.representative.to_string(), order: c.order() })
                        .collect(),
                    curves: lattice(g).iter().map(|c| CurveInfo { name: c.name, subgroup: c.subgroup.to_string() }).collect(),
                })
                .collect();
            emit(&json(&groups), out.as_deref()).map_err(io)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) | Err(c) => c,
    }
}
