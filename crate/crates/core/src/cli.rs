//! Command-line front end. The binary is a thin wrapper around [`run`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::format::{load_case, load_network, CaseFile, CaseOptions};
use crate::network::validate;
use crate::rank::{compare_matrix, rank_all};
use crate::report::{build_report, mpe_report, CompareReport, OutputFormat, Report};
use crate::scenario::{run_scenario, SCENARIOS};

#[derive(Debug, Parser)]
#[command(
    name = "causal-explain",
    version,
    about = "Rank explanations in causal Bayesian networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a network file.
    Check { network: PathBuf },
    /// Enumerate, score and rank candidate explanations for a case.
    Rank {
        case: PathBuf,
        #[command(flatten)]
        flags: CandidateFlags,
    },
    /// Most probable world given the case's observations.
    Mpe { case: PathBuf },
    /// Pairwise comparison matrix over the enumerated candidates.
    Compare {
        case: PathBuf,
        #[command(flatten)]
        flags: CandidateFlags,
    },
    /// Run a built-in scenario, or `all` of them.
    Scenario { name: String },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CandidateFlags {
    /// Maximum number of literals in a candidate [default: 2]
    #[arg(long)]
    pub max_conjuncts: Option<usize>,
    /// Allow literals of the form `V in {a,b}`.
    #[arg(long)]
    pub allow_value_sets: bool,
    /// Keep only candidates that raise the probability of the explanandum.
    #[arg(long)]
    pub require_raising: bool,
    /// Drop the mechanism conjunct from candidates.
    #[arg(long)]
    pub no_mechanism_conjunct: bool,
    /// Tolerance for comparisons [default: 1e-9]
    #[arg(long)]
    pub epsilon: Option<f64>,
}

impl CandidateFlags {
    /// Only flags actually given override the case file.
    pub fn as_options(&self) -> CaseOptions {
        CaseOptions {
            max_conjuncts: self.max_conjuncts,
            allow_value_sets: self.allow_value_sets.then_some(true),
            require_raising: self.require_raising.then_some(true),
            include_mechanism_conjunct: self.no_mechanism_conjunct.then_some(false),
            epsilon: self.epsilon,
        }
    }
}

pub fn run_rank(case: &CaseFile, flags: &CandidateFlags) -> Result<Report> {
    let spec = case.options.overridden_by(&flags.as_options()).spec()?;
    let (k, e) = case.resolve()?;
    let ranked = rank_all(&k, &e, &spec)?;
    build_report(&k, &e, &ranked)
}

pub fn run_compare(case: &CaseFile, flags: &CandidateFlags) -> Result<CompareReport> {
    let spec = case.options.overridden_by(&flags.as_options()).spec()?;
    let (k, e) = case.resolve()?;
    let ranked = rank_all(&k, &e, &spec)?;
    Ok(CompareReport {
        format: "causal-explain/compare/1",
        candidates: ranked
            .iter()
            .map(|s| s.explanation.describe(k.variables()))
            .collect(),
        matrix: compare_matrix(&ranked, spec.epsilon)?,
    })
}

/// Output text and exit status for one invocation.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32)> {
    let fmt = cli.format;
    match &cli.command {
        Command::Check { network } => {
            let net = load_network(network)?;
            debug_assert!(validate(&net).is_empty());
            let text = match fmt {
                OutputFormat::Table => {
                    format!("ok: {} variables, {} edges\n", net.len(), net.edges().len())
                }
                OutputFormat::Machine => serde_json::json!({
                    "format": "causal-explain/check/1",
                    "valid": true,
                    "variables": net.len(),
                    "edges": net.edges().len(),
                })
                .to_string(),
            };
            Ok((text, 0))
        }
        Command::Rank { case, flags } => Ok((run_rank(&load_case(case)?, flags)?.render(fmt), 0)),
        Command::Compare { case, flags } => {
            Ok((run_compare(&load_case(case)?, flags)?.render(fmt), 0))
        }
        Command::Mpe { case } => {
            let (k, _) = load_case(case)?.resolve()?;
            Ok((mpe_report(&k)?.render(fmt), 0))
        }
        Command::Scenario { name } => {
            let names: Vec<&str> = if name == "all" {
                SCENARIOS.to_vec()
            } else {
                vec![name.as_str()]
            };
            let mut outcomes = Vec::new();
            for n in names {
                outcomes.push(run_scenario(n)?);
            }
            let failed = outcomes.iter().any(|o| !o.passed());
            let text = match fmt {
                OutputFormat::Table => outcomes
                    .iter()
                    .map(|o| o.render(fmt))
                    .collect::<Vec<_>>()
                    .join("\n"),
                OutputFormat::Machine => {
                    serde_json::to_string_pretty(&outcomes).map_err(|e| Error::Io(e.to_string()))?
                }
            };
            Ok((text, if failed { 1 } else { 0 }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_only_when_given() {
        let none = CandidateFlags::default().as_options();
        assert_eq!(none, CaseOptions::default());
        let f = CandidateFlags {
            no_mechanism_conjunct: true,
            max_conjuncts: Some(1),
            ..Default::default()
        };
        let case = CaseOptions {
            max_conjuncts: Some(3),
            allow_value_sets: Some(true),
            ..Default::default()
        };
        let spec = case.overridden_by(&f.as_options()).spec().unwrap();
        assert_eq!(spec.max_conjuncts, 1);
        assert!(spec.allow_value_sets);
        assert!(!spec.include_mechanism_conjunct);
    }

    #[test]
    fn parses_command_lines() {
        let cli = Cli::try_parse_from([
            "causal-explain",
            "rank",
            "x.toml",
            "--max-conjuncts",
            "1",
            "--format",
            "machine",
        ])
        .unwrap();
        assert_eq!(cli.format, OutputFormat::Machine);
        assert!(
            matches!(cli.command, Command::Rank { ref flags, .. } if flags.max_conjuncts == Some(1))
        );
    }
}
