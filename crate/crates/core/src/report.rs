//! Report documents and their table / machine (JSON) renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::epistemic::EpistemicState;
use crate::error::Result;
use crate::inference::{mpe, Event};
use crate::rank::{Comparison, ScoredExplanation};

pub const REPORT_FORMAT: &str = "causal-explain/report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureSummary {
    pub index: usize,
    pub weight: f64,
    /// `Pr_C(O)` over the full observation set.
    pub likelihood: f64,
    /// Weight re-normalized by `likelihood`; shown for comparison, never used in scoring.
    pub evidence_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSummary {
    pub observations: Vec<String>,
    pub explanandum: Vec<String>,
    /// `Pr⁻(E)` in the contracted state.
    pub explanandum_prob: f64,
    pub structures: Vec<StructureSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub rank: usize,
    pub mechanism: Option<Vec<String>>,
    pub conjuncts: Vec<String>,
    pub prior: f64,
    pub ep_ratio: f64,
    pub ep_diff: f64,
    pub posterior: f64,
    pub gardenfors_flag: bool,
    pub frontier_flag: bool,
    pub dominated_by: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub state: StateSummary,
    pub candidates: Vec<ReportRow>,
}

pub fn summarize_state(k: &EpistemicState, e: &Event) -> Result<StateSummary> {
    let vars = k.variables();
    let explanandum_prob = k.contract(e)?.prob_of(e, None)?;
    let structures = k
        .structures()
        .iter()
        .zip(k.likelihoods())
        .zip(k.evidence_weights())
        .enumerate()
        .map(
            |(index, ((s, likelihood), evidence_weight))| StructureSummary {
                index,
                weight: s.weight,
                likelihood,
                evidence_weight,
            },
        )
        .collect();
    Ok(StateSummary {
        observations: k.observations().describe(vars),
        explanandum: e.describe(vars),
        explanandum_prob,
        structures,
    })
}

pub fn build_report(k: &EpistemicState, e: &Event, scored: &[ScoredExplanation]) -> Result<Report> {
    let vars = k.variables();
    let candidates = scored
        .iter()
        .enumerate()
        .map(|(rank, s)| ReportRow {
            rank,
            mechanism: s.explanation.mechanism().map(|m| m.describe(vars)),
            conjuncts: s.explanation.conjuncts.describe(vars),
            prior: s.prior,
            ep_ratio: s.ep_ratio,
            ep_diff: s.ep_diff,
            posterior: s.posterior,
            gardenfors_flag: s.gardenfors_flag,
            frontier_flag: s.frontier_flag,
            dominated_by: s.dominated_by.clone(),
        })
        .collect();
    Ok(Report {
        format: REPORT_FORMAT,
        state: summarize_state(k, e)?,
        candidates,
    })
}

/// Numbers in tables: fixed point when readable, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.6e}")
    }
}

impl Report {
    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let s = &self.state;
        let _ = writeln!(out, "explanandum: {}", s.explanandum.join(" & "));
        let _ = writeln!(out, "observations: {}", s.observations.join(", "));
        let _ = writeln!(out, "Pr-(E) = {}", fmt_num(s.explanandum_prob));
        for st in &s.structures {
            let _ = writeln!(
                out,
                "structure #{}: weight = {}  Pr(O) = {}  evidence-weight = {}",
                st.index,
                fmt_num(st.weight),
                fmt_num(st.likelihood),
                fmt_num(st.evidence_weight)
            );
        }
        let _ = writeln!(
            out,
            "{:>4} {:>5} {:>3} {:>14} {:>14} {:>14} {:>14}  {:<12} explanation",
            "#", "front", "G", "ep_ratio", "ep_diff", "prior", "posterior", "dominated_by"
        );
        for r in &self.candidates {
            let dom = if r.dominated_by.is_empty() {
                "-".to_string()
            } else {
                r.dominated_by
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let mut expl = String::new();
            if let Some(m) = &r.mechanism {
                let _ = write!(expl, "[{}] ", m.join(", "));
            }
            expl.push_str(&r.conjuncts.join(" & "));
            let _ = writeln!(
                out,
                "{:>4} {:>5} {:>3} {:>14} {:>14} {:>14} {:>14}  {:<12} {}",
                r.rank,
                if r.frontier_flag { "*" } else { "" },
                if r.gardenfors_flag { "y" } else { "n" },
                fmt_num(r.ep_ratio),
                fmt_num(r.ep_diff),
                fmt_num(r.prior),
                fmt_num(r.posterior),
                dom,
                expl
            );
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.to_table(),
            OutputFormat::Machine => self.to_machine(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpeRow {
    pub structure: usize,
    pub world: Vec<String>,
    /// `Pr_C(w | O)`.
    pub posterior: f64,
    /// `weight(C) * Pr_C(w | O)`: probability of the world/structure pair.
    pub joint: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpeReport {
    pub format: &'static str,
    pub evidence: Vec<String>,
    pub per_structure: Vec<MpeRow>,
    /// Index into `per_structure` of the most probable (world, structure) pair.
    pub best: usize,
}

/// Most probable world given all observations, per positive-weight structure.
pub fn mpe_report(k: &EpistemicState) -> Result<MpeReport> {
    let vars = k.variables();
    let mut rows = Vec::new();
    for (i, s) in k.structures().iter().enumerate() {
        if s.weight <= 0.0 {
            continue;
        }
        let (w, p) = mpe(&s.network, k.observations())?;
        rows.push(MpeRow {
            structure: i,
            world: w.describe(vars),
            posterior: p,
            joint: s.weight * p,
        });
    }
    let best = rows
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.joint > rows[b].joint { i } else { b });
    Ok(MpeReport {
        format: "causal-explain/mpe/1",
        evidence: k.observations().describe(vars),
        per_structure: rows,
        best,
    })
}

impl MpeReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => serde_json::to_string_pretty(self).expect("reports serialize"),
            OutputFormat::Table => {
                let mut out = format!("evidence: {}\n", self.evidence.join(", "));
                for (i, r) in self.per_structure.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{} structure #{}: posterior = {}  joint = {}  world: {}",
                        if i == self.best { "*" } else { " " },
                        r.structure,
                        fmt_num(r.posterior),
                        fmt_num(r.joint),
                        r.world.join(", ")
                    );
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub format: &'static str,
    pub candidates: Vec<String>,
    /// `matrix[i][j]` compares candidate `i` against candidate `j`.
    pub matrix: Vec<Vec<Comparison>>,
}

impl CompareReport {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => serde_json::to_string_pretty(self).expect("reports serialize"),
            OutputFormat::Table => {
                let mut out = String::new();
                for (i, c) in self.candidates.iter().enumerate() {
                    let _ = writeln!(out, "{i:>4}: {c}");
                }
                let _ = write!(out, "{:>4}", "");
                for j in 0..self.candidates.len() {
                    let _ = write!(out, " {j:>4}");
                }
                out.push('\n');
                for (i, row) in self.matrix.iter().enumerate() {
                    let _ = write!(out, "{i:>4}");
                    for c in row {
                        let sym = match c {
                            Comparison::Better => ">",
                            Comparison::Worse => "<",
                            Comparison::Equal => "=",
                            Comparison::Incomparable => "||",
                        };
                        let _ = write!(out, " {sym:>4}");
                    }
                    out.push('\n');
                }
                out
            }
        }
    }
}
