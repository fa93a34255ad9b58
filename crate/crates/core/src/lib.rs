//! Ranking candidate explanations of an observed event in discrete causal Bayesian
//! networks.
//!
//! An [`epistemic::EpistemicState`] is a weighted mixture of candidate causal structures
//! plus a set of observations. Contracting it by the explanandum gives the state in
//! which candidates are scored: explanatory power (the ratio by which a candidate raises
//! the probability of the explanandum), the older difference measure, the candidate's
//! prior, and its posterior. Candidates are compared componentwise on
//! (explanatory power, prior), and the maximal elements form the reported frontier.

pub mod belief;
pub mod cli;
pub mod epistemic;
pub mod error;
pub mod explain;
pub mod format;
pub mod inference;
pub mod network;
pub mod rank;
pub mod report;
pub mod scenario;
pub mod synth;

pub use error::{Error, ErrorKind, Result};
