//! Belief explanations.
//!
//! Read as a network over the agent's beliefs, the causal graph loses its direction:
//! the moral graph is the belief graph, and a belief explanation is an acyclic
//! orientation of some of its edges whose every source belief is rooted in an external
//! cause such as an observation or testimony. Only structure is checked here.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::network::{moralize, CausalNetwork, MarkovNetwork, MechanismFragment};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExternalCause {
    pub label: String,
    pub variable: usize,
}

impl ExternalCause {
    pub fn new(label: impl Into<String>, variable: usize) -> Self {
        ExternalCause {
            label: label.into(),
            variable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefGraph {
    pub markov: MarkovNetwork,
    pub external_causes: BTreeSet<ExternalCause>,
}

pub fn to_belief_graph(net: &CausalNetwork, externals: &[ExternalCause]) -> Result<BeliefGraph> {
    for x in externals {
        net.check_index(x.variable).map_err(|_| {
            Error::UnknownVariable(format!("#{} (external `{}`)", x.variable, x.label))
        })?;
    }
    Ok(BeliefGraph {
        markov: moralize(net),
        external_causes: externals.iter().cloned().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BeliefDefect {
    Empty,
    Cyclic,
    BothDirections(String, String),
    Unrooted(String),
}

impl fmt::Display for BeliefDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeliefDefect::Empty => write!(f, "no oriented edges"),
            BeliefDefect::Cyclic => write!(f, "orientation contains a directed cycle"),
            BeliefDefect::BothDirections(a, b) => write!(f, "edge {a} - {b} oriented both ways"),
            BeliefDefect::Unrooted(v) => write!(f, "source belief `{v}` has no external cause"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefCheck {
    pub defects: Vec<BeliefDefect>,
}

impl BeliefCheck {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks an oriented subgraph of the belief graph: acyclic, and every source node
/// attached to one of `roots`.
pub fn validate_belief_explanation(
    bg: &BeliefGraph,
    oriented: &[(usize, usize)],
    roots: &[ExternalCause],
) -> Result<BeliefCheck> {
    let vars = bg.markov.variables();
    let name = |v: usize| {
        vars.get(v)
            .map(|x| x.name().to_string())
            .unwrap_or_else(|| format!("#{v}"))
    };
    for &(a, b) in oriented {
        if !bg.markov.has_edge(a, b) {
            return Err(Error::NotInBeliefGraph(name(a), name(b)));
        }
    }
    for r in roots {
        if !bg.external_causes.contains(r) {
            return Err(Error::UnknownExternal(r.label.clone()));
        }
    }

    let mut defects = Vec::new();
    if oriented.is_empty() {
        defects.push(BeliefDefect::Empty);
        return Ok(BeliefCheck { defects });
    }
    let edges: BTreeSet<(usize, usize)> = oriented.iter().copied().collect();
    for &(a, b) in &edges {
        if a < b && edges.contains(&(b, a)) {
            defects.push(BeliefDefect::BothDirections(name(a), name(b)));
        }
    }
    if MechanismFragment::new(edges.iter().copied()).is_err() {
        defects.push(BeliefDefect::Cyclic);
    }
    let targets: BTreeSet<usize> = edges.iter().map(|e| e.1).collect();
    let rooted: BTreeSet<usize> = roots.iter().map(|r| r.variable).collect();
    let sources: BTreeSet<usize> = edges
        .iter()
        .map(|e| e.0)
        .filter(|v| !targets.contains(v))
        .collect();
    for s in sources {
        if !rooted.contains(&s) {
            defects.push(BeliefDefect::Unrooted(name(s)));
        }
    }
    Ok(BeliefCheck { defects })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    fn storm() -> CausalNetwork {
        NetworkBuilder::new()
            .node("Storm", &["no", "yes"], &[], vec![vec![0.9, 0.1]])
            .node(
                "Barometer",
                &["steady", "down"],
                &["Storm"],
                vec![vec![0.95, 0.05], vec![0.2, 0.8]],
            )
            .build()
            .unwrap()
    }

    #[test]
    fn both_orientations_validate_with_their_roots() {
        let saw_barometer = ExternalCause::new("observation", 1);
        let saw_storm = ExternalCause::new("observation", 0);
        let bg = to_belief_graph(&storm(), &[saw_barometer.clone(), saw_storm.clone()]).unwrap();
        assert_eq!(bg.markov.edges().len(), 1);

        let up = validate_belief_explanation(&bg, &[(1, 0)], std::slice::from_ref(&saw_barometer))
            .unwrap();
        assert!(up.is_valid());
        let down = validate_belief_explanation(&bg, &[(0, 1)], &[saw_storm]).unwrap();
        assert!(down.is_valid());
        let unrooted = validate_belief_explanation(&bg, &[(0, 1)], &[saw_barometer]).unwrap();
        assert_eq!(
            unrooted.defects,
            vec![BeliefDefect::Unrooted("Storm".into())]
        );
    }

    #[test]
    fn cycles_and_foreign_edges() {
        let b = NetworkBuilder::new()
            .node("A", &["f", "t"], &[], vec![vec![0.5, 0.5]])
            .node("B", &["f", "t"], &[], vec![vec![0.5, 0.5]]);
        let v = b
            .node("C", &["f", "t"], &["A", "B"], vec![vec![0.5, 0.5]; 4])
            .build()
            .unwrap();
        let root = ExternalCause::new("testimony", 0);
        let bg = to_belief_graph(&v, std::slice::from_ref(&root)).unwrap();
        assert_eq!(bg.markov.edges().len(), 3);
        let cyc = validate_belief_explanation(
            &bg,
            &[(0, 1), (1, 2), (2, 0)],
            std::slice::from_ref(&root),
        )
        .unwrap();
        assert!(cyc.defects.contains(&BeliefDefect::Cyclic));

        let chain = NetworkBuilder::new()
            .node("A", &["f", "t"], &[], vec![vec![0.5, 0.5]])
            .node("B", &["f", "t"], &["A"], vec![vec![0.5, 0.5]; 2])
            .node("C", &["f", "t"], &["B"], vec![vec![0.5, 0.5]; 2])
            .build()
            .unwrap();
        let bg = to_belief_graph(&chain, std::slice::from_ref(&root)).unwrap();
        assert!(matches!(
            validate_belief_explanation(&bg, &[(0, 2)], &[root]),
            Err(Error::NotInBeliefGraph(..))
        ));
        assert!(to_belief_graph(&chain, &[ExternalCause::new("x", 9)]).is_err());
    }
}
