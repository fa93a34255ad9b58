//! Text formats for networks and cases (TOML).
//!
//! Network:
//!
//! ```toml
//! edges = [["C", "R"]]
//!
//! [[variables]]
//! name = "C"
//! values = ["bh", "bt"]
//!
//! [[variables]]
//! name = "R"
//! values = ["h", "t"]
//!
//! [[cpts.C]]
//! p = [0.99, 0.01]
//!
//! [[cpts.R]]
//! given = ["bh"]
//! p = [0.9, 0.1]
//!
//! [[cpts.R]]
//! given = ["bt"]
//! p = [0.1, 0.9]
//! ```
//!
//! A child's parent order is the order its edges appear in `edges`; `given` lists parent
//! values in that order and `p` lists probabilities in domain order.
//!
//! Case:
//!
//! ```toml
//! observations = { R = "t" }
//! explanandum = { R = "t" }
//!
//! [[structures]]
//! file = "coin_bag.toml"   # relative to the case file; or an inline `network` table
//! weight = 1.0
//!
//! [options]
//! max_conjuncts = 1
//! ```
//!
//! `network = "file.toml"` is shorthand for a single structure of weight 1.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::explain::CandidateSpec;
use crate::inference::Event;
use crate::network::{validate, CausalNetwork, Variable};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    pub variables: Vec<VariableDoc>,
    #[serde(default)]
    pub cpts: BTreeMap<String, Vec<RowDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RowDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub given: Vec<String>,
    pub p: Vec<f64>,
}

fn syntax(e: toml::de::Error) -> Error {
    Error::Parse(e.to_string().trim_end().to_string())
}

/// Parses and validates a network document.
pub fn parse_network(text: &str) -> Result<CausalNetwork> {
    let doc: NetworkDoc = toml::from_str(text).map_err(syntax)?;
    network_from_doc(&doc)
}

pub fn network_from_doc(doc: &NetworkDoc) -> Result<CausalNetwork> {
    let net = network_from_doc_unchecked(doc)?;
    let violations = validate(&net);
    if violations.is_empty() {
        Ok(net)
    } else {
        Err(Error::InvalidNetwork(violations))
    }
}

/// Resolves names and rows without checking network invariants.
pub fn network_from_doc_unchecked(doc: &NetworkDoc) -> Result<CausalNetwork> {
    let mut index = HashMap::new();
    for (i, v) in doc.variables.iter().enumerate() {
        if index.insert(v.name.as_str(), i).is_some() {
            return Err(Error::DuplicateVariable(v.name.clone()));
        }
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    };
    let variables: Vec<Variable> = doc
        .variables
        .iter()
        .map(|v| Variable::new(v.name.clone(), v.values.clone()))
        .collect();

    let mut parents = vec![Vec::new(); variables.len()];
    for [p, c] in &doc.edges {
        let (p, c) = (lookup(p)?, lookup(c)?);
        parents[c].push(p);
    }

    for name in doc.cpts.keys() {
        lookup(name)?;
    }
    let mut cpts = Vec::with_capacity(variables.len());
    for (v, var) in variables.iter().enumerate() {
        let rows = doc
            .cpts
            .get(var.name())
            .ok_or_else(|| Error::Parse(format!("no CPT for `{}`", var.name())))?;
        let size: usize = parents[v]
            .iter()
            .map(|&p| variables[p].cardinality())
            .product();
        let mut table: Vec<Option<Vec<f64>>> = vec![None; size];
        for row in rows {
            if row.given.len() != parents[v].len() {
                return Err(Error::Parse(format!(
                    "CPT row of `{}` gives {} parent values, expected {}",
                    var.name(),
                    row.given.len(),
                    parents[v].len()
                )));
            }
            let mut idx = 0;
            for (label, &p) in row.given.iter().zip(&parents[v]) {
                let pv = &variables[p];
                let x = pv.value_index(label).ok_or_else(|| Error::UnknownValue {
                    variable: pv.name().to_string(),
                    value: label.clone(),
                })?;
                idx = idx * pv.cardinality() + x;
            }
            if table[idx].replace(row.p.clone()).is_some() {
                return Err(Error::Parse(format!(
                    "duplicate CPT row for `{}` given [{}]",
                    var.name(),
                    row.given.join(", ")
                )));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| Error::Parse(format!("CPT of `{}` is missing row {i}", var.name())))
            })
            .collect::<Result<Vec<_>>>()?;
        cpts.push(table);
    }
    Ok(CausalNetwork::from_parts(variables, parents, cpts))
}

pub fn network_to_doc(net: &CausalNetwork) -> NetworkDoc {
    let vars = net.variables();
    let edges = net
        .edges()
        .into_iter()
        .map(|(p, c)| [vars[p].name().to_string(), vars[c].name().to_string()])
        .collect();
    let mut cpts = BTreeMap::new();
    for (v, var) in vars.iter().enumerate() {
        let ps = net.parents(v);
        let rows = net
            .cpt(v)
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut rest = i;
                let mut given = vec![String::new(); ps.len()];
                for (slot, &pv) in ps.iter().enumerate().rev() {
                    let card = vars[pv].cardinality();
                    given[slot] = vars[pv].values()[rest % card].clone();
                    rest /= card;
                }
                RowDoc {
                    given,
                    p: p.clone(),
                }
            })
            .collect();
        cpts.insert(var.name().to_string(), rows);
    }
    NetworkDoc {
        edges,
        variables: vars
            .iter()
            .map(|v| VariableDoc {
                name: v.name().to_string(),
                values: v.values().to_vec(),
            })
            .collect(),
        cpts,
    }
}

pub fn serialize_network(net: &CausalNetwork) -> String {
    toml::to_string(&network_to_doc(net)).expect("network documents always serialize")
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CaseOptions {
    pub max_conjuncts: Option<usize>,
    pub allow_value_sets: Option<bool>,
    pub require_raising: Option<bool>,
    pub include_mechanism_conjunct: Option<bool>,
    pub epsilon: Option<f64>,
}

impl CaseOptions {
    /// Fields set in `over` win over fields set in `self`.
    pub fn overridden_by(&self, over: &CaseOptions) -> CaseOptions {
        CaseOptions {
            max_conjuncts: over.max_conjuncts.or(self.max_conjuncts),
            allow_value_sets: over.allow_value_sets.or(self.allow_value_sets),
            require_raising: over.require_raising.or(self.require_raising),
            include_mechanism_conjunct: over
                .include_mechanism_conjunct
                .or(self.include_mechanism_conjunct),
            epsilon: over.epsilon.or(self.epsilon),
        }
    }

    pub fn spec(&self) -> Result<CandidateSpec> {
        let d = CandidateSpec::default();
        let spec = CandidateSpec {
            max_conjuncts: self.max_conjuncts.unwrap_or(d.max_conjuncts),
            allow_value_sets: self.allow_value_sets.unwrap_or(d.allow_value_sets),
            require_raising: self.require_raising.unwrap_or(d.require_raising),
            include_mechanism_conjunct: self
                .include_mechanism_conjunct
                .unwrap_or(d.include_mechanism_conjunct),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
        };
        if spec.max_conjuncts == 0 {
            return Err(Error::InvalidCase(
                "max_conjuncts must be at least 1".into(),
            ));
        }
        if !(spec.epsilon.is_finite() && spec.epsilon >= 0.0) {
            return Err(Error::InvalidCase(format!("bad epsilon {}", spec.epsilon)));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    file: Option<String>,
    network: Option<NetworkDoc>,
    #[serde(default = "one")]
    weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseDoc {
    network: Option<String>,
    #[serde(default)]
    structures: Vec<StructureDoc>,
    #[serde(default)]
    observations: BTreeMap<String, String>,
    #[serde(default)]
    explanandum: BTreeMap<String, String>,
    #[serde(default)]
    options: CaseOptions,
}

/// A resolved case: candidate structures with weights, observations, explanandum.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseFile {
    pub structures: Vec<(CausalNetwork, f64)>,
    pub observations: Vec<(String, String)>,
    pub explanandum: Vec<(String, String)>,
    pub options: CaseOptions,
}

impl CaseFile {
    /// The epistemic state and the explanandum event. Fails unless every explanandum
    /// literal is also an observation.
    pub fn resolve(&self) -> Result<(EpistemicState, Event)> {
        let Some((first, _)) = self.structures.first() else {
            return Err(Error::InvalidCase("no structures".into()));
        };
        for (var, value) in &self.explanandum {
            match self.observations.iter().find(|(v, _)| v == var) {
                Some((_, observed)) if observed == value => {}
                _ => {
                    return Err(Error::InvalidCase(format!(
                        "explanandum {var}={value} is not among the observations"
                    )))
                }
            }
        }
        fn refs(xs: &[(String, String)]) -> Vec<(&str, &str)> {
            xs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
        }
        let observations = Event::named(first, &refs(&self.observations))?;
        let explanandum = Event::named(first, &refs(&self.explanandum))?;
        if explanandum.is_certain() {
            return Err(Error::InvalidCase("empty explanandum".into()));
        }
        let state = EpistemicState::new(self.structures.clone(), observations)?;
        Ok((state, explanandum))
    }
}

/// Parses a case document. Structure `file` references resolve against `base`.
pub fn parse_case(text: &str, base: Option<&Path>) -> Result<CaseFile> {
    let doc: CaseDoc = toml::from_str(text).map_err(syntax)?;
    let load = |file: &str| -> Result<CausalNetwork> {
        let path = match base {
            Some(b) => b.join(file),
            None => Path::new(file).to_path_buf(),
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        parse_network(&text)
    };
    let mut structures = Vec::new();
    if let Some(file) = &doc.network {
        structures.push((load(file)?, 1.0));
    }
    for s in &doc.structures {
        let net = match (&s.file, &s.network) {
            (Some(f), None) => load(f)?,
            (None, Some(n)) => network_from_doc(n)?,
            _ => {
                return Err(Error::InvalidCase(
                    "each structure needs exactly one of `file` or `network`".into(),
                ))
            }
        };
        structures.push((net, s.weight));
    }
    if structures.is_empty() {
        return Err(Error::InvalidCase("no network or structures given".into()));
    }
    Ok(CaseFile {
        structures,
        observations: doc.observations.into_iter().collect(),
        explanandum: doc.explanandum.into_iter().collect(),
        options: doc.options,
    })
}

pub fn load_case(path: &Path) -> Result<CaseFile> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_case(&text, path.parent())
}

pub fn load_network(path: &Path) -> Result<CausalNetwork> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_network(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Violation;

    const COIN: &str = r#"
edges = [["C", "R"]]

[[variables]]
name = "C"
values = ["bh", "bt"]

[[variables]]
name = "R"
values = ["h", "t"]

[[cpts.C]]
p = [0.99, 0.01]

[[cpts.R]]
given = ["bt"]
p = [0.1, 0.9]

[[cpts.R]]
given = ["bh"]
p = [0.9, 0.1]
"#;

    #[test]
    fn parses_coin_bag() {
        let net = parse_network(COIN).unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(net.edges(), vec![(0, 1)]);
        assert_eq!(net.cpt(1)[0], vec![0.9, 0.1]);
        assert_eq!(parse_network(&serialize_network(&net)).unwrap(), net);
    }

    #[test]
    fn duplicate_variable_is_named() {
        let text = COIN.replace("name = \"R\"", "name = \"C\"");
        assert_eq!(
            parse_network(&text),
            Err(Error::DuplicateVariable("C".into()))
        );
    }

    #[test]
    fn bad_row_sum_is_a_validation_error() {
        let text = COIN.replace("[0.99, 0.01]", "[0.98, 0.01]");
        match parse_network(&text) {
            Err(Error::InvalidNetwork(v)) => {
                assert_eq!(v.len(), 1);
                assert!(matches!(v[0], Violation::RowSum { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let err =
            parse_network("variables = [\n  { name = \"A\", values = [\"x\" }\n]").unwrap_err();
        let Error::Parse(msg) = err else { panic!() };
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn missing_and_duplicate_rows() {
        let missing = COIN.replace(
            "given = [\"bt\"]\np = [0.1, 0.9]",
            "given = [\"bh\"]\np = [0.1, 0.9]",
        );
        assert!(matches!(parse_network(&missing), Err(Error::Parse(m)) if m.contains("duplicate")));
        let unknown = COIN.replace("given = [\"bt\"]", "given = [\"zz\"]");
        assert!(matches!(
            parse_network(&unknown),
            Err(Error::UnknownValue { .. })
        ));
    }

    #[test]
    fn inline_case() {
        let text = format!(
            "observations = {{ R = \"t\" }}\nexplanandum = {{ R = \"t\" }}\n[[structures]]\nweight = 1.0\n[structures.network]\n{}",
            COIN.replace("[[cpts.", "[[structures.network.cpts.")
                .replace("[[variables]]", "[[structures.network.variables]]")
        );
        let case = parse_case(&text, None).unwrap();
        let (k, e) = case.resolve().unwrap();
        assert_eq!(k.structures().len(), 1);
        assert_eq!(e.len(), 1);

        let mut bad = case.clone();
        bad.explanandum = vec![("C".into(), "bt".into())];
        assert!(matches!(bad.resolve(), Err(Error::InvalidCase(_))));
    }
}
