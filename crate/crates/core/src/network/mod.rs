//! Discrete causal Bayesian networks.
//!
//! A [`CausalNetwork`] is a set of finite-domain variables, an ordered parent list per
//! variable, and one conditional probability table per variable. CPT rows are indexed
//! mixed-radix over the parent values, first declared parent most significant.
//!
//! Networks can be assembled in an invalid state (cycles, bad rows) so that [`validate`]
//! can report every problem at once. Everything downstream of parsing assumes a network
//! that passed validation.

mod graph;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

pub use graph::{ancestors, ancestors_of_set, descendants_of_set, moralize, paths_to, supports};

/// Absolute tolerance on CPT row sums.
pub const CPT_EPSILON: f64 = 1e-9;

/// Largest supported domain. Value sets are stored as 64-bit masks.
pub const MAX_DOMAIN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    values: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: S, values: Vec<String>) -> Self {
        Variable {
            name: name.into(),
            values,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn cardinality(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|v| v == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalNetwork {
    variables: Vec<Variable>,
    parents: Vec<Vec<usize>>,
    cpts: Vec<Vec<Vec<f64>>>,
}

impl CausalNetwork {
    /// Assembles a network without checking any invariant. Use [`validate`] before
    /// running inference on the result.
    pub fn from_parts(
        variables: Vec<Variable>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<f64>>>,
    ) -> Self {
        CausalNetwork {
            variables,
            parents,
            cpts,
        }
    }

    /// Assembles a network and rejects it unless [`validate`] reports nothing.
    pub fn new(
        variables: Vec<Variable>,
        parents: Vec<Vec<usize>>,
        cpts: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let net = Self::from_parts(variables, parents, cpts);
        let violations = validate(&net);
        if violations.is_empty() {
            Ok(net)
        } else {
            Err(Error::InvalidNetwork(violations))
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, v: usize) -> &Variable {
        &self.variables[v]
    }

    pub fn cardinality(&self, v: usize) -> usize {
        self.variables[v].cardinality()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::cardinality).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn check_index(&self, v: usize) -> Result<()> {
        if v < self.variables.len() {
            Ok(())
        } else {
            Err(Error::VariableIndex(v))
        }
    }

    pub fn name(&self, v: usize) -> &str {
        &self.variables[v].name
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| self.parents[c].contains(&v))
            .collect()
    }

    pub fn cpt(&self, v: usize) -> &[Vec<f64>] {
        &self.cpts[v]
    }

    /// Directed edges `(parent, child)` in child-major, declared-parent order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(c, ps)| ps.iter().map(move |&p| (p, c)))
            .collect()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().into_iter().collect()
    }

    /// CPT row selected by the parent values of `world`.
    pub fn row_index(&self, v: usize, world: &[usize]) -> usize {
        self.parents[v]
            .iter()
            .fold(0, |acc, &p| acc * self.cardinality(p) + world[p])
    }

    /// Pr(v = world[v] | parents as in world).
    pub fn entry(&self, v: usize, world: &[usize]) -> f64 {
        self.cpts[v][self.row_index(v, world)][world[v]]
    }

    /// Kahn order, preferring lower declaration index among ready nodes.
    /// `None` if the parent relation has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let order = kahn(self.len(), |v| {
            self.parents[v]
                .iter()
                .copied()
                .filter(|&p| p < self.len())
                .collect()
        });
        (order.len() == self.len()).then_some(order)
    }
}

fn kahn(n: usize, parents_of: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let parents: Vec<Vec<usize>> = (0..n).map(&parents_of).collect();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for c in 0..n {
            for &p in &parents[c] {
                if p == v {
                    indegree[c] -= 1;
                    if indegree[c] == 0 {
                        ready.insert(c);
                    }
                }
            }
        }
    }
    order
}

/// One violated network invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyName,
    DuplicateVariable(String),
    DomainTooSmall {
        variable: String,
    },
    DomainTooLarge {
        variable: String,
        size: usize,
    },
    DuplicateValue {
        variable: String,
        value: String,
    },
    ParentOutOfRange {
        variable: String,
        index: usize,
    },
    DuplicateParent {
        variable: String,
        parent: String,
    },
    Cycle {
        variables: Vec<String>,
    },
    MissingCpt {
        variable: String,
    },
    RowCount {
        variable: String,
        expected: usize,
        found: usize,
    },
    RowWidth {
        variable: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    EntryOutOfRange {
        variable: String,
        row: usize,
        value: f64,
    },
    RowSum {
        variable: String,
        row: usize,
        sum: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyName => write!(f, "variable with empty name"),
            DuplicateVariable(n) => write!(f, "duplicate variable `{n}`"),
            DomainTooSmall { variable } => {
                write!(f, "`{variable}` has fewer than two values")
            }
            DomainTooLarge { variable, size } => write!(
                f,
                "`{variable}` has {size} values (at most {MAX_DOMAIN} supported)"
            ),
            DuplicateValue { variable, value } => {
                write!(f, "`{variable}` declares value `{value}` twice")
            }
            ParentOutOfRange { variable, index } => {
                write!(f, "`{variable}` has parent index {index} out of range")
            }
            DuplicateParent { variable, parent } => {
                write!(f, "`{variable}` lists parent `{parent}` twice")
            }
            Cycle { variables } => {
                write!(
                    f,
                    "parent relation is cyclic through {}",
                    variables.join(", ")
                )
            }
            MissingCpt { variable } => write!(f, "`{variable}` has no CPT"),
            RowCount {
                variable,
                expected,
                found,
            } => write!(
                f,
                "CPT of `{variable}` has {found} rows, expected {expected}"
            ),
            RowWidth {
                variable,
                row,
                expected,
                found,
            } => write!(
                f,
                "CPT row {row} of `{variable}` has {found} entries, expected {expected}"
            ),
            EntryOutOfRange {
                variable,
                row,
                value,
            } => write!(
                f,
                "CPT row {row} of `{variable}` has entry {value} outside [0,1]"
            ),
            RowSum { variable, row, sum } => {
                write!(f, "CPT row {row} of `{variable}` sums to {sum}, not 1")
            }
        }
    }
}

/// Reports every violated invariant. An empty result means the network is valid.
pub fn validate(net: &CausalNetwork) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = net.variables.len();

    let mut seen = HashSet::new();
    for var in &net.variables {
        if var.name.is_empty() {
            out.push(Violation::EmptyName);
        }
        if !seen.insert(var.name.as_str()) {
            out.push(Violation::DuplicateVariable(var.name.clone()));
        }
        if var.values.len() < 2 {
            out.push(Violation::DomainTooSmall {
                variable: var.name.clone(),
            });
        }
        if var.values.len() > MAX_DOMAIN {
            out.push(Violation::DomainTooLarge {
                variable: var.name.clone(),
                size: var.values.len(),
            });
        }
        let mut vals = HashSet::new();
        for value in &var.values {
            if !vals.insert(value.as_str()) {
                out.push(Violation::DuplicateValue {
                    variable: var.name.clone(),
                    value: value.clone(),
                });
            }
        }
    }

    let mut parents_ok = net.parents.len() == n;
    for (v, var) in net.variables.iter().enumerate() {
        let Some(ps) = net.parents.get(v) else {
            parents_ok = false;
            continue;
        };
        let mut seen = HashSet::new();
        for &p in ps {
            if p >= n {
                parents_ok = false;
                out.push(Violation::ParentOutOfRange {
                    variable: var.name.clone(),
                    index: p,
                });
            } else if !seen.insert(p) {
                out.push(Violation::DuplicateParent {
                    variable: var.name.clone(),
                    parent: net.variables[p].name.clone(),
                });
            }
        }
    }
    if !parents_ok {
        return out;
    }

    let order = kahn(n, |v| net.parents[v].clone());
    if order.len() < n {
        let placed: HashSet<usize> = order.into_iter().collect();
        out.push(Violation::Cycle {
            variables: (0..n)
                .filter(|v| !placed.contains(v))
                .map(|v| net.variables[v].name.clone())
                .collect(),
        });
    }

    for (v, var) in net.variables.iter().enumerate() {
        let Some(rows) = net.cpts.get(v) else {
            out.push(Violation::MissingCpt {
                variable: var.name.clone(),
            });
            continue;
        };
        let expected: usize = net.parents[v]
            .iter()
            .map(|&p| net.variables[p].cardinality())
            .product();
        if rows.len() != expected {
            out.push(Violation::RowCount {
                variable: var.name.clone(),
                expected,
                found: rows.len(),
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != var.cardinality() {
                out.push(Violation::RowWidth {
                    variable: var.name.clone(),
                    row: r,
                    expected: var.cardinality(),
                    found: row.len(),
                });
                continue;
            }
            let mut bad_entry = false;
            for &x in row {
                if !(0.0..=1.0).contains(&x) {
                    bad_entry = true;
                    out.push(Violation::EntryOutOfRange {
                        variable: var.name.clone(),
                        row: r,
                        value: x,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if !bad_entry && (sum - 1.0).abs() > CPT_EPSILON {
                out.push(Violation::RowSum {
                    variable: var.name.clone(),
                    row: r,
                    sum,
                });
            }
        }
    }
    out
}

/// Convenience construction by name. Rows are given in mixed-radix parent order.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    variables: Vec<Variable>,
    parents: HashMap<String, Vec<String>>,
    tables: HashMap<String, Vec<Vec<f64>>>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variable(mut self, name: &str, values: &[&str]) -> Self {
        self.variables.push(Variable::new(
            name,
            values.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    /// Declares a variable together with its parents and CPT rows.
    pub fn node(self, name: &str, values: &[&str], parents: &[&str], rows: Vec<Vec<f64>>) -> Self {
        self.variable(name, values)
            .parents(name, parents)
            .table(name, rows)
    }

    pub fn parents(mut self, child: &str, parents: &[&str]) -> Self {
        self.parents.insert(
            child.to_string(),
            parents.iter().map(|s| s.to_string()).collect(),
        );
        self
    }

    pub fn table(mut self, child: &str, rows: Vec<Vec<f64>>) -> Self {
        self.tables.insert(child.to_string(), rows);
        self
    }

    /// Resolves names only; invariants are left unchecked.
    pub fn build_unchecked(self) -> Result<CausalNetwork> {
        let mut index = HashMap::new();
        for (i, v) in self.variables.iter().enumerate() {
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        for name in self.parents.keys().chain(self.tables.keys()) {
            if !index.contains_key(name) {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        let mut parents = Vec::with_capacity(self.variables.len());
        let mut cpts = Vec::with_capacity(self.variables.len());
        for v in &self.variables {
            let ps = match self.parents.get(&v.name) {
                Some(ps) => ps
                    .iter()
                    .map(|p| {
                        index
                            .get(p)
                            .copied()
                            .ok_or_else(|| Error::UnknownVariable(p.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            parents.push(ps);
            cpts.push(self.tables.get(&v.name).cloned().unwrap_or_default());
        }
        Ok(CausalNetwork::from_parts(self.variables, parents, cpts))
    }

    pub fn build(self) -> Result<CausalNetwork> {
        let net = self.build_unchecked()?;
        let violations = validate(&net);
        if violations.is_empty() {
            Ok(net)
        } else {
            Err(Error::InvalidNetwork(violations))
        }
    }
}

/// A partial causal mechanism: a set of directed edges asserted to be operative.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MechanismFragment {
    edges: BTreeSet<(usize, usize)>,
}

impl MechanismFragment {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(edges: I) -> Result<Self> {
        let frag = MechanismFragment {
            edges: edges.into_iter().collect(),
        };
        if frag.is_acyclic() {
            Ok(frag)
        } else {
            Err(Error::CyclicMechanism)
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn union(&self, other: &MechanismFragment) -> Result<MechanismFragment> {
        Self::new(self.edges.iter().chain(other.edges.iter()).copied())
    }

    /// True when `to` is reachable from `from` along fragment edges (at least one step).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                if a == u {
                    if b == to {
                        return true;
                    }
                    if seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        false
    }

    fn is_acyclic(&self) -> bool {
        self.variables().into_iter().all(|v| !self.reaches(v, v))
    }

    /// Renders edges as `A->B` using the network's variable names.
    pub fn describe(&self, vars: &[Variable]) -> Vec<String> {
        self.edges
            .iter()
            .map(|&(a, b)| format!("{}->{}", vars[a].name(), vars[b].name()))
            .collect()
    }
}

/// Undirected graph over the variables of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovNetwork {
    variables: Vec<Variable>,
    edges: BTreeSet<(usize, usize)>,
}

impl MarkovNetwork {
    pub fn new(variables: Vec<Variable>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        MarkovNetwork { variables, edges }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    /// Normalized pairs `(low, high)`.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }
}
