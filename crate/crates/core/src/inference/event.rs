use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::network::{CausalNetwork, Variable, MAX_DOMAIN};

/// A set of value indices of one variable, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ValueSet(u64);

impl ValueSet {
    pub fn singleton(value: usize) -> Self {
        assert!(value < MAX_DOMAIN, "value index {value} out of range");
        ValueSet(1 << value)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(values: I) -> Self {
        ValueSet(values.into_iter().fold(0, |m, v| {
            assert!(v < MAX_DOMAIN, "value index {v} out of range");
            m | (1 << v)
        }))
    }

    pub fn full(cardinality: usize) -> Self {
        if cardinality >= 64 {
            ValueSet(u64::MAX)
        } else {
            ValueSet((1u64 << cardinality) - 1)
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, value: usize) -> bool {
        value < 64 && self.0 & (1 << value) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_singleton(self) -> bool {
        self.len() == 1
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn intersect(self, other: ValueSet) -> ValueSet {
        ValueSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: ValueSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.0 & (1 << i) != 0)
    }
}

impl Ord for ValueSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ValueSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A conjunction of `variable ∈ set` literals. Literals whose set covers the whole
/// domain are dropped on construction, so the empty event is the certain event.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    literals: BTreeMap<usize, ValueSet>,
}

impl Event {
    pub fn certain() -> Self {
        Event::default()
    }

    /// Builds an event against the given domain sizes. Repeated variables are intersected.
    pub fn new<I>(cardinalities: &[usize], vars: &[Variable], literals: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, ValueSet)>,
    {
        let mut map: BTreeMap<usize, ValueSet> = BTreeMap::new();
        for (v, set) in literals {
            let card = *cardinalities.get(v).ok_or(Error::VariableIndex(v))?;
            if !set.is_subset(ValueSet::full(card)) {
                return Err(Error::UnknownValue {
                    variable: vars[v].name().to_string(),
                    value: format!("{set:?}"),
                });
            }
            let merged = match map.get(&v) {
                Some(prev) => prev.intersect(set),
                None => set,
            };
            if merged.is_empty() {
                return Err(Error::EmptyValueSet(vars[v].name().to_string()));
            }
            map.insert(v, merged);
        }
        map.retain(|&v, set| set.len() < cardinalities[v]);
        Ok(Event { literals: map })
    }

    pub fn on(
        net: &CausalNetwork,
        literals: impl IntoIterator<Item = (usize, ValueSet)>,
    ) -> Result<Self> {
        Self::new(&net.cardinalities(), net.variables(), literals)
    }

    /// Single `variable = value` literal by index.
    pub fn literal(net: &CausalNetwork, var: usize, value: usize) -> Result<Self> {
        net.check_index(var)?;
        if value >= net.cardinality(var) {
            return Err(Error::UnknownValue {
                variable: net.name(var).to_string(),
                value: value.to_string(),
            });
        }
        Self::on(net, [(var, ValueSet::singleton(value))])
    }

    /// Conjunction of `name = label` literals.
    pub fn named(net: &CausalNetwork, pairs: &[(&str, &str)]) -> Result<Self> {
        let lits = pairs
            .iter()
            .map(|&(n, val)| {
                let v = net.require(n)?;
                let i = net
                    .variable(v)
                    .value_index(val)
                    .ok_or_else(|| Error::UnknownValue {
                        variable: n.to_string(),
                        value: val.to_string(),
                    })?;
                Ok((v, ValueSet::singleton(i)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::on(net, lits)
    }

    /// `name ∈ {labels}` literals.
    pub fn named_sets(net: &CausalNetwork, pairs: &[(&str, &[&str])]) -> Result<Self> {
        let lits = pairs
            .iter()
            .map(|&(n, labels)| {
                let v = net.require(n)?;
                let idx = labels
                    .iter()
                    .map(|l| {
                        net.variable(v)
                            .value_index(l)
                            .ok_or_else(|| Error::UnknownValue {
                                variable: n.to_string(),
                                value: l.to_string(),
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((v, ValueSet::from_indices(idx)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::on(net, lits)
    }

    pub fn literals(&self) -> &BTreeMap<usize, ValueSet> {
        &self.literals
    }

    pub fn get(&self, var: usize) -> Option<ValueSet> {
        self.literals.get(&var).copied()
    }

    pub fn is_certain(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.literals.keys().copied().collect()
    }

    pub fn all_singletons(&self) -> bool {
        self.literals.values().all(|s| s.is_singleton())
    }

    /// Conjunction; `None` when the two events contradict each other.
    pub fn and(&self, other: &Event) -> Option<Event> {
        let mut literals = self.literals.clone();
        for (&v, &set) in &other.literals {
            let merged = match literals.get(&v) {
                Some(prev) => prev.intersect(set),
                None => set,
            };
            if merged.is_empty() {
                return None;
            }
            literals.insert(v, merged);
        }
        Some(Event { literals })
    }

    pub fn without(&self, vars: &BTreeSet<usize>) -> Event {
        Event {
            literals: self
                .literals
                .iter()
                .filter(|(v, _)| !vars.contains(v))
                .map(|(&v, &s)| (v, s))
                .collect(),
        }
    }

    pub fn matches(&self, world: &[usize]) -> bool {
        self.literals.iter().all(|(&v, s)| s.contains(world[v]))
    }

    /// Per-variable allowed-value masks over `n` variables.
    pub fn masks(&self, n: usize) -> Vec<u64> {
        let mut m = vec![u64::MAX; n];
        for (&v, s) in &self.literals {
            m[v] = s.mask();
        }
        m
    }

    /// `true` when every world satisfying `self` satisfies `other`.
    pub fn implies(&self, other: &Event) -> bool {
        other.literals.iter().all(|(v, set)| {
            self.literals
                .get(v)
                .is_some_and(|mine| mine.is_subset(*set))
        })
    }

    pub fn describe(&self, vars: &[Variable]) -> Vec<String> {
        self.literals
            .iter()
            .map(|(&v, set)| {
                let var = &vars[v];
                if set.is_singleton() {
                    format!("{}={}", var.name(), var.values()[set.first().unwrap()])
                } else {
                    let vals: Vec<&str> = set.iter().map(|i| var.values()[i].as_str()).collect();
                    format!("{} in {{{}}}", var.name(), vals.join(","))
                }
            })
            .collect()
    }
}

/// A full world: one value index per network variable, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn check(&self, net: &CausalNetwork) -> Result<()> {
        if self.0.len() != net.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} of {} variables assigned",
                self.0.len(),
                net.len()
            )));
        }
        for (v, &x) in self.0.iter().enumerate() {
            if x >= net.cardinality(v) {
                return Err(Error::InvalidAssignment(format!(
                    "value index {x} out of range for `{}`",
                    net.name(v)
                )));
            }
        }
        Ok(())
    }

    /// Builds a total assignment from `name = label` pairs.
    pub fn named(net: &CausalNetwork, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut vals = vec![None; net.len()];
        for &(n, l) in pairs {
            let v = net.require(n)?;
            let i = net
                .variable(v)
                .value_index(l)
                .ok_or_else(|| Error::UnknownValue {
                    variable: n.to_string(),
                    value: l.to_string(),
                })?;
            vals[v] = Some(i);
        }
        let vals = vals
            .into_iter()
            .enumerate()
            .map(|(v, x)| {
                x.ok_or_else(|| Error::InvalidAssignment(format!("`{}` unassigned", net.name(v))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Assignment(vals))
    }

    /// As an event of singleton literals.
    pub fn to_event(&self, net: &CausalNetwork) -> Result<Event> {
        Event::on(
            net,
            self.0
                .iter()
                .enumerate()
                .map(|(v, &x)| (v, ValueSet::singleton(x))),
        )
    }

    pub fn describe(&self, vars: &[Variable]) -> Vec<String> {
        self.0
            .iter()
            .enumerate()
            .map(|(v, &x)| format!("{}={}", vars[v].name(), vars[v].values()[x]))
            .collect()
    }
}
