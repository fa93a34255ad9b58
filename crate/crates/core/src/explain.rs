//! Candidate explanations `X = X1 ∧ X2`: an optional mechanism fragment `X1` and a
//! conjunction of value-set literals `X2` over variables that causally precede the
//! explanandum.

use std::collections::BTreeSet;
use std::fmt;

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::inference::{Event, ValueSet, EPS_CMP};
use crate::network::{ancestors_of_set, paths_to, supports, MechanismFragment, Variable};
use crate::rank;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Explanation {
    /// Absent when the causal mechanism is taken as known.
    pub mechanism: Option<MechanismFragment>,
    pub conjuncts: Event,
}

impl Explanation {
    pub fn new(mechanism: Option<MechanismFragment>, conjuncts: Event) -> Self {
        Explanation {
            mechanism,
            conjuncts,
        }
    }

    pub fn of(conjuncts: Event) -> Self {
        Self::new(None, conjuncts)
    }

    pub fn mechanism(&self) -> Option<&MechanismFragment> {
        self.mechanism.as_ref()
    }

    pub fn describe(&self, vars: &[Variable]) -> String {
        let mut parts = Vec::new();
        if let Some(m) = &self.mechanism {
            parts.push(format!("[{}]", m.describe(vars).join(", ")));
        }
        let lits = self.conjuncts.describe(vars);
        if lits.is_empty() {
            parts.push("true".into());
        } else {
            parts.push(lits.join(" & "));
        }
        parts.join(" & ")
    }
}

/// Search-space controls for [`enumerate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateSpec {
    pub max_conjuncts: usize,
    pub allow_value_sets: bool,
    pub require_raising: bool,
    pub include_mechanism_conjunct: bool,
    /// Comparison tolerance used for acceptance, raising and dominance.
    pub epsilon: f64,
}

impl Default for CandidateSpec {
    fn default() -> Self {
        CandidateSpec {
            max_conjuncts: 2,
            allow_value_sets: false,
            require_raising: false,
            include_mechanism_conjunct: true,
            epsilon: EPS_CMP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inadmissible {
    /// `X2` mentions an explanandum variable.
    ExplanandumOverlap(String),
    /// An `X2` variable does not causally precede the explanandum.
    NotPrecedent(String),
    /// No positive-weight structure contains the mechanism's edges.
    UnsupportedMechanism,
    /// `Pr(X) = 1` in the uncontracted state.
    AlreadyAccepted,
    /// `Pr(X) = 0` in the contracted state, so it cannot be scored.
    Impossible,
}

impl fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inadmissible::ExplanandumOverlap(v) => write!(f, "mentions explanandum variable `{v}`"),
            Inadmissible::NotPrecedent(v) => {
                write!(f, "`{v}` does not causally precede the explanandum")
            }
            Inadmissible::UnsupportedMechanism => {
                write!(f, "no candidate structure contains the mechanism")
            }
            Inadmissible::AlreadyAccepted => write!(f, "already accepted (probability 1)"),
            Inadmissible::Impossible => {
                write!(f, "probability 0 once the explanandum is retracted")
            }
        }
    }
}

/// Outcome of [`is_admissible`]; `reason` names the first failed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub reason: Option<Inadmissible>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.reason.is_none()
    }
}

pub fn is_admissible(k: &EpistemicState, e: &Event, x: &Explanation) -> Result<Admissibility> {
    k.check_observed(e)?;
    let reject = |r| Ok(Admissibility { reason: Some(r) });
    let vars = k.variables();
    let e_vars = e.variables();

    for &v in x.conjuncts.literals().keys() {
        if e_vars.contains(&v) {
            return reject(Inadmissible::ExplanandumOverlap(vars[v].name().into()));
        }
    }

    match &x.mechanism {
        Some(m) => {
            let mut supported = false;
            for s in k.structures().iter().filter(|s| s.weight > 0.0) {
                supported |= supports(&s.network, m)?;
            }
            if !supported {
                return reject(Inadmissible::UnsupportedMechanism);
            }
            for &v in x.conjuncts.literals().keys() {
                if !e_vars.iter().any(|&t| m.reaches(v, t)) {
                    return reject(Inadmissible::NotPrecedent(vars[v].name().into()));
                }
            }
        }
        None => {
            for s in k.structures().iter().filter(|s| s.weight > 0.0) {
                let before = ancestors_of_set(&s.network, &e_vars)?;
                for &v in x.conjuncts.literals().keys() {
                    if !before.contains(&v) {
                        return reject(Inadmissible::NotPrecedent(vars[v].name().into()));
                    }
                }
            }
        }
    }

    if k.prob_of(&x.conjuncts, x.mechanism())? >= 1.0 - EPS_CMP {
        return reject(Inadmissible::AlreadyAccepted);
    }
    if k.contract(e)?.prob_of(&x.conjuncts, x.mechanism())? <= 0.0 {
        return reject(Inadmissible::Impossible);
    }
    Ok(Admissibility { reason: None })
}

fn value_sets(card: usize, allow_value_sets: bool) -> Vec<ValueSet> {
    let mut out: Vec<ValueSet> = if allow_value_sets {
        (1u64..(1u64 << card) - 1)
            .map(|m| ValueSet::from_indices((0..card).filter(|i| m & (1 << i) != 0)))
            .collect()
    } else {
        (0..card).map(ValueSet::singleton).collect()
    };
    out.sort();
    out
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            go(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, k, 0, &mut Vec::new(), &mut out);
    out
}

fn cartesian(choices: &[Vec<ValueSet>]) -> Vec<Vec<ValueSet>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut p = prefix.clone();
                    p.push(o);
                    p
                })
            })
            .collect()
    })
}

/// Every admissible candidate within `spec`, in canonical order: conjunct count, then
/// variable names, then values, then mechanism edges.
pub fn enumerate(k: &EpistemicState, e: &Event, spec: &CandidateSpec) -> Result<Vec<Explanation>> {
    k.check_observed(e)?;
    let vars = k.variables();
    let e_vars = e.variables();
    let positive: Vec<_> = k.structures().iter().filter(|s| s.weight > 0.0).collect();

    let mut pool = BTreeSet::new();
    for s in &positive {
        pool.extend(ancestors_of_set(&s.network, &e_vars)?);
    }
    let mut pool: Vec<usize> = pool.difference(&e_vars).copied().collect();
    pool.sort_by(|&a, &b| vars[a].name().cmp(vars[b].name()));

    let contracted = k.contract(e)?;
    let mut out = Vec::new();
    for size in 1..=spec.max_conjuncts.min(pool.len()) {
        for combo in combinations(&pool, size) {
            let sources: BTreeSet<usize> = combo.iter().copied().collect();
            let mechanisms: Vec<Option<MechanismFragment>> = if spec.include_mechanism_conjunct {
                let mut frags = BTreeSet::new();
                for s in &positive {
                    let before = ancestors_of_set(&s.network, &e_vars)?;
                    if sources.is_subset(&before) {
                        frags.insert(paths_to(&s.network, &sources, &e_vars)?);
                    }
                }
                frags.into_iter().map(Some).collect()
            } else {
                vec![None]
            };
            let choices: Vec<Vec<ValueSet>> = combo
                .iter()
                .map(|&v| value_sets(vars[v].cardinality(), spec.allow_value_sets))
                .collect();
            for values in cartesian(&choices) {
                let conjuncts = Event::new(
                    &k.network().cardinalities(),
                    vars,
                    combo.iter().copied().zip(values),
                )?;
                for mech in &mechanisms {
                    let x = Explanation::new(mech.clone(), conjuncts.clone());
                    if !is_admissible(k, e, &x)?.is_admissible() {
                        continue;
                    }
                    if spec.require_raising
                        && rank::ep_ratio(&contracted, e, &x)? <= 1.0 + spec.epsilon
                    {
                        continue;
                    }
                    out.push(x);
                }
            }
        }
    }
    Ok(out)
}

/// `X ∧ Y`. Literals on a shared variable must agree exactly.
pub fn conjoin(x: &Explanation, y: &Explanation, vars: &[Variable]) -> Result<Explanation> {
    for (&v, set) in y.conjuncts.literals() {
        if let Some(mine) = x.conjuncts.get(v) {
            if mine != *set {
                return Err(Error::ConjunctConflict(vars[v].name().to_string()));
            }
        }
    }
    let conjuncts = x
        .conjuncts
        .and(&y.conjuncts)
        .expect("agreeing literals cannot contradict");
    let mechanism = match (&x.mechanism, &y.mechanism) {
        (Some(a), Some(b)) => Some(a.union(b)?),
        (Some(a), None) | (None, Some(a)) => Some(a.clone()),
        (None, None) => None,
    };
    Ok(Explanation::new(mechanism, conjuncts))
}
