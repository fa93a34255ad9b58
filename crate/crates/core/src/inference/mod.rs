//! Exact queries over a single network.
//!
//! [`prob`] enumerates worlds and is the reference oracle; [`prob_ve`] runs variable
//! elimination with a min-degree order and is what the rest of the crate uses.
//! [`mpe`] fixes variables one at a time in declaration order, each to the first value
//! whose max-product completion still reaches the optimum, so ties resolve
//! lexicographically.

mod event;
mod factor;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::network::{ancestors_of_set, CausalNetwork};
use factor::{eliminate_all, Factor, Marginalize};

pub use event::{Assignment, Event, ValueSet};

/// Absolute tolerance for probability comparisons.
pub const EPS_CMP: f64 = 1e-9;

/// Which exact algorithm answers probability queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    Enumeration,
    #[default]
    Elimination,
}

impl Engine {
    pub fn prob(self, net: &CausalNetwork, target: &Event, given: &Event) -> Result<f64> {
        match self {
            Engine::Enumeration => prob(net, target, given),
            Engine::Elimination => prob_ve(net, target, given),
        }
    }

    pub fn marginal(self, net: &CausalNetwork, event: &Event) -> f64 {
        match self {
            Engine::Enumeration => enumerate_marginal(net, event),
            Engine::Elimination => marginal_ve(net, event),
        }
    }
}

/// All worlds of `net` in lexicographic order (first variable most significant).
pub fn worlds(net: &CausalNetwork) -> Worlds {
    Worlds {
        cards: net.cardinalities(),
        next: Some(vec![0; net.len()]),
    }
}

pub struct Worlds {
    cards: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for Worlds {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut n = cur.clone();
        let mut done = true;
        for i in (0..n.len()).rev() {
            n[i] += 1;
            if n[i] < self.cards[i] {
                done = false;
                break;
            }
            n[i] = 0;
        }
        if !done {
            self.next = Some(n);
        }
        Some(cur)
    }
}

/// Product of the CPT entries selected by a full world.
pub fn joint(net: &CausalNetwork, w: &Assignment) -> Result<f64> {
    w.check(net)?;
    Ok(joint_unchecked(net, w.values()))
}

pub(crate) fn joint_unchecked(net: &CausalNetwork, world: &[usize]) -> f64 {
    (0..net.len()).map(|v| net.entry(v, world)).product()
}

fn check_event(net: &CausalNetwork, e: &Event) -> Result<()> {
    for (&v, set) in e.literals() {
        net.check_index(v)?;
        if set.iter().any(|x| x >= net.cardinality(v)) {
            return Err(Error::UnknownValue {
                variable: net.name(v).to_string(),
                value: format!("{set:?}"),
            });
        }
    }
    Ok(())
}

fn enumerate_marginal(net: &CausalNetwork, event: &Event) -> f64 {
    worlds(net)
        .filter(|w| event.matches(w))
        .map(|w| joint_unchecked(net, &w))
        .sum()
}

/// Pr(target | given) by summing the joint over every world.
pub fn prob(net: &CausalNetwork, target: &Event, given: &Event) -> Result<f64> {
    check_event(net, target)?;
    check_event(net, given)?;
    let (mut num, mut den) = (0.0, 0.0);
    for w in worlds(net) {
        if !given.matches(&w) {
            continue;
        }
        let j = joint_unchecked(net, &w);
        den += j;
        if target.matches(&w) {
            num += j;
        }
    }
    if den <= 0.0 {
        return Err(Error::NullConditioning);
    }
    Ok(num / den)
}

fn evidence_factors(
    net: &CausalNetwork,
    event: &Event,
    vars: impl Iterator<Item = usize>,
) -> Vec<Factor> {
    let masks = event.masks(net.len());
    vars.map(|v| Factor::from_cpt(net, v, masks[v])).collect()
}

/// Pr(event), eliminating only the event variables and their ancestors; every other
/// variable is barren and sums to one.
fn marginal_ve(net: &CausalNetwork, event: &Event) -> f64 {
    let vars = event.variables();
    if vars.is_empty() {
        return 1.0;
    }
    let mut relevant = ancestors_of_set(net, &vars).expect("checked event");
    relevant.extend(vars);
    eliminate_all(
        evidence_factors(net, event, relevant.into_iter()),
        Marginalize::Sum,
    )
}

fn max_ve(net: &CausalNetwork, event: &Event) -> f64 {
    eliminate_all(evidence_factors(net, event, 0..net.len()), Marginalize::Max)
}

/// Pr(target | given) by variable elimination. Same contract as [`prob`].
pub fn prob_ve(net: &CausalNetwork, target: &Event, given: &Event) -> Result<f64> {
    check_event(net, target)?;
    check_event(net, given)?;
    let den = marginal_ve(net, given);
    if den <= 0.0 {
        return Err(Error::NullConditioning);
    }
    Ok(match target.and(given) {
        Some(both) => marginal_ve(net, &both) / den,
        None => 0.0,
    })
}

/// Most probable world consistent with `evidence`, and its posterior.
pub fn mpe(net: &CausalNetwork, evidence: &Event) -> Result<(Assignment, f64)> {
    check_event(net, evidence)?;
    let pe = marginal_ve(net, evidence);
    if pe <= 0.0 {
        return Err(Error::NullConditioning);
    }
    let best = max_ve(net, evidence) / pe;
    let mut fixed = evidence.clone();
    let mut world = Vec::with_capacity(net.len());
    for v in 0..net.len() {
        let allowed = fixed
            .get(v)
            .unwrap_or_else(|| ValueSet::full(net.cardinality(v)));
        let mut chosen = None;
        for x in allowed.iter() {
            let trial = fixed
                .and(&Event::literal(net, v, x)?)
                .expect("value drawn from the allowed set");
            if max_ve(net, &trial) / pe >= best - EPS_CMP {
                chosen = Some((x, trial));
                break;
            }
        }
        let (x, trial) = chosen.expect("some value attains the maximum");
        world.push(x);
        fixed = trial;
    }
    let posterior = joint_unchecked(net, &world) / pe;
    Ok((Assignment(world), posterior))
}

/// Variables an event mentions, plus their ancestors.
pub fn relevant_variables(net: &CausalNetwork, event: &Event) -> Result<BTreeSet<usize>> {
    let vars = event.variables();
    let mut out = ancestors_of_set(net, &vars)?;
    out.extend(vars);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    fn coin_bag() -> CausalNetwork {
        NetworkBuilder::new()
            .node("C", &["bh", "bt"], &[], vec![vec![0.99, 0.01]])
            .node(
                "R",
                &["h", "t"],
                &["C"],
                vec![vec![0.9, 0.1], vec![0.1, 0.9]],
            )
            .build()
            .unwrap()
    }

    #[test]
    fn joint_examples() {
        let net = coin_bag();
        let w = Assignment::named(&net, &[("C", "bt"), ("R", "t")]).unwrap();
        assert!((joint(&net, &w).unwrap() - 0.009).abs() < 1e-15);
        assert!(joint(&net, &Assignment(vec![0])).is_err());

        let det = NetworkBuilder::new()
            .node("A", &["f", "t"], &[], vec![vec![1.0, 0.0]])
            .build()
            .unwrap();
        assert_eq!(joint(&det, &Assignment(vec![1])).unwrap(), 0.0);

        let single = NetworkBuilder::new()
            .node("X", &["false", "true"], &[], vec![vec![0.5, 0.5]])
            .build()
            .unwrap();
        assert_eq!(joint(&single, &Assignment(vec![1])).unwrap(), 0.5);
    }

    #[test]
    fn prob_examples_both_engines() {
        let net = coin_bag();
        let rt = Event::named(&net, &[("R", "t")]).unwrap();
        let bh = Event::named(&net, &[("C", "bh")]).unwrap();
        for engine in [Engine::Enumeration, Engine::Elimination] {
            let p = engine.prob(&net, &rt, &Event::certain()).unwrap();
            assert!((p - 0.108).abs() < 1e-12);
            let p = engine.prob(&net, &bh, &rt).unwrap();
            assert!((p - 11.0 / 12.0).abs() < 1e-12);
            let full = Event::named_sets(&net, &[("C", &["bh", "bt"])]).unwrap();
            assert_eq!(engine.prob(&net, &full, &rt).unwrap(), 1.0);
        }
    }

    #[test]
    fn null_conditioning_is_an_error() {
        let net = NetworkBuilder::new()
            .node("A", &["f", "t"], &[], vec![vec![1.0, 0.0]])
            .node(
                "B",
                &["f", "t"],
                &["A"],
                vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            )
            .build()
            .unwrap();
        let at = Event::named(&net, &[("A", "t")]).unwrap();
        let bt = Event::named(&net, &[("B", "t")]).unwrap();
        assert_eq!(prob(&net, &bt, &at), Err(Error::NullConditioning));
        assert_eq!(prob_ve(&net, &bt, &at), Err(Error::NullConditioning));
        assert_eq!(mpe(&net, &at), Err(Error::NullConditioning));
    }

    #[test]
    fn mpe_coin_bag() {
        let net = coin_bag();
        let rt = Event::named(&net, &[("R", "t")]).unwrap();
        let (w, p) = mpe(&net, &rt).unwrap();
        assert_eq!(
            w,
            Assignment::named(&net, &[("C", "bh"), ("R", "t")]).unwrap()
        );
        assert!((p - 11.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn mpe_deterministic_net() {
        let net = NetworkBuilder::new()
            .node("A", &["f", "t"], &[], vec![vec![0.0, 1.0]])
            .node(
                "B",
                &["f", "t"],
                &["A"],
                vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            )
            .node(
                "C",
                &["f", "t"],
                &["B"],
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            )
            .build()
            .unwrap();
        let ev = Event::named(&net, &[("C", "f")]).unwrap();
        let (w, p) = mpe(&net, &ev).unwrap();
        assert_eq!(w.values(), &[1, 1, 0]);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mpe_ties_break_toward_earlier_values() {
        let net = NetworkBuilder::new()
            .node("A", &["x", "y"], &[], vec![vec![0.5, 0.5]])
            .node("B", &["x", "y", "z"], &[], vec![vec![0.2, 0.4, 0.4]])
            .build()
            .unwrap();
        let (w, _) = mpe(&net, &Event::certain()).unwrap();
        assert_eq!(w.values(), &[0, 1]);
    }

    #[test]
    fn long_chain_is_tractable() {
        let n = 30;
        let mut b = NetworkBuilder::new().node("X0", &["f", "t"], &[], vec![vec![0.4, 0.6]]);
        let names: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
        for i in 1..n {
            b = b.node(
                &names[i],
                &["f", "t"],
                &[&names[i - 1]],
                vec![vec![0.8, 0.2], vec![0.3, 0.7]],
            );
        }
        let net = b.build().unwrap();
        let first = Event::named(&net, &[("X0", "t")]).unwrap();
        let last = Event::named(&net, &[("X29", "t")]).unwrap();
        let p = prob_ve(&net, &last, &first).unwrap();
        // two-state Markov chain: Pr(t after k steps | t) = s + (1 - s) * 0.5^k, s = 0.4
        let stationary = 0.2 / (0.2 + 0.3);
        let expected = stationary + (1.0 - stationary) * 0.5f64.powi(29);
        assert!((p - expected).abs() < 1e-9);
        let (w, _) = mpe(&net, &last).unwrap();
        assert_eq!(w.values().len(), n);
    }
}
