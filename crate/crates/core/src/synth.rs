//! Random networks, worlds and events for property checks.
//!
//! Variables are named `V0, V1, ...` with values `v0, v1, ...`, and parents always have
//! lower indices, so declaration order is topological. Table entries are strictly
//! positive: every event over singleton-or-larger value sets has positive probability.

use rand::seq::index::sample;
use rand::Rng;

use crate::inference::{Assignment, Event, ValueSet};
use crate::network::{CausalNetwork, Variable};

#[derive(Debug, Clone, Copy)]
pub struct NetSpec {
    pub variables: usize,
    pub max_parents: usize,
    pub min_cardinality: usize,
    pub max_cardinality: usize,
}

impl NetSpec {
    pub fn binary(variables: usize, max_parents: usize) -> Self {
        NetSpec {
            variables,
            max_parents,
            min_cardinality: 2,
            max_cardinality: 2,
        }
    }
}

/// A normalized row with every entry at least `0.02 / card`.
pub fn random_row<R: Rng + ?Sized>(rng: &mut R, card: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..card).map(|_| rng.gen_range(0.02..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn random_network<R: Rng + ?Sized>(rng: &mut R, spec: &NetSpec) -> CausalNetwork {
    let cards: Vec<usize> = (0..spec.variables)
        .map(|_| rng.gen_range(spec.min_cardinality..=spec.max_cardinality))
        .collect();
    random_network_over(rng, &cards, spec.max_parents)
}

/// A random structure over a fixed variable universe: same names and domains for the
/// same `cards`, fresh parents and tables.
pub fn random_network_over<R: Rng + ?Sized>(
    rng: &mut R,
    cards: &[usize],
    max_parents: usize,
) -> CausalNetwork {
    let variables: Vec<Variable> = cards
        .iter()
        .enumerate()
        .map(|(i, &c)| Variable::new(format!("V{i}"), (0..c).map(|j| format!("v{j}")).collect()))
        .collect();
    let mut parents = Vec::with_capacity(cards.len());
    let mut cpts = Vec::with_capacity(cards.len());
    for (v, &card) in cards.iter().enumerate() {
        let k = rng.gen_range(0..=max_parents.min(v));
        let mut ps = sample(rng, v, k).into_vec();
        ps.sort_unstable();
        let rows: usize = ps.iter().map(|&p| cards[p]).product();
        cpts.push((0..rows).map(|_| random_row(rng, card)).collect());
        parents.push(ps);
    }
    CausalNetwork::new(variables, parents, cpts).expect("generated networks are valid")
}

/// Forward sample of one world.
pub fn sample_world<R: Rng + ?Sized>(rng: &mut R, net: &CausalNetwork) -> Assignment {
    let mut world = vec![0; net.len()];
    for v in net.topological_order().expect("valid networks are acyclic") {
        let row = &net.cpt(v)[net.row_index(v, &world)];
        let mut u: f64 = rng.gen();
        let mut pick = row.len() - 1;
        for (x, &p) in row.iter().enumerate() {
            if u < p {
                pick = x;
                break;
            }
            u -= p;
        }
        world[v] = pick;
    }
    Assignment(world)
}

/// Singleton literals agreeing with `world` on `n` distinct random variables.
pub fn literals_of<R: Rng + ?Sized>(
    rng: &mut R,
    net: &CausalNetwork,
    world: &Assignment,
    n: usize,
) -> Event {
    let vars = sample(rng, net.len(), n.min(net.len()));
    Event::on(
        net,
        vars.into_iter()
            .map(|v| (v, ValueSet::singleton(world.values()[v]))),
    )
    .expect("world values are in range")
}

/// Up to `max_literals` literals; with `allow_sets`, a literal may admit several values.
/// May be certain when every drawn set covers its whole domain.
pub fn random_event<R: Rng + ?Sized>(
    rng: &mut R,
    net: &CausalNetwork,
    max_literals: usize,
    allow_sets: bool,
) -> Event {
    let n = rng.gen_range(0..=max_literals.min(net.len()));
    let vars = sample(rng, net.len(), n);
    let literals = vars.into_iter().map(|v| {
        let card = net.cardinality(v);
        let set = if allow_sets {
            let size = rng.gen_range(1..=card);
            ValueSet::from_indices(sample(rng, card, size))
        } else {
            ValueSet::singleton(rng.gen_range(0..card))
        };
        (v, set)
    });
    Event::on(net, literals).expect("drawn literals are in range")
}
