#![allow(dead_code)]

use causal_explain::epistemic::EpistemicState;
use causal_explain::inference::{joint, worlds, Assignment, Event, EPS_CMP};
use causal_explain::network::CausalNetwork;
use causal_explain::synth::{literals_of, random_network_over, sample_world};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One or two structures over `2..=max_vars` variables of cardinality `2..=max_card`;
/// the explanandum is one or two literals of a sampled world, and the observations add
/// up to one more literal of the same world.
pub fn random_case(
    rng: &mut ChaCha8Rng,
    max_vars: usize,
    max_card: usize,
    mixture: bool,
) -> (EpistemicState, Event) {
    let n = rng.gen_range(2..=max_vars);
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_card)).collect();
    let first = random_network_over(rng, &cards, 3);
    let world = sample_world(rng, &first);
    let ne = rng.gen_range(1..=2);
    let e = literals_of(rng, &first, &world, ne);
    let nx = rng.gen_range(0..=1);
    let extra = literals_of(rng, &first, &world, nx);
    let obs = e.and(&extra).expect("both agree with one world");
    let k = if mixture && rng.gen_bool(0.5) {
        let second = random_network_over(rng, &cards, 3);
        let w: f64 = rng.gen_range(0.1..0.9);
        EpistemicState::new(vec![(first, w), (second, 1.0 - w)], obs)
    } else {
        EpistemicState::single(first, obs)
    };
    (k.expect("positive tables make every state valid"), e)
}

/// First world in lexicographic order whose posterior is within tolerance of the best.
pub fn brute_mpe(net: &CausalNetwork, evidence: &Event) -> (Assignment, f64) {
    let scored: Vec<(Vec<usize>, f64)> = worlds(net)
        .filter(|w| evidence.matches(w))
        .map(|w| {
            let p = joint(net, &Assignment(w.clone())).unwrap();
            (w, p)
        })
        .collect();
    let pe: f64 = scored.iter().map(|(_, p)| p).sum();
    let best = scored.iter().map(|(_, p)| p / pe).fold(0.0, f64::max);
    let (w, p) = scored
        .into_iter()
        .find(|(_, p)| p / pe >= best - EPS_CMP)
        .unwrap();
    (Assignment(w), p / pe)
}

/// Copy of `net` in which the first `m` variables are parentless and uniform.
pub fn uniform_roots(net: &CausalNetwork, m: usize) -> CausalNetwork {
    let n = net.len();
    let parents = (0..n)
        .map(|v| {
            if v < m {
                Vec::new()
            } else {
                net.parents(v).to_vec()
            }
        })
        .collect();
    let cpts = (0..n)
        .map(|v| {
            if v < m {
                let c = net.cardinality(v);
                vec![vec![1.0 / c as f64; c]]
            } else {
                net.cpt(v).to_vec()
            }
        })
        .collect();
    CausalNetwork::new(net.variables().to_vec(), parents, cpts).unwrap()
}

pub fn world_event(net: &CausalNetwork, w: &[usize]) -> Event {
    Assignment(w.to_vec()).to_event(net).unwrap()
}
