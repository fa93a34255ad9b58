//! Scoring explanations and the componentwise (explanatory power, prior) order.
//!
//! Every candidate gets four numbers computed in the contracted state: its prior, its
//! explanatory power (ratio), the difference measure, and its posterior given the
//! explanandum. Only the pair (ratio, prior) decides dominance; the posterior and the
//! difference are reported alongside for comparison.

use std::cmp::Ordering;

use serde::Serialize;

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::explain::{enumerate, CandidateSpec, Explanation};
use crate::inference::{Event, EPS_CMP};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredExplanation {
    pub explanation: Explanation,
    pub explanandum: Event,
    /// `Pr⁻(X)`, prior in the contracted state.
    pub prior: f64,
    /// `Pr⁻(E | X) / Pr⁻(E)`.
    pub ep_ratio: f64,
    /// `Pr⁻(E | X) - Pr⁻(E)`.
    pub ep_diff: f64,
    /// `Pr⁻(X | E)`.
    pub posterior: f64,
    /// `Pr⁻(E | X)`.
    pub likelihood: f64,
    /// `Pr⁻(E)`.
    pub explanandum_prob: f64,
    /// `Pr(X)` in the uncontracted state.
    pub belief: f64,
    pub gardenfors_flag: bool,
    pub frontier_flag: bool,
    /// Indices (into the same candidate sequence) of candidates strictly better than this one.
    pub dominated_by: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Better,
    Worse,
    Equal,
    Incomparable,
}

fn explanandum_prob(kc: &EpistemicState, e: &Event) -> Result<f64> {
    let p = kc.prob_of(e, None)?;
    if p <= 0.0 {
        return Err(Error::ImpossibleExplanandum);
    }
    Ok(p)
}

fn prior(kc: &EpistemicState, x: &Explanation) -> Result<f64> {
    let p = kc.prob_of(&x.conjuncts, x.mechanism())?;
    if p <= 0.0 {
        return Err(Error::ImpossibleExplanation);
    }
    Ok(p)
}

fn likelihood(kc: &EpistemicState, e: &Event, x: &Explanation) -> Result<f64> {
    kc.state_prob(e, &x.conjuncts, None, x.mechanism())
        .map_err(|err| match err {
            Error::NullConditioning => Error::ImpossibleExplanation,
            other => other,
        })
}

/// Explanatory power `Pr⁻(E | X) / Pr⁻(E)`, evaluated on the contracted state `kc`.
pub fn ep_ratio(kc: &EpistemicState, e: &Event, x: &Explanation) -> Result<f64> {
    let pe = explanandum_prob(kc, e)?;
    prior(kc, x)?;
    Ok(likelihood(kc, e, x)? / pe)
}

/// Difference measure `Pr⁻(E | X) - Pr⁻(E)` on the contracted state `kc`.
pub fn ep_diff(kc: &EpistemicState, e: &Event, x: &Explanation) -> Result<f64> {
    let pe = explanandum_prob(kc, e)?;
    prior(kc, x)?;
    Ok(likelihood(kc, e, x)? - pe)
}

/// `Pr⁻(X | E)` on the contracted state `kc`.
pub fn posterior(kc: &EpistemicState, e: &Event, x: &Explanation) -> Result<f64> {
    explanandum_prob(kc, e)?;
    kc.state_prob(&x.conjuncts, e, x.mechanism(), None)
}

/// `X` raises the probability of `E` once `E` is retracted, and `X` is not already
/// believed in `k`.
pub fn is_gardenfors_explanation(k: &EpistemicState, e: &Event, x: &Explanation) -> Result<bool> {
    k.check_observed(e)?;
    let kc = k.contract(e)?;
    let raises = ep_ratio(&kc, e, x)? > 1.0 + EPS_CMP;
    Ok(raises && k.prob_of(&x.conjuncts, x.mechanism())? < 1.0 - EPS_CMP)
}

/// Scores `x` against explanandum `e` observed in `k`.
pub fn score(
    k: &EpistemicState,
    e: &Event,
    x: &Explanation,
    eps: f64,
) -> Result<ScoredExplanation> {
    k.check_observed(e)?;
    let kc = k.contract(e)?;
    score_contracted(k, &kc, e, x, eps)
}

fn score_contracted(
    k: &EpistemicState,
    kc: &EpistemicState,
    e: &Event,
    x: &Explanation,
    eps: f64,
) -> Result<ScoredExplanation> {
    let pe = explanandum_prob(kc, e)?;
    let prior = prior(kc, x)?;
    let likelihood = likelihood(kc, e, x)?;
    let ep_ratio = likelihood / pe;
    let belief = k.prob_of(&x.conjuncts, x.mechanism())?;
    Ok(ScoredExplanation {
        explanation: x.clone(),
        explanandum: e.clone(),
        prior,
        ep_ratio,
        ep_diff: likelihood - pe,
        posterior: posterior(kc, e, x)?,
        likelihood,
        explanandum_prob: pe,
        belief,
        gardenfors_flag: ep_ratio > 1.0 + eps && belief < 1.0 - eps,
        frontier_flag: false,
        dominated_by: Vec::new(),
    })
}

fn cmp_component(a: f64, b: f64, eps: f64) -> Ordering {
    if (a - b).abs() <= eps {
        Ordering::Equal
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Compares on (explanatory power, prior) with the default tolerance.
pub fn pair_compare(a: &ScoredExplanation, b: &ScoredExplanation) -> Result<Comparison> {
    pair_compare_eps(a, b, EPS_CMP)
}

/// `Better` iff `a` is at least as good in both components and strictly better
/// (beyond `eps`) in one.
pub fn pair_compare_eps(
    a: &ScoredExplanation,
    b: &ScoredExplanation,
    eps: f64,
) -> Result<Comparison> {
    if a.explanandum != b.explanandum {
        return Err(Error::MismatchedExplanandum);
    }
    use Ordering::*;
    Ok(
        match (
            cmp_component(a.ep_ratio, b.ep_ratio, eps),
            cmp_component(a.prior, b.prior, eps),
        ) {
            (Equal, Equal) => Comparison::Equal,
            (Greater | Equal, Greater | Equal) => Comparison::Better,
            (Less | Equal, Less | Equal) => Comparison::Worse,
            _ => Comparison::Incomparable,
        },
    )
}

/// Marks Pareto-maximal candidates and fills `dominated_by`. Returns the indices of the
/// frontier in input order.
pub fn frontier(cands: &mut [ScoredExplanation], eps: f64) -> Result<Vec<usize>> {
    let n = cands.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && pair_compare_eps(&cands[j], &cands[i], eps)? == Comparison::Better {
                dominated[i].push(j);
            }
        }
    }
    let mut front = Vec::new();
    for (i, (c, d)) in cands.iter_mut().zip(dominated).enumerate() {
        c.frontier_flag = d.is_empty();
        c.dominated_by = d;
        if c.frontier_flag {
            front.push(i);
        }
    }
    Ok(front)
}

/// Scores the given candidates, computes the frontier and orders the result: frontier
/// first, each group by descending explanatory power and then descending prior.
/// Explanatory powers within `eps` of each other count as tied.
pub fn rank_candidates(
    k: &EpistemicState,
    e: &Event,
    candidates: &[Explanation],
    eps: f64,
) -> Result<Vec<ScoredExplanation>> {
    k.check_observed(e)?;
    let kc = k.contract(e)?;
    let mut scored = candidates
        .iter()
        .map(|x| score_contracted(k, &kc, e, x, eps))
        .collect::<Result<Vec<_>>>()?;
    frontier(&mut scored, eps)?;

    // group near-equal explanatory powers so the sort key is a total order
    let mut by_ep: Vec<usize> = (0..scored.len()).collect();
    by_ep.sort_by(|&a, &b| scored[b].ep_ratio.total_cmp(&scored[a].ep_ratio));
    let mut group = vec![0usize; scored.len()];
    let mut head: Option<f64> = None;
    let mut g = 0;
    for &i in &by_ep {
        let x = scored[i].ep_ratio;
        match head {
            Some(h) if h - x <= eps => {}
            Some(_) => {
                g += 1;
                head = Some(x);
            }
            None => head = Some(x),
        }
        group[i] = g;
    }

    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&scored[a], &scored[b]);
        sb.frontier_flag
            .cmp(&sa.frontier_flag)
            .then(group[a].cmp(&group[b]))
            .then(sb.prior.total_cmp(&sa.prior))
            .then(a.cmp(&b))
    });
    let mut position = vec![0; scored.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let mut out: Vec<ScoredExplanation> = order.iter().map(|&i| scored[i].clone()).collect();
    for s in &mut out {
        s.dominated_by = s.dominated_by.iter().map(|&j| position[j]).collect();
        s.dominated_by.sort_unstable();
    }
    Ok(out)
}

/// Enumerate, score and order every candidate for `e`.
pub fn rank_all(
    k: &EpistemicState,
    e: &Event,
    spec: &CandidateSpec,
) -> Result<Vec<ScoredExplanation>> {
    let candidates = enumerate(k, e, spec)?;
    rank_candidates(k, e, &candidates, spec.epsilon)
}

/// Full pairwise comparison matrix; entry `[i][j]` compares candidate `i` to `j`.
pub fn compare_matrix(cands: &[ScoredExplanation], eps: f64) -> Result<Vec<Vec<Comparison>>> {
    cands
        .iter()
        .map(|a| cands.iter().map(|b| pair_compare_eps(a, b, eps)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{CausalNetwork, NetworkBuilder};

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

    fn setup() -> (EpistemicState, Event, Explanation, Explanation) {
        let net = coin_bag();
        let rt = Event::named(&net, &[("R", "t")]).unwrap();
        let bh = Explanation::of(Event::named(&net, &[("C", "bh")]).unwrap());
        let bt = Explanation::of(Event::named(&net, &[("C", "bt")]).unwrap());
        (EpistemicState::single(net, rt.clone()).unwrap(), rt, bh, bt)
    }

    fn scored(ep: f64, prior: f64) -> ScoredExplanation {
        ScoredExplanation {
            explanation: Explanation::default(),
            explanandum: Event::certain(),
            prior,
            ep_ratio: ep,
            ep_diff: 0.0,
            posterior: ep * prior,
            likelihood: 0.0,
            explanandum_prob: 0.0,
            belief: 0.0,
            gardenfors_flag: false,
            frontier_flag: false,
            dominated_by: vec![],
        }
    }

    #[test]
    fn coin_bag_measures() {
        let (k, rt, bh, bt) = setup();
        let kc = k.contract(&rt).unwrap();
        assert!((ep_ratio(&kc, &rt, &bt).unwrap() - 0.9 / 0.108).abs() < 1e-9);
        assert!((ep_ratio(&kc, &rt, &bh).unwrap() - 0.1 / 0.108).abs() < 1e-9);
        assert!((ep_diff(&kc, &rt, &bt).unwrap() - 0.792).abs() < 1e-12);
        assert!((posterior(&kc, &rt, &bh).unwrap() - 11.0 / 12.0).abs() < 1e-12);
        assert!(is_gardenfors_explanation(&k, &rt, &bt).unwrap());
        assert!(!is_gardenfors_explanation(&k, &rt, &bh).unwrap());

        let a = score(&k, &rt, &bt, EPS_CMP).unwrap();
        let b = score(&k, &rt, &bh, EPS_CMP).unwrap();
        assert_eq!(pair_compare(&a, &b).unwrap(), Comparison::Incomparable);
        assert_eq!(pair_compare(&a, &a).unwrap(), Comparison::Equal);
    }

    #[test]
    fn impossible_inputs_have_distinct_errors() {
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
        let at = Explanation::of(Event::named(&net, &[("A", "t")]).unwrap());
        let bt = Event::named(&net, &[("B", "t")]).unwrap();
        let k = EpistemicState::single(net.clone(), Event::certain()).unwrap();
        assert_eq!(ep_ratio(&k, &bt, &at), Err(Error::ImpossibleExplanation));

        let dead = NetworkBuilder::new()
            .node("A", &["f", "t"], &[], vec![vec![0.5, 0.5]])
            .node(
                "B",
                &["f", "t"],
                &["A"],
                vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            )
            .build()
            .unwrap();
        let af = Explanation::of(Event::named(&dead, &[("A", "f")]).unwrap());
        let bt = Event::named(&dead, &[("B", "t")]).unwrap();
        let k = EpistemicState::single(dead, Event::certain()).unwrap();
        assert_eq!(ep_ratio(&k, &bt, &af), Err(Error::ImpossibleExplanandum));
    }

    #[test]
    fn pair_compare_cases() {
        let a = scored(2.0, 0.5);
        assert_eq!(
            pair_compare(&a, &scored(2.0, 0.4)).unwrap(),
            Comparison::Better
        );
        assert_eq!(
            pair_compare(&a, &scored(2.5, 0.6)).unwrap(),
            Comparison::Worse
        );
        assert_eq!(
            pair_compare(&a, &scored(2.5, 0.4)).unwrap(),
            Comparison::Incomparable
        );
        assert_eq!(
            pair_compare(&a, &scored(2.0 + 1e-12, 0.5)).unwrap(),
            Comparison::Equal
        );
        let mut other = scored(1.0, 1.0);
        other.explanandum = Event::named(&coin_bag(), &[("R", "t")]).unwrap();
        assert_eq!(pair_compare(&a, &other), Err(Error::MismatchedExplanandum));
    }

    #[test]
    fn singleton_frontier_under_total_dominance() {
        let mut c = vec![scored(1.0, 0.2), scored(3.0, 0.5), scored(2.0, 0.1)];
        assert_eq!(frontier(&mut c, EPS_CMP).unwrap(), vec![1]);
        assert_eq!(c[0].dominated_by, vec![1]);
        assert_eq!(c[2].dominated_by, vec![1]);
    }

    #[test]
    fn rank_all_orders_frontier_first() {
        let (k, rt, _, _) = setup();
        let ranked = rank_all(&k, &rt, &CandidateSpec::default()).unwrap();
        assert_eq!(ranked.len(), 2);
        assert!(ranked.iter().all(|s| s.frontier_flag));
        assert!(ranked[0].ep_ratio > ranked[1].ep_ratio);
        assert!((ranked[0].prior - 0.01).abs() < 1e-12);
        assert!((ranked[1].prior - 0.99).abs() < 1e-12);
    }
}
