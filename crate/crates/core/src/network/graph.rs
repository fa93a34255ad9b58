//! Graph queries over the parent relation.

use std::collections::BTreeSet;

use super::{CausalNetwork, MarkovNetwork, MechanismFragment};
use crate::error::{Error, Result};

/// Proper ancestors of `v` (transitive closure of the parent relation, `v` excluded
/// unless it lies on a cycle).
pub fn ancestors(net: &CausalNetwork, v: usize) -> Result<BTreeSet<usize>> {
    net.check_index(v)?;
    Ok(closure(v, |u| net.parents(u).to_vec()))
}

/// Union of proper ancestors over `vs`. Members of `vs` may appear when one is an
/// ancestor of another.
pub fn ancestors_of_set(net: &CausalNetwork, vs: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for &v in vs {
        out.extend(ancestors(net, v)?);
    }
    Ok(out)
}

pub fn descendants_of_set(net: &CausalNetwork, vs: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for &v in vs {
        net.check_index(v)?;
        out.extend(closure(v, |u| net.children(u)));
    }
    Ok(out)
}

fn closure(start: usize, next: impl Fn(usize) -> Vec<usize>) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut stack = next(start);
    while let Some(u) = stack.pop() {
        if seen.insert(u) {
            stack.extend(next(u));
        }
    }
    seen
}

/// Union of all edges lying on a directed path from some source to some sink.
///
/// Every source must be a proper ancestor of at least one sink.
pub fn paths_to(
    net: &CausalNetwork,
    sources: &BTreeSet<usize>,
    sinks: &BTreeSet<usize>,
) -> Result<MechanismFragment> {
    for &s in sinks {
        net.check_index(s)?;
    }
    let upstream = ancestors_of_set(net, sinks)?;
    for &s in sources {
        net.check_index(s)?;
        if !upstream.contains(&s) {
            return Err(Error::NotAncestor {
                source_var: net.name(s).to_string(),
            });
        }
    }
    let mut from_sources = descendants_of_set(net, sources)?;
    from_sources.extend(sources.iter().copied());
    let mut to_sinks = upstream;
    to_sinks.extend(sinks.iter().copied());
    MechanismFragment::new(
        net.edges()
            .into_iter()
            .filter(|(p, c)| from_sources.contains(p) && to_sinks.contains(c)),
    )
}

/// Drops edge directions and marries every pair of co-parents.
pub fn moralize(net: &CausalNetwork) -> MarkovNetwork {
    let mut edges: BTreeSet<(usize, usize)> = net.edges().into_iter().collect();
    for c in 0..net.len() {
        let ps = net.parents(c);
        for (i, &a) in ps.iter().enumerate() {
            for &b in &ps[i + 1..] {
                edges.insert((a, b));
            }
        }
    }
    MarkovNetwork::new(net.variables().to_vec(), edges)
}

/// True iff every fragment edge is a directed edge of `net`.
pub fn supports(net: &CausalNetwork, frag: &MechanismFragment) -> Result<bool> {
    for &(a, b) in frag.edges() {
        net.check_index(a)?;
        net.check_index(b)?;
    }
    Ok(frag
        .edges()
        .iter()
        .all(|&(a, b)| net.parents(b).contains(&a)))
}
