//! Dense factors over discrete variables and bucket elimination.

use std::collections::BTreeSet;

use crate::network::CausalNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Marginalize {
    Sum,
    Max,
}

/// Table over `scope` (ascending variable indices), last scope variable varying fastest.
#[derive(Debug, Clone)]
pub(crate) struct Factor {
    scope: Vec<usize>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

impl Factor {
    fn scalar(x: f64) -> Self {
        Factor {
            scope: Vec::new(),
            cards: Vec::new(),
            values: vec![x],
        }
    }

    /// CPT of `v` with entries for disallowed values of `v` zeroed.
    pub(crate) fn from_cpt(net: &CausalNetwork, v: usize, allowed: u64) -> Self {
        let mut scope: Vec<usize> = net.parents(v).to_vec();
        scope.push(v);
        scope.sort_unstable();
        let cards: Vec<usize> = scope.iter().map(|&u| net.cardinality(u)).collect();
        let size = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut world = vec![0; net.len()];
        let mut digits = vec![0; scope.len()];
        for _ in 0..size {
            for (&u, &d) in scope.iter().zip(&digits) {
                world[u] = d;
            }
            let x = world[v];
            values.push(if x < 64 && allowed & (1 << x) != 0 {
                net.entry(v, &world)
            } else {
                0.0
            });
            increment(&mut digits, &cards);
        }
        Factor {
            scope,
            cards,
            values,
        }
    }

    pub(crate) fn scope(&self) -> &[usize] {
        &self.scope
    }

    fn strides_in(&self, scope: &[usize]) -> Vec<usize> {
        // stride of each variable of `scope` inside self (0 if absent)
        let mut own = vec![0; self.scope.len()];
        let mut s = 1;
        for i in (0..self.scope.len()).rev() {
            own[i] = s;
            s *= self.cards[i];
        }
        scope
            .iter()
            .map(|u| self.scope.iter().position(|x| x == u).map_or(0, |i| own[i]))
            .collect()
    }

    pub(crate) fn product(&self, other: &Factor) -> Factor {
        let mut pairs: Vec<(usize, usize)> = self
            .scope
            .iter()
            .copied()
            .zip(self.cards.iter().copied())
            .chain(other.scope.iter().copied().zip(other.cards.iter().copied()))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let scope: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let cards: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let sa = self.strides_in(&scope);
        let sb = other.strides_in(&scope);
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0; scope.len()];
        let (mut ia, mut ib) = (0usize, 0usize);
        for _ in 0..size {
            values.push(self.values[ia] * other.values[ib]);
            // odometer step, keeping both source offsets in sync
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                ia += sa[i];
                ib += sb[i];
                if digits[i] < cards[i] {
                    break;
                }
                ia -= sa[i] * cards[i];
                ib -= sb[i] * cards[i];
                digits[i] = 0;
            }
        }
        Factor {
            scope,
            cards,
            values,
        }
    }

    pub(crate) fn eliminate(&self, var: usize, op: Marginalize) -> Factor {
        let Some(pos) = self.scope.iter().position(|&u| u == var) else {
            return self.clone();
        };
        let card = self.cards[pos];
        let inner: usize = self.cards[pos + 1..].iter().product();
        let outer: usize = self.cards[..pos].iter().product();
        let mut values = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            for i in 0..inner {
                let base = o * card * inner + i;
                let it = (0..card).map(|k| self.values[base + k * inner]);
                values.push(match op {
                    Marginalize::Sum => it.sum(),
                    Marginalize::Max => it.fold(0.0, f64::max),
                });
            }
        }
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        cards.remove(pos);
        Factor {
            scope,
            cards,
            values,
        }
    }
}

fn increment(digits: &mut [usize], cards: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < cards[i] {
            return;
        }
        digits[i] = 0;
    }
}

/// Eliminates every variable, choosing at each step the variable with the fewest
/// neighbours in the current interaction graph (lowest index on ties), and returns
/// the resulting scalar.
pub(crate) fn eliminate_all(mut factors: Vec<Factor>, op: Marginalize) -> f64 {
    let mut remaining: BTreeSet<usize> = factors
        .iter()
        .flat_map(|f| f.scope().iter().copied())
        .collect();
    while !remaining.is_empty() {
        let var = *remaining
            .iter()
            .min_by_key(|&&v| {
                let nbrs: BTreeSet<usize> = factors
                    .iter()
                    .filter(|f| f.scope().contains(&v))
                    .flat_map(|f| f.scope().iter().copied())
                    .collect();
                nbrs.len()
            })
            .expect("nonempty");
        remaining.remove(&var);
        let (bucket, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.scope().contains(&var));
        factors = rest;
        let merged = bucket
            .iter()
            .skip(1)
            .fold(bucket[0].clone(), |acc, f| acc.product(f));
        factors.push(merged.eliminate(var, op));
    }
    factors
        .iter()
        .fold(Factor::scalar(1.0), |acc, f| acc.product(f))
        .values[0]
}
