//! Epistemic states: a prior over candidate causal structures plus observations.
//!
//! A world is a pair (assignment, structure) and carries probability
//! `weight(C) * Pr_C(w | O)`. Structure weights are taken as given and are not
//! updated by the observations; [`EpistemicState::likelihoods`] exposes `Pr_C(O)` so
//! callers can see how far an evidence-updated reading would differ.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::inference::{Engine, Event, EPS_CMP};
use crate::network::{supports, validate, CausalNetwork, MechanismFragment, Variable};

#[derive(Debug, Clone, PartialEq)]
pub struct Structure {
    pub network: Arc<CausalNetwork>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicState {
    structures: Vec<Structure>,
    observations: Event,
    engine: Engine,
}

impl EpistemicState {
    pub fn new(structures: Vec<(CausalNetwork, f64)>, observations: Event) -> Result<Self> {
        let structures = structures
            .into_iter()
            .map(|(n, w)| Structure {
                network: Arc::new(n),
                weight: w,
            })
            .collect();
        Self::from_structures(structures, observations)
    }

    /// A state with one known causal structure.
    pub fn single(net: CausalNetwork, observations: Event) -> Result<Self> {
        Self::new(vec![(net, 1.0)], observations)
    }

    pub fn from_structures(structures: Vec<Structure>, observations: Event) -> Result<Self> {
        let Some(first) = structures.first() else {
            return Err(Error::InvalidState("no causal structures".into()));
        };
        let universe = first.network.variables();
        let mut total = 0.0;
        for (i, s) in structures.iter().enumerate() {
            if !(s.weight.is_finite() && s.weight >= 0.0) {
                return Err(Error::InvalidState(format!(
                    "structure {i} has weight {}",
                    s.weight
                )));
            }
            total += s.weight;
            let violations = validate(&s.network);
            if !violations.is_empty() {
                return Err(Error::InvalidNetwork(violations));
            }
            if s.network.variables() != universe {
                return Err(Error::InvalidState(format!(
                    "structure {i} declares a different variable universe"
                )));
            }
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "structure weights sum to {total}, not 1"
            )));
        }
        for (&v, set) in observations.literals() {
            if v >= universe.len() {
                return Err(Error::VariableIndex(v));
            }
            if !set.is_singleton() {
                return Err(Error::InvalidState(format!(
                    "observation of `{}` is not a single value",
                    universe[v].name()
                )));
            }
        }
        let state = EpistemicState {
            structures,
            observations,
            engine: Engine::default(),
        };
        for (i, s) in state.structures.iter().enumerate() {
            if s.weight > 0.0 && state.engine.marginal(&s.network, &state.observations) <= 0.0 {
                return Err(Error::InvalidState(format!(
                    "structure {i} gives the observations probability zero"
                )));
            }
        }
        Ok(state)
    }

    /// Same state, answering queries with a different exact engine.
    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn structures(&self) -> &[Structure] {
        &self.structures
    }

    pub fn observations(&self) -> &Event {
        &self.observations
    }

    /// The network whose variables every structure shares.
    pub fn network(&self) -> &CausalNetwork {
        &self.structures[0].network
    }

    pub fn variables(&self) -> &[Variable] {
        self.network().variables()
    }

    /// `Pr_C(O)` for each structure.
    pub fn likelihoods(&self) -> Vec<f64> {
        self.structures
            .iter()
            .map(|s| self.engine.marginal(&s.network, &self.observations))
            .collect()
    }

    /// Structure weights re-weighted by the likelihood of the observations. Reported for
    /// comparison only; scoring uses the unconditioned weights.
    pub fn evidence_weights(&self) -> Vec<f64> {
        let raw: Vec<f64> = self
            .structures
            .iter()
            .zip(self.likelihoods())
            .map(|(s, l)| s.weight * l)
            .collect();
        let z: f64 = raw.iter().sum();
        raw.into_iter()
            .map(|x| if z > 0.0 { x / z } else { 0.0 })
            .collect()
    }

    /// `Pr(target ∧ mech | given ∧ given_mech)`.
    ///
    /// Mechanism fragments restrict the sum over structures to those that contain all
    /// of the fragment's edges; `None` imposes no restriction.
    pub fn state_prob(
        &self,
        target: &Event,
        given: &Event,
        mech: Option<&MechanismFragment>,
        given_mech: Option<&MechanismFragment>,
    ) -> Result<f64> {
        let (mut num, mut den) = (0.0, 0.0);
        for s in &self.structures {
            if s.weight <= 0.0 {
                continue;
            }
            let net = &*s.network;
            if let Some(m) = given_mech {
                if !supports(net, m)? {
                    continue;
                }
            }
            let p_obs = self.engine.marginal(net, &self.observations);
            let Some(given_obs) = given.and(&self.observations) else {
                continue;
            };
            let p_given = self.engine.marginal(net, &given_obs);
            if p_given <= 0.0 {
                continue;
            }
            den += s.weight * p_given / p_obs;
            if let Some(m) = mech {
                if !supports(net, m)? {
                    continue;
                }
            }
            if let Some(all) = target.and(&given_obs) {
                num += s.weight * self.engine.marginal(net, &all) / p_obs;
            }
        }
        if den <= 0.0 {
            return Err(Error::NullConditioning);
        }
        Ok(num / den)
    }

    /// Unconditional `Pr(target ∧ mech)`.
    pub fn prob_of(&self, target: &Event, mech: Option<&MechanismFragment>) -> Result<f64> {
        self.state_prob(target, &Event::certain(), mech, None)
    }

    /// Checks that every literal of `e` is among the observations.
    pub fn check_observed(&self, e: &Event) -> Result<()> {
        for (&v, set) in e.literals() {
            let name = || self.variables()[v].name().to_string();
            match self.observations.get(v) {
                None => return Err(Error::NotObserved(name())),
                Some(obs) if !obs.is_subset(*set) => {
                    return Err(Error::ContradictsObservation(name()))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// Retracts every literal of `e` from the observations. Literals on unobserved
    /// variables are ignored, so contracting by something not believed is the identity.
    pub fn contract(&self, e: &Event) -> Result<EpistemicState> {
        let mut removed = std::collections::BTreeSet::new();
        for (&v, set) in e.literals() {
            if let Some(obs) = self.observations.get(v) {
                if !obs.is_subset(*set) {
                    return Err(Error::ContradictsObservation(
                        self.variables()[v].name().to_string(),
                    ));
                }
                removed.insert(v);
            }
        }
        Ok(EpistemicState {
            structures: self.structures.clone(),
            observations: self.observations.without(&removed),
            engine: self.engine,
        })
    }

    /// `Pr(x ∧ mech) = 1` within tolerance.
    pub fn accepted(&self, x: &Event, mech: Option<&MechanismFragment>) -> bool {
        self.prob_of(x, mech)
            .map(|p| p >= 1.0 - EPS_CMP)
            .unwrap_or(false)
    }
}
