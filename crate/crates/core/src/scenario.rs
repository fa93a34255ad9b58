//! Built-in worked examples. Each scenario builds its networks from the embedded
//! fixtures, runs the pipeline, and checks the facts it is meant to exhibit.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::belief::{to_belief_graph, validate_belief_explanation, ExternalCause};
use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::explain::{is_admissible, CandidateSpec, Explanation, Inadmissible};
use crate::format::parse_network;
use crate::inference::{joint, mpe, Assignment, Event, EPS_CMP};
use crate::network::{CausalNetwork, MechanismFragment, Variable};
use crate::rank::{pair_compare, rank_all, rank_candidates, Comparison, ScoredExplanation};
use crate::report::{build_report, OutputFormat, Report};

/// Embedded fixture networks, by file stem.
pub const FIXTURES: &[(&str, &str)] = &[
    ("coin_bag", include_str!("../fixtures/coin_bag.toml")),
    ("four_coin", include_str!("../fixtures/four_coin.toml")),
    ("vacation", include_str!("../fixtures/vacation.toml")),
    (
        "vacation_holidays",
        include_str!("../fixtures/vacation_holidays.toml"),
    ),
    ("disease", include_str!("../fixtures/disease.toml")),
    (
        "disease_split",
        include_str!("../fixtures/disease_split.toml"),
    ),
    (
        "rain_wind_lawn",
        include_str!("../fixtures/rain_wind_lawn.toml"),
    ),
    (
        "asbestos_edge",
        include_str!("../fixtures/asbestos_edge.toml"),
    ),
    (
        "asbestos_none",
        include_str!("../fixtures/asbestos_none.toml"),
    ),
    (
        "storm_barometer",
        include_str!("../fixtures/storm_barometer.toml"),
    ),
    (
        "ep_contrast_high",
        include_str!("../fixtures/ep_contrast_high.toml"),
    ),
    (
        "ep_contrast_low",
        include_str!("../fixtures/ep_contrast_low.toml"),
    ),
];

pub const SCENARIOS: &[&str] = &[
    "coin-bag",
    "four-coin",
    "vacation-refinement",
    "rain-wind-lawn",
    "asbestos-mixture",
    "storm-barometer",
    "ep-contrast",
];

pub fn fixture(stem: &str) -> Result<CausalNetwork> {
    let (_, text) = FIXTURES
        .iter()
        .find(|(s, _)| *s == stem)
        .ok_or_else(|| Error::UnknownScenario(stem.to_string()))?;
    parse_network(text)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub name: String,
    pub reports: Vec<(String, Report)>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl ScenarioOutcome {
    fn new(name: &str) -> Self {
        ScenarioOutcome {
            name: name.to_string(),
            reports: Vec::new(),
            notes: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn near(&mut self, description: &str, got: f64, want: f64, tol: f64) {
        self.checks.push(Check {
            description: description.to_string(),
            passed: (got - want).abs() <= tol,
            detail: format!("got {got:.12}, want {want:.12} ± {tol:e}"),
        });
    }

    fn holds(&mut self, description: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            description: description.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => serde_json::to_string_pretty(self).expect("serializable"),
            OutputFormat::Table => {
                let mut out = format!("== scenario {} ==\n", self.name);
                for (label, r) in &self.reports {
                    let _ = writeln!(out, "-- {label}");
                    out.push_str(&r.to_table());
                }
                for n in &self.notes {
                    let _ = writeln!(out, "{n}");
                }
                for c in &self.checks {
                    let _ = writeln!(
                        out,
                        "[{}] {} ({})",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.description,
                        c.detail
                    );
                }
                out
            }
        }
    }
}

fn find<'a>(
    ranked: &'a [ScoredExplanation],
    vars: &[Variable],
    conjuncts: &str,
) -> Result<&'a ScoredExplanation> {
    ranked
        .iter()
        .find(|s| s.explanation.conjuncts.describe(vars).join(" & ") == conjuncts)
        .ok_or_else(|| Error::InvalidCase(format!("candidate `{conjuncts}` not enumerated")))
}

pub fn run_scenario(name: &str) -> Result<ScenarioOutcome> {
    match name {
        "coin-bag" => coin_bag(),
        "four-coin" => four_coin(),
        "vacation-refinement" => vacation_refinement(),
        "rain-wind-lawn" => rain_wind_lawn(),
        "asbestos-mixture" => asbestos_mixture(),
        "storm-barometer" => storm_barometer(),
        "ep-contrast" => ep_contrast(),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

pub fn run_all() -> Result<Vec<ScenarioOutcome>> {
    SCENARIOS.iter().map(|n| run_scenario(n)).collect()
}

fn coin_bag() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("coin-bag");
    let net = fixture("coin_bag")?;
    let rt = Event::named(&net, &[("R", "t")])?;
    let k = EpistemicState::single(net.clone(), rt.clone())?;
    let ranked = rank_all(&k, &rt, &CandidateSpec::default())?;
    out.reports
        .push(("R=t".into(), build_report(&k, &rt, &ranked)?));

    let vars = k.variables();
    let bh = find(&ranked, vars, "C=bh")?;
    let bt = find(&ranked, vars, "C=bt")?;
    out.holds(
        "exactly two candidates",
        ranked.len() == 2,
        format!("{}", ranked.len()),
    );
    out.near("Pr-(R=t)", bh.explanandum_prob, 0.108, 1e-9);
    out.near("posterior(C=bh)", bh.posterior, 11.0 / 12.0, 1e-9);
    out.near("EP(C=bt)", bt.ep_ratio, 0.9 / 0.108, 1e-6);
    out.near("EP(C=bh)", bh.ep_ratio, 0.1 / 0.108, 1e-6);
    let cmp = pair_compare(bt, bh)?;
    out.holds(
        "C=bt vs C=bh incomparable",
        cmp == Comparison::Incomparable,
        format!("{cmp:?}"),
    );
    out.holds(
        "C=bt raises R=t, C=bh does not",
        bt.gardenfors_flag && !bh.gardenfors_flag,
        format!("{} / {}", bt.gardenfors_flag, bh.gardenfors_flag),
    );
    let (w, p) = mpe(&net, &rt)?;
    let want = Assignment::named(&net, &[("C", "bh"), ("R", "t")])?;
    out.holds(
        "MPE world is (C=bh, R=t)",
        w == want,
        w.describe(vars).join(", "),
    );
    out.near("MPE posterior", p, 11.0 / 12.0, 1e-9);
    Ok(out)
}

fn four_coin() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("four-coin");
    let net = fixture("four_coin")?;
    let heads = Event::named(&net, &[("T1", "h"), ("T2", "h"), ("T3", "h")])?;
    let k = EpistemicState::single(net, heads.clone())?;
    let spec = CandidateSpec {
        max_conjuncts: 1,
        allow_value_sets: true,
        ..Default::default()
    };
    let ranked = rank_all(&k, &heads, &spec)?;
    out.reports
        .push(("three heads".into(), build_report(&k, &heads, &ranked)?));

    let vars = k.variables();
    let c1 = find(&ranked, vars, "C=C1")?;
    let c2 = find(&ranked, vars, "C=C2")?;
    let x1 = find(&ranked, vars, "C in {C1,C2}")?;
    let x2 = find(&ranked, vars, "C in {C1,C2,C3}")?;
    out.near(
        "EP(C in {C1,C2}) = EP(C=C1)",
        x1.ep_ratio,
        c1.ep_ratio,
        1e-9,
    );
    out.near("EP(C in {C1,C2})", x1.ep_ratio, 0.729 / 0.365, 1e-9);
    out.near("prior(C in {C1,C2})", x1.prior, 0.5, 1e-12);
    out.near("prior(C=C1)", c1.prior, 0.25, 1e-12);
    for (label, single) in [("C=C1", c1), ("C=C2", c2)] {
        let cmp = pair_compare(x1, single)?;
        out.holds(
            &format!("C in {{C1,C2}} better than {label}"),
            cmp == Comparison::Better,
            format!("{cmp:?}"),
        );
    }
    let cmp = pair_compare(x1, x2)?;
    out.holds(
        "C in {C1,C2} vs C in {C1,C2,C3} incomparable",
        cmp == Comparison::Incomparable,
        format!("{cmp:?}"),
    );
    out.near("posterior(C in {C1,C2})", x1.posterior, 0.99863, 1e-5);
    out.near("posterior(C in {C1,C2,C3})", x2.posterior, 0.99932, 1e-5);
    out.holds(
        "product prefers the three-coin disjunction",
        x2.posterior > x1.posterior,
        format!("{:.6} > {:.6}", x2.posterior, x1.posterior),
    );
    Ok(out)
}

fn mpe_value(net: &CausalNetwork, evidence: &Event, var: &str) -> Result<(String, f64)> {
    let (w, p) = mpe(net, evidence)?;
    let v = net.require(var)?;
    Ok((net.variable(v).values()[w.values()[v]].clone(), p))
}

fn vacation_refinement() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("vacation-refinement");

    let base = fixture("vacation")?;
    let s = Event::named(&base, &[("S", "present")])?;
    let (d, p) = mpe_value(&base, &s, "D")?;
    out.notes.push(format!(
        "before refinement: MPE has D={d}, posterior {p:.6}"
    ));
    out.holds("MPE before refinement contains d1", d == "d1", d.clone());
    out.near("MPE posterior before refinement", p, 0.8, 1e-9);

    let hol = fixture("vacation_holidays")?;
    let s = Event::named(&hol, &[("S", "present")])?;
    let (d, p) = mpe_value(&hol, &s, "D")?;
    out.notes
        .push(format!("with holidays: MPE has D={d}, posterior {p:.6}"));
    out.holds("MPE after refinement contains d2", d == "d2", d.clone());
    out.near("MPE posterior after refinement", p, 0.2, 1e-9);
    let ps = joint_marginal(&hol, &s)?;
    let mut worst = 0.0f64;
    for i in 1..=8 {
        let h = format!("h{i}");
        let w = Assignment::named(&hol, &[("D", "d1"), ("S", "present"), ("H", &h)])?;
        worst = worst.max((joint(&hol, &w)? / ps - 0.1).abs());
    }
    out.near("every (d1, h_i) world has posterior 0.1", worst, 0.0, 1e-9);

    let whole = fixture("disease")?;
    let s = Event::named(&whole, &[("S", "present")])?;
    let (d, p) = mpe_value(&whole, &s, "D")?;
    out.holds(
        "before splitting d1, MPE contains d1",
        d == "d1",
        format!("{d} ({p:.3})"),
    );
    let split = fixture("disease_split")?;
    let s = Event::named(&split, &[("S", "present")])?;
    let (d, p) = mpe_value(&split, &s, "D")?;
    out.notes.push(format!(
        "after splitting d1: MPE has D={d}, posterior {p:.6}"
    ));
    out.holds("after splitting d1, MPE contains d2", d == "d2", d.clone());
    out.near("posterior of the d2 world", p, 0.3, 1e-9);
    Ok(out)
}

fn joint_marginal(net: &CausalNetwork, e: &Event) -> Result<f64> {
    crate::inference::prob_ve(net, e, &Event::certain())
}

fn rain_wind_lawn() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("rain-wind-lawn");
    let net = fixture("rain_wind_lawn")?;
    let wet = Event::named(&net, &[("Wet", "t")])?;
    let k = EpistemicState::single(net, wet.clone())?;
    let ranked = rank_all(&k, &wet, &CandidateSpec::default())?;
    out.reports
        .push(("Wet=t".into(), build_report(&k, &wet, &ranked)?));

    let vars = k.variables();
    let rain = find(&ranked, vars, "Rain=t")?;
    let both = find(&ranked, vars, "Rain=t & Wind=t")?;
    let cmp = pair_compare(both, rain)?;
    out.holds(
        "rain and wind vs rain incomparable",
        cmp == Comparison::Incomparable,
        format!("{cmp:?}"),
    );
    out.holds(
        "both on the frontier",
        rain.frontier_flag && both.frontier_flag,
        format!("{} / {}", rain.frontier_flag, both.frontier_flag),
    );
    out.holds(
        "adding wind raises explanatory power and lowers the prior",
        both.ep_ratio > rain.ep_ratio && both.prior < rain.prior,
        format!(
            "EP {:.4} vs {:.4}, prior {:.4} vs {:.4}",
            both.ep_ratio, rain.ep_ratio, both.prior, rain.prior
        ),
    );
    out.holds(
        "the product always prefers rain alone",
        rain.posterior > both.posterior,
        format!("{:.4} > {:.4}", rain.posterior, both.posterior),
    );
    Ok(out)
}

fn asbestos_mixture() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("asbestos-mixture");
    let edge = fixture("asbestos_edge")?;
    let none = fixture("asbestos_none")?;
    let cancer = Event::named(&edge, &[("Cancer", "t")])?;
    let k = EpistemicState::new(vec![(edge.clone(), 0.5), (none, 0.5)], cancer.clone())?;
    let kc = k.contract(&cancer)?;
    out.near(
        "Pr-(Cancer=t) over the mixture",
        kc.prob_of(&cancer, None)?,
        0.19,
        1e-9,
    );

    let ranked = rank_all(&k, &cancer, &CandidateSpec::default())?;
    out.reports
        .push(("enumerated".into(), build_report(&k, &cancer, &ranked)?));

    let a = edge.require("Asbestos")?;
    let c = edge.require("Cancer")?;
    let exposed = Event::named(&edge, &[("Asbestos", "t")])?;
    let mechanism = Explanation::new(Some(MechanismFragment::new([(a, c)])?), exposed.clone());
    let bare = Explanation::of(exposed);
    let pair = rank_candidates(&k, &cancer, &[mechanism.clone(), bare.clone()], EPS_CMP)?;
    out.reports.push((
        "mechanism vs bare fact".into(),
        build_report(&k, &cancer, &pair)?,
    ));
    let find_expl = |x: &Explanation| pair.iter().find(|s| &s.explanation == x).expect("scored");
    let (m, b) = (find_expl(&mechanism), find_expl(&bare));
    out.near("EP(mechanism ∧ Asbestos=t)", m.ep_ratio, 0.7 / 0.19, 1e-9);
    out.near("EP(Asbestos=t)", b.ep_ratio, 0.4 / 0.19, 1e-9);
    out.near("prior(mechanism ∧ Asbestos=t)", m.prior, 0.15, 1e-12);
    out.near("prior(Asbestos=t)", b.prior, 0.3, 1e-12);
    out.holds(
        "mechanism conjunct: higher EP, lower prior",
        m.ep_ratio > b.ep_ratio && m.prior < b.prior,
        String::new(),
    );
    let cmp = pair_compare(m, b)?;
    out.holds(
        "incomparable",
        cmp == Comparison::Incomparable,
        format!("{cmp:?}"),
    );
    let adm = is_admissible(&k, &cancer, &mechanism)?;
    out.holds(
        "mechanism candidate is admissible",
        adm.is_admissible(),
        format!("{:?}", adm.reason),
    );
    let adm = is_admissible(&k, &cancer, &bare)?;
    out.notes.push(format!(
        "bare fact admissibility: {}",
        adm.reason
            .map_or("admissible".to_string(), |r| r.to_string())
    ));
    Ok(out)
}

fn storm_barometer() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("storm-barometer");
    let net = fixture("storm_barometer")?;
    let storm = net.require("Storm")?;
    let baro = net.require("Barometer")?;
    let reading = ExternalCause::new("barometer-reading", baro);
    let sighting = ExternalCause::new("storm-sighting", storm);
    let bg = to_belief_graph(&net, &[reading.clone(), sighting.clone()])?;
    let want: BTreeSet<(usize, usize)> = [(storm.min(baro), storm.max(baro))].into();
    out.holds(
        "belief graph is Storm - Barometer",
        bg.markov.edges() == &want,
        format!("{:?}", bg.markov.edges()),
    );

    let up = validate_belief_explanation(&bg, &[(baro, storm)], std::slice::from_ref(&reading))?;
    out.holds(
        "belief in the reading explains belief in the storm",
        up.is_valid(),
        format!("{:?}", up.defects),
    );
    let down = validate_belief_explanation(&bg, &[(storm, baro)], &[sighting])?;
    out.holds(
        "belief in the storm explains belief in the reading",
        down.is_valid(),
        format!("{:?}", down.defects),
    );
    let unrooted = validate_belief_explanation(&bg, &[(storm, baro)], &[reading])?;
    out.holds(
        "an unrooted orientation is rejected",
        !unrooted.is_valid(),
        format!("{:?}", unrooted.defects),
    );

    let obs = Event::named(&net, &[("Storm", "yes"), ("Barometer", "down")])?;
    let e = Event::named(&net, &[("Storm", "yes")])?;
    let k = EpistemicState::single(net.clone(), obs)?;
    let x = Explanation::of(Event::named(&net, &[("Barometer", "down")])?);
    let adm = is_admissible(&k, &e, &x)?;
    out.holds(
        "causally, the reading does not explain the storm",
        adm.reason == Some(Inadmissible::NotPrecedent("Barometer".into())),
        format!("{:?}", adm.reason),
    );
    Ok(out)
}

fn ep_contrast() -> Result<ScenarioOutcome> {
    let mut out = ScenarioOutcome::new("ep-contrast");
    let mut scored = Vec::new();
    for (stem, before, after) in [
        ("ep_contrast_high", 0.500001, 0.51),
        ("ep_contrast_low", 0.000001, 0.01),
    ] {
        let net = fixture(stem)?;
        let e = Event::named(&net, &[("Effect", "t")])?;
        let x = Explanation::of(Event::named(&net, &[("Cause", "t")])?);
        let k = EpistemicState::single(net, e.clone())?;
        let ranked = rank_candidates(&k, &e, std::slice::from_ref(&x), EPS_CMP)?;
        out.reports
            .push((stem.into(), build_report(&k, &e, &ranked)?));
        let s = ranked.into_iter().next().expect("one candidate");
        out.near(
            &format!("{stem}: Pr-(E)"),
            s.explanandum_prob,
            before,
            1e-12,
        );
        out.near(&format!("{stem}: Pr-(E | X)"), s.likelihood, after, 1e-12);
        scored.push(s);
    }
    let (hi, lo) = (&scored[0], &scored[1]);
    out.near("difference measures agree", hi.ep_diff, lo.ep_diff, 1e-6);
    out.near("difference measure", hi.ep_diff, 0.009999, 1e-9);
    let factor = lo.ep_ratio / hi.ep_ratio;
    out.holds(
        "ratio measures differ by more than 9000x",
        factor > 9000.0,
        format!("{:.4} vs {:.4} (x{factor:.1})", hi.ep_ratio, lo.ep_ratio),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_passes() {
        for name in SCENARIOS {
            let o = run_scenario(name).unwrap();
            assert!(o.passed(), "{}", o.render(OutputFormat::Table));
        }
    }

    #[test]
    fn unknown_scenario() {
        assert_eq!(
            run_scenario("nope").unwrap_err(),
            Error::UnknownScenario("nope".into())
        );
    }

    #[test]
    fn fixtures_parse() {
        for (stem, _) in FIXTURES {
            fixture(stem).unwrap();
        }
    }
}
