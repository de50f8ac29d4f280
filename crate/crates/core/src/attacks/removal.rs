use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::credit::CreditInstance;
use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::reliability::ReliabilityProfile;
use crate::shapley::shapley_closed;
use crate::{check_player, Player, PlayerSet, TOLERANCE};

use super::{pairwise_exempt_set, AttackPlan, AttackProblem, CostModel, PlanOutcome, BUDGET_SLACK};

/// Cap on the players an exhaustive removal search ranges over.
pub const MAX_REMOVAL_CANDIDATES: usize = 24;

/// Which removal subsets to try.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalTrials {
    /// Every subset of the other players.
    Exhaustive,
    /// `count` subsets, each player included with probability 1/2.
    Random { count: usize, seed: u64 },
}

/// A removal that lowered the target's value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub removed: PlayerSet,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoBenefitVerdict {
    pub passed: bool,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

/// Checks that removing other players never lowers `Sh(x)` (by more than
/// `1e-9`) in a centrality or full credit game.
///
/// The guarantee holds for NC1, NC3 and full credit, whose values are
/// coverage functions. NC2 with `k >= 2` is not: two players can jointly
/// push a neighbor over the threshold, and removing one of them can then
/// lower the other's value. The check reports such counterexamples.
pub fn removal_no_benefit_check(
    spec: &GameSpec,
    p: &ReliabilityProfile,
    x: Player,
    trials: RemovalTrials,
) -> Result<NoBenefitVerdict> {
    match spec {
        GameSpec::Fo(_) => {
            return Err(Error::domain(
                "removal can pay off in the full obligation game; use the exhaustive FO search",
            ))
        }
        GameSpec::Table(_) => return Err(Error::domain("no removal guarantee for an explicit table")),
        _ => {}
    }
    check_player(spec.n(), x)?;
    let before = shapley_closed(spec, p, x)?;
    let others: Vec<Player> = (1..=spec.n()).filter(|&j| j != x).collect();

    let masks: Box<dyn Iterator<Item = u64>> = match trials {
        RemovalTrials::Exhaustive => {
            Error::check_cap("removal candidates", others.len(), MAX_REMOVAL_CANDIDATES)?;
            Box::new(0..1u64 << others.len())
        }
        RemovalTrials::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = others.len();
            Box::new((0..count).map(move |_| (0..m).fold(0u64, |acc, i| acc | ((rng.random_bool(0.5) as u64) << i))))
        }
    };

    let mut checked = 0;
    for mask in masks {
        checked += 1;
        let removed: PlayerSet = (0..others.len()).filter(|i| mask >> i & 1 == 1).map(|i| others[i]).collect();
        let mut q = p.clone();
        for &j in &removed {
            q.set(j, 0.0);
        }
        let after = shapley_closed(spec, &q, x)?;
        if after < before - TOLERANCE {
            return Ok(NoBenefitVerdict {
                passed: false,
                checked,
                counterexample: Some(Counterexample { removed, before, after }),
            });
        }
    }
    Ok(NoBenefitVerdict {
        passed: true,
        checked,
        counterexample: None,
    })
}

/// Exact removal attack on the full obligation game: the best subset of
/// `x`'s coauthors to remove within budget, by exhaustive search. Ties prefer fewer removals,
/// then the lexicographically smallest set.
pub fn fo_removal_exhaustive(ci: &CreditInstance, costs: &CostModel, budget: f64, x: Player) -> Result<AttackPlan> {
    fo_removal_search(ci, costs, budget, x, &PlayerSet::from([x]))
}

/// Exhaustive removal search for any game the closed forms cover. Only
/// players that can influence `Sh(x)` are tried. Same tie-breaking as
/// [`fo_removal_exhaustive`].
pub(crate) fn removal_search(problem: &AttackProblem) -> Result<AttackPlan> {
    let x = problem.target;
    let costs = &problem.costs;
    let reach = pairwise_exempt_set(&problem.spec, x)?;
    let cand: Vec<Player> = reach.into_iter().filter(|j| !problem.exempt.contains(j)).collect();
    Error::check_cap("removal candidates", cand.len(), MAX_REMOVAL_CANDIDATES)?;
    let base = costs.baseline();
    let mut best: Option<(f64, Vec<Player>, f64)> = None;
    for mask in 0..1u64 << cand.len() {
        let set: Vec<Player> = (0..cand.len()).filter(|i| mask >> i & 1 == 1).map(|i| cand[i]).collect();
        let cost: f64 = set.iter().map(|&j| costs.removal_cost(j)).sum();
        if cost > problem.budget + BUDGET_SLACK {
            continue;
        }
        let mut q = base.clone();
        for &j in &set {
            q.set(j, 0.0);
        }
        let value = shapley_closed(&problem.spec, &q, x)?;
        if best.as_ref().is_none_or(|(bv, bset, _)| better(value, &set, *bv, bset)) {
            best = Some((value, set, cost));
        }
    }
    let (achieved, removed, total_cost) = best.expect("the empty removal is always feasible");
    Ok(AttackPlan {
        total_cost,
        unspent: (problem.budget - total_cost).max(0.0),
        shapley_before: shapley_closed(&problem.spec, &base, x)?,
        achieved,
        targeting_order: removed.clone(),
        outcome: PlanOutcome::Removed(removed.into_iter().collect()),
        oracle_verified_only: false,
    })
}

/// Lower value wins; near-ties prefer fewer removals, then the
/// lexicographically smaller set.
fn better(value: f64, set: &[Player], best_value: f64, best_set: &[Player]) -> bool {
    if value < best_value - 1e-12 {
        true
    } else if value > best_value + 1e-12 {
        false
    } else {
        (set.len(), set) < (best_set.len(), best_set)
    }
}

pub(crate) fn fo_removal_search(
    ci: &CreditInstance,
    costs: &CostModel,
    budget: f64,
    x: Player,
    exempt: &PlayerSet,
) -> Result<AttackPlan> {
    check_player(ci.n(), x)?;
    if costs.n() != ci.n() {
        return Err(Error::domain("cost model and instance sizes differ"));
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::domain(format!("budget must be nonnegative, got {budget}")));
    }
    let cand: Vec<Player> = ci.coauthors(x).into_iter().filter(|j| !exempt.contains(j)).collect();
    Error::check_cap("removable coauthors", cand.len(), MAX_REMOVAL_CANDIDATES)?;

    let base = costs.baseline();
    // Each paper of x as (coauthor bits, its term at baseline).
    let papers: Vec<(u64, f64)> = ci
        .papers_of(x)
        .map(|paper| {
            let bits = cand
                .iter()
                .enumerate()
                .filter(|(_, j)| paper.authors.contains(j))
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            let live: f64 = paper.authors.iter().map(|&a| base.get(a)).product();
            (bits, paper.score / paper.authors.len() as f64 * live)
        })
        .collect();

    let members = |mask: u64| -> Vec<Player> { (0..cand.len()).filter(|i| mask >> i & 1 == 1).map(|i| cand[i]).collect() };
    let mut best: Option<(f64, Vec<Player>, f64)> = None;
    for mask in 0..1u64 << cand.len() {
        let cost: f64 = (0..cand.len()).filter(|i| mask >> i & 1 == 1).map(|i| costs.removal_cost(cand[i])).sum();
        if cost > budget + BUDGET_SLACK {
            continue;
        }
        let value: f64 = papers.iter().filter(|(bits, _)| bits & mask == 0).map(|(_, v)| v).sum();
        let set = members(mask);
        if best.as_ref().is_none_or(|(bv, bset, _)| better(value, &set, *bv, bset)) {
            best = Some((value, set, cost));
        }
    }
    let (_, removed, total_cost) = best.expect("the empty removal is always feasible");

    let spec = GameSpec::Fo(ci.clone());
    let mut after = base.clone();
    for &j in &removed {
        after.set(j, 0.0);
    }
    Ok(AttackPlan {
        total_cost,
        unspent: (budget - total_cost).max(0.0),
        shapley_before: shapley_closed(&spec, &base, x)?,
        achieved: shapley_closed(&spec, &after, x)?,
        targeting_order: removed.clone(),
        outcome: PlanOutcome::Removed(removed.into_iter().collect()),
        oracle_verified_only: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credit::Paper;
    use crate::graph::Graph;

    fn paper(a: &[Player], s: f64) -> Paper {
        Paper {
            authors: a.to_vec(),
            score: s,
        }
    }

    #[test]
    fn removing_a_coauthor_helps_in_full_credit() {
        let ci = CreditInstance::new(2, vec![paper(&[1, 2], 2.0)]).unwrap();
        let spec = GameSpec::Fc(ci);
        let p = ReliabilityProfile::new(vec![1.0, 0.7]).unwrap();
        let before = shapley_closed(&spec, &p, 1).unwrap();
        let after = shapley_closed(&spec, &p.clone().with(2, 0.0), 1).unwrap();
        assert!(after > before);
        let v = removal_no_benefit_check(&spec, &p, 1, RemovalTrials::Exhaustive).unwrap();
        assert!(v.passed);
        assert_eq!(v.checked, 2);
    }

    #[test]
    fn star_leaf_removal() {
        let spec = GameSpec::Nc1(Graph::star(4, 1));
        let p = ReliabilityProfile::new(vec![0.9, 0.8, 0.7, 0.6]).unwrap();
        assert!(removal_no_benefit_check(&spec, &p, 2, RemovalTrials::Exhaustive).unwrap().passed);
        let v = removal_no_benefit_check(&spec, &p, 2, RemovalTrials::Random { count: 10, seed: 3 }).unwrap();
        assert!(v.passed && v.checked == 10);
    }

    #[test]
    fn threshold_two_removal_can_pay_off() {
        // path 1 - 2 - 3, k = 2: players 1 and 3 together capture 2, so
        // removing 3 costs player 1 part of its credit (7/6 -> 1)
        let spec = GameSpec::nc2(Graph::path(3), 2).unwrap();
        let p = ReliabilityProfile::ones(3);
        let limits = crate::reliability::Limits::default();
        let before = crate::shapley::shapley_definitional(&spec, Some(&p), &limits).unwrap().get(1);
        let after = crate::shapley::shapley_definitional(&spec, Some(&p.clone().with(3, 0.0)), &limits)
            .unwrap()
            .get(1);
        assert!((before - 7.0 / 6.0).abs() < 1e-12 && (after - 1.0).abs() < 1e-12);
        let v = removal_no_benefit_check(&spec, &p, 1, RemovalTrials::Exhaustive).unwrap();
        assert!(!v.passed);
        assert_eq!(v.counterexample.unwrap().removed, PlayerSet::from([3]));
    }

    #[test]
    fn full_obligation_is_refused() {
        let ci = CreditInstance::new(2, vec![paper(&[1, 2], 2.0)]).unwrap();
        let p = ReliabilityProfile::ones(2);
        assert!(removal_no_benefit_check(&GameSpec::Fo(ci), &p, 1, RemovalTrials::Exhaustive).is_err());
    }

    #[test]
    fn fo_search_extremes() {
        let ci = CreditInstance::new(
            3,
            vec![paper(&[1, 2], 2.0), paper(&[1, 3], 4.0), paper(&[1], 1.0)],
        )
        .unwrap();
        let costs = CostModel::uniform(vec![1.0; 3], 1.0, 1.0, 1.0).unwrap();
        let none = fo_removal_exhaustive(&ci, &costs, 0.0, 1).unwrap();
        assert!(none.removed().unwrap().is_empty());
        assert_eq!(none.achieved, none.shapley_before);
        let one = fo_removal_exhaustive(&ci, &costs, 1.0, 1).unwrap();
        assert_eq!(one.removed().unwrap(), &PlayerSet::from([3]));
        let all = fo_removal_exhaustive(&ci, &costs, 5.0, 1).unwrap();
        assert_eq!(all.removed().unwrap(), &PlayerSet::from([2, 3]));
        assert!((all.achieved - 1.0).abs() < 1e-12);
        assert!((all.unspent - 3.0).abs() < 1e-12);
    }

    #[test]
    fn fo_ties_prefer_fewer_then_lexicographic() {
        // removing 3 is free but useless, 2 and 4 give the same drop
        let ci = CreditInstance::new(
            4,
            vec![paper(&[1, 2], 2.0), paper(&[1, 4], 2.0), paper(&[3], 1.0)],
        )
        .unwrap();
        let costs = CostModel::new(vec![1.0; 4], vec![1.0; 4], vec![1.0; 4], vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let plan = fo_removal_exhaustive(&ci, &costs, 1.0, 1).unwrap();
        assert_eq!(plan.removed().unwrap(), &PlayerSet::from([2]));
    }
}
