//! Budget-constrained attacks on a target player's Shapley value.
//!
//! A *fractional* attack pays `u_j(p)` to move player `j` from its baseline
//! reliability `p*_j` to `p`, with slope `L_j` below the baseline and `R_j`
//! above it. A *removal* attack pays `c_j` to set `p_j = 0`. The target
//! itself is never modified.

mod bmc;
mod cycle;
mod greedy;
mod knapsack;
mod pairwise;
mod removal;
mod request;

pub use bmc::{
    bmc_compare, bmc_reduce, bmc_solve_exact, BmcComparison, BmcElement, BmcInstance, BmcReduction, BmcSet, BmcSolution, MAX_BMC_SETS,
};
pub use cycle::{
    crossover_lambda_pq, cumulative_decrease, cycle_candidates, cycle_fractional_attack,
    decrease_segments, CycleCandidate, CycleOrder,
};
pub use greedy::greedy_fractional_attack;
pub use knapsack::credit_knapsack_attack;
pub use pairwise::pairwise_exempt_set;
pub use removal::{
    fo_removal_exhaustive, removal_no_benefit_check, Counterexample, NoBenefitVerdict,
    RemovalTrials, MAX_REMOVAL_CANDIDATES,
};
pub use request::{solve_attack, AttackMode, AttackRequest, GameSource, PlanReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::reliability::ReliabilityProfile;
use crate::shapley::shapley_closed;
use crate::{check_player, check_set, Player, PlayerSet};

/// Slack allowed on budget feasibility.
pub const BUDGET_SLACK: f64 = 1e-9;

/// Baseline reliabilities and the price of moving away from them.
///
/// JSON form: `{"p_star": [...], "L": [...], "R": [...], "c": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CostModelFile")]
pub struct CostModel {
    p_star: Vec<f64>,
    #[serde(rename = "L")]
    decrease: Vec<f64>,
    #[serde(rename = "R")]
    increase: Vec<f64>,
    #[serde(rename = "c")]
    removal: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CostModelFile {
    p_star: Vec<f64>,
    #[serde(rename = "L")]
    decrease: Vec<f64>,
    #[serde(rename = "R")]
    increase: Vec<f64>,
    #[serde(rename = "c")]
    removal: Vec<f64>,
}

impl TryFrom<CostModelFile> for CostModel {
    type Error = Error;

    fn try_from(f: CostModelFile) -> Result<Self> {
        CostModel::new(f.p_star, f.decrease, f.increase, f.removal)
    }
}

impl CostModel {
    /// `p_star[j-1] ∈ (0, 1]`, `decrease` (L) and `increase` (R) slopes
    /// positive, removal costs nonnegative; all of equal length.
    pub fn new(p_star: Vec<f64>, decrease: Vec<f64>, increase: Vec<f64>, removal: Vec<f64>) -> Result<Self> {
        let n = p_star.len();
        if decrease.len() != n || increase.len() != n || removal.len() != n {
            return Err(Error::domain("cost model vectors must have equal lengths"));
        }
        for j in 0..n {
            let bad = |what: &str, v: f64| {
                Err(Error::domain(format!("cost model: {what} of player {} is {v}", j + 1)))
            };
            if !(p_star[j] > 0.0 && p_star[j] <= 1.0) {
                return bad("baseline p*", p_star[j]);
            }
            if !(decrease[j] > 0.0 && decrease[j].is_finite()) {
                return bad("decrease slope L", decrease[j]);
            }
            if !(increase[j] > 0.0 && increase[j].is_finite()) {
                return bad("increase slope R", increase[j]);
            }
            if !(removal[j] >= 0.0 && removal[j].is_finite()) {
                return bad("removal cost c", removal[j]);
            }
        }
        Ok(CostModel {
            p_star,
            decrease,
            increase,
            removal,
        })
    }

    /// Same slopes and removal cost for everybody.
    pub fn uniform(p_star: Vec<f64>, decrease: f64, increase: f64, removal: f64) -> Result<Self> {
        let n = p_star.len();
        Self::new(p_star, vec![decrease; n], vec![increase; n], vec![removal; n])
    }

    pub fn n(&self) -> usize {
        self.p_star.len()
    }

    pub fn baseline(&self) -> ReliabilityProfile {
        ReliabilityProfile::new(self.p_star.clone()).expect("validated baselines")
    }

    pub fn p_star(&self, j: Player) -> f64 {
        self.p_star[j - 1]
    }

    /// `L_j`.
    pub fn decrease_slope(&self, j: Player) -> f64 {
        self.decrease[j - 1]
    }

    /// `R_j`.
    pub fn increase_slope(&self, j: Player) -> f64 {
        self.increase[j - 1]
    }

    /// `c_j`.
    pub fn removal_cost(&self, j: Player) -> f64 {
        self.removal[j - 1]
    }

    /// `u_j(p)`: piecewise linear, zero only at the baseline.
    pub fn cost(&self, j: Player, p: f64) -> f64 {
        let base = self.p_star(j);
        if p < base {
            self.decrease_slope(j) * (base - p)
        } else {
            self.increase_slope(j) * (p - base)
        }
    }

    /// Total fractional cost of `profile`, ignoring `target`.
    pub fn profile_cost(&self, profile: &ReliabilityProfile, target: Player) -> f64 {
        (1..=self.n())
            .filter(|&j| j != target)
            .map(|j| self.cost(j, profile.get(j)))
            .sum()
    }
}

/// One attack instance.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackProblem {
    pub spec: GameSpec,
    pub target: Player,
    pub budget: f64,
    pub costs: CostModel,
    /// Players whose reliability may not change; always holds `target`.
    pub exempt: PlayerSet,
    /// Lets the greedy attack run on NC3, whose guarantee needs a large
    /// enough cutoff distance.
    pub large_cutoff: bool,
}

impl AttackProblem {
    pub fn new(spec: GameSpec, target: Player, budget: f64, costs: CostModel) -> Result<Self> {
        let n = spec.n();
        check_player(n, target)?;
        if costs.n() != n {
            return Err(Error::domain(format!(
                "cost model covers {} players, game has {n}",
                costs.n()
            )));
        }
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::domain(format!("budget must be nonnegative, got {budget}")));
        }
        Ok(AttackProblem {
            spec,
            target,
            budget,
            costs,
            exempt: PlayerSet::from([target]),
            large_cutoff: false,
        })
    }

    /// Adds players that may not be modified.
    pub fn exempting(mut self, players: &PlayerSet) -> Result<Self> {
        check_set(self.spec.n(), players)?;
        self.exempt.extend(players);
        Ok(self)
    }

    /// Protects `y`: exempts everybody whose reliability affects `Sh(y)`.
    pub fn protecting(self, y: Player) -> Result<Self> {
        let set = pairwise_exempt_set(&self.spec, y)?;
        self.exempting(&set)
    }

    pub fn attackable(&self) -> impl Iterator<Item = Player> + '_ {
        (1..=self.spec.n()).filter(|j| !self.exempt.contains(j))
    }

    pub fn baseline_shapley(&self) -> Result<f64> {
        shapley_closed(&self.spec, &self.costs.baseline(), self.target)
    }
}

/// What the attack changes.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutcome {
    Profile(ReliabilityProfile),
    Removed(PlayerSet),
}

/// Result of an attack.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackPlan {
    pub outcome: PlanOutcome,
    pub total_cost: f64,
    /// Budget left over once every targeted player is saturated.
    pub unspent: f64,
    pub shapley_before: f64,
    /// Shapley value of the target after the attack.
    pub achieved: f64,
    /// Players whose reliability changed, in the order they were targeted.
    pub targeting_order: Vec<Player>,
    /// Set when the solver is run outside its proven setting (NC2, NC3) and
    /// the result is only as good as an oracle cross-check says.
    pub oracle_verified_only: bool,
}

impl AttackPlan {
    pub fn profile(&self) -> Option<&ReliabilityProfile> {
        match &self.outcome {
            PlanOutcome::Profile(p) => Some(p),
            PlanOutcome::Removed(_) => None,
        }
    }

    pub fn removed(&self) -> Option<&PlayerSet> {
        match &self.outcome {
            PlanOutcome::Removed(r) => Some(r),
            PlanOutcome::Profile(_) => None,
        }
    }
}

/// Which way a fractional attack pushes reliabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Push {
    /// Toward 1, paying `R`.
    Up,
    /// Toward 0, paying `L`.
    Down,
}

/// Moves players to their extreme in `order`, stopping partway through the
/// first one the remaining budget cannot finish. Returns the profile, the
/// players actually moved, and the unspent budget.
pub(crate) fn push_in_order(
    problem: &AttackProblem,
    order: &[Player],
    push: Push,
) -> (ReliabilityProfile, Vec<Player>, f64) {
    let costs = &problem.costs;
    let mut profile = costs.baseline();
    let mut moved = Vec::new();
    let mut remaining = problem.budget;
    for &j in order {
        if remaining <= 0.0 {
            break;
        }
        let base = costs.p_star(j);
        let (goal, slope) = match push {
            Push::Up => (1.0, costs.increase_slope(j)),
            Push::Down => (0.0, costs.decrease_slope(j)),
        };
        let full = slope * (goal - base).abs();
        if full == 0.0 {
            continue;
        }
        if remaining >= full {
            profile.set(j, goal);
            remaining -= full;
        } else {
            let step = remaining / slope;
            let p = match push {
                Push::Up => (base + step).min(1.0),
                Push::Down => (base - step).max(0.0),
            };
            profile.set(j, p);
            remaining = 0.0;
        }
        moved.push(j);
    }
    (profile, moved, remaining)
}

/// Assembles a fractional plan, evaluating the target's value with the
/// closed form.
pub(crate) fn fractional_plan(
    problem: &AttackProblem,
    profile: ReliabilityProfile,
    order: Vec<Player>,
    achieved: f64,
) -> Result<AttackPlan> {
    let total_cost = problem.costs.profile_cost(&profile, problem.target);
    Ok(AttackPlan {
        total_cost,
        unspent: (problem.budget - total_cost).max(0.0),
        shapley_before: problem.baseline_shapley()?,
        achieved,
        targeting_order: order,
        outcome: PlanOutcome::Profile(profile),
        oracle_verified_only: false,
    })
}

/// Requires every attackable player to share the same slope.
pub(crate) fn common_slope(
    problem: &AttackProblem,
    players: &[Player],
    slope: impl Fn(&CostModel, Player) -> f64,
    name: &str,
) -> Result<()> {
    let mut values = players.iter().map(|&j| slope(&problem.costs, j));
    if let Some(first) = values.next() {
        if values.any(|v| (v - first).abs() > 1e-12 * first.abs().max(1.0)) {
            return Err(Error::domain(format!(
                "this attack assumes a common {name} slope for all attackable players"
            )));
        }
    }
    Ok(())
}

/// Sorts by descending key, ties by ascending player.
pub(crate) fn sort_desc_by_key(players: &mut [Player], key: impl Fn(Player) -> f64) {
    players.sort_by(|&a, &b| key(b).total_cmp(&key(a)).then(a.cmp(&b)));
}
