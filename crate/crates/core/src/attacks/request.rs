use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::games::{GameFile, GameSpec};
use crate::{Player, PlayerSet};

use super::removal::{fo_removal_search, removal_search};
use super::{
    credit_knapsack_attack, cycle_fractional_attack, greedy_fractional_attack, AttackPlan, AttackProblem,
    CostModel, PlanOutcome,
};

/// Where the game of a request comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSource {
    /// Path to a game file, relative to the request file.
    Path(String),
    Inline(GameFile),
}

impl<'de> Deserialize<'de> for GameSource {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let value = serde_json::Value::deserialize(d)?;
        match value {
            serde_json::Value::String(path) => Ok(GameSource::Path(path)),
            other => serde_json::from_value(other).map(GameSource::Inline).map_err(|e| D::Error::custom(format!("game: {e}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackMode {
    Fractional,
    Removal,
}

/// Attack request file.
///
/// ```json
/// { "game": "k4.json", "target": 1, "budget": 0.5,
///   "cost_model": {"p_star": [...], "L": [...], "R": [...], "c": [...]},
///   "mode": "fractional", "pairwise_protect": 3 }
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackRequest {
    pub game: GameSource,
    pub target: Player,
    pub budget: f64,
    pub cost_model: CostModel,
    pub mode: AttackMode,
    #[serde(default)]
    pub pairwise_protect: Option<Player>,
    /// Allows the greedy attack on NC3.
    #[serde(default)]
    pub large_cutoff: bool,
}

impl AttackRequest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("attack request: {e}")))
    }

    /// Builds the problem once the game has been loaded.
    pub fn to_problem(&self, spec: GameSpec) -> Result<AttackProblem> {
        let mut problem = AttackProblem::new(spec, self.target, self.budget, self.cost_model.clone())?;
        problem.large_cutoff = self.large_cutoff;
        match self.pairwise_protect {
            Some(y) => problem.protecting(y),
            None => Ok(problem),
        }
    }
}

/// Runs the exact solver that fits the problem.
///
/// Fractional: knapsack for credit games, the four-order search on cycles,
/// greedy on complete graphs and stars. Removal: exhaustive search for full
/// obligation and for NC2 with `k >= 2`; for NC1, NC3 and full credit
/// removal never pays, so the empty removal is optimal.
pub fn solve_attack(problem: &AttackProblem, mode: AttackMode) -> Result<AttackPlan> {
    match mode {
        AttackMode::Fractional => match &problem.spec {
            GameSpec::Fc(_) | GameSpec::Fo(_) => credit_knapsack_attack(problem),
            GameSpec::Nc1(g) if g.is_canonical_cycle() && g.n() >= 5 => cycle_fractional_attack(problem),
            GameSpec::Table(_) => Err(Error::domain("no attack solver for an explicit table")),
            _ => greedy_fractional_attack(problem),
        },
        AttackMode::Removal => match &problem.spec {
            GameSpec::Fo(ci) => fo_removal_search(ci, &problem.costs, problem.budget, problem.target, &problem.exempt),
            GameSpec::Table(_) => Err(Error::domain("no attack solver for an explicit table")),
            GameSpec::Nc2 { k, .. } if *k >= 2 => removal_search(problem),
            _ => {
                let before = problem.baseline_shapley()?;
                Ok(AttackPlan {
                    outcome: PlanOutcome::Removed(PlayerSet::new()),
                    total_cost: 0.0,
                    unspent: problem.budget,
                    shapley_before: before,
                    achieved: before,
                    targeting_order: Vec::new(),
                    oracle_verified_only: false,
                })
            }
        },
    }
}

/// Serializable view of a plan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removed: Option<Vec<Player>>,
    pub total_cost: f64,
    pub shapley_before: f64,
    pub shapley_after: f64,
    pub targeting_order: Vec<Player>,
    pub unspent_budget: f64,
    pub oracle_verified_only: bool,
}

impl From<&AttackPlan> for PlanReport {
    fn from(plan: &AttackPlan) -> Self {
        let (profile, removed) = match &plan.outcome {
            PlanOutcome::Profile(p) => (Some(p.as_slice().to_vec()), None),
            PlanOutcome::Removed(r) => (None, Some(r.iter().copied().collect())),
        };
        PlanReport {
            profile,
            removed,
            total_cost: plan.total_cost,
            shapley_before: plan.shapley_before,
            shapley_after: plan.achieved,
            targeting_order: plan.targeting_order.clone(),
            unspent_budget: plan.unspent,
            oracle_verified_only: plan.oracle_verified_only,
        }
    }
}
