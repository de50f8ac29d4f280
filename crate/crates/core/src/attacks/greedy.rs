use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::shapley::shapley_closed;
use crate::Player;

use super::{common_slope, fractional_plan, push_in_order, sort_desc_by_key, AttackPlan, AttackProblem, Push};

/// Greedy fractional attack on a complete graph or a star.
///
/// Raises reliabilities to 1 in decreasing order of baseline. When the
/// target is a leaf of a star the center goes first. The last affordable
/// player gets whatever budget remains.
pub fn greedy_fractional_attack(problem: &AttackProblem) -> Result<AttackPlan> {
    let (graph, verified_only) = match &problem.spec {
        GameSpec::Nc1(g) => (g, false),
        GameSpec::Nc2 { graph, k } => (graph, *k != 1),
        GameSpec::Nc3 { graph, .. } => {
            if !problem.large_cutoff {
                return Err(Error::domain(
                    "greedy attack on NC3 needs the large-cutoff flag; use the oracle otherwise",
                ));
            }
            (graph, true)
        }
        other => {
            return Err(Error::domain(format!(
                "greedy attack applies to centrality games, not {}",
                other.name()
            )))
        }
    };

    let x = problem.target;
    let mut order: Vec<Player> = problem.attackable().collect();
    let costs = &problem.costs;
    sort_desc_by_key(&mut order, |j| costs.p_star(j));
    if graph.is_complete() {
        // plain descending baseline
    } else if let Some(center) = graph.star_center() {
        if center != x {
            if let Some(pos) = order.iter().position(|&j| j == center) {
                order.remove(pos);
                order.insert(0, center);
            }
        }
    } else {
        return Err(Error::domain(
            "greedy attack needs a complete graph or a star",
        ));
    }
    common_slope(problem, &order, |c, j| c.increase_slope(j), "increase")?;
    common_slope(problem, &order, |c, j| c.decrease_slope(j), "decrease")?;

    let (profile, moved, _) = push_in_order(problem, &order, Push::Up);
    let achieved = shapley_closed(&problem.spec, &profile, x)?;
    let mut plan = fractional_plan(problem, profile, moved, achieved)?;
    plan.oracle_verified_only = verified_only;
    Ok(plan)
}
