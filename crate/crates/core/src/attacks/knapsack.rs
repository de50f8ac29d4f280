use crate::credit::coauthor_contributions;
use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::shapley::shapley_closed;
use crate::Player;

use super::{fractional_plan, push_in_order, sort_desc_by_key, AttackPlan, AttackProblem, Push};

/// Fractional knapsack attack on a two-author credit game.
///
/// Full credit: raise coauthors toward 1 in decreasing `C(x,l) / R_l`.
/// Full obligation: lower them toward 0 in decreasing `C(x,l) / L_l`.
/// Papers written by `x` alone are allowed; nothing can change them.
pub fn credit_knapsack_attack(problem: &AttackProblem) -> Result<AttackPlan> {
    let x = problem.target;
    let (ci, push) = match &problem.spec {
        GameSpec::Fc(ci) => (ci, Push::Up),
        GameSpec::Fo(ci) => (ci, Push::Down),
        other => {
            return Err(Error::domain(format!(
                "knapsack attack applies to credit games, not {}",
                other.name()
            )))
        }
    };
    if let Some(paper) = ci.papers_of(x).find(|paper| paper.authors.len() > 2) {
        return Err(Error::domain(format!(
            "knapsack attack needs two-author papers; player {x} has one with {} authors",
            paper.authors.len()
        )));
    }
    let contrib = coauthor_contributions(ci, x)?;
    let costs = &problem.costs;
    let mut order: Vec<Player> = contrib.keys().copied().filter(|l| !problem.exempt.contains(l)).collect();
    let ratio = |l: Player| {
        let slope = match push {
            Push::Up => costs.increase_slope(l),
            Push::Down => costs.decrease_slope(l),
        };
        contrib[&l] / slope
    };
    sort_desc_by_key(&mut order, ratio);

    let (profile, moved, _) = push_in_order(problem, &order, push);
    let achieved = shapley_closed(&problem.spec, &profile, x)?;
    fractional_plan(problem, profile, moved, achieved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::{AttackProblem, CostModel};
    use crate::credit::{CreditInstance, Paper};

    fn paper(a: &[Player], s: f64) -> Paper {
        Paper {
            authors: a.to_vec(),
            score: s,
        }
    }

    #[test]
    fn full_credit_trace() {
        // l1 = 2 with C = 4, R = 2; l2 = 3 with C = 3, R = 1
        let ci = CreditInstance::new(3, vec![paper(&[1, 2], 4.0), paper(&[1, 3], 3.0)]).unwrap();
        let costs = CostModel::new(vec![1.0, 0.5, 0.5], vec![1.0; 3], vec![1.0, 2.0, 1.0], vec![0.0; 3]).unwrap();
        let pr = AttackProblem::new(GameSpec::Fc(ci), 1, 0.5, costs).unwrap();
        let plan = credit_knapsack_attack(&pr).unwrap();
        assert_eq!(plan.targeting_order, vec![3]);
        let p = plan.profile().unwrap();
        assert_eq!((p.get(2), p.get(3)), (0.5, 1.0));
    }

    #[test]
    fn full_obligation_saturates_to_solo_credit() {
        let ci = CreditInstance::new(
            3,
            vec![paper(&[1, 2], 4.0), paper(&[1, 3], 3.0), paper(&[1], 1.5)],
        )
        .unwrap();
        let costs = CostModel::uniform(vec![0.9, 0.6, 0.7], 2.0, 1.0, 0.0).unwrap();
        let pr = AttackProblem::new(GameSpec::Fo(ci), 1, 100.0, costs).unwrap();
        let plan = credit_knapsack_attack(&pr).unwrap();
        assert!((plan.achieved - 0.9 * 1.5).abs() < 1e-12);
        assert!((plan.total_cost - 2.0 * 1.3).abs() < 1e-12);
    }

    #[test]
    fn zero_budget_and_wide_papers() {
        let ci = CreditInstance::new(3, vec![paper(&[1, 2], 4.0)]).unwrap();
        let costs = CostModel::uniform(vec![0.5; 3], 1.0, 1.0, 0.0).unwrap();
        let pr = AttackProblem::new(GameSpec::Fc(ci), 1, 0.0, costs.clone()).unwrap();
        let plan = credit_knapsack_attack(&pr).unwrap();
        assert_eq!(plan.achieved, plan.shapley_before);

        let ci = CreditInstance::new(3, vec![paper(&[1, 2, 3], 4.0)]).unwrap();
        let pr = AttackProblem::new(GameSpec::Fc(ci), 1, 1.0, costs).unwrap();
        assert!(credit_knapsack_attack(&pr).is_err());
    }
}
