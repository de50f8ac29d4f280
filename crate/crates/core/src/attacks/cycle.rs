use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::reliability::ReliabilityProfile;
use crate::shapley::shapley_cycle_closed;
use crate::Player;

use super::{common_slope, fractional_plan, push_in_order, AttackPlan, AttackProblem, Push};

/// The four candidate orders, written for target 1 on `C_n`:
/// `P = [2, n, n-1, 3]`, `Q = [2, n-1, n, 3]`, `R = [n, 3, 2, n-1]`,
/// `S = [n, 2, 3, n-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CycleOrder {
    P,
    Q,
    R,
    S,
}

impl CycleOrder {
    /// Precedence order used to break ties.
    pub const ALL: [CycleOrder; 4] = [CycleOrder::P, CycleOrder::Q, CycleOrder::R, CycleOrder::S];

    /// Labels relative to a target sitting at 1.
    pub fn labels(self, n: usize) -> [Player; 4] {
        match self {
            CycleOrder::P => [2, n, n - 1, 3],
            CycleOrder::Q => [2, n - 1, n, 3],
            CycleOrder::R => [n, 3, 2, n - 1],
            CycleOrder::S => [n, 2, 3, n - 1],
        }
    }
}

/// One evaluated order.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCandidate {
    pub order: CycleOrder,
    pub plan: AttackPlan,
}

/// Maps a label relative to the target (target = 1) to the actual player.
fn actual(n: usize, target: Player, label: Player) -> Player {
    (target - 1 + label - 1) % n + 1
}

/// The profile seen from the target, so the target sits at position 1.
fn rotated(p: &ReliabilityProfile, target: Player) -> ReliabilityProfile {
    let n = p.len();
    let v = (1..=n).map(|i| p.get(actual(n, target, i))).collect();
    ReliabilityProfile::new(v).expect("permuted profile")
}

fn check_cycle(problem: &AttackProblem) -> Result<usize> {
    let GameSpec::Nc1(g) = &problem.spec else {
        return Err(Error::domain("cycle attack applies to NC1 only"));
    };
    if !g.is_canonical_cycle() {
        return Err(Error::domain("cycle attack needs the cycle 1 - 2 - ... - n - 1"));
    }
    let n = g.n();
    if n < 5 {
        return Err(Error::domain(format!(
            "cycle attack needs n >= 5, got {n}; use the oracle for small cycles"
        )));
    }
    Ok(n)
}

/// Evaluates all four greedy orders, skipping exempt players.
pub fn cycle_candidates(problem: &AttackProblem) -> Result<Vec<CycleCandidate>> {
    let n = check_cycle(problem)?;
    let x = problem.target;
    let near: Vec<Player> = [2, 3, n - 1, n].iter().map(|&l| actual(n, x, l)).collect();
    let attackable: Vec<Player> = near.iter().copied().filter(|j| !problem.exempt.contains(j)).collect();
    let ignored: Vec<Player> = problem.attackable().filter(|j| !near.contains(j)).collect();
    if !ignored.is_empty() {
        log::warn!("cycle attack ignores players {ignored:?}: they cannot affect the target");
    }
    common_slope(problem, &attackable, |c, j| c.increase_slope(j), "increase")?;

    CycleOrder::ALL
        .iter()
        .map(|&order| {
            let seq: Vec<Player> = order
                .labels(n)
                .iter()
                .map(|&l| actual(n, x, l))
                .filter(|j| attackable.contains(j))
                .collect();
            let (profile, moved, _) = push_in_order(problem, &seq, Push::Up);
            let achieved = shapley_cycle_closed(&rotated(&profile, x))?;
            let plan = fractional_plan(problem, profile, moved, achieved)?;
            Ok(CycleCandidate { order, plan })
        })
        .collect()
}

/// Best of the four orders. The target's own reliability only scales the
/// value, so orders are compared as if it were 1; ties follow P, Q, R, S.
pub fn cycle_fractional_attack(problem: &AttackProblem) -> Result<AttackPlan> {
    let x = problem.target;
    let mut best: Option<(f64, AttackPlan)> = None;
    for cand in cycle_candidates(problem)? {
        let unit = rotated(cand.plan.profile().expect("fractional"), x).with(1, 1.0);
        let score = shapley_cycle_closed(&unit)?;
        if best.as_ref().is_none_or(|(b, _)| score < b - 1e-12) {
            best = Some((score, cand.plan));
        }
    }
    Ok(best.expect("four candidates").1)
}

/// Piecewise-linear decrease of the target's value along an order, as
/// `(speed, length)` segments. Lengths are in probability units (budget
/// divided by the common slope) and the target's reliability is taken as 1.
pub fn decrease_segments(order: CycleOrder, p_star: &ReliabilityProfile) -> Result<[(f64, f64); 4]> {
    let n = p_star.len();
    if n < 5 {
        return Err(Error::domain("decrease segments need a cycle with n >= 5"));
    }
    let (p2, p3, pm, pn) = (p_star.get(2), p_star.get(3), p_star.get(n - 1), p_star.get(n));
    Ok(match order {
        CycleOrder::P => [
            (1.0 - (p3 + pn) / 3.0, 1.0 - p2),
            ((2.0 - pm) / 3.0, 1.0 - pn),
            (1.0 / 6.0, 1.0 - pm),
            (1.0 / 6.0, 1.0 - p3),
        ],
        CycleOrder::Q => [
            (1.0 - (p3 + pn) / 3.0, 1.0 - p2),
            (0.5 - pn / 3.0, 1.0 - pm),
            (1.0 / 3.0, 1.0 - pn),
            (1.0 / 6.0, 1.0 - p3),
        ],
        CycleOrder::R => [
            (1.0 - (p2 + pm) / 3.0, 1.0 - pn),
            (0.5 - p2 / 3.0, 1.0 - p3),
            (1.0 / 3.0, 1.0 - p2),
            (1.0 / 6.0, 1.0 - pm),
        ],
        CycleOrder::S => [
            (1.0 - (p2 + pm) / 3.0, 1.0 - pn),
            ((2.0 - p3) / 3.0, 1.0 - p2),
            (1.0 / 6.0, 1.0 - p3),
            (1.0 / 6.0, 1.0 - pm),
        ],
    })
}

/// Total decrease after spending `amount` probability units along `order`.
pub fn cumulative_decrease(order: CycleOrder, p_star: &ReliabilityProfile, amount: f64) -> Result<f64> {
    let mut left = amount.max(0.0);
    let mut total = 0.0;
    for (speed, len) in decrease_segments(order, p_star)? {
        let used = left.min(len);
        total += speed * used;
        left -= used;
    }
    Ok(total)
}

/// Amount at which the decrease along P catches up with Q:
/// `3/2 - p*_2 - p*_n`.
pub fn crossover_lambda_pq(p_star: &ReliabilityProfile) -> Result<f64> {
    let n = p_star.len();
    if n < 5 {
        return Err(Error::domain("crossover needs a cycle with n >= 5"));
    }
    Ok(1.5 - p_star.get(2) - p_star.get(n))
}
