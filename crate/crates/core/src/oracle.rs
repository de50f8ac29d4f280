//! Independent checks: a brute-force optimizer for fractional attacks and
//! finite differences. Only [`oracle_check`] touches the attack solvers, to
//! compare against them.

use serde::{Deserialize, Serialize};

use crate::attacks::{solve_attack, AttackMode, AttackPlan, AttackProblem, PlanOutcome, BUDGET_SLACK};
use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::reliability::{Limits, ReliabilityProfile};
use crate::shapley::{shapley_closed, shapley_definitional};
use crate::Player;

/// Knobs of [`fractional_oracle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    /// Finest probability step of the starting grid.
    pub grid_resolution: f64,
    /// Budget moved by the final swap-stationarity check.
    pub swap_step: f64,
    /// Accepted improving moves per refined start.
    pub max_refinements: usize,
    /// A swap gaining less than this counts as no gain.
    pub tolerance: f64,
    /// Grid size above which the resolution is coarsened (never past 1/4).
    pub max_grid_points: usize,
    /// Most players the oracle will search over.
    pub max_attackable: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_resolution: 1.0 / 64.0,
            swap_step: 1e-3,
            max_refinements: 10_000,
            tolerance: 1e-6,
            max_grid_points: 50_000,
            max_attackable: 6,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_resolution > 0.0 && self.grid_resolution <= 0.25) {
            return Err(Error::domain(format!(
                "grid_resolution must lie in (0, 1/4], got {}",
                self.grid_resolution
            )));
        }
        if self.swap_step.is_nan() || self.swap_step <= 0.0 {
            return Err(Error::domain(format!("swap_step must be positive, got {}", self.swap_step)));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::domain(format!("tolerance must be nonnegative, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// How many of the best starting points get refined.
const STARTS: usize = 8;
/// Refinement stops once the move size falls below this.
const MIN_STEP: f64 = 1e-12;

/// Search state: signed spend per attackable player. Positive spend raises
/// the reliability at slope `R`, negative lowers it at slope `L`.
struct Space<'a> {
    problem: &'a AttackProblem,
    players: Vec<Player>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Space<'_> {
    fn profile(&self, t: &[f64]) -> ReliabilityProfile {
        let costs = &self.problem.costs;
        let mut p = costs.baseline();
        for (i, &j) in self.players.iter().enumerate() {
            let v = if t[i] >= 0.0 {
                costs.p_star(j) + t[i] / costs.increase_slope(j)
            } else {
                costs.p_star(j) + t[i] / costs.decrease_slope(j)
            };
            p.set(j, v.clamp(0.0, 1.0));
        }
        p
    }

    fn spend(t: &[f64]) -> f64 {
        t.iter().map(|v| v.abs()).sum()
    }

    fn feasible(&self, t: &[f64]) -> bool {
        Self::spend(t) <= self.problem.budget + BUDGET_SLACK
            && t.iter().zip(&self.lo).zip(&self.hi).all(|((v, lo), hi)| v >= lo && v <= hi)
    }

    fn value(&self, t: &[f64]) -> Result<f64> {
        let p = self.profile(t);
        let x = self.problem.target;
        match &self.problem.spec {
            GameSpec::Table(_) => Ok(shapley_definitional(&self.problem.spec, Some(&p), &Limits::default())?.get(x)),
            spec => shapley_closed(spec, &p, x),
        }
    }
}

/// Brute-force minimizer of the target's Shapley value over all
/// budget-feasible profiles of the attackable players.
///
/// Starts from a probability grid plus the vertices of the feasible region
/// (every player at its floor, baseline or ceiling, one more absorbing the
/// leftover budget), then refines the best starts with single-player and
/// pairwise budget moves of shrinking size.
pub fn fractional_oracle(problem: &AttackProblem, cfg: &OracleConfig) -> Result<AttackPlan> {
    cfg.validate()?;
    let players: Vec<Player> = problem.attackable().collect();
    Error::check_cap("oracle attackable players", players.len(), cfg.max_attackable)?;
    let costs = &problem.costs;
    let space = Space {
        problem,
        lo: players.iter().map(|&j| -costs.decrease_slope(j) * costs.p_star(j)).collect(),
        hi: players.iter().map(|&j| costs.increase_slope(j) * (1.0 - costs.p_star(j))).collect(),
        players,
    };

    let mut starts = Vec::new();
    for t in grid_points(&space, cfg).into_iter().chain(vertices(&space)) {
        starts.push((space.value(&t)?, t));
    }
    // stable sort keeps generation order among equal values
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.truncate(STARTS);

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (v, t) in starts {
        let (v, t) = refine(&space, cfg, v, t)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, t));
        }
    }
    let (achieved, t) = best.expect("the baseline is always a start");

    let profile = space.profile(&t);
    let mut order: Vec<(usize, Player)> = Vec::new();
    for (i, &j) in space.players.iter().enumerate() {
        if t[i] != 0.0 {
            order.push((i, j));
        }
    }
    let total_cost = costs.profile_cost(&profile, problem.target);
    Ok(AttackPlan {
        total_cost,
        unspent: (problem.budget - total_cost).max(0.0),
        shapley_before: space.value(&vec![0.0; space.players.len()])?,
        achieved,
        targeting_order: order.into_iter().map(|(_, j)| j).collect(),
        outcome: PlanOutcome::Profile(profile),
        oracle_verified_only: false,
    })
}

/// A solver's plan next to the oracle's.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub solver: AttackPlan,
    pub oracle: AttackPlan,
    /// `|solver - oracle|` on the target's value.
    pub gap: f64,
    pub within_tolerance: bool,
}

/// Runs the exact fractional solver and the oracle on the same problem.
pub fn oracle_check(problem: &AttackProblem, cfg: &OracleConfig) -> Result<OracleCheck> {
    let solver = solve_attack(problem, AttackMode::Fractional)?;
    let oracle = fractional_oracle(problem, cfg)?;
    let gap = (solver.achieved - oracle.achieved).abs();
    Ok(OracleCheck {
        within_tolerance: gap <= cfg.tolerance,
        solver,
        oracle,
        gap,
    })
}

/// True when no transfer of `swap_step` budget (into, out of, or between
/// players) lowers the target's value by more than `tolerance`.
pub fn is_swap_stationary(problem: &AttackProblem, plan: &AttackPlan, cfg: &OracleConfig) -> Result<bool> {
    let players: Vec<Player> = problem.attackable().collect();
    let costs = &problem.costs;
    let space = Space {
        problem,
        lo: players.iter().map(|&j| -costs.decrease_slope(j) * costs.p_star(j)).collect(),
        hi: players.iter().map(|&j| costs.increase_slope(j) * (1.0 - costs.p_star(j))).collect(),
        players,
    };
    let profile = plan
        .profile()
        .ok_or_else(|| Error::domain("swap stationarity applies to fractional plans"))?;
    let t: Vec<f64> = space
        .players
        .iter()
        .map(|&j| {
            let d = profile.get(j) - costs.p_star(j);
            if d >= 0.0 {
                d * costs.increase_slope(j)
            } else {
                d * costs.decrease_slope(j)
            }
        })
        .collect();
    let v = space.value(&t)?;
    Ok(best_move(&space, &t, v, cfg.swap_step, cfg.tolerance)?.is_none())
}

/// Budget-feasible grid over the attackable players. Each player ranges
/// over multiples of the resolution plus its baseline. The resolution is
/// doubled while the full grid would exceed the point cap, but never past
/// 1/4.
fn grid_points(space: &Space, cfg: &OracleConfig) -> Vec<Vec<f64>> {
    let m = space.players.len();
    let mut h = cfg.grid_resolution;
    while h < 0.25 && ((1.0 / h + 2.0).powi(m as i32)) > cfg.max_grid_points as f64 {
        h = (h * 2.0).min(0.25);
    }
    let costs = &space.problem.costs;
    let axes: Vec<Vec<f64>> = space
        .players
        .iter()
        .map(|&j| {
            let steps = (1.0 / h).round() as usize;
            let mut vals: Vec<f64> = (0..=steps).map(|k| (k as f64 * h).min(1.0)).collect();
            vals.push(costs.p_star(j));
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals.into_iter()
                .map(|p| {
                    let d = p - costs.p_star(j);
                    if d >= 0.0 {
                        d * costs.increase_slope(j)
                    } else {
                        d * costs.decrease_slope(j)
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fill_grid(&axes, space.problem.budget, &mut cur, 0.0, &mut out);
    out
}

fn fill_grid(axes: &[Vec<f64>], budget: f64, cur: &mut Vec<f64>, spent: f64, out: &mut Vec<Vec<f64>>) {
    if cur.len() == axes.len() {
        out.push(cur.clone());
        return;
    }
    for &t in &axes[cur.len()] {
        let s = spent + t.abs();
        if s <= budget + BUDGET_SLACK {
            cur.push(t);
            fill_grid(axes, budget, cur, s, out);
            cur.pop();
        }
    }
}

/// Every player at floor, baseline or ceiling, then optionally one player
/// taking the remaining budget in either direction.
fn vertices(space: &Space) -> Vec<Vec<f64>> {
    let m = space.players.len();
    let budget = space.problem.budget;
    let mut out = Vec::new();
    let mut t = vec![0.0; m];
    let total = 3usize.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        for (i, ti) in t.iter_mut().enumerate() {
            *ti = match c % 3 {
                0 => 0.0,
                1 => space.lo[i],
                _ => space.hi[i],
            };
            c /= 3;
        }
        let spent = Space::spend(&t);
        if spent > budget + BUDGET_SLACK {
            continue;
        }
        out.push(t.clone());
        let left = budget - spent;
        for i in 0..m {
            if t[i] != 0.0 || left <= 0.0 {
                continue;
            }
            for v in [left.min(space.hi[i]), (-left).max(space.lo[i])] {
                if v != 0.0 {
                    let mut u = t.clone();
                    u[i] = v;
                    out.push(u);
                }
            }
        }
    }
    out
}

/// Steepest-descent over single moves and pairwise transfers with a
/// shrinking step.
fn refine(space: &Space, cfg: &OracleConfig, mut v: f64, mut t: Vec<f64>) -> Result<(f64, Vec<f64>)> {
    let costs = &space.problem.costs;
    let scale = space
        .players
        .iter()
        .map(|&j| costs.increase_slope(j).max(costs.decrease_slope(j)))
        .fold(0.0, f64::max);
    let mut step = cfg.grid_resolution * scale;
    let mut accepted = 0;
    while step >= MIN_STEP && accepted < cfg.max_refinements {
        match best_move(space, &t, v, step, 0.0)? {
            Some((nv, nt)) => {
                v = nv;
                t = nt;
                accepted += 1;
            }
            None => step /= 2.0,
        }
    }
    // the returned point must also pass the stationarity check
    while accepted < cfg.max_refinements {
        match best_move(space, &t, v, cfg.swap_step, cfg.tolerance)? {
            Some((nv, nt)) => {
                v = nv;
                t = nt;
                accepted += 1;
            }
            None => break,
        }
    }
    Ok((v, t))
}

/// The best improving move of size `step`, if it beats `v` by more than
/// `gain`. Moves are clipped to the box and, when they add spend, to the
/// budget.
fn best_move(space: &Space, t: &[f64], v: f64, step: f64, gain: f64) -> Result<Option<(f64, Vec<f64>)>> {
    let m = t.len();
    let budget = space.problem.budget;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |u: Vec<f64>| -> Result<()> {
        if u.as_slice() == t || !space.feasible(&u) {
            return Ok(());
        }
        let nv = space.value(&u)?;
        let bar = best.as_ref().map_or(v - gain, |(b, _)| *b);
        if nv < bar && nv < v - gain {
            best = Some((nv, u));
        }
        Ok(())
    };
    let clip = |u: &mut Vec<f64>, i: usize| u[i] = u[i].clamp(space.lo[i], space.hi[i]);
    for i in 0..m {
        for s in [1.0, -1.0] {
            let mut u = t.to_vec();
            u[i] += s * step;
            clip(&mut u, i);
            let over = Space::spend(&u) - budget;
            if over > 0.0 {
                // shrink the move to fit the budget
                let room = u[i].abs() - over;
                if room < t[i].abs() && t[i].signum() == u[i].signum() {
                    continue;
                }
                u[i] = u[i].signum() * room.max(0.0);
            }
            consider(u)?;
        }
    }
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            for si in [1.0, -1.0] {
                // move i away from baseline by `step`, pull j toward it by the same amount
                let mut u = t.to_vec();
                u[i] += si * step;
                clip(&mut u, i);
                let added = u[i].abs() - t[i].abs();
                if added <= 0.0 {
                    continue;
                }
                let shrink = added.min(t[j].abs());
                if shrink <= 0.0 {
                    continue;
                }
                u[j] -= t[j].signum() * shrink;
                let over = Space::spend(&u) - budget;
                if over > 0.0 {
                    u[i] -= u[i].signum() * over;
                }
                consider(u)?;
            }
        }
    }
    Ok(best)
}

/// Central difference of `f` in `p_j`, one-sided when `p_j ± h` leaves `[0, 1]`.
pub fn finite_difference<F>(f: F, p: &ReliabilityProfile, j: Player, h: f64) -> Result<f64>
where
    F: Fn(&ReliabilityProfile) -> f64,
{
    if h.is_nan() || h <= 0.0 {
        return Err(Error::domain(format!("finite-difference step must be positive, got {h}")));
    }
    crate::check_player(p.len(), j)?;
    let pj = p.get(j);
    let at = |v: f64| f(&p.clone().with(j, v));
    match (pj - h >= 0.0, pj + h <= 1.0) {
        (true, true) => Ok((at(pj + h) - at(pj - h)) / (2.0 * h)),
        (false, true) => Ok((at(pj + h) - at(pj)) / h),
        (true, false) => Ok((at(pj) - at(pj - h)) / h),
        (false, false) => Err(Error::domain(format!("step {h} too large around p_{j} = {pj}"))),
    }
}
