use super::closed::NEIGHBORHOOD_CAP;
use super::shapley_closed;
use crate::error::{Error, Result};
use crate::games::{cutoff_balls, GameSpec};
use crate::graph::Graph;
use crate::reliability::ReliabilityProfile;
use crate::subsets::expect_over_live;
use crate::{check_player, Player, PlayerSet};

/// `∂ Sh[v̄_NC1](x) / ∂p_j` for every player `j` (entry `j - 1`).
///
/// For `j ≠ x`:
/// `-p_x Σ_{y ∈ N̂(x) ∩ N̂(j)} Σ_{S ⊆ N̂(y)∖{x,j}} Π_{S, N̂(y)∖{x,j}} / ((|S|+1)(|S|+2))`,
/// which vanishes outside the distance-two ball of `x`. The entry for `x`
/// itself is `Sh / p_x`.
pub fn shapley_gradient_nc1(g: &Graph, p: &ReliabilityProfile, x: Player) -> Result<Vec<f64>> {
    p.check_len(g.n())?;
    check_player(g.n(), x)?;
    let hoods: Vec<PlayerSet> = (1..=g.n())
        .map(|y| g.closed_neighborhood(y).into_iter().collect())
        .collect();
    local_gradient(&hoods, &hoods, p, x)
}

/// Gradient of `shapley_closed` with respect to the whole profile.
///
/// NC1 and NC3 use their analytic derivatives. The other games use the fact
/// that the closed form is multilinear in `p`, so the partial derivative in
/// `p_j` equals the difference of the values at `p_j = 1` and `p_j = 0`.
pub fn shapley_gradient(spec: &GameSpec, p: &ReliabilityProfile, x: Player) -> Result<Vec<f64>> {
    p.check_len(spec.n())?;
    check_player(spec.n(), x)?;
    match spec {
        GameSpec::Nc1(g) => shapley_gradient_nc1(g, p, x),
        GameSpec::Nc3 { graph, d_cut } => {
            let balls = cutoff_balls(graph, *d_cut)?;
            local_gradient(&balls, &balls, p, x)
        }
        _ => (1..=spec.n())
            .map(|j| {
                let hi = shapley_closed(spec, &p.clone().with(j, 1.0), x)?;
                let lo = shapley_closed(spec, &p.clone().with(j, 0.0), x)?;
                Ok(hi - lo)
            })
            .collect(),
    }
}

/// Shared shape of the NC1/NC3 derivatives: `centers[x-1]` lists the `y`
/// summed over, and `hoods[y-1]` is the neighborhood whose live members may
/// precede `x`.
fn local_gradient(
    centers: &[PlayerSet],
    hoods: &[PlayerSet],
    p: &ReliabilityProfile,
    x: Player,
) -> Result<Vec<f64>> {
    let n = p.len();
    let mut grad = vec![0.0; n];
    for &y in &centers[x - 1] {
        let hood = &hoods[y - 1];
        Error::check_cap("neighborhood size", hood.len(), NEIGHBORHOOD_CAP)?;
        let others: Vec<Player> = hood.iter().copied().filter(|&z| z != x).collect();
        grad[x - 1] += expect_over_live(&others, p, |s, _| 1.0 / (s as f64 + 1.0));
        for &j in &others {
            let rest: Vec<Player> = others.iter().copied().filter(|&z| z != j).collect();
            let term = expect_over_live(&rest, p, |s, _| {
                let s = s as f64;
                1.0 / ((s + 1.0) * (s + 2.0))
            });
            grad[j - 1] -= p.get(x) * term;
        }
    }
    Ok(grad)
}
