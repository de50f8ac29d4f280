use crate::credit::CreditInstance;
use crate::error::{Error, Result};
use crate::games::{cutoff_balls, GameSpec};
use crate::graph::Graph;
use crate::reliability::ReliabilityProfile;
use crate::subsets::expect_over_live;
use crate::{check_player, coauthor_contributions, Player};

/// Largest neighborhood (or paper author list) the closed forms expand;
/// their cost is exponential only in these local sizes.
pub const NEIGHBORHOOD_CAP: usize = 20;

/// Shapley value of player `x` in the reliability extension of `spec`,
/// computed from local neighborhoods (centrality games) or per paper
/// (credit games) instead of by enumerating orderings.
pub fn shapley_closed(spec: &GameSpec, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    p.check_len(spec.n())?;
    check_player(spec.n(), x)?;
    match spec {
        GameSpec::Nc1(g) => nc1(g, p, x),
        GameSpec::Nc2 { graph, k } => nc2(graph, *k, p, x),
        GameSpec::Nc3 { graph, d_cut } => nc3(graph, *d_cut, p, x),
        GameSpec::Fc(ci) => full_credit(ci, p, x),
        GameSpec::Fo(ci) => full_obligation(ci, p, x),
        GameSpec::Table(_) => Err(Error::domain(
            "explicit tables have no closed form; use shapley_definitional",
        )),
    }
}

fn without(set: &[Player], x: Player) -> Vec<Player> {
    set.iter().copied().filter(|&y| y != x).collect()
}

fn check_local(len: usize) -> Result<()> {
    Error::check_cap("neighborhood size", len, NEIGHBORHOOD_CAP)
}

/// `Σ_{S ⊆ W} Π_{S,W} / (|S| + 1)`: probability that `x` is the first live
/// member of `W ∪ {x}` in a random order.
fn first_among(w: &[Player], p: &ReliabilityProfile) -> Result<f64> {
    check_local(w.len())?;
    Ok(expect_over_live(w, p, |s, _| 1.0 / (s as f64 + 1.0)))
}

// p_x Σ_{y ∈ N̂(x)} Σ_{S ⊆ N̂(y)∖x} Π_{S, N̂(y)∖x} / (|S|+1)
fn nc1(g: &Graph, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    let mut total = 0.0;
    for y in g.closed_neighborhood(x) {
        total += first_among(&without(&g.closed_neighborhood(y), x), p)?;
    }
    Ok(p.get(x) * total)
}

// x gains its own coverage when fewer than k live neighbors precede it; a
// neighbor y gains coverage when it is not a live predecessor and exactly
// k - 1 of its other live neighbors precede x.
fn nc2(g: &Graph, k: usize, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    let own: Vec<Player> = g.neighbors(x).collect();
    check_local(own.len())?;
    let mut total = expect_over_live(&own, p, |s, _| {
        (k.min(s + 1)) as f64 / (s as f64 + 1.0)
    });
    for y in g.neighbors(x) {
        let w = without(&g.closed_neighborhood(y), x);
        check_local(w.len())?;
        let y_bit = 1usize << w.iter().position(|&z| z == y).expect("y ∈ N̂(y)");
        total += expect_over_live(&w, p, |s, mask| {
            let s_f = s as f64;
            if mask & y_bit != 0 {
                if s >= k {
                    (s + 1 - k) as f64 / (s_f * (s_f + 1.0))
                } else {
                    0.0
                }
            } else if s + 1 >= k {
                1.0 / (s_f + 1.0)
            } else {
                0.0
            }
        });
    }
    Ok(p.get(x) * total)
}

// p_x Σ_{y ∈ N_cut(x)} Σ_{S ⊆ N_cut(y)∖x} Π_{S, N_cut(y)∖x} / (|S|+1)
fn nc3(g: &Graph, d_cut: f64, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    let balls = cutoff_balls(g, d_cut)?;
    let mut total = 0.0;
    for &y in &balls[x - 1] {
        let w: Vec<Player> = balls[y - 1].iter().copied().filter(|&z| z != x).collect();
        total += first_among(&w, p)?;
    }
    Ok(p.get(x) * total)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

// p_x Σ_k w_k Σ_{S ⊆ Auth_k∖x} Π_{∅,S} / ((n_k - |S|) C(n_k, |S|))
fn full_credit(ci: &CreditInstance, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    let mut total = 0.0;
    for paper in ci.papers_of(x) {
        let nk = paper.authors.len();
        check_local(nk)?;
        let others = without(&paper.authors, x);
        let m = others.len();
        let mut inner = 0.0;
        for mask in 0..(1usize << m) {
            let s = mask.count_ones() as usize;
            let dead: f64 = others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &l)| 1.0 - p.get(l))
                .product();
            inner += dead / ((nk - s) as f64 * binomial(nk, s));
        }
        total += paper.score * inner;
    }
    Ok(p.get(x) * total)
}

// Σ_k (w_k / n_k) Π_{Auth_k, Auth_k}
fn full_obligation(ci: &CreditInstance, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    let mut total = 0.0;
    for paper in ci.papers_of(x) {
        check_local(paper.authors.len())?;
        let all_live: f64 = paper.authors.iter().map(|&a| p.get(a)).product();
        total += paper.score / paper.authors.len() as f64 * all_live;
    }
    Ok(total)
}

/// `p_x Σ_{l ∈ CA(x)} C(x, l) (2 - p_l) / 2`, the full credit Shapley value
/// when every paper of `x` has exactly two authors.
pub fn shapley_fc_two_author(ci: &CreditInstance, p: &ReliabilityProfile, x: Player) -> Result<f64> {
    p.check_len(ci.n())?;
    check_player(ci.n(), x)?;
    if let Some(paper) = ci.papers_of(x).find(|paper| paper.authors.len() != 2) {
        return Err(Error::domain(format!(
            "player {x} has a paper with {} authors; two required",
            paper.authors.len()
        )));
    }
    Ok(p.get(x)
        * coauthor_contributions(ci, x)?
            .into_iter()
            .map(|(l, c)| c * (2.0 - p.get(l)) / 2.0)
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credit::Paper;
    use crate::reliability::Limits;
    use crate::shapley::shapley_definitional;
    use approx::assert_abs_diff_eq;

    fn paper(authors: &[Player], score: f64) -> Paper {
        Paper {
            authors: authors.to_vec(),
            score,
        }
    }

    fn profile(p: &[f64]) -> ReliabilityProfile {
        ReliabilityProfile::new(p.to_vec()).unwrap()
    }

    #[test]
    fn full_obligation_examples() {
        let ci = CreditInstance::new(2, vec![paper(&[1, 2], 2.0)]).unwrap();
        let v = shapley_closed(&GameSpec::Fo(ci), &ReliabilityProfile::ones(2), 1).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);

        let ci = CreditInstance::new(3, vec![paper(&[1, 2, 3], 3.0)]).unwrap();
        let v = shapley_closed(&GameSpec::Fo(ci), &profile(&[0.5, 0.5, 0.5]), 1).unwrap();
        assert_abs_diff_eq!(v, 0.125, epsilon = 1e-15);
    }

    #[test]
    fn full_credit_example() {
        let ci = CreditInstance::new(2, vec![paper(&[1, 2], 2.0)]).unwrap();
        let p = profile(&[1.0, 0.5]);
        assert_abs_diff_eq!(shapley_closed(&GameSpec::Fc(ci.clone()), &p, 1).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(shapley_fc_two_author(&ci, &p, 1).unwrap(), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn two_author_formula_edge_cases() {
        let ci = CreditInstance::new(3, vec![paper(&[1, 2], 4.0), paper(&[1, 3], 2.0)]).unwrap();
        let p = profile(&[0.7, 1.0, 1.0]);
        assert_abs_diff_eq!(shapley_fc_two_author(&ci, &p, 1).unwrap(), 0.7 * 6.0 / 2.0, epsilon = 1e-15);

        let ci = CreditInstance::new(3, vec![paper(&[2, 3], 4.0)]).unwrap();
        assert_eq!(shapley_fc_two_author(&ci, &p, 1).unwrap(), 0.0);

        let ci = CreditInstance::new(3, vec![paper(&[1, 2, 3], 4.0)]).unwrap();
        assert!(matches!(shapley_fc_two_author(&ci, &p, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn nc2_with_dead_neighbor_matches_enumeration() {
        // path 1-2-3, k = 2, player 2 never participates: only 1 and 3 are
        // live, and 2 is covered once both have joined, so Sh(1) = 1.5.
        let spec = GameSpec::nc2(Graph::path(3), 2).unwrap();
        let p = profile(&[1.0, 0.0, 1.0]);
        assert_abs_diff_eq!(shapley_closed(&spec, &p, 1).unwrap(), 1.5, epsilon = 1e-12);
        let def = shapley_definitional(&spec, Some(&p), &Limits::default()).unwrap();
        assert_abs_diff_eq!(def.get(1), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn nc3_uses_cutoff_neighborhoods() {
        // edge 1-2 is longer than d_cut, so 2 is not in 1's ball; the path
        // 1-3-2 is within reach.
        let g = Graph::weighted(3, &[(1, 2, 5.0), (1, 3, 0.4), (3, 2, 0.4)]).unwrap();
        let spec = GameSpec::nc3(g, 1.0).unwrap();
        let p = profile(&[0.9, 0.3, 0.6]);
        let def = shapley_definitional(&spec, Some(&p), &Limits::default()).unwrap();
        for x in 1..=3 {
            assert_abs_diff_eq!(shapley_closed(&spec, &p, x).unwrap(), def.get(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn explicit_table_has_no_closed_form() {
        let t = crate::games::ExplicitTable::from_values(1, vec![0.0, 1.0]).unwrap();
        assert!(shapley_closed(&GameSpec::Table(t), &ReliabilityProfile::ones(1), 1).is_err());
    }

    #[test]
    fn neighborhood_cap() {
        let g = GameSpec::Nc1(Graph::star(22, 1));
        let err = shapley_closed(&g, &ReliabilityProfile::ones(22), 2).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: NEIGHBORHOOD_CAP, .. }));
    }
}
