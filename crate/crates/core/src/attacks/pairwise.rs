use crate::error::Result;
use crate::games::GameSpec;
use crate::graph::{ball, Graph};
use crate::{check_player, Player, PlayerSet};

/// Players whose reliability can affect `Sh(y)`. Freezing them keeps `y`'s
/// value exactly as it was.
///
/// NC1 and NC2 look two hops out, NC3 within `2 * d_cut`, and credit games
/// at `y`'s coauthors. An explicit table gives no structure, so everybody is
/// returned.
pub fn pairwise_exempt_set(spec: &GameSpec, y: Player) -> Result<PlayerSet> {
    check_player(spec.n(), y)?;
    match spec {
        GameSpec::Nc1(g) | GameSpec::Nc2 { graph: g, .. } => Ok(two_hops(g, y)),
        GameSpec::Nc3 { graph, d_cut } => ball(graph, &PlayerSet::from([y]), 2.0 * d_cut),
        GameSpec::Fc(ci) | GameSpec::Fo(ci) => {
            let mut set = ci.coauthors(y);
            set.insert(y);
            Ok(set)
        }
        GameSpec::Table(_) => Ok((1..=spec.n()).collect()),
    }
}

fn two_hops(g: &Graph, y: Player) -> PlayerSet {
    let mut out = PlayerSet::from([y]);
    for z in g.neighbors(y) {
        out.insert(z);
        out.extend(g.neighbors(z));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credit::{CreditInstance, Paper};

    #[test]
    fn cycle_ball() {
        let set = pairwise_exempt_set(&GameSpec::Nc1(Graph::cycle(7)), 1).unwrap();
        assert_eq!(set, PlayerSet::from([1, 2, 3, 6, 7]));
    }

    #[test]
    fn dense_graphs_freeze_everybody() {
        for g in [Graph::complete(5), Graph::star(5, 2)] {
            for y in 1..=5 {
                assert_eq!(pairwise_exempt_set(&GameSpec::Nc1(g.clone()), y).unwrap().len(), 5);
            }
        }
    }

    #[test]
    fn credit_coauthors() {
        let papers = vec![
            Paper { authors: vec![2, 3], score: 1.0 },
            Paper { authors: vec![2, 5], score: 1.0 },
            Paper { authors: vec![1, 4], score: 1.0 },
        ];
        let ci = CreditInstance::new(5, papers).unwrap();
        assert_eq!(pairwise_exempt_set(&GameSpec::Fc(ci), 2).unwrap(), PlayerSet::from([2, 3, 5]));
    }
}
