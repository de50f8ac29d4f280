//! Seeded random instances for validation runs.

use rand::{Rng, RngCore};

use crate::credit::{CreditInstance, Paper};
use crate::graph::Graph;
use crate::reliability::ReliabilityProfile;
use crate::Player;

/// Erdős–Rényi graph with edge probability `density`.
pub fn random_graph(rng: &mut impl RngCore, n: usize, density: f64) -> Graph {
    let edges: Vec<(Player, Player)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(density))
        .collect();
    Graph::new(n, &edges).expect("generated graph is simple")
}

/// Like [`random_graph`], with weights drawn from `[lo, hi)`.
pub fn random_weighted_graph(
    rng: &mut impl RngCore,
    n: usize,
    density: f64,
    (lo, hi): (f64, f64),
) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(density) {
                edges.push((u, v, rng.random_range(lo..hi)));
            }
        }
    }
    Graph::weighted(n, &edges).expect("generated graph is simple")
}

/// Up to `papers` papers, each with between one and `max_authors` authors
/// and an integer score in `1..=10`.
pub fn random_credit(
    rng: &mut impl RngCore,
    n: usize,
    papers: usize,
    max_authors: usize,
) -> CreditInstance {
    let list = (0..papers)
        .map(|_| {
            let size = rng.random_range(1..=max_authors.min(n));
            let mut authors: Vec<Player> = (1..=n).collect();
            for i in 0..size {
                let j = rng.random_range(i..n);
                authors.swap(i, j);
            }
            authors.truncate(size);
            Paper {
                authors,
                score: rng.random_range(1..=10) as f64,
            }
        })
        .collect();
    CreditInstance::new(n, list).expect("generated instance is valid")
}

/// Two-author papers only: each unordered pair gets a paper with
/// probability `density`, scored in `[0.5, 5)`.
pub fn random_two_author(rng: &mut impl RngCore, n: usize, density: f64) -> CreditInstance {
    let mut list = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(density) {
                list.push(Paper {
                    authors: vec![u, v],
                    score: rng.random_range(0.5..5.0),
                });
            }
        }
    }
    CreditInstance::new(n, list).expect("generated instance is valid")
}

/// Probabilities drawn uniformly from `[lo, hi]`.
pub fn random_profile(rng: &mut impl RngCore, n: usize, (lo, hi): (f64, f64)) -> ReliabilityProfile {
    ReliabilityProfile::new((0..n).map(|_| rng.random_range(lo..=hi)).collect())
        .expect("range within [0, 1]")
}
