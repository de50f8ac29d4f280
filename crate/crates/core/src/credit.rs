//! Coauthorship structures hosting the credit-attribution games.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::{check_player, Player, PlayerSet};

/// A paper: a nonempty author list and a nonnegative score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Paper {
    pub authors: Vec<Player>,
    pub score: f64,
}

/// Authors `1..=n` and their papers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CreditInstance {
    n: usize,
    papers: Vec<Paper>,
}

impl CreditInstance {
    /// Validates the instance. Author lists are sorted and deduplicated.
    pub fn new(n: usize, papers: Vec<Paper>) -> Result<Self> {
        let mut out = Vec::with_capacity(papers.len());
        for (i, mut paper) in papers.into_iter().enumerate() {
            paper.authors.sort_unstable();
            paper.authors.dedup();
            if paper.authors.is_empty() {
                return Err(Error::domain(format!("paper {i} has no authors")));
            }
            for &a in &paper.authors {
                check_player(n, a)?;
            }
            if !(paper.score >= 0.0 && paper.score.is_finite()) {
                return Err(Error::domain(format!(
                    "paper {i} has invalid score {}",
                    paper.score
                )));
            }
            out.push(paper);
        }
        Ok(CreditInstance { n, papers: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn papers(&self) -> &[Paper] {
        &self.papers
    }

    /// Papers with `x` among their authors.
    pub fn papers_of(&self, x: Player) -> impl Iterator<Item = &Paper> + '_ {
        self.papers
            .iter()
            .filter(move |p| p.authors.binary_search(&x).is_ok())
    }

    /// `CA(x)`, the players sharing at least one paper with `x`.
    pub fn coauthors(&self, x: Player) -> PlayerSet {
        self.papers_of(x)
            .flat_map(|p| p.authors.iter().copied())
            .filter(|&l| l != x)
            .collect()
    }
}

/// Joint contribution `C(x, l)`: total score of the papers `x` and `l`
/// wrote together, for every coauthor `l` of `x`.
pub fn coauthor_contributions(ci: &CreditInstance, x: Player) -> Result<BTreeMap<Player, f64>> {
    check_player(ci.n, x)?;
    let mut out = BTreeMap::new();
    for paper in ci.papers_of(x) {
        for &l in paper.authors.iter().filter(|&&l| l != x) {
            *out.entry(l).or_insert(0.0) += paper.score;
        }
    }
    Ok(out)
}

/// One two-author paper per edge, scored by the edge weight. The full
/// obligation game on the result is the induced-subgraph game of `g`.
pub fn induced_subgraph_to_credit(g: &Graph) -> CreditInstance {
    let papers = g
        .weighted_edges()
        .map(|(u, v, w)| Paper {
            authors: vec![u, v],
            score: w,
        })
        .collect();
    CreditInstance::new(g.n(), papers).expect("graph edges are valid papers")
}
