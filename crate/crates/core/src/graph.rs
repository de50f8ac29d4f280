//! Simple undirected graphs hosting the network-centrality games.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::{check_player, check_set, Player, PlayerSet};

/// A finite simple undirected graph on players `1..=n`, optionally with
/// strictly positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Player, Player)>,
    weights: Option<Vec<f64>>,
    adj: Vec<Vec<(Player, f64)>>,
}

impl Graph {
    /// Unweighted graph. Edges are normalized to `(min, max)`.
    pub fn new(n: usize, edges: &[(Player, Player)]) -> Result<Self> {
        Self::build(n, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(), false)
    }

    /// Weighted graph; every weight must be strictly positive.
    pub fn weighted(n: usize, edges: &[(Player, Player, f64)]) -> Result<Self> {
        Self::build(n, edges.to_vec(), true)
    }

    fn build(n: usize, edges: Vec<(Player, Player, f64)>, weighted: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n + 1];
        let mut norm = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            check_player(n, u)?;
            check_player(n, v)?;
            if u == v {
                return Err(Error::domain(format!("self-loop at {u}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::domain(format!("edge ({u},{v}) has non-positive weight {w}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::domain(format!("duplicate edge ({},{})", e.0, e.1)));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
            norm.push(e);
            weights.push(w);
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Graph {
            n,
            edges: norm,
            weights: weighted.then_some(weights),
            adj,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        Self::new(n, &edges).expect("complete graph is simple")
    }

    /// Star with the given center joined to every other player.
    pub fn star(n: usize, center: Player) -> Self {
        let edges: Vec<_> = (1..=n).filter(|&v| v != center).map(|v| (center, v)).collect();
        Self::new(n, &edges).expect("star is simple")
    }

    /// Cycle `1 - 2 - ... - n - 1`, for `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (1..=n).map(|u| (u, u % n + 1)).collect();
        Self::new(n, &edges).expect("cycle is simple")
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|u| (u, u + 1)).collect();
        Self::new(n, &edges).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Player, Player)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Edges with their weights (1.0 when unweighted).
    pub fn weighted_edges(&self) -> impl Iterator<Item = (Player, Player, f64)> + '_ {
        self.edges.iter().enumerate().map(|(i, &(u, v))| {
            (u, v, self.weights.as_ref().map_or(1.0, |w| w[i]))
        })
    }

    /// Open neighborhood `N(v)`, ascending.
    pub fn neighbors(&self, v: Player) -> impl Iterator<Item = Player> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: Player) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Player, v: Player) -> bool {
        self.adj[u].iter().any(|&(w, _)| w == v)
    }

    /// Closed neighborhood `N(v) ∪ {v}`, ascending.
    pub fn closed_neighborhood(&self, v: Player) -> Vec<Player> {
        let mut out: Vec<Player> = self.neighbors(v).collect();
        let pos = out.partition_point(|&u| u < v);
        out.insert(pos, v);
        out
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// The center of the star, if the graph is a star on at least three
    /// players. (On two players the graph is complete, not a star.)
    pub fn star_center(&self) -> Option<Player> {
        if self.n < 3 || self.edges.len() != self.n - 1 {
            return None;
        }
        (1..=self.n).find(|&v| self.degree(v) == self.n - 1)
    }

    /// Is this exactly the cycle `1 - 2 - ... - n - 1`?
    pub fn is_canonical_cycle(&self) -> bool {
        self.n >= 3
            && self.edges.len() == self.n
            && (1..=self.n).all(|u| self.has_edge(u, u % self.n + 1))
    }

    /// Shortest-path distances from a set of sources (label-setting,
    /// nonnegative weights). Unweighted graphs use hop distance.
    /// Unreachable players get `f64::INFINITY`; index 0 is unused.
    pub fn distances_from(&self, sources: &PlayerSet) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.n + 1];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Label(0.0, s));
        }
        while let Some(Label(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Label(nd, v));
                }
            }
        }
        dist
    }
}

#[derive(PartialEq)]
struct Label(f64, Player);

impl Eq for Label {}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on player
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `δ(S)`: players outside `S` adjacent to some member of `S`.
pub fn boundary(g: &Graph, s: &PlayerSet) -> Result<PlayerSet> {
    check_set(g.n, s)?;
    Ok(s.iter()
        .flat_map(|&x| g.neighbors(x))
        .filter(|y| !s.contains(y))
        .collect())
}

/// `B(S, r)`: players within distance `r` of some member of `S`, ties at
/// exactly `r` included.
pub fn ball(g: &Graph, s: &PlayerSet, r: f64) -> Result<PlayerSet> {
    check_set(g.n, s)?;
    if r.is_nan() || r < 0.0 {
        return Err(Error::domain(format!("ball radius {r} must be nonnegative")));
    }
    if s.is_empty() {
        return Ok(PlayerSet::new());
    }
    let dist = g.distances_from(s);
    Ok((1..=g.n).filter(|&v| dist[v] <= r).collect())
}
