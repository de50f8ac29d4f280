//! Characteristic functions of the supported games and the JSON game file.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::credit::{CreditInstance, Paper};
use crate::error::{Error, Result};
use crate::graph::{ball, boundary, Graph};
use crate::subsets::bit;
use crate::{check_set, Player, PlayerSet};

/// Largest player count for which bitmask value tables are built.
pub const MAX_TABLE_PLAYERS: usize = 24;

/// A game explicitly listing `v(S)` for every coalition. Only meant for
/// testing the oracles against hand-built games.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitTable {
    n: usize,
    values: Vec<f64>,
}

impl ExplicitTable {
    /// Tabulates `f` over all coalitions; `f(∅)` must be zero.
    pub fn from_fn(n: usize, f: impl Fn(&PlayerSet) -> f64) -> Result<Self> {
        Error::check_cap("explicit table players", n, MAX_TABLE_PLAYERS)?;
        let values: Vec<f64> = (0..1u64 << n).map(|mask| f(&mask_to_set(mask))).collect();
        Self::from_values(n, values)
    }

    /// `values[mask]` is the value of the coalition whose bit `x - 1` is set
    /// for each member `x`.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        Error::check_cap("explicit table players", n, MAX_TABLE_PLAYERS)?;
        if values.len() != 1 << n {
            return Err(Error::domain(format!(
                "explicit table needs {} values, got {}",
                1u64 << n,
                values.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::domain("explicit table must have v(∅) = 0"));
        }
        Ok(ExplicitTable { n, values })
    }

    pub fn value(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }
}

/// One of the studied games.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSpec {
    /// `|S ∪ δ(S)|`.
    Nc1(Graph),
    /// `|S ∪ {x ∉ S : |N(x) ∩ S| ≥ k}|`.
    Nc2 { graph: Graph, k: usize },
    /// `|B(S, d_cut)|`.
    Nc3 { graph: Graph, d_cut: f64 },
    /// Total score of the papers with at least one author in `S`.
    Fc(CreditInstance),
    /// Total score of the papers with all authors in `S`.
    Fo(CreditInstance),
    Table(ExplicitTable),
}

impl GameSpec {
    pub fn nc2(graph: Graph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("NC2 threshold k must be at least 1"));
        }
        Ok(GameSpec::Nc2 { graph, k })
    }

    pub fn nc3(graph: Graph, d_cut: f64) -> Result<Self> {
        if !(d_cut > 0.0 && d_cut.is_finite()) {
            return Err(Error::domain(format!("d_cut must be positive, got {d_cut}")));
        }
        Ok(GameSpec::Nc3 { graph, d_cut })
    }

    pub fn n(&self) -> usize {
        match self {
            GameSpec::Nc1(g) | GameSpec::Nc2 { graph: g, .. } | GameSpec::Nc3 { graph: g, .. } => {
                g.n()
            }
            GameSpec::Fc(ci) | GameSpec::Fo(ci) => ci.n(),
            GameSpec::Table(t) => t.n,
        }
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            GameSpec::Nc1(g) | GameSpec::Nc2 { graph: g, .. } | GameSpec::Nc3 { graph: g, .. } => {
                Some(g)
            }
            _ => None,
        }
    }

    pub fn credit(&self) -> Option<&CreditInstance> {
        match self {
            GameSpec::Fc(ci) | GameSpec::Fo(ci) => Some(ci),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GameSpec::Nc1(_) => "nc1",
            GameSpec::Nc2 { .. } => "nc2",
            GameSpec::Nc3 { .. } => "nc3",
            GameSpec::Fc(_) => "fc",
            GameSpec::Fo(_) => "fo",
            GameSpec::Table(_) => "table",
        }
    }

    /// `v(mask)` for every coalition mask, in mask order.
    pub(crate) fn value_table(&self) -> Result<Vec<f64>> {
        let n = self.n();
        Error::check_cap("players in value table", n, MAX_TABLE_PLAYERS)?;
        let full = 1u64 << n;
        let values = match self {
            GameSpec::Table(t) => t.values.clone(),
            GameSpec::Nc1(g) => {
                let closed: Vec<u64> = (1..=n).map(|y| mask_of(&g.closed_neighborhood(y))).collect();
                (0..full)
                    .map(|s| {
                        let covered = (1..=n)
                            .filter(|&y| s & bit(y) != 0)
                            .fold(0u64, |acc, y| acc | closed[y - 1]);
                        covered.count_ones() as f64
                    })
                    .collect()
            }
            GameSpec::Nc2 { graph, k } => {
                let open: Vec<u64> = (1..=n)
                    .map(|y| mask_of(&graph.neighbors(y).collect::<Vec<_>>()))
                    .collect();
                (0..full)
                    .map(|s| {
                        (1..=n)
                            .filter(|&z| {
                                s & bit(z) != 0 || (open[z - 1] & s).count_ones() as usize >= *k
                            })
                            .count() as f64
                    })
                    .collect()
            }
            GameSpec::Nc3 { graph, d_cut } => {
                let balls = cutoff_balls(graph, *d_cut)?;
                let masks: Vec<u64> = balls.iter().map(set_to_mask).collect();
                (0..full)
                    .map(|s| {
                        let covered = (1..=n)
                            .filter(|&y| s & bit(y) != 0)
                            .fold(0u64, |acc, y| acc | masks[y - 1]);
                        covered.count_ones() as f64
                    })
                    .collect()
            }
            GameSpec::Fc(ci) | GameSpec::Fo(ci) => {
                let full_obligation = matches!(self, GameSpec::Fo(_));
                let papers: Vec<(u64, f64)> = ci
                    .papers()
                    .iter()
                    .map(|p| (mask_of(&p.authors), p.score))
                    .collect();
                (0..full)
                    .map(|s| {
                        papers
                            .iter()
                            .filter(|(m, _)| {
                                if full_obligation {
                                    m & s == *m
                                } else {
                                    m & s != 0
                                }
                            })
                            .map(|(_, w)| w)
                            .sum()
                    })
                    .collect()
            }
        };
        Ok(values)
    }
}

/// `N_cut(y) = B({y}, d_cut)` for every player, index `y - 1`.
pub(crate) fn cutoff_balls(g: &Graph, d_cut: f64) -> Result<Vec<PlayerSet>> {
    (1..=g.n())
        .map(|y| ball(g, &PlayerSet::from([y]), d_cut))
        .collect()
}

pub(crate) fn mask_of(players: &[Player]) -> u64 {
    players.iter().fold(0, |acc, &x| acc | bit(x))
}

pub(crate) fn set_to_mask(s: &PlayerSet) -> u64 {
    s.iter().fold(0, |acc, &x| acc | bit(x))
}

pub(crate) fn mask_to_set(mask: u64) -> PlayerSet {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i as Player + 1)
        .collect()
}

/// The characteristic function `v(S)` of the game.
pub fn char_value(spec: &GameSpec, s: &PlayerSet) -> Result<f64> {
    check_set(spec.n(), s)?;
    let value = match spec {
        GameSpec::Nc1(g) => (s.len() + boundary(g, s)?.len()) as f64,
        GameSpec::Nc2 { graph, k } => (1..=graph.n())
            .filter(|z| s.contains(z) || graph.neighbors(*z).filter(|y| s.contains(y)).count() >= *k)
            .count() as f64,
        GameSpec::Nc3 { graph, d_cut } => ball(graph, s, *d_cut)?.len() as f64,
        GameSpec::Fc(ci) => ci
            .papers()
            .iter()
            .filter(|p| p.authors.iter().any(|a| s.contains(a)))
            .map(|p| p.score)
            .sum(),
        GameSpec::Fo(ci) => ci
            .papers()
            .iter()
            .filter(|p| p.authors.iter().all(|a| s.contains(a)))
            .map(|p| p.score)
            .sum(),
        GameSpec::Table(t) => t.value(set_to_mask(s)),
    };
    Ok(value)
}

/// On-disk game description.
///
/// ```json
/// { "variant": "nc3", "n": 3, "edges": [[1, 2, 0.4], [2, 3, 0.7]], "d_cut": 1.0 }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub variant: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_cut: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub papers: Option<Vec<Paper>>,
}

impl GameFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("game file: {e}")))
    }

    pub fn to_spec(&self) -> Result<GameSpec> {
        let field = |name: &str, msg: &str| Error::domain(format!("game file field `{name}`: {msg}"));
        let graph_variant = matches!(self.variant.as_str(), "nc1" | "nc2" | "nc3");
        let credit_variant = matches!(self.variant.as_str(), "fc" | "fo");
        if !graph_variant && !credit_variant {
            return Err(field("variant", &format!("unknown variant {:?}", self.variant)));
        }
        if graph_variant && self.papers.is_some() {
            return Err(field("papers", "not allowed for centrality games"));
        }
        if credit_variant && self.edges.is_some() {
            return Err(field("edges", "not allowed for credit games"));
        }
        if self.variant != "nc2" && self.k.is_some() {
            return Err(field("k", "only allowed for nc2"));
        }
        if self.variant != "nc3" && self.d_cut.is_some() {
            return Err(field("d_cut", "only allowed for nc3"));
        }

        if credit_variant {
            let papers = self.papers.clone().ok_or_else(|| field("papers", "missing"))?;
            let ci = CreditInstance::new(self.n, papers).map_err(|e| field("papers", &e.to_string()))?;
            return Ok(if self.variant == "fc" { GameSpec::Fc(ci) } else { GameSpec::Fo(ci) });
        }

        let edges = self.edges.as_ref().ok_or_else(|| field("edges", "missing"))?;
        let graph = parse_edges(self.n, edges).map_err(|e| field("edges", &e.to_string()))?;
        match self.variant.as_str() {
            "nc1" => Ok(GameSpec::Nc1(graph)),
            "nc2" => {
                let k = self.k.ok_or_else(|| field("k", "missing"))?;
                GameSpec::nc2(graph, k).map_err(|e| field("k", &e.to_string()))
            }
            _ => {
                let d = self.d_cut.ok_or_else(|| field("d_cut", "missing"))?;
                GameSpec::nc3(graph, d).map_err(|e| field("d_cut", &e.to_string()))
            }
        }
    }

    /// The file describing `spec`; explicit tables have no file form.
    pub fn from_spec(spec: &GameSpec) -> Result<Self> {
        let mut file = GameFile {
            variant: spec.name().to_string(),
            n: spec.n(),
            edges: None,
            k: None,
            d_cut: None,
            papers: None,
        };
        match spec {
            GameSpec::Table(_) => return Err(Error::domain("explicit tables cannot be written")),
            GameSpec::Fc(ci) | GameSpec::Fo(ci) => file.papers = Some(ci.papers().to_vec()),
            GameSpec::Nc1(g) | GameSpec::Nc2 { graph: g, .. } | GameSpec::Nc3 { graph: g, .. } => {
                file.edges = Some(
                    g.weighted_edges()
                        .map(|(u, v, w)| {
                            if g.is_weighted() {
                                vec![u as f64, v as f64, w]
                            } else {
                                vec![u as f64, v as f64]
                            }
                        })
                        .collect(),
                );
            }
        }
        if let GameSpec::Nc2 { k, .. } = spec {
            file.k = Some(*k);
        }
        if let GameSpec::Nc3 { d_cut, .. } = spec {
            file.d_cut = Some(*d_cut);
        }
        Ok(file)
    }
}

fn parse_edges(n: usize, edges: &[Vec<f64>]) -> Result<Graph> {
    let as_player = |x: f64| -> Result<Player> {
        if x >= 1.0 && x.fract() == 0.0 {
            Ok(x as Player)
        } else {
            Err(Error::domain(format!("endpoint {x} is not a player id")))
        }
    };
    let arities: BTreeSet<usize> = edges.iter().map(Vec::len).collect();
    if arities.iter().any(|&a| a != 2 && a != 3) {
        return Err(Error::domain("each edge must be [u, v] or [u, v, w]"));
    }
    if arities.len() > 1 {
        return Err(Error::domain("mixed weighted and unweighted edges"));
    }
    if arities.contains(&3) {
        let list = edges
            .iter()
            .map(|e| Ok((as_player(e[0])?, as_player(e[1])?, e[2])))
            .collect::<Result<Vec<_>>>()?;
        Graph::weighted(n, &list)
    } else {
        let list = edges
            .iter()
            .map(|e| Ok((as_player(e[0])?, as_player(e[1])?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(n, &list)
    }
}
