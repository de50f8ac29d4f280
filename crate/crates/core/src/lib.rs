//! Shapley values of reliability extensions of network-centrality and
//! credit-attribution games, and optimal budget-constrained attacks on them.
//!
//! Players are numbered `1..=n`. A [`GameSpec`] describes one of the five
//! supported games (plus explicit tables for testing), a
//! [`ReliabilityProfile`] assigns each player an independent participation
//! probability, and the [`shapley`] and [`attacks`] modules compute power
//! indices and attacks on them. The [`oracle`] module holds numerical
//! validators that never call the attack solvers.

pub mod attacks;
pub mod credit;
pub mod error;
pub mod games;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod reliability;
pub mod shapley;
pub(crate) mod subsets;

pub use credit::{coauthor_contributions, induced_subgraph_to_credit, CreditInstance, Paper};
pub use error::{Error, Result};
pub use games::{char_value, GameFile, GameSpec};
pub use graph::{ball, boundary, Graph};
pub use reliability::{pi_partial, pi_prob, reliability_value, Limits, ReliabilityProfile};
pub use shapley::ShapleyVector;

use std::collections::BTreeSet;

/// A player, numbered from 1.
pub type Player = usize;

/// A coalition of players.
pub type PlayerSet = BTreeSet<Player>;

/// Absolute tolerance used by equality assertions on closed forms.
pub const TOLERANCE: f64 = 1e-9;

pub(crate) fn check_player(n: usize, x: Player) -> Result<()> {
    if x == 0 || x > n {
        return Err(Error::domain(format!("player {x} outside 1..={n}")));
    }
    Ok(())
}

pub(crate) fn check_set(n: usize, s: &PlayerSet) -> Result<()> {
    s.iter().try_for_each(|&x| check_player(n, x))
}
