//! The reliability extension `v̄(S) = Σ_{T⊆S} v(T) Π_{T,S}` of a game.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{char_value, GameSpec};
use crate::{check_player, check_set, Player, PlayerSet};

/// Independent participation probabilities `p_1..p_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ReliabilityProfile(Vec<f64>);

impl ReliabilityProfile {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((i, q)) = p.iter().enumerate().find(|(_, q)| !(0.0..=1.0).contains(*q)) {
            return Err(Error::domain(format!(
                "probability of player {} is {q}, outside [0, 1]",
                i + 1
            )));
        }
        Ok(ReliabilityProfile(p))
    }

    /// Everybody always participates.
    pub fn ones(n: usize) -> Self {
        ReliabilityProfile(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `p_x` for player `x` (1-based).
    pub fn get(&self, x: Player) -> f64 {
        self.0[x - 1]
    }

    /// Sets `p_x`; the caller keeps it within `[0, 1]`.
    pub fn set(&mut self, x: Player, value: f64) {
        debug_assert!((0.0..=1.0).contains(&value), "p_{x} = {value}");
        self.0[x - 1] = value;
    }

    pub fn with(mut self, x: Player, value: f64) -> Self {
        self.set(x, value);
        self
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::domain(format!(
                "profile has {} entries for {n} players",
                self.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for ReliabilityProfile {
    type Error = Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        Self::new(p)
    }
}

impl From<ReliabilityProfile> for Vec<f64> {
    fn from(p: ReliabilityProfile) -> Self {
        p.0
    }
}

/// Size caps for the exponential reference routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest coalition `reliability_value` will expand (cost `2^|S|`).
    pub subset_cap: usize,
    /// Largest game `shapley_definitional` will enumerate (cost `n!`).
    pub definitional_players: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subset_cap: 20,
            definitional_players: 9,
        }
    }
}

fn check_subset(t: &PlayerSet, s: &PlayerSet) -> Result<()> {
    if !t.is_subset(s) {
        return Err(Error::domain(format!("{t:?} is not a subset of {s:?}")));
    }
    Ok(())
}

/// `Π_{T,S}`: probability that, among `S`, exactly the members of `T` are live.
pub fn pi_prob(t: &PlayerSet, s: &PlayerSet, p: &ReliabilityProfile) -> Result<f64> {
    check_subset(t, s)?;
    check_set(p.len(), s)?;
    Ok(s.iter()
        .map(|&i| if t.contains(&i) { p.get(i) } else { 1.0 - p.get(i) })
        .product())
}

/// `∂Π_{T,S} / ∂p_j`.
pub fn pi_partial(t: &PlayerSet, s: &PlayerSet, p: &ReliabilityProfile, j: Player) -> Result<f64> {
    check_subset(t, s)?;
    check_set(p.len(), s)?;
    check_player(p.len(), j)?;
    let mut s_minus = s.clone();
    if !s_minus.remove(&j) {
        return Ok(0.0);
    }
    if t.contains(&j) {
        let mut t_minus = t.clone();
        t_minus.remove(&j);
        pi_prob(&t_minus, &s_minus, p)
    } else {
        Ok(-pi_prob(t, &s_minus, p)?)
    }
}

/// `v̄(S)`, the expected value of the live part of `S`.
pub fn reliability_value(
    spec: &GameSpec,
    p: &ReliabilityProfile,
    s: &PlayerSet,
    limits: &Limits,
) -> Result<f64> {
    p.check_len(spec.n())?;
    check_set(spec.n(), s)?;
    Error::check_cap("coalition size for reliability_value", s.len(), limits.subset_cap)?;
    let members: Vec<Player> = s.iter().copied().collect();
    let mut total = 0.0;
    for mask in 0..(1usize << members.len()) {
        let t: PlayerSet = members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let v = char_value(spec, &t)?;
        if v != 0.0 {
            total += v * pi_prob(&t, s, p)?;
        }
    }
    Ok(total)
}

/// Turns a table of `v(mask)` into `v̄(mask)` for all masks at once, one
/// player at a time: `v̄(S) = p_i v̄(S) + (1 - p_i) v̄(S ∖ i)` for `i ∈ S`.
pub(crate) fn extend_table(values: &mut [f64], p: &ReliabilityProfile) {
    let n = p.len();
    debug_assert_eq!(values.len(), 1 << n);
    for i in 0..n {
        let q = p.as_slice()[i];
        let b = 1usize << i;
        for s in 0..values.len() {
            if s & b != 0 {
                values[s] = q * values[s] + (1.0 - q) * values[s ^ b];
            }
        }
    }
}
