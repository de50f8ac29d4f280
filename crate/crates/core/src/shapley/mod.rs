//! Shapley values of games and of their reliability extensions.

mod closed;
mod cycle;
mod definitional;
mod gradient;

pub use closed::{shapley_closed, shapley_fc_two_author, NEIGHBORHOOD_CAP};
pub use cycle::shapley_cycle_closed;
pub use definitional::shapley_definitional;
pub use gradient::{shapley_gradient, shapley_gradient_nc1};

use serde::Serialize;

use crate::Player;

/// One Shapley value per player; entry `x - 1` belongs to player `x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ShapleyVector {
    pub values: Vec<f64>,
}

impl ShapleyVector {
    pub fn get(&self, x: Player) -> f64 {
        self.values[x - 1]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}
