use crate::error::{Error, Result};
use crate::reliability::ReliabilityProfile;

/// Shapley value of player 1 in the reliability extension of the
/// neighborhood game on the cycle `C_n`:
///
/// `p_1 ((p_2 p_n + p_2 p_3 + p_{n-1} p_n) / 3 - (p_3 + p_{n-1}) / 2 - p_2 - p_n + 3)`.
///
/// Needs `n >= 5` so that 2, 3, n-1, n are distinct.
pub fn shapley_cycle_closed(p: &ReliabilityProfile) -> Result<f64> {
    let n = p.len();
    if n < 5 {
        return Err(Error::domain(format!(
            "cycle formula needs n >= 5, got {n}; use shapley_definitional"
        )));
    }
    let (p1, p2, p3, pm, pn) = (p.get(1), p.get(2), p.get(3), p.get(n - 1), p.get(n));
    Ok(p1 * ((p2 * pn + p2 * p3 + pm * pn) / 3.0 - (p3 + pm) / 2.0 - p2 - pn + 3.0))
}
