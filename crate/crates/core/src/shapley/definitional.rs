use super::ShapleyVector;
use crate::error::{Error, Result};
use crate::games::GameSpec;
use crate::reliability::{extend_table, Limits, ReliabilityProfile};

/// Shapley values by enumerating all `n!` orderings of the players.
///
/// With a profile the game is replaced by its reliability extension; every
/// marginal `v̄(S ∪ x) - v̄(S)` is an exact expectation over the live
/// subsets. Orderings are visited in a fixed sequence, so results are
/// bitwise reproducible.
pub fn shapley_definitional(
    spec: &GameSpec,
    p: Option<&ReliabilityProfile>,
    limits: &Limits,
) -> Result<ShapleyVector> {
    let n = spec.n();
    Error::check_cap("players for definitional Shapley", n, limits.definitional_players)?;
    let mut table = spec.value_table()?;
    if let Some(p) = p {
        p.check_len(n)?;
        extend_table(&mut table, p);
    }

    let mut sums = vec![0.0; n];
    let mut count = 0u64;
    let mut order: Vec<usize> = (0..n).collect();
    let mut accumulate = |order: &[usize]| {
        let mut mask = 0usize;
        for &i in order {
            let next = mask | 1 << i;
            sums[i] += table[next] - table[mask];
            mask = next;
        }
        count += 1;
    };

    // Heap's algorithm, iterative form.
    accumulate(&order);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            accumulate(&order);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let values = sums.into_iter().map(|s| s / count as f64).collect();
    Ok(ShapleyVector { values })
}
