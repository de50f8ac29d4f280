use crate::reliability::ReliabilityProfile;
use crate::Player;

/// `Σ_{S ⊆ members} weight(|S|, mask(S)) · Π_{S, members}`, where bit `i` of
/// the mask stands for `members[i]`. Subsets are visited in mask order.
pub(crate) fn expect_over_live<F>(members: &[Player], p: &ReliabilityProfile, weight: F) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    let m = members.len();
    let probs: Vec<f64> = members.iter().map(|&y| p.get(y)).collect();
    let mut total = 0.0;
    for mask in 0..(1usize << m) {
        let w = weight(mask.count_ones() as usize, mask);
        if w == 0.0 {
            continue;
        }
        let mut pi = 1.0;
        for (i, &q) in probs.iter().enumerate() {
            pi *= if mask >> i & 1 == 1 { q } else { 1.0 - q };
        }
        total += w * pi;
    }
    total
}

/// Bitmask with one bit per player, bit `x - 1` for player `x`.
pub(crate) fn bit(x: Player) -> u64 {
    1u64 << (x - 1)
}
