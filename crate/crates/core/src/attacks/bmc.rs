//! Budgeted Max-Coverage and its reduction to removal attacks on the full
//! obligation game.

use serde::{Deserialize, Serialize};

use crate::credit::{CreditInstance, Paper};
use crate::error::{Error, Result};
use crate::Player;

use super::{fo_removal_exhaustive, AttackPlan, CostModel};

/// Largest set family [`bmc_solve_exact`] will enumerate.
pub const MAX_BMC_SETS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BmcElement {
    pub weight: u64,
}

/// A set of elements (1-based indices into the element list) and its cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BmcSet {
    pub members: Vec<usize>,
    pub cost: u64,
}

/// Pick sets of total cost at most `k` covering weight at least `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BmcInstance {
    pub elements: Vec<BmcElement>,
    pub sets: Vec<BmcSet>,
    pub k: u64,
    #[serde(rename = "L")]
    pub threshold: u64,
}

impl BmcInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        let inst: BmcInstance =
            serde_json::from_str(text).map_err(|e| Error::domain(format!("BMC instance: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.elements.iter().enumerate() {
            if e.weight == 0 {
                return Err(Error::domain(format!("elements[{i}].weight must be positive")));
            }
        }
        for (j, s) in self.sets.iter().enumerate() {
            if s.cost == 0 {
                return Err(Error::domain(format!("sets[{j}].cost must be positive")));
            }
            if let Some(&m) = s.members.iter().find(|&&m| m == 0 || m > self.elements.len()) {
                return Err(Error::domain(format!(
                    "sets[{j}].members: element {m} outside 1..={}",
                    self.elements.len()
                )));
            }
        }
        Ok(())
    }

    /// Total weight of the elements covered by the chosen sets (0-based).
    pub fn coverage(&self, chosen: &[usize]) -> u64 {
        let mut hit = vec![false; self.elements.len()];
        for &j in chosen {
            for &m in &self.sets[j].members {
                hit[m - 1] = true;
            }
        }
        hit.iter().zip(&self.elements).filter(|(h, _)| **h).map(|(_, e)| e.weight).sum()
    }
}

/// The removal-attack instance built from a BMC instance. Set `j` (1-based)
/// becomes player `j + 1`; the target is player 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BmcReduction {
    pub instance: CreditInstance,
    pub costs: CostModel,
    pub budget: f64,
    pub target: Player,
    /// The Shapley decrease the attack must reach for a YES answer.
    pub threshold: f64,
}

/// One paper per element, written by player 1 and every set holding the
/// element, scored `(#authors) * weight`. Baselines are all 1, so player 1
/// collects exactly the element weights, and removing a family of sets
/// takes away exactly the weight it covers.
pub fn bmc_reduce(inst: &BmcInstance) -> Result<BmcReduction> {
    inst.validate()?;
    let n = inst.sets.len() + 1;
    let papers = inst
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut authors = vec![1];
            authors.extend(
                inst.sets
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.members.contains(&(i + 1)))
                    .map(|(j, _)| j + 2),
            );
            Paper {
                score: (authors.len() as u64 * e.weight) as f64,
                authors,
            }
        })
        .collect();
    let mut removal = vec![0.0];
    removal.extend(inst.sets.iter().map(|s| s.cost as f64));
    Ok(BmcReduction {
        instance: CreditInstance::new(n, papers)?,
        costs: CostModel::new(vec![1.0; n], vec![1.0; n], vec![1.0; n], removal)?,
        budget: inst.k as f64,
        target: 1,
        threshold: inst.threshold as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BmcSolution {
    /// Chosen sets, 1-based.
    pub chosen: Vec<usize>,
    pub covered: u64,
    pub yes: bool,
}

/// Exhaustive search over all set families within budget. Ties prefer fewer
/// sets, then the lexicographically smallest family.
pub fn bmc_solve_exact(inst: &BmcInstance) -> Result<BmcSolution> {
    inst.validate()?;
    let m = inst.sets.len();
    Error::check_cap("BMC sets", m, MAX_BMC_SETS)?;
    let mut best: Option<(u64, Vec<usize>)> = None;
    for mask in 0..1u64 << m {
        let chosen: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        let cost: u64 = chosen.iter().map(|&j| inst.sets[j].cost).sum();
        if cost > inst.k {
            continue;
        }
        let covered = inst.coverage(&chosen);
        let better = match &best {
            None => true,
            Some((bc, bs)) => covered > *bc || (covered == *bc && (chosen.len(), &chosen) < (bs.len(), bs)),
        };
        if better {
            best = Some((covered, chosen));
        }
    }
    let (covered, chosen) = best.expect("the empty family is feasible");
    Ok(BmcSolution {
        chosen: chosen.into_iter().map(|j| j + 1).collect(),
        covered,
        yes: covered >= inst.threshold,
    })
}

/// Both ways of answering a BMC instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BmcComparison {
    pub reduction: BmcReduction,
    pub exact: BmcSolution,
    /// Best removal attack on the reduced instance.
    pub removal: AttackPlan,
    /// Drop of the target's value under that attack.
    pub decrease: f64,
    /// YES when the drop reaches the threshold (up to `1e-9`).
    pub removal_yes: bool,
}

impl BmcComparison {
    pub fn agree(&self) -> bool {
        self.removal_yes == self.exact.yes && (self.decrease - self.exact.covered as f64).abs() <= 1e-9
    }
}

/// Solves the instance directly and through the removal attack.
pub fn bmc_compare(inst: &BmcInstance) -> Result<BmcComparison> {
    let reduction = bmc_reduce(inst)?;
    let exact = bmc_solve_exact(inst)?;
    let removal = fo_removal_exhaustive(&reduction.instance, &reduction.costs, reduction.budget, reduction.target)?;
    let decrease = removal.shapley_before - removal.achieved;
    Ok(BmcComparison {
        removal_yes: decrease >= reduction.threshold - 1e-9,
        reduction,
        exact,
        removal,
        decrease,
    })
}
