//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria that cannot hold mathematically are listed in `UNATTAINABLE`;
//! they still print FAIL, but do not fail the run.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reliattack::attacks::*;
use reliattack::instances::*;
use reliattack::oracle::{finite_difference, fractional_oracle, OracleConfig};
use reliattack::shapley::*;
use reliattack::*;

/// Removal can lower a player's value in NC2 with `k >= 2`: on the path
/// 1 - 2 - 3 with `k = 2`, removing 3 drops `Sh(1)` from 7/6 to 1.
const UNATTAINABLE: &[u32] = &[5];

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn closed_forms() -> Verdict {
    let started = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    let mut count = 0;
    let variants = ["nc1", "nc2k1", "nc2k2", "nc2k3", "nc3", "fc", "fo"];
    for variant in variants {
        for _ in 0..100 {
            let n = r.random_range(2..=8);
            let spec = match variant {
                "nc1" => GameSpec::Nc1(random_graph(&mut r, n, 0.45)),
                "nc2k1" => GameSpec::nc2(random_graph(&mut r, n, 0.45), 1).unwrap(),
                "nc2k2" => GameSpec::nc2(random_graph(&mut r, n, 0.55), 2).unwrap(),
                "nc2k3" => GameSpec::nc2(random_graph(&mut r, n, 0.65), 3).unwrap(),
                "nc3" => {
                    let d = r.random_range(0.3..2.0);
                    GameSpec::nc3(random_weighted_graph(&mut r, n, 0.45, (0.2, 1.5)), d).unwrap()
                }
                "fc" => GameSpec::Fc(random_credit(&mut r, n, 6, 4)),
                _ => GameSpec::Fo(random_credit(&mut r, n, 6, 4)),
            };
            let p = random_profile(&mut r, n, (0.0, 1.0));
            let def = shapley_definitional(&spec, Some(&p), &Limits::default()).unwrap();
            for x in 1..=n {
                worst = worst.max((shapley_closed(&spec, &p, x).unwrap() - def.get(x)).abs());
            }
            count += 1;
        }
    }
    let elapsed = started.elapsed();
    verdict(
        worst <= 1e-9 && elapsed <= Duration::from_secs(120),
        format!("{count} instances over {} variants, max error {worst:.2e}, {elapsed:.1?}", variants.len()),
    )
}

fn cycle_formula() -> Verdict {
    let mut r = rng(102);
    let mut worst = 0.0f64;
    for n in [5, 6] {
        let spec = GameSpec::Nc1(Graph::cycle(n));
        for _ in 0..50 {
            let p = random_profile(&mut r, n, (0.0, 1.0));
            let def = shapley_definitional(&spec, Some(&p), &Limits::default()).unwrap().get(1);
            worst = worst.max((shapley_cycle_closed(&p).unwrap() - def).abs());
        }
    }
    let point = ReliabilityProfile::new(vec![1.0, 0.5, 0.5, 0.5, 0.5]).unwrap();
    let v = shapley_cycle_closed(&point).unwrap();
    verdict(
        worst <= 1e-9 && (v - 1.75).abs() <= 1e-9,
        format!("100 profiles on C_5/C_6, max error {worst:.2e}; p=(1,.5,.5,.5,.5) gives {v}"),
    )
}

fn uniform_problem(r: &mut ChaCha8Rng, spec: GameSpec, target: Player) -> AttackProblem {
    let n = spec.n();
    let p_star: Vec<f64> = (0..n).map(|_| r.random_range(0.05..=1.0)).collect();
    let slope = r.random_range(0.5..2.0);
    let room: f64 = p_star.iter().map(|p| 1.0 - p).sum::<f64>() * slope;
    let budget = r.random_range(0.0..=room * 1.1);
    let costs = CostModel::uniform(p_star, slope, slope, 0.0).unwrap();
    AttackProblem::new(spec, target, budget, costs).unwrap()
}

fn greedy_optimality() -> Verdict {
    let mut r = rng(103);
    let cfg = OracleConfig::default();
    let mut worst = 0.0f64;
    let mut runs = 0;
    for n in 4..=6 {
        for (g, target) in [(Graph::complete(n), 1), (Graph::star(n, 1), 1), (Graph::star(n, 1), 2)] {
            for _ in 0..50 {
                let pr = uniform_problem(&mut r, GameSpec::Nc1(g.clone()), target);
                let greedy = greedy_fractional_attack(&pr).unwrap();
                let oracle = fractional_oracle(&pr, &cfg).unwrap();
                worst = worst.max((greedy.achieved - oracle.achieved).abs());
                runs += 1;
            }
        }
    }
    verdict(
        worst <= 1e-6,
        format!("{runs} draws on K_4..K_6 and S_4..S_6 (center and leaf), max gap {worst:.2e}"),
    )
}

fn winner(pr: &AttackProblem) -> (CycleOrder, AttackPlan) {
    let best = cycle_fractional_attack(pr).unwrap();
    let order = cycle_candidates(pr).unwrap().into_iter().find(|c| c.plan == best).unwrap().order;
    (order, best)
}

fn cycle_best_of_four() -> Verdict {
    let mut r = rng(104);
    let cfg = OracleConfig::default();
    let mut worst = 0.0f64;
    for n in [5, 6] {
        for _ in 0..50 {
            let pr = uniform_problem(&mut r, GameSpec::Nc1(Graph::cycle(n)), 1);
            let best = cycle_fractional_attack(&pr).unwrap();
            let oracle = fractional_oracle(&pr, &cfg).unwrap();
            worst = worst.max((best.achieved - oracle.achieved).abs());
        }
    }
    // instances with p*_{n-1} - p*_n > 1/2 and p*_3 - p*_2 > 1/2
    let mut qr_wins = 0;
    let mut lambda_gap = 0.0f64;
    let mut structural = true;
    for _ in 0..20 {
        let n = 6;
        let p2 = r.random_range(0.02..0.2);
        let pn = r.random_range(0.02..0.2);
        let p3 = r.random_range(p2 + 0.55..=1.0);
        let pm = r.random_range(pn + 0.55..=1.0);
        let p_star = vec![1.0, p2, p3, r.random_range(0.1..1.0), pm, pn];
        let ps = ReliabilityProfile::new(p_star.clone()).unwrap();
        let lambda = crossover_lambda_pq(&ps).unwrap();
        lambda_gap = lambda_gap.max(
            (cumulative_decrease(CycleOrder::P, &ps, lambda).unwrap()
                - cumulative_decrease(CycleOrder::Q, &ps, lambda).unwrap())
            .abs(),
        );
        // budgets just below the crossover, where Q leads P
        let budget = lambda - r.random_range(0.05..0.3);
        let costs = CostModel::uniform(p_star, 1.0, 1.0, 0.0).unwrap();
        let pr = AttackProblem::new(GameSpec::Nc1(Graph::cycle(n)), 1, budget, costs).unwrap();
        let (order, best) = winner(&pr);
        let oracle = fractional_oracle(&pr, &cfg).unwrap();
        worst = worst.max((best.achieved - oracle.achieved).abs());
        let t = &best.targeting_order;
        match order {
            CycleOrder::Q => {
                qr_wins += 1;
                structural &= t.len() < 2 || t[..2] == [2, n - 1];
            }
            CycleOrder::R => {
                qr_wins += 1;
                structural &= t.len() < 2 || t[..2] == [n, 3];
            }
            _ => {}
        }
    }
    verdict(
        worst <= 1e-6 && qr_wins >= 1 && lambda_gap <= 1e-9 && structural,
        format!(
            "120 draws on C_5/C_6, max gap {worst:.2e}; Q/R won {qr_wins} of 20 constructed draws; \
             |dP(lambda) - dQ(lambda)| <= {lambda_gap:.2e}"
        ),
    )
}

fn no_benefit() -> Verdict {
    let mut r = rng(105);
    let mut lines = Vec::new();
    let mut ok = true;
    for variant in ["NC1", "NC2", "NC3", "FC"] {
        let mut passed = 0;
        let mut first: Option<String> = None;
        for _ in 0..20 {
            let n = r.random_range(3..=7);
            let spec = match variant {
                "NC1" => GameSpec::Nc1(random_graph(&mut r, n, 0.5)),
                "NC2" => GameSpec::nc2(random_graph(&mut r, n, 0.6), r.random_range(1..=3)).unwrap(),
                "NC3" => {
                    let d = r.random_range(0.3..2.0);
                    GameSpec::nc3(random_weighted_graph(&mut r, n, 0.5, (0.2, 1.5)), d).unwrap()
                }
                _ => GameSpec::Fc(random_credit(&mut r, n, 6, 4)),
            };
            let p = random_profile(&mut r, n, (0.0, 1.0));
            let x = r.random_range(1..=n);
            let v = removal_no_benefit_check(&spec, &p, x, RemovalTrials::Exhaustive).unwrap();
            if v.passed {
                passed += 1;
            } else if first.is_none() {
                let c = v.counterexample.unwrap();
                let k = match &spec {
                    GameSpec::Nc2 { k, .. } => *k,
                    _ => 0,
                };
                first = Some(format!(
                    " (k={k}, x={x}, removing {:?}: {:.4} -> {:.4})",
                    c.removed, c.before, c.after
                ));
            }
        }
        ok &= passed == 20;
        lines.push(format!("{variant} {passed}/20{}", first.unwrap_or_default()));
    }
    verdict(ok, lines.join("; "))
}

fn knapsack() -> Verdict {
    let mut r = rng(106);
    let cfg = OracleConfig::default();
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    for i in 0..50 {
        let n = r.random_range(3..=6);
        let ci = random_two_author(&mut r, n, 0.6);
        let spec = if i % 2 == 0 { GameSpec::Fc(ci) } else { GameSpec::Fo(ci) };
        let p_star: Vec<f64> = (0..n).map(|_| r.random_range(0.05..=1.0)).collect();
        let l: Vec<f64> = (0..n).map(|_| r.random_range(0.3..3.0)).collect();
        let rr: Vec<f64> = (0..n).map(|_| r.random_range(0.3..3.0)).collect();
        let costs = CostModel::new(p_star, l, rr, vec![0.0; n]).unwrap();
        let pr = AttackProblem::new(spec, 1, r.random_range(0.0..2.0), costs).unwrap();
        let plan = credit_knapsack_attack(&pr).unwrap();
        let oracle = fractional_oracle(&pr, &cfg).unwrap();
        worst = worst.max((plan.achieved - oracle.achieved).abs());

        let y = r.random_range(2..=n);
        let guarded = pr.clone().protecting(y).unwrap();
        let plan = credit_knapsack_attack(&guarded).unwrap();
        let before = shapley_closed(&pr.spec, &pr.costs.baseline(), y).unwrap();
        let after = shapley_closed(&pr.spec, plan.profile().unwrap(), y).unwrap();
        drift = drift.max((before - after).abs());
    }
    verdict(
        worst <= 1e-9 && drift <= 1e-12,
        format!("50 instances, max gap to oracle {worst:.2e}, max pairwise drift of Sh(y) {drift:.2e}"),
    )
}

fn reduction() -> Verdict {
    let mut r = rng(107);
    let mut ok = true;
    let mut yes = 0;
    for _ in 0..30 {
        let ne = r.random_range(1..=10);
        let ns = r.random_range(0..=10);
        let inst = BmcInstance {
            elements: (0..ne).map(|_| BmcElement { weight: r.random_range(1..=9) }).collect(),
            sets: (0..ns)
                .map(|_| BmcSet {
                    members: (1..=ne).filter(|_| r.random_bool(0.3)).collect(),
                    cost: r.random_range(1..=5),
                })
                .collect(),
            k: r.random_range(1..=10),
            threshold: r.random_range(1..=25),
        };
        let cmp = bmc_compare(&inst).unwrap();
        ok &= cmp.agree();
        yes += cmp.exact.yes as usize;
    }
    let worked = BmcInstance::from_json(
        &std::fs::read_to_string(common::fixtures().join("bmc_worked.json")).unwrap(),
    )
    .unwrap();
    let cmp = bmc_compare(&worked).unwrap();
    let worked_ok = cmp.agree() && cmp.removal_yes && (cmp.decrease - 3.0).abs() <= 1e-9;
    verdict(
        ok && worked_ok,
        format!(
            "30 random instances ({yes} YES) agree: {ok}; worked fixture decrease {} answer {}",
            cmp.decrease,
            if cmp.removal_yes { "YES" } else { "NO" }
        ),
    )
}

fn gradients() -> Verdict {
    let mut r = rng(108);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = r.random_range(2..=7);
        let g = random_graph(&mut r, n, 0.5);
        let spec = GameSpec::Nc1(g.clone());
        let p = random_profile(&mut r, n, (0.05, 0.95));
        let x = r.random_range(1..=n);
        let grad = shapley_gradient_nc1(&g, &p, x).unwrap();
        for j in (1..=n).filter(|&j| j != x) {
            let fd = finite_difference(|q| shapley_closed(&spec, q, x).unwrap(), &p, j, 1e-6).unwrap();
            worst = worst.max((grad[j - 1] - fd).abs());
        }
    }
    let mut signs = true;
    for _ in 0..50 {
        let n = r.random_range(2..=7);
        let g = random_graph(&mut r, n, 0.4);
        let p = random_profile(&mut r, n, (0.0, 1.0));
        let x = r.random_range(1..=n);
        let near = ball(&g, &PlayerSet::from([x]), 2.0).unwrap();
        let grad = shapley_gradient_nc1(&g, &p, x).unwrap();
        for j in (1..=n).filter(|&j| j != x) {
            signs &= if near.contains(&j) { grad[j - 1] <= 0.0 } else { grad[j - 1] == 0.0 };
        }
    }
    for fo in [false, true] {
        for _ in 0..50 {
            let n = r.random_range(2..=7);
            let ci = random_credit(&mut r, n, 6, 4);
            let x = r.random_range(1..=n);
            let co = ci.coauthors(x);
            let spec = if fo { GameSpec::Fo(ci) } else { GameSpec::Fc(ci) };
            let p = random_profile(&mut r, n, (0.0, 1.0));
            let grad = shapley_gradient(&spec, &p, x).unwrap();
            for j in (1..=n).filter(|&j| j != x) {
                let d = grad[j - 1];
                signs &= if !co.contains(&j) {
                    d.abs() <= 1e-12
                } else if fo {
                    d >= -1e-12
                } else {
                    d <= 1e-12
                };
            }
        }
    }
    verdict(
        worst <= 1e-5 && signs,
        format!("20 graphs, max |analytic - finite difference| {worst:.2e}; sign checks at 150 points hold: {signs}"),
    )
}

fn determinism() -> Verdict {
    let mut same = 0;
    let mut golden = 0;
    for (name, args) in common::CASES {
        let a = common::run(args);
        let b = common::run(args);
        if a.code == 0 && a.stdout == b.stdout {
            same += 1;
        }
        if std::fs::read_to_string(common::golden_path(name)).ok().as_deref() == Some(a.stdout.as_str()) {
            golden += 1;
        }
    }
    let total = common::CASES.len();
    verdict(
        same == total,
        format!("{same}/{total} fixtures byte-identical across two runs; {golden}/{total} match stored output"),
    )
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "closed forms vs enumeration", closed_forms),
        (2, "cycle formula", cycle_formula),
        (3, "greedy optimality", greedy_optimality),
        (4, "cycle best-of-four", cycle_best_of_four),
        (5, "removal never pays", no_benefit),
        (6, "knapsack attacks", knapsack),
        (7, "coverage reduction", reduction),
        (8, "gradients and signs", gradients),
        (9, "CLI determinism", determinism),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let started = Instant::now();
        let v = check();
        let status = if v.ok { "PASS" } else { "FAIL" };
        let note = if !v.ok && UNATTAINABLE.contains(&id) { " [known unattainable]" } else { "" };
        println!("criterion {id} {status}{note}: {name}: {} ({:.1?})", v.detail, started.elapsed());
        if !v.ok && !UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failed criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
