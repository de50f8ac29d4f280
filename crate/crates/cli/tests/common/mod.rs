#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

/// Golden cases: output file stem and arguments, run from the fixtures
/// directory.
pub const CASES: &[(&str, &[&str])] = &[
    ("shapley_k3", &["shapley", "--game", "k3_nc1.json"]),
    ("shapley_k3_table", &["shapley", "--game", "k3_nc1.json", "--format", "table"]),
    ("shapley_nc3_profile", &["shapley", "--game", "nc3_weighted.json", "--profile", "0.9,0.5,0.7,1"]),
    (
        "shapley_star_center",
        &["shapley", "--game", "star5_nc1.json", "--player", "1", "--profile", "1,0.5,0.5,0.5,0.5"],
    ),
    ("shapley_fc", &["shapley", "--game", "fc_two_author.json", "--profile", "1,0.5,0.5"]),
    ("attack_fc_knapsack", &["attack", "fc_knapsack_request.json"]),
    ("attack_k4_greedy", &["attack", "k4_greedy_request.json"]),
    ("attack_star_leaf", &["attack", "star_leaf_request.json"]),
    ("attack_cycle6", &["attack", "cycle6_request.json"]),
    ("attack_fo_removal", &["attack", "fo_removal_request.json"]),
    ("attack_fo_pairwise", &["attack", "fo_pairwise_request.json"]),
    ("attack_nc2_removal", &["attack", "nc2_removal_request.json"]),
    ("oracle_k4", &["oracle-check", "k4_greedy_request.json", "--config", "oracle_config.json"]),
    ("oracle_cycle6", &["oracle-check", "cycle6_request.json"]),
    ("oracle_fc", &["oracle-check", "fc_knapsack_request.json"]),
    ("reduce_bmc_worked", &["reduce-bmc", "bmc_worked.json"]),
    (
        "no_benefit_star",
        &["no-benefit", "--game", "star5_nc1.json", "--target", "2", "--profile", "0.9,0.8,0.7,0.6,0.5"],
    ),
    (
        "no_benefit_random",
        &["no-benefit", "--game", "nc3_weighted.json", "--target", "1", "--trials", "12", "--seed", "7"],
    ),
];

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_reliattack"));
    cmd.args(args).current_dir(fixtures()).env_remove("RELIATTACK_ORACLE_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf8"),
        stderr: String::from_utf8(out.stderr).expect("utf8"),
    }
}

pub fn run(args: &[&str]) -> Run {
    run_with_env(args, &[])
}

pub fn golden_path(name: &str) -> PathBuf {
    fixtures().join("golden").join(format!("{name}.out"))
}
