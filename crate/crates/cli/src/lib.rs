//! Command-line adapter over the `reliattack` library. Every subcommand
//! reads its inputs, calls one library entry point and prints a JSON report
//! with sorted keys and floats rounded to 12 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use reliattack::attacks::{
    bmc_compare, removal_no_benefit_check, solve_attack, AttackRequest, BmcInstance, GameSource, PlanReport,
    RemovalTrials,
};
use reliattack::oracle::{oracle_check, OracleConfig};
use reliattack::shapley::shapley_closed;
use reliattack::{Error, GameFile, GameSpec, ReliabilityProfile};

/// Overrides the oracle's attackable-player cap.
pub const ORACLE_CAP_VAR: &str = "RELIATTACK_ORACLE_CAP";

#[derive(Debug, Parser)]
#[command(name = "reliattack", version, about = "Shapley values under unreliability, and attacks on them")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shapley values of a game's reliability extension.
    Shapley {
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated reliabilities; all ones when omitted.
        #[arg(long)]
        profile: Option<String>,
        /// Report only this player.
        #[arg(long)]
        player: Option<usize>,
    },
    /// Solve an attack request.
    Attack { request: PathBuf },
    /// Compare the exact fractional solver with the brute-force oracle.
    OracleCheck {
        request: PathBuf,
        /// Oracle settings as JSON.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Reduce a Budgeted Max-Coverage instance and solve it both ways.
    ReduceBmc { file: PathBuf },
    /// Check that removal attacks never lower the target's value.
    NoBenefit {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        target: usize,
        /// Number of random removal sets, or `all` for every subset.
        #[arg(long, default_value = "all")]
        trials: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated reliabilities; all ones when omitted.
        #[arg(long)]
        profile: Option<String>,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Lib(Error),
    Gap(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = Result<T, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let render = |v: &Value| match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&normalize(v)).expect("json")),
        Format::Table => table(&normalize(v)),
    };
    match dispatch(&cli.command) {
        Ok(report) => Outcome {
            code: 0,
            stdout: render(&report),
            stderr: String::new(),
        },
        Err(Failure::Gap(report)) => Outcome {
            code: 3,
            stdout: render(&report),
            stderr: "error: solver and oracle disagree beyond tolerance\n".into(),
        },
        Err(Failure::Input(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Lib(e)) => Outcome {
            code: match e {
                Error::Resource { .. } => 2,
                Error::Domain(_) => 1,
            },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cmd: &Command) -> Res<Value> {
    match cmd {
        Command::Shapley { game, profile, player } => {
            let spec = load_game(game)?;
            let p = parse_profile(profile.as_deref(), spec.n())?;
            let players: Vec<usize> = match player {
                Some(x) => vec![*x],
                None => (1..=spec.n()).collect(),
            };
            let values = players
                .iter()
                .map(|&x| shapley_closed(&spec, &p, x))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({
                "game": spec.name(),
                "profile": p.as_slice(),
                "players": players,
                "shapley": values,
            }))
        }
        Command::Attack { request } => {
            let (req, spec) = load_request(request)?;
            let problem = req.to_problem(spec)?;
            let plan = solve_attack(&problem, req.mode)?;
            let mut out = to_value(&PlanReport::from(&plan));
            out["mode"] = to_value(&req.mode);
            out["target"] = json!(req.target);
            out["budget"] = json!(req.budget);
            Ok(out)
        }
        Command::OracleCheck { request, config } => {
            let (req, spec) = load_request(request)?;
            let mut cfg = match config {
                Some(path) => serde_json::from_str::<OracleConfig>(&read(path)?)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => OracleConfig::default(),
            };
            if let Ok(cap) = std::env::var(ORACLE_CAP_VAR) {
                cfg.max_attackable = cap
                    .parse()
                    .map_err(|_| Failure::Input(format!("{ORACLE_CAP_VAR} must be a count, got {cap:?}")))?;
            }
            let problem = req.to_problem(spec)?;
            let check = oracle_check(&problem, &cfg)?;
            let report = json!({
                "solver_value": check.solver.achieved,
                "oracle_value": check.oracle.achieved,
                "gap": check.gap,
                "tolerance": cfg.tolerance,
                "within_tolerance": check.within_tolerance,
                "solver": to_value(&PlanReport::from(&check.solver)),
                "oracle": to_value(&PlanReport::from(&check.oracle)),
            });
            if check.within_tolerance {
                Ok(report)
            } else {
                Err(Failure::Gap(report))
            }
        }
        Command::ReduceBmc { file } => {
            let inst = BmcInstance::from_json(&read(file)?)?;
            let cmp = bmc_compare(&inst)?;
            let answer = |yes: bool| if yes { "YES" } else { "NO" };
            Ok(json!({
                "reduction": to_value(&cmp.reduction),
                "exact": {
                    "chosen_sets": cmp.exact.chosen,
                    "covered": cmp.exact.covered,
                    "answer": answer(cmp.exact.yes),
                },
                "removal": {
                    "removed": cmp.removal.targeting_order,
                    "decrease": cmp.decrease,
                    "answer": answer(cmp.removal_yes),
                },
                "agree": cmp.agree(),
            }))
        }
        Command::NoBenefit {
            game,
            target,
            trials,
            seed,
            profile,
        } => {
            let spec = load_game(game)?;
            let p = parse_profile(profile.as_deref(), spec.n())?;
            let mode = match trials.as_str() {
                "all" => RemovalTrials::Exhaustive,
                count => RemovalTrials::Random {
                    count: count
                        .parse()
                        .map_err(|_| Failure::Input(format!("--trials must be a count or `all`, got {count:?}")))?,
                    seed: *seed,
                },
            };
            let verdict = removal_no_benefit_check(&spec, &p, *target, mode)?;
            let mut out = to_value(&verdict);
            out["game"] = json!(spec.name());
            out["target"] = json!(target);
            Ok(out)
        }
    }
}

fn to_value<T: serde::Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Res<GameSpec> {
    let file = GameFile::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(file.to_spec()?)
}

fn load_request(path: &Path) -> Res<(AttackRequest, GameSpec)> {
    let req = AttackRequest::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let spec = match &req.game {
        GameSource::Inline(file) => file.to_spec()?,
        GameSource::Path(rel) => load_game(&path.parent().unwrap_or(Path::new(".")).join(rel))?,
    };
    Ok((req, spec))
}

fn parse_profile(text: Option<&str>, n: usize) -> Res<ReliabilityProfile> {
    let Some(text) = text else {
        return Ok(ReliabilityProfile::ones(n));
    };
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("--profile: {e}")))?;
    if values.len() != n {
        return Err(Failure::Input(format!("--profile: {} values for {n} players", values.len())));
    }
    Ok(ReliabilityProfile::new(values)?)
}

/// Rounds floats to 12 significant digits; keys stay sorted because
/// `serde_json::Map` is ordered.
pub fn normalize(v: &Value) -> Value {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().expect("f64");
            let r: f64 = format!("{x:.11e}").parse().expect("float");
            json!(if r == 0.0 { 0.0 } else { r })
        }
        Value::Array(a) => Value::Array(a.iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), normalize(v))).collect::<Map<_, _>>()),
        other => other.clone(),
    }
}

/// One `path = value` line per leaf.
fn table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, v) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, v, out);
                }
            }
            Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, v) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), v, out);
                }
            }
            leaf => {
                let _ = writeln!(out, "{prefix:<32} {leaf}");
            }
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
