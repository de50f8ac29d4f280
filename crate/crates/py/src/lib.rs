//! Python bindings. Games, cost models and plans are classes; reports with
//! nested structure come back as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use reliattack::attacks::{self as atk, AttackMode, AttackProblem, PlanReport, RemovalTrials};
use reliattack::oracle::{self, OracleConfig};
use reliattack::shapley;
use reliattack::{credit, Error, GameFile, GameSpec, Graph, Limits, Paper, PlayerSet, ReliabilityProfile};

create_exception!(reliattack, ResourceLimitError, PyRuntimeError, "A size cap was exceeded.");

fn err(e: Error) -> PyErr {
    match e {
        Error::Domain(msg) => PyValueError::new_err(msg),
        e @ Error::Resource { .. } => ResourceLimitError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for reliattack::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(err)
    }
}

/// Hands a serializable report to Python through `json.loads`.
fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn profile(game: &GameSpec, p: Option<Vec<f64>>) -> PyResult<ReliabilityProfile> {
    match p {
        None => Ok(ReliabilityProfile::ones(game.n())),
        Some(v) => {
            let p = ReliabilityProfile::new(v).or_raise()?;
            if p.len() != game.n() {
                return Err(PyValueError::new_err(format!(
                    "profile has {} entries, game has {} players",
                    p.len(),
                    game.n()
                )));
            }
            Ok(p)
        }
    }
}

/// A cooperative game on players `1..=n`.
#[pyclass(name = "Game", module = "reliattack", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGame {
    spec: GameSpec,
}

#[pymethods]
impl PyGame {
    /// Parses the JSON game file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec = GameFile::from_json(text).and_then(|f| f.to_spec()).or_raise()?;
        Ok(PyGame { spec })
    }

    #[staticmethod]
    fn nc1(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGame {
            spec: GameSpec::Nc1(Graph::new(n, &edges).or_raise()?),
        })
    }

    #[staticmethod]
    fn nc2(n: usize, edges: Vec<(usize, usize)>, k: usize) -> PyResult<Self> {
        Ok(PyGame {
            spec: GameSpec::nc2(Graph::new(n, &edges).or_raise()?, k).or_raise()?,
        })
    }

    /// `edges` are `(u, v, weight)` triples.
    #[staticmethod]
    fn nc3(n: usize, edges: Vec<(usize, usize, f64)>, d_cut: f64) -> PyResult<Self> {
        Ok(PyGame {
            spec: GameSpec::nc3(Graph::weighted(n, &edges).or_raise()?, d_cut).or_raise()?,
        })
    }

    /// `papers` are `(authors, score)` pairs.
    #[staticmethod]
    fn full_credit(n: usize, papers: Vec<(Vec<usize>, f64)>) -> PyResult<Self> {
        Ok(PyGame {
            spec: GameSpec::Fc(credit_instance(n, papers)?),
        })
    }

    #[staticmethod]
    fn full_obligation(n: usize, papers: Vec<(Vec<usize>, f64)>) -> PyResult<Self> {
        Ok(PyGame {
            spec: GameSpec::Fo(credit_instance(n, papers)?),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.n()
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.spec.name()
    }

    fn to_json(&self) -> PyResult<String> {
        let file = GameFile::from_spec(&self.spec).or_raise()?;
        serde_json::to_string(&file).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("Game({}, n={})", self.spec.name(), self.spec.n())
    }
}

fn credit_instance(n: usize, papers: Vec<(Vec<usize>, f64)>) -> PyResult<credit::CreditInstance> {
    let papers = papers.into_iter().map(|(authors, score)| Paper { authors, score }).collect();
    credit::CreditInstance::new(n, papers).or_raise()
}

/// Baselines `p_star`, slopes `L` (down) and `R` (up), removal costs `c`.
#[pyclass(name = "CostModel", module = "reliattack", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCostModel {
    inner: atk::CostModel,
}

#[pymethods]
impl PyCostModel {
    #[new]
    #[pyo3(signature = (p_star, L, R, c))]
    #[allow(non_snake_case)]
    fn new(p_star: Vec<f64>, L: Vec<f64>, R: Vec<f64>, c: Vec<f64>) -> PyResult<Self> {
        Ok(PyCostModel {
            inner: atk::CostModel::new(p_star, L, R, c).or_raise()?,
        })
    }

    /// Cost of moving player `j` to reliability `p`.
    fn cost(&self, j: usize, p: f64) -> PyResult<f64> {
        reliattack_check(j, self.inner.n())?;
        Ok(self.inner.cost(j, p))
    }
}

fn reliattack_check(j: usize, n: usize) -> PyResult<()> {
    if j == 0 || j > n {
        return Err(PyValueError::new_err(format!("player {j} outside 1..={n}")));
    }
    Ok(())
}

/// Outcome of an attack.
#[pyclass(name = "AttackPlan", module = "reliattack", frozen)]
struct PyPlan {
    plan: atk::AttackPlan,
}

#[pymethods]
impl PyPlan {
    /// Reliabilities after a fractional attack, else `None`.
    #[getter]
    fn profile(&self) -> Option<Vec<f64>> {
        self.plan.profile().map(|p| p.as_slice().to_vec())
    }

    /// Removed players after a removal attack, else `None`.
    #[getter]
    fn removed(&self) -> Option<Vec<usize>> {
        self.plan.removed().map(|r| r.iter().copied().collect())
    }

    #[getter]
    fn total_cost(&self) -> f64 {
        self.plan.total_cost
    }

    #[getter]
    fn unspent(&self) -> f64 {
        self.plan.unspent
    }

    #[getter]
    fn shapley_before(&self) -> f64 {
        self.plan.shapley_before
    }

    #[getter]
    fn achieved(&self) -> f64 {
        self.plan.achieved
    }

    #[getter]
    fn targeting_order(&self) -> Vec<usize> {
        self.plan.targeting_order.clone()
    }

    #[getter]
    fn oracle_verified_only(&self) -> bool {
        self.plan.oracle_verified_only
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &PlanReport::from(&self.plan))
    }

    fn __repr__(&self) -> String {
        format!(
            "AttackPlan(achieved={}, total_cost={}, order={:?})",
            self.plan.achieved, self.plan.total_cost, self.plan.targeting_order
        )
    }
}

fn problem(
    game: &PyGame,
    target: usize,
    budget: f64,
    costs: &PyCostModel,
    pairwise_protect: Option<usize>,
    large_cutoff: bool,
) -> PyResult<AttackProblem> {
    let mut p = AttackProblem::new(game.spec.clone(), target, budget, costs.inner.clone()).or_raise()?;
    p.large_cutoff = large_cutoff;
    match pairwise_protect {
        Some(y) => p.protecting(y).or_raise(),
        None => Ok(p),
    }
}

/// Closed-form Shapley values, one per player or just `player`'s.
#[pyfunction]
#[pyo3(signature = (game, profile=None, player=None))]
fn shapley_values<'py>(
    py: Python<'py>,
    game: &PyGame,
    profile: Option<Vec<f64>>,
    player: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = self::profile(&game.spec, profile)?;
    match player {
        Some(x) => Ok(shapley::shapley_closed(&game.spec, &p, x).or_raise()?.into_pyobject(py)?.into_any()),
        None => {
            let v = (1..=game.spec.n())
                .map(|x| shapley::shapley_closed(&game.spec, &p, x))
                .collect::<reliattack::Result<Vec<f64>>>()
                .or_raise()?;
            Ok(v.into_pyobject(py)?.into_any())
        }
    }
}

/// Shapley values by enumerating every ordering of the players.
#[pyfunction]
#[pyo3(signature = (game, profile=None))]
fn shapley_definitional(game: &PyGame, profile: Option<Vec<f64>>) -> PyResult<Vec<f64>> {
    let p = self::profile(&game.spec, profile)?;
    Ok(shapley::shapley_definitional(&game.spec, Some(&p), &Limits::default())
        .or_raise()?
        .values)
}

/// Expected value of `coalition` when each member shows up independently.
#[pyfunction]
fn reliability_value(game: &PyGame, profile: Vec<f64>, coalition: Vec<usize>) -> PyResult<f64> {
    let p = self::profile(&game.spec, Some(profile))?;
    let s: PlayerSet = coalition.into_iter().collect();
    reliattack::reliability_value(&game.spec, &p, &s, &Limits::default()).or_raise()
}

/// Value of player 1 in NC1 on the cycle `C_n`, `n >= 5`.
#[pyfunction]
fn shapley_cycle(profile: Vec<f64>) -> PyResult<f64> {
    shapley::shapley_cycle_closed(&ReliabilityProfile::new(profile).or_raise()?).or_raise()
}

/// `d Sh(x) / d p_j` for every `j` (entry `x - 1` is `Sh(x) / p_x`).
#[pyfunction]
fn shapley_gradient(game: &PyGame, profile: Vec<f64>, x: usize) -> PyResult<Vec<f64>> {
    let p = self::profile(&game.spec, Some(profile))?;
    shapley::shapley_gradient(&game.spec, &p, x).or_raise()
}

/// Runs the exact solver for the game and mode.
#[pyfunction]
#[pyo3(signature = (game, target, budget, costs, mode="fractional", pairwise_protect=None, large_cutoff=false))]
fn attack(
    game: &PyGame,
    target: usize,
    budget: f64,
    costs: &PyCostModel,
    mode: &str,
    pairwise_protect: Option<usize>,
    large_cutoff: bool,
) -> PyResult<PyPlan> {
    let mode = match mode {
        "fractional" => AttackMode::Fractional,
        "removal" => AttackMode::Removal,
        other => return Err(PyValueError::new_err(format!("mode must be fractional or removal, got {other:?}"))),
    };
    let pr = problem(game, target, budget, costs, pairwise_protect, large_cutoff)?;
    Ok(PyPlan {
        plan: atk::solve_attack(&pr, mode).or_raise()?,
    })
}

/// Brute-force fractional attack for cross-checking.
#[pyfunction]
#[pyo3(signature = (game, target, budget, costs, pairwise_protect=None, grid_resolution=1.0/64.0, max_attackable=6))]
#[allow(clippy::too_many_arguments)]
fn fractional_oracle(
    game: &PyGame,
    target: usize,
    budget: f64,
    costs: &PyCostModel,
    pairwise_protect: Option<usize>,
    grid_resolution: f64,
    max_attackable: usize,
) -> PyResult<PyPlan> {
    let pr = problem(game, target, budget, costs, pairwise_protect, false)?;
    let cfg = OracleConfig {
        grid_resolution,
        max_attackable,
        ..OracleConfig::default()
    };
    Ok(PyPlan {
        plan: oracle::fractional_oracle(&pr, &cfg).or_raise()?,
    })
}

/// Tries removal sets (all of them, or `trials` random ones) and reports
/// whether any lowered `Sh(x)`.
#[pyfunction]
#[pyo3(signature = (game, x, profile=None, trials=None, seed=0))]
fn removal_no_benefit<'py>(
    py: Python<'py>,
    game: &PyGame,
    x: usize,
    profile: Option<Vec<f64>>,
    trials: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = self::profile(&game.spec, profile)?;
    let mode = match trials {
        None => RemovalTrials::Exhaustive,
        Some(count) => RemovalTrials::Random { count, seed },
    };
    to_py(py, &atk::removal_no_benefit_check(&game.spec, &p, x, mode).or_raise()?)
}

/// Players that must stay untouched to leave `Sh(y)` unchanged.
#[pyfunction]
fn pairwise_exempt_set(game: &PyGame, y: usize) -> PyResult<Vec<usize>> {
    Ok(atk::pairwise_exempt_set(&game.spec, y).or_raise()?.into_iter().collect())
}

/// Budgeted Max-Coverage (JSON) solved directly and via the removal attack.
#[pyfunction]
fn bmc_compare<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let inst = atk::BmcInstance::from_json(text).or_raise()?;
    let cmp = atk::bmc_compare(&inst).or_raise()?;
    let out = serde_json::json!({
        "covered": cmp.exact.covered,
        "chosen_sets": cmp.exact.chosen,
        "exact_yes": cmp.exact.yes,
        "decrease": cmp.decrease,
        "removed": cmp.removal.targeting_order,
        "removal_yes": cmp.removal_yes,
        "agree": cmp.agree(),
    });
    to_py(py, &out)
}

#[pymodule(name = "reliattack")]
fn reliattack_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyCostModel>()?;
    m.add_class::<PyPlan>()?;
    m.add("ResourceLimitError", m.py().get_type::<ResourceLimitError>())?;
    m.add_function(wrap_pyfunction!(shapley_values, m)?)?;
    m.add_function(wrap_pyfunction!(shapley_definitional, m)?)?;
    m.add_function(wrap_pyfunction!(reliability_value, m)?)?;
    m.add_function(wrap_pyfunction!(shapley_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(shapley_gradient, m)?)?;
    m.add_function(wrap_pyfunction!(attack, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(removal_no_benefit, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise_exempt_set, m)?)?;
    m.add_function(wrap_pyfunction!(bmc_compare, m)?)?;
    Ok(())
}
