//! Python bindings. Structured results cross the boundary as JSON strings in
//! the same interchange format the CLI uses; rational values cross as
//! (numerator, denominator) tuples.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use chromem::arena::{Arena, NodeId, Player};
use chromem::equilibrium;
use chromem::lifting::{self, payoff_oracle};
use chromem::memory::{MemorySkeleton, Strategy};
use chromem::parity::{self, Convention, ParityGame};
use chromem::payoffs::{eval_phi_syms, eval_psi_syms, Payoff, Value};
use chromem::probes;

fn err(e: chromem::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_side(s: &str) -> PyResult<Player> {
    match s.to_ascii_lowercase().as_str() {
        "max" => Ok(Player::Max),
        "min" => Ok(Player::Min),
        _ => Err(PyValueError::new_err(format!("unknown side {s:?}"))),
    }
}

fn parse_convention(s: &str) -> PyResult<Convention> {
    match s.to_ascii_lowercase().as_str() {
        "even" => Ok(Convention::Even),
        "odd" => Ok(Convention::Odd),
        _ => Err(PyValueError::new_err(format!("unknown convention {s:?}"))),
    }
}

fn value_pair(v: Value) -> (i64, i64) {
    (*v.numer(), *v.denom())
}

fn parse_strategy(a: &Arena, s: &str) -> PyResult<Strategy> {
    let strat: Strategy = serde_json::from_str(s).map_err(json_err)?;
    strat.validate(a).map_err(err)?;
    Ok(strat)
}

/// An edge-colored game arena.
#[pyclass(name = "Arena", skip_from_py_object)]
#[derive(Clone)]
struct PyArena {
    inner: Arena,
}

#[pymethods]
impl PyArena {
    /// Parse the JSON interchange format.
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<PyArena> {
        let value: serde_json::Value = serde_json::from_str(s).map_err(json_err)?;
        let (inner, _) = Arena::from_json(&value).map_err(err)?;
        Ok(PyArena { inner })
    }

    /// Random arena; `one_player` ("max" | "min") makes that side choice-free.
    #[staticmethod]
    #[pyo3(signature = (n_max, alphabet, seed, one_player=None))]
    fn random(
        n_max: usize,
        alphabet: Vec<String>,
        seed: u64,
        one_player: Option<&str>,
    ) -> PyResult<PyArena> {
        let refs: Vec<&str> = alphabet.iter().map(|s| s.as_str()).collect();
        let side = one_player.map(parse_side).transpose()?;
        Ok(PyArena { inner: Arena::random(n_max, &refs, seed, side) })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn n_nodes(&self) -> usize {
        self.inner.n_nodes()
    }

    fn n_edges(&self) -> usize {
        self.inner.n_edges()
    }

    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().to_vec()
    }

    fn owner(&self, v: NodeId) -> PyResult<String> {
        if v >= self.inner.n_nodes() {
            return Err(PyValueError::new_err(format!("node {v} out of range")));
        }
        Ok(format!("{:?}", self.inner.owner(v)).to_lowercase())
    }

    /// "max" or "min" if that side is choice-free, else "two_player".
    fn classify(&self) -> String {
        use chromem::arena::OnePlayer;
        match self.inner.is_one_player() {
            OnePlayer::MaxHasNoChoice => "max".into(),
            OnePlayer::MinHasNoChoice => "min".into(),
            OnePlayer::TwoPlayer => "two_player".into(),
        }
    }

    fn validate(&self) -> PyResult<()> {
        self.inner
            .validate()
            .map_err(|r| PyValueError::new_err(format!("{r:?}")))
    }
}

/// Solve a parity game given arena JSON with per-edge priorities.
#[pyfunction]
#[pyo3(signature = (game_json, convention="even"))]
fn solve_parity(game_json: &str, convention: &str) -> PyResult<String> {
    let value: serde_json::Value = serde_json::from_str(game_json).map_err(json_err)?;
    let (arena, priorities) = Arena::from_json(&value).map_err(err)?;
    let priority = priorities
        .ok_or_else(|| PyValueError::new_err("every edge needs a priority"))?;
    let g = ParityGame { arena, priority, max_wins: parse_convention(convention)? };
    let sol = parity::solve(&g);
    Ok(serde_json::json!({
        "winner": sol.winner,
        "max_strategy": sol.max_strategy,
        "min_strategy": sol.min_strategy,
    })
    .to_string())
}

/// Optimal values and a witness strategy for one side on a one-player arena.
/// Returns (values, strategy_json).
#[pyfunction]
fn one_player_opt(
    arena: &PyArena,
    payoff: &str,
    side: &str,
) -> PyResult<(Vec<(i64, i64)>, String)> {
    let payoff = Payoff::from_descriptor(payoff).map_err(err)?;
    let (values, strategy) = payoff
        .one_player_opt(&arena.inner, parse_side(side)?)
        .map_err(err)?;
    Ok((
        values.into_iter().map(value_pair).collect(),
        serde_json::to_string(&strategy).map_err(json_err)?,
    ))
}

/// Best value the opponent can force against a fixed strategy, per start node.
#[pyfunction]
fn best_response_values(
    arena: &PyArena,
    payoff: &str,
    fixed_json: &str,
) -> PyResult<Vec<(i64, i64)>> {
    let payoff = Payoff::from_descriptor(payoff).map_err(err)?;
    let fixed = parse_strategy(&arena.inner, fixed_json)?;
    let values =
        equilibrium::best_response_values(&arena.inner, &payoff, &fixed).map_err(err)?;
    Ok(values.into_iter().map(value_pair).collect())
}

/// Equilibrium check report as JSON.
#[pyfunction]
#[pyo3(signature = (arena, payoff, sigma_json, tau_json, starts=None))]
fn check_equilibrium(
    arena: &PyArena,
    payoff: &str,
    sigma_json: &str,
    tau_json: &str,
    starts: Option<Vec<NodeId>>,
) -> PyResult<String> {
    let payoff = Payoff::from_descriptor(payoff).map_err(err)?;
    let sigma = parse_strategy(&arena.inner, sigma_json)?;
    let tau = parse_strategy(&arena.inner, tau_json)?;
    let starts = starts.unwrap_or_else(|| arena.inner.nodes().collect());
    let report =
        equilibrium::check_equilibrium(&arena.inner, &payoff, &sigma, &tau, &starts)
            .map_err(err)?;
    serde_json::to_string(&report).map_err(json_err)
}

/// The play of two strategies as (prefix_edges, cycle_edges).
#[pyfunction]
fn play(
    arena: &PyArena,
    start: NodeId,
    sigma_json: &str,
    tau_json: &str,
) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let sigma = parse_strategy(&arena.inner, sigma_json)?;
    let tau = parse_strategy(&arena.inner, tau_json)?;
    let l = equilibrium::play(&arena.inner, start, &sigma, &tau).map_err(err)?;
    Ok((l.prefix, l.cycle))
}

/// Lift one-player optima to a positional equilibrium of a two-player arena.
#[pyfunction]
fn positional_lift(arena: &PyArena, payoff: &str) -> PyResult<String> {
    let payoff = Payoff::from_descriptor(payoff).map_err(err)?;
    let oracle = payoff_oracle(payoff.clone());
    let (sigma, tau, trace) =
        lifting::positional_lift(&arena.inner, &payoff, oracle, None).map_err(err)?;
    Ok(serde_json::json!({
        "sigma": Strategy::Positional(sigma),
        "tau": Strategy::Positional(tau),
        "trace": trace,
    })
    .to_string())
}

/// Lift through a memory skeleton to a chromatic equilibrium.
#[pyfunction]
fn lift_with_skeleton(
    arena: &PyArena,
    skeleton_json: &str,
    payoff: &str,
) -> PyResult<String> {
    let m: MemorySkeleton = serde_json::from_str(skeleton_json).map_err(json_err)?;
    let payoff = Payoff::from_descriptor(payoff).map_err(err)?;
    let oracle = payoff_oracle(payoff.clone());
    let (sigma, tau, trace) =
        lifting::lift_with_skeleton(&arena.inner, &m, &payoff, oracle).map_err(err)?;
    Ok(serde_json::json!({
        "sigma": Strategy::Chromatic(sigma),
        "tau": Strategy::Chromatic(tau),
        "trace": trace,
    })
    .to_string())
}

/// The bounded-counter skeleton with 2n+2 states, as JSON.
#[pyfunction]
fn synth_mn(n: usize) -> PyResult<String> {
    serde_json::to_string(&probes::synth_mn(n)).map_err(json_err)
}

/// The run-length tracking skeleton for bound k and target set t, as JSON.
#[pyfunction]
fn synth_mk(k: u64, t: Vec<u64>) -> PyResult<String> {
    serde_json::to_string(&probes::synth_mk(k, &t)).map_err(json_err)
}

/// All canonical skeletons over the alphabet with at most `max_states`
/// states, as JSON strings.
#[pyfunction]
fn enumerate_skeletons(alphabet: Vec<String>, max_states: usize) -> PyResult<Vec<String>> {
    let refs: Vec<&str> = alphabet.iter().map(|s| s.as_str()).collect();
    chromem::memory::enumerate_skeletons(&refs, max_states)
        .iter()
        .map(|m| serde_json::to_string(m).map_err(json_err))
        .collect()
}

/// Sum payoff of an ultimately periodic color word.
#[pyfunction]
fn eval_psi(prefix: Vec<String>, cycle: Vec<String>) -> PyResult<u8> {
    let p: Vec<&str> = prefix.iter().map(|s| s.as_str()).collect();
    let c: Vec<&str> = cycle.iter().map(|s| s.as_str()).collect();
    eval_psi_syms(&p, &c).map_err(err)
}

/// Run-length payoff of an ultimately periodic color word.
#[pyfunction]
fn eval_phi(prefix: Vec<String>, cycle: Vec<String>, t: Vec<u64>) -> PyResult<u8> {
    let p: Vec<&str> = prefix.iter().map(|s| s.as_str()).collect();
    let c: Vec<&str> = cycle.iter().map(|s| s.as_str()).collect();
    eval_phi_syms(&p, &c, &t).map_err(err)
}

/// Memory bound g(n) from a tabulated f, or None if the table is too short.
#[pyfunction]
fn compute_g(table: Vec<u64>, n: u64) -> Option<u64> {
    lifting::compute_g(&table, n)
}

/// Two-node counter game lower-bound probe; returns the report as JSON.
#[pyfunction]
fn probe_fig2(s_max: usize) -> PyResult<String> {
    serde_json::to_string(&probes::probe_fig2_lower(s_max).map_err(err)?).map_err(json_err)
}

/// Branching arena lower-bound probe.
#[pyfunction]
fn probe_am(m: usize) -> PyResult<String> {
    serde_json::to_string(&probes::probe_am_lower(m).map_err(err)?).map_err(json_err)
}

/// Bounded-counter sufficiency probe on random one-player arenas.
#[pyfunction]
fn probe_mn(n: usize, trials: usize, seed: u64) -> PyResult<String> {
    serde_json::to_string(&probes::probe_mn_sufficiency(n, trials, seed).map_err(err)?)
        .map_err(json_err)
}

/// Run-length skeleton equilibrium probe on random two-player arenas.
#[pyfunction]
fn probe_mk(t: Vec<u64>, trials: usize, seed: u64) -> PyResult<String> {
    serde_json::to_string(&probes::probe_mk_equilibrium(&t, trials, seed).map_err(err)?)
        .map_err(json_err)
}

#[pymodule]
fn chromem_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArena>()?;
    m.add_function(wrap_pyfunction!(solve_parity, m)?)?;
    m.add_function(wrap_pyfunction!(one_player_opt, m)?)?;
    m.add_function(wrap_pyfunction!(best_response_values, m)?)?;
    m.add_function(wrap_pyfunction!(check_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(play, m)?)?;
    m.add_function(wrap_pyfunction!(positional_lift, m)?)?;
    m.add_function(wrap_pyfunction!(lift_with_skeleton, m)?)?;
    m.add_function(wrap_pyfunction!(synth_mn, m)?)?;
    m.add_function(wrap_pyfunction!(synth_mk, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_skeletons, m)?)?;
    m.add_function(wrap_pyfunction!(eval_psi, m)?)?;
    m.add_function(wrap_pyfunction!(eval_phi, m)?)?;
    m.add_function(wrap_pyfunction!(compute_g, m)?)?;
    m.add_function(wrap_pyfunction!(probe_fig2, m)?)?;
    m.add_function(wrap_pyfunction!(probe_am, m)?)?;
    m.add_function(wrap_pyfunction!(probe_mn, m)?)?;
    m.add_function(wrap_pyfunction!(probe_mk, m)?)?;
    Ok(())
}
