//! Named parameter presets for the three benchmark problems, so runs don't
//! depend on hand-transcribed parameter lists.
//!
//! The `*-algo3` presets drive the adaptive conjugate-gradient solver; the
//! `*-compare` presets additionally carry admissible parameter blocks for
//! every baseline so a single `compare` invocation reproduces the
//! iteration-count tables.

use serde_json::json;

use crate::config::{
    AlgorithmConfig, OutputConfig, ProblemConfig, ProblemKind, RunConfig, StoppingConfig,
};
use vip_solvers::StopCriterion;

fn cg_params(mu: f64, lambda0: f64, rho_scale: f64, alpha: serde_json::Value) -> serde_json::Value {
    json!({
        "mu": mu,
        "psi": 1.0,
        "lambda0": lambda0,
        "rho_scale": rho_scale,
        "alpha": alpha,
        "gamma": {"c": 1.0, "p": 1.2},
    })
}

/// Anchor weights 1/(1000j + 1000): vanishing fast so the anchor term does
/// not floor the residual above the benchmark tolerances on the strongly
/// contracting problems.
fn fast_anchor() -> serde_json::Value {
    json!({"a": 1000.0, "b": 1000.0, "p": 1.0})
}

/// Anchor weights 1/(2j + 3): the slow decay that drives last-iterate
/// convergence on the bilinear game.
fn game_anchor() -> serde_json::Value {
    json!({"a": 2.0, "b": 3.0, "p": 1.0})
}

fn sun_run() -> RunConfig {
    RunConfig {
        problem: ProblemConfig {
            kind: ProblemKind::Sun,
            dim: Some(100),
            ..ProblemConfig::default()
        },
        algorithm: AlgorithmConfig {
            name: "cg-segm".into(),
            params: cg_params(0.05, 0.03, 0.1, fast_anchor()),
        },
        stopping: StoppingConfig {
            criterion: StopCriterion::Residual,
            tol: 1e-4,
            max_iters: 10_000,
        },
        ..RunConfig::default()
    }
}

fn ball_run() -> RunConfig {
    RunConfig {
        problem: ProblemConfig {
            kind: ProblemKind::Ball,
            dim: Some(50),
            ..ProblemConfig::default()
        },
        algorithm: AlgorithmConfig {
            name: "cg-segm".into(),
            params: cg_params(0.05, 0.03, 0.2, fast_anchor()),
        },
        stopping: StoppingConfig {
            criterion: StopCriterion::Residual,
            tol: 1e-4,
            max_iters: 5_000,
        },
        ..RunConfig::default()
    }
}

fn game_run() -> RunConfig {
    RunConfig {
        problem: ProblemConfig {
            kind: ProblemKind::Game,
            houses: 50,
            ..ProblemConfig::default()
        },
        algorithm: AlgorithmConfig {
            name: "cg-segm".into(),
            params: cg_params(0.5, 0.03, 0.2, game_anchor()),
        },
        stopping: StoppingConfig {
            criterion: StopCriterion::Residual,
            tol: 1e-5,
            max_iters: 2_000_000,
        },
        output: OutputConfig {
            trace_every: 100,
            ..OutputConfig::default()
        },
        ..RunConfig::default()
    }
}

fn with_baselines(mut cfg: RunConfig, blocks: &[(&str, serde_json::Value)]) -> RunConfig {
    cfg.algorithms
        .insert("cg-segm".into(), cfg.algorithm.params.clone());
    for (name, params) in blocks {
        cfg.algorithms.insert((*name).into(), params.clone());
    }
    cfg
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<RunConfig> {
    let cfg = match name {
        "example1-algo3" => sun_run(),
        "example2-algo3" => ball_run(),
        "example3-algo3" => game_run(),
        // The Sun operator carries no global Lipschitz hint, so the
        // fixed-step baselines need explicit admissible steps (box bound
        // on the region the iterates visit: ||D|| + 7 ~ 12.2).
        "example1-compare" => with_baselines(
            sun_run(),
            &[
                ("egm", json!({"lambda": 0.07})),
                ("popov", json!({"lambda": 0.024})),
                ("segm", json!({"lambda": 0.07})),
                ("yang", json!({"lambda0": 0.03, "mu": 0.5})),
            ],
        ),
        // Ball and game carry hints; empty blocks select the derived
        // default steps.
        "example2-compare" => with_baselines(
            ball_run(),
            &[
                ("egm", json!({})),
                ("popov", json!({})),
                ("segm", json!({})),
                ("yang", json!({"lambda0": 0.03, "mu": 0.5})),
            ],
        ),
        "example3-compare" => with_baselines(
            game_run(),
            &[
                ("egm", json!({})),
                ("popov", json!({})),
                ("segm", json!({})),
                ("yang", json!({"lambda0": 0.03, "mu": 0.5})),
            ],
        ),
        _ => return None,
    };
    Some(cfg)
}

/// Preset names with one-line descriptions, in listing order.
pub fn preset_names() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "example1-algo3",
            "nonlinear orthant problem, d=100, adaptive CG solver, tol 1e-4",
        ),
        (
            "example2-algo3",
            "ball-constrained pseudomonotone problem, d=50, adaptive CG solver, tol 1e-4",
        ),
        (
            "example3-algo3",
            "policeman-burglar game, n=50, adaptive CG solver, tol 1e-5",
        ),
        (
            "example1-compare",
            "orthant problem with admissible baseline steps for comparisons",
        ),
        (
            "example2-compare",
            "ball problem with hint-derived baseline steps",
        ),
        (
            "example3-compare",
            "matrix game with hint-derived baseline steps",
        ),
    ]
}
