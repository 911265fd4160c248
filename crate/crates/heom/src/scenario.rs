//! Named parameter presets for the built-in study scenarios.
//!
//! Two families are provided. The `fig2*` presets sweep the qubit-oscillator
//! coupling ratio zeta at a fixed coupling `g0 = 0.02` (the oscillator
//! frequency is derived as `g0 / zeta`, and `zeta = 0` is realized as
//! `g0 = 0` with the oscillator kept in the state space). The `fig3*`
//! presets sweep the bath spectral width at fixed `zeta = 0.1`. Dynamics
//! presets keep eight oscillator levels; backflow-measure presets keep four
//! and integrate to `t_c = 50`.

use crate::model::SystemParams;

/// Default depth-convergence tolerance on the population difference.
pub const CONVERGENCE_TOL: f64 = 1e-3;

/// Default time-integration window for the backflow measure.
pub const DEFAULT_T_C: f64 = 50.0;

/// Default number of sampled initial-state pairs.
pub const DEFAULT_N_SAMPLES: usize = 100;

/// All built-in scenario names.
pub const SCENARIO_NAMES: &[&str] = &[
    "fig2a-zeta0",
    "fig2a-zeta1",
    "fig2a-zeta4",
    "fig2c-zeta0",
    "fig2c-zeta2",
    "fig2c-zeta4",
    "fig3a-lam0.1",
    "fig3a-lam0.3",
    "fig3a-lam2",
    "fig3b-lam0.1",
    "fig3b-lam0.3",
    "fig3b-lam2",
    "fig3c",
    "fig3d",
];

/// Resolve a scenario name to its parameter preset, or `None` for an
/// unknown name.
pub fn scenario(name: &str) -> Option<SystemParams> {
    let fig2 = |epsilon: f64, zeta: f64| {
        let g0 = if zeta == 0.0 { 0.0 } else { 0.02 };
        SystemParams {
            epsilon,
            delta: 0.5,
            omega0: if zeta == 0.0 { 1.0 } else { g0 / zeta },
            g0,
            alpha: 2.0,
            gamma: 0.5,
            lambda: 0.25,
            n_osc: 8,
            hierarchy_depth: 6,
            dt: 0.01,
            t_max: 100.0,
        }
    };
    let fig3 = |epsilon: f64, lambda_over_gamma: f64, n_osc: usize| SystemParams {
        epsilon,
        delta: 2.0,
        omega0: 0.2,
        g0: 0.02,
        alpha: 2.0,
        gamma: 0.5,
        lambda: lambda_over_gamma * 0.5,
        n_osc,
        hierarchy_depth: 4,
        dt: 0.01,
        t_max: 100.0,
    };
    Some(match name {
        "fig2a-zeta0" => fig2(0.0, 0.0),
        "fig2a-zeta1" => fig2(0.0, 1.0),
        "fig2a-zeta4" => fig2(0.0, 4.0),
        "fig2c-zeta0" => fig2(0.1, 0.0),
        "fig2c-zeta2" => fig2(0.1, 2.0),
        "fig2c-zeta4" => fig2(0.1, 4.0),
        "fig3a-lam0.1" => fig3(0.0, 0.1, 8),
        "fig3a-lam0.3" => fig3(0.0, 0.3, 8),
        "fig3a-lam2" => fig3(0.0, 2.0, 8),
        "fig3b-lam0.1" => fig3(0.3, 0.1, 8),
        "fig3b-lam0.3" => fig3(0.3, 0.3, 8),
        "fig3b-lam2" => fig3(0.3, 2.0, 8),
        // Backflow-measure bases: four oscillator levels, lambda is swept.
        "fig3c" => fig3(0.0, 1.0, 4),
        "fig3d" => fig3(0.3, 1.0, 4),
        _ => return None,
    })
}
