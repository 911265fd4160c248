//! Non-Markovian dissipative dynamics of a biased qubit coupled to a
//! single-mode harmonic oscillator inside a Lorentzian bosonic bath.
//!
//! The bath enters through its exponential correlation function only, which
//! turns the open-system problem into a closed two-index hierarchy of
//! auxiliary density operators on the joint qubit-oscillator space. This
//! crate builds the model ([`model`]), propagates the hierarchy with
//! fixed-step fourth-order Runge-Kutta and certifies its truncation depth
//! ([`hierarchy`]), measures information backflow through the trace
//! distance of evolved state pairs ([`observables`]), and carries the
//! closed-form bath and steady-state expressions used to cross-check the
//! numerics ([`analytic`]).
//!
//! # Quick start
//!
//! ```
//! use heom::{hierarchy, model, observables};
//!
//! let mut params = heom::scenario::scenario("fig2a-zeta1").unwrap();
//! params.t_max = 2.0; // keep the doc test fast
//! params.hierarchy_depth = 2;
//!
//! let state = hierarchy::init_hierarchy(&model::excited_state(), &params).unwrap();
//! let traj = hierarchy::integrate(state, params.t_max, params.dt, 10).unwrap();
//! assert!((traj.sigma_z[0] - 1.0).abs() < 1e-12);
//! assert!(traj.max_trace_err() < 1e-8);
//! ```
//!
//! Units: all frequencies are angular frequencies in inverse time units with
//! `hbar = 1`; times are in the matching units. The joint space is ordered
//! qubit (x) oscillator with the qubit index slow.

pub mod analytic;
pub mod error;
pub mod hierarchy;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod scenario;

pub use error::{Error, Result};
pub use hierarchy::{converge_depth, heom_rhs, init_hierarchy, integrate, rk4_step, HierarchyState};
pub use linalg::{kron, partial_trace_second, ComplexMatrix};
pub use model::SystemParams;
pub use observables::{nonmarkovianity, trace_distance, NonMarkovReport, Trajectory};

// The guide chapters double as doc tests so their snippets stay honest.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/bath.md")]
    mod bath {}
    #[doc = include_str!("../../../book/src/hierarchy.md")]
    mod hierarchy {}
    #[doc = include_str!("../../../book/src/nonmarkovianity.md")]
    mod nonmarkovianity {}
    #[doc = include_str!("../../../book/src/steady_state.md")]
    mod steady_state {}
}
