//! Dynamics of a two-species quadratic stochastic operator whose heredity
//! coefficient jumps at 1/3 and 2/3.
//!
//! The operator on the simplex reduces to a piecewise quadratic map
//! `f_{a,b,c}` of `[0,1]`. This crate evaluates that map ([`map`]),
//! classifies the parameter regimes and their fixed-point sets
//! ([`regimes`]), iterates and classifies trajectories ([`dynamics`]),
//! solves for 2-cycles straddling a discontinuity ([`periodic`]), and runs
//! numerical checks of the known results for every regime ([`suites`]).

pub mod dynamics;
pub mod error;
pub mod interval;
pub mod map;
pub mod periodic;
pub mod regimes;
pub mod scan;
pub mod suites;

pub use dynamics::{
    detect_behavior, iterate, trapping_sets, verify_attraction, verify_invariance, AttractionReport,
    Behavior, InvarianceReport, OrbitRecord, TrappingRole, TrappingSet,
};
pub use error::{QsoError, Result};
pub use interval::{Component, IntervalSet};
pub use map::{
    eval, eval_derivative, piece_of, qso_step, Params, PieceId, SimplexPoint, ONE_THIRD, TWO_THIRDS,
};
pub use periodic::{
    brute_force_two_cycles, orbit_from_params, orbit_from_params_mirror, params_from_orbit,
    validate_condition_pc, CycleSide, TwoCycle,
};
pub use regimes::{classify, fixed_point_set, stability_of, RegimeCase, Side, StabilityClass};
