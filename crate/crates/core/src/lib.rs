//! Run-time auto-tuning for a small sparse direct LU solver.
//!
//! The pipeline: extract features from a sparse matrix (chiefly its
//! density), grade the four fill-reducing ordering parameters with a
//! fuzzy rule base, pick one, factorize, and solve. A line-protocol
//! daemon ([`bus`]) serves decisions to out-of-process callers, and the
//! [`harness`] module measures best-parameter sweeps, tuned-vs-default
//! speedups, and the decision plumbing's overhead.

pub mod bus;
pub mod error;
pub mod fuzzy;
pub mod harness;
pub mod lu;
pub mod ordering;
pub mod sparse;

pub use bus::{
    request_decision, serve, spawn_daemon, tuned_solve, BusClient, BusError, DaemonHandle,
    DecisionPath, DecisionRequest, DecisionResponse, Endpoint, TunedOutcome,
};
pub use error::{Error, Result, SingularKind};
pub use fuzzy::{
    decide, decide_density, default_rule_base, grade_all, load_rule_base, switch_points, Decision,
    Grades, MembershipFunction, RuleBase, SwitchPoint, DEFAULT_RULES,
};
pub use lu::{lu_factorize, solve, symbolic_fill, FactorStats, LuFactors};
pub use ordering::{
    approx_min_degree_columns, min_degree_order, natural_order, order, EliminationGraph,
    OrderingParam,
};
pub use sparse::{
    at_plus_a_pattern, ata_pattern, density, extract_features, parse_matrix_market,
    read_matrix_market_file, write_matrix_market, MatrixFeatures, Permutation, SparseMatrix,
};
