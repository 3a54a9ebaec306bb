use std::time::Duration;

use super::client::{request_decision, BusError};
use super::Endpoint;
use crate::error::Result;
use crate::fuzzy::{decide, Decision, Grades, RuleBase};
use crate::lu::{lu_factorize, solve, FactorStats, LuFactors};
use crate::ordering::{order, OrderingParam};
use crate::sparse::{extract_features, SparseMatrix};

/// How the ordering parameter was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionPath {
    /// Answered by the daemon.
    Bus,
    /// Bus unavailable; decided with the local rule base.
    LocalRules,
    /// No bus and no local rules; took the default parameter.
    DefaultParam,
}

/// Everything a report needs from one tuned solve.
#[derive(Debug)]
pub struct TunedOutcome {
    pub solution: Vec<f64>,
    pub factors: LuFactors,
    pub stats: FactorStats,
    pub decision: Decision,
    pub path: DecisionPath,
    /// Bus round-trip, when the bus answered.
    pub round_trip: Option<Duration>,
    /// Daemon-side processing time in microseconds, when the bus answered.
    pub daemon_micros: Option<u64>,
}

/// Extracts features, obtains an ordering decision, orders, factorizes,
/// and solves.
///
/// The decision fallback chain is bus, then local rules, then the default
/// parameter; bus failures never abort the solve, while solver errors
/// (singularity, dimension mismatches) propagate.
pub fn tuned_solve(
    matrix: &SparseMatrix,
    rhs: &[f64],
    endpoint: Option<&Endpoint>,
    local_rules: Option<&RuleBase>,
    pivot_threshold: f64,
    timeout: Duration,
) -> Result<TunedOutcome> {
    let features = extract_features(matrix, true)?;

    let mut path = DecisionPath::DefaultParam;
    let mut round_trip = None;
    let mut daemon_micros = None;
    let mut decision: Option<Decision> = None;

    if let Some(ep) = endpoint {
        match request_decision(ep, &features, timeout) {
            Ok((resp, rt)) => {
                decision = Some(Decision {
                    chosen: resp.chosen,
                    grades: resp.grades,
                    used_fallback: resp.used_fallback,
                });
                path = DecisionPath::Bus;
                round_trip = Some(rt);
                daemon_micros = Some(resp.daemon_micros);
            }
            Err(
                e @ (BusError::Connect(_)
                | BusError::Timeout
                | BusError::Protocol(_)
                | BusError::Io(_)),
            ) => {
                log::warn!("bus decision failed ({e}); falling back");
            }
        }
    }
    if decision.is_none() {
        if let Some(rules) = local_rules {
            match decide(rules, &features) {
                Ok(d) => {
                    decision = Some(d);
                    path = DecisionPath::LocalRules;
                }
                Err(e) => log::warn!("local decision failed ({e}); falling back"),
            }
        }
    }
    let decision = decision.unwrap_or(Decision {
        chosen: OrderingParam::DEFAULT,
        grades: Grades::zero(),
        used_fallback: true,
    });

    let perm = order(matrix, decision.chosen)?;
    let (factors, stats) = lu_factorize(matrix, &perm, pivot_threshold)?;
    let solution = solve(&factors, rhs)?;
    Ok(TunedOutcome {
        solution,
        factors,
        stats,
        decision,
        path,
        round_trip,
        daemon_micros,
    })
}
