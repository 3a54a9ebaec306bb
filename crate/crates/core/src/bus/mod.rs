//! The sensor/decision/actuator loop: a stationed daemon answers feature
//! messages with ordering parameters over a line-oriented byte-stream
//! protocol, and a small client lets the solver wrapper ask it.

mod client;
mod server;
mod tuned;
mod wire;

pub use client::{request_decision, BusClient, BusError};
pub use server::{serve, spawn_daemon, DaemonHandle};
pub use tuned::{tuned_solve, DecisionPath, TunedOutcome};
pub use wire::{DecisionRequest, DecisionResponse};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::Error;

/// Where the daemon listens: a TCP `host:port` or a filesystem socket
/// path (anything containing a `/`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Tcp(String),
    Unix(PathBuf),
}

impl FromStr for Endpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.is_empty() {
            return Err(Error::InvalidInput("empty endpoint".into()));
        }
        if s.contains('/') {
            Ok(Endpoint::Unix(PathBuf::from(s)))
        } else if s.contains(':') {
            Ok(Endpoint::Tcp(s.to_string()))
        } else {
            Err(Error::InvalidInput(format!(
                "endpoint `{s}` is neither host:port nor a socket path (paths need a `/`)"
            )))
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Tcp(addr) => f.write_str(addr),
            Endpoint::Unix(path) => f.write_str(&path.to_string_lossy()),
        }
    }
}
