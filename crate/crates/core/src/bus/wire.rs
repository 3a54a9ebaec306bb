//! Wire format. UTF-8 lines terminated by `\n`:
//!
//! ```text
//! request:  REQ <id> n=<int> nnz=<int> density=<real> [diag=<real>]
//! response: OK <id> param=<PARAM> grades=<r>,<r>,<r>,<r> fallback=<0|1> micros=<int>
//! error:    ERR <id-or-dash> <reason>
//! ```
//!
//! Grades are listed in the fixed parameter order COLAMD, NATURAL,
//! AT_PLUS_A, AT_TIMES_A.

use crate::fuzzy::Grades;
use crate::ordering::OrderingParam;

/// One feature message from the sensor side.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRequest {
    pub request_id: String,
    pub n: u64,
    pub nnz: u64,
    pub density_percent: f64,
    pub diag_distance: Option<f64>,
}

impl DecisionRequest {
    /// Density recomputed from n and nnz, for the consistency check.
    pub fn recomputed_density(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        self.nnz as f64 / (self.n as u128 * self.n as u128) as f64 * 100.0
    }
}

/// The daemon's answer to one request.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionResponse {
    pub request_id: String,
    pub chosen: OrderingParam,
    pub grades: Grades,
    pub used_fallback: bool,
    /// Daemon-side processing time in microseconds.
    pub daemon_micros: u64,
}

pub(crate) fn format_request(req: &DecisionRequest) -> String {
    let mut line = format!(
        "REQ {} n={} nnz={} density={}",
        req.request_id, req.n, req.nnz, req.density_percent
    );
    if let Some(d) = req.diag_distance {
        line.push_str(&format!(" diag={d}"));
    }
    line
}

pub(crate) fn format_response(resp: &DecisionResponse) -> String {
    let g = resp.grades.as_array();
    format!(
        "OK {} param={} grades={},{},{},{} fallback={} micros={}",
        resp.request_id,
        resp.chosen,
        g[0],
        g[1],
        g[2],
        g[3],
        if resp.used_fallback { 1 } else { 0 },
        resp.daemon_micros
    )
}

pub(crate) fn format_error(id: Option<&str>, reason: &str) -> String {
    let reason: String = reason
        .chars()
        .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
        .collect();
    format!("ERR {} {}", id.unwrap_or("-"), reason)
}

fn field<'a>(tok: &'a str, key: &str) -> Result<&'a str, String> {
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| format!("expected `{key}=<value>`, got `{tok}`"))
}

/// Parses a request line. Never panics, whatever the bytes were.
pub(crate) fn parse_request(line: &str) -> Result<DecisionRequest, (Option<String>, String)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.is_empty() {
        return Err((None, "empty line".into()));
    }
    if toks[0] != "REQ" {
        return Err((None, format!("expected REQ, got `{}`", toks[0])));
    }
    if toks.len() < 2 {
        return Err((None, "missing request id".into()));
    }
    let id = toks[1].to_string();
    let fail = |msg: String| (Some(id.clone()), msg);
    if toks.len() != 5 && toks.len() != 6 {
        return Err(fail(format!(
            "expected `REQ <id> n=<int> nnz=<int> density=<real> [diag=<real>]`, got {} fields",
            toks.len()
        )));
    }
    let n: u64 = field(toks[2], "n")
        .and_then(|v| v.parse().map_err(|_| format!("bad integer `{v}`")))
        .map_err(&fail)?;
    let nnz: u64 = field(toks[3], "nnz")
        .and_then(|v| v.parse().map_err(|_| format!("bad integer `{v}`")))
        .map_err(&fail)?;
    let density: f64 = field(toks[4], "density")
        .and_then(|v| v.parse().map_err(|_| format!("bad real `{v}`")))
        .map_err(&fail)?;
    let diag: Option<f64> = match toks.get(5) {
        Some(tok) => Some(
            field(tok, "diag")
                .and_then(|v| v.parse().map_err(|_| format!("bad real `{v}`")))
                .map_err(&fail)?,
        ),
        None => None,
    };
    if n == 0 {
        return Err(fail("n must be at least 1".into()));
    }
    if !density.is_finite() || density < 0.0 {
        return Err(fail(format!(
            "density must be finite and non-negative, got {density}"
        )));
    }
    if let Some(d) = diag {
        if !d.is_finite() || d < 0.0 {
            return Err(fail(format!(
                "diag must be finite and non-negative, got {d}"
            )));
        }
    }
    Ok(DecisionRequest {
        request_id: id,
        n,
        nnz,
        density_percent: density,
        diag_distance: diag,
    })
}

/// Parses a response or error line from the daemon.
pub(crate) fn parse_response(line: &str) -> Result<DecisionResponse, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.first() {
        Some(&"OK") => {}
        Some(&"ERR") => {
            return Err(format!("daemon replied with error: {line}"));
        }
        _ => return Err(format!("unrecognized reply `{line}`")),
    }
    if toks.len() != 6 {
        return Err(format!("malformed OK reply `{line}`"));
    }
    let id = toks[1].to_string();
    let chosen: OrderingParam = field(toks[2], "param")?
        .parse()
        .map_err(|_| format!("bad parameter in `{}`", toks[2]))?;
    let grades_str = field(toks[3], "grades")?;
    let parts: Vec<&str> = grades_str.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 grades, got {}", parts.len()));
    }
    let mut grades = [0.0f64; 4];
    for (i, p) in parts.iter().enumerate() {
        grades[i] = p.parse().map_err(|_| format!("bad grade `{p}`"))?;
        if !(0.0..=1.0).contains(&grades[i]) {
            return Err(format!("grade {} out of [0, 1]", grades[i]));
        }
    }
    let used_fallback = match field(toks[4], "fallback")? {
        "0" => false,
        "1" => true,
        other => return Err(format!("bad fallback flag `{other}`")),
    };
    let daemon_micros: u64 = field(toks[5], "micros")?
        .parse()
        .map_err(|_| format!("bad micros in `{}`", toks[5]))?;
    Ok(DecisionResponse {
        request_id: id,
        chosen,
        grades: Grades::from_array(grades),
        used_fallback,
        daemon_micros,
    })
}
