use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// A density value as printed in a corpus manifest, kept with its decimal
/// precision so comparisons honor however many digits were published.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedDensity {
    pub value: f64,
    pub decimals: u32,
    pub printed: String,
}

impl ExpectedDensity {
    pub fn parse(printed: &str) -> Option<ExpectedDensity> {
        let value: f64 = printed.parse().ok()?;
        if !value.is_finite() || value < 0.0 || printed.contains(['e', 'E']) {
            return None;
        }
        let decimals = printed
            .split_once('.')
            .map(|(_, frac)| frac.len() as u32)
            .unwrap_or(0);
        Some(ExpectedDensity {
            value,
            decimals,
            printed: printed.to_string(),
        })
    }

    /// True when `computed` rounds to this value at the printed precision.
    pub fn matches(&self, computed: f64) -> bool {
        let half_ulp = 0.5 * 10f64.powi(-(self.decimals as i32));
        (computed - self.value).abs() <= half_ulp + 1e-12
    }
}

/// One matrix in a benchmark corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub path: PathBuf,
    pub expected_density: Option<ExpectedDensity>,
}

/// Loads a corpus manifest: one `name <tab> path <tab> [expected_density]`
/// per line, `#` comments, relative paths resolved against the manifest's
/// directory.
pub fn load_manifest<P: AsRef<Path>>(path: P) -> Result<Vec<CorpusEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() < 2 || fields.len() > 3 || fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected `name <tab> path <tab> [expected_density]`".into(),
            });
        }
        let expected_density = match fields.get(2).filter(|s| !s.is_empty()) {
            Some(s) => Some(ExpectedDensity::parse(s).ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("bad expected density `{s}`"),
            })?),
            None => None,
        };
        let raw_path = Path::new(fields[1]);
        let resolved = if raw_path.is_absolute() {
            raw_path.to_path_buf()
        } else {
            base.join(raw_path)
        };
        entries.push(CorpusEntry {
            name: fields[0].to_string(),
            path: resolved,
            expected_density,
        });
    }
    Ok(entries)
}
