use super::{MembershipFunction, RuleBase};
use crate::error::{Error, Result};
use crate::ordering::OrderingParam;

/// The shipped default strategy, calibrated against the bundled corpus
/// (regenerate with `raobench calibrate`). The default parameter owns the
/// low-density band where it ties or wins there; AT_PLUS_A takes the
/// band where coupled structure (grids with dense coupling rows, wide
/// bands) punishes column-intersection orderings; NATURAL takes the high
/// band where reordering stops paying. AT_TIMES_A and NATURAL both stay
/// graded around density 0.5, so two candidates are in play there and
/// the resolution is the grade comparison plus the tie priority.
pub const DEFAULT_RULES: &str = "\
# Density-based ordering selection. Density in percent on the x-axis,
# grade in [0, 1] on the y-axis. Calibrated on the bundled corpus;
# regenerate with `raobench calibrate`.
rule COLAMD     0.0  0.0  0.6  1.05
rule AT_TIMES_A 0.02 0.06 0.6  1.2  0.8
rule AT_PLUS_A  0.45 1.05 2.8  6.0
rule NATURAL    0.3  6.0  8.0  10.0
priority COLAMD AT_TIMES_A NATURAL AT_PLUS_A
fallback COLAMD
floor 0.05
";

pub fn default_rule_base() -> RuleBase {
    load_rule_base(DEFAULT_RULES).expect("shipped default rules must parse")
}

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::RuleConfig {
        line,
        msg: msg.into(),
    }
}

/// Parses the line-oriented rule-base format:
///
/// ```text
/// rule <PARAM> <a> <b> <c> <d> [height]
/// priority <PARAM> <PARAM> <PARAM> <PARAM>
/// fallback <PARAM>
/// floor <real>
/// ```
///
/// `#` starts a comment. The priority directive is mandatory; fallback
/// defaults to COLAMD and floor to 0.05.
pub fn load_rule_base(text: &str) -> Result<RuleBase> {
    let mut rules: [Option<MembershipFunction>; 4] = [None; 4];
    let mut priority: Option<[OrderingParam; 4]> = None;
    let mut fallback: Option<OrderingParam> = None;
    let mut floor: Option<f64> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match toks[0] {
            "rule" => {
                if toks.len() != 6 && toks.len() != 7 {
                    return Err(cfg_err(
                        line_no,
                        "rule takes a parameter, four breakpoints, and an optional height",
                    ));
                }
                let param: OrderingParam = toks[1]
                    .parse()
                    .map_err(|_| cfg_err(line_no, format!("unknown parameter `{}`", toks[1])))?;
                if rules[param.index()].is_some() {
                    return Err(cfg_err(line_no, format!("duplicate rule for {param}")));
                }
                let mut nums = [0.0f64; 5];
                nums[4] = 1.0;
                for (i, tok) in toks[2..].iter().enumerate() {
                    nums[i] = tok
                        .parse()
                        .map_err(|_| cfg_err(line_no, format!("bad number `{tok}`")))?;
                }
                let mf =
                    MembershipFunction::with_height(nums[0], nums[1], nums[2], nums[3], nums[4])
                        .map_err(|e| cfg_err(line_no, e.to_string()))?;
                rules[param.index()] = Some(mf);
            }
            "priority" => {
                if priority.is_some() {
                    return Err(cfg_err(line_no, "duplicate priority directive"));
                }
                if toks.len() != 5 {
                    return Err(cfg_err(line_no, "priority must list all four parameters"));
                }
                let mut order = [OrderingParam::Colamd; 4];
                let mut seen = [false; 4];
                for (i, tok) in toks[1..].iter().enumerate() {
                    let p: OrderingParam = tok
                        .parse()
                        .map_err(|_| cfg_err(line_no, format!("unknown parameter `{tok}`")))?;
                    if seen[p.index()] {
                        return Err(cfg_err(
                            line_no,
                            format!("parameter {p} repeated in priority"),
                        ));
                    }
                    seen[p.index()] = true;
                    order[i] = p;
                }
                priority = Some(order);
            }
            "fallback" => {
                if fallback.is_some() {
                    return Err(cfg_err(line_no, "duplicate fallback directive"));
                }
                if toks.len() != 2 {
                    return Err(cfg_err(line_no, "fallback takes one parameter"));
                }
                fallback =
                    Some(toks[1].parse().map_err(|_| {
                        cfg_err(line_no, format!("unknown parameter `{}`", toks[1]))
                    })?);
            }
            "floor" => {
                if floor.is_some() {
                    return Err(cfg_err(line_no, "duplicate floor directive"));
                }
                if toks.len() != 2 {
                    return Err(cfg_err(line_no, "floor takes one number"));
                }
                floor = Some(
                    toks[1]
                        .parse()
                        .map_err(|_| cfg_err(line_no, format!("bad number `{}`", toks[1])))?,
                );
            }
            other => {
                return Err(cfg_err(line_no, format!("unknown directive `{other}`")));
            }
        }
    }

    let priority = priority.ok_or_else(|| cfg_err(last_line + 1, "missing priority directive"))?;
    RuleBase::new(
        rules,
        priority,
        fallback.unwrap_or(OrderingParam::Colamd),
        floor.unwrap_or(0.05),
    )
    .map_err(|e| match e {
        Error::InvalidInput(msg) => cfg_err(last_line + 1, msg),
        other => other,
    })
}
