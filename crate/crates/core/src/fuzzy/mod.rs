//! The decision procedure: a rule base of membership functions over
//! matrix density grades each ordering parameter, and the maximum grade
//! wins with deterministic tie-breaking.

mod config;

pub use config::{default_rule_base, load_rule_base, DEFAULT_RULES};

use crate::error::{Error, Result};
use crate::ordering::OrderingParam;
use crate::sparse::MatrixFeatures;

/// Trapezoidal membership function over the density axis (percent).
///
/// The grade rises 0 to `height` on [a, b], holds on [b, c], and falls
/// back to 0 on [c, d]. Triangles are the b == c case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    height: f64,
}

impl MembershipFunction {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::with_height(a, b, c, d, 1.0)
    }

    pub fn with_height(a: f64, b: f64, c: f64, d: f64, height: f64) -> Result<Self> {
        for v in [a, b, c, d, height] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(
                    "membership breakpoints must be finite".into(),
                ));
            }
        }
        if !(a <= b && b <= c && c <= d) {
            return Err(Error::InvalidInput(format!(
                "non-monotone breakpoints: {a} {b} {c} {d}"
            )));
        }
        if !(height > 0.0 && height <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "height must be in (0, 1], got {height}"
            )));
        }
        Ok(MembershipFunction { a, b, c, d, height })
    }

    pub fn breakpoints(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn grade(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            0.0
        } else if x >= self.b && x <= self.c {
            self.height
        } else if x < self.b {
            self.height * (x - self.a) / (self.b - self.a)
        } else {
            self.height * (self.d - x) / (self.d - self.c)
        }
    }

    /// Steepest edge slope, for Lipschitz checks.
    pub fn max_slope(&self) -> f64 {
        let rise = if self.b > self.a {
            self.height / (self.b - self.a)
        } else {
            0.0
        };
        let fall = if self.d > self.c {
            self.height / (self.d - self.c)
        } else {
            0.0
        };
        rise.max(fall)
    }
}

/// Grades for all four parameters, indexed by [`OrderingParam::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grades([f64; 4]);

impl Grades {
    pub fn zero() -> Self {
        Grades([0.0; 4])
    }

    pub fn from_array(values: [f64; 4]) -> Self {
        Grades(values)
    }

    pub fn get(&self, param: OrderingParam) -> f64 {
        self.0[param.index()]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }
}

/// One membership function per parameter (absent means grade 0
/// everywhere), a strict tie priority over all four parameters, a
/// fallback parameter, and the activation floor below which the fallback
/// is used.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    rules: [Option<MembershipFunction>; 4],
    tie_priority: [OrderingParam; 4],
    fallback: OrderingParam,
    floor: f64,
}

impl RuleBase {
    pub fn new(
        rules: [Option<MembershipFunction>; 4],
        tie_priority: [OrderingParam; 4],
        fallback: OrderingParam,
        floor: f64,
    ) -> Result<Self> {
        let mut seen = [false; 4];
        for p in tie_priority {
            if seen[p.index()] {
                return Err(Error::InvalidInput(format!("tie priority repeats {p}")));
            }
            seen[p.index()] = true;
        }
        if rules.iter().all(Option::is_none) {
            return Err(Error::InvalidInput("at least one rule is required".into()));
        }
        if fallback != OrderingParam::Colamd && rules[fallback.index()].is_none() {
            return Err(Error::InvalidInput(format!(
                "fallback {fallback} has no rule and is not COLAMD"
            )));
        }
        if !(0.0..=1.0).contains(&floor) || !floor.is_finite() {
            return Err(Error::InvalidInput(format!(
                "activation floor must be in [0, 1], got {floor}"
            )));
        }
        Ok(RuleBase {
            rules,
            tie_priority,
            fallback,
            floor,
        })
    }

    pub fn rule(&self, param: OrderingParam) -> Option<&MembershipFunction> {
        self.rules[param.index()].as_ref()
    }

    pub fn tie_priority(&self) -> [OrderingParam; 4] {
        self.tie_priority
    }

    pub fn fallback(&self) -> OrderingParam {
        self.fallback
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Steepest edge slope across all rules.
    pub fn max_slope(&self) -> f64 {
        self.rules
            .iter()
            .flatten()
            .map(MembershipFunction::max_slope)
            .fold(0.0, f64::max)
    }

    /// Copy with every rule height and the floor scaled by `s` in (0, 1].
    pub fn with_scaled_heights(&self, s: f64) -> Result<RuleBase> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "scale must be in (0, 1], got {s}"
            )));
        }
        let mut rules = self.rules;
        for slot in rules.iter_mut() {
            if let Some(mf) = slot {
                *slot = Some(MembershipFunction::with_height(
                    mf.a,
                    mf.b,
                    mf.c,
                    mf.d,
                    mf.height * s,
                )?);
            }
        }
        RuleBase::new(rules, self.tie_priority, self.fallback, self.floor * s)
    }
}

/// Outcome of one selection.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// The winning parameter (the fallback when `used_fallback` is set).
    pub chosen: OrderingParam,
    pub grades: Grades,
    /// Set when every grade was below the activation floor.
    pub used_fallback: bool,
}

/// Evaluates every parameter's membership at the given density.
pub fn grade_all(rule_base: &RuleBase, density_percent: f64) -> Result<Grades> {
    if density_percent.is_nan() || density_percent < 0.0 {
        return Err(Error::InvalidInput(format!(
            "density must be non-negative, got {density_percent}"
        )));
    }
    let mut grades = [0.0f64; 4];
    for p in OrderingParam::ALL {
        if let Some(mf) = rule_base.rule(p) {
            grades[p.index()] = mf.grade(density_percent);
        }
    }
    Ok(Grades(grades))
}

/// Picks the parameter with the maximum grade; exact ties resolve by the
/// configured priority, and when every grade is below the activation
/// floor the fallback is chosen with `used_fallback` set.
pub fn decide_density(rule_base: &RuleBase, density_percent: f64) -> Result<Decision> {
    let grades = grade_all(rule_base, density_percent)?;
    let max = grades.max();
    if max < rule_base.floor {
        return Ok(Decision {
            chosen: rule_base.fallback,
            grades,
            used_fallback: true,
        });
    }
    let mut chosen = rule_base.tie_priority[0];
    let mut best = grades.get(chosen);
    for &p in &rule_base.tie_priority[1..] {
        let g = grades.get(p);
        if g > best {
            best = g;
            chosen = p;
        }
    }
    Ok(Decision {
        chosen,
        grades,
        used_fallback: false,
    })
}

/// Decision for a full feature record. Only the density feeds the rules;
/// the diagonal-distance feature is carried for future rule sets.
pub fn decide(rule_base: &RuleBase, features: &MatrixFeatures) -> Result<Decision> {
    decide_density(rule_base, features.density_percent)
}

/// A point where the decision changes as density grows, with the decision
/// in force at and after it.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchPoint {
    pub density: f64,
    pub chosen: OrderingParam,
    pub used_fallback: bool,
}

/// Enumerates the switch points of the piecewise-constant decision
/// function over [lo, hi]: a coarse scan followed by bisection to 1e-9.
/// The first element is the decision at `lo` itself.
pub fn switch_points(
    rule_base: &RuleBase,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<Vec<SwitchPoint>> {
    if !(lo >= 0.0 && hi > lo && step > 0.0) {
        return Err(Error::InvalidInput("need 0 <= lo < hi and step > 0".into()));
    }
    let key = |d: &Decision| (d.chosen, d.used_fallback);
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev = decide_density(rule_base, lo)?;
    out.push(SwitchPoint {
        density: lo,
        chosen: prev.chosen,
        used_fallback: prev.used_fallback,
    });
    let mut x = lo;
    while x < hi {
        x = (x + step).min(hi);
        let cur = decide_density(rule_base, x)?;
        if key(&cur) != key(&prev) {
            // Bisect [prev_x, x] down to the boundary.
            let (mut a, mut b) = (prev_x, x);
            while b - a > 1e-9 {
                let mid = 0.5 * (a + b);
                if key(&decide_density(rule_base, mid)?) == key(&prev) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            out.push(SwitchPoint {
                density: b,
                chosen: cur.chosen,
                used_fallback: cur.used_fallback,
            });
        }
        prev = cur;
        prev_x = x;
    }
    Ok(out)
}
