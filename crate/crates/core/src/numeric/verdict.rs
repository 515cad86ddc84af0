use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::{rational_to_f64, EvalValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictState {
    Holds,
    Fails,
    #[serde(rename = "indet")]
    Indeterminate,
}

impl VerdictState {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictState::Holds => "holds",
            VerdictState::Fails => "fails",
            VerdictState::Indeterminate => "indet",
        }
    }
}

impl fmt::Display for VerdictState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VerdictState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "holds" => Ok(VerdictState::Holds),
            "fails" => Ok(VerdictState::Fails),
            "indet" => Ok(VerdictState::Indeterminate),
            other => Err(format!("unknown verdict `{other}`")),
        }
    }
}

/// Outcome of `lhs < rhs`. `margin` is `rhs - lhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub state: VerdictState,
    pub margin: f64,
    pub exact: bool,
}

impl Verdict {
    pub fn exact(holds: bool, margin: f64) -> Self {
        Self {
            state: if holds {
                VerdictState::Holds
            } else {
                VerdictState::Fails
            },
            margin,
            exact: true,
        }
    }

    pub fn holds(&self) -> bool {
        self.state == VerdictState::Holds
    }

    pub fn is_indeterminate(&self) -> bool {
        self.state == VerdictState::Indeterminate
    }

    /// Decide `lhs < rhs` from certified enclosures. Not "exact", but never wrong.
    pub fn from_intervals(lhs: &Interval, rhs: &Interval) -> Self {
        let margin = rhs.midpoint_f64() - lhs.midpoint_f64();
        let state = if lhs.hi < rhs.lo {
            VerdictState::Holds
        } else if lhs.lo >= rhs.hi {
            VerdictState::Fails
        } else {
            VerdictState::Indeterminate
        };
        Self {
            state,
            margin,
            exact: false,
        }
    }
}

/// Half-width of the undecidable zone around a float comparison:
/// propagated error of both sides plus `rel` times the larger magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardBand {
    pub rel: f64,
}

impl Default for GuardBand {
    fn default() -> Self {
        Self { rel: 1e-9 }
    }
}

impl GuardBand {
    pub fn new(rel: f64) -> Self {
        Self { rel }
    }

    pub fn half_width(&self, lhs: &EvalValue, rhs: &EvalValue) -> f64 {
        let scale = lhs.to_f64().abs().max(rhs.to_f64().abs());
        lhs.abs_err() + rhs.abs_err() + self.rel * scale
    }
}

/// `lhs < rhs`, exactly when both sides are exact, otherwise guarded.
pub fn compare_lt(lhs: &EvalValue, rhs: &EvalValue, guard: GuardBand) -> Verdict {
    if let (EvalValue::Exact(a), EvalValue::Exact(b)) = (lhs, rhs) {
        let diff = b - a;
        return Verdict::exact(diff.is_positive(), rational_to_f64(&diff));
    }
    let margin = rhs.to_f64() - lhs.to_f64();
    let half = guard.half_width(lhs, rhs) + f64::EPSILON * margin.abs();
    let state = if !half.is_finite() || margin.abs() <= half {
        VerdictState::Indeterminate
    } else if margin > 0.0 {
        VerdictState::Holds
    } else {
        VerdictState::Fails
    };
    Verdict {
        state,
        margin,
        exact: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn exact_comparison_is_strict() {
        let two = EvalValue::from(2u64);
        let v = compare_lt(&two, &two, GuardBand::default());
        assert_eq!(v.state, VerdictState::Fails);
        assert!(v.exact);
        let big = EvalValue::Exact(BigRational::new(22.into(), 5.into()));
        let v = compare_lt(&two, &big, GuardBand::default());
        assert!(v.holds());
        assert!((v.margin - 2.4).abs() < 1e-15);
    }

    #[test]
    fn near_ties_are_indeterminate() {
        let a = EvalValue::Float { value: 1.0, rel_err: 1e-16 };
        let b = EvalValue::Float { value: 1.0 + 1e-12, rel_err: 1e-16 };
        assert!(compare_lt(&a, &b, GuardBand::default()).is_indeterminate());
        assert!(compare_lt(&a, &b, GuardBand::new(0.0)).holds());
        let c = EvalValue::Float { value: 1.5, rel_err: 1e-16 };
        assert!(compare_lt(&a, &c, GuardBand::default()).holds());
        assert_eq!(compare_lt(&c, &a, GuardBand::default()).state, VerdictState::Fails);
    }

    #[test]
    fn verdict_text_round_trips() {
        for s in [VerdictState::Holds, VerdictState::Fails, VerdictState::Indeterminate] {
            assert_eq!(s.as_str().parse::<VerdictState>().unwrap(), s);
        }
    }
}
