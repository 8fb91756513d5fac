//! Penalty aggregation functions.
//!
//! A cost function maps the multiset of penalties of an assumed hypothesis
//! set to a non-negative real. The registry is closed: `sum`, `count`, `prob`
//! and `max`. Penalties are aggregated as a multiset indexed by hypothesis,
//! so two hypotheses with equal penalty both count.

use std::fmt;
use std::str::FromStr;

use crate::error::CostError;

/// Absolute tolerance for every cost comparison.
pub const EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CostFunction {
    /// Sum of penalties.
    #[default]
    Sum,
    /// Number of assumed hypotheses; penalties are ignored.
    Count,
    /// `1 - product of penalties`, reading penalties as probabilities.
    Prob,
    /// Largest penalty, 0 on the empty set.
    Max,
}

impl CostFunction {
    pub const ALL: [CostFunction; 4] = [
        CostFunction::Sum,
        CostFunction::Count,
        CostFunction::Prob,
        CostFunction::Max,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CostFunction::Sum => "sum",
            CostFunction::Count => "count",
            CostFunction::Prob => "prob",
            CostFunction::Max => "max",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.id() == id)
    }

    /// `S ⊆ S'` implies `eval(S) <= eval(S')`, for penalties in range.
    /// `prob` qualifies only because `eval` rejects penalties above 1.
    pub fn monotone(self) -> bool {
        true
    }

    /// Largest penalty the function accepts, if bounded.
    pub fn penalty_limit(self) -> Option<f64> {
        match self {
            CostFunction::Prob => Some(1.0),
            _ => None,
        }
    }

    pub fn eval(self, penalties: &[f64]) -> Result<f64, CostError> {
        Ok(match self {
            CostFunction::Sum => penalties.iter().fold(0.0, |acc, p| acc + p),
            CostFunction::Count => penalties.len() as f64,
            CostFunction::Prob => {
                if let Some(&bad) = penalties.iter().find(|&&p| p > 1.0) {
                    return Err(CostError::Domain {
                        cost: self.id(),
                        penalty: bad,
                    });
                }
                1.0 - penalties.iter().product::<f64>()
            }
            CostFunction::Max => penalties.iter().copied().fold(0.0, f64::max),
        })
    }
}

impl fmt::Display for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CostFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_id(s).ok_or_else(|| {
            format!("unknown cost function `{s}` (expected sum, count, prob or max)")
        })
    }
}

/// Cost of assuming the hypotheses `subset`, where `penalties[i]` is the
/// penalty of hypothesis `i`.
pub fn eval_cost(
    f: CostFunction,
    penalties: &[f64],
    subset: impl IntoIterator<Item = usize>,
) -> Result<f64, CostError> {
    let picked: Vec<f64> = subset.into_iter().map(|i| penalties[i]).collect();
    f.eval(&picked)
}

/// Maximum cost over all subsets of H; for monotone functions this is the
/// cost of H itself.
pub fn max_cost(f: CostFunction, penalties: &[f64]) -> Result<f64, CostError> {
    if !f.monotone() {
        return Err(CostError::NonMonotone(f.id()));
    }
    f.eval(penalties)
}

/// `a <= b` up to [`EPSILON`].
pub fn cost_le(a: f64, b: f64) -> bool {
    a <= b + EPSILON
}
