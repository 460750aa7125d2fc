use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::TriangularMf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyTerm {
    pub label: String,
    pub mf: TriangularMf,
}

/// A named universe `[lo, hi]` partitioned by triangular terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VariableDef")]
pub struct LinguisticVariable {
    name: String,
    universe: (f64, f64),
    terms: Vec<FuzzyTerm>,
}

#[derive(Deserialize)]
struct VariableDef {
    name: String,
    universe: (f64, f64),
    terms: Vec<FuzzyTerm>,
}

impl TryFrom<VariableDef> for LinguisticVariable {
    type Error = Error;

    fn try_from(def: VariableDef) -> Result<Self> {
        let terms = def.terms.into_iter().map(|t| (t.label, t.mf));
        LinguisticVariable::new(def.name, def.universe, terms)
    }
}

impl LinguisticVariable {
    /// Builds a variable, checking that term supports stay inside the
    /// universe, labels are unique and the terms cover every point.
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        universe: (f64, f64),
        terms: impl IntoIterator<Item = (S, TriangularMf)>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidVariable {
            name: name.clone(),
            reason,
        };
        let (lo, hi) = universe;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid(format!("empty universe [{lo}, {hi}]")));
        }
        let terms: Vec<FuzzyTerm> = terms
            .into_iter()
            .map(|(label, mf)| FuzzyTerm {
                label: label.into(),
                mf,
            })
            .collect();
        if terms.is_empty() {
            return Err(invalid("no terms".into()));
        }
        let mut seen = HashSet::new();
        for t in &terms {
            if !seen.insert(t.label.as_str()) {
                return Err(invalid(format!("duplicate term `{}`", t.label)));
            }
            let (a, c) = t.mf.support();
            if a < lo || c > hi {
                return Err(invalid(format!(
                    "term `{}` support [{a}, {c}] leaves the universe",
                    t.label
                )));
            }
        }
        // Coverage: a gap can only open at a breakpoint or strictly between
        // two consecutive breakpoints, where every degree is linear.
        let mut points: Vec<f64> = vec![lo, hi];
        for t in &terms {
            points.extend([t.mf.left(), t.mf.peak(), t.mf.right()]);
        }
        points.sort_by(|x, y| x.total_cmp(y));
        points.dedup();
        let covered = |x: f64| terms.iter().any(|t| t.mf.degree(x) > 0.0);
        for w in points.windows(2) {
            for x in [w[0], 0.5 * (w[0] + w[1]), w[1]] {
                if !covered(x) {
                    return Err(invalid(format!("no term covers x = {x}")));
                }
            }
        }
        Ok(Self {
            name,
            universe,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn terms(&self) -> &[FuzzyTerm] {
        &self.terms
    }

    pub fn term_index(&self, label: &str) -> Result<usize> {
        self.terms
            .iter()
            .position(|t| t.label == label)
            .ok_or_else(|| Error::UnknownTerm {
                variable: self.name.clone(),
                term: label.to_string(),
            })
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.universe.0, self.universe.1)
    }

    /// Degree of every term at `x`, in term order. Inputs outside the
    /// universe are clamped first.
    pub fn degrees(&self, x: f64) -> Vec<f64> {
        let x = self.clamp(x);
        self.terms.iter().map(|t| t.mf.degree(x)).collect()
    }

    /// Label/degree pairs at `x`, in term order.
    pub fn fuzzify(&self, x: f64) -> Vec<(&str, f64)> {
        self.terms
            .iter()
            .zip(self.degrees(x))
            .map(|(t, d)| (t.label.as_str(), d))
            .collect()
    }
}
