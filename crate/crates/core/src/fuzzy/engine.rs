use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{LinguisticVariable, SampledFuzzySet};
use crate::error::{Error, Result};

/// Default sampling increment of the output universe.
pub const DEFAULT_STEP: f64 = 0.1;

/// `IF in_1 is if[0] AND in_2 is if[1] ... THEN out is then`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzyRule {
    #[serde(rename = "if")]
    pub antecedent: Vec<String>,
    #[serde(rename = "then")]
    pub consequent: String,
}

impl FuzzyRule {
    pub fn new<S: Into<String>>(antecedent: impl IntoIterator<Item = S>, consequent: impl Into<String>) -> Self {
        Self {
            antecedent: antecedent.into_iter().map(Into::into).collect(),
            consequent: consequent.into(),
        }
    }
}

/// Declarative description of a Mamdani system, as stored in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisConfig {
    pub inputs: Vec<LinguisticVariable>,
    pub output: LinguisticVariable,
    pub rules: Vec<FuzzyRule>,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

#[derive(Debug, Clone)]
struct CompiledRule {
    antecedent: Vec<usize>,
    consequent: usize,
}

/// Mamdani inference with min-AND, min-implication, max-aggregation and
/// centroid defuzzification over a sampled output universe.
///
/// Immutable after construction; `infer` is a pure function of its inputs.
#[derive(Debug, Clone)]
pub struct MamdaniEngine {
    config: FisConfig,
    compiled: Vec<CompiledRule>,
    consequent_sets: Vec<SampledFuzzySet>,
}

#[derive(Debug, Clone)]
pub struct Inference {
    /// Crisp output.
    pub value: f64,
    /// Firing strength per rule, in rule order.
    pub strengths: Vec<f64>,
    /// Aggregated output membership.
    pub aggregate: SampledFuzzySet,
    /// Set when the aggregate is identically zero and `value` fell back to
    /// the midpoint of the output universe.
    pub no_rule_fired: bool,
}

impl MamdaniEngine {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<FuzzyRule>,
        step: f64,
    ) -> Result<Self> {
        Self::from_config(FisConfig {
            inputs,
            output,
            rules,
            step,
        })
    }

    pub fn from_config(config: FisConfig) -> Result<Self> {
        if config.inputs.is_empty() {
            return Err(Error::InvalidRule("system has no input variables".into()));
        }
        let mut compiled = Vec::with_capacity(config.rules.len());
        for (n, rule) in config.rules.iter().enumerate() {
            if rule.antecedent.len() != config.inputs.len() {
                return Err(Error::InvalidRule(format!(
                    "rule {} has {} antecedent terms for {} inputs",
                    n + 1,
                    rule.antecedent.len(),
                    config.inputs.len()
                )));
            }
            let antecedent = config
                .inputs
                .iter()
                .zip(&rule.antecedent)
                .map(|(var, label)| var.term_index(label))
                .collect::<Result<Vec<_>>>()?;
            let consequent = config.output.term_index(&rule.consequent)?;
            compiled.push(CompiledRule {
                antecedent,
                consequent,
            });
        }
        let (lo, hi) = config.output.universe();
        let consequent_sets = config
            .output
            .terms()
            .iter()
            .map(|t| SampledFuzzySet::from_fn(lo, hi, config.step, |x| t.mf.degree(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config,
            compiled,
            consequent_sets,
        })
    }

    pub fn config(&self) -> &FisConfig {
        &self.config
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.config.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.config.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.config.rules
    }

    /// Firing strength of every rule for crisp inputs given in input order.
    pub fn firing_strengths(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        if inputs.len() != self.config.inputs.len() {
            return Err(Error::invalid(format!(
                "expected {} inputs, got {}",
                self.config.inputs.len(),
                inputs.len()
            )));
        }
        if let Some(x) = inputs.iter().find(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("non-finite input {x}")));
        }
        let degrees: Vec<Vec<f64>> = self
            .config
            .inputs
            .iter()
            .zip(inputs)
            .map(|(var, &x)| var.degrees(x))
            .collect();
        Ok(self
            .compiled
            .iter()
            .map(|rule| {
                rule.antecedent
                    .iter()
                    .zip(&degrees)
                    .map(|(&term, d)| d[term])
                    .fold(1.0, f64::min)
            })
            .collect())
    }

    pub fn infer(&self, inputs: &[f64]) -> Result<Inference> {
        let strengths = self.firing_strengths(inputs)?;
        let (lo, hi) = self.config.output.universe();
        let mut aggregate = SampledFuzzySet::empty(lo, hi, self.config.step)?;
        for (rule, &strength) in self.compiled.iter().zip(&strengths) {
            if strength <= 0.0 {
                continue;
            }
            let mut clipped = self.consequent_sets[rule.consequent].clone();
            clipped.clip(strength);
            aggregate.max_assign(&clipped);
        }
        let (value, no_rule_fired) = match aggregate.centroid() {
            Some(c) => (c, false),
            None => (0.5 * (lo + hi), true),
        };
        Ok(Inference {
            value,
            strengths,
            aggregate,
            no_rule_fired,
        })
    }

    /// Same as [`infer`](Self::infer) with inputs keyed by variable name.
    pub fn infer_named(&self, inputs: &HashMap<&str, f64>) -> Result<Inference> {
        let ordered = self
            .config
            .inputs
            .iter()
            .map(|var| {
                inputs
                    .get(var.name())
                    .copied()
                    .ok_or_else(|| Error::invalid(format!("missing input `{}`", var.name())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.infer(&ordered)
    }
}
