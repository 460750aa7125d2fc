//! Fuzzy sets with triangular membership functions and a Mamdani
//! inference engine.

mod engine;
mod membership;
mod sampled;
mod variable;

pub use engine::{FisConfig, FuzzyRule, Inference, MamdaniEngine, DEFAULT_STEP};
pub use membership::TriangularMf;
pub use sampled::{sample_count, SampledFuzzySet};
pub use variable::{FuzzyTerm, LinguisticVariable};
