//! Corpus-relative normalization and the weighted aesthetic score.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::ids::ImageId;

/// Weights of (color harmony, lightness, simplicity); lightness counts
/// double.
pub const AESTHETIC_WEIGHTS: [f64; 3] = [1.0, 2.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureRange {
    pub min: f64,
    pub max: f64,
}

impl FeatureRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::invalid(format!("bad feature range [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        values.into_iter().fold(None, |acc, v| {
            Some(match acc {
                None => FeatureRange { min: v, max: v },
                Some(r) => FeatureRange {
                    min: r.min.min(v),
                    max: r.max.max(v),
                },
            })
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.max == self.min
    }
}

/// Min/max of each raw feature over a corpus, frozen at ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub color_harmony: FeatureRange,
    pub lightness: FeatureRange,
    pub complexity: FeatureRange,
}

impl DatasetStats {
    pub fn from_features<'a>(features: impl IntoIterator<Item = &'a FeatureVector> + Clone) -> Result<Self> {
        let range = |f: fn(&FeatureVector) -> f64| {
            FeatureRange::of(features.clone().into_iter().map(f))
                .ok_or_else(|| Error::invalid("cannot compute stats of an empty corpus"))
        };
        Ok(Self {
            color_harmony: range(|f| f.color_harmony)?,
            lightness: range(|f| f.lightness as f64)?,
            complexity: range(|f| f.complexity as f64)?,
        })
    }
}

/// `(x - min) / (max - min)`, or 0.5 for a degenerate range. Values outside
/// the range (images added after the stats were frozen) are clamped.
pub fn min_max_normalize(x: f64, range: &FeatureRange) -> f64 {
    if range.is_degenerate() {
        return 0.5;
    }
    ((x - range.min) / (range.max - range.min)).clamp(0.0, 1.0)
}

pub fn denormalize(v: f64, range: &FeatureRange) -> f64 {
    range.min + v * (range.max - range.min)
}

/// `sum(w_i x_i) / sum(w_i)`.
pub fn weighted_average(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(Error::invalid("values and weights must be non-empty and equally long"));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 || weights.iter().any(|w| *w < 0.0) {
        return Err(Error::invalid("weights must be nonnegative with a positive sum"));
    }
    Ok(values.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() / total)
}

pub fn aesthetic_score(ch_norm: f64, l_norm: f64, simplicity_norm: f64) -> Result<f64> {
    let inputs = [ch_norm, l_norm, simplicity_norm];
    if let Some(x) = inputs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::invalid(format!("normalized feature {x} outside [0, 1]")));
    }
    weighted_average(&inputs, &AESTHETIC_WEIGHTS)
}

/// Sample Pearson correlation coefficient.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::invalid("correlation needs two equally long series of length >= 2"));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut cov, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((cov / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0))
}

/// One row of the feature table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredRow {
    pub image_id: ImageId,
    pub likes: u64,
    pub color_harmony: f64,
    pub lightness: u8,
    pub complexity: u32,
    pub ch_norm: f64,
    pub l_norm: f64,
    pub c_norm: f64,
    pub simplicity_norm: f64,
    pub aesthetic_score: f64,
}

impl ScoredRow {
    pub fn new(image_id: ImageId, likes: u64, features: &FeatureVector, stats: &DatasetStats) -> Self {
        let ch_norm = min_max_normalize(features.color_harmony, &stats.color_harmony);
        let l_norm = min_max_normalize(features.lightness as f64, &stats.lightness);
        let c_norm = min_max_normalize(features.complexity as f64, &stats.complexity);
        let simplicity_norm = 1.0 - c_norm;
        let aesthetic_score =
            aesthetic_score(ch_norm, l_norm, simplicity_norm).expect("normalized values lie in [0, 1]");
        Self {
            image_id,
            likes,
            color_harmony: features.color_harmony,
            lightness: features.lightness,
            complexity: features.complexity,
            ch_norm,
            l_norm,
            c_norm,
            simplicity_norm,
            aesthetic_score,
        }
    }

    pub fn features(&self) -> FeatureVector {
        FeatureVector {
            color_harmony: self.color_harmony,
            lightness: self.lightness,
            complexity: self.complexity,
        }
    }

    /// Recomputes the score from the stored normalized columns.
    pub fn rescored(&self) -> Result<f64> {
        aesthetic_score(self.ch_norm, self.l_norm, self.simplicity_norm)
    }
}
