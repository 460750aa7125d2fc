//! Color-scheme preference and the personalized total preference.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::color::{BasicColor, DominantColorSummary};
use crate::error::{Error, Result};
use crate::fuzzy::{FisConfig, FuzzyRule, LinguisticVariable, MamdaniEngine, TriangularMf, DEFAULT_STEP};
use crate::ids::{ImageId, UserId};

/// Top of the rating scale shown to participants.
pub const UI_SCALE_MAX: f64 = 10.0;

/// A user's single-color ratings in `[0, 1]`, one per basic color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorRatingProfile {
    pub user_id: UserId,
    ratings: [f64; 12],
}

impl ColorRatingProfile {
    pub fn new(user_id: UserId, ratings: [f64; 12]) -> Result<Self> {
        if let Some(r) = ratings.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::invalid(format!("rating {r} outside [0, 1]")));
        }
        Ok(Self { user_id, ratings })
    }

    pub fn uniform(user_id: UserId, rating: f64) -> Result<Self> {
        Self::new(user_id, [rating; 12])
    }

    /// Builds a profile from 0..=10 UI ratings; all 12 colors are required.
    pub fn from_ui_scale(user_id: UserId, ui: &BTreeMap<BasicColor, f64>) -> Result<Self> {
        let mut ratings = [0.0; 12];
        for color in BasicColor::ALL {
            let v = *ui
                .get(&color)
                .ok_or_else(|| Error::invalid(format!("missing rating for {color}")))?;
            if !(0.0..=UI_SCALE_MAX).contains(&v) {
                return Err(Error::invalid(format!("rating {v} for {color} outside 0..=10")));
            }
            ratings[color.index()] = v / UI_SCALE_MAX;
        }
        Self::new(user_id, ratings)
    }

    pub fn rating(&self, color: BasicColor) -> f64 {
        self.ratings[color.index()]
    }

    pub fn ratings(&self) -> BTreeMap<BasicColor, f64> {
        BasicColor::ALL.into_iter().map(|c| (c, self.rating(c))).collect()
    }
}

/// Pixel-count weighted mean of the user's ratings over the dominant colors.
pub fn color_scheme_preference(summary: &DominantColorSummary, profile: &ColorRatingProfile) -> Result<f64> {
    if summary.is_empty() {
        return Err(Error::invalid("empty dominant color summary"));
    }
    let (num, den) = summary
        .entries()
        .iter()
        .fold((0.0, 0.0), |(num, den), &(color, count)| {
            (num + profile.rating(color) * count as f64, den + count as f64)
        });
    Ok(num / den)
}

/// The two-input, nine-rule preference system: aesthetic score and color
/// preference (both in percent) to total preference on [0, 100].
pub fn preference_fis_config() -> FisConfig {
    let mf = |a, b, c| TriangularMf::new(a, b, c).expect("pinned breakpoints are ordered");
    let input = |name: &str| {
        LinguisticVariable::new(
            name,
            (0.0, 100.0),
            [
                ("Low", mf(0.0, 0.0, 50.0)),
                ("Medium", mf(20.0, 50.0, 80.0)),
                ("High", mf(50.0, 100.0, 100.0)),
            ],
        )
        .expect("pinned input partition is valid")
    };
    let output = LinguisticVariable::new(
        "TotalPreference",
        (0.0, 100.0),
        [
            ("Weak", mf(0.0, 0.0, 30.0)),
            ("Neutral", mf(10.0, 35.0, 60.0)),
            ("Strong", mf(35.0, 60.0, 85.0)),
            ("VeryStrong", mf(65.0, 100.0, 100.0)),
        ],
    )
    .expect("pinned output partition is valid");
    let rules = [
        ("Low", "Low", "Weak"),
        ("Low", "Medium", "Weak"),
        ("Low", "High", "Neutral"),
        ("Medium", "Low", "Neutral"),
        ("Medium", "Medium", "Neutral"),
        ("High", "Low", "Neutral"),
        ("Medium", "High", "Strong"),
        ("High", "Medium", "Strong"),
        ("High", "High", "VeryStrong"),
    ]
    .into_iter()
    .map(|(score, color, total)| FuzzyRule::new([score, color], total))
    .collect();
    FisConfig {
        inputs: vec![input("AestheticScore"), input("ColorPreference")],
        output,
        rules,
        step: DEFAULT_STEP,
    }
}

/// Total preference from aesthetic score and color-scheme preference.
#[derive(Debug, Clone)]
pub struct PreferenceModel {
    engine: MamdaniEngine,
}

impl Default for PreferenceModel {
    fn default() -> Self {
        Self::new(preference_fis_config()).expect("pinned system is valid")
    }
}

impl PreferenceModel {
    pub fn new(config: FisConfig) -> Result<Self> {
        if config.inputs.len() != 2 {
            return Err(Error::InvalidRule(
                "preference system needs exactly two inputs".into(),
            ));
        }
        Ok(Self {
            engine: MamdaniEngine::from_config(config)?,
        })
    }

    pub fn engine(&self) -> &MamdaniEngine {
        &self.engine
    }

    /// Both arguments in `[0, 1]`; result in the output universe.
    pub fn total_preference(&self, aesthetic_score: f64, color_preference: f64) -> Result<f64> {
        for (name, v) in [("aesthetic score", aesthetic_score), ("color preference", color_preference)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} {v} outside [0, 1]")));
            }
        }
        Ok(self
            .engine
            .infer(&[aesthetic_score * 100.0, color_preference * 100.0])?
            .value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceResult {
    pub image_id: ImageId,
    pub user_id: UserId,
    pub aesthetic_score: f64,
    pub color_scheme_preference: f64,
    pub total_preference: f64,
}

pub fn evaluate(
    model: &PreferenceModel,
    image_id: &ImageId,
    aesthetic_score: f64,
    summary: &DominantColorSummary,
    profile: &ColorRatingProfile,
) -> Result<PreferenceResult> {
    let color_scheme_preference = color_scheme_preference(summary, profile)?;
    let total_preference = model.total_preference(aesthetic_score, color_scheme_preference)?;
    Ok(PreferenceResult {
        image_id: image_id.clone(),
        user_id: profile.user_id.clone(),
        aesthetic_score,
        color_scheme_preference,
        total_preference,
    })
}
