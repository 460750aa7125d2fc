//! Per-image aesthetic features: color harmony, lightness level and
//! complexity.

use serde::{Deserialize, Serialize};

use crate::color::{fuzzy_hue_histogram, FuzzyHueHistogram, HUE_TERMS};
use crate::imaging::{count_contours, StandardImage};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// 0..=100
    pub color_harmony: f64,
    /// 1..=10
    pub lightness: u8,
    /// Edge-component count.
    pub complexity: u32,
}

pub fn extract(img: &StandardImage) -> FeatureVector {
    FeatureVector {
        color_harmony: color_harmony(img),
        lightness: lightness_level(img),
        complexity: complexity(img),
    }
}

/// Hue-wheel template families. Each template allows a set of hue terms
/// (indices into the 8-term wheel, 45 degrees apart).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HarmonyTemplate {
    Monochromatic(usize),
    Analogous(usize),
    Complementary(usize),
    SplitComplementary(usize),
}

impl HarmonyTemplate {
    pub fn all() -> impl Iterator<Item = HarmonyTemplate> {
        (0..HUE_TERMS).flat_map(|t| {
            [
                HarmonyTemplate::Monochromatic(t),
                HarmonyTemplate::Analogous(t),
                HarmonyTemplate::Complementary(t),
                HarmonyTemplate::SplitComplementary(t),
            ]
        })
    }

    pub fn terms(self) -> Vec<usize> {
        let at = |t: usize, offset: usize| (t + offset) % HUE_TERMS;
        match self {
            HarmonyTemplate::Monochromatic(t) => vec![t],
            HarmonyTemplate::Analogous(t) => vec![t, at(t, 1)],
            HarmonyTemplate::Complementary(t) => vec![t, at(t, 4)],
            // t, t + 135, t + 225 degrees
            HarmonyTemplate::SplitComplementary(t) => vec![t, at(t, 3), at(t, 5)],
        }
    }

    /// Share of the histogram the template accepts; neutrals always fit.
    pub fn fit(self, hist: &FuzzyHueHistogram) -> f64 {
        hist.achromatic + self.terms().into_iter().map(|t| hist.hue[t]).sum::<f64>()
    }
}

/// Best template and its harmony score (0..=100).
pub fn best_template(hist: &FuzzyHueHistogram) -> (HarmonyTemplate, f64) {
    let mut best = (HarmonyTemplate::Monochromatic(0), f64::NEG_INFINITY);
    for template in HarmonyTemplate::all() {
        let fit = template.fit(hist);
        if fit > best.1 {
            best = (template, fit);
        }
    }
    (best.0, (100.0 * best.1).clamp(0.0, 100.0))
}

pub fn harmony_from_histogram(hist: &FuzzyHueHistogram) -> f64 {
    best_template(hist).1
}

pub fn color_harmony(img: &StandardImage) -> f64 {
    harmony_from_histogram(&fuzzy_hue_histogram(img))
}

/// Perceived brightness of the mean color,
/// `sqrt(0.299 R^2 + 0.587 G^2 + 0.114 B^2)`.
pub fn perceived_brightness(img: &StandardImage) -> f64 {
    let [r, g, b] = channel_sums(img);
    let n = img.pixels().len() as f64;
    let (r, g, b) = (r as f64 / n, g as f64 / n, b as f64 / n);
    (0.299 * r * r + 0.587 * g * g + 0.114 * b * b).sqrt()
}

fn channel_sums(img: &StandardImage) -> [u64; 3] {
    img.pixels().iter().fold([0u64; 3], |mut acc, p| {
        for (a, &v) in acc.iter_mut().zip(p) {
            *a += v as u64;
        }
        acc
    })
}

/// Brightness bin in 1..=10 with width 25.6: `min(10, floor(b / 25.6) + 1)`.
///
/// Evaluated in integers: `b >= 25.6 k` iff
/// `100 (299 Sr^2 + 587 Sg^2 + 114 Sb^2) >= 65_536_000 k^2 N^2` for channel
/// sums `S` over `N` pixels, so exact bin edges (gray 128 -> 6) are stable.
pub fn lightness_level(img: &StandardImage) -> u8 {
    let [r, g, b] = channel_sums(img).map(|s| s as u128);
    let n = img.pixels().len() as u128;
    let lhs = 100 * (299 * r * r + 587 * g * g + 114 * b * b);
    let passed = (1..=9u128)
        .take_while(|&k| lhs >= 65_536_000 * k * k * n * n)
        .count();
    passed as u8 + 1
}

pub fn complexity(img: &StandardImage) -> u32 {
    count_contours(img) as u32
}
