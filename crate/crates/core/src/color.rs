//! HSI conversion, basic color naming and fuzzy hue histograms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::imaging::StandardImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsiColor {
    /// Degrees in `[0, 360)`; 0 for achromatic colors.
    pub hue: f64,
    pub saturation: f64,
    pub intensity: f64,
}

pub fn rgb_to_hsi(r: u8, g: u8, b: u8) -> HsiColor {
    let (rf, gf, bf) = (r as f64, g as f64, b as f64);
    let sum = rf + gf + bf;
    let intensity = sum / (3.0 * 255.0);
    if sum == 0.0 {
        return HsiColor {
            hue: 0.0,
            saturation: 0.0,
            intensity,
        };
    }
    let min = rf.min(gf).min(bf);
    let saturation = 1.0 - 3.0 * min / sum;
    let num = 0.5 * ((rf - gf) + (rf - bf));
    let den = ((rf - gf).powi(2) + (rf - bf) * (gf - bf)).sqrt();
    let hue = if saturation <= 0.0 || den == 0.0 {
        0.0
    } else {
        let theta = (num / den).clamp(-1.0, 1.0).acos().to_degrees();
        let h = if bf > gf { 360.0 - theta } else { theta };
        if h >= 360.0 {
            h - 360.0
        } else {
            h
        }
    };
    HsiColor {
        hue,
        saturation: saturation.max(0.0),
        intensity,
    }
}

/// Closed vocabulary of basic color names, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasicColor {
    Red,
    Orange,
    Yellow,
    Green,
    Blue,
    Purple,
    Pink,
    Brown,
    Beige,
    Gray,
    Black,
    White,
}

impl BasicColor {
    pub const ALL: [BasicColor; 12] = [
        BasicColor::Red,
        BasicColor::Orange,
        BasicColor::Yellow,
        BasicColor::Green,
        BasicColor::Blue,
        BasicColor::Purple,
        BasicColor::Pink,
        BasicColor::Brown,
        BasicColor::Beige,
        BasicColor::Gray,
        BasicColor::Black,
        BasicColor::White,
    ];

    /// Reference centroid used for nearest-color classification; doubles as
    /// the display swatch.
    pub fn centroid(self) -> [u8; 3] {
        match self {
            BasicColor::Red => [200, 30, 30],
            BasicColor::Orange => [240, 130, 30],
            BasicColor::Yellow => [240, 220, 40],
            BasicColor::Green => [40, 160, 60],
            BasicColor::Blue => [40, 80, 200],
            BasicColor::Purple => [130, 60, 170],
            BasicColor::Pink => [240, 150, 190],
            BasicColor::Brown => [120, 75, 40],
            BasicColor::Beige => [225, 205, 170],
            BasicColor::Gray => [128, 128, 128],
            BasicColor::Black => [20, 20, 20],
            BasicColor::White => [245, 245, 245],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasicColor::Red => "red",
            BasicColor::Orange => "orange",
            BasicColor::Yellow => "yellow",
            BasicColor::Green => "green",
            BasicColor::Blue => "blue",
            BasicColor::Purple => "purple",
            BasicColor::Pink => "pink",
            BasicColor::Brown => "brown",
            BasicColor::Beige => "beige",
            BasicColor::Gray => "gray",
            BasicColor::Black => "black",
            BasicColor::White => "white",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BasicColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasicColor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        BasicColor::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown basic color `{s}`")))
    }
}

/// Nearest reference centroid in RGB (squared Euclidean distance).
pub fn classify_basic_color(r: u8, g: u8, b: u8) -> BasicColor {
    let dist = |c: BasicColor| {
        let [cr, cg, cb] = c.centroid();
        let d = |a: u8, b: u8| (a as i32 - b as i32).pow(2);
        d(r, cr) + d(g, cg) + d(b, cb)
    };
    // min_by_key keeps the first minimum, i.e. vocabulary order on ties
    BasicColor::ALL
        .into_iter()
        .min_by_key(|&c| dist(c))
        .expect("vocabulary is not empty")
}

/// Pixel counts of the most frequent basic colors, descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominantColorSummary {
    entries: Vec<(BasicColor, u32)>,
}

impl DominantColorSummary {
    /// Validates positivity and distinctness, then orders by count
    /// (ties by vocabulary order).
    pub fn new(mut entries: Vec<(BasicColor, u32)>) -> crate::Result<Self> {
        if entries.iter().any(|&(_, n)| n == 0) {
            return Err(Error::invalid("dominant color counts must be positive"));
        }
        let mut colors: Vec<_> = entries.iter().map(|&(c, _)| c).collect();
        colors.sort();
        colors.dedup();
        if colors.len() != entries.len() {
            return Err(Error::invalid("dominant colors must be distinct"));
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(BasicColor, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, n)| n as u64).sum()
    }
}

pub const DEFAULT_DOMINANT_K: usize = 5;

/// Classifies every pixel and keeps the `k` most frequent basic colors.
pub fn dominant_colors(img: &StandardImage, k: usize) -> DominantColorSummary {
    let mut counts = [0u32; 12];
    for &[r, g, b] in img.pixels() {
        counts[classify_basic_color(r, g, b).index()] += 1;
    }
    let mut entries: Vec<(BasicColor, u32)> = BasicColor::ALL
        .into_iter()
        .zip(counts)
        .filter(|&(_, n)| n > 0)
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    entries.truncate(k);
    DominantColorSummary { entries }
}

pub const HUE_TERMS: usize = 8;
pub const HUE_SPACING: f64 = 360.0 / HUE_TERMS as f64;

pub const ACHROMATIC_MAX_SATURATION: f64 = 0.12;
pub const ACHROMATIC_MIN_INTENSITY: f64 = 0.08;
pub const ACHROMATIC_MAX_INTENSITY: f64 = 0.95;

/// Mass on 8 triangular hue terms (peaks every 45 degrees, wrapping at
/// 360) plus an achromatic mass. Masses sum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyHueHistogram {
    pub hue: [f64; HUE_TERMS],
    pub achromatic: f64,
}

impl FuzzyHueHistogram {
    pub fn total(&self) -> f64 {
        self.hue.iter().sum::<f64>() + self.achromatic
    }
}

pub fn is_achromatic(c: &HsiColor) -> bool {
    c.saturation < ACHROMATIC_MAX_SATURATION
        || c.intensity < ACHROMATIC_MIN_INTENSITY
        || c.intensity > ACHROMATIC_MAX_INTENSITY
}

/// Membership of `hue` in each hue term; at most two terms are nonzero and
/// they sum to 1.
pub fn hue_memberships(hue: f64) -> [f64; HUE_TERMS] {
    let mut out = [0.0; HUE_TERMS];
    let h = hue.rem_euclid(360.0);
    let lower = ((h / HUE_SPACING).floor() as usize) % HUE_TERMS;
    let frac = (h - lower as f64 * HUE_SPACING) / HUE_SPACING;
    out[lower] += 1.0 - frac;
    out[(lower + 1) % HUE_TERMS] += frac;
    out
}

pub fn fuzzy_hue_histogram(img: &StandardImage) -> FuzzyHueHistogram {
    let mut hist = FuzzyHueHistogram {
        hue: [0.0; HUE_TERMS],
        achromatic: 0.0,
    };
    for &[r, g, b] in img.pixels() {
        let hsi = rgb_to_hsi(r, g, b);
        if is_achromatic(&hsi) {
            hist.achromatic += 1.0;
        } else {
            for (m, w) in hist.hue.iter_mut().zip(hue_memberships(hsi.hue)) {
                *m += w;
            }
        }
    }
    let n = img.pixels().len() as f64;
    hist.achromatic /= n;
    for m in &mut hist.hue {
        *m /= n;
    }
    hist
}
