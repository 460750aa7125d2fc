mod common;

use common::*;
use interior_aesthetics::color::{
    classify_basic_color, dominant_colors, fuzzy_hue_histogram, hue_memberships, BasicColor, FuzzyHueHistogram,
};
use interior_aesthetics::features::{color_harmony, harmony_from_histogram, lightness_level};
use interior_aesthetics::imaging::{StandardImage, PIXELS};
use proptest::prelude::*;

/// Every template written out as explicit hue angles, independent of the
/// library's index arithmetic.
fn brute_force_harmony(hist: &FuzzyHueHistogram) -> f64 {
    let term = |deg: u32| ((deg % 360) / 45) as usize;
    let mut templates: Vec<Vec<u32>> = Vec::new();
    for t in (0..360).step_by(45) {
        templates.push(vec![t]);
        templates.push(vec![t, t + 45]);
        templates.push(vec![t, t + 180]);
        templates.push(vec![t, t + 135, t + 225]);
    }
    templates
        .iter()
        .map(|angles| {
            let chromatic: f64 = angles.iter().map(|&a| hist.hue[term(a)]).sum();
            100.0 * (hist.achromatic + chromatic)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn equal_eight_way_spread_scores_37_5() {
    let hist = FuzzyHueHistogram {
        hue: [0.125; 8],
        achromatic: 0.0,
    };
    assert!((brute_force_harmony(&hist) - 37.5).abs() < 1e-12);
    assert!((harmony_from_histogram(&hist) - 37.5).abs() < 1e-6);
}

#[test]
fn uniform_images_are_fully_harmonious() {
    for rgb in [[128, 128, 128], [255, 0, 0], [40, 160, 60], [225, 205, 170], BLACK, WHITE] {
        assert!((color_harmony(&StandardImage::uniform(rgb)) - 100.0).abs() < 1e-9, "{rgb:?}");
    }
}

#[test]
fn red_cyan_split_histogram() {
    let img = StandardImage::from_fn(|x, _| if x < 100 { [255, 0, 0] } else { [0, 255, 255] });
    let h = fuzzy_hue_histogram(&img);
    assert!((h.hue[0] - 0.5).abs() < 1e-9 && (h.hue[4] - 0.5).abs() < 1e-9);
    assert!((color_harmony(&img) - 100.0).abs() < 1e-9, "complementary pair");
}

#[test]
fn dominant_counts_cover_all_pixels() {
    let img = scene(
        [225, 205, 170],
        &[(0, 0, 50, 200, [128, 128, 128]), (60, 60, 30, 30, [200, 30, 30]), (100, 10, 20, 90, BLACK)],
    );
    let all = dominant_colors(&img, 12);
    assert_eq!(all.total(), PIXELS as u64);
    assert_eq!(all.entries()[0].0, BasicColor::Beige);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn histogram_mass_and_harmony_range(bg in any::<[u8; 3]>(), rects in prop::collection::vec(
        (0usize..180, 0usize..180, 5usize..20, 5usize..20, any::<[u8; 3]>()), 0..6)
    ) {
        let img = scene(bg, &rects);
        let h = fuzzy_hue_histogram(&img);
        prop_assert!((h.total() - 1.0).abs() < 1e-9);
        prop_assert!(h.hue.iter().all(|&m| m >= 0.0) && h.achromatic >= 0.0);
        let harmony = color_harmony(&img);
        prop_assert!((0.0..=100.0).contains(&harmony));
        prop_assert!((harmony - brute_force_harmony(&h)).abs() < 1e-9);
    }

    #[test]
    fn random_histograms_match_brute_force(raw in prop::array::uniform9(0.0f64..1.0)) {
        let total: f64 = raw.iter().sum::<f64>().max(1e-9);
        let mut hue = [0.0; 8];
        for (h, r) in hue.iter_mut().zip(&raw) {
            *h = r / total;
        }
        let hist = FuzzyHueHistogram { hue, achromatic: raw[8] / total };
        prop_assert!((harmony_from_histogram(&hist) - brute_force_harmony(&hist)).abs() < 1e-9);
    }

    #[test]
    fn hue_memberships_partition_unity(h in 0.0f64..360.0) {
        let m = hue_memberships(h);
        prop_assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(m.iter().filter(|&&v| v > 0.0).count() <= 2);
    }

    #[test]
    fn classification_is_total_and_nearest(rgb in any::<[u8; 3]>()) {
        let c = classify_basic_color(rgb[0], rgb[1], rgb[2]);
        let d = |k: BasicColor| k.centroid().iter().zip(rgb).map(|(&a, b)| (a as i32 - b as i32).pow(2)).sum::<i32>();
        prop_assert!(BasicColor::ALL.iter().all(|&k| d(c) <= d(k)));
        prop_assert_eq!(c, classify_basic_color(rgb[0], rgb[1], rgb[2]));
    }

    #[test]
    fn lightness_never_decreases_when_brightening(rgb in any::<[u8; 3]>(), delta in 0u8..=255) {
        let img = StandardImage::from_fn(|x, y| if (x + y) % 3 == 0 { rgb } else { [rgb[2], rgb[0], rgb[1]] });
        let brighter = StandardImage::from_pixels(
            img.pixels().iter().map(|p| p.map(|c| c.saturating_add(delta))).collect(),
        ).unwrap();
        prop_assert!(lightness_level(&brighter) >= lightness_level(&img));
    }
}

#[test]
fn hue_350_feeds_315_and_0_terms() {
    let m = hue_memberships(350.0);
    assert!(m[7] > 0.0 && m[0] > 0.0);
    assert_eq!(m[1..7].iter().sum::<f64>(), 0.0);
}
