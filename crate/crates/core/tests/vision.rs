mod common;

use common::*;
use image::{ImageFormat, Rgb, RgbImage, RgbaImage};
use interior_aesthetics::features::complexity;
use interior_aesthetics::imaging::{count_contours, edge_map, StandardImage, PIXELS, SIDE};
use proptest::prelude::*;

#[test]
fn uniform_images_have_no_contours() {
    for rgb in [BLACK, WHITE, [90, 60, 30]] {
        assert_eq!(count_contours(&StandardImage::uniform(rgb)), 0);
    }
}

#[test]
fn square_grids_match_union_find_oracle() {
    for k in [1, 4, 9] {
        let img = square_grid(k);
        let edges = edge_map(&img);
        let oracle = union_find_components(edges.mask(), edges.width());
        assert_eq!(oracle, k, "oracle on {k} squares");
        assert_eq!(edges.count_components(), oracle);
        assert_eq!(complexity(&img), k as u32);
    }
}

#[test]
fn filled_square_is_one_contour() {
    let img = scene(BLACK, &[(80, 80, 40, 40, WHITE)]);
    assert_eq!(count_contours(&img), 1);
}

#[test]
fn adding_objects_increases_complexity() {
    let furniture: Vec<Rect> = vec![
        (10, 120, 70, 50, [120, 75, 40]),
        (100, 130, 40, 40, [40, 80, 200]),
        (150, 20, 30, 60, [30, 90, 50]),
        (20, 20, 50, 30, [20, 20, 20]),
        (90, 40, 30, 30, [200, 30, 30]),
    ];
    // objects are much darker than the wall so every one yields an edge ring
    let wall = [225, 205, 170];
    let mut previous = count_contours(&StandardImage::uniform(wall));
    for n in 1..=furniture.len() {
        let count = count_contours(&scene(wall, &furniture[..n]));
        assert!(count > previous, "{n} objects: {count} <= {previous}");
        previous = count;
    }
}

fn rect_strategy() -> impl Strategy<Value = Rect> {
    (0usize..180, 0usize..180, 4usize..60, 4usize..60, any::<[u8; 3]>())
        .prop_map(|(x, y, w, h, c)| (x, y, w.min(SIDE - x), h.min(SIDE - y), c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contour_count_is_mirror_invariant(bg in any::<[u8; 3]>(), rects in prop::collection::vec(rect_strategy(), 0..8)) {
        let img = scene(bg, &rects);
        prop_assert_eq!(count_contours(&img), count_contours(&img.mirrored()));
    }
}

fn write(img: image::DynamicImage, path: &std::path::Path, format: ImageFormat) {
    img.save_with_format(path, format).unwrap();
}

#[test]
fn load_standardizes_dimensions_and_channels() {
    let dir = tempfile::tempdir().unwrap();

    let big = dir.path().join("big.png");
    write(RgbImage::from_pixel(400, 400, Rgb([10, 200, 30])).into(), &big, ImageFormat::Png);
    let img = StandardImage::load(&big).unwrap();
    assert_eq!(img.pixels().len(), PIXELS);
    assert!(img.pixels().iter().all(|&p| p == [10, 200, 30]));

    let wide = dir.path().join("wide.jpg");
    write(RgbImage::from_pixel(300, 150, Rgb([128, 128, 128])).into(), &wide, ImageFormat::Jpeg);
    let img = StandardImage::load(&wide).unwrap();
    assert_eq!(img.pixels().len(), PIXELS);
    assert!(img.pixels().iter().all(|p| p.iter().all(|&c| c.abs_diff(128) <= 2)));

    let rgba = dir.path().join("alpha.png");
    write(RgbaImage::from_pixel(200, 200, image::Rgba([1, 2, 3, 0])).into(), &rgba, ImageFormat::Png);
    assert_eq!(StandardImage::load(&rgba).unwrap(), StandardImage::uniform([1, 2, 3]));

    let gray = dir.path().join("gray.png");
    write(image::GrayImage::from_pixel(50, 50, image::Luma([77])).into(), &gray, ImageFormat::Png);
    assert_eq!(StandardImage::load(&gray).unwrap(), StandardImage::uniform([77, 77, 77]));
}

#[test]
fn exact_size_input_passes_through_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.png");
    let original = scene([30, 40, 50], &[(10, 10, 90, 30, [200, 100, 0]), (120, 150, 33, 21, WHITE)]);
    std::fs::write(&path, original.to_png()).unwrap();
    let a = StandardImage::load(&path).unwrap();
    let b = StandardImage::load(&path).unwrap();
    assert_eq!(a, original);
    assert_eq!(a, b);
}

#[test]
fn unreadable_and_undecodable_files() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.png");
    std::fs::write(&junk, b"\x89PNG but not really").unwrap();
    assert!(matches!(
        StandardImage::load(&junk),
        Err(interior_aesthetics::Error::ImageFormat { .. })
    ));
    assert!(matches!(
        StandardImage::load(dir.path().join("absent.jpg")),
        Err(interior_aesthetics::Error::Io { .. })
    ));
}
