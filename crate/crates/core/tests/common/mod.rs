#![allow(dead_code)]

use std::path::PathBuf;

use interior_aesthetics::imaging::{StandardImage, SIDE};

pub const BLACK: [u8; 3] = [0, 0, 0];
pub const WHITE: [u8; 3] = [255, 255, 255];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Axis-aligned filled rectangle `(x, y, w, h, color)`.
pub type Rect = (usize, usize, usize, usize, [u8; 3]);

pub fn scene(background: [u8; 3], rects: &[Rect]) -> StandardImage {
    StandardImage::from_fn(|x, y| {
        rects
            .iter()
            .rev()
            .find(|&&(rx, ry, w, h, _)| (rx..rx + w).contains(&x) && (ry..ry + h).contains(&y))
            .map_or(background, |r| r.4)
    })
}

/// `k` white squares of side 20 on black, laid out on a grid with 40 px gaps.
pub fn square_grid(k: usize) -> StandardImage {
    let per_row = (k as f64).sqrt().ceil() as usize;
    let rects: Vec<Rect> = (0..k)
        .map(|i| (20 + 60 * (i % per_row), 20 + 60 * (i / per_row), 20, 20, WHITE))
        .collect();
    scene(BLACK, &rects)
}

/// Connected-component count by union-find over 8-neighbourhoods.
pub fn union_find_components(mask: &[bool], width: usize) -> usize {
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let height = mask.len() / width;
    let mut parent: Vec<usize> = (0..mask.len()).collect();
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            if !mask[i] {
                continue;
            }
            // already-visited neighbours: W, NW, N, NE
            let mut neighbours = Vec::new();
            if x > 0 {
                neighbours.push(i - 1);
            }
            if y > 0 {
                neighbours.push(i - width);
                if x > 0 {
                    neighbours.push(i - width - 1);
                }
                if x + 1 < width {
                    neighbours.push(i - width + 1);
                }
            }
            for j in neighbours {
                if mask[j] {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    (0..mask.len())
        .filter(|&i| mask[i] && find(&mut parent, i) == i)
        .count()
}

pub fn side() -> usize {
    SIDE
}
