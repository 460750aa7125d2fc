//! Image standardization and the edge/contour pipeline behind the
//! complexity feature.

use std::collections::VecDeque;
use std::io::Cursor;
use std::path::Path;

use image::imageops::FilterType;
use image::{ImageFormat, RgbImage};

use crate::error::{Error, Result};

pub const SIDE: usize = 200;
pub const PIXELS: usize = SIDE * SIDE;

/// Gaussian blur applied before edge detection.
pub const BLUR_SIGMA: f64 = 1.4;
pub const BLUR_RADIUS: usize = 2;
pub const CANNY_LOW: f64 = 50.0;
pub const CANNY_HIGH: f64 = 150.0;

/// A 200x200 8-bit RGB image, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct StandardImage {
    pixels: Vec<[u8; 3]>,
}

impl std::fmt::Debug for StandardImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StandardImage").finish_non_exhaustive()
    }
}

impl StandardImage {
    pub fn from_pixels(pixels: Vec<[u8; 3]>) -> Result<Self> {
        if pixels.len() != PIXELS {
            return Err(Error::invalid(format!(
                "expected {PIXELS} pixels, got {}",
                pixels.len()
            )));
        }
        Ok(Self { pixels })
    }

    pub fn uniform(rgb: [u8; 3]) -> Self {
        Self {
            pixels: vec![rgb; PIXELS],
        }
    }

    /// Builds an image from a function of `(x, y)`.
    pub fn from_fn(f: impl Fn(usize, usize) -> [u8; 3]) -> Self {
        let pixels = (0..PIXELS).map(|i| f(i % SIDE, i / SIDE)).collect();
        Self { pixels }
    }

    /// Stretches any RGB raster to 200x200 with bilinear resampling.
    /// Images that already have the target size are copied unchanged.
    pub fn from_rgb(img: &RgbImage) -> Self {
        let side = SIDE as u32;
        let resized;
        let src = if img.dimensions() == (side, side) {
            img
        } else {
            resized = image::imageops::resize(img, side, side, FilterType::Triangle);
            &resized
        };
        Self {
            pixels: src.pixels().map(|p| p.0).collect(),
        }
    }

    pub fn decode(bytes: &[u8], origin: &Path) -> Result<Self> {
        let img = image::load_from_memory(bytes).map_err(|e| Error::ImageFormat {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(Self::from_rgb(&img.to_rgb8()))
    }

    /// Reads a PNG or JPEG file and standardizes it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes, path)
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * SIDE + x]
    }

    pub fn mirrored(&self) -> Self {
        Self::from_fn(|x, y| self.get(SIDE - 1 - x, y))
    }

    pub fn to_rgb_image(&self) -> RgbImage {
        let raw = self.pixels.iter().flatten().copied().collect();
        RgbImage::from_raw(SIDE as u32, SIDE as u32, raw).expect("buffer size matches")
    }

    pub fn to_png(&self) -> Vec<u8> {
        let mut out = Cursor::new(Vec::new());
        self.to_rgb_image()
            .write_to(&mut out, ImageFormat::Png)
            .expect("PNG encoding into memory");
        out.into_inner()
    }
}

/// Single-channel float raster used by the edge pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "plane buffer size");
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    fn clamped(&self, x: isize, y: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.get(x, y)
    }
}

/// ITU-R BT.601 luma.
pub fn grayscale(img: &StandardImage) -> Plane {
    let data = img
        .pixels()
        .iter()
        .map(|&[r, g, b]| 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
        .collect();
    Plane::new(SIDE, SIDE, data)
}

fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total = raw[0] + 2.0 * raw[1..].iter().sum::<f64>();
    raw.into_iter().map(|w| w / total).collect()
}

/// Separable Gaussian blur with replicated borders. `kernel[i]` weighs the
/// two taps at distance `i`; mirrored tap pairs are summed before weighting
/// so the result is exactly symmetric under reflection of the input.
fn blur_with(plane: &Plane, kernel: &[f64]) -> Plane {
    let pass = |src: &Plane, horizontal: bool| {
        let mut data = Vec::with_capacity(src.data.len());
        for y in 0..src.height as isize {
            for x in 0..src.width as isize {
                let mut acc = kernel[0] * src.get(x as usize, y as usize);
                for (i, w) in kernel.iter().enumerate().skip(1) {
                    let i = i as isize;
                    let pair = if horizontal {
                        src.clamped(x - i, y) + src.clamped(x + i, y)
                    } else {
                        src.clamped(x, y - i) + src.clamped(x, y + i)
                    };
                    acc += w * pair;
                }
                data.push(acc);
            }
        }
        Plane::new(src.width, src.height, data)
    };
    pass(&pass(plane, true), false)
}

pub fn gaussian_blur(plane: &Plane) -> Plane {
    blur_with(plane, &gaussian_kernel(BLUR_SIGMA, BLUR_RADIUS))
}

/// Binary edge mask, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    edges: Vec<bool>,
}

impl EdgeMap {
    pub fn from_mask(width: usize, height: usize, edges: Vec<bool>) -> Self {
        assert_eq!(edges.len(), width * height, "mask size");
        Self {
            width,
            height,
            edges,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        self.edges[y * self.width + x]
    }

    pub fn mask(&self) -> &[bool] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    /// Number of 8-connected components of edge pixels.
    pub fn count_components(&self) -> usize {
        let (w, h) = (self.width, self.height);
        let mut seen = vec![false; self.edges.len()];
        let mut queue = VecDeque::new();
        let mut components = 0;
        for start in 0..self.edges.len() {
            if !self.edges[start] || seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                let (x, y) = ((i % w) as isize, (i / w) as isize);
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let j = ny as usize * w + nx as usize;
                        if self.edges[j] && !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        components
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Horizontal,
    Diagonal,
    Vertical,
    AntiDiagonal,
}

impl Direction {
    /// Quantizes the gradient orientation into four bins using only
    /// magnitudes and the sign of `gx * gy`; a horizontal reflection swaps
    /// the two diagonal bins exactly.
    fn of(gx: f64, gy: f64) -> Self {
        const TAN_22_5: f64 = 0.414_213_562_373_095_1;
        const TAN_67_5: f64 = 2.414_213_562_373_095;
        let (ax, ay) = (gx.abs(), gy.abs());
        if ay <= TAN_22_5 * ax {
            Direction::Horizontal
        } else if ay >= TAN_67_5 * ax {
            Direction::Vertical
        } else if (gx > 0.0) == (gy > 0.0) {
            Direction::Diagonal
        } else {
            Direction::AntiDiagonal
        }
    }

    /// Neighbour offsets along the gradient.
    fn offsets(self) -> [(isize, isize); 2] {
        match self {
            Direction::Horizontal => [(-1, 0), (1, 0)],
            Direction::Vertical => [(0, -1), (0, 1)],
            Direction::Diagonal => [(-1, -1), (1, 1)],
            Direction::AntiDiagonal => [(1, -1), (-1, 1)],
        }
    }
}

/// Canny detector on an already smoothed plane: Sobel gradients with L2
/// magnitude, non-maximum suppression, then double-threshold hysteresis
/// with 8-connectivity.
pub fn canny(smoothed: &Plane, low: f64, high: f64) -> EdgeMap {
    assert!(low <= high, "canny thresholds out of order");
    let (w, h) = (smoothed.width, smoothed.height);
    let p = |x: isize, y: isize| smoothed.clamped(x, y);
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let i = y as usize * w + x as usize;
            let right = (p(x + 1, y - 1) + p(x + 1, y + 1)) + 2.0 * p(x + 1, y);
            let left = (p(x - 1, y - 1) + p(x - 1, y + 1)) + 2.0 * p(x - 1, y);
            let down = (p(x - 1, y + 1) + p(x + 1, y + 1)) + 2.0 * p(x, y + 1);
            let up = (p(x - 1, y - 1) + p(x + 1, y - 1)) + 2.0 * p(x, y - 1);
            gx[i] = right - left;
            gy[i] = down - up;
        }
    }
    let magnitude: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a.hypot(*b)).collect();

    let mut thin = vec![0.0; w * h];
    for y in 1..h.saturating_sub(1) {
        for x in 1..w.saturating_sub(1) {
            let i = y * w + x;
            let m = magnitude[i];
            if m < low {
                continue;
            }
            let is_max = Direction::of(gx[i], gy[i]).offsets().iter().all(|&(dx, dy)| {
                let j = (y as isize + dy) as usize * w + (x as isize + dx) as usize;
                m >= magnitude[j]
            });
            if is_max {
                thin[i] = m;
            }
        }
    }

    let mut edges = vec![false; w * h];
    let mut stack: Vec<usize> = Vec::new();
    for (i, &m) in thin.iter().enumerate() {
        if m >= high {
            edges[i] = true;
            stack.push(i);
        }
    }
    while let Some(i) = stack.pop() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if !edges[j] && thin[j] >= low {
                    edges[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    EdgeMap::from_mask(w, h, edges)
}

/// Grayscale, 5x5 Gaussian blur (sigma 1.4), Canny 50/150.
pub fn edge_map(img: &StandardImage) -> EdgeMap {
    canny(&gaussian_blur(&grayscale(img)), CANNY_LOW, CANNY_HIGH)
}

/// Number of 8-connected edge components, a proxy for the number of
/// distinct elements in the scene.
pub fn count_contours(img: &StandardImage) -> usize {
    edge_map(img).count_components()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BLACK: [u8; 3] = [0, 0, 0];
    const WHITE: [u8; 3] = [255, 255, 255];

    fn squares(origins: &[(usize, usize)], size: usize) -> StandardImage {
        StandardImage::from_fn(|x, y| {
            let inside = origins
                .iter()
                .any(|&(ox, oy)| (ox..ox + size).contains(&x) && (oy..oy + size).contains(&y));
            if inside {
                WHITE
            } else {
                BLACK
            }
        })
    }

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        let k = gaussian_kernel(BLUR_SIGMA, BLUR_RADIUS);
        let total = k[0] + 2.0 * (k[1] + k[2]);
        assert!((total - 1.0).abs() < 1e-12);
        assert!(k[0] > k[1] && k[1] > k[2]);
    }

    #[test]
    fn blur_preserves_constant_plane() {
        let plane = Plane::new(8, 8, vec![77.0; 64]);
        let blurred = gaussian_blur(&plane);
        assert!(blurred.data.iter().all(|v| (v - 77.0).abs() < 1e-9));
    }

    #[test]
    fn uniform_image_has_no_contours() {
        assert_eq!(count_contours(&StandardImage::uniform(BLACK)), 0);
        assert_eq!(count_contours(&StandardImage::uniform([120, 80, 200])), 0);
    }

    #[test]
    fn single_square_is_one_contour() {
        let img = squares(&[(80, 80)], 40);
        let edges = edge_map(&img);
        assert!(edges.edge_count() > 4 * 30);
        assert_eq!(edges.count_components(), 1);
    }

    #[test]
    fn nine_squares() {
        let origins: Vec<_> = (0..3)
            .flat_map(|r| (0..3).map(move |c| (20 + 60 * c, 20 + 60 * r)))
            .collect();
        assert_eq!(count_contours(&squares(&origins, 20)), 9);
    }

    #[test]
    fn components_use_eight_connectivity() {
        // two diagonal touching pixels and one isolated pixel
        let mut mask = vec![false; 25];
        mask[0] = true;
        mask[6] = true;
        mask[24] = true;
        assert_eq!(EdgeMap::from_mask(5, 5, mask).count_components(), 2);
    }

    #[test]
    fn standardize_stretches_and_passes_through() {
        let wide = RgbImage::from_pixel(300, 150, image::Rgb([10, 20, 30]));
        let img = StandardImage::from_rgb(&wide);
        assert_eq!(img.pixels().len(), PIXELS);
        assert!(img.pixels().iter().all(|&p| p == [10, 20, 30]));

        let exact = squares(&[(3, 7)], 50);
        assert_eq!(StandardImage::from_rgb(&exact.to_rgb_image()), exact);
    }

    #[test]
    fn png_round_trip() {
        let img = squares(&[(10, 10)], 30);
        let back = StandardImage::decode(&img.to_png(), Path::new("mem.png")).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn undecodable_bytes_are_a_format_error() {
        let err = StandardImage::decode(b"not an image", Path::new("x.png")).unwrap_err();
        assert!(matches!(err, Error::ImageFormat { .. }));
        let err = StandardImage::load("/definitely/missing.png").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
