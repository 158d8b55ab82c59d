//! Grayscale and RGB rasters over a grid, written as binary PGM/PPM.
//!
//! Image row 0 is the top edge, i.e. the grid row with the largest
//! imaginary part. Pixel `(x, y)` is the grid node `(rows - 1 - y, x)`.

use polysemi_core::{Complex64, GridField, GridSpec};

/// Color for NaN and infinite field values.
pub const SENTINEL: [u8; 3] = [255, 0, 255];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    /// 1 (gray) or 3 (RGB).
    pub channels: usize,
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn blank(width: usize, height: usize, channels: usize) -> Self {
        Self { width, height, channels, pixels: vec![0; width * height * channels] }
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let k = (y * self.width + x) * self.channels;
        &self.pixels[k..k + self.channels]
    }

    /// `P5` for gray, `P6` for RGB, maxval 255.
    pub fn encode(&self) -> Vec<u8> {
        let magic = if self.channels == 1 { "P5" } else { "P6" };
        let mut out = format!("{magic}\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Nearest grid node of `z`, as an image pixel.
fn pixel_of(grid: &GridSpec, z: Complex64) -> Option<(usize, usize)> {
    let u = (z - grid.origin) / grid.spacing;
    let (col, row) = (u.re.round(), u.im.round());
    if !(col >= 0.0 && row >= 0.0 && col < grid.cols as f64 && row < grid.rows as f64) {
        return None;
    }
    Some((col as usize, grid.rows - 1 - row as usize))
}

/// Bin points into pixels; intensity `1 + 254 log(1+c) / log(1+c_max)` on
/// lit pixels, 0 elsewhere.
pub fn render_points(points: &[Complex64], grid: &GridSpec) -> RasterImage {
    let mut counts = vec![0u64; grid.len()];
    for &z in points {
        if let Some((x, y)) = pixel_of(grid, z) {
            counts[y * grid.cols + x] += 1;
        }
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut img = RasterImage::blank(grid.cols, grid.rows, 1);
    if max == 0 {
        log::warn!("no points fall on the raster; writing a blank image");
        return img;
    }
    let denom = (1.0 + max as f64).ln();
    for (p, &c) in img.pixels.iter_mut().zip(&counts) {
        if c > 0 {
            *p = (1.0 + 254.0 * (1.0 + c as f64).ln() / denom).round() as u8;
        }
    }
    img
}

/// The ramp: black, red, yellow, white as `t` goes from 0 to 1. Every
/// channel is nondecreasing in `t`.
pub fn ramp(t: f64) -> [u8; 3] {
    let channel = |s: f64| (255.0 * s.clamp(0.0, 1.0)).round() as u8;
    let t = 3.0 * t.clamp(0.0, 1.0);
    [channel(t), channel(t - 1.0), channel(t - 2.0)]
}

/// Map finite values linearly onto [`ramp`] between their min and max;
/// non-finite values get [`SENTINEL`].
pub fn render_field(field: &GridField) -> RasterImage {
    let spec = field.spec();
    let mut img = RasterImage::blank(spec.cols, spec.rows, 3);
    let Some((lo, hi)) = field.finite_range() else {
        log::warn!("field has no finite values; writing the sentinel color everywhere");
        for px in img.pixels.chunks_mut(3) {
            px.copy_from_slice(&SENTINEL);
        }
        return img;
    };
    for row in 0..spec.rows {
        for col in 0..spec.cols {
            let v = field.get(row, col);
            let rgb = if !v.is_finite() {
                SENTINEL
            } else if hi > lo {
                ramp((v - lo) / (hi - lo))
            } else {
                ramp(0.5)
            };
            let k = ((spec.rows - 1 - row) * spec.cols + col) * 3;
            img.pixels[k..k + 3].copy_from_slice(&rgb);
        }
    }
    img
}
