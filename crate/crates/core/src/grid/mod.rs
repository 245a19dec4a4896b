//! Disparity-grid data types, coordinate conventions, and file IO shared by
//! every pipeline stage.
//!
//! Coordinates come in three flavors:
//! * raster `(col, row)` indices, origin at the top-left pixel;
//! * centered `(u, v)`, origin at the map center so the coordinate set is
//!   symmetric about zero (even-sized maps get a half-pixel origin);
//! * rotated `(x, y)`, the centered frame turned by the roll angle.

mod pfm;
mod pngio;

pub use pfm::{load_pfm, save_pfm};
pub use pngio::{load_mask_png, load_png16, save_label_png, save_mask_png, save_png16};

use std::path::Path;

use crate::error::{Error, Result};

/// Dense grid of subpixel disparities with a validity mask.
///
/// Invalid pixels (occlusions, failed matches) are carried in an explicit
/// mask; `data` keeps whatever value the source had there, and no stage may
/// read it. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
    valid: Vec<bool>,
}

impl DisparityMap {
    /// Minimum side length: a quadratic column fit needs three rows.
    pub const MIN_DIM: usize = 3;

    pub fn new(width: usize, height: usize, data: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        if width < Self::MIN_DIM || height < Self::MIN_DIM {
            return Err(Error::DimensionMismatch(format!(
                "map must be at least {0}x{0}, got {1}x{2}",
                Self::MIN_DIM,
                width,
                height
            )));
        }
        if data.len() != width * height || valid.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "expected {} pixels, got {} data / {} mask entries",
                width * height,
                data.len(),
                valid.len()
            )));
        }
        for (i, (&d, &ok)) in data.iter().zip(&valid).enumerate() {
            if ok && !(d.is_finite() && d > 0.0) {
                return Err(Error::Format(format!(
                    "valid disparity at index {i} is {d}, must be finite and positive"
                )));
            }
        }
        Ok(Self {
            width,
            height,
            data,
            valid,
        })
    }

    /// Builds a fully-valid map from row-major values.
    pub fn from_data(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        let valid = vec![true; data.len()];
        Self::new(width, height, data, valid)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        debug_assert!(col < self.width && row < self.height);
        row * self.width + col
    }

    #[inline]
    pub fn is_valid(&self, col: usize, row: usize) -> bool {
        self.valid[self.index(col, row)]
    }

    /// Disparity at `(col, row)`, or `None` when the pixel is invalid.
    #[inline]
    pub fn get(&self, col: usize, row: usize) -> Option<f64> {
        let i = self.index(col, row);
        self.valid[i].then(|| self.data[i])
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Iterates valid pixels as `(col, row, disparity)` in raster order.
    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.data.iter().enumerate().filter_map(move |(i, &d)| {
            self.valid[i].then(|| (i % self.width, i / self.width, d))
        })
    }

    /// Centered coordinates of a raster pixel.
    #[inline]
    pub fn centered(&self, col: usize, row: usize) -> CenteredCoords {
        CenteredCoords {
            u: col as f64 - (self.width as f64 - 1.0) / 2.0,
            v: row as f64 - (self.height as f64 - 1.0) / 2.0,
        }
    }
}

/// Pixel coordinates with the origin at the map center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenteredCoords {
    pub u: f64,
    pub v: f64,
}

/// Centered coordinates rotated by the roll angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedCoords {
    pub x: f64,
    pub y: f64,
}

/// Maps a raster index to centered coordinates: `u = col - (width-1)/2`,
/// `v = row - (height-1)/2`.
pub fn to_centered(col: usize, row: usize, width: usize, height: usize) -> Result<CenteredCoords> {
    if col >= width || row >= height {
        return Err(Error::OutOfRange(format!(
            "pixel ({col},{row}) outside {width}x{height} map"
        )));
    }
    Ok(CenteredCoords {
        u: col as f64 - (width as f64 - 1.0) / 2.0,
        v: row as f64 - (height as f64 - 1.0) / 2.0,
    })
}

/// Rotates centered coordinates by `theta`:
/// `x = u cos(theta) + v sin(theta)`, `y = v cos(theta) - u sin(theta)`.
///
/// Total on all finite inputs; the pipeline only calls it with
/// `theta` in `(-pi/2, pi/2]`.
#[inline]
pub fn rotate_coords(c: CenteredCoords, theta: f64) -> RotatedCoords {
    let (sin, cos) = theta.sin_cos();
    RotatedCoords {
        x: c.u * cos + c.v * sin,
        y: c.v * cos - c.u * sin,
    }
}

/// Rotated vertical coordinate only; the hot loops never need `x`.
#[inline]
pub fn rotated_y(u: f64, v: f64, sin: f64, cos: f64) -> f64 {
    v * cos - u * sin
}

/// Input format accepted by [`load_disparity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisparityFormat {
    /// Little-endian grayscale `Pf` portable float map; NaN and
    /// non-positive values mark invalid pixels.
    Pfm,
    /// 16-bit grayscale PNG holding `disparity / scale` fixed-point values;
    /// the sentinel value marks invalid pixels.
    Png16 { scale: f64, invalid: u16 },
}

impl DisparityFormat {
    /// KITTI-style fixed point: disparity = value / 256, zero invalid.
    pub fn png16_default() -> Self {
        DisparityFormat::Png16 {
            scale: 1.0 / 256.0,
            invalid: 0,
        }
    }
}

/// Loads a disparity map, marking sentinel/NaN pixels invalid.
///
/// Fails with [`Error::AllInvalid`] when no pixel carries a disparity.
pub fn load_disparity(path: &Path, format: DisparityFormat) -> Result<DisparityMap> {
    let map = match format {
        DisparityFormat::Pfm => load_pfm(path)?,
        DisparityFormat::Png16 { scale, invalid } => load_png16(path, scale, invalid)?,
    };
    if map.valid_count() == 0 {
        return Err(Error::AllInvalid);
    }
    Ok(map)
}

/// Writes a disparity map in the given format.
///
/// PFM keeps full `f32` precision; PNG16 quantizes to the fixed-point grid.
pub fn save_disparity(map: &DisparityMap, path: &Path, format: DisparityFormat) -> Result<()> {
    match format {
        DisparityFormat::Pfm => save_pfm(map, path),
        DisparityFormat::Png16 { scale, invalid } => save_png16(map, path, scale, invalid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn centered_corner_of_5x5() {
        let c = to_centered(0, 0, 5, 5).unwrap();
        assert_eq!((c.u, c.v), (-2.0, -2.0));
        let c = to_centered(4, 0, 5, 5).unwrap();
        assert_eq!((c.u, c.v), (2.0, -2.0));
    }

    #[test]
    fn centered_center_of_odd_map_is_origin() {
        let c = to_centered(2, 2, 5, 5).unwrap();
        assert_eq!((c.u, c.v), (0.0, 0.0));
    }

    #[test]
    fn centered_even_map_has_half_pixel_origin() {
        let c = to_centered(1, 1, 4, 4).unwrap();
        assert_eq!((c.u, c.v), (-0.5, -0.5));
    }

    #[test]
    fn centered_out_of_range_rejected() {
        assert!(to_centered(5, 0, 5, 5).is_err());
        assert!(to_centered(0, 7, 5, 7).is_err());
    }

    #[test]
    fn rotate_identity() {
        let r = rotate_coords(CenteredCoords { u: 1.0, v: 0.0 }, 0.0);
        assert_eq!((r.x, r.y), (1.0, 0.0));
    }

    #[test]
    fn rotate_quarter_turn() {
        let r = rotate_coords(CenteredCoords { u: 0.0, v: 1.0 }, std::f64::consts::FRAC_PI_2);
        assert!((r.x - 1.0).abs() < 1e-15);
        assert!(r.y.abs() < 1e-15);
    }

    #[test]
    fn map_rejects_bad_dims_and_values() {
        assert!(DisparityMap::from_data(2, 3, vec![1.0; 6]).is_err());
        assert!(DisparityMap::new(3, 3, vec![1.0; 8], vec![true; 9]).is_err());
        let mut data = vec![1.0; 9];
        data[4] = -2.0;
        assert!(DisparityMap::new(3, 3, data.clone(), vec![true; 9]).is_err());
        // Negative value behind an invalid mask entry is allowed.
        let mut valid = vec![true; 9];
        valid[4] = false;
        assert!(DisparityMap::new(3, 3, data, valid).is_ok());
    }

    proptest! {
        #[test]
        fn rotation_preserves_norm(u in -500.0f64..500.0, v in -500.0f64..500.0,
                                   theta in -1.5707f64..=1.5707) {
            let r = rotate_coords(CenteredCoords { u, v }, theta);
            let before = u * u + v * v;
            let after = r.x * r.x + r.y * r.y;
            prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
        }

        #[test]
        fn rotation_round_trips(u in -500.0f64..500.0, v in -500.0f64..500.0,
                                theta in -1.5707f64..=1.5707) {
            let r = rotate_coords(CenteredCoords { u, v }, theta);
            let back = rotate_coords(CenteredCoords { u: r.x, v: r.y }, -theta);
            prop_assert!((back.u - u).abs() <= 1e-12 * u.abs().max(1.0));
            prop_assert!((back.v - v).abs() <= 1e-12 * v.abs().max(1.0));
        }

        #[test]
        fn centered_round_trips_exactly(w in 3usize..200, h in 3usize..200,
                                        col_f in 0.0f64..1.0, row_f in 0.0f64..1.0) {
            let col = ((w as f64 - 1.0) * col_f).round() as usize;
            let row = ((h as f64 - 1.0) * row_f).round() as usize;
            let c = to_centered(col, row, w, h).unwrap();
            let col_back = c.u + (w as f64 - 1.0) / 2.0;
            let row_back = c.v + (h as f64 - 1.0) / 2.0;
            prop_assert_eq!(col_back, col as f64);
            prop_assert_eq!(row_back, row as f64);
        }
    }
}
