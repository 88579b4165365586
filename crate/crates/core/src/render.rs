//! Equirectangular raster export of a dataset column to binary PPM (P6).
//!
//! Raster cell `(r, c)` maps to latitude `pi/2 - pi*(r+0.5)/H` and
//! longitude `2*pi*(c+0.5)/W`; the cell is painted with the dataset value
//! of the pixel containing that point through a min-max normalized color
//! ramp, or with the background color when the dataset has no row there.
//! Output bytes are a pure function of the inputs.

use crate::geom::SphCoord;
use crate::{Error, Result, SphericalDataset};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorRamp {
    Grayscale,
    /// Diverging blue -> white -> red.
    BlueRed,
}

impl ColorRamp {
    fn paint(self, t: f64) -> [u8; 3] {
        let t = t.clamp(0.0, 1.0);
        let level = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
        match self {
            ColorRamp::Grayscale => {
                let g = level(t);
                [g, g, g]
            }
            ColorRamp::BlueRed => [
                level(2.0 * t),
                level(1.0 - (2.0 * t - 1.0).abs()),
                level(2.0 - 2.0 * t),
            ],
        }
    }
}

/// Raster parameters; a 2:1 width:height ratio keeps the equirectangular
/// aspect undistorted.
#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub column: String,
    pub ramp: ColorRamp,
    /// Painted wherever no dataset row covers the raster cell.
    pub background: [u8; 3],
}

/// Renders the dataset to a complete PPM (P6, maxval 255) byte buffer.
pub fn render_equirect(ds: &SphericalDataset, spec: &RenderSpec) -> Result<Vec<u8>> {
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::EmptyInput("raster must have nonzero size".into()));
    }
    let values = ds.column(&spec.column)?;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let scale = hi - lo;
    let (w, h) = (spec.width as usize, spec.height as usize);
    let mut out = Vec::with_capacity(32 + 3 * w * h);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", spec.width, spec.height).as_bytes());
    let res = ds.res();
    for r in 0..h {
        let theta = PI * (r as f64 + 0.5) / h as f64;
        for c in 0..w {
            let phi = 2.0 * PI * (c as f64 + 0.5) / w as f64;
            let coord = SphCoord::new(theta, phi).expect("raster cell is a valid coordinate");
            let pix = res.ang2pix(coord, ds.scheme()).index;
            let color = match ds.pix().binary_search(&pix) {
                Ok(row) => {
                    let t = if scale > 0.0 {
                        (values[row] - lo) / scale
                    } else {
                        0.5
                    };
                    spec.ramp.paint(t)
                }
                Err(_) => spec.background,
            };
            out.extend_from_slice(&color);
        }
    }
    Ok(out)
}
