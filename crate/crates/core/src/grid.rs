//! Pixel grids over rectangular windows.
//!
//! Rows run top to bottom: pixel `(0, 0)` is the top-left cell, whose corner
//! is `(xmin, ymax)`. Pixel centers are computed symmetrically about the
//! window center, so for a window centered at the origin the pixel
//! `(nx−1−i, ny−1−j)` has exactly the negated center of `(i, j)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::henon::{Coords, FloatPoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Default for Window {
    fn default() -> Self {
        Window::new(-1.3, 1.3, -1.3, 1.3)
    }
}

impl Window {
    pub const fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Window { xmin, xmax, ymin, ymax }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite())
            && self.xmin < self.xmax
            && self.ymin < self.ymax;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParam(format!("bad window {self:?}")))
        }
    }

    /// Parses `xmin,xmax,ymin,ymax`.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidParam(format!("window {text:?}: {e}")))?;
        if v.len() != 4 {
            return Err(Error::InvalidParam(format!("window {text:?} needs 4 numbers")));
        }
        let w = Window::new(v[0], v[1], v[2], v[3]);
        w.validate()?;
        Ok(w)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn contains(&self, p: &FloatPoint) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
}

impl Resolution {
    pub const fn square(n: usize) -> Self {
        Resolution { nx: n, ny: n }
    }

    /// Parses `N` or `NxM`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidParam(format!("resolution {text:?}"));
        let (a, b) = match text.split_once(['x', 'X']) {
            Some((a, b)) => (a, b),
            None => (text, text),
        };
        let nx = a.trim().parse::<usize>().map_err(|_| bad())?;
        let ny = b.trim().parse::<usize>().map_err(|_| bad())?;
        Ok(Resolution { nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A window sampled at a resolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub window: Window,
    pub res: Resolution,
}

impl Grid {
    pub fn new(window: Window, res: Resolution) -> Result<Self> {
        window.validate()?;
        if res.nx < 2 || res.ny < 2 {
            return Err(Error::InvalidParam(format!("resolution {}x{} below 2", res.nx, res.ny)));
        }
        Ok(Grid { window, res })
    }

    pub fn len(&self) -> usize {
        self.res.len()
    }

    pub fn is_empty(&self) -> bool {
        self.res.is_empty()
    }

    pub fn center(&self, i: usize, j: usize) -> FloatPoint {
        let w = &self.window;
        let cx = (w.xmin + w.xmax) / 2.0;
        let cy = (w.ymin + w.ymax) / 2.0;
        let hx = w.width() / (2.0 * self.res.nx as f64);
        let hy = w.height() / (2.0 * self.res.ny as f64);
        let x = cx + ((2 * i + 1) as f64 - self.res.nx as f64) * hx;
        let y = cy - ((2 * j + 1) as f64 - self.res.ny as f64) * hy;
        Coords::new(x, y)
    }

    /// Corner `(i, j)` for `i ≤ nx`, `j ≤ ny`; corner `(0, 0)` is `(xmin, ymax)`.
    pub fn corner(&self, i: usize, j: usize) -> FloatPoint {
        let w = &self.window;
        let cx = (w.xmin + w.xmax) / 2.0;
        let cy = (w.ymin + w.ymax) / 2.0;
        let hx = w.width() / (2.0 * self.res.nx as f64);
        let hy = w.height() / (2.0 * self.res.ny as f64);
        let x = cx + ((2 * i) as f64 - self.res.nx as f64) * hx;
        let y = cy - ((2 * j) as f64 - self.res.ny as f64) * hy;
        Coords::new(x, y)
    }

    /// Pixel side lengths.
    pub fn pixel_size(&self) -> (f64, f64) {
        (
            self.window.width() / self.res.nx as f64,
            self.window.height() / self.res.ny as f64,
        )
    }

    pub fn center_of_index(&self, k: usize) -> FloatPoint {
        self.center(k % self.res.nx, k / self.res.nx)
    }

    /// Continuous pixel coordinates: column `u`, row `v`.
    pub fn to_pixel(&self, p: &FloatPoint) -> (f64, f64) {
        let w = &self.window;
        let u = (p.x - w.xmin) / w.width() * self.res.nx as f64;
        let v = (w.ymax - p.y) / w.height() * self.res.ny as f64;
        (u, v)
    }

    /// The pixel containing `p`, if inside the window.
    pub fn pixel_of(&self, p: &FloatPoint) -> Option<(usize, usize)> {
        let (u, v) = self.to_pixel(p);
        if u < 0.0 || v < 0.0 {
            return None;
        }
        let (i, j) = (u.floor() as usize, v.floor() as usize);
        (i < self.res.nx && j < self.res.ny).then_some((i, j))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.res.nx + i
    }
}
