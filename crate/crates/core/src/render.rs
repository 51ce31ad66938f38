//! Colour renders of the forward basins as binary PPM (P6).

use serde::Serialize;

use crate::classify::{classify_grid_with, ClassifyConfig, Direction, FateGrid, Verdict};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::henon::periodic_catalogue;
use crate::julia::{overlay_params, Curves};
use crate::manifolds::GrowParams;
use crate::raster::{draw_polyline, Bitmap};

pub type Rgb = [u8; 3];

/// Smallest accepted side length.
pub const MIN_RES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RenderStyle {
    pub basin_plus: Rgb,
    pub basin_minus: Rgb,
    pub escape: Rgb,
    /// Undecided pixels, basin boundaries and every other verdict.
    pub other: Rgb,
    pub periodic: Rgb,
    pub stable_curve: Rgb,
    pub unstable_curve: Rgb,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            basin_plus: [230, 160, 30],
            basin_minus: [30, 60, 160],
            escape: [255, 255, 255],
            other: [0, 0, 0],
            periodic: [255, 0, 0],
            stable_curve: [0, 150, 60],
            unstable_curve: [200, 0, 200],
        }
    }
}

impl RenderStyle {
    pub fn color(&self, v: Verdict) -> Rgb {
        match v {
            Verdict::BasinPlus => self.basin_plus,
            Verdict::BasinMinus => self.basin_minus,
            Verdict::Escape => self.escape,
            _ => self.other,
        }
    }
}

/// 8-bit RGB image, row 0 at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<u8>,
}

impl Image {
    pub fn new(nx: usize, ny: usize, fill: Rgb) -> Self {
        Image {
            nx,
            ny,
            data: fill.repeat(nx * ny),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rgb {
        let k = 3 * (j * self.nx + i);
        [self.data[k], self.data[k + 1], self.data[k + 2]]
    }

    pub fn put(&mut self, i: usize, j: usize, c: Rgb) {
        let k = 3 * (j * self.nx + i);
        self.data[k..k + 3].copy_from_slice(&c);
    }

    fn paint(&mut self, bm: &Bitmap, c: Rgb) {
        for (i, j) in bm.ones() {
            self.put(i, j, c);
        }
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.nx, self.ny).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }
}

/// Pixels whose center lies in one basin and that have a 4-neighbour in
/// the other. The rule is symmetric, so the set is σ-invariant whenever the
/// verdicts are.
pub fn basin_boundary(fates: &FateGrid) -> Bitmap {
    let (nx, ny) = (fates.grid.res.nx, fates.grid.res.ny);
    let other = |v: Verdict| match v {
        Verdict::BasinPlus => Some(Verdict::BasinMinus),
        Verdict::BasinMinus => Some(Verdict::BasinPlus),
        _ => None,
    };
    Bitmap::from_fn(nx, ny, |i, j| {
        let Some(o) = other(fates.verdict(i, j)) else {
            return false;
        };
        let mut nb = Vec::with_capacity(4);
        if i > 0 {
            nb.push((i - 1, j));
        }
        if i + 1 < nx {
            nb.push((i + 1, j));
        }
        if j > 0 {
            nb.push((i, j - 1));
        }
        if j + 1 < ny {
            nb.push((i, j + 1));
        }
        nb.into_iter().any(|(a, b)| fates.verdict(a, b) == o)
    })
}

/// Paints verdicts, black basin boundaries, optional manifold curves and
/// red 5-pixel crosses at the five periodic points.
pub fn render_fates(fates: &FateGrid, style: &RenderStyle, curves: Option<&Curves>) -> Image {
    let grid = &fates.grid;
    let mut img = Image::new(grid.res.nx, grid.res.ny, style.other);
    for (k, f) in fates.fates.iter().enumerate() {
        img.put(k % grid.res.nx, k / grid.res.nx, style.color(f.verdict));
    }
    img.paint(&basin_boundary(fates), style.other);
    if let Some(c) = curves {
        let mut s = Bitmap::for_grid(grid);
        for l in c.stable() {
            draw_polyline(&mut s, grid, l);
        }
        let mut u = Bitmap::for_grid(grid);
        for l in c.unstable() {
            draw_polyline(&mut u, grid, l);
        }
        img.paint(&u, style.unstable_curve);
        img.paint(&s, style.stable_curve);
    }
    for p in periodic_catalogue() {
        if let Some((i, j)) = grid.pixel_of(&p.float_location()) {
            let arms = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)];
            for (di, dj) in arms {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if (0..grid.res.nx as i64).contains(&a) && (0..grid.res.ny as i64).contains(&b) {
                    img.put(a as usize, b as usize, style.periodic);
                }
            }
        }
    }
    img
}

/// Classifies `grid` forward and renders it. With `overlay`, the stable and
/// unstable manifolds of both saddle orbits are drawn on top.
pub fn render(
    grid: &Grid,
    cfg: &ClassifyConfig,
    style: &RenderStyle,
    overlay: Option<&GrowParams>,
    threads: Option<usize>,
) -> Result<Image> {
    if grid.res.nx < MIN_RES || grid.res.ny < MIN_RES {
        return Err(Error::InvalidParam(format!("resolution must be at least {MIN_RES}")));
    }
    let fates = classify_grid_with(grid, cfg, Direction::Forward, threads)?;
    let curves = match overlay {
        Some(p) => Some(Curves::grow(&overlay_params(grid, p))?),
        None => None,
    };
    Ok(render_fates(&fates, style, curves.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Resolution, Window};

    fn small(n: usize) -> Grid {
        Grid::new(Window::default(), Resolution::square(n)).unwrap()
    }

    #[test]
    fn palette_is_total() {
        let s = RenderStyle::default();
        for v in Verdict::ALL {
            let _ = s.color(v);
        }
        assert_eq!(s.color(Verdict::BasinPlus), [230, 160, 30]);
        assert_eq!(s.color(Verdict::BasinMinus), [30, 60, 160]);
        assert_eq!(s.color(Verdict::Escape), [255, 255, 255]);
        assert_eq!(s.color(Verdict::Undecided), [0, 0, 0]);
    }

    #[test]
    fn ppm_header_and_size() {
        let img = Image::new(17, 16, [1, 2, 3]);
        let out = img.to_ppm();
        let header = b"P6\n17 16\n255\n";
        assert_eq!(&out[..header.len()], header);
        assert_eq!(out.len(), header.len() + 17 * 16 * 3);
    }

    #[test]
    fn tiny_resolution_is_rejected() {
        let g = small(15);
        assert!(render(&g, &ClassifyConfig::default(), &RenderStyle::default(), None, Some(1)).is_err());
    }

    #[test]
    fn render_swaps_basin_colours_under_half_turn() {
        let g = small(65);
        let s = RenderStyle::default();
        let img = render(&g, &ClassifyConfig::default(), &s, None, Some(2)).unwrap();
        let swap = |c: Rgb| {
            if c == s.basin_plus {
                s.basin_minus
            } else if c == s.basin_minus {
                s.basin_plus
            } else {
                c
            }
        };
        // Crosses are skipped: p± sit on pixel edges at this resolution.
        for j in 0..65 {
            for i in 0..65 {
                if img.get(i, j) == s.periodic || img.get(64 - i, 64 - j) == s.periodic {
                    continue;
                }
                assert_eq!(img.get(i, j), swap(img.get(64 - i, 64 - j)), "{i},{j}");
            }
        }
        // Top-left is (−1.3, 1.3), which escapes forward.
        assert_eq!(img.get(0, 0), s.escape);
        let (i, j) = g.pixel_of(&crate::henon::FloatPoint::new(0.5, 0.5)).unwrap();
        assert_eq!(img.get(i, j), s.periodic);
        assert_eq!(img.get(i + 3, j), s.basin_plus);
    }

    #[test]
    fn render_is_independent_of_worker_count() {
        let g = small(33);
        let cfg = ClassifyConfig::default();
        let s = RenderStyle::default();
        let a = render(&g, &cfg, &s, None, Some(1)).unwrap();
        let b = render(&g, &cfg, &s, None, Some(3)).unwrap();
        assert_eq!(a.to_ppm(), b.to_ppm());
    }
}
