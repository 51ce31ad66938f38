//! Bit rasters over a pixel grid, polyline rasterization and Euclidean
//! distance transforms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::henon::FloatPoint;
use crate::manifolds::Polyline;

/// Row-major bitmap, row 0 at the top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bitmap {
    pub nx: usize,
    pub ny: usize,
    #[serde(skip)]
    pub bits: Vec<bool>,
}

impl Bitmap {
    pub fn new(nx: usize, ny: usize) -> Self {
        Bitmap {
            nx,
            ny,
            bits: vec![false; nx * ny],
        }
    }

    pub fn for_grid(grid: &Grid) -> Self {
        Bitmap::new(grid.res.nx, grid.res.ny)
    }

    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut b = Bitmap::new(nx, ny);
        for j in 0..ny {
            for i in 0..nx {
                b.bits[j * nx + i] = f(i, j);
            }
        }
        b
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.nx + i]
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[j * self.nx + i] = true;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| (k % self.nx, k / self.nx))
    }

    /// The image under a half turn about the raster center.
    pub fn rotated(&self) -> Bitmap {
        let mut bits = self.bits.clone();
        bits.reverse();
        Bitmap {
            nx: self.nx,
            ny: self.ny,
            bits,
        }
    }

    fn zip(&self, o: &Bitmap, f: impl Fn(bool, bool) -> bool) -> Bitmap {
        assert_eq!((self.nx, self.ny), (o.nx, o.ny), "raster shapes differ");
        Bitmap {
            nx: self.nx,
            ny: self.ny,
            bits: self.bits.iter().zip(&o.bits).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn and(&self, o: &Bitmap) -> Bitmap {
        self.zip(o, |a, b| a && b)
    }

    pub fn or(&self, o: &Bitmap) -> Bitmap {
        self.zip(o, |a, b| a || b)
    }

    pub fn and_not(&self, o: &Bitmap) -> Bitmap {
        self.zip(o, |a, b| a && !b)
    }

    pub fn is_subset_of(&self, o: &Bitmap) -> bool {
        self.and_not(o).is_empty()
    }

    /// Binary PBM (P4): 1 bits are black.
    pub fn to_pbm(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.nx, self.ny).into_bytes();
        let row_bytes = self.nx.div_ceil(8);
        for j in 0..self.ny {
            let mut row = vec![0u8; row_bytes];
            for i in 0..self.nx {
                if self.get(i, j) {
                    row[i / 8] |= 0x80 >> (i % 8);
                }
            }
            out.extend_from_slice(&row);
        }
        out
    }

    /// Euclidean distance, in pixels, from every pixel to the nearest set
    /// pixel. Infinite everywhere when the bitmap is empty.
    pub fn distance_transform(&self) -> Vec<f64> {
        let big = 1e20;
        let mut d: Vec<f64> = self.bits.iter().map(|&b| if b { 0.0 } else { big }).collect();
        let mut buf = vec![0.0; self.nx.max(self.ny)];
        let mut out = vec![0.0; self.nx.max(self.ny)];
        for i in 0..self.nx {
            for j in 0..self.ny {
                buf[j] = d[j * self.nx + i];
            }
            edt_1d(&buf[..self.ny], &mut out[..self.ny]);
            for j in 0..self.ny {
                d[j * self.nx + i] = out[j];
            }
        }
        for j in 0..self.ny {
            let row = &mut d[j * self.nx..(j + 1) * self.nx];
            buf[..self.nx].copy_from_slice(row);
            edt_1d(&buf[..self.nx], &mut out[..self.nx]);
            row.copy_from_slice(&out[..self.nx]);
        }
        d.into_iter()
            .map(|v| if v >= big { f64::INFINITY } else { v.sqrt() })
            .collect()
    }
}

/// Squared distance transform of a sampled function (lower envelope of
/// parabolas).
fn edt_1d(f: &[f64], out: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut v = vec![0usize; n];
    let mut z = vec![0f64; n + 1];
    let mut k = 0usize;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    let sq = |q: usize| (q * q) as f64;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + sq(q)) - (f[p] + sq(p))) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0 and the new parabola dominates everywhere.
                v[0] = q;
                z[1] = f64::INFINITY;
                break;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *o = dq * dq + f[p];
    }
}

/// Largest distance, in pixels, from a pixel of `from` to the set `to`.
pub fn directed_hausdorff(from: &Bitmap, to: &Bitmap) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::InvalidParam("Hausdorff distance of an empty raster".into()));
    }
    let d = to.distance_transform();
    Ok(from
        .bits
        .iter()
        .zip(&d)
        .filter(|(&b, _)| b)
        .map(|(_, &v)| v)
        .fold(0.0, f64::max))
}

pub fn hausdorff(a: &Bitmap, b: &Bitmap) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Marks every pixel a polyline passes through, sampling each segment at
/// quarter-pixel spacing.
pub fn draw_polyline(bm: &mut Bitmap, grid: &Grid, line: &Polyline) {
    let (px, py) = grid.pixel_size();
    let h = 0.25 * px.min(py);
    let mut joined = vec![false; line.points.len()];
    for (i, a, b) in line.segments() {
        joined[i - 1] = true;
        joined[i] = true;
        let n = (a.dist(&b) / h).ceil().max(1.0) as usize;
        for s in 0..=n {
            let t = s as f64 / n as f64;
            let q = FloatPoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            mark_point(bm, grid, &q);
        }
    }
    for (q, _) in line.points.iter().zip(&joined).filter(|(_, &j)| !j) {
        mark_point(bm, grid, q);
    }
}

pub fn mark_point(bm: &mut Bitmap, grid: &Grid, q: &FloatPoint) {
    if let Some((i, j)) = grid.pixel_of(q) {
        bm.set(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(bm: &Bitmap) -> Vec<f64> {
        let pts: Vec<(usize, usize)> = bm.ones().collect();
        (0..bm.ny)
            .flat_map(|j| (0..bm.nx).map(move |i| (i, j)))
            .map(|(i, j)| {
                pts.iter()
                    .map(|&(a, b)| ((a as f64 - i as f64).powi(2) + (b as f64 - j as f64).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    #[test]
    fn distance_transform_matches_brute_force() {
        let bm = Bitmap::from_fn(23, 17, |i, j| (i * 7 + j * 13) % 29 == 0 || (i == 3 && j > 10));
        let d = bm.distance_transform();
        for (a, b) in d.iter().zip(brute(&bm)) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        let single = Bitmap::from_fn(9, 9, |i, j| i == 8 && j == 0);
        assert_eq!(single.distance_transform()[8 * 9], (64.0f64 + 64.0).sqrt());
    }

    #[test]
    fn hausdorff_basics() {
        let a = Bitmap::from_fn(10, 10, |i, j| i == 2 && j == 2);
        let b = Bitmap::from_fn(10, 10, |i, j| i == 5 && j == 6);
        assert_eq!(hausdorff(&a, &b).unwrap(), 5.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert!(hausdorff(&a, &Bitmap::new(10, 10)).is_err());
    }

    #[test]
    fn pbm_layout() {
        let bm = Bitmap::from_fn(10, 2, |i, j| i == 0 && j == 0 || i == 9 && j == 1);
        let out = bm.to_pbm();
        let header = b"P4\n10 2\n";
        assert_eq!(&out[..header.len()], header);
        assert_eq!(&out[header.len()..], &[0x80, 0x00, 0x00, 0x40]);
    }

    #[test]
    fn rotation_is_a_half_turn() {
        let bm = Bitmap::from_fn(5, 3, |i, j| i == 0 && j == 0);
        assert!(bm.rotated().get(4, 2));
    }
}
