//! Real filled Julia sets and basin boundaries at pixel level.
//!
//! Every pixel is probed at its center and its four corners. A pixel
//! belongs to a boundary-type set when its probes carry different labels:
//! the pixel square is connected, so it then meets the common boundary of
//! the labelled regions. Forward labels are BasinPlus, BasinMinus and Escape.
//!
//! K⁻ is not found from labels. Backward orbits on both sides of W^u(0)
//! leave through the same escape side unless they start within ~1e-8 of the
//! curve, so no pixel-scale probe sees it. Instead a pixel is dropped from
//! K⁻ only when interval images of its subcells provably land in N or P
//! (minus the cycle and attractors), which makes the raster an outer bound.

use serde::Serialize;

use crate::classify::{classify_points, escape_side, ClassifyConfig, Direction, Evidence, Fate, Verdict};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::Interval;
use crate::grid::{Grid, Window};
use crate::henon::{catalogue_entry, Coords, FloatPoint, IntervalBox, SaddleId};
use crate::regions::{region, Region, Tri};
use crate::manifolds::{grow_all, GrowParams, Kind, Polyline};
use crate::raster::{directed_hausdorff, draw_polyline, hausdorff, mark_point, Bitmap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SetId {
    KR,
    KPlus,
    KMinus,
    JPlus,
    JMinus,
    JR,
    BoundaryPlus,
    BoundaryMinus,
}

impl SetId {
    pub const ALL: [SetId; 8] = [
        SetId::KR,
        SetId::KPlus,
        SetId::KMinus,
        SetId::JPlus,
        SetId::JMinus,
        SetId::JR,
        SetId::BoundaryPlus,
        SetId::BoundaryMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SetId::KR => "K_R",
            SetId::KPlus => "K_plus",
            SetId::KMinus => "K_minus",
            SetId::JPlus => "J_plus",
            SetId::JMinus => "J_minus",
            SetId::JR => "J_R",
            SetId::BoundaryPlus => "boundary_plus",
            SetId::BoundaryMinus => "boundary_minus",
        }
    }

    pub fn parse(s: &str) -> Result<SetId> {
        SetId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParam(format!("unknown set {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Classifier,
    ManifoldOverlay,
    Intersection,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetRaster {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub set_id: SetId,
    pub provenance: Provenance,
    pub count: usize,
    #[serde(skip)]
    pub bitmap: Bitmap,
}

impl SetRaster {
    fn new(grid: &Grid, set_id: SetId, provenance: Provenance, bitmap: Bitmap) -> Self {
        SetRaster {
            window: grid.window,
            nx: grid.res.nx,
            ny: grid.res.ny,
            set_id,
            provenance,
            count: bitmap.count(),
            bitmap,
        }
    }

    pub fn metadata(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fwd {
    Plus,
    Minus,
    Escape,
    /// Undecided, StableZeroCandidate or periodic.
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bwd {
    Side(char),
    Bounded,
}

fn fwd_label(f: &Fate) -> Fwd {
    match f.verdict {
        Verdict::BasinPlus => Fwd::Plus,
        Verdict::BasinMinus => Fwd::Minus,
        Verdict::Escape => Fwd::Escape,
        _ => Fwd::Other,
    }
}

fn bwd_label(f: &Fate) -> Bwd {
    match (f.verdict, &f.certificate.evidence) {
        (Verdict::Escape, Evidence::InRegion { region }) => Bwd::Side(escape_side(region).unwrap_or('X')),
        (Verdict::Escape, _) => Bwd::Side('X'),
        _ => Bwd::Bounded,
    }
}

/// Forward and backward fates at pixel centers and corners.
#[derive(Clone, Debug)]
pub struct ProbeFates {
    pub grid: Grid,
    pub forward_centers: Vec<Fate>,
    pub forward_corners: Vec<Fate>,
    pub backward_centers: Vec<Fate>,
    pub backward_corners: Vec<Fate>,
    /// Pixels not certified to escape backward.
    pub k_minus_cells: Bitmap,
}

impl ProbeFates {
    pub fn compute(grid: &Grid, cfg: &ClassifyConfig, threads: Option<usize>) -> Result<Self> {
        Self::compute_with(grid, cfg, &CellParams::default(), threads)
    }

    pub fn compute_with(grid: &Grid, cfg: &ClassifyConfig, cells: &CellParams, threads: Option<usize>) -> Result<Self> {
        let centers: Vec<FloatPoint> = (0..grid.len()).map(|k| grid.center_of_index(k)).collect();
        let (cx, cy) = (grid.res.nx + 1, grid.res.ny + 1);
        let corners: Vec<FloatPoint> = (0..cx * cy).map(|k| grid.corner(k % cx, k / cx)).collect();
        Ok(ProbeFates {
            grid: *grid,
            forward_centers: classify_points(&centers, cfg, Direction::Forward, threads)?,
            forward_corners: classify_points(&corners, cfg, Direction::Forward, threads)?,
            backward_centers: classify_points(&centers, cfg, Direction::Backward, threads)?,
            backward_corners: classify_points(&corners, cfg, Direction::Backward, threads)?,
            k_minus_cells: k_minus_cells(grid, cells, threads),
        })
    }

    fn probes<'a>(&'a self, centers: &'a [Fate], corners: &'a [Fate], i: usize, j: usize) -> [&'a Fate; 5] {
        let cx = self.grid.res.nx + 1;
        [
            &centers[self.grid.index(i, j)],
            &corners[j * cx + i],
            &corners[j * cx + i + 1],
            &corners[(j + 1) * cx + i],
            &corners[(j + 1) * cx + i + 1],
        ]
    }

    fn fwd(&self, i: usize, j: usize) -> [Fwd; 5] {
        self.probes(&self.forward_centers, &self.forward_corners, i, j).map(fwd_label)
    }

    fn bwd(&self, i: usize, j: usize) -> [Bwd; 5] {
        self.probes(&self.backward_centers, &self.backward_corners, i, j).map(bwd_label)
    }

    fn raster(&self, f: impl Fn(usize, usize) -> bool) -> Bitmap {
        Bitmap::from_fn(self.grid.res.nx, self.grid.res.ny, f)
    }

    fn mixed<T: PartialEq>(v: &[T]) -> bool {
        v.iter().any(|a| *a != v[0])
    }

    pub fn k_plus(&self) -> Bitmap {
        self.raster(|i, j| self.fwd(i, j).iter().any(|&l| l != Fwd::Escape))
    }

    pub fn j_plus(&self) -> Bitmap {
        self.raster(|i, j| {
            let l = self.fwd(i, j);
            Self::mixed(&l) || l.contains(&Fwd::Other)
        })
    }

    fn boundary_of(&self, target: Fwd) -> Bitmap {
        self.raster(|i, j| {
            let l = self.fwd(i, j);
            l.contains(&target) && l.iter().any(|&a| a != target)
        })
    }

    /// Pixels meeting ∂Ω₊.
    pub fn boundary_plus(&self) -> Bitmap {
        self.boundary_of(Fwd::Plus)
    }

    /// Pixels meeting ∂Ω₋.
    pub fn boundary_minus(&self) -> Bitmap {
        self.boundary_of(Fwd::Minus)
    }

    pub fn k_minus(&self) -> Bitmap {
        self.k_minus_cells.clone()
    }

    /// K⁻ pixels that also contain a backward-escaping probe.
    pub fn j_minus(&self) -> Bitmap {
        let k = self.k_minus();
        self.raster(|i, j| k.get(i, j) && self.bwd(i, j).iter().any(|l| matches!(l, Bwd::Side(_))))
    }

    pub fn set(&self, id: SetId) -> SetRaster {
        let (bm, prov) = match id {
            SetId::KPlus => (self.k_plus(), Provenance::Classifier),
            SetId::KMinus => (self.k_minus(), Provenance::Classifier),
            SetId::JPlus => (self.j_plus(), Provenance::Classifier),
            SetId::JMinus => (self.j_minus(), Provenance::Classifier),
            SetId::BoundaryPlus => (self.boundary_plus(), Provenance::Classifier),
            SetId::BoundaryMinus => (self.boundary_minus(), Provenance::Classifier),
            SetId::KR => (self.k_plus().and(&self.k_minus()), Provenance::Intersection),
            SetId::JR => (self.j_plus().and(&self.j_minus()), Provenance::Intersection),
        };
        SetRaster::new(&self.grid, id, prov, bm)
    }
}

/// Subdivision limits for the backward-escape certificate.
#[derive(Clone, Copy, Debug)]
pub struct CellParams {
    /// Each pixel may be split into up to `4^depth` subcells.
    pub depth: u32,
    pub max_steps: u32,
    /// Give up on a box once either side exceeds this.
    pub max_width: f64,
}

impl Default for CellParams {
    fn default() -> Self {
        CellParams {
            depth: 5,
            max_steps: 60,
            max_width: 0.5,
        }
    }
}

struct EscapeSets {
    sides: [&'static Region; 2],
    fixed: [&'static Region; 2],
}

fn escape_sets() -> EscapeSets {
    let r = |n| region(n).expect("built-in region");
    EscapeSets {
        sides: [r("N"), r("P")],
        fixed: [r("Cycle"), r("Attractors")],
    }
}

/// Exact range of `2x³ − 3x/2` over `x`, using its critical points ±½.
fn inverse_cubic(x: Interval) -> Interval {
    let at = |v: f64| {
        let p = Interval::point(v);
        Interval::point(2.0) * p.cube() - Interval::point(1.5) * p
    };
    let mut out = at(x.lo).hull(&at(x.hi));
    for c in [-0.5, 0.5] {
        if x.contains(c) {
            out = out.hull(&at(c));
        }
    }
    out
}

fn inverse_box(b: &IntervalBox) -> IntervalBox {
    Coords::new(inverse_cubic(b.x) + Interval::point(2.0) * b.y, b.x)
}

fn certified_escape(b: &IntervalBox, sets: &EscapeSets) -> bool {
    sets.fixed.iter().all(|r| r.contains_box(b) == Tri::No)
        && sets.sides.iter().any(|r| r.contains_box(b) == Tri::Yes)
}

/// True when every point of `b` provably escapes under f⁻¹.
fn cell_escapes(b: &IntervalBox, depth: u32, cp: &CellParams, sets: &EscapeSets) -> bool {
    let mut c = *b;
    for _ in 0..=cp.max_steps {
        if certified_escape(&c, sets) {
            return true;
        }
        if c.x.width() > cp.max_width || c.y.width() > cp.max_width {
            break;
        }
        c = inverse_box(&c);
    }
    if depth == 0 {
        return false;
    }
    let (x0, x1) = b.x.split();
    let (y0, y1) = b.y.split();
    [(x0, y0), (x0, y1), (x1, y0), (x1, y1)]
        .iter()
        .all(|&(x, y)| cell_escapes(&Coords::new(x, y), depth - 1, cp, sets))
}

/// Pixels whose closed square may meet K⁻.
pub fn k_minus_cells(grid: &Grid, cp: &CellParams, threads: Option<usize>) -> Bitmap {
    let sets = escape_sets();
    let nx = grid.res.nx;
    let bits: Vec<bool> = crate::parallel::install(threads, || {
        (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                let (a, b) = (grid.corner(i, j + 1), grid.corner(i + 1, j));
                let cell = Coords::new(Interval::new(a.x, b.x), Interval::new(a.y, b.y));
                !cell_escapes(&cell, cp.depth, cp, &sets)
            })
            .collect()
    });
    Bitmap {
        nx,
        ny: grid.res.ny,
        bits,
    }
}

/// Growth parameters for curves drawn over `grid`: the arena is the window
/// padded by two pixels.
pub fn overlay_params(grid: &Grid, base: &GrowParams) -> GrowParams {
    let (px, py) = grid.pixel_size();
    let w = grid.window;
    let arena = Window::new(w.xmin - 2.0 * px, w.xmax + 2.0 * px, w.ymin - 2.0 * py, w.ymax + 2.0 * py);
    let reach = [arena.xmin, arena.xmax, arena.ymin, arena.ymax]
        .iter()
        .fold(0f64, |m, v| m.max(v.abs()));
    GrowParams {
        arena,
        dead_radius: base.dead_radius.max(reach),
        ..*base
    }
}

/// Curves of both saddle orbits, all branches.
#[derive(Clone, Debug)]
pub struct Curves {
    pub stable_origin: Vec<Polyline>,
    pub stable_cycle: Vec<Polyline>,
    pub unstable_origin: Vec<Polyline>,
    pub unstable_cycle: Vec<Polyline>,
}

impl Curves {
    pub fn grow(params: &GrowParams) -> Result<Self> {
        Ok(Curves {
            stable_origin: grow_all(SaddleId::Origin, Kind::Stable, params)?,
            stable_cycle: grow_all(SaddleId::Cycle, Kind::Stable, params)?,
            unstable_origin: grow_all(SaddleId::Origin, Kind::Unstable, params)?,
            unstable_cycle: grow_all(SaddleId::Cycle, Kind::Unstable, params)?,
        })
    }

    pub fn stable(&self) -> impl Iterator<Item = &Polyline> {
        self.stable_origin.iter().chain(&self.stable_cycle)
    }

    pub fn unstable(&self) -> impl Iterator<Item = &Polyline> {
        self.unstable_origin.iter().chain(&self.unstable_cycle)
    }

    /// W^u₋(p, p′): the branches at p and p′ that enter R.
    pub fn unstable_cycle_minus(&self) -> impl Iterator<Item = &Polyline> {
        self.unstable_cycle
            .iter()
            .filter(|c| c.branch == crate::manifolds::Branch::Minus)
    }
}

fn mark_named(bm: &mut Bitmap, grid: &Grid, names: &[&str]) {
    for n in names {
        mark_point(bm, grid, &catalogue_entry(n).float_location());
    }
}

fn draw_all<'a>(grid: &Grid, lines: impl Iterator<Item = &'a Polyline>) -> Bitmap {
    let mut bm = Bitmap::for_grid(grid);
    for l in lines {
        draw_polyline(&mut bm, grid, l);
    }
    bm
}

/// Rasterized W^s(0) ∪ W^s(p, p′).
pub fn stable_overlay(grid: &Grid, curves: &Curves) -> Bitmap {
    let mut bm = draw_all(grid, curves.stable());
    mark_named(&mut bm, grid, &["0", "p", "p'"]);
    bm
}

/// Rasterized closure(W^u(0)) ∪ W^u₋(p, p′) ∪ {p, p′}.
pub fn k_r_overlay(grid: &Grid, curves: &Curves) -> Bitmap {
    let mut bm = draw_all(grid, curves.unstable_origin.iter().chain(curves.unstable_cycle_minus()));
    mark_named(&mut bm, grid, &["0", "p+", "p-", "p", "p'"]);
    bm
}

/// Rasterized closure(W^u(0)) ∪ W^u(p, p′).
pub fn k_minus_overlay(grid: &Grid, curves: &Curves) -> Bitmap {
    let mut bm = draw_all(grid, curves.unstable());
    mark_named(&mut bm, grid, &["0", "p+", "p-", "p", "p'"]);
    bm
}

pub fn raster_set(
    set_id: SetId,
    grid: &Grid,
    cfg: &ClassifyConfig,
    threads: Option<usize>,
) -> Result<SetRaster> {
    Ok(ProbeFates::compute(grid, cfg, threads)?.set(set_id))
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryComparison {
    pub boundary_pixels: usize,
    pub boundary_minus_pixels: usize,
    pub manifold_pixels: usize,
    /// Symmetric Hausdorff distance between ∂Ω₊ pixels and the stable overlay.
    pub hausdorff_pixels: f64,
    pub boundary_to_manifold: f64,
    pub manifold_to_boundary: f64,
    /// Between the ∂Ω₊ and ∂Ω₋ pixel sets.
    pub plus_minus_hausdorff: f64,
    /// Between ∂Ω₊ pixels and their half-turn image.
    pub sigma_hausdorff: f64,
    pub tol_pixels: f64,
    pub passed: bool,
}

pub fn boundary_compare(probes: &ProbeFates, curves: &Curves, tol_pixels: f64) -> Result<BoundaryComparison> {
    let plus = probes.boundary_plus();
    let minus = probes.boundary_minus();
    if plus.is_empty() {
        return Err(Error::InvalidParam("no basin boundary in the window".into()));
    }
    let overlay = stable_overlay(&probes.grid, curves);
    let b2m = directed_hausdorff(&plus, &overlay)?;
    let m2b = directed_hausdorff(&overlay, &plus)?;
    let pm = hausdorff(&plus, &minus)?;
    let sig = hausdorff(&plus, &plus.rotated())?;
    let h = b2m.max(m2b);
    Ok(BoundaryComparison {
        boundary_pixels: plus.count(),
        boundary_minus_pixels: minus.count(),
        manifold_pixels: overlay.count(),
        hausdorff_pixels: h,
        boundary_to_manifold: b2m,
        manifold_to_boundary: m2b,
        plus_minus_hausdorff: pm,
        sigma_hausdorff: sig,
        tol_pixels,
        passed: h <= tol_pixels && pm <= tol_pixels,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Containment {
    pub pixels: usize,
    /// Largest distance from a raster pixel to the overlay.
    pub worst_distance: f64,
    pub worst_pixel: Option<(usize, usize)>,
    /// Largest distance from an overlay pixel to the raster (reported only).
    pub reverse_distance: f64,
}

fn containment(raster: &Bitmap, overlay: &Bitmap) -> Containment {
    let d = overlay.distance_transform();
    let mut worst = 0.0;
    let mut at = None;
    for (i, j) in raster.ones() {
        let v = d[j * raster.nx + i];
        if v > worst {
            worst = v;
            at = Some((i, j));
        }
    }
    let reverse = if raster.is_empty() {
        f64::INFINITY
    } else {
        directed_hausdorff(overlay, raster).unwrap_or(f64::INFINITY)
    };
    Containment {
        pixels: raster.count(),
        worst_distance: worst,
        worst_pixel: at,
        reverse_distance: reverse,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KrReport {
    pub k_r: Containment,
    pub k_minus: Containment,
    /// J⁻ and K⁻ rasters agree pixel for pixel.
    pub j_minus_equals_k_minus: bool,
    /// Pixels of 0, p and p′ that are missing from the J_R raster.
    pub j_r_missing: Vec<String>,
    pub undecided_pixels: usize,
    pub tol_pixels: f64,
    pub passed: bool,
}

/// K_R and K⁻ rasters against the unstable-manifold overlays.
pub fn k_r_structure_check(probes: &ProbeFates, curves: &Curves, tol_pixels: f64) -> KrReport {
    let grid = &probes.grid;
    let k_r = probes.set(SetId::KR).bitmap;
    let k_minus = probes.k_minus();
    let j_minus = probes.j_minus();
    let j_r = probes.set(SetId::JR).bitmap;
    let kr = containment(&k_r, &k_r_overlay(grid, curves));
    let km = containment(&k_minus, &k_minus_overlay(grid, curves));
    let j_r_missing = ["0", "p", "p'"]
        .iter()
        .filter(|n| {
            grid.pixel_of(&catalogue_entry(n).float_location())
                .is_some_and(|(i, j)| !j_r.get(i, j))
        })
        .map(|n| n.to_string())
        .collect::<Vec<_>>();
    let undecided = probes
        .forward_centers
        .iter()
        .filter(|f| matches!(f.verdict, Verdict::Undecided | Verdict::StableZeroCandidate))
        .count();
    let eq = j_minus == k_minus;
    let passed = kr.worst_distance <= tol_pixels && km.worst_distance <= tol_pixels && eq && j_r_missing.is_empty();
    KrReport {
        k_r: kr,
        k_minus: km,
        j_minus_equals_k_minus: eq,
        j_r_missing,
        undecided_pixels: undecided,
        tol_pixels,
        passed,
    }
}
