use std::collections::HashMap;

use super::Polyline;
use crate::henon::FloatPoint;

/// Uniform-grid hash over the segments (and isolated vertices) of polylines.
#[derive(Clone, Debug)]
pub struct SegmentIndex {
    cell: f64,
    segs: Vec<(FloatPoint, FloatPoint)>,
    cells: HashMap<(i64, i64), Vec<u32>>,
}

pub(crate) fn point_segment_distance(q: &FloatPoint, a: &FloatPoint, b: &FloatPoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((q.x - a.x) * dx + (q.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (q.x - (a.x + t * dx)).hypot(q.y - (a.y + t * dy))
}

impl SegmentIndex {
    pub fn new(line: &Polyline, cell: f64) -> Self {
        Self::from_lines(std::slice::from_ref(line), cell)
    }

    pub fn from_lines(lines: &[Polyline], cell: f64) -> Self {
        let mut idx = SegmentIndex {
            cell,
            segs: Vec::new(),
            cells: HashMap::new(),
        };
        for line in lines {
            let mut joined = vec![false; line.points.len()];
            for (i, a, b) in line.segments() {
                joined[i - 1] = true;
                joined[i] = true;
                idx.insert(a, b);
            }
            for (q, _) in line.points.iter().zip(&joined).filter(|(_, &j)| !j) {
                idx.insert(*q, *q);
            }
        }
        idx
    }

    fn key(&self, v: f64) -> i64 {
        (v / self.cell).floor() as i64
    }

    fn insert(&mut self, a: FloatPoint, b: FloatPoint) {
        let id = self.segs.len() as u32;
        self.segs.push((a, b));
        let (i0, i1) = (self.key(a.x.min(b.x)), self.key(a.x.max(b.x)));
        let (j0, j1) = (self.key(a.y.min(b.y)), self.key(a.y.max(b.y)));
        if (i1 - i0 + 1) * (j1 - j0 + 1) > 4096 {
            // Very long segment: file it under its endpoints only, and rely
            // on the brute-force fallback.
            for k in [(i0, j0), (i1, j1)] {
                self.cells.entry(k).or_default().push(id);
            }
            return;
        }
        for i in i0..=i1 {
            for j in j0..=j1 {
                self.cells.entry((i, j)).or_default().push(id);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// Distance from `q` to the nearest indexed segment (infinite if empty).
    pub fn distance(&self, q: &FloatPoint) -> f64 {
        self.distance_above(q, 0.0)
    }

    /// Like [`distance`](Self::distance), but may return any value not above
    /// `floor` as soon as one is found.
    pub fn distance_above(&self, q: &FloatPoint, floor: f64) -> f64 {
        if self.segs.is_empty() {
            return f64::INFINITY;
        }
        let (ci, cj) = (self.key(q.x), self.key(q.y));
        let mut best = f64::INFINITY;
        for ring in 0..=3i64 {
            for i in ci - ring..=ci + ring {
                for j in cj - ring..=cj + ring {
                    if (i - ci).abs() != ring && (j - cj).abs() != ring {
                        continue;
                    }
                    if let Some(ids) = self.cells.get(&(i, j)) {
                        for &id in ids {
                            let (a, b) = &self.segs[id as usize];
                            best = best.min(point_segment_distance(q, a, b));
                            if best <= floor {
                                return best;
                            }
                        }
                    }
                }
            }
            // Anything in a farther ring is at least `ring·cell` away.
            if best <= ring as f64 * self.cell {
                return best;
            }
        }
        self.segs.iter().map(|(a, b)| point_segment_distance(q, a, b)).fold(best, f64::min)
    }
}
