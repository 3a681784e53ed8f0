//! Uniform-grid spatial index with outward ring traversal.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::ops::ControlFlow;

use crate::geometry::Point;

#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    x0: f64,
    y0: f64,
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
    points: Vec<Point>,
}

impl GridIndex {
    /// Builds an index over `points` with square cells of side `cell`.
    pub fn new(points: &[Point], cell: f64) -> Self {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in points {
            lo_x = lo_x.min(p.x);
            lo_y = lo_y.min(p.y);
            hi_x = hi_x.max(p.x);
            hi_y = hi_y.max(p.y);
        }
        let nx = (((hi_x - lo_x) / cell) as usize + 1).max(1);
        let ny = (((hi_y - lo_y) / cell) as usize + 1).max(1);
        let mut grid = GridIndex {
            cell,
            x0: lo_x,
            y0: lo_y,
            nx,
            ny,
            start: vec![0; nx * ny + 1],
            items: vec![0; points.len()],
            points: points.to_vec(),
        };
        let cells: Vec<usize> = points.iter().map(|p| grid.cell_of(p)).collect();
        for &c in &cells {
            grid.start[c + 1] += 1;
        }
        for c in 0..nx * ny {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (i, &c) in cells.iter().enumerate() {
            grid.items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn coords(&self, p: &Point) -> (usize, usize) {
        let cx = libm::floor((p.x - self.x0) / self.cell).clamp(0.0, (self.nx - 1) as f64) as usize;
        let cy = libm::floor((p.y - self.y0) / self.cell).clamp(0.0, (self.ny - 1) as f64) as usize;
        (cx, cy)
    }

    fn cell_of(&self, p: &Point) -> usize {
        let (cx, cy) = self.coords(p);
        cy * self.nx + cx
    }

    fn cell_items(&self, cx: usize, cy: usize) -> &[u32] {
        let c = cy * self.nx + cx;
        &self.items[self.start[c] as usize..self.start[c + 1] as usize]
    }

    /// Visits points ring by ring around `q`. Before ring `k ≥ 1` the callback
    /// `stop` receives a lower bound on the distance of every point not yet
    /// visited and may end the traversal.
    pub fn visit_rings<V, S>(&self, q: &Point, mut visit: V, mut stop: S)
    where
        V: FnMut(usize, &Point) -> ControlFlow<()>,
        S: FnMut(f64) -> bool,
    {
        let (cx, cy) = self.coords(q);
        let max_ring = self.nx.max(self.ny);
        for k in 0..=max_ring {
            if k > 0 && stop((k - 1) as f64 * self.cell) {
                return;
            }
            let (x_lo, x_hi) = (cx as isize - k as isize, cx as isize + k as isize);
            let (y_lo, y_hi) = (cy as isize - k as isize, cy as isize + k as isize);
            for y in y_lo..=y_hi {
                if y < 0 || y >= self.ny as isize {
                    continue;
                }
                let edge = y == y_lo || y == y_hi;
                let mut x = x_lo;
                while x <= x_hi {
                    if x >= 0 && x < self.nx as isize {
                        for &i in self.cell_items(x as usize, y as usize) {
                            if visit(i as usize, &self.points[i as usize]).is_break() {
                                return;
                            }
                        }
                    }
                    // Interior rows of the ring only contribute their two end cells.
                    x = if edge || x == x_hi { x + 1 } else { x_hi };
                }
            }
        }
    }

    /// Nearest indexed point to `q`, lowest index on ties.
    pub fn nearest(&self, q: &Point) -> Option<(usize, f64)> {
        let best: Cell<Option<(usize, f64)>> = Cell::new(None);
        self.visit_rings(
            q,
            |i, p| {
                let d2 = q.distance_squared(p);
                match best.get() {
                    Some((bi, bd)) if d2 > bd || (d2 == bd && i > bi) => {}
                    _ => best.set(Some((i, d2))),
                }
                ControlFlow::Continue(())
            },
            |bound| matches!(best.get(), Some((_, bd)) if bd < bound * bound),
        );
        best.get().map(|(i, d2)| (i, libm::sqrt(d2)))
    }
}

/// Brute-force nearest point with lowest-index tie-break.
pub fn nearest_linear(q: &Point, points: &[Point]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        let d2 = q.distance_squared(p);
        if best.is_none_or(|(_, bd)| d2 < bd) {
            best = Some((i, d2));
        }
    }
    best.map(|(i, d2)| (i, libm::sqrt(d2)))
}
