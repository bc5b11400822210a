use std::collections::HashMap;

use rayon::prelude::*;

use super::dist2;
use crate::types::{NeighborGraph, PointCloud};

const CHUNK: usize = 1024;

/// All pairs at Euclidean distance `<= r`.
///
/// Points are bucketed into cubic cells of side `r`; a pair within `r`
/// always lies in the same or adjacent cells, so each point scans `3^D`
/// cells. When `3^D` is not smaller than `N` the grid buys nothing and the
/// search falls back to all pairs.
pub fn radius_graph(cloud: &PointCloud, r: f64) -> NeighborGraph {
    let n = cloud.len();
    let dim = cloud.dim();
    let r2 = r * r;
    if n < 2 {
        return NeighborGraph::empty(n);
    }
    let grid = match Grid::new(cloud, r) {
        Some(g) if 3f64.powi(dim as i32) < n as f64 => g,
        _ => return all_pairs(cloud, r2),
    };

    let offsets = neighbor_offsets(dim);
    // Points are visited in cell order, so consecutive points share most of
    // their neighbors; downstream passes over the edge list then stay in cache.
    let chunks: Vec<Vec<(u32, u32)>> = grid
        .order
        .par_chunks(CHUNK)
        .map(|block| {
            let mut out = Vec::new();
            let mut cell = vec![0i64; dim];
            let mut probe = vec![0i64; dim];
            for &i in block {
                let i = i as usize;
                let p = cloud.point(i);
                grid.cell_of(p, &mut cell);
                'offsets: for off in offsets.chunks_exact(dim) {
                    for d in 0..dim {
                        probe[d] = cell[d] + off[d];
                        if probe[d] < 0 || probe[d] >= grid.cells[d] {
                            continue 'offsets;
                        }
                    }
                    let Some(&(start, end)) = grid.buckets.get(&grid.key(&probe)) else {
                        continue;
                    };
                    for slot in start..end {
                        let j = grid.order[slot as usize];
                        if (j as usize) > i && dist2(p, grid.point(slot as usize)) <= r2 {
                            out.push((i as u32, j));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let edges = chunks.concat();
    NeighborGraph::from_unique_unchecked(n, edges)
}

fn all_pairs(cloud: &PointCloud, r2: f64) -> NeighborGraph {
    let n = cloud.len();
    let rows: Vec<Vec<(u32, u32)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = cloud.point(i);
            (i + 1..n)
                .filter(|&j| dist2(p, cloud.point(j)) <= r2)
                .map(|j| (i as u32, j as u32))
                .collect()
        })
        .collect();
    NeighborGraph::from_unique_unchecked(n, rows.concat())
}

/// `{-1, 0, 1}^dim`, flattened.
fn neighbor_offsets(dim: usize) -> Vec<i64> {
    let count = 3usize.pow(dim as u32);
    let mut out = Vec::with_capacity(count * dim);
    for mut code in 0..count {
        for _ in 0..dim {
            out.push((code % 3) as i64 - 1);
            code /= 3;
        }
    }
    out
}

struct Grid {
    lows: Vec<f64>,
    side: f64,
    cells: Vec<i64>,
    strides: Vec<u64>,
    /// Point indices sorted by cell key.
    order: Vec<u32>,
    /// Coordinates in `order`, for cache-friendly scans.
    coords: Vec<f64>,
    dim: usize,
    buckets: HashMap<u64, (u32, u32)>,
}

impl Grid {
    fn new(cloud: &PointCloud, side: f64) -> Option<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return None;
        }
        let dim = cloud.dim();
        let bbox = cloud.bbox();
        let lows: Vec<f64> = bbox.bounds().iter().map(|b| b.0).collect();
        let mut cells = Vec::with_capacity(dim);
        let mut strides = Vec::with_capacity(dim);
        let mut total: u64 = 1;
        for d in 0..dim {
            let m = (bbox.side(d) / side).ceil().max(1.0);
            if m > i64::MAX as f64 / 4.0 {
                return None;
            }
            strides.push(total);
            total = total.checked_mul(m as u64)?;
            cells.push(m as i64);
        }

        let mut grid = Grid {
            lows,
            side,
            cells,
            strides,
            order: Vec::new(),
            coords: Vec::new(),
            dim,
            buckets: HashMap::new(),
        };
        let mut cell = vec![0i64; dim];
        // Cells are laid out along a Z-order curve so that points close in
        // space stay close in `order` at every scale.
        let mut keyed: Vec<(u64, u64, u32)> = cloud
            .points()
            .enumerate()
            .map(|(i, p)| {
                grid.cell_of(p, &mut cell);
                let key = grid.key(&cell);
                (grid.morton(&cell).unwrap_or(key), key, i as u32)
            })
            .collect();
        keyed.sort_unstable();
        let mut start = 0;
        while start < keyed.len() {
            let key = keyed[start].1;
            let mut end = start;
            while end < keyed.len() && keyed[end].1 == key {
                end += 1;
            }
            grid.buckets.insert(key, (start as u32, end as u32));
            start = end;
        }
        grid.order = keyed.iter().map(|&(_, _, i)| i).collect();
        grid.coords = grid
            .order
            .iter()
            .flat_map(|&i| cloud.point(i as usize).iter().copied())
            .collect();
        Some(grid)
    }

    fn cell_of(&self, p: &[f64], out: &mut [i64]) {
        for d in 0..self.dim {
            let c = ((p[d] - self.lows[d]) / self.side).floor() as i64;
            out[d] = c.clamp(0, self.cells[d] - 1);
        }
    }

    fn key(&self, cell: &[i64]) -> u64 {
        cell.iter().zip(&self.strides).map(|(&c, &s)| c as u64 * s).sum()
    }

    /// Bit-interleaved cell coordinates, if they fit in 64 bits.
    fn morton(&self, cell: &[i64]) -> Option<u64> {
        let bits = 64 / self.dim as u32;
        if self.cells.iter().any(|&m| bits < 63 && m > 1 << bits) {
            return None;
        }
        let mut out = 0u64;
        for b in 0..bits {
            for (d, &c) in cell.iter().enumerate() {
                out |= ((c as u64 >> b) & 1) << (b as usize * self.dim + d);
            }
        }
        Some(out)
    }

    fn point(&self, slot: usize) -> &[f64] {
        &self.coords[slot * self.dim..(slot + 1) * self.dim]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::BoundingBox;

    #[test]
    fn offsets_cover_the_cube() {
        let offs = neighbor_offsets(2);
        assert_eq!(offs.len(), 18);
        assert!(offs.chunks(2).any(|o| o == [-1, 1]));
        assert!(offs.chunks(2).any(|o| o == [0, 0]));
    }

    #[test]
    fn threshold_is_inclusive_and_sharp() {
        let bbox = BoundingBox::cube(0.0, 1.0, 2).unwrap();
        let r = 0.25;
        let eps = 1e-9;
        let near = PointCloud::new(2, vec![0.1, 0.1, 0.1 + r - eps, 0.1], bbox.clone()).unwrap();
        assert_eq!(radius_graph(&near, r).edges(), &[(0, 1)]);
        let far = PointCloud::new(2, vec![0.1, 0.1, 0.1 + r + eps, 0.1], bbox).unwrap();
        assert_eq!(radius_graph(&far, r).n_edges(), 0);
    }

    #[test]
    fn duplicate_points_are_connected() {
        let bbox = BoundingBox::cube(0.0, 1.0, 1).unwrap();
        let cloud = PointCloud::new(1, vec![0.3, 0.3, 0.9], bbox).unwrap();
        assert_eq!(radius_graph(&cloud, 0.1).edges(), &[(0, 1)]);
    }

    #[test]
    fn huge_radius_connects_everything() {
        let bbox = BoundingBox::cube(0.0, 1.0, 2).unwrap();
        let coords: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37) % 1.0).collect();
        let cloud = PointCloud::new(2, coords, bbox).unwrap();
        assert_eq!(radius_graph(&cloud, 10.0).n_edges(), 20 * 19 / 2);
    }
}
