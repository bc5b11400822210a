use rayon::prelude::*;

use super::dist2;
use crate::error::{Error, Result};
use crate::types::{NeighborGraph, PointCloud};

/// Above this dimension a kd-tree prunes almost nothing for the sample
/// sizes in use and a linear scan is faster.
const KDTREE_MAX_DIM: usize = 8;
const LEAF_SIZE: usize = 12;

/// Symmetrized k-nearest-neighbor graph, edges longer than `r` dropped.
///
/// Neighbors are exact: ranked by `(squared distance, index)`, so ties are
/// broken towards the smaller index.
pub fn knn_graph(cloud: &PointCloud, k: usize, r: f64) -> Result<NeighborGraph> {
    let n = cloud.len();
    if n == 0 {
        return Err(Error::Contract("k-NN graph needs at least one point".into()));
    }
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if n > 1 && k >= n {
        return Err(Error::Contract(format!("k = {k} must be smaller than N = {n}")));
    }
    let r2 = r * r;
    let rows: Vec<Vec<u32>> = if cloud.dim() <= KDTREE_MAX_DIM {
        let tree = KdTree::build(cloud);
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut best = Neighbors::new(k, r2);
                tree.query(cloud, i, &mut best);
                best.into_indices()
            })
            .collect()
    } else {
        let columns = Columns::new(cloud);
        let queries: Vec<usize> = (0..n).collect();
        queries
            .par_chunks(QUERY_BLOCK)
            .flat_map_iter(|block| {
                let mut best: Vec<Neighbors> = block.iter().map(|_| Neighbors::new(k, r2)).collect();
                scan(cloud, &columns, block, &mut best);
                best.into_iter().map(Neighbors::into_indices)
            })
            .collect()
    };

    let mut edges: Vec<(u32, u32)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().map(move |&j| (i.min(j as usize) as u32, i.max(j as usize) as u32)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(NeighborGraph::from_unique_unchecked(n, edges))
}

/// Bounded, sorted candidate list.
struct Neighbors {
    k: usize,
    r2: f64,
    items: Vec<(f64, u32)>,
}

impl Neighbors {
    fn new(k: usize, r2: f64) -> Self {
        Neighbors { k, r2, items: Vec::with_capacity(k + 1) }
    }

    /// Squared distance beyond which nothing can enter.
    #[inline]
    fn bound(&self) -> f64 {
        if self.items.len() < self.k {
            self.r2
        } else {
            self.items[self.k - 1].0
        }
    }

    fn into_indices(self) -> Vec<u32> {
        self.items.into_iter().map(|(_, j)| j).collect()
    }

    #[inline]
    fn offer(&mut self, d2: f64, j: u32) {
        if d2 > self.bound() {
            return;
        }
        if self.items.len() == self.k {
            let worst = self.items[self.k - 1];
            if (d2, j) >= worst {
                return;
            }
            self.items.pop();
        }
        let pos = self.items.partition_point(|&e| e < (d2, j));
        self.items.insert(pos, (d2, j));
    }
}

const QUERY_BLOCK: usize = 32;
const CANDIDATE_BLOCK: usize = 256;

/// Coordinates transposed per block of `CANDIDATE_BLOCK` points, so that the
/// distances from one query to a whole block vectorize. The last block is
/// padded with infinite coordinates.
struct Columns {
    dim: usize,
    data: Vec<f64>,
}

impl Columns {
    fn new(cloud: &PointCloud) -> Self {
        let dim = cloud.dim();
        let n_blocks = cloud.len().div_ceil(CANDIDATE_BLOCK);
        let mut data = vec![f64::INFINITY; n_blocks * dim * CANDIDATE_BLOCK];
        for (j, p) in cloud.points().enumerate() {
            let (b, c) = (j / CANDIDATE_BLOCK, j % CANDIDATE_BLOCK);
            for (d, &x) in p.iter().enumerate() {
                data[(b * dim + d) * CANDIDATE_BLOCK + c] = x;
            }
        }
        Columns { dim, data }
    }

    fn block(&self, b: usize) -> &[f64] {
        let len = self.dim * CANDIDATE_BLOCK;
        &self.data[b * len..(b + 1) * len]
    }
}

/// Exhaustive search for a block of queries. Each distance is accumulated
/// over coordinates in the same order as `dist2`, so the values agree
/// exactly with the tree search.
fn scan(cloud: &PointCloud, columns: &Columns, queries: &[usize], best: &mut [Neighbors]) {
    // Wider vectors change no result: there is no fused multiply-add and
    // each distance is still summed in coordinate order.
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("avx512f") {
            // SAFETY: the CPU supports AVX-512F, checked just above.
            return unsafe { scan_avx512(cloud, columns, queries, best) };
        }
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            return unsafe { scan_avx2(cloud, columns, queries, best) };
        }
    }
    scan_kernel(cloud, columns, queries, best)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
fn scan_avx2(cloud: &PointCloud, columns: &Columns, queries: &[usize], best: &mut [Neighbors]) {
    scan_kernel(cloud, columns, queries, best)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f")]
fn scan_avx512(cloud: &PointCloud, columns: &Columns, queries: &[usize], best: &mut [Neighbors]) {
    scan_kernel(cloud, columns, queries, best)
}

#[inline(always)]
fn scan_kernel(cloud: &PointCloud, columns: &Columns, queries: &[usize], best: &mut [Neighbors]) {
    let n = cloud.len();
    let mut acc = [0.0f64; CANDIDATE_BLOCK];
    let mut hit = [0u32; CANDIDATE_BLOCK];
    for b in 0..n.div_ceil(CANDIDATE_BLOCK) {
        let block = columns.block(b);
        for (&i, best) in queries.iter().zip(best.iter_mut()) {
            acc.fill(0.0);
            for (&x, col) in cloud.point(i).iter().zip(block.chunks_exact(CANDIDATE_BLOCK)) {
                for (a, &y) in acc.iter_mut().zip(col) {
                    *a += (x - y) * (x - y);
                }
            }
            // Branch-free compaction of the candidates under the current
            // bound; `offer` rechecks against the bound as it tightens.
            let bound = best.bound();
            let mut hits = 0;
            for (c, &d2) in acc.iter().enumerate() {
                hit[hits] = c as u32;
                hits += (d2 <= bound) as usize;
            }
            for &c in &hit[..hits] {
                let j = b * CANDIDATE_BLOCK + c as usize;
                if j != i {
                    best.offer(acc[c as usize], j as u32);
                }
            }
        }
    }
}

enum Node {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: usize, right: usize },
}

struct KdTree {
    nodes: Vec<Node>,
    order: Vec<u32>,
}

impl KdTree {
    fn build(cloud: &PointCloud) -> Self {
        let mut tree = KdTree { nodes: Vec::new(), order: (0..cloud.len() as u32).collect() };
        let n = tree.order.len();
        tree.build_node(cloud, 0, n);
        tree
    }

    fn build_node(&mut self, cloud: &PointCloud, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let dim = (0..cloud.dim())
            .map(|d| {
                let (lo, hi) = self.order[start..end].iter().fold(
                    (f64::INFINITY, f64::NEG_INFINITY),
                    |(lo, hi), &i| {
                        let x = cloud.point(i as usize)[d];
                        (lo.min(x), hi.max(x))
                    },
                );
                (hi - lo, d)
            })
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
            .map_or(0, |(_, d)| d);
        let mid = (end - start) / 2;
        self.order[start..end].select_nth_unstable_by(mid, |&a, &b| {
            cloud.point(a as usize)[dim].total_cmp(&cloud.point(b as usize)[dim])
        });
        let value = cloud.point(self.order[start + mid] as usize)[dim];
        self.nodes.push(Node::Leaf { start: 0, end: 0 });
        let left = self.build_node(cloud, start, start + mid);
        let right = self.build_node(cloud, start + mid, end);
        self.nodes[id] = Node::Split { dim, value, left, right };
        id
    }

    fn query(&self, cloud: &PointCloud, i: usize, best: &mut Neighbors) {
        self.visit(0, cloud, i, cloud.point(i), best);
    }

    fn visit(&self, node: usize, cloud: &PointCloud, i: usize, p: &[f64], best: &mut Neighbors) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &j in &self.order[start..end] {
                    if j as usize != i {
                        best.offer(dist2(p, cloud.point(j as usize)), j);
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let delta = p[dim] - value;
                let (near, far) = if delta < 0.0 { (left, right) } else { (right, left) };
                self.visit(near, cloud, i, p, best);
                if delta * delta <= best.bound() {
                    self.visit(far, cloud, i, p, best);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::BoundingBox;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::new(1, xs.to_vec(), BoundingBox::cube(-10.0, 10.0, 1).unwrap()).unwrap()
    }

    #[test]
    fn nearest_neighbors_on_a_line() {
        let cloud = line(&[0.0, 1.0, 2.0]);
        assert_eq!(knn_graph(&cloud, 1, 1.5).unwrap().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(knn_graph(&cloud, 1, 0.5).unwrap().n_edges(), 0);
    }

    #[test]
    fn k_must_be_below_n() {
        let cloud = line(&[0.0, 1.0, 2.0]);
        assert!(matches!(knn_graph(&cloud, 3, 10.0), Err(Error::Contract(_))));
        assert_eq!(knn_graph(&line(&[0.0]), 4, 1.0).unwrap().n_edges(), 0);
    }

    #[test]
    fn tree_matches_linear_scan() {
        // Coarse coordinates so that distance ties occur.
        let coords: Vec<f64> = (0..3000u64)
            .map(|i| ((i.wrapping_mul(2654435761) % 41) as f64 / 20.0) - 1.0)
            .collect();
        let cloud = PointCloud::new(6, coords, BoundingBox::cube(-1.0, 1.0, 6).unwrap()).unwrap();
        let tree = KdTree::build(&cloud);
        let columns = Columns::new(&cloud);
        for i in 0..cloud.len() {
            let mut a = Neighbors::new(6, 0.8);
            let mut b = vec![Neighbors::new(6, 0.8)];
            tree.query(&cloud, i, &mut a);
            scan(&cloud, &columns, &[i], &mut b);
            assert_eq!(a.items, b[0].items, "point {i}");
            let brute = {
                let mut all: Vec<(f64, u32)> = (0..cloud.len())
                    .filter(|&j| j != i)
                    .map(|j| (dist2(cloud.point(i), cloud.point(j)), j as u32))
                    .filter(|e| e.0 <= 0.8)
                    .collect();
                all.sort_by(|x, y| x.partial_cmp(y).unwrap());
                all.truncate(6);
                all
            };
            assert_eq!(a.items, brute, "point {i}");
        }
    }
}
