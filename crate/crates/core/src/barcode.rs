//! Degree-0 barcode of a function on a graph by a sweep over vertices in
//! value order, tracking sublevel components with a union-find.
//!
//! When vertex `v` is added, the components containing its lower neighbors
//! are collected. None: `v` starts a new component (a local minimum). One:
//! `v` joins it. Several: `v` is a saddle; the component with the lowest
//! minimum survives and each other component emits `[its minimum, f(v)]`.
//! Components alive at the end emit infinite bars.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{
    canonicalize, sort_by_value, value_ranks, Bar, NeighborGraph, PersistenceDiagram, PointCloud,
    ScalarField,
};

/// Disjoint-set forest that also tracks each component's minimum vertex, as
/// designated by the caller on every union.
#[derive(Debug, Clone)]
pub struct ComponentState {
    parent: Vec<u32>,
    size: Vec<u32>,
    min_vertex: Vec<u32>,
}

impl ComponentState {
    pub fn new(n: usize) -> Self {
        ComponentState {
            parent: identity(n),
            size: huge_vec(n, 1),
            min_vertex: identity(n),
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Minimum vertex of the component rooted at `root`.
    pub fn component_min(&self, root: u32) -> u32 {
        self.min_vertex[root as usize]
    }

    /// Merges two roots by size; the new root keeps `min_vertex`, which the
    /// caller chooses.
    fn union_roots(&mut self, a: u32, b: u32, min_vertex: u32) -> u32 {
        let (big, small) = if self.size[a as usize] >= self.size[b as usize] { (a, b) } else { (b, a) };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        self.min_vertex[big as usize] = min_vertex;
        big
    }
}

/// Lower neighbors of every vertex in compressed-row form. Vertices are
/// relabeled in order of first appearance in the edge list; builders emit
/// edges in spatial order, so neighbors get nearby labels.
struct LowerNeighbors {
    /// Original index of each label.
    original: Vec<u32>,
    /// Sweep rank of each label.
    rank: Vec<u32>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl LowerNeighbors {
    fn new(graph: &NeighborGraph, rank_of: &[u32]) -> Self {
        let n = graph.n_vertices();
        let mut label = huge_vec(n, u32::MAX);
        let mut original = huge_vec(n, 0u32);
        original.clear();
        let mut rank = huge_vec(n, 0u32);
        rank.clear();
        let mut offsets = huge_vec(n + 1, 0u32);
        let mut relabel = |w: u32, original: &mut Vec<u32>, rank: &mut Vec<u32>| {
            let slot = &mut label[w as usize];
            if *slot == u32::MAX {
                *slot = original.len() as u32;
                original.push(w);
                rank.push(rank_of[w as usize]);
            }
            *slot
        };
        for &(u, v) in graph.edges() {
            let (a, b) = (relabel(u, &mut original, &mut rank), relabel(v, &mut original, &mut rank));
            let hi = if rank[a as usize] > rank[b as usize] { a } else { b };
            offsets[hi as usize + 1] += 1;
        }
        for w in 0..n as u32 {
            relabel(w, &mut original, &mut rank);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let ordered = |&(u, v): &(u32, u32)| {
            let (a, b) = (label[u as usize], label[v as usize]);
            if rank[a as usize] > rank[b as usize] { (a, b) } else { (b, a) }
        };
        let mut fill = huge_vec(n + 1, 0u32);
        fill.copy_from_slice(&offsets);
        let mut targets = huge_vec(graph.n_edges(), 0u32);
        for e in graph.edges() {
            let (hi, lo) = ordered(e);
            targets[fill[hi as usize] as usize] = lo;
            fill[hi as usize] += 1;
        }
        LowerNeighbors { original, rank, offsets, targets }
    }

    fn of(&self, x: usize) -> &[u32] {
        &self.targets[self.offsets[x] as usize..self.offsets[x + 1] as usize]
    }
}

fn identity(n: usize) -> Vec<u32> {
    let mut v = huge_vec(n, 0u32);
    for (i, x) in v.iter_mut().enumerate() {
        *x = i as u32;
    }
    v
}

/// `vec![value; len]`, but large buffers ask the kernel for huge pages
/// before first touch. The CSR fill and the sweep access these arrays at
/// random, and at a million vertices TLB misses dominate otherwise.
fn huge_vec<T: Copy>(len: usize, value: T) -> Vec<T> {
    #[cfg(target_os = "linux")]
    {
        const HUGE: usize = 2 << 20;
        let size = std::mem::size_of::<T>().max(1);
        if len * size >= 2 * HUGE {
            let mut v: Vec<T> = Vec::with_capacity(len + HUGE / size);
            let base = v.as_mut_ptr() as usize;
            let start = (base + HUGE - 1) & !(HUGE - 1);
            let end = (base + v.capacity() * size) & !(HUGE - 1);
            // SAFETY: [start, end) lies inside the allocation owned by `v`,
            // and MADV_HUGEPAGE is advisory; it changes no contents and a
            // failure leaves ordinary pages in place.
            unsafe {
                libc::madvise(start as *mut libc::c_void, end - start, libc::MADV_HUGEPAGE);
            }
            v.resize(len, value);
            return v;
        }
    }
    vec![value; len]
}

/// Barcode of minima of `field` on `graph`, canonicalized.
pub fn compute_barcode(graph: &NeighborGraph, field: &ScalarField) -> Result<PersistenceDiagram> {
    let n = graph.n_vertices();
    if field.len() != n {
        return Err(Error::Contract(format!(
            "field has {} values for {n} vertices",
            field.len()
        )));
    }
    let values = field.values();
    let order = sort_by_value(field);
    let mut rank = huge_vec(n, 0u32);
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r as u32;
    }
    let lower = LowerNeighbors::new(graph, &rank);
    let mut sweep = rank;
    for (x, &r) in lower.rank.iter().enumerate() {
        sweep[r as usize] = x as u32;
    }

    // Union-find runs on labels; a component's minimum is its lowest-rank
    // label.
    let mut state = ComponentState::new(n);
    let mut bars = Vec::new();
    let mut roots: Vec<u32> = Vec::new();
    let min_rank = |state: &ComponentState, root: u32| lower.rank[state.component_min(root) as usize];

    for &x in &sweep {
        roots.clear();
        for &u in lower.of(x as usize) {
            let root = state.find(u);
            if !roots.contains(&root) {
                roots.push(root);
            }
        }
        if roots.is_empty() {
            continue;
        }
        let survivor = *roots.iter().min_by_key(|&&root| min_rank(&state, root)).expect("nonempty");
        let keep_min = state.component_min(survivor);
        let v = lower.original[x as usize] as usize;
        let death = values[v];
        for &root in &roots {
            if root == survivor {
                continue;
            }
            let m = lower.original[state.component_min(root) as usize] as usize;
            if values[m] < death {
                bars.push(Bar::finite(values[m], death, m, v));
            }
        }
        let mut acc = state.union_roots(survivor, x, keep_min);
        for &root in &roots {
            if root != survivor {
                acc = state.union_roots(acc, root, keep_min);
            }
        }
    }

    for x in 0..n as u32 {
        if state.find(x) == x {
            let m = lower.original[state.component_min(x) as usize] as usize;
            bars.push(Bar::infinite(values[m], m));
        }
    }
    Ok(canonicalize(PersistenceDiagram::raw(bars)))
}

/// A finite bar resolved to coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimumSaddlePair {
    pub min_vertex: usize,
    pub saddle_vertex: usize,
    pub min_point: Vec<f64>,
    pub saddle_point: Vec<f64>,
    pub birth: f64,
    pub death: f64,
}

/// One entry per finite bar, with the coordinates of its minimum and saddle.
pub fn minima_saddle_pairs(
    diagram: &PersistenceDiagram,
    cloud: &PointCloud,
) -> Result<Vec<MinimumSaddlePair>> {
    let n = cloud.len();
    diagram
        .finite_bars()
        .map(|bar| {
            let saddle = bar
                .saddle_vertex
                .ok_or_else(|| Error::Contract("finite bar without saddle vertex".into()))?;
            if bar.min_vertex >= n || saddle >= n {
                return Err(Error::Contract(format!(
                    "bar vertices ({}, {saddle}) out of range for {n} points",
                    bar.min_vertex
                )));
            }
            Ok(MinimumSaddlePair {
                min_vertex: bar.min_vertex,
                saddle_vertex: saddle,
                min_point: cloud.point(bar.min_vertex).to_vec(),
                saddle_point: cloud.point(saddle).to_vec(),
                birth: bar.birth,
                death: bar.death,
            })
        })
        .collect()
}

/// Vertices with no strictly lower neighbor in sweep order.
pub fn local_minima(graph: &NeighborGraph, field: &ScalarField) -> Vec<usize> {
    let rank = value_ranks(field);
    let mut has_lower = vec![false; graph.n_vertices()];
    for &(u, v) in graph.edges() {
        let (u, v) = (u as usize, v as usize);
        if rank[u] < rank[v] {
            has_lower[v] = true;
        } else {
            has_lower[u] = true;
        }
    }
    (0..graph.n_vertices()).filter(|&v| !has_lower[v]).collect()
}

/// Minimax value from `p` to any vertex below it in sweep order: the least
/// height `c` such that `p` reaches a lower vertex using only vertices with
/// value `<= c`.
///
/// Computed by breadth-first search at each candidate height in turn,
/// without union-find, so it can check [`compute_barcode`].
pub fn minimax_saddle_oracle(graph: &NeighborGraph, field: &ScalarField, p: usize) -> Result<f64> {
    let n = graph.n_vertices();
    if field.len() != n || p >= n {
        return Err(Error::Contract(format!("vertex {p} or field length out of range")));
    }
    let values = field.values();
    let below = |u: usize| (values[u], u) < (values[p], p);
    let adj = graph.adjacency();
    if adj[p].iter().any(|&u| below(u)) {
        return Err(Error::Contract(format!("vertex {p} is not a local minimum")));
    }
    let mut levels: Vec<f64> = values.iter().copied().filter(|&v| v >= values[p]).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for level in levels {
        seen.iter_mut().for_each(|s| *s = false);
        queue.clear();
        seen[p] = true;
        queue.push_back(p);
        while let Some(u) = queue.pop_front() {
            if below(u) {
                return Ok(level);
            }
            for &w in &adj[u] {
                if !seen[w] && values[w] <= level {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    Err(Error::NoLowerMinimum(p))
}
