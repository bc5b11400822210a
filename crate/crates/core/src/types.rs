//! Shared domain types: point clouds, scalar fields, neighbor graphs and
//! persistence diagrams.

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Axis-aligned box, one `(low, high)` pair per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    bounds: Vec<(f64, f64)>,
}

impl BoundingBox {
    /// Builds a box, rejecting empty, inverted or non-finite axes.
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::Config("box must have at least one axis".into()));
        }
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!(
                    "axis {axis}: invalid bounds [{lo}, {hi}], need finite low < high"
                )));
            }
        }
        Ok(BoundingBox { bounds })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        Self::new(vec![(lo, hi); dim])
    }

    /// Parses `"lo:hi,lo:hi,..."`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bounds = Vec::new();
        for part in text.split(',') {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("box axis `{part}` is not `lo:hi`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("box bound `{s}` is not a number")))
            };
            bounds.push((parse(lo)?, parse(hi)?));
        }
        Self::new(bounds)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn side(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        hi - lo
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|d| self.side(d)).product()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(&self.bounds)
                .all(|(&x, &(lo, hi))| lo <= x && x <= hi)
    }

    /// Smallest box containing every point, used when a CSV carries no box.
    /// Degenerate axes are padded by 0.5 on each side.
    pub fn enclosing(dim: usize, coords: &[f64]) -> Result<Self> {
        let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
        for point in coords.chunks_exact(dim.max(1)) {
            for (b, &x) in bounds.iter_mut().zip(point) {
                b.0 = b.0.min(x);
                b.1 = b.1.max(x);
            }
        }
        for b in &mut bounds {
            #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN bounds must fail too
            if !(b.0 < b.1) {
                let c = if b.0.is_finite() { b.0 } else { 0.0 };
                *b = (c - 0.5, c + 0.5);
            }
        }
        Self::new(bounds)
    }

    /// Renders back into the `lo:hi,...` flag syntax.
    pub fn to_flag(&self) -> String {
        self.bounds
            .iter()
            .map(|(lo, hi)| format!("{lo}:{hi}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `N` points in `R^D`, stored row-major, all inside `bbox`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    bbox: BoundingBox,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>, bbox: BoundingBox) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Contract("point cloud dimension must be positive".into()));
        }
        if bbox.dim() != dim {
            return Err(Error::Contract(format!(
                "box has {} axes but points have {dim} coordinates",
                bbox.dim()
            )));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Contract(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(i) = coords.chunks_exact(dim).position(|p| !bbox.contains(p)) {
            return Err(Error::Contract(format!("point {i} lies outside the box")));
        }
        Ok(PointCloud { dim, coords, bbox })
    }

    /// Builds a cloud from row vectors, boxed by their bounding box.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(1, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Contract("points of differing dimension".into()));
        }
        let coords: Vec<f64> = points.iter().flatten().copied().collect();
        let bbox = BoundingBox::enclosing(dim, &coords)?;
        Self::new(dim, coords, bbox)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    /// Reorders points so that new point `i` is old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        let coords = perm.iter().flat_map(|&i| self.point(i).iter().copied()).collect();
        Ok(PointCloud { dim: self.dim, coords, bbox: self.bbox.clone() })
    }
}

/// Function values aligned with a point cloud's indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index, value: values[index] });
        }
        Ok(ScalarField { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        Ok(ScalarField { values: perm.iter().map(|&i| self.values[i]).collect() })
    }

    pub fn map(&self, h: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| h(v)).collect())
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Contract(format!("permutation of length {} for {n} items", perm.len())));
    }
    for &i in perm {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Contract("not a permutation".into()));
        }
    }
    Ok(())
}

/// Vertex indices in nondecreasing value order; equal values are ordered by
/// index, so the sweep order is a total order.
pub fn sort_by_value(field: &ScalarField) -> Vec<usize> {
    // Sorting (key, index) pairs avoids chasing `values` from the comparator.
    let mut keyed: Vec<(u64, usize)> =
        field.values().iter().enumerate().map(|(i, &v)| (order_key(v), i)).collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Maps `f64` to `u64` preserving `total_cmp` order.
fn order_key(v: f64) -> u64 {
    let bits = v.to_bits();
    if bits >> 63 == 1 { !bits } else { bits | 1 << 63 }
}

/// Position of each vertex in [`sort_by_value`] order.
pub fn value_ranks(field: &ScalarField) -> Vec<u32> {
    let mut rank = vec![0u32; field.len()];
    for (r, v) in sort_by_value(field).into_iter().enumerate() {
        rank[v] = r as u32;
    }
    rank
}

/// Undirected simple graph over point indices. Edges are stored once as
/// `(u, v)` with `u < v`. Their order is whatever the builder produced
/// (deterministic, but not necessarily sorted); equality ignores it.
#[derive(Debug, Clone)]
pub struct NeighborGraph {
    n_vertices: usize,
    edges: Vec<(u32, u32)>,
}

impl NeighborGraph {
    /// Normalizes orientation, sorts and deduplicates. Self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if n_vertices > u32::MAX as usize {
            return Err(Error::Contract("too many vertices for 32-bit indices".into()));
        }
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::Contract(format!(
                    "edge ({u}, {v}) out of range for {n_vertices} vertices"
                )));
            }
            if u == v {
                return Err(Error::Contract(format!("self-loop at vertex {u}")));
            }
            out.push((u.min(v) as u32, u.max(v) as u32));
        }
        out.sort_unstable();
        out.dedup();
        Ok(NeighborGraph { n_vertices, edges: out })
    }

    /// Caller guarantees edges are `u < v` and unique.
    pub(crate) fn from_unique_unchecked(n_vertices: usize, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges.iter().all(|&(u, v)| u < v && (v as usize) < n_vertices));
        NeighborGraph { n_vertices, edges }
    }

    pub fn empty(n_vertices: usize) -> Self {
        NeighborGraph { n_vertices, edges: Vec::new() }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Edges in lexicographic order.
    pub fn sorted_edges(&self) -> Vec<(u32, u32)> {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges
    }

    /// Linear scan; build a set from [`Self::edges`] for repeated queries.
    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v) as u32, u.max(v) as u32);
        self.edges.contains(&key)
    }

    /// Adjacency lists, neighbors in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v as usize);
            adj[v as usize].push(u as usize);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Number of connected components, isolated vertices included.
    pub fn n_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut count = self.n_vertices;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    /// Relabels so that new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n_vertices)?;
        let mut inverse = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        Self::from_edges(
            self.n_vertices,
            self.edges.iter().map(|&(u, v)| (inverse[u as usize], inverse[v as usize])),
        )
    }
}

impl PartialEq for NeighborGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices
            && self.edges.len() == other.edges.len()
            && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for NeighborGraph {}

/// One interval of the degree-0 barcode: a component born at the value of
/// `min_vertex` and swallowed at the value of `saddle_vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub birth: f64,
    /// `f64::INFINITY` for components that never die; `null` in JSON.
    #[serde(serialize_with = "ser_death", deserialize_with = "de_death")]
    pub death: f64,
    pub min_vertex: usize,
    pub saddle_vertex: Option<usize>,
}

impl Bar {
    pub fn finite(birth: f64, death: f64, min_vertex: usize, saddle_vertex: usize) -> Self {
        Bar { birth, death, min_vertex, saddle_vertex: Some(saddle_vertex) }
    }

    pub fn infinite(birth: f64, min_vertex: usize) -> Self {
        Bar { birth, death: f64::INFINITY, min_vertex, saddle_vertex: None }
    }

    pub fn is_infinite(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
            .then(self.min_vertex.cmp(&other.min_vertex))
            .then(self.saddle_vertex.cmp(&other.saddle_vertex))
    }
}

fn ser_death<S: Serializer>(death: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if death.is_infinite() {
        s.serialize_none()
    } else {
        s.serialize_some(death)
    }
}

fn de_death<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// Multiset of bars, sorted by `(birth, death, min_vertex)` once canonical.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub bars: Vec<Bar>,
}

impl PersistenceDiagram {
    /// Wraps bars as given, without sorting or filtering.
    pub fn raw(bars: Vec<Bar>) -> Self {
        PersistenceDiagram { bars }
    }

    /// Canonical diagram built from arbitrary bars.
    pub fn from_bars(bars: Vec<Bar>) -> Self {
        canonicalize(PersistenceDiagram { bars })
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn finite_bars(&self) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(|b| !b.is_infinite())
    }

    pub fn infinite_bars(&self) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(|b| b.is_infinite())
    }

    pub fn n_infinite(&self) -> usize {
        self.infinite_bars().count()
    }

    /// Largest finite death, if any finite bar exists.
    pub fn highest_finite_death(&self) -> Option<f64> {
        self.finite_bars().map(|b| b.death).reduce(f64::max)
    }

    /// The `(birth, death)` multiset, sorted.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs: Vec<_> = self.bars.iter().map(|b| (b.birth, b.death)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pairs
    }

    pub fn is_canonical(&self) -> bool {
        self.bars.iter().all(|b| b.birth != b.death)
            && self.bars.windows(2).all(|w| w[0].sort_key_cmp(&w[1]) != Ordering::Greater)
    }
}

/// Drops zero-length bars and sorts by `(birth, death, min_vertex)`.
pub fn canonicalize(diagram: PersistenceDiagram) -> PersistenceDiagram {
    let mut bars = diagram.bars;
    bars.retain(|b| b.birth != b.death);
    bars.sort_by(Bar::sort_key_cmp);
    PersistenceDiagram { bars }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bar(b: f64, d: f64) -> Bar {
        Bar { birth: b, death: d, min_vertex: 0, saddle_vertex: None }
    }

    #[test]
    fn canonicalize_examples() {
        assert!(canonicalize(PersistenceDiagram::default()).is_empty());

        let dup = PersistenceDiagram::raw(vec![bar(0.0, 2.0), bar(0.0, 2.0)]);
        assert_eq!(canonicalize(dup.clone()), dup);

        let diag = PersistenceDiagram::raw(vec![bar(1.0, 1.0), bar(0.0, f64::INFINITY)]);
        assert_eq!(canonicalize(diag).bars, vec![bar(0.0, f64::INFINITY)]);
    }

    #[test]
    fn sort_by_value_examples() {
        let order = |v: Vec<f64>| sort_by_value(&ScalarField::new(v).unwrap());
        assert_eq!(order(vec![3.0, 1.0, 2.0]), vec![1, 2, 0]);
        assert_eq!(order(vec![5.0, 5.0]), vec![0, 1]);
        assert!(order(vec![]).is_empty());
    }

    #[test]
    fn box_parsing() {
        let b = BoundingBox::parse("-2:2, -1.5:1.5").unwrap();
        assert_eq!(b.bounds(), &[(-2.0, 2.0), (-1.5, 1.5)]);
        assert_eq!(b.volume(), 12.0);
        assert!(matches!(BoundingBox::parse("1:0"), Err(Error::Config(_))));
        assert!(matches!(BoundingBox::parse("0-1"), Err(Error::Config(_))));
    }

    #[test]
    fn cloud_rejects_points_outside_box() {
        let bbox = BoundingBox::cube(0.0, 1.0, 2).unwrap();
        assert!(PointCloud::new(2, vec![0.5, 0.5, 1.0, 0.0], bbox.clone()).is_ok());
        assert!(PointCloud::new(2, vec![0.5, 1.5], bbox.clone()).is_err());
        assert!(PointCloud::new(2, vec![0.5], bbox).is_err());
    }

    #[test]
    fn field_rejects_non_finite() {
        let err = ScalarField::new(vec![0.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 1, .. }));
    }

    #[test]
    fn graph_normalizes_edges() {
        let g = NeighborGraph::from_edges(4, [(2, 1), (1, 2), (0, 3)]).unwrap();
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
        assert_eq!(g.n_components(), 2);
        assert!(NeighborGraph::from_edges(2, [(1, 1)]).is_err());
        assert!(NeighborGraph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn diagram_json_uses_null_for_infinity() {
        let d = PersistenceDiagram::from_bars(vec![
            Bar::infinite(-1.0, 3),
            Bar::finite(0.0, 2.0, 1, 2),
        ]);
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"bars":[{"birth":-1.0,"death":null,"min_vertex":3,"saddle_vertex":null},{"birth":0.0,"death":2.0,"min_vertex":1,"saddle_vertex":2}]}"#
        );
        let back: PersistenceDiagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }

    fn arb_bar() -> impl Strategy<Value = Bar> {
        (0i32..6, 0i32..6, 0usize..4, any::<bool>()).prop_map(|(b, d, v, inf)| Bar {
            birth: b as f64,
            death: if inf { f64::INFINITY } else { d as f64 },
            min_vertex: v,
            saddle_vertex: None,
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(bars in prop::collection::vec(arb_bar(), 0..12)) {
            let once = canonicalize(PersistenceDiagram::raw(bars));
            prop_assert!(once.is_canonical());
            prop_assert_eq!(canonicalize(once.clone()), once);
        }

        #[test]
        fn canonicalize_ignores_input_order(
            bars in prop::collection::vec(arb_bar(), 0..12),
            seed in any::<u64>(),
        ) {
            let mut shuffled = bars.clone();
            let n = shuffled.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(
                canonicalize(PersistenceDiagram::raw(bars)),
                canonicalize(PersistenceDiagram::raw(shuffled))
            );
        }

        #[test]
        fn sort_by_value_is_a_permutation(values in prop::collection::vec(-3i32..3, 0..40)) {
            let field = ScalarField::new(values.iter().map(|&v| v as f64).collect()).unwrap();
            let order = sort_by_value(&field);
            let mut seen = order.clone();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..values.len()).collect::<Vec<_>>());
            for w in order.windows(2) {
                prop_assert!((values[w[0]], w[0]) < (values[w[1]], w[1]));
            }
        }
    }
}
