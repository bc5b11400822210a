//! Filtered chain complex of a graph (vertices in degree 0, edges in degree
//! 1) and its canonical form by column elimination over GF(2).
//!
//! This is the slow reference path used to cross-check
//! [`crate::barcode::compute_barcode`]; it is quadratic in the worst case.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::types::{canonicalize, sort_by_value, Bar, NeighborGraph, PersistenceDiagram, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredEdge {
    pub u: usize,
    pub v: usize,
    pub value: f64,
}

/// Bases of the 0- and 1-chains in filtration order.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    /// Filtration value of each vertex, indexed by vertex id.
    pub vertex_filtration: Vec<f64>,
    /// Vertex ids in basis order: by `(value, id)`.
    pub vertex_order: Vec<usize>,
    /// Edges in basis order: by value, then by the basis positions of the
    /// later and the earlier endpoint.
    pub edges: Vec<FilteredEdge>,
}

/// Canonical form of the boundary map.
///
/// Basis elements are referred to by their position in the complex's basis
/// order: `vertex_order` for degree 0, `edges` for degree 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CanonicalForm {
    /// `(killed vertex position, killing edge position)`.
    pub pairs: Vec<(usize, usize)>,
    /// Vertex positions never hit by a reduced boundary.
    pub survivors: Vec<usize>,
    /// Edge positions whose boundary reduces to zero (cycles).
    pub unpaired_edges: Vec<usize>,
}

pub fn build_filtered_complex(graph: &NeighborGraph, field: &ScalarField) -> Result<FilteredComplex> {
    if graph.n_vertices() != field.len() {
        return Err(Error::Contract(format!(
            "field has {} values for {} vertices",
            field.len(),
            graph.n_vertices()
        )));
    }
    let values = field.values();
    let vertex_order = sort_by_value(field);
    let mut position = vec![0usize; values.len()];
    for (pos, &v) in vertex_order.iter().enumerate() {
        position[v] = pos;
    }
    let mut keyed: Vec<(usize, usize, FilteredEdge)> = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (u, v) = (u as usize, v as usize);
            let (hi, lo) = if position[u] > position[v] { (u, v) } else { (v, u) };
            let edge = FilteredEdge { u, v, value: values[u].max(values[v]) };
            (position[hi], position[lo], edge)
        })
        .collect();
    keyed.sort_by(|a, b| a.2.value.total_cmp(&b.2.value).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    Ok(FilteredComplex {
        vertex_filtration: values.to_vec(),
        vertex_order,
        edges: keyed.into_iter().map(|(_, _, e)| e).collect(),
    })
}

impl FilteredComplex {
    fn validate(&self) -> Result<Vec<usize>> {
        let n = self.vertex_filtration.len();
        if self.vertex_order.len() != n {
            return Err(Error::Contract("vertex order does not cover every vertex".into()));
        }
        let mut position = vec![usize::MAX; n];
        for (pos, &v) in self.vertex_order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::Contract("vertex order is not a permutation".into()));
            }
            position[v] = pos;
        }
        for w in self.vertex_order.windows(2) {
            if self.vertex_filtration[w[0]] > self.vertex_filtration[w[1]] {
                return Err(Error::Contract("vertex order is not filtration-compatible".into()));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(Error::Contract(format!("edge {i} has invalid endpoints")));
            }
            if e.value < self.vertex_filtration[e.u] || e.value < self.vertex_filtration[e.v] {
                return Err(Error::Contract(format!(
                    "edge {i} enters at {} before one of its endpoints",
                    e.value
                )));
            }
        }
        if self.edges.windows(2).any(|w| w[0].value > w[1].value) {
            return Err(Error::Contract("edge order is not filtration-compatible".into()));
        }
        Ok(position)
    }
}

/// Column elimination over GF(2), edges in basis order.
///
/// Each edge's boundary is a set of vertex positions. While its largest
/// element is already the pivot of an earlier column, that column is added.
/// A boundary that empties marks a cycle; otherwise its largest element is
/// killed by the edge.
pub fn canonical_form(complex: &FilteredComplex) -> Result<CanonicalForm> {
    let position = complex.validate()?;
    let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(complex.edges.len());
    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
    let mut form = CanonicalForm::default();

    for (j, edge) in complex.edges.iter().enumerate() {
        let (a, b) = (position[edge.u], position[edge.v]);
        let mut column = if a < b { vec![a, b] } else { vec![b, a] };
        while let Some(&low) = column.last() {
            match pivot_owner.get(&low) {
                Some(&owner) => column = symmetric_difference(&column, &reduced[owner]),
                None => break,
            }
        }
        match column.last() {
            Some(&low) => {
                pivot_owner.insert(low, j);
                form.pairs.push((low, j));
            }
            None => form.unpaired_edges.push(j),
        }
        reduced.push(column);
    }
    form.survivors = (0..complex.vertex_order.len()).filter(|p| !pivot_owner.contains_key(p)).collect();
    Ok(form)
}

/// Sorted-set XOR.
fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Reads the degree-0 diagram off a canonical form.
pub fn degree0_barcode(cf: &CanonicalForm, complex: &FilteredComplex) -> PersistenceDiagram {
    let position: HashMap<usize, usize> =
        complex.vertex_order.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let value = |v: usize| complex.vertex_filtration[v];
    let mut bars = Vec::with_capacity(cf.pairs.len() + cf.survivors.len());
    for &(killed, edge) in &cf.pairs {
        let v = complex.vertex_order[killed];
        let e = complex.edges[edge];
        let saddle = if position[&e.u] > position[&e.v] { e.u } else { e.v };
        bars.push(Bar::finite(value(v), e.value, v, saddle));
    }
    for &s in &cf.survivors {
        let v = complex.vertex_order[s];
        bars.push(Bar::infinite(value(v), v));
    }
    canonicalize(PersistenceDiagram::raw(bars))
}

/// Births of the degree-1 classes (cycles of the graph), in basis order.
pub fn degree1_births(cf: &CanonicalForm, complex: &FilteredComplex) -> Vec<f64> {
    cf.unpaired_edges.iter().map(|&j| complex.edges[j].value).collect()
}

/// Full reference pipeline: complex, canonical form, degree-0 diagram.
pub fn oracle_barcode(graph: &NeighborGraph, field: &ScalarField) -> Result<PersistenceDiagram> {
    let complex = build_filtered_complex(graph, field)?;
    let cf = canonical_form(&complex)?;
    Ok(degree0_barcode(&cf, &complex))
}
