//! Bottleneck distance between persistence diagrams.
//!
//! Finite points use the L-infinity ground metric and may be matched to the
//! diagonal at cost `(death - birth) / 2`. Infinite bars are matched among
//! themselves on their births; if the two diagrams have different numbers of
//! infinite bars the distance is `+inf`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::types::PersistenceDiagram;

/// Above this many cross pairs, candidate values are not enumerated; the
/// search runs over the ordered bit patterns of non-negative `f64` instead,
/// which finds the same least feasible value.
const MAX_ENUMERATED_CANDIDATES: usize = 1 << 18;

/// Finite and infinite parts of the two diagrams.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingProblem {
    pub left: Vec<(f64, f64)>,
    pub right: Vec<(f64, f64)>,
    pub left_inf: Vec<f64>,
    pub right_inf: Vec<f64>,
}

impl MatchingProblem {
    pub fn new(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Self {
        let split = |d: &PersistenceDiagram| {
            let finite: Vec<(f64, f64)> =
                d.finite_bars().filter(|b| b.death > b.birth).map(|b| (b.birth, b.death)).collect();
            let mut inf: Vec<f64> = d.infinite_bars().map(|b| b.birth).collect();
            inf.sort_by(f64::total_cmp);
            (finite, inf)
        };
        let (left, left_inf) = split(d1);
        let (right, right_inf) = split(d2);
        MatchingProblem { left, right, left_inf, right_inf }
    }

    /// Optimal cost of the infinite part: sorted births matched in order.
    fn infinite_cost(&self) -> f64 {
        if self.left_inf.len() != self.right_inf.len() {
            return f64::INFINITY;
        }
        self.left_inf.iter().zip(&self.right_inf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[inline]
fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

#[inline]
fn diagonal_cost(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

/// Exact bottleneck distance.
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let problem = MatchingProblem::new(d1, d2);
    let inf_part = problem.infinite_cost();
    if inf_part.is_infinite() {
        return f64::INFINITY;
    }
    inf_part.max(finite_bottleneck(&problem.left, &problem.right))
}

fn finite_bottleneck(left: &[(f64, f64)], right: &[(f64, f64)]) -> f64 {
    if left.is_empty() && right.is_empty() {
        return 0.0;
    }
    let checker = Feasibility::new(left, right);
    // Everything to the diagonal is always a valid matching.
    let upper = left.iter().chain(right).copied().map(diagonal_cost).fold(0.0, f64::max);

    if left.len().saturating_mul(right.len()) <= MAX_ENUMERATED_CANDIDATES {
        let mut candidates: Vec<f64> = left
            .iter()
            .flat_map(|&a| right.iter().map(move |&b| linf(a, b)))
            .chain(left.iter().chain(right).copied().map(diagonal_cost))
            .filter(|&c| c <= upper)
            .collect();
        candidates.push(0.0);
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        // Least feasible candidate; the last one (`upper`) is always feasible.
        let (mut lo, mut hi) = (0usize, candidates.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if checker.feasible(candidates[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        candidates[lo]
    } else {
        // Non-negative floats are ordered like their bit patterns.
        let (mut lo, mut hi) = (0u64, upper.to_bits());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if checker.feasible(f64::from_bits(mid)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        f64::from_bits(lo)
    }
}

/// Decides whether a matching of cost `<= delta` exists.
///
/// A point whose diagonal cost exceeds `delta` is heavy and must be matched
/// to a point of the other diagram. By the Mendelsohn-Dulmage theorem a
/// matching covering the heavy points of both sides exists iff one covers
/// the heavy left points and one covers the heavy right points; light
/// points left over go to the diagonal.
struct Feasibility<'a> {
    left: &'a [(f64, f64)],
    right: &'a [(f64, f64)],
    /// Right indices sorted by birth, for range scans.
    right_by_birth: Vec<usize>,
    left_by_birth: Vec<usize>,
}

impl<'a> Feasibility<'a> {
    fn new(left: &'a [(f64, f64)], right: &'a [(f64, f64)]) -> Self {
        let sorted = |pts: &[(f64, f64)]| {
            let mut idx: Vec<usize> = (0..pts.len()).collect();
            idx.sort_by(|&a, &b| pts[a].0.total_cmp(&pts[b].0));
            idx
        };
        Feasibility { right_by_birth: sorted(right), left_by_birth: sorted(left), left, right }
    }

    fn feasible(&self, delta: f64) -> bool {
        covers_heavy(self.left, self.right, &self.right_by_birth, delta)
            && covers_heavy(self.right, self.left, &self.left_by_birth, delta)
    }
}

/// True iff every heavy point of `from` can be matched into `to` within
/// `delta`.
fn covers_heavy(from: &[(f64, f64)], to: &[(f64, f64)], to_by_birth: &[usize], delta: f64) -> bool {
    let heavy: Vec<usize> = (0..from.len()).filter(|&i| diagonal_cost(from[i]) > delta).collect();
    if heavy.len() > to.len() {
        return false;
    }
    if heavy.is_empty() {
        return true;
    }
    let adjacency: Vec<Vec<usize>> = heavy
        .iter()
        .map(|&i| {
            let a = from[i];
            let start = to_by_birth.partition_point(|&j| to[j].0 < a.0 - delta);
            to_by_birth[start..]
                .iter()
                .take_while(|&&j| to[j].0 <= a.0 + delta)
                .filter(|&&j| linf(a, to[j]) <= delta)
                .copied()
                .collect()
        })
        .collect();
    if adjacency.iter().any(Vec::is_empty) {
        return false;
    }
    hopcroft_karp(&adjacency, to.len()) == heavy.len()
}

/// Maximum matching size of a bipartite graph given as left adjacency lists.
fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    const NONE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_left = vec![NONE; n_left];
    let mut match_right = vec![NONE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut matched = 0;

    // Greedy start.
    for u in 0..n_left {
        if let Some(&v) = adj[u].iter().find(|&&v| match_right[v] == NONE) {
            match_left[u] = v;
            match_right[v] = u;
            matched += 1;
        }
    }

    loop {
        let mut queue = VecDeque::new();
        let mut found = false;
        for u in 0..n_left {
            if match_left[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }

        // Iterative DFS along layered augmenting paths.
        let mut next_edge = vec![0usize; n_left];
        for root in 0..n_left {
            if match_left[root] != NONE {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&u) = stack.last() {
                if next_edge[u] >= adj[u].len() {
                    dist[u] = NONE;
                    stack.pop();
                    continue;
                }
                let v = adj[u][next_edge[u]];
                next_edge[u] += 1;
                let w = match_right[v];
                if w == NONE {
                    // Augment along the stack.
                    let mut v = v;
                    while let Some(u) = stack.pop() {
                        let prev = match_left[u];
                        match_left[u] = v;
                        match_right[v] = u;
                        v = prev;
                    }
                    matched += 1;
                    break;
                } else if dist[w] == dist[u] + 1 {
                    stack.push(w);
                }
            }
        }
    }
}

/// Maximum combined finite-point count accepted by [`bottleneck_bruteforce`].
pub const BRUTEFORCE_MAX_FINITE: usize = 8;
/// Maximum infinite bars per diagram accepted by [`bottleneck_bruteforce`].
pub const BRUTEFORCE_MAX_INFINITE: usize = 6;

/// Bottleneck distance by enumerating every partial matching. Test oracle.
pub fn bottleneck_bruteforce(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    let p = MatchingProblem::new(d1, d2);
    if p.left.len() + p.right.len() > BRUTEFORCE_MAX_FINITE {
        return Err(Error::OracleScope(format!(
            "{} finite points, limit {BRUTEFORCE_MAX_FINITE}",
            p.left.len() + p.right.len()
        )));
    }
    if p.left_inf.len().max(p.right_inf.len()) > BRUTEFORCE_MAX_INFINITE {
        return Err(Error::OracleScope("too many infinite bars".into()));
    }
    if p.left_inf.len() != p.right_inf.len() {
        return Ok(f64::INFINITY);
    }

    let mut best_inf = f64::INFINITY;
    permutations(p.right_inf.len(), &mut |perm| {
        let cost = p
            .left_inf
            .iter()
            .zip(perm)
            .map(|(a, &j)| (a - p.right_inf[j]).abs())
            .fold(0.0, f64::max);
        best_inf = best_inf.min(cost);
    });

    let mut used = vec![false; p.right.len()];
    let finite = enumerate_matchings(&p.left, &p.right, 0, &mut used, 0.0);
    Ok(best_inf.max(finite))
}

/// Best cost over matchings of `left[i..]`; each point goes to an unused
/// right point or to the diagonal. Unused right points go to the diagonal.
fn enumerate_matchings(
    left: &[(f64, f64)],
    right: &[(f64, f64)],
    i: usize,
    used: &mut [bool],
    so_far: f64,
) -> f64 {
    if i == left.len() {
        return right
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .map(|(&b, _)| diagonal_cost(b))
            .fold(so_far, f64::max);
    }
    let mut best = enumerate_matchings(left, right, i + 1, used, so_far.max(diagonal_cost(left[i])));
    for j in 0..right.len() {
        if !used[j] {
            used[j] = true;
            let cost = so_far.max(linf(left[i], right[j]));
            best = best.min(enumerate_matchings(left, right, i + 1, used, cost));
            used[j] = false;
        }
    }
    best
}

fn permutations(n: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(k: usize, perm: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if k == perm.len() {
            visit(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, visit);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    rec(0, &mut perm, visit);
}
