//! Random graphs, fields and diagrams shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sublevel_barcodes::{Bar, NeighborGraph, PersistenceDiagram, ScalarField};

#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Geometric,
    Tree,
    Cycle,
}

pub const SHAPES: [Shape; 3] = [Shape::Geometric, Shape::Tree, Shape::Cycle];

/// A random graph on `n` vertices. Geometric graphs join points of the unit
/// square closer than a random radius; trees attach each vertex to an earlier
/// one and are then relabeled; cycles get a few random chords.
pub fn random_graph(rng: &mut impl Rng, shape: Shape, n: usize) -> NeighborGraph {
    let mut edges = Vec::new();
    match shape {
        Shape::Geometric => {
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            let r: f64 = rng.gen_range(0.05..0.4);
            for i in 0..n {
                for j in i + 1..n {
                    let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
                    if dx * dx + dy * dy < r * r {
                        edges.push((i, j));
                    }
                }
            }
        }
        Shape::Tree => {
            let mut label: Vec<usize> = (0..n).collect();
            label.shuffle(rng);
            for i in 1..n {
                edges.push((label[i], label[rng.gen_range(0..i)]));
            }
        }
        Shape::Cycle => {
            if n >= 3 {
                edges.extend((0..n).map(|i| (i, (i + 1) % n)));
                for _ in 0..rng.gen_range(0..=n / 10) {
                    let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    if u != v {
                        edges.push((u, v));
                    }
                }
            } else if n == 2 {
                edges.push((0, 1));
            }
        }
    }
    NeighborGraph::from_edges(n, edges).unwrap()
}

/// Values either continuous or drawn from a handful of levels, so that ties
/// are common.
pub fn random_field(rng: &mut impl Rng, n: usize) -> ScalarField {
    let values = if rng.gen_bool(0.3) {
        let levels = rng.gen_range(1..=6);
        (0..n).map(|_| rng.gen_range(0..levels) as f64).collect()
    } else {
        (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
    };
    ScalarField::new(values).unwrap()
}

pub fn distinct_field(rng: &mut impl Rng, n: usize) -> ScalarField {
    let mut values: Vec<f64> = (0..n).map(|i| i as f64 * 0.5 - 3.0).collect();
    values.shuffle(rng);
    ScalarField::new(values).unwrap()
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize) -> (NeighborGraph, ScalarField) {
    let n = rng.gen_range(1..=max_n);
    let shape = *SHAPES.choose(rng).unwrap();
    (random_graph(rng, shape, n), random_field(rng, n))
}

/// Random canonical diagram. Values sit on a coarse grid so that equal
/// costs and ties between candidate distances occur.
pub fn random_diagram(rng: &mut impl Rng, max_finite: usize, max_infinite: usize) -> PersistenceDiagram {
    let mut bars = Vec::new();
    let coarse = rng.gen_bool(0.5);
    let value = |rng: &mut dyn rand::RngCore| {
        if coarse {
            rng.gen_range(0..8) as f64 * 0.5
        } else {
            rng.gen_range(-5.0..5.0)
        }
    };
    for i in 0..rng.gen_range(0..=max_finite) {
        let b = value(rng);
        let d = b + rng.gen_range(0.125..4.0);
        bars.push(Bar::finite(b, d, i, i));
    }
    for i in 0..rng.gen_range(0..=max_infinite) {
        bars.push(Bar::infinite(value(rng), 100 + i));
    }
    PersistenceDiagram::from_bars(bars)
}

pub fn brute_force_edges(points: &[Vec<f64>], r: f64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 <= r * r {
                out.push((i as u32, j as u32));
            }
        }
    }
    out
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sublevel_barcodes::graph::build_graph;
use sublevel_barcodes::{compute_barcode, evaluate, sample_uniform, Benchmark, GraphSpec, PointCloud, SampleSpec};

/// Relabels a random instance and compares the `(birth, death)` multisets.
pub fn check_relabeling(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (graph, field) = random_instance(&mut rng, 200);
    let mut perm: Vec<usize> = (0..graph.n_vertices()).collect();
    perm.shuffle(&mut rng);
    let a = compute_barcode(&graph, &field).unwrap().pairs();
    let b = compute_barcode(&graph.permuted(&perm).unwrap(), &field.permuted(&perm).unwrap()).unwrap().pairs();
    if a == b {
        Ok(())
    } else {
        Err(format!("seed {seed}: {a:?} != {b:?}"))
    }
}

/// Applies an increasing map to the field; bars map through it with the same
/// minimum and saddle vertices.
pub fn check_reparameterization(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (graph, field) = random_instance(&mut rng, 200);
    let scale = rng.gen_range(0.1..3.0);
    // Values lie in [-10, 10], where this keeps distinct values apart.
    let h = |v: f64| scale * (0.25 * v).exp();
    let base = compute_barcode(&graph, &field).unwrap();
    let moved = compute_barcode(&graph, &field.map(h).unwrap()).unwrap();
    type Key = (usize, Option<usize>, f64, f64);
    let mut expected: Vec<Key> = base
        .bars
        .iter()
        .map(|b| (b.min_vertex, b.saddle_vertex, h(b.birth), if b.is_infinite() { b.death } else { h(b.death) }))
        .collect();
    let mut got: Vec<Key> = moved.bars.iter().map(|b| (b.min_vertex, b.saddle_vertex, b.birth, b.death)).collect();
    expected.sort_by_key(|k| k.0);
    got.sort_by_key(|k| k.0);
    if expected == got {
        Ok(())
    } else {
        Err(format!("seed {seed}: {expected:?} != {got:?}"))
    }
}

/// Maps a Wavy sample through each reflection of the square; the function
/// values and the barcode stay the same.
pub fn check_wavy_symmetry(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = Benchmark::Wavy;
    let n = rng.gen_range(100..3000);
    let cloud = sample_uniform(&SampleSpec { bbox: f.default_box(), n_points: n, seed }).unwrap();
    let spec = GraphSpec::for_dim(2);
    let barcode = |c: &PointCloud| {
        compute_barcode(&build_graph(c, &spec).unwrap(), &evaluate(&f, c).unwrap()).unwrap().pairs()
    };
    let base = barcode(&cloud);
    let maps: [fn(f64, f64) -> [f64; 2]; 4] = [|x, y| [y, x], |x, y| [-x, y], |x, y| [x, -y], |x, y| [-y, -x]];
    for (m, g) in maps.iter().enumerate() {
        let coords: Vec<f64> = cloud.points().flat_map(|p| g(p[0], p[1])).collect();
        let moved = PointCloud::new(2, coords, f.default_box()).unwrap();
        for (p, q) in cloud.points().zip(moved.points()) {
            let (a, b) = (f.eval_checked(p).unwrap(), f.eval_checked(q).unwrap());
            if (a - b).abs() > 1e-15 {
                return Err(format!("seed {seed}, map {m}: f{p:?} = {a} but f{q:?} = {b}"));
            }
        }
        if barcode(&moved) != base {
            return Err(format!("seed {seed}, map {m}: barcodes differ"));
        }
    }
    Ok(())
}
