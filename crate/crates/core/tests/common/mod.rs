//! Independent oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use num_complex::Complex64;
use persym::{Cornerpoint, FilteredGraph, PersistenceDiagram};
use rand::seq::SliceRandom;
use rand::Rng;

/// Elementary symmetric functions by enumerating every subset.
pub fn subset_elementary(values: &[Complex64], k: usize) -> Vec<Complex64> {
    let m = values.len();
    let mut e = vec![Complex64::new(0.0, 0.0); k];
    for mask in 1u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size > k {
            continue;
        }
        let product = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .fold(Complex64::new(1.0, 0.0), |acc, i| acc * values[i]);
        e[size - 1] += product;
    }
    e
}

/// Sum over subsets of the modulus of each product, the natural scale for
/// judging rounding error in `subset_elementary`.
pub fn subset_magnitude(values: &[Complex64], k: usize) -> Vec<f64> {
    let moduli: Vec<Complex64> = values.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
    subset_elementary(&moduli, k).iter().map(|z| z.re).collect()
}

pub fn random_complex<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::from_polar(
        radius * rng.gen::<f64>(),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Random finite diagram in the unit triangle. Coordinates come from a coarse
/// grid so that coincident points and equal costs occur.
pub fn random_small_diagram<R: Rng>(rng: &mut R, max_points: usize) -> PersistenceDiagram {
    let n = rng.gen_range(0..=max_points);
    let points = (0..n).filter_map(|_| {
        let b = rng.gen_range(0..10) as f64 / 10.0;
        let d = rng.gen_range(1..=10) as f64 / 10.0;
        Cornerpoint::new(b, d, 1).ok()
    });
    PersistenceDiagram::new(points)
}

/// Random finite diagram with continuous coordinates in the unit triangle.
pub fn random_diagram<R: Rng>(rng: &mut R, max_points: usize) -> PersistenceDiagram {
    let n = rng.gen_range(0..=max_points);
    let points = (0..n).filter_map(|_| {
        let b: f64 = rng.gen_range(0.0..0.99);
        let d: f64 = rng.gen_range(b + 0.001..=1.0);
        Cornerpoint::new(b, d, 1).ok()
    });
    PersistenceDiagram::new(points)
}

/// Random graph on at most `max_vertices` vertices with values from a small
/// level set, so that ties and repeated cornerpoints occur.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> FilteredGraph {
    let n = rng.gen_range(1..=max_vertices);
    let levels = rng.gen_range(1..=6);
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64 * 0.25).collect();
    let density: f64 = rng.gen_range(0.05..0.5);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push(if rng.gen_bool(0.5) { [i, j] } else { [j, i] });
            }
        }
    }
    edges.shuffle(rng);
    FilteredGraph::new(values, edges).unwrap()
}

/// Connected components of the whole graph by breadth-first search.
pub fn component_count(graph: &FilteredGraph) -> usize {
    let n = graph.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in graph.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// Multiplicity of the finite point `(u, v)` in a diagram, zero if absent.
pub fn multiplicity_in(diagram: &PersistenceDiagram, u: f64, v: f64) -> i64 {
    diagram
        .points()
        .iter()
        .find(|p| p.birth == u && p.death == v)
        .map_or(0, |p| p.multiplicity as i64)
}

/// Perturbs every cornerpoint by at most `eps` in each coordinate while
/// keeping it strictly above the diagonal.
pub fn perturb<R: Rng>(rng: &mut R, diagram: &PersistenceDiagram, eps: f64) -> PersistenceDiagram {
    let points = diagram.expanded().map(|(b, d)| loop {
        let nb = b + rng.gen_range(-eps..=eps);
        let nd = d + rng.gen_range(-eps..=eps);
        if nb < nd {
            return Cornerpoint::new(nb, nd, 1).unwrap();
        }
    });
    PersistenceDiagram::new(points.collect::<Vec<_>>())
}
