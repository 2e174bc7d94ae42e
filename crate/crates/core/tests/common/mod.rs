#![allow(dead_code)]

use std::collections::BTreeMap;

use caplim::diagram::{DiagramSpec, EdgeSpec, VertexSpec};
use caplim::limit::{limit, LimitSpace};
use caplim::Diagram;

pub fn points(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn vertex(id: &str, pts: Vec<String>) -> VertexSpec {
    VertexSpec { id: id.into(), points: pts }
}

/// Edge `lesser ≤ greater` whose map sends greater point `i` to lesser point
/// `image[i]`.
pub fn edge(spec: &DiagramSpec, lesser: &str, greater: &str, image: &[usize]) -> EdgeSpec {
    let find = |id: &str| spec.vertices.iter().find(|v| v.id == id).unwrap();
    let (l, g) = (find(lesser), find(greater));
    let map: BTreeMap<String, String> = g
        .points
        .iter()
        .zip(image)
        .map(|(p, &i)| (p.clone(), l.points[i].clone()))
        .collect();
    EdgeSpec { lesser: lesser.into(), greater: greater.into(), map }
}

fn build(vertices: Vec<VertexSpec>, edges: &[(&str, &str, Vec<usize>)]) -> Diagram {
    let mut spec = DiagramSpec { vertices, edges: vec![] };
    let edges: Vec<EdgeSpec> = edges.iter().map(|(l, g, m)| edge(&spec, l, g, m)).collect();
    spec.edges = edges;
    Diagram::from_spec(&spec).unwrap()
}

pub fn single_vertex(n: usize) -> Diagram {
    build(vec![vertex("X", points("x", n))], &[])
}

/// `A ≤ B ≤ C` with onto maps; the limit has `n` threads (`n ≥ 3`).
pub fn chain(n: usize) -> Diagram {
    let c_to_b: Vec<usize> = (0..n).map(|i| (i * 3 / n).min(2)).collect();
    build(
        vec![vertex("A", points("a", 2)), vertex("B", points("b", 3)), vertex("C", points("c", n))],
        &[("A", "B", vec![0, 1, 1]), ("B", "C", c_to_b)],
    )
}

pub fn edge_free(sizes: &[usize]) -> Diagram {
    let vertices = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| vertex(&format!("V{i}"), points(&format!("v{i}_"), n)))
        .collect();
    build(vertices, &[])
}

/// `X → T ← Y` with `h`, `s` given as image tables.
pub fn cospan(h: &[usize], s: &[usize], t: usize) -> Diagram {
    build(
        vec![vertex("X", points("x", h.len())), vertex("Y", points("y", s.len())), vertex("T", points("t", t))],
        &[("T", "X", h.to_vec()), ("T", "Y", s.to_vec())],
    )
}

/// `o₁ ≤ o₂ ≥ o₃`; the limit is a copy of `O(o₂)`.
pub fn zigzag(n: usize) -> Diagram {
    let left: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let right: Vec<usize> = (0..n).map(|i| (i / 2).min(1)).collect();
    build(
        vec![vertex("O1", points("a", 2)), vertex("O2", points("p", n)), vertex("O3", points("c", 2))],
        &[("O1", "O2", left), ("O3", "O2", right)],
    )
}

/// The square `Z → X, Z → Y, X → T, Y → T` with `Z` the pullback of `h`
/// and `s`. Returns `None` when the pullback is empty.
pub fn pullback_square(h: &[usize], s: &[usize], t: usize) -> Option<Diagram> {
    let mut z_points = Vec::new();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for (a, &ha) in h.iter().enumerate() {
        for (b, &sb) in s.iter().enumerate() {
            if ha == sb {
                z_points.push(format!("z{}{}", a + 1, b + 1));
                f.push(a);
                g.push(b);
            }
        }
    }
    if z_points.is_empty() {
        return None;
    }
    Some(build(
        vec![
            vertex("Z", z_points),
            vertex("X", points("x", h.len())),
            vertex("Y", points("y", s.len())),
            vertex("T", points("t", t)),
        ],
        &[("X", "Z", f), ("Y", "Z", g), ("T", "X", h.to_vec()), ("T", "Y", s.to_vec())],
    ))
}

pub fn lim(d: &Diagram) -> LimitSpace {
    limit(d).unwrap()
}

/// Named fixtures covering the five shapes, at most `max_threads` threads.
pub fn fixture_suite(max_threads: usize) -> Vec<(&'static str, Diagram)> {
    let all = vec![
        ("single-vertex", single_vertex(3)),
        ("single-vertex-large", single_vertex(8)),
        ("chain", chain(4)),
        ("chain-large", chain(8)),
        ("edge-free-2x2", edge_free(&[2, 2])),
        ("edge-free-2x4", edge_free(&[2, 4])),
        ("edge-free-3x4", edge_free(&[3, 4])),
        ("edge-free-2x2x3", edge_free(&[2, 2, 3])),
        ("cospan-1", cospan(&[0, 0], &[0, 0], 1)),
        ("cospan-2", cospan(&[0, 0, 1], &[0, 0, 1], 2)),
        ("cospan-3", cospan(&[0, 0, 1, 2], &[0, 1, 1, 2], 3)),
        ("zigzag", zigzag(4)),
        ("zigzag-large", zigzag(6)),
    ];
    all.into_iter().filter(|(_, d)| lim(d).len() <= max_threads).collect()
}
