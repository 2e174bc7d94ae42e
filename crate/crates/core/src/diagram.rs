//! Diagrams of finite spaces over finite posets.
//!
//! A poset is given by edges `lesser ≤ greater`, each carrying a connecting
//! map `O(greater) → O(lesser)`. Edges are typically the covering relation;
//! the full order is the reflexive-transitive closure, and the map for any
//! comparable pair is the composite along any path. Validation rejects
//! cycles and diagrams where two paths compose to different maps.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, PointMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub lesser: String,
    pub greater: String,
    /// Sends points of the greater vertex's space to the lesser's.
    pub map: BTreeMap<String, String>,
}

/// The raw diagram file format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub lesser: usize,
    pub greater: usize,
    pub map: PointMap,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    ids: Vec<String>,
    spaces: Vec<FiniteSpace>,
    edges: Vec<Edge>,
    /// `maps[lesser][greater]`, present iff `lesser ≤ greater`.
    maps: Vec<Vec<Option<PointMap>>>,
}

impl Diagram {
    pub fn from_spec(spec: &DiagramSpec) -> Result<Self> {
        let vertices = spec
            .vertices
            .iter()
            .map(|v| {
                let space = FiniteSpace::new(v.points.iter().cloned()).map_err(|e| {
                    Error::InvalidDiagram(format!("vertex {:?}: {e}", v.id))
                })?;
                Ok((v.id.clone(), space))
            })
            .collect::<Result<Vec<_>>>()?;
        let lookup = |id: &str| {
            vertices
                .iter()
                .position(|(v, _)| v == id)
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let mut edges = Vec::with_capacity(spec.edges.len());
        for e in &spec.edges {
            let lesser = lookup(&e.lesser)?;
            let greater = lookup(&e.greater)?;
            let map = PointMap::from_labels(
                vertices[greater].1.clone(),
                vertices[lesser].1.clone(),
                &e.map,
            )
            .map_err(|err| Error::MapDomainMismatch {
                lesser: e.lesser.clone(),
                greater: e.greater.clone(),
                detail: err.to_string(),
            })?;
            edges.push(Edge { lesser, greater, map });
        }
        Self::new(vertices, edges)
    }

    /// Validates acyclicity and path independence.
    pub fn new(vertices: Vec<(String, FiniteSpace)>, edges: Vec<Edge>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidDiagram("diagram has no vertices".into()));
        }
        let (ids, spaces): (Vec<String>, Vec<FiniteSpace>) = vertices.into_iter().unzip();
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::InvalidDiagram(format!("duplicate vertex {id:?}")));
            }
        }
        let n = ids.len();
        for e in &edges {
            if e.lesser >= n || e.greater >= n {
                return Err(Error::InvalidDiagram("edge endpoint out of range".into()));
            }
            if e.map.domain() != &spaces[e.greater] || e.map.codomain() != &spaces[e.lesser] {
                return Err(Error::MapDomainMismatch {
                    lesser: ids[e.lesser].clone(),
                    greater: ids[e.greater].clone(),
                    detail: "map must send the greater vertex's space to the lesser's".into(),
                });
            }
        }
        let order = topological_order(&ids, &edges)?;

        let mut maps: Vec<Vec<Option<PointMap>>> = vec![vec![None; n]; n];
        for top in 0..n {
            let mut reach: Vec<Option<(PointMap, Vec<usize>)>> = vec![None; n];
            reach[top] = Some((PointMap::identity(&spaces[top]), vec![top]));
            for &v in &order {
                let Some((to_v, path_v)) = reach[v].clone() else {
                    continue;
                };
                for e in edges.iter().filter(|e| e.greater == v) {
                    let candidate = to_v.then(&e.map)?;
                    let mut path = path_v.clone();
                    path.push(e.lesser);
                    match &reach[e.lesser] {
                        Some((existing, first)) if *existing != candidate => {
                            let witness = (0..spaces[top].len())
                                .find(|&p| existing.apply(p) != candidate.apply(p))
                                .expect("maps differ somewhere");
                            let names = |p: &[usize]| p.iter().map(|&i| ids[i].clone()).collect();
                            return Err(Error::PathDependence {
                                from: ids[top].clone(),
                                to: ids[e.lesser].clone(),
                                first: names(first),
                                second: names(&path),
                                witness: spaces[top].label(witness).to_string(),
                            });
                        }
                        Some(_) => {}
                        None => reach[e.lesser] = Some((candidate, path)),
                    }
                }
            }
            for (lesser, r) in reach.into_iter().enumerate() {
                maps[lesser][top] = r.map(|(m, _)| m);
            }
        }
        Ok(Self {
            ids,
            spaces,
            edges,
            maps,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, vertex: usize) -> &str {
        &self.ids[vertex]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn space(&self, vertex: usize) -> &FiniteSpace {
        &self.spaces[vertex]
    }

    pub fn spaces(&self) -> &[FiniteSpace] {
        &self.spaces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.maps[a][b].is_some()
    }

    /// `φ_{lesser,greater}: O(greater) → O(lesser)`, or `None` when the
    /// vertices are not comparable that way.
    pub fn connecting(&self, lesser: usize, greater: usize) -> Option<&PointMap> {
        self.maps[lesser][greater].as_ref()
    }

    /// All pairs `(lesser, greater)` with `lesser < greater` strictly.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertex_count();
        (0..n)
            .flat_map(move |a| (0..n).map(move |b| (a, b)))
            .filter(move |&(a, b)| a != b && self.leq(a, b))
    }

    pub fn to_spec(&self) -> DiagramSpec {
        DiagramSpec {
            vertices: self
                .ids
                .iter()
                .zip(&self.spaces)
                .map(|(id, s)| VertexSpec {
                    id: id.clone(),
                    points: s.points().to_vec(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    lesser: self.ids[e.lesser].clone(),
                    greater: self.ids[e.greater].clone(),
                    map: e.map.to_labels(),
                })
                .collect(),
        }
    }
}

/// Kahn's algorithm on edges `greater → lesser`; greater vertices come first.
fn topological_order(ids: &[String], edges: &[Edge]) -> Result<Vec<usize>> {
    let n = ids.len();
    let mut indegree = vec![0usize; n];
    for e in edges {
        indegree[e.lesser] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for e in edges.iter().filter(|e| e.greater == v) {
            indegree[e.lesser] -= 1;
            if indegree[e.lesser] == 0 {
                queue.push_back(e.lesser);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n)
            .filter(|&v| indegree[v] > 0)
            .map(|v| ids[v].clone())
            .collect();
        return Err(Error::CycleDetected(stuck));
    }
    Ok(order)
}
