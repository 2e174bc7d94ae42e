//! Limits of diagrams as thread spaces, cylinder sets, marginal families and
//! the characteristic map `M(lim O) → lim M(O)`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::capacity::Capacity;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::space::{FiniteSpace, PointMap, Subset, MAX_POINTS};

/// The threads of a diagram, in lexicographic order of coordinates (vertex
/// order, then declared point order). An empty thread set is a valid state;
/// it has no point space.
#[derive(Clone, Debug)]
pub struct LimitSpace {
    diagram: Arc<Diagram>,
    threads: Vec<Vec<usize>>,
    space: Option<FiniteSpace>,
    projections: Vec<PointMap>,
}

/// Enumerates threads, giving up once more than `MAX_POINTS` are found.
pub fn limit(diagram: &Diagram) -> Result<LimitSpace> {
    limit_with_cap(diagram, MAX_POINTS)
}

/// Like [`limit`] with a tighter thread cap.
pub fn limit_with_cap(diagram: &Diagram, cap: usize) -> Result<LimitSpace> {
    let cap = cap.min(MAX_POINTS);
    let n = diagram.vertex_count();
    // For each vertex, the earlier vertices it is comparable with.
    let checks: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..i).filter(|&j| diagram.leq(i, j) || diagram.leq(j, i)).collect())
        .collect();
    let mut threads = Vec::new();
    let mut current = vec![0usize; n];
    extend_threads(diagram, &checks, 0, &mut current, &mut threads, cap)?;
    LimitSpace::from_threads(Arc::new(diagram.clone()), threads)
}

fn consistent(diagram: &Diagram, i: usize, j: usize, current: &[usize]) -> bool {
    if let Some(phi) = diagram.connecting(i, j) {
        if phi.apply(current[j]) != current[i] {
            return false;
        }
    }
    if let Some(phi) = diagram.connecting(j, i) {
        if phi.apply(current[i]) != current[j] {
            return false;
        }
    }
    true
}

fn extend_threads(
    diagram: &Diagram,
    checks: &[Vec<usize>],
    vertex: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if vertex == current.len() {
        if out.len() == cap {
            return Err(Error::LimitTooLarge { bound: cap });
        }
        out.push(current.clone());
        return Ok(());
    }
    for p in 0..diagram.space(vertex).len() {
        current[vertex] = p;
        if checks[vertex].iter().all(|&j| consistent(diagram, vertex, j, current)) {
            extend_threads(diagram, checks, vertex + 1, current, out, cap)?;
        }
    }
    Ok(())
}

impl LimitSpace {
    fn from_threads(diagram: Arc<Diagram>, threads: Vec<Vec<usize>>) -> Result<Self> {
        if threads.is_empty() {
            return Ok(Self {
                diagram,
                threads,
                space: None,
                projections: Vec::new(),
            });
        }
        let mut labels: Vec<String> = threads
            .iter()
            .map(|t| {
                let coords: Vec<&str> = t
                    .iter()
                    .enumerate()
                    .map(|(o, &p)| diagram.space(o).label(p))
                    .collect();
                format!("({})", coords.join(","))
            })
            .collect();
        let unique: HashSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            labels = (0..threads.len()).map(|i| format!("t{i}")).collect();
        }
        let space = FiniteSpace::new(labels)?;
        let projections = (0..diagram.vertex_count())
            .map(|o| {
                let image = threads.iter().map(|t| t[o]).collect();
                PointMap::new(space.clone(), diagram.space(o).clone(), image)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            diagram,
            threads,
            space: Some(space),
            projections,
        })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn threads(&self) -> &[Vec<usize>] {
        &self.threads
    }

    pub fn len(&self) -> usize {
        self.threads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threads.is_empty()
    }

    /// The threads as a point space.
    pub fn space(&self) -> Result<&FiniteSpace> {
        self.space.as_ref().ok_or(Error::EmptyLimit)
    }

    /// `pr_o`.
    pub fn projection(&self, vertex: usize) -> Result<&PointMap> {
        self.projections.get(vertex).ok_or(Error::EmptyLimit)
    }

    pub fn projections(&self) -> &[PointMap] {
        &self.projections
    }

    /// Whether `pr_o` is onto, per vertex. All false for an empty limit.
    pub fn projection_surjectivity(&self) -> Vec<bool> {
        (0..self.diagram.vertex_count())
            .map(|o| {
                let hit: Subset = self.threads.iter().map(|t| t[o]).collect();
                hit == self.diagram.space(o).full()
            })
            .collect()
    }

    pub fn require_surjective_projections(&self) -> Result<()> {
        match self.projection_surjectivity().iter().position(|ok| !ok) {
            None => Ok(()),
            Some(o) => Err(Error::PreconditionFailed(format!(
                "projection onto vertex {:?} is not surjective",
                self.diagram.id(o)
            ))),
        }
    }

    /// Threads whose coordinate at `vertex` lies in `w`.
    pub fn cylinder(&self, vertex: usize, w: Subset) -> Result<Subset> {
        if vertex >= self.diagram.vertex_count() {
            return Err(Error::UnknownVertex(format!("#{vertex}")));
        }
        if !self.diagram.space(vertex).contains_subset(w) {
            return Err(Error::SpaceMismatch(format!(
                "subset {w:?} outside the space of vertex {:?}",
                self.diagram.id(vertex)
            )));
        }
        Ok(self
            .threads
            .iter()
            .enumerate()
            .filter(|(_, t)| w.contains(t[vertex]))
            .map(|(i, _)| i)
            .collect())
    }

    /// `(M pr_o λ)_o`. The result is checked for compatibility.
    pub fn characteristic_map(&self, lambda: &Capacity) -> Result<MarginalFamily> {
        self.space()?.check_same(lambda.space(), "characteristic_map")?;
        let capacities = self
            .projections
            .iter()
            .map(|pr| lambda.pushforward(pr))
            .collect::<Result<Vec<_>>>()?;
        MarginalFamily::new(self.diagram.clone(), capacities)
            .map_err(|e| Error::PostconditionFailed(format!("marginals of a limit capacity: {e}")))
    }
}

/// One capacity per vertex, compatible along every connecting map.
#[derive(Clone, Debug)]
pub struct MarginalFamily {
    diagram: Arc<Diagram>,
    capacities: Vec<Capacity>,
}

impl MarginalFamily {
    pub fn new(diagram: Arc<Diagram>, capacities: Vec<Capacity>) -> Result<Self> {
        if capacities.len() != diagram.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: diagram.vertex_count(),
                actual: capacities.len(),
            });
        }
        for (o, c) in capacities.iter().enumerate() {
            diagram.space(o).check_same(c.space(), &format!("marginal at {:?}", diagram.id(o)))?;
        }
        for (lesser, greater) in diagram.strict_pairs() {
            let phi = diagram.connecting(lesser, greater).expect("comparable");
            let image = capacities[greater].pushforward(phi)?;
            if image != capacities[lesser] {
                let space = diagram.space(lesser);
                let witness = space
                    .subsets()
                    .find(|&w| image.value(w) != capacities[lesser].value(w))
                    .expect("tables differ");
                return Err(Error::IncompatibleMarginals {
                    lesser: diagram.id(lesser).to_string(),
                    greater: diagram.id(greater).to_string(),
                    witness: space.render(witness),
                });
            }
        }
        Ok(Self {
            diagram,
            capacities,
        })
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn capacities(&self) -> &[Capacity] {
        &self.capacities
    }

    pub fn at(&self, vertex: usize) -> &Capacity {
        &self.capacities[vertex]
    }
}

impl PartialEq for MarginalFamily {
    fn eq(&self, other: &Self) -> bool {
        self.capacities == other.capacities
    }
}
