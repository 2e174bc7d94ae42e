//! Commutative squares
//!
//! ```text
//!   Z --f--> X
//!   |        |
//!   g        h
//!   v        v
//!   Y --s--> T
//! ```
//!
//! read off a four-vertex diagram with `T ≤ X, Y ≤ Z`.

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::space::PointMap;

#[derive(Clone, Debug)]
pub struct Square {
    pub z: usize,
    pub x: usize,
    pub y: usize,
    pub t: usize,
    pub f: PointMap,
    pub g: PointMap,
    pub h: PointMap,
    pub s: PointMap,
}

impl Square {
    /// Identifies the roles: `T` is the unique least vertex, `Z` the unique
    /// greatest, and `X`, `Y` the two incomparable middles in declared order.
    pub fn from_diagram(d: &Diagram) -> Result<Self> {
        if d.vertex_count() != 4 {
            return Err(Error::ShapeMismatch(format!(
                "expected 4 vertices, found {}",
                d.vertex_count()
            )));
        }
        let all = 0..4;
        let bottoms: Vec<usize> = all.clone().filter(|&v| (0..4).all(|w| d.leq(v, w))).collect();
        let tops: Vec<usize> = all.clone().filter(|&v| (0..4).all(|w| d.leq(w, v))).collect();
        let ([t], [z]) = (bottoms.as_slice(), tops.as_slice()) else {
            return Err(Error::ShapeMismatch(
                "need a unique least vertex T and a unique greatest vertex Z".into(),
            ));
        };
        let middles: Vec<usize> = all.filter(|v| v != t && v != z).collect();
        let (x, y) = (middles[0], middles[1]);
        if d.leq(x, y) || d.leq(y, x) {
            return Err(Error::ShapeMismatch(format!(
                "middle vertices {:?} and {:?} are comparable",
                d.id(x),
                d.id(y)
            )));
        }
        let map = |lesser: usize, greater: usize| d.connecting(lesser, greater).cloned().expect("comparable");
        Ok(Self {
            z: *z,
            x,
            y,
            t: *t,
            f: map(x, *z),
            g: map(y, *z),
            h: map(*t, x),
            s: map(*t, y),
        })
    }

    /// A pair `(a, b)` with `h(a) = s(b)` that no point of `Z` lies over, if
    /// one exists.
    pub fn bicommutativity_witness(&self) -> Option<(usize, usize)> {
        let covered: Vec<(usize, usize)> = (0..self.f.domain().len())
            .map(|z| (self.f.apply(z), self.g.apply(z)))
            .collect();
        let xs = self.h.domain().len();
        let ys = self.s.domain().len();
        (0..xs)
            .flat_map(|a| (0..ys).map(move |b| (a, b)))
            .filter(|&(a, b)| self.h.apply(a) == self.s.apply(b))
            .find(|pair| !covered.contains(pair))
    }

    /// Whether `Z → X ×_T Y` is onto.
    pub fn is_bicommutative(&self) -> bool {
        self.bicommutativity_witness().is_none()
    }

    pub(crate) fn require_bicommutative(&self) -> Result<()> {
        match self.bicommutativity_witness() {
            None => Ok(()),
            Some((a, b)) => Err(Error::NotBicommutative {
                a: self.f.codomain().label(a).to_string(),
                b: self.g.codomain().label(b).to_string(),
            }),
        }
    }
}

/// Shape check plus [`Square::is_bicommutative`].
pub fn is_bicommutative_square(d: &Diagram) -> Result<bool> {
    Ok(Square::from_diagram(d)?.is_bicommutative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramSpec;
    use serde_json::json;

    fn diagram(value: serde_json::Value) -> Diagram {
        let spec: DiagramSpec = serde_json::from_value(value).unwrap();
        Diagram::from_spec(&spec).unwrap()
    }

    #[test]
    fn pullback_square_is_bicommutative() {
        let d = diagram(json!({
            "vertices": [
                {"id": "Z", "points": ["11", "12", "21", "22"]},
                {"id": "X", "points": ["x1", "x2"]},
                {"id": "Y", "points": ["y1", "y2"]},
                {"id": "T", "points": ["t"]}
            ],
            "edges": [
                {"lesser": "X", "greater": "Z", "map": {"11": "x1", "12": "x1", "21": "x2", "22": "x2"}},
                {"lesser": "Y", "greater": "Z", "map": {"11": "y1", "12": "y2", "21": "y1", "22": "y2"}},
                {"lesser": "T", "greater": "X", "map": {"x1": "t", "x2": "t"}},
                {"lesser": "T", "greater": "Y", "map": {"y1": "t", "y2": "t"}}
            ]
        }));
        let sq = Square::from_diagram(&d).unwrap();
        assert_eq!((sq.z, sq.x, sq.y, sq.t), (0, 1, 2, 3));
        assert!(sq.is_bicommutative());
    }

    #[test]
    fn single_point_z_is_not_bicommutative() {
        let d = diagram(json!({
            "vertices": [
                {"id": "Z", "points": ["z"]},
                {"id": "X", "points": ["x1", "x2"]},
                {"id": "Y", "points": ["y1", "y2"]},
                {"id": "T", "points": ["t"]}
            ],
            "edges": [
                {"lesser": "X", "greater": "Z", "map": {"z": "x1"}},
                {"lesser": "Y", "greater": "Z", "map": {"z": "y1"}},
                {"lesser": "T", "greater": "X", "map": {"x1": "t", "x2": "t"}},
                {"lesser": "T", "greater": "Y", "map": {"y1": "t", "y2": "t"}}
            ]
        }));
        // Oracle: all four pairs lie over t, only (x1, y1) is covered.
        let sq = Square::from_diagram(&d).unwrap();
        assert_eq!(sq.bicommutativity_witness(), Some((0, 1)));
        assert!(!is_bicommutative_square(&d).unwrap());
    }

    #[test]
    fn trivial_square() {
        let d = diagram(json!({
            "vertices": [
                {"id": "Z", "points": ["z"]}, {"id": "X", "points": ["x"]},
                {"id": "Y", "points": ["y"]}, {"id": "T", "points": ["t"]}
            ],
            "edges": [
                {"lesser": "X", "greater": "Z", "map": {"z": "x"}},
                {"lesser": "Y", "greater": "Z", "map": {"z": "y"}},
                {"lesser": "T", "greater": "X", "map": {"x": "t"}},
                {"lesser": "T", "greater": "Y", "map": {"y": "t"}}
            ]
        }));
        assert!(is_bicommutative_square(&d).unwrap());
    }

    #[test]
    fn shape_mismatch() {
        let d = diagram(json!({"vertices": [{"id": "X", "points": ["x"]}]}));
        assert!(matches!(Square::from_diagram(&d), Err(Error::ShapeMismatch(_))));
        let chain = diagram(json!({
            "vertices": [
                {"id": "A", "points": ["a"]}, {"id": "B", "points": ["b"]},
                {"id": "C", "points": ["c"]}, {"id": "D", "points": ["d"]}
            ],
            "edges": [
                {"lesser": "A", "greater": "B", "map": {"b": "a"}},
                {"lesser": "B", "greater": "C", "map": {"c": "b"}},
                {"lesser": "C", "greater": "D", "map": {"d": "c"}}
            ]
        }));
        assert!(matches!(Square::from_diagram(&chain), Err(Error::ShapeMismatch(_))));
    }
}
