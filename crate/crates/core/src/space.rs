//! Finite discrete spaces, subsets as little-endian bitmasks, and point maps.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard upper bound on the number of points of any space. Capacity tables
/// have `2^n` entries.
pub const MAX_POINTS: usize = 20;

/// An ordered list of distinct point labels.
#[derive(Clone)]
pub struct FiniteSpace {
    points: Arc<[String]>,
}

impl FiniteSpace {
    pub fn new<S: Into<String>>(points: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::with_cap(points, MAX_POINTS)
    }

    /// Like [`FiniteSpace::new`] with a lower size cap. Caps above
    /// [`MAX_POINTS`] are clamped to it.
    pub fn with_cap<S: Into<String>>(
        points: impl IntoIterator<Item = S>,
        cap: usize,
    ) -> Result<Self> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidSpace("space has no points".into()));
        }
        let cap = cap.min(MAX_POINTS);
        if points.len() > cap {
            return Err(Error::InvalidSpace(format!(
                "{} points exceeds the cap of {cap}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidSpace(format!("duplicate point {p:?}")));
            }
        }
        Ok(Self {
            points: points.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::PointNotFound(label.to_string()))
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.len()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// All subsets in index order.
    pub fn subsets(&self) -> impl DoubleEndedIterator<Item = Subset> + ExactSizeIterator {
        (0..self.subset_count() as u32).map(Subset)
    }

    pub fn subset_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        labels.iter().try_fold(Subset::EMPTY, |acc, l| {
            Ok(acc.with(self.index_of(l.as_ref())?))
        })
    }

    pub fn contains_subset(&self, subset: Subset) -> bool {
        (subset.0 as usize) < self.subset_count()
    }

    /// `{a,b}` style rendering.
    pub fn render(&self, subset: Subset) -> String {
        let labels: Vec<&str> = subset.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", labels.join(","))
    }

    pub(crate) fn check_same(&self, other: &FiniteSpace, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "{what}: {:?} vs {:?}",
                self.points(),
                other.points()
            )))
        }
    }
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter()).finish()
    }
}

/// A subset of a [`FiniteSpace`]; bit `j` marks point `j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_POINTS);
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(point: usize) -> Subset {
        Subset(1 << point)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, point: usize) -> bool {
        self.0 >> point & 1 == 1
    }

    pub fn with(self, point: usize) -> Subset {
        Subset(self.0 | 1 << point)
    }

    pub fn without(self, point: usize) -> Subset {
        Subset(self.0 & !(1 << point))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Member point indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset({:#b})", self.0)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(Subset::EMPTY, Subset::with)
    }
}

/// A total map between finite spaces, stored as an image index per domain
/// point.
#[derive(Clone, PartialEq, Eq)]
pub struct PointMap {
    domain: FiniteSpace,
    codomain: FiniteSpace,
    image: Vec<usize>,
}

impl PointMap {
    pub fn new(domain: FiniteSpace, codomain: FiniteSpace, image: Vec<usize>) -> Result<Self> {
        if image.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                actual: image.len(),
            });
        }
        if let Some(&bad) = image.iter().find(|&&i| i >= codomain.len()) {
            return Err(Error::SpaceMismatch(format!(
                "image index {bad} outside codomain of {} points",
                codomain.len()
            )));
        }
        Ok(Self {
            domain,
            codomain,
            image,
        })
    }

    /// Builds a map from a label table; every domain point must be present
    /// exactly once and map into the codomain.
    pub fn from_labels(
        domain: FiniteSpace,
        codomain: FiniteSpace,
        table: &BTreeMap<String, String>,
    ) -> Result<Self> {
        for key in table.keys() {
            if domain.index_of(key).is_err() {
                return Err(Error::SpaceMismatch(format!(
                    "map sends {key:?}, which is not a domain point"
                )));
            }
        }
        let image = domain
            .points()
            .iter()
            .map(|p| {
                let target = table.get(p).ok_or_else(|| {
                    Error::SpaceMismatch(format!("domain point {p:?} has no image"))
                })?;
                codomain.index_of(target).map_err(|_| {
                    Error::SpaceMismatch(format!("image {target:?} of {p:?} is not a codomain point"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, image)
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            image: (0..space.len()).collect(),
        }
    }

    pub fn constant(domain: &FiniteSpace, codomain: &FiniteSpace, target: usize) -> Self {
        assert!(target < codomain.len());
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            image: vec![target; domain.len()],
        }
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn apply(&self, point: usize) -> usize {
        self.image[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// `then ∘ self`: first apply `self`, then `then`.
    pub fn then(&self, then: &PointMap) -> Result<PointMap> {
        self.codomain.check_same(&then.domain, "composition")?;
        Ok(PointMap {
            domain: self.domain.clone(),
            codomain: then.codomain.clone(),
            image: self.image.iter().map(|&i| then.image[i]).collect(),
        })
    }

    pub fn preimage(&self, subset: Subset) -> Subset {
        self.image
            .iter()
            .enumerate()
            .filter(|&(_, &y)| subset.contains(y))
            .map(|(x, _)| x)
            .collect()
    }

    pub fn image_of(&self, subset: Subset) -> Subset {
        subset.iter().map(|x| self.image[x]).collect()
    }

    pub fn range(&self) -> Subset {
        self.image.iter().copied().collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.range() == self.codomain.full()
    }

    /// Label table, the inverse of [`PointMap::from_labels`].
    pub fn to_labels(&self) -> BTreeMap<String, String> {
        self.image
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.domain.label(x).to_string(), self.codomain.label(y).to_string()))
            .collect()
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.to_labels()).finish()
    }
}
