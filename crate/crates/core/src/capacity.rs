//! Capacities: normalized monotone set functions on the power set of a
//! finite space.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::space::{FiniteSpace, PointMap, Subset};

/// A value table indexed by [`Subset`]. Construction always validates
/// `v(∅) = 0`, `v(X) = 1` and monotonicity.
#[derive(Clone, PartialEq, Eq)]
pub struct Capacity {
    space: FiniteSpace,
    values: Vec<Rational>,
}

impl Capacity {
    /// Checks the table and wraps it. Monotonicity is checked on covering
    /// pairs `A ⊂ A ∪ {p}` only; transitivity gives the rest.
    pub fn new(space: FiniteSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.subset_count() {
            return Err(Error::LengthMismatch {
                expected: space.subset_count(),
                actual: values.len(),
            });
        }
        for a in space.subsets() {
            for p in (0..space.len()).filter(|&p| !a.contains(p)) {
                let b = a.with(p);
                if values[a.index()] > values[b.index()] {
                    return Err(Error::MonotonicityViolation {
                        smaller: space.render(a),
                        larger: space.render(b),
                        smaller_value: format_rational(&values[a.index()]),
                        larger_value: format_rational(&values[b.index()]),
                    });
                }
            }
        }
        let endpoints = [(Subset::EMPTY, Rational::zero()), (space.full(), Rational::one())];
        for (subset, expected) in endpoints {
            let value = &values[subset.index()];
            if *value != expected {
                return Err(Error::EndpointViolation {
                    subset: space.render(subset),
                    value: format_rational(value),
                    expected: format_rational(&expected),
                });
            }
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| v.is_negative() || **v > Rational::one())
        {
            return Err(Error::OutOfRange {
                subset: space.render(Subset(i as u32)),
                value: format_rational(v),
            });
        }
        Ok(Self { space, values })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn new_unchecked(space: FiniteSpace, values: Vec<Rational>) -> Self {
        debug_assert_eq!(values.len(), space.subset_count());
        Self { space, values }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn value(&self, subset: Subset) -> &Rational {
        &self.values[subset.index()]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    /// The point mass at `point`: 1 on sets containing it, 0 elsewhere.
    pub fn dirac(space: &FiniteSpace, point: &str) -> Result<Self> {
        let x = space.index_of(point)?;
        Ok(Self::dirac_at(space, x))
    }

    pub fn dirac_at(space: &FiniteSpace, point: usize) -> Self {
        let values = space
            .subsets()
            .map(|a| if a.contains(point) { Rational::one() } else { Rational::zero() })
            .collect();
        Self::new_unchecked(space.clone(), values)
    }

    /// The image capacity `B ↦ ν(m⁻¹(B))` on the codomain of `map`.
    pub fn pushforward(&self, map: &PointMap) -> Result<Capacity> {
        self.space.check_same(map.domain(), "pushforward")?;
        let values = map
            .codomain()
            .subsets()
            .map(|b| self.value(map.preimage(b)).clone())
            .collect();
        Ok(Self::new_unchecked(map.codomain().clone(), values))
    }

    /// `max_A |ν₁(A) − ν₂(A)|` over all subsets.
    pub fn sup_distance(&self, other: &Capacity) -> Result<Rational> {
        self.space.check_same(&other.space, "sup_distance")?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// Largest `|ν₁({p}) − ν₂({p})|` over single points.
    pub fn singleton_distance(&self, other: &Capacity) -> Result<Rational> {
        self.space.check_same(&other.space, "singleton_distance")?;
        Ok((0..self.space.len())
            .map(|p| (self.value(Subset::singleton(p)) - other.value(Subset::singleton(p))).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// True iff `ν(A) = Σ_{p∈A} ν({p})` for every `A`, i.e. `ν` is a
    /// probability measure.
    pub fn is_additive(&self) -> bool {
        let atoms: Vec<&Rational> = (0..self.space.len())
            .map(|p| self.value(Subset::singleton(p)))
            .collect();
        self.space.subsets().all(|a| {
            let sum: Rational = a.iter().map(|p| atoms[p]).sum();
            sum == *self.value(a)
        })
    }

    /// Convex combination `(1 − weight)·self + weight·other`.
    pub fn mix(&self, other: &Capacity, weight: &Rational) -> Result<Capacity> {
        self.space.check_same(&other.space, "mix")?;
        if weight.is_negative() || *weight > Rational::one() {
            return Err(Error::PreconditionFailed(format!(
                "mixing weight {} outside [0, 1]",
                format_rational(weight)
            )));
        }
        let keep = Rational::one() - weight;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| &keep * a + weight * b)
            .collect();
        Ok(Self::new_unchecked(self.space.clone(), values))
    }
}

impl std::fmt::Debug for Capacity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let values: Vec<String> = self.values.iter().map(format_rational).collect();
        f.debug_struct("Capacity")
            .field("space", &self.space)
            .field("values", &values)
            .finish()
    }
}
