//! Real functions on finite spaces and their Choquet integrals.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::{FiniteSpace, Subset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealFunction {
    space: FiniteSpace,
    values: Vec<Rational>,
}

impl RealFunction {
    pub fn new(space: FiniteSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                actual: values.len(),
            });
        }
        Ok(Self { space, values })
    }

    pub fn from_labels(space: FiniteSpace, table: &BTreeMap<String, Rational>) -> Result<Self> {
        for key in table.keys() {
            space.index_of(key)?;
        }
        let values = space
            .points()
            .iter()
            .map(|p| {
                table
                    .get(p)
                    .cloned()
                    .ok_or_else(|| Error::SpaceMismatch(format!("function has no value at {p:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(Self { space, values })
    }

    pub fn constant(space: &FiniteSpace, c: Rational) -> Self {
        Self {
            space: space.clone(),
            values: vec![c; space.len()],
        }
    }

    pub fn indicator(space: &FiniteSpace, subset: Subset) -> Self {
        let values = (0..space.len())
            .map(|p| if subset.contains(p) { Rational::one() } else { Rational::zero() })
            .collect();
        Self {
            space: space.clone(),
            values,
        }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn at(&self, point: usize) -> &Rational {
        &self.values[point]
    }

    /// Upper level set `{f ≥ t}`.
    pub fn level_set(&self, t: &Rational) -> Subset {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v >= t)
            .map(|(i, _)| i)
            .collect()
    }

    fn distinct_values(&self) -> Vec<Rational> {
        let mut values = self.values.clone();
        values.sort();
        values.dedup();
        values
    }

    pub fn zip_with(&self, other: &RealFunction, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<RealFunction> {
        self.space.check_same(&other.space, "function arithmetic")?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect();
        Ok(Self {
            space: self.space.clone(),
            values,
        })
    }

    pub fn map(&self, op: impl Fn(&Rational) -> Rational) -> RealFunction {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(op).collect(),
        }
    }
}

/// The Choquet integral
/// `∫₀^∞ ν(f ≥ t) dt + ∫_{−∞}^0 (ν(f ≥ t) − 1) dt`.
///
/// Both integrands are step functions that only jump at values of `f` and
/// at 0, so each integral is an exact sum over consecutive breakpoints.
pub fn choquet_integral(nu: &Capacity, f: &RealFunction) -> Result<Rational> {
    nu.space().check_same(f.space(), "choquet_integral")?;
    let mut breakpoints = f.distinct_values();
    if let Err(at) = breakpoints.binary_search(&Rational::zero()) {
        breakpoints.insert(at, Rational::zero());
    }
    let mut total = Rational::zero();
    for pair in breakpoints.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        // On (lo, hi] the level set is {f >= hi}.
        let level = nu.value(f.level_set(hi));
        let width = hi - lo;
        if lo.is_negative() {
            total += width * (level - Rational::one());
        } else {
            total += width * level;
        }
    }
    Ok(total)
}

/// Writes `f = Σ αᵢ·1_{Fᵢ}` with strictly nested `F₁ ⊂ … ⊂ F_k = X`, one term
/// per distinct value of `f` (equal values share a level).
pub fn comonotone_decompose(f: &RealFunction) -> Vec<(Rational, Subset)> {
    let mut levels = f.distinct_values();
    levels.reverse();
    let mut terms: Vec<(Rational, Subset)> = levels
        .windows(2)
        .map(|w| (&w[0] - &w[1], f.level_set(&w[0])))
        .collect();
    let lowest = levels.last().cloned().expect("space is non-empty");
    terms.push((lowest.clone(), f.level_set(&lowest)));
    debug_assert!(terms.windows(2).all(|w| w[0].1 != w[1].1 && w[0].1.is_subset_of(w[1].1)));
    debug_assert_eq!(terms.last().map(|t| t.1), Some(f.space().full()));
    terms
}

/// `Σ αᵢ·ν(Fᵢ)` over the comonotone decomposition of `f`.
pub fn choquet_via_decomposition(nu: &Capacity, f: &RealFunction) -> Result<Rational> {
    nu.space().check_same(f.space(), "choquet_via_decomposition")?;
    Ok(comonotone_decompose(f)
        .iter()
        .map(|(alpha, set)| alpha * nu.value(*set))
        .sum())
}
