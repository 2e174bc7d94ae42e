//! Basic weak-* neighborhoods of a capacity, in function form and in set
//! form, and the refinement from the first to the second.
//!
//! Membership uses strict inequality throughout.

use num::{Signed, Zero};

use crate::capacity::Capacity;
use crate::choquet::{choquet_integral, comonotone_decompose, RealFunction};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::space::Subset;

/// `{ν : |center(fᵢ) − ν(fᵢ)| < ε for all i}`.
#[derive(Clone, Debug)]
pub struct FunctionNeighborhood {
    center: Capacity,
    functions: Vec<RealFunction>,
    epsilon: Rational,
}

/// `{ν : |center(Fᵢ) − ν(Fᵢ)| < ε for all i}`.
#[derive(Clone, Debug)]
pub struct SetNeighborhood {
    center: Capacity,
    sets: Vec<Subset>,
    epsilon: Rational,
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if epsilon.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon(format_rational(epsilon)))
    }
}

impl FunctionNeighborhood {
    pub fn new(center: Capacity, functions: Vec<RealFunction>, epsilon: Rational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        for f in &functions {
            center.space().check_same(f.space(), "neighborhood function")?;
        }
        Ok(Self {
            center,
            functions,
            epsilon,
        })
    }

    pub fn center(&self) -> &Capacity {
        &self.center
    }

    pub fn functions(&self) -> &[RealFunction] {
        &self.functions
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn contains(&self, nu: &Capacity) -> Result<bool> {
        self.center.space().check_same(nu.space(), "function neighborhood")?;
        for f in &self.functions {
            let gap = choquet_integral(&self.center, f)? - choquet_integral(nu, f)?;
            if gap.abs() >= self.epsilon {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Replaces a single-function neighborhood `O(μ, f, ε)` by the set
    /// neighborhood `O(μ, F₁, …, F_k, ε/(k·α))` over the level sets of the
    /// comonotone decomposition, `α = max |αᵢ|`. Terms with `αᵢ = 0` carry
    /// no information and are dropped before counting `k`. The result is
    /// contained in `self`. For `f ≡ 0` the trivial neighborhood
    /// `O(μ, ∅, ε)` is returned.
    pub fn refine_to_sets(&self) -> Result<SetNeighborhood> {
        let [f] = self.functions.as_slice() else {
            return Err(Error::PreconditionFailed(format!(
                "refinement needs exactly one function, got {}",
                self.functions.len()
            )));
        };
        let terms: Vec<(Rational, Subset)> = comonotone_decompose(f)
            .into_iter()
            .filter(|(a, _)| !a.is_zero())
            .collect();
        let alpha = terms
            .iter()
            .map(|(a, _)| a.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        if alpha.is_zero() {
            return SetNeighborhood::new(self.center.clone(), vec![Subset::EMPTY], self.epsilon.clone());
        }
        let k = Rational::from_integer(terms.len().into());
        let radius = &self.epsilon / (k * alpha);
        SetNeighborhood::new(self.center.clone(), terms.into_iter().map(|t| t.1).collect(), radius)
    }
}

impl SetNeighborhood {
    pub fn new(center: Capacity, sets: Vec<Subset>, epsilon: Rational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        if let Some(bad) = sets.iter().find(|s| !center.space().contains_subset(**s)) {
            return Err(Error::SpaceMismatch(format!("subset {bad:?} outside the center's space")));
        }
        Ok(Self {
            center,
            sets,
            epsilon,
        })
    }

    pub fn center(&self) -> &Capacity {
        &self.center
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn contains(&self, nu: &Capacity) -> Result<bool> {
        self.center.space().check_same(nu.space(), "set neighborhood")?;
        Ok(self
            .sets
            .iter()
            .all(|&s| (self.center.value(s) - nu.value(s)).abs() < self.epsilon))
    }
}
