//! Marginal-matching constructions.
//!
//! Given compatible marginals `μ_o` on the vertices of a diagram, every
//! capacity `λ` on the limit with those marginals satisfies
//! `l_A ≤ λ(A) ≤ u_A`, where
//!
//! - `l_A = max_o μ_o({w : cyl(o, {w}) ⊆ A})`, the largest marginal value of
//!   a cylinder inside `A`;
//! - `u_A = min_o μ_o(pr_o(A))`, the smallest marginal value of a cylinder
//!   covering `A`.
//!
//! Both are monotone in `A`. The clamp extension
//! `λ(A) = max(l_A, min(u_A, λ⁰(A)))` then matches the marginals exactly and
//! moves `λ⁰` by no more than the marginals moved.

use num::{One, Zero};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::limit::{LimitSpace, MarginalFamily};
use crate::par;
use crate::rational::{format_rational, Rational};
use crate::space::{FiniteSpace, PointMap, Subset};
use crate::square::Square;

/// `[l_A, u_A]` for one subset `A` of the limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopePair {
    pub lower: Rational,
    pub upper: Rational,
    pub subset: Subset,
}

impl EnvelopePair {
    pub fn is_ordered(&self) -> bool {
        Rational::zero() <= self.lower && self.lower <= self.upper && self.upper <= Rational::one()
    }

    pub fn clamp(&self, value: &Rational) -> Rational {
        let capped = if *value < self.upper { value } else { &self.upper };
        if *capped > self.lower { capped.clone() } else { self.lower.clone() }
    }
}

/// One marginal constraint seen from a point space `S`: a map `S → V` and a
/// capacity on `V`. Cylinders of single points of `V` are precomputed.
struct Constraint<'a> {
    marginal: &'a Capacity,
    cylinders: Vec<Subset>,
}

impl<'a> Constraint<'a> {
    fn new(map: &PointMap, marginal: &'a Capacity) -> Self {
        let cylinders = (0..map.codomain().len())
            .map(|w| map.preimage(Subset::singleton(w)))
            .collect();
        Self { marginal, cylinders }
    }

    /// Largest `W` with `cyl(W) ⊆ a`.
    fn inner(&self, a: Subset) -> Subset {
        self.cylinders
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_subset_of(a))
            .map(|(w, _)| w)
            .collect()
    }

    /// Smallest `W` with `cyl(W) ⊇ a`, i.e. the image of `a`.
    fn shadow(&self, a: Subset) -> Subset {
        self.cylinders
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.intersection(a).is_empty())
            .map(|(w, _)| w)
            .collect()
    }

    fn lower(&self, a: Subset) -> &'a Rational {
        self.marginal.value(self.inner(a))
    }

    fn upper(&self, a: Subset) -> &'a Rational {
        self.marginal.value(self.shadow(a))
    }
}

fn envelope_of(constraints: &[Constraint<'_>], a: Subset) -> EnvelopePair {
    let lower = constraints.iter().map(|c| c.lower(a)).max().cloned();
    let upper = constraints.iter().map(|c| c.upper(a)).min().cloned();
    EnvelopePair {
        lower: lower.unwrap_or_else(Rational::zero),
        upper: upper.unwrap_or_else(Rational::one),
        subset: a,
    }
}

fn constraints<'a>(limit: &'a LimitSpace, family: &'a MarginalFamily) -> Result<Vec<Constraint<'a>>> {
    check_family(limit, family)?;
    Ok(limit
        .projections()
        .iter()
        .zip(family.capacities())
        .map(|(pr, mu)| Constraint::new(pr, mu))
        .collect())
}

fn check_family(limit: &LimitSpace, family: &MarginalFamily) -> Result<()> {
    if limit.diagram().spaces() != family.diagram().spaces() {
        return Err(Error::SpaceMismatch(
            "marginal family belongs to a different diagram".into(),
        ));
    }
    limit.space().map(|_| ())
}

fn check_subset(space: &FiniteSpace, a: Subset) -> Result<()> {
    if space.contains_subset(a) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(format!("subset {a:?} outside the limit")))
    }
}

/// `[l_A, u_A]` for the marginals `family`. When every projection is onto,
/// `0 ≤ l_A ≤ u_A ≤ 1` is asserted.
pub fn envelope(limit: &LimitSpace, family: &MarginalFamily, a: Subset) -> Result<EnvelopePair> {
    let cons = constraints(limit, family)?;
    check_subset(limit.space()?, a)?;
    let pair = envelope_of(&cons, a);
    if !pair.is_ordered() && limit.projection_surjectivity().iter().all(|&ok| ok) {
        return Err(Error::PostconditionFailed(format!(
            "envelope at {} is [{}, {}]",
            limit.space()?.render(a),
            format_rational(&pair.lower),
            format_rational(&pair.upper)
        )));
    }
    Ok(pair)
}

/// Envelopes of every subset of the limit, in index order.
pub fn envelopes(limit: &LimitSpace, family: &MarginalFamily) -> Result<Vec<EnvelopePair>> {
    let cons = constraints(limit, family)?;
    let count = limit.space()?.subset_count();
    Ok(par::map_range(count, |i| envelope_of(&cons, Subset(i as u32))))
}

fn as_capacity(space: &FiniteSpace, values: Vec<Rational>, what: &str) -> Result<Capacity> {
    Capacity::new(space.clone(), values)
        .map_err(|e| Error::PostconditionFailed(format!("{what} is not a capacity: {e}")))
}

fn check_marginals(limit: &LimitSpace, lambda: &Capacity, family: &MarginalFamily, what: &str) -> Result<()> {
    for (o, pr) in limit.projections().iter().enumerate() {
        let image = lambda.pushforward(pr)?;
        if image != *family.at(o) {
            let space = pr.codomain();
            let w = space
                .subsets()
                .find(|&w| image.value(w) != family.at(o).value(w))
                .expect("tables differ");
            return Err(Error::PostconditionFailed(format!(
                "{what} has marginal {} instead of {} at vertex {:?}, subset {}",
                format_rational(image.value(w)),
                format_rational(family.at(o).value(w)),
                limit.diagram().id(o),
                space.render(w)
            )));
        }
    }
    Ok(())
}

/// `A ↦ l_A`. Its marginals are exactly `family`, which makes it a section
/// of the characteristic map.
pub fn lower_capacity(limit: &LimitSpace, family: &MarginalFamily) -> Result<Capacity> {
    limit.require_surjective_projections()?;
    let values = envelopes(limit, family)?.into_iter().map(|p| p.lower).collect();
    let lambda = as_capacity(limit.space()?, values, "lower envelope")?;
    check_marginals(limit, &lambda, family, "lower envelope")?;
    Ok(lambda)
}

/// `A ↦ u_A`.
pub fn upper_capacity(limit: &LimitSpace, family: &MarginalFamily) -> Result<Capacity> {
    limit.require_surjective_projections()?;
    let values = envelopes(limit, family)?.into_iter().map(|p| p.upper).collect();
    as_capacity(limit.space()?, values, "upper envelope")
}

/// `A ↦ max(l_A, min(u_A, λ⁰(A)))`.
///
/// Postconditions checked on every call: the result is a capacity, its
/// marginals are exactly `family`, and its distance to `λ⁰` is at most the
/// largest distance between `family` and the marginals of `λ⁰`.
pub fn clamp_extension(limit: &LimitSpace, lambda0: &Capacity, family: &MarginalFamily) -> Result<Capacity> {
    limit.require_surjective_projections()?;
    let space = limit.space()?;
    space.check_same(lambda0.space(), "clamp_extension")?;
    let pairs = envelopes(limit, family)?;
    let values = pairs
        .iter()
        .zip(lambda0.values())
        .map(|(p, v)| p.clamp(v))
        .collect();
    let lambda = as_capacity(space, values, "clamp extension")?;
    check_marginals(limit, &lambda, family, "clamp extension")?;

    let mut moved = Rational::zero();
    for (pr, mu) in limit.projections().iter().zip(family.capacities()) {
        moved = moved.max(lambda0.pushforward(pr)?.sup_distance(mu)?);
    }
    let distance = lambda.sup_distance(lambda0)?;
    if distance > moved {
        return Err(Error::PostconditionFailed(format!(
            "clamp extension moved by {} but marginals moved by only {}",
            format_rational(&distance),
            format_rational(&moved)
        )));
    }
    Ok(lambda)
}

/// Lifts `target` along an onto map `m: S → V`: the nearest capacity to
/// `lambda0` (in the clamp sense) whose image under `m` is `target`.
pub fn clamp_to_marginal(map: &PointMap, lambda0: &Capacity, target: &Capacity) -> Result<Capacity> {
    lambda0.space().check_same(map.domain(), "clamp_to_marginal")?;
    target.space().check_same(map.codomain(), "clamp_to_marginal")?;
    if !map.is_surjective() {
        return Err(Error::PreconditionFailed("lifting map is not onto".into()));
    }
    let cons = [Constraint::new(map, target)];
    let values = par::map_range(lambda0.space().subset_count(), |i| {
        let a = Subset(i as u32);
        envelope_of(&cons, a).clamp(lambda0.value(a))
    });
    let lambda = as_capacity(lambda0.space(), values, "lift")?;
    if lambda.pushforward(map)? != *target {
        return Err(Error::PostconditionFailed("lift does not recover the target".into()));
    }
    Ok(lambda)
}

/// The inner-measure join on a bicommutative square: given `μ` on `X` and
/// `ν` on `Y` with the same image on `T`,
/// `λ(D) = max(μ({x : f⁻¹(x) ⊆ D}), ν({y : g⁻¹(y) ⊆ D}))` on `Z` has
/// `f`-marginal `μ` and `g`-marginal `ν`.
///
/// The legs `f` and `g` must be onto; otherwise a capacity on `X` can put
/// weight on points outside the image of `f` that no capacity on `Z` sees.
pub fn inner_join_square(square: &Square, mu: &Capacity, nu: &Capacity) -> Result<Capacity> {
    square.require_bicommutative()?;
    mu.space().check_same(square.f.codomain(), "join: mu")?;
    nu.space().check_same(square.g.codomain(), "join: nu")?;
    for (leg, name) in [(&square.f, "f"), (&square.g, "g")] {
        if !leg.is_surjective() {
            return Err(Error::PreconditionFailed(format!("leg {name} of the square is not onto")));
        }
    }
    let tau_x = mu.pushforward(&square.h)?;
    let tau_y = nu.pushforward(&square.s)?;
    if tau_x != tau_y {
        let t = square.h.codomain();
        let w = t.subsets().find(|&w| tau_x.value(w) != tau_y.value(w)).expect("differ");
        return Err(Error::MarginalMismatch { witness: t.render(w) });
    }
    let z = square.f.domain();
    let cons = [Constraint::new(&square.f, mu), Constraint::new(&square.g, nu)];
    let values = par::map_range(z.subset_count(), |i| {
        let d = Subset(i as u32);
        cons.iter().map(|c| c.lower(d)).max().cloned().expect("two legs")
    });
    let lambda = as_capacity(z, values, "inner join")?;
    if lambda.pushforward(&square.f)? != *mu || lambda.pushforward(&square.g)? != *nu {
        return Err(Error::PostconditionFailed("inner join does not recover its marginals".into()));
    }
    Ok(lambda)
}
