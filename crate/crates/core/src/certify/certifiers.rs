use std::collections::HashSet;
use std::sync::Arc;

use num::Zero;
use serde_json::{json, Value};

use super::enumerate::{enumerate_capacities, for_each_capacity, ENUMERATION_LIMIT};
use super::report::{run_trials, CertificateReport, Counterexample};
use super::sample::{sample_capacity, sample_compatible_family};
use super::SamplerConfig;
use crate::capacity::Capacity;
use crate::construct::{clamp_extension, clamp_to_marginal, envelopes, inner_join_square, lower_capacity};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::io::{capacity_json, diagram_json};
use crate::limit::{LimitSpace, MarginalFamily};
use crate::rational::{format_rational, ratio, Rational};
use crate::square::Square;

/// Upper bound on the per-vertex product searched for directly enumerated
/// compatible families.
const DIRECT_PRODUCT_LIMIT: usize = 200_000;

/// How a certifier chooses its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialPlan {
    /// This many seeded random trials.
    Sampled(u64),
    /// Every input on the grid `{0, 1/k, …, 1}`.
    Grid(u32),
}

#[derive(Clone, Debug)]
pub enum OpennessCenter {
    Fixed(Capacity),
    /// A fresh `λ⁰` per trial.
    Sampled,
}

/// Which marginal neighborhood the openness certifier draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighborhood {
    /// Sup-distance over all subsets at most `δ`.
    AllSubsets,
    /// Only singleton values within `δ` (strictly); exploratory.
    Singletons,
}

fn family_json(family: &MarginalFamily) -> Value {
    let d = family.diagram();
    Value::Object(
        (0..d.vertex_count())
            .map(|o| (d.id(o).to_string(), capacity_json(family.at(o))))
            .collect(),
    )
}

fn counterexample(trial: Option<u64>, assertion: &str, witness: impl Into<String>, inputs: Value) -> Counterexample {
    Counterexample {
        trial,
        assertion: assertion.to_string(),
        witness: witness.into(),
        inputs,
    }
}

/// Checks that the inner join recovers both marginals for compatible pairs
/// `(μ, ν)` on a bicommutative square. Sampled pairs are built by drawing
/// `τ` on `T` and lifting it to `X` and `Y`; grid mode enumerates every
/// pair with equal images on `T`.
pub fn certify_bicommutativity(diagram: &Diagram, cfg: &SamplerConfig, plan: TrialPlan) -> Result<CertificateReport> {
    let square = Square::from_diagram(diagram)?;
    square.require_bicommutative()?;
    for (leg, name) in [(&square.f, "f"), (&square.g, "g")] {
        if !leg.is_surjective() {
            return Err(Error::PreconditionFailed(format!("leg {name} of the square is not onto")));
        }
    }
    let diagram_doc = diagram_json(diagram);
    let check = |mu: &Capacity, nu: &Capacity, trial: u64| -> Result<(), Counterexample> {
        let inputs = || json!({"diagram": diagram_doc, "mu": capacity_json(mu), "nu": capacity_json(nu)});
        let lambda = inner_join_square(&square, mu, nu)
            .map_err(|e| counterexample(Some(trial), "inner join succeeds", e.to_string(), inputs()))?;
        let recovered = lambda.pushforward(&square.f).is_ok_and(|m| m == *mu)
            && lambda.pushforward(&square.g).is_ok_and(|n| n == *nu);
        if !recovered {
            return Err(counterexample(Some(trial), "Mf(λ) = μ and Mg(λ) = ν", "", inputs()));
        }
        Ok(())
    };
    match plan {
        TrialPlan::Sampled(trials) => {
            for (map, name) in [(&square.h, "h"), (&square.s, "s")] {
                if !map.is_surjective() {
                    return Err(Error::PreconditionFailed(format!(
                        "sampling lifts along {name}, which is not onto"
                    )));
                }
            }
            let t_space = square.h.codomain().clone();
            Ok(run_trials("bicommutativity", cfg.seed, trials, Vec::new(), |trial| {
                let mut rng = cfg.trial_rng(trial);
                let mut draw = || -> Result<(Capacity, Capacity)> {
                    let tau = sample_capacity(&t_space, cfg, &mut rng)?;
                    let mu0 = sample_capacity(square.h.domain(), cfg, &mut rng)?;
                    let nu0 = sample_capacity(square.s.domain(), cfg, &mut rng)?;
                    Ok((clamp_to_marginal(&square.h, &mu0, &tau)?, clamp_to_marginal(&square.s, &nu0, &tau)?))
                };
                let (mu, nu) = draw().map_err(|e| {
                    counterexample(Some(trial), "sampling a compatible pair", e.to_string(), json!({"diagram": diagram_doc}))
                })?;
                check(&mu, &nu, trial)
            }))
        }
        TrialPlan::Grid(k) => {
            let mus = enumerate_capacities(square.h.domain(), k)?;
            let nus = enumerate_capacities(square.s.domain(), k)?;
            let mu_images = mus.iter().map(|m| m.pushforward(&square.h)).collect::<Result<Vec<_>>>()?;
            let nu_images = nus.iter().map(|n| n.pushforward(&square.s)).collect::<Result<Vec<_>>>()?;
            let pairs: Vec<(usize, usize)> = (0..mus.len())
                .flat_map(|i| (0..nus.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| mu_images[i] == nu_images[j])
                .collect();
            Ok(run_trials("bicommutativity", cfg.seed, pairs.len() as u64, Vec::new(), |trial| {
                let (i, j) = pairs[trial as usize];
                check(&mus[i], &nus[j], trial)
            }))
        }
    }
}

/// Checks the clamp extension against families near `χ(λ⁰)`: exact
/// marginals, and for all-subset neighborhoods `sup_distance(λ, λ⁰) ≤ δ`
/// with `δ = ε`. In singleton mode families only need singleton values
/// strictly within `δ`, and the assertion is `sup_distance(λ, λ⁰) < ε`.
pub fn certify_openness(
    limit: &LimitSpace,
    center: &OpennessCenter,
    epsilon: &Rational,
    neighborhood: Neighborhood,
    cfg: &SamplerConfig,
    trials: u64,
) -> Result<CertificateReport> {
    limit.require_surjective_projections()?;
    let space = limit.space()?.clone();
    if epsilon < &Rational::zero() || (neighborhood == Neighborhood::Singletons && epsilon.is_zero()) {
        return Err(Error::NonPositiveEpsilon(format_rational(epsilon)));
    }
    let delta = epsilon.clone();
    let diagram_doc = diagram_json(limit.diagram());

    let mut preliminary = Vec::new();
    if let OpennessCenter::Fixed(lambda0) = center {
        space.check_same(lambda0.space(), "openness center")?;
        let own = limit.characteristic_map(lambda0)?;
        for pair in envelopes(limit, &own)? {
            let v = lambda0.value(pair.subset);
            if *v < pair.lower || *v > pair.upper {
                preliminary.push(counterexample(
                    None,
                    "l_A ≤ λ⁰(A) ≤ u_A for the marginals of λ⁰",
                    space.render(pair.subset),
                    json!({"diagram": diagram_doc, "lambda0": capacity_json(lambda0)}),
                ));
                break;
            }
        }
    }

    let property = match neighborhood {
        Neighborhood::AllSubsets => "openness",
        Neighborhood::Singletons => "openness-singleton",
    };
    Ok(run_trials(property, cfg.seed, trials, preliminary, |trial| {
        let mut rng = cfg.trial_rng(trial);
        let fail = |assertion: &str, witness: String, inputs: Value| counterexample(Some(trial), assertion, witness, inputs);
        let lambda0 = match center {
            OpennessCenter::Fixed(c) => c.clone(),
            OpennessCenter::Sampled => sample_capacity(&space, cfg, &mut rng)
                .map_err(|e| fail("sampling λ⁰", e.to_string(), json!({"diagram": diagram_doc})))?,
        };
        let family = match neighborhood {
            Neighborhood::AllSubsets => sample_compatible_family(limit, cfg, &mut rng, Some((&lambda0, &delta))).map(|r| r.0),
            Neighborhood::Singletons => singleton_near_family(limit, cfg, &mut rng, &lambda0, &delta),
        }
        .map_err(|e| fail("sampling a nearby family", e.to_string(), json!({"diagram": diagram_doc})))?;
        let inputs = || {
            json!({
                "diagram": diagram_doc,
                "lambda0": capacity_json(&lambda0),
                "marginals": family_json(&family),
                "epsilon": format_rational(epsilon),
            })
        };
        let lambda = clamp_extension(limit, &lambda0, &family)
            .map_err(|e| fail("clamp extension succeeds", e.to_string(), inputs()))?;
        if limit.characteristic_map(&lambda).ok().as_ref() != Some(&family) {
            return Err(fail("χ(λ) = M", String::new(), inputs()));
        }
        let distance = lambda.sup_distance(&lambda0).expect("same space");
        let within = match neighborhood {
            Neighborhood::AllSubsets => distance <= delta,
            Neighborhood::Singletons => distance < *epsilon,
        };
        if !within {
            let worst = space
                .subsets()
                .find(|&a| (lambda.value(a) - lambda0.value(a)) == distance || (lambda0.value(a) - lambda.value(a)) == distance)
                .expect("attained");
            return Err(fail(
                "sup_distance(λ, λ⁰) within δ",
                format!("{} moved by {}", space.render(worst), format_rational(&distance)),
                inputs(),
            ));
        }
        Ok(())
    }))
}

/// Draws families whose singleton values sit strictly within `delta` of
/// those of `χ(λ⁰)`, trying large mixing weights first so that non-singleton
/// values can drift further.
fn singleton_near_family(
    limit: &LimitSpace,
    cfg: &SamplerConfig,
    rng: &mut impl rand::Rng,
    lambda0: &Capacity,
    delta: &Rational,
) -> Result<MarginalFamily> {
    let center = limit.characteristic_map(lambda0)?;
    let one = Rational::from_integer(1.into());
    for _ in 0..64 {
        let (family, _) = sample_compatible_family(limit, cfg, rng, Some((lambda0, &one)))?;
        let close = (0..family.capacities().len())
            .all(|o| family.at(o).singleton_distance(center.at(o)).is_ok_and(|d| d < *delta));
        if close {
            return Ok(family);
        }
    }
    let half = delta * ratio(1, 2);
    Ok(sample_compatible_family(limit, cfg, rng, Some((lambda0, &half)))?.0)
}

/// Every compatible family on the grid that can be found: marginals of all
/// grid capacities on the limit, then (when the per-vertex product is small
/// enough) every compatible combination of per-vertex grid capacities.
pub fn compatible_families_on_grid(limit: &LimitSpace, k: u32) -> Result<Vec<MarginalFamily>> {
    let space = limit.space()?.clone();
    let mut seen: HashSet<Vec<Vec<Rational>>> = HashSet::new();
    let mut families = Vec::new();
    let key = |f: &MarginalFamily| f.capacities().iter().map(|c| c.values().to_vec()).collect::<Vec<_>>();

    let grid: Vec<Rational> = (0..=i64::from(k)).map(|i| ratio(i, i64::from(k))).collect();
    let mut failure = None;
    for_each_capacity(&space, k, ENUMERATION_LIMIT, |levels| {
        if failure.is_some() {
            return;
        }
        let values = levels.iter().map(|&l| grid[l as usize].clone()).collect();
        let lambda = Capacity::new_unchecked(space.clone(), values);
        match limit.characteristic_map(&lambda) {
            Ok(f) => {
                if seen.insert(key(&f)) {
                    families.push(f);
                }
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }

    let d = limit.diagram();
    let per_vertex = (0..d.vertex_count())
        .map(|o| enumerate_capacities(d.space(o), k))
        .collect::<Result<Vec<_>>>()?;
    let product = per_vertex
        .iter()
        .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
        .unwrap_or(usize::MAX);
    if product <= DIRECT_PRODUCT_LIMIT {
        let diagram = Arc::new(d.clone());
        let mut choice = vec![0usize; per_vertex.len()];
        'outer: loop {
            let caps = choice.iter().zip(&per_vertex).map(|(&i, v)| v[i].clone()).collect();
            if let Ok(f) = MarginalFamily::new(diagram.clone(), caps) {
                if seen.insert(key(&f)) {
                    families.push(f);
                }
            }
            for slot in (0..choice.len()).rev() {
                choice[slot] += 1;
                if choice[slot] < per_vertex[slot].len() {
                    continue 'outer;
                }
                choice[slot] = 0;
            }
            break;
        }
    }
    Ok(families)
}

fn families_for(limit: &LimitSpace, plan: TrialPlan) -> Result<(u64, Option<Vec<MarginalFamily>>)> {
    match plan {
        TrialPlan::Sampled(n) => Ok((n, None)),
        TrialPlan::Grid(k) => {
            let families = compatible_families_on_grid(limit, k)?;
            Ok((families.len() as u64, Some(families)))
        }
    }
}

fn family_for_trial(
    limit: &LimitSpace,
    cfg: &SamplerConfig,
    grid: &Option<Vec<MarginalFamily>>,
    trial: u64,
    diagram_doc: &Value,
) -> Result<MarginalFamily, Counterexample> {
    match grid {
        Some(families) => Ok(families[trial as usize].clone()),
        None => sample_compatible_family(limit, cfg, &mut cfg.trial_rng(trial), None)
            .map(|r| r.0)
            .map_err(|e| counterexample(Some(trial), "sampling a family", e.to_string(), json!({"diagram": diagram_doc}))),
    }
}

/// Checks `χ(lower_capacity(M)) = M` for sampled or grid-enumerated
/// compatible families `M`.
pub fn certify_surjectivity(limit: &LimitSpace, cfg: &SamplerConfig, plan: TrialPlan) -> Result<CertificateReport> {
    limit.require_surjective_projections()?;
    let (trials, grid) = families_for(limit, plan)?;
    let diagram_doc = diagram_json(limit.diagram());
    Ok(run_trials("surjectivity", cfg.seed, trials, Vec::new(), |trial| {
        let family = family_for_trial(limit, cfg, &grid, trial, &diagram_doc)?;
        let inputs = || json!({"diagram": diagram_doc, "marginals": family_json(&family)});
        let lower = lower_capacity(limit, &family)
            .map_err(|e| counterexample(Some(trial), "χ(lower_capacity(M)) = M", e.to_string(), inputs()))?;
        if limit.characteristic_map(&lower).ok().as_ref() != Some(&family) {
            return Err(counterexample(Some(trial), "χ(lower_capacity(M)) = M", String::new(), inputs()));
        }
        Ok(())
    }))
}

/// Checks `l = u = μ_o(W)` on every cylinder `cyl(o, W)`.
pub fn certify_cylinder_pinning(limit: &LimitSpace, cfg: &SamplerConfig, plan: TrialPlan) -> Result<CertificateReport> {
    limit.require_surjective_projections()?;
    let (trials, grid) = families_for(limit, plan)?;
    let d = limit.diagram();
    let diagram_doc = diagram_json(d);
    let cylinders: Vec<Vec<crate::space::Subset>> = (0..d.vertex_count())
        .map(|o| d.space(o).subsets().map(|w| limit.cylinder(o, w)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(run_trials("cylinder-pinning", cfg.seed, trials, Vec::new(), |trial| {
        let family = family_for_trial(limit, cfg, &grid, trial, &diagram_doc)?;
        let inputs = || json!({"diagram": diagram_doc, "marginals": family_json(&family)});
        let pairs = envelopes(limit, &family)
            .map_err(|e| counterexample(Some(trial), "envelopes computable", e.to_string(), inputs()))?;
        for (o, cyls) in cylinders.iter().enumerate() {
            for (w, cyl) in d.space(o).subsets().zip(cyls) {
                let pair = &pairs[cyl.index()];
                let target = family.at(o).value(w);
                if pair.lower != *target || pair.upper != *target {
                    return Err(counterexample(
                        Some(trial),
                        "l = u = μ_o(W) on cylinders",
                        format!(
                            "vertex {} W={} l={} u={} μ={}",
                            d.id(o),
                            d.space(o).render(w),
                            format_rational(&pair.lower),
                            format_rational(&pair.upper),
                            format_rational(target)
                        ),
                        inputs(),
                    ));
                }
            }
        }
        Ok(())
    }))
}
