use num::{One, Zero};
use rand::Rng;

use super::enumerate::{for_each_capacity, ENUMERATION_LIMIT};
use super::{SamplerConfig, SamplerMethod};
use crate::capacity::Capacity;
use crate::choquet::RealFunction;
use crate::error::Result;
use crate::limit::{LimitSpace, MarginalFamily};
use crate::rational::{int, ratio, Rational};
use crate::space::FiniteSpace;

/// Number of interior knots of the random distortion.
const DISTORTION_KNOTS: i64 = 4;

fn uniform_unit(rng: &mut impl Rng, resolution: u32) -> Rational {
    let r = i64::from(resolution);
    ratio(rng.gen_range(0..=r), r)
}

/// A random capacity on `space`; see [`SamplerMethod`] for the methods.
pub fn sample_capacity(space: &FiniteSpace, cfg: &SamplerConfig, rng: &mut impl Rng) -> Result<Capacity> {
    match cfg.method {
        SamplerMethod::RectifiedUniform => Ok(rectified_uniform(space, cfg.resolution, rng)),
        SamplerMethod::DistortedAdditive => Ok(distorted_additive(space, cfg.resolution, rng)),
        SamplerMethod::Grid => grid_choice(space, cfg.grid_k, rng),
    }
}

fn rectified_uniform(space: &FiniteSpace, resolution: u32, rng: &mut impl Rng) -> Capacity {
    let mut values: Vec<Rational> = space.subsets().map(|_| uniform_unit(rng, resolution)).collect();
    for a in space.subsets() {
        for p in a.iter() {
            let below = values[a.without(p).index()].clone();
            if below > values[a.index()] {
                values[a.index()] = below;
            }
        }
    }
    values[0] = Rational::zero();
    *values.last_mut().expect("non-empty") = Rational::one();
    Capacity::new_unchecked(space.clone(), values)
}

fn distorted_additive(space: &FiniteSpace, resolution: u32, rng: &mut impl Rng) -> Capacity {
    let r = i64::from(resolution);
    let weights: Vec<i64> = (0..space.len()).map(|_| rng.gen_range(1..=r)).collect();
    let total: i64 = weights.iter().sum();
    let mut knots: Vec<i64> = (0..DISTORTION_KNOTS).map(|_| rng.gen_range(0..=r)).collect();
    knots.sort_unstable();
    let ys: Vec<Rational> = std::iter::once(0)
        .chain(knots)
        .chain(std::iter::once(r))
        .map(|y| ratio(y, r))
        .collect();
    let segments = int(DISTORTION_KNOTS + 1);
    let distort = |x: Rational| -> Rational {
        if x.is_one() {
            return Rational::one();
        }
        let scaled = &x * &segments;
        let j = scaled.floor();
        let idx: usize = j.to_integer().try_into().expect("small index");
        &ys[idx] + (scaled - j) * (&ys[idx + 1] - &ys[idx])
    };
    let values = space
        .subsets()
        .map(|a| {
            let mass: i64 = a.iter().map(|p| weights[p]).sum();
            distort(ratio(mass, total))
        })
        .collect();
    Capacity::new_unchecked(space.clone(), values)
}

fn grid_choice(space: &FiniteSpace, k: u32, rng: &mut impl Rng) -> Result<Capacity> {
    let mut tables: Vec<Vec<u32>> = Vec::new();
    for_each_capacity(space, k, ENUMERATION_LIMIT, |levels| tables.push(levels.to_vec()))?;
    let chosen = &tables[rng.gen_range(0..tables.len())];
    let values = chosen.iter().map(|&l| ratio(i64::from(l), i64::from(k))).collect();
    Ok(Capacity::new_unchecked(space.clone(), values))
}

/// A random function with values `i/4` for `i` in `-8..=8`.
pub fn sample_function(space: &FiniteSpace, rng: &mut impl Rng) -> RealFunction {
    let values = (0..space.len()).map(|_| ratio(rng.gen_range(-8..=8), 4)).collect();
    RealFunction::new(space.clone(), values).expect("length matches")
}

/// A compatible marginal family, drawn as the marginals of a random limit
/// capacity. With `near = Some((center, delta))` the limit capacity is
/// `(1 − w)·center + w·σ` for a random `σ` and `0 < w ≤ delta`, so every
/// marginal lies within sup-distance `delta` of the center's.
///
/// Returns the family and the limit capacity it came from.
pub fn sample_compatible_family(
    limit: &LimitSpace,
    cfg: &SamplerConfig,
    rng: &mut impl Rng,
    near: Option<(&Capacity, &Rational)>,
) -> Result<(MarginalFamily, Capacity)> {
    limit.require_surjective_projections()?;
    let space = limit.space()?;
    let sigma = sample_capacity(space, cfg, rng)?;
    let lambda = match near {
        None => sigma,
        Some((center, delta)) => {
            let r = i64::from(cfg.resolution);
            let weight = (delta * ratio(rng.gen_range(1..=r), r)).min(Rational::one());
            center.mix(&sigma, &weight)?
        }
    };
    Ok((limit.characteristic_map(&lambda)?, lambda))
}
