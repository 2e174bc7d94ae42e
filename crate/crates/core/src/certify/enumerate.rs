use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::rational::{ratio, Rational};
use crate::space::{FiniteSpace, Subset};

/// Default guard on the number of enumerated capacities.
pub const ENUMERATION_LIMIT: usize = 500_000;

/// Calls `visit` once for every capacity on `space` with values in
/// `{0, 1/k, …, 1}`, as a table of grid levels `0..=k`. Assignment runs
/// depth-first in subset-index order, so every subset of `A` is already
/// fixed when `A` is reached and its lower bound is known.
pub fn for_each_capacity(
    space: &FiniteSpace,
    k: u32,
    limit: usize,
    mut visit: impl FnMut(&[u32]),
) -> Result<usize> {
    if k == 0 {
        return Err(Error::PreconditionFailed("grid k must be at least 1".into()));
    }
    let count = space.subset_count();
    let mut levels = vec![0u32; count];
    levels[count - 1] = k;
    let mut emitted = 0usize;
    descend(space.len(), k, 1, &mut levels, limit, &mut emitted, &mut visit)?;
    Ok(emitted)
}

fn descend(
    n: usize,
    k: u32,
    index: usize,
    levels: &mut [u32],
    limit: usize,
    emitted: &mut usize,
    visit: &mut impl FnMut(&[u32]),
) -> Result<()> {
    if index >= levels.len() - 1 {
        if *emitted == limit {
            return Err(Error::EnumerationTooLarge { limit });
        }
        *emitted += 1;
        visit(levels);
        return Ok(());
    }
    let a = Subset(index as u32);
    let floor = (0..n)
        .filter(|&p| a.contains(p))
        .map(|p| levels[a.without(p).index()])
        .max()
        .unwrap_or(0);
    for v in floor..=k {
        levels[index] = v;
        descend(n, k, index + 1, levels, limit, emitted, visit)?;
    }
    Ok(())
}

/// Every grid capacity on `space`, in depth-first order.
pub fn enumerate_capacities(space: &FiniteSpace, k: u32) -> Result<Vec<Capacity>> {
    let mut out = Vec::new();
    let denom = i64::from(k);
    let grid: Vec<Rational> = (0..=denom).map(|i| ratio(i, denom)).collect();
    for_each_capacity(space, k, ENUMERATION_LIMIT, |levels| {
        let values = levels.iter().map(|&l| grid[l as usize].clone()).collect();
        out.push(Capacity::new_unchecked(space.clone(), values));
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> FiniteSpace {
        FiniteSpace::new((0..n).map(|i| format!("p{i}"))).unwrap()
    }

    /// Brute force: all tables over the grid, filtered by validation.
    fn brute_count(n: usize, k: u32) -> usize {
        let s = space(n);
        let inner = s.subset_count() - 2;
        let mut count = 0;
        let total = (k as usize + 1).pow(inner as u32);
        for code in 0..total {
            let mut c = code;
            let mut values = vec![ratio(0, 1)];
            for _ in 0..inner {
                values.push(ratio((c % (k as usize + 1)) as i64, i64::from(k)));
                c /= k as usize + 1;
            }
            values.push(ratio(1, 1));
            if Capacity::new(s.clone(), values).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_capacities(&space(1), 1).unwrap().len(), 1);
        assert_eq!(enumerate_capacities(&space(1), 5).unwrap().len(), 1);
        assert_eq!(enumerate_capacities(&space(2), 1).unwrap().len(), 4);
        assert_eq!(enumerate_capacities(&space(2), 2).unwrap().len(), 9);
        for (n, k) in [(2, 3), (3, 1), (3, 2)] {
            assert_eq!(enumerate_capacities(&space(n), k).unwrap().len(), brute_count(n, k));
        }
    }

    #[test]
    fn emitted_once_and_valid() {
        let all = enumerate_capacities(&space(3), 2).unwrap();
        for (i, c) in all.iter().enumerate() {
            assert!(Capacity::new(c.space().clone(), c.values().to_vec()).is_ok());
            assert!(!all[..i].contains(c));
        }
    }

    #[test]
    fn guard() {
        let err = for_each_capacity(&space(3), 2, 10, |_| {}).unwrap_err();
        assert_eq!(err, Error::EnumerationTooLarge { limit: 10 });
        assert!(for_each_capacity(&space(2), 0, 10, |_| {}).is_err());
    }
}
