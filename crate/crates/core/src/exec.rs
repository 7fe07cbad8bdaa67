//! Execution mode and work budgets.
//!
//! Every data-parallel loop in the crate goes through [`Exec`], so results are
//! identical whichever mode runs them: reductions are sums of integers and
//! collected vectors keep input order. Without the `parallel` feature,
//! [`Exec::Parallel`] runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};

/// How data-parallel loops are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `f(i)` for `i in 0..n`, collected in index order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// `f(item)` for every item, collected in input order.
    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Sum of `f(i)` over `0..n`.
    pub fn sum_range<F>(self, n: usize, f: F) -> u128
    where
        F: Fn(usize) -> u128 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).sum(),
            _ => (0..n).map(f).sum(),
        }
    }

    /// First index in `0..n` (smallest) for which `f` returns `Some`, with its value.
    pub fn find_first<R, F>(self, n: usize, f: F) -> Option<(usize, R)>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n)
                .into_par_iter()
                .filter_map(|i| f(i).map(|r| (i, r)))
                .min_by_key(|(i, _)| *i),
            _ => (0..n).find_map(|i| f(i).map(|r| (i, r))),
        }
    }

    /// Sorts in place; the result does not depend on the mode.
    pub fn sort_unstable<T: Ord + Send>(self, v: &mut [T]) {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => v.par_sort_unstable(),
            _ => v.sort_unstable(),
        }
    }
}

/// Environment variable overriding [`Budget::points`].
pub const ENV_BUDGET_POINTS: &str = "LAPPOLY_BUDGET_POINTS";
/// Environment variable overriding [`Budget::cells`].
pub const ENV_BUDGET_CELLS: &str = "LAPPOLY_BUDGET_CELLS";

/// Upper limits on enumeration work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Candidate lattice points a bounding-box scan may visit.
    pub points: u64,
    /// Maximal simplices (or parallelepiped points) a method may materialize.
    pub cells: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            points: 1_000_000_000,
            cells: 1_000_000,
        }
    }
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        points: u64::MAX,
        cells: u64::MAX,
    };

    /// Defaults overridden by `LAPPOLY_BUDGET_POINTS` / `LAPPOLY_BUDGET_CELLS`.
    pub fn from_env() -> Result<Budget> {
        let mut b = Budget::default();
        if let Some(v) = read_env(ENV_BUDGET_POINTS)? {
            b.points = v;
        }
        if let Some(v) = read_env(ENV_BUDGET_CELLS)? {
            b.cells = v;
        }
        Ok(b)
    }

    pub fn check_points(&self, required: u128) -> Result<()> {
        check("lattice points", required, self.points)
    }

    pub fn check_cells(&self, required: u128) -> Result<()> {
        check("cells", required, self.cells)
    }
}

fn check(resource: &'static str, required: u128, limit: u64) -> Result<()> {
    if required > limit as u128 {
        Err(Error::Budget {
            resource,
            required,
            limit: limit as u128,
        })
    } else {
        Ok(())
    }
}

fn read_env(name: &str) -> Result<Option<u64>> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .replace('_', "")
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("{name}={s:?} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.sum_range(1000, |i| i as u128), 499_500);
            assert_eq!(exec.map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(exec.find_first(100, |i| (i % 7 == 6).then_some(i)), Some((6, 6)));
        }
    }

    #[test]
    fn budget_errors_are_explicit() {
        let b = Budget { points: 10, cells: 3 };
        assert!(b.check_points(10).is_ok());
        assert!(matches!(b.check_cells(4), Err(Error::Budget { required: 4, .. })));
    }
}
