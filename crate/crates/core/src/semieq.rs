//! Linear systems with implications `x_i > 0 => x_j > 0`, solved over the
//! nonnegative rationals.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{feasible_nonneg_strict, max_support_solution, LinearSystem};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiEq<T> {
    pub system: LinearSystem<T>,
    pub implications: BTreeSet<(usize, usize)>,
}

impl<T: Scalar> SemiEq<T> {
    pub fn new(system: LinearSystem<T>, implications: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let implications: BTreeSet<_> = implications.into_iter().collect();
        let n = system.vars();
        if let Some(&(i, j)) = implications.iter().find(|&&(i, j)| i >= n || j >= n) {
            return Err(Error::Input(format!("implication ({i}, {j}) refers to a missing variable")));
        }
        Ok(SemiEq { system, implications })
    }

    pub fn vars(&self) -> usize {
        self.system.vars()
    }

    /// Exact check of equations, nonnegativity and every implication.
    pub fn is_solution(&self, x: &[T]) -> bool {
        self.system.is_solution(x)
            && x.iter().all(|v| !v.is_negative())
            && self.implications.iter().all(|&(i, j)| !x[i].is_positive() || x[j].is_positive())
    }
}

/// Saturation: take a support-maximal solution over the active variables;
/// any variable whose implication target is zero there is zero in every
/// solution, so deactivate it and repeat. Stops after at most `n` rounds.
pub fn solve_qplus<T: Scalar>(se: &SemiEq<T>) -> Option<Vec<T>> {
    let n = se.vars();
    let mut active = vec![true; n];
    loop {
        let x = max_support_solution(&se.system, &active)?;
        let mut changed = false;
        for &(i, j) in &se.implications {
            if x[i].is_positive() && !x[j].is_positive() {
                active[i] = false;
                changed = true;
            }
        }
        if !changed {
            debug_assert!(se.is_solution(&x));
            return Some(x);
        }
    }
}

/// Largest variable count [`oracle_subset`] accepts.
pub const ORACLE_MAX_VARS: usize = 16;

/// Reference procedure: tries every implication-closed support.
pub fn oracle_subset<T: Scalar>(se: &SemiEq<T>) -> Result<Option<Vec<T>>> {
    let n = se.vars();
    if n > ORACLE_MAX_VARS {
        return Err(Error::Budget(format!("{n} variables exceed the subset oracle limit of {ORACLE_MAX_VARS}")));
    }
    for mask in 0u32..(1u32 << n) {
        let inside = |i: usize| mask >> i & 1 == 1;
        if se.implications.iter().any(|&(i, j)| inside(i) && !inside(j)) {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&i| inside(i)).collect();
        let sub = se.system.restrict(&keep);
        let all: Vec<usize> = (0..keep.len()).collect();
        if let Some(y) = feasible_nonneg_strict(&sub, &all) {
            let mut x = vec![T::zero(); n];
            for (k, &i) in keep.iter().enumerate() {
                x[i] = y[k].clone();
            }
            return Ok(Some(x));
        }
    }
    Ok(None)
}
