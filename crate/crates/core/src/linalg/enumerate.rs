use num_traits::Zero;

use super::LinearSystem;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default node budget for [`enumerate_n_solutions_bounded`].
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Nonnegative integer solutions found inside a box. `exhausted` is set when
/// the search stopped on its node budget, in which case `solutions` may be
/// incomplete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration<T> {
    pub solutions: Vec<Vec<T>>,
    pub exhausted: bool,
}

/// All `x` in `{0..=entry_bound}^n` with `A x = b`, in lexicographic order.
pub fn enumerate_n_solutions_bounded<T: Scalar>(
    sys: &LinearSystem<T>,
    entry_bound: u64,
) -> Enumeration<T> {
    enumerate_with_bounds(sys, &vec![entry_bound; sys.vars()], DEFAULT_BUDGET)
        .expect("bounds have the right length")
}

/// Like [`enumerate_n_solutions_bounded`] with a separate bound per variable
/// and an explicit node budget.
pub fn enumerate_with_bounds<T: Scalar>(
    sys: &LinearSystem<T>,
    bounds: &[u64],
    budget: u64,
) -> Result<Enumeration<T>> {
    let n = sys.vars();
    if bounds.len() != n {
        return Err(Error::Dimension(format!("{} bounds for {} variables", bounds.len(), n)));
    }
    let (lo, hi) = suffix_ranges(sys, bounds);
    let mut search = Search {
        sys,
        bounds,
        stop_after: usize::MAX,
        lo,
        hi,
        residual: sys.rhs.clone(),
        x: Vec::with_capacity(n),
        out: Vec::new(),
        nodes: 0,
        budget,
    };
    let complete = search.go();
    Ok(Enumeration { solutions: search.out, exhausted: !complete })
}

/// The lexicographically first solution in the box, if the search finds one
/// within `budget` nodes. `exhausted` is set when the budget ran out first.
pub fn first_n_solution_bounded<T: Scalar>(
    sys: &LinearSystem<T>,
    bounds: &[u64],
    budget: u64,
) -> Result<Enumeration<T>> {
    let n = sys.vars();
    if bounds.len() != n {
        return Err(Error::Dimension(format!("{} bounds for {} variables", bounds.len(), n)));
    }
    let (lo, hi) = suffix_ranges(sys, bounds);
    let mut search = Search {
        sys,
        bounds,
        stop_after: 1,
        lo,
        hi,
        residual: sys.rhs.clone(),
        x: Vec::with_capacity(n),
        out: Vec::new(),
        nodes: 0,
        budget,
    };
    let complete = search.go();
    let exhausted = !complete && search.out.is_empty();
    Ok(Enumeration { solutions: search.out, exhausted })
}

/// Per row and suffix position, the least and greatest value the suffix of
/// the row can take over the box.
#[allow(clippy::type_complexity)]
fn suffix_ranges<T: Scalar>(sys: &LinearSystem<T>, bounds: &[u64]) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let (m, n) = sys.matrix.shape();
    let ub: Vec<T> = bounds.iter().map(|&b| T::from_i64(b as i64)).collect();
    let mut lo = vec![vec![T::zero(); n + 1]; m];
    let mut hi = vec![vec![T::zero(); n + 1]; m];
    for i in 0..m {
        for j in (0..n).rev() {
            let v = sys.matrix[(i, j)].clone() * ub[j].clone();
            let (l, h) = if v.is_negative() { (v, T::zero()) } else { (T::zero(), v) };
            lo[i][j] = lo[i][j + 1].clone() + l;
            hi[i][j] = hi[i][j + 1].clone() + h;
        }
    }
    (lo, hi)
}

struct Search<'a, T> {
    sys: &'a LinearSystem<T>,
    bounds: &'a [u64],
    stop_after: usize,
    lo: Vec<Vec<T>>,
    hi: Vec<Vec<T>>,
    residual: Vec<T>,
    x: Vec<T>,
    out: Vec<Vec<T>>,
    nodes: u64,
    budget: u64,
}

impl<T: Scalar> Search<'_, T> {
    /// Returns `false` once the budget runs out.
    fn go(&mut self) -> bool {
        let k = self.x.len();
        let m = self.residual.len();
        if (0..m).any(|i| self.residual[i] < self.lo[i][k] || self.residual[i] > self.hi[i][k]) {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if k == self.bounds.len() {
            if self.residual.iter().all(Zero::is_zero) {
                self.out.push(self.x.clone());
                if self.out.len() >= self.stop_after {
                    return false;
                }
            }
            return true;
        }
        let col: Vec<T> = self.sys.matrix.col(k);
        for v in 0..=self.bounds[k] {
            let val = T::from_i64(v as i64);
            if v > 0 {
                for i in 0..m {
                    if !col[i].is_zero() {
                        self.residual[i] = self.residual[i].clone() - col[i].clone();
                    }
                }
            }
            self.x.push(val);
            let ok = self.go();
            self.x.pop();
            if !ok {
                return false;
            }
        }
        let total = T::from_i64(self.bounds[k] as i64);
        for i in 0..m {
            if !col[i].is_zero() {
                self.residual[i] = self.residual[i].clone() + col[i].clone() * total.clone();
            }
        }
        true
    }
}
