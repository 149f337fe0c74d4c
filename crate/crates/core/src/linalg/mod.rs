//! Exact linear algebra: rational and integer equation solving, an exact
//! simplex engine, and bounded enumeration of nonnegative integer solutions.

mod builder;
mod enumerate;
mod gauss;
mod integer;
mod modular;
mod support;
pub mod simplex;

pub use builder::SystemBuilder;
pub use enumerate::{enumerate_n_solutions_bounded, enumerate_with_bounds, first_n_solution_bounded, Enumeration};
pub use gauss::{solve_rational, RationalSolution};
pub use integer::solve_integer;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use simplex::{Lp, LpOutcome};

/// `A x = b` with `A` of shape `eqs x vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem<T> {
    pub matrix: Matrix<T>,
    pub rhs: Vec<T>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(matrix: Matrix<T>, rhs: Vec<T>) -> Result<Self> {
        if matrix.rows() != rhs.len() {
            return Err(Error::Dimension(format!(
                "{} equations but rhs of length {}",
                matrix.rows(),
                rhs.len()
            )));
        }
        Ok(LinearSystem { matrix, rhs })
    }

    pub fn homogeneous(matrix: Matrix<T>) -> Self {
        let rhs = vec![T::zero(); matrix.rows()];
        LinearSystem { matrix, rhs }
    }

    pub fn from_i64(rows: &[&[i64]], rhs: &[i64]) -> Self {
        Self::new(Matrix::from_i64(rows), rhs.iter().map(|&v| T::from_i64(v)).collect())
            .expect("consistent literal")
    }

    pub fn vars(&self) -> usize {
        self.matrix.cols()
    }

    pub fn eqs(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.is_integral() && self.rhs.iter().all(Scalar::is_integral)
    }

    /// Exact re-substitution check.
    pub fn is_solution(&self, x: &[T]) -> bool {
        x.len() == self.vars() && self.matrix.mul_vec(x).map_or(false, |ax| ax == self.rhs)
    }

    /// The system over the variables in `keep` only (others fixed to zero).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let cols: Vec<Vec<T>> = keep.iter().map(|&j| self.matrix.col(j)).collect();
        LinearSystem {
            matrix: Matrix::from_columns(self.eqs(), &cols).expect("columns have matching length"),
            rhs: self.rhs.clone(),
        }
    }
}

/// Splits an integral vector into its positive and negative parts:
/// `v = plus - minus`, both nonnegative with disjoint supports.
pub fn split_pos_neg<T: Scalar>(v: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    if let Some(i) = v.iter().position(|x| !x.is_integral()) {
        return Err(Error::Input(format!("entry {i} ({}) is not an integer", v[i])));
    }
    Ok(v.iter()
        .map(|x| {
            if x.is_negative() {
                (T::zero(), -x.clone())
            } else {
                (x.clone(), T::zero())
            }
        })
        .unzip())
}

/// Some `x >= 0` with `A x = b` and `x_i > 0` for every `i` in `strict`.
///
/// Decided by maximising a threshold `t <= 1` subject to `x_i >= t` on the
/// strict indices: the solution set is convex, so a strictly positive point
/// exists exactly when the optimum is positive.
pub fn feasible_nonneg_strict<T: Scalar>(sys: &LinearSystem<T>, strict: &[usize]) -> Option<Vec<T>> {
    let n = sys.vars();
    let mut strict: Vec<usize> = strict.to_vec();
    strict.sort_unstable();
    strict.dedup();
    assert!(strict.iter().all(|&i| i < n), "strict index out of range");
    if strict.is_empty() {
        return feasible_nonneg(sys);
    }
    // columns: x (n) | t | sigma (one per strict index)
    let k = strict.len();
    let cols = n + 1 + k;
    let mut a = Matrix::zeros(sys.eqs() + k, cols);
    for i in 0..sys.eqs() {
        for j in 0..n {
            a[(i, j)] = sys.matrix[(i, j)].clone();
        }
    }
    let mut b = sys.rhs.clone();
    for (r, &i) in strict.iter().enumerate() {
        let row = sys.eqs() + r;
        a[(row, i)] = T::one();
        a[(row, n)] = -T::one();
        a[(row, n + 1 + r)] = -T::one();
        b.push(T::zero());
    }
    let mut c = vec![T::zero(); cols];
    c[n] = T::one();
    let mut upper = vec![None; cols];
    upper[n] = Some(T::one());
    match Lp::new(a, b, c, upper).solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some(x[..n].to_vec()),
        LpOutcome::Unbounded => unreachable!("threshold is bounded by one"),
        _ => None,
    }
}

/// Some `x >= 0` with `A x = b`.
pub fn feasible_nonneg<T: Scalar>(sys: &LinearSystem<T>) -> Option<Vec<T>> {
    let n = sys.vars();
    match Lp::new(sys.matrix.clone(), sys.rhs.clone(), vec![T::zero(); n], vec![None; n]).solve() {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// A nonnegative solution of `A x = b` whose support is maximal, i.e. contains
/// the support of every nonnegative solution, restricted to the variables with
/// `allowed[i]` (the others are fixed to zero). `None` when infeasible.
///
/// One LP over the homogenised cone `{(x, tau) >= 0 : A x = tau b}`: write
/// `x = y + s` with `0 <= y <= 1` and maximise the sum of `y`. Since the cone is
/// closed under scaling, the optimum sets `y_i = 1` on the whole maximal support.
pub fn max_support_solution<T: Scalar>(sys: &LinearSystem<T>, allowed: &[bool]) -> Option<Vec<T>> {
    assert_eq!(allowed.len(), sys.vars());
    let keep: Vec<usize> = (0..sys.vars()).filter(|&i| allowed[i]).collect();
    match certified_max_support(sys, &keep) {
        Some(found) => found,
        None => {
            log::debug!("max-support certificate failed; using the exact simplex");
            simplex_max_support(sys, &keep)
        }
    }
}

/// The homogenised cone as integer rows over `keep` plus a last column for
/// `tau`; `None` (outer) when the certificates do not check.
fn certified_max_support<T: Scalar>(sys: &LinearSystem<T>, keep: &[usize]) -> Option<Option<Vec<T>>> {
    let width = keep.len() + 1;
    let mut rows = Vec::new();
    for i in 0..sys.eqs() {
        let mut row: Vec<(usize, BigRational)> = keep
            .iter()
            .enumerate()
            .filter(|(_, &j)| !sys.matrix[(i, j)].is_zero())
            .map(|(jj, &j)| (jj, sys.matrix[(i, j)].to_big()))
            .collect();
        if !sys.rhs[i].is_zero() {
            row.push((keep.len(), -sys.rhs[i].to_big()));
        }
        if row.is_empty() {
            continue;
        }
        let l = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
        rows.push(row.into_iter().map(|(c, v)| (c, (v * BigRational::from_integer(l.clone())).to_integer())).collect());
    }
    let x = support::cone_max_support(&rows, width)?;
    let tau = &x[keep.len()];
    if !tau.is_positive() {
        return Some(None);
    }
    let mut out = vec![T::zero(); sys.vars()];
    for (jj, &j) in keep.iter().enumerate() {
        out[j] = T::from_big(&(&x[jj] / tau))?;
    }
    debug_assert!(sys.is_solution(&out));
    Some(Some(out))
}

fn simplex_max_support<T: Scalar>(sys: &LinearSystem<T>, keep: &[usize]) -> Option<Vec<T>> {
    let n = sys.vars();
    let m = keep.len();
    // columns: y (m) | s (m) | y_tau | s_tau
    let cols = 2 * m + 2;
    let mut a = Matrix::zeros(sys.eqs(), cols);
    for i in 0..sys.eqs() {
        for (jj, &j) in keep.iter().enumerate() {
            let v = &sys.matrix[(i, j)];
            if !v.is_zero() {
                a[(i, jj)] = v.clone();
                a[(i, m + jj)] = v.clone();
            }
        }
        let b = &sys.rhs[i];
        if !b.is_zero() {
            a[(i, 2 * m)] = -b.clone();
            a[(i, 2 * m + 1)] = -b.clone();
        }
    }
    let mut c = vec![T::zero(); cols];
    let mut upper = vec![None; cols];
    for jj in 0..m {
        c[jj] = T::one();
        upper[jj] = Some(T::one());
    }
    c[2 * m] = T::one();
    upper[2 * m] = Some(T::one());
    let rhs = vec![T::zero(); sys.eqs()];
    let LpOutcome::Optimal { x, .. } = Lp::new(a, rhs, c, upper).solve() else {
        unreachable!("bounded objective over a nonempty cone");
    };
    let tau = x[2 * m].clone() + x[2 * m + 1].clone();
    if !tau.is_positive() {
        return None;
    }
    let mut out = vec![T::zero(); n];
    for (jj, &j) in keep.iter().enumerate() {
        out[j] = (x[jj].clone() + x[m + jj].clone()) / tau.clone();
    }
    debug_assert!(sys.is_solution(&out));
    Some(out)
}
