use std::ops::Range;

use super::LinearSystem;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Incremental construction of a [`LinearSystem`] from sparse rows.
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder<T> {
    vars: usize,
    rows: Vec<(Vec<(usize, T)>, T)>,
}

impl<T: Scalar> SystemBuilder<T> {
    pub fn new() -> Self {
        SystemBuilder { vars: 0, rows: Vec::new() }
    }

    /// Allocates `n` fresh variables.
    pub fn vars(&mut self, n: usize) -> Range<usize> {
        let start = self.vars;
        self.vars += n;
        start..self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    /// Adds `sum coeff * x_var = rhs`; repeated variables are accumulated.
    pub fn eq(&mut self, terms: Vec<(usize, T)>, rhs: T) {
        debug_assert!(terms.iter().all(|(v, _)| *v < self.vars));
        self.rows.push((terms, rhs));
    }

    /// Appends the rows of `sys`, with its variable `j` mapped to `map[j]`.
    pub fn embed(&mut self, sys: &LinearSystem<T>, map: &[usize]) {
        for i in 0..sys.eqs() {
            let terms = (0..sys.vars())
                .filter(|&j| !sys.matrix[(i, j)].is_zero())
                .map(|j| (map[j], sys.matrix[(i, j)].clone()))
                .collect();
            self.eq(terms, sys.rhs[i].clone());
        }
    }

    pub fn build(self) -> LinearSystem<T> {
        let mut m: Matrix<T> = Matrix::zeros(self.rows.len(), self.vars);
        let mut rhs = Vec::with_capacity(self.rows.len());
        for (i, (terms, b)) in self.rows.into_iter().enumerate() {
            for (v, c) in terms {
                m[(i, v)] = m[(i, v)].clone() + c;
            }
            rhs.push(b);
        }
        LinearSystem { matrix: m, rhs }
    }
}
