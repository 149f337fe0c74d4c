use super::LinearSystem;
use crate::scalar::Scalar;

/// Affine solution set `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSolution<T> {
    pub particular: Vec<T>,
    pub kernel: Vec<Vec<T>>,
}

/// Reduced row echelon form of `[A | b]`; returns the reduced rows and the
/// pivot column of each nonzero row.
pub(crate) fn rref<T: Scalar>(sys: &LinearSystem<T>) -> (Vec<Vec<T>>, Vec<usize>) {
    let n = sys.vars();
    let mut rows: Vec<Vec<T>> = (0..sys.eqs())
        .map(|i| {
            let mut r = sys.matrix.row(i).to_vec();
            r.push(sys.rhs[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..=n {
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(top, p);
        let inv = T::one() / rows[top][col].clone();
        for v in rows[top].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    row[j] = row[j].clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    (rows, pivots)
}

/// Solves `A x = b` over the rationals, or `None` when inconsistent.
pub fn solve_rational<T: Scalar>(sys: &LinearSystem<T>) -> Option<RationalSolution<T>> {
    let n = sys.vars();
    let (rows, pivots) = rref(sys);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![T::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        particular[p] = row[n].clone();
    }
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![T::zero(); n];
            v[f] = T::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Some(RationalSolution { particular, kernel })
}
