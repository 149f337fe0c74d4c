//! Exact primal simplex over a [`Scalar`] with bounded variables.
//!
//! Problem form: maximise `c.x` subject to `A x = b` and `0 <= x_j <= u_j`
//! (where `u_j` may be absent). Two phases with artificial variables; after
//! phase one the artificials remaining in the basis are pinned to `[0, 0]`
//! rather than driven out. Pricing uses the largest reduced cost and falls
//! back to Bland's least-index rule during long runs of degenerate pivots.
//! Bland's rule cannot cycle, and every nondegenerate pivot strictly improves
//! the objective, so every solve terminates.
//!
//! The tableau is kept over the integers: every row carries one positive
//! denominator shared by its entries and its right-hand side, so a pivot is
//! a fraction-free row combination followed by removal of the row content.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct Lp<T> {
    a: Matrix<T>,
    b: Vec<T>,
    c: Vec<T>,
    upper: Vec<Option<T>>,
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 400;

impl<T: Scalar> Lp<T> {
    pub fn new(a: Matrix<T>, b: Vec<T>, c: Vec<T>, upper: Vec<Option<T>>) -> Self {
        assert_eq!(a.rows(), b.len());
        assert_eq!(a.cols(), c.len());
        assert_eq!(a.cols(), upper.len());
        assert!(upper.iter().flatten().all(|u| !u.is_negative()), "negative upper bound");
        Lp { a, b, c, upper }
    }

    pub fn solve(self) -> LpOutcome<T> {
        let scaled = Scaled::new(&self);
        let Some(x) = Tableau::new(&scaled).run() else {
            return LpOutcome::Infeasible;
        };
        let Some(x) = x else { return LpOutcome::Unbounded };
        let x: Vec<T> = x
            .into_iter()
            .zip(&scaled.col_scale)
            .map(|((n, d), s)| T::from_int(n) / T::from_int(d * s.clone()))
            .collect();
        let value = x
            .iter()
            .zip(&self.c)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        LpOutcome::Optimal { x, value }
    }
}

fn lcm_of_denominators<'a, T: Scalar + 'a>(values: impl Iterator<Item = &'a T>) -> T::Int {
    values.fold(T::Int::one(), |acc, v| acc.lcm(&v.parts().1))
}

fn scale_to_int<T: Scalar>(v: &T, by: &T::Int) -> T::Int {
    let (n, d) = v.parts();
    n * (by.clone() / d)
}

/// The problem over the integers: column `j` is substituted by
/// `x_j = x'_j / col_scale[j]` so that its bound is integral, then every
/// row and the objective are cleared of denominators.
struct Scaled<T: Scalar> {
    a: Vec<Vec<T::Int>>,
    b: Vec<T::Int>,
    c: Vec<T::Int>,
    upper: Vec<Option<T::Int>>,
    col_scale: Vec<T::Int>,
}

impl<T: Scalar> Scaled<T> {
    fn new(lp: &Lp<T>) -> Self {
        let (m, n) = lp.a.shape();
        let col_scale: Vec<T::Int> =
            lp.upper.iter().map(|u| u.as_ref().map_or_else(T::Int::one, |u| u.parts().1)).collect();
        let upper = lp.upper.iter().map(|u| u.as_ref().map(|u| u.parts().0)).collect();
        let over = |v: &T, j: usize| v.clone() / T::from_int(col_scale[j].clone());
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for i in 0..m {
            let row: Vec<T> = (0..n).map(|j| over(&lp.a[(i, j)], j)).collect();
            let l = lcm_of_denominators(row.iter().chain(std::iter::once(&lp.b[i])));
            a.push(row.iter().map(|v| scale_to_int(v, &l)).collect());
            b.push(scale_to_int(&lp.b[i], &l));
        }
        let c: Vec<T> = (0..n).map(|j| over(&lp.c[j], j)).collect();
        let l = lcm_of_denominators(c.iter());
        let c = c.iter().map(|v| scale_to_int(v, &l)).collect();
        Scaled { a, b, c, upper, col_scale }
    }
}

/// `num / den` entrywise, `den > 0`.
#[derive(Clone, Debug)]
struct Row<I> {
    num: Vec<I>,
    rhs: I,
    den: I,
}

impl<I: Clone + Integer + Signed> Row<I> {
    /// Divides out the common factor of all entries and the denominator.
    fn reduce(&mut self) {
        let mut g = self.den.clone();
        for v in std::iter::once(&self.rhs).chain(&self.num) {
            if g.is_one() {
                return;
            }
            if !v.is_zero() {
                g = g.gcd(v);
            }
        }
        if g.is_one() {
            return;
        }
        for v in self.num.iter_mut().chain(std::iter::once(&mut self.rhs)) {
            if !v.is_zero() {
                *v = v.clone() / g.clone();
            }
        }
        self.den = self.den.clone() / g;
    }

    /// `self - (self[q] / pivot[q]) * pivot`, fraction-free.
    fn eliminate(&mut self, pivot: &Row<I>, q: usize, pivot_nz: &[usize]) {
        let f = self.num[q].clone();
        if f.is_zero() {
            return;
        }
        let p = pivot.num[q].clone();
        let (f, p) = if p.is_negative() { (-f, -p) } else { (f, p) };
        if !p.is_one() {
            for v in self.num.iter_mut().chain(std::iter::once(&mut self.rhs)) {
                if !v.is_zero() {
                    *v = v.clone() * p.clone();
                }
            }
            self.den = self.den.clone() * p;
        }
        for &j in pivot_nz {
            self.num[j] = self.num[j].clone() - f.clone() * pivot.num[j].clone();
        }
        if !pivot.rhs.is_zero() {
            self.rhs = self.rhs.clone() - f * pivot.rhs.clone();
        }
        self.reduce();
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Var {
    Structural(usize),
    Artificial(usize),
}

struct Tableau<'s, T: Scalar> {
    n: usize,
    rows: Vec<Row<T::Int>>,
    basis: Vec<Var>,
    basic_row: Vec<Option<usize>>,
    at_upper: Vec<bool>,
    upper: &'s [Option<T::Int>],
    cost: &'s [T::Int],
    reduced: Row<T::Int>,
    artificials_pinned: bool,
    pivots: u64,
    pivot_limit: u128,
}

fn binomial_saturating(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `a/b < c/d` for positive `b`, `d`.
fn less<I: Clone + Integer>(a: &I, b: &I, c: &I, d: &I) -> std::cmp::Ordering {
    (a.clone() * d.clone()).cmp(&(c.clone() * b.clone()))
}

impl<'s, T: Scalar> Tableau<'s, T> {
    fn new(p: &'s Scaled<T>) -> Self {
        let m = p.a.len();
        let n = p.c.len();
        let mut rows: Vec<Row<T::Int>> = p
            .a
            .iter()
            .zip(&p.b)
            .map(|(a, b)| {
                let mut row = Row { num: a.clone(), rhs: b.clone(), den: T::Int::one() };
                if b.is_negative() {
                    row.num.iter_mut().for_each(|v| *v = -v.clone());
                    row.rhs = -row.rhs;
                }
                row
            })
            .collect();
        let mut basis: Vec<Var> = (0..m).map(Var::Artificial).collect();
        let mut basic_row = vec![None; n];
        // Unbounded singleton columns with a positive coefficient serve as
        // initial basic variables, saving an artificial for their row.
        let mut row_taken = vec![false; m];
        for j in 0..n {
            if p.upper[j].is_some() {
                continue;
            }
            let mut nz = (0..m).filter(|&i| !rows[i].num[j].is_zero());
            if let (Some(i), None) = (nz.next(), nz.next()) {
                if !row_taken[i] && rows[i].num[j].is_positive() {
                    row_taken[i] = true;
                    rows[i].den = rows[i].num[j].clone();
                    rows[i].reduce();
                    basis[i] = Var::Structural(j);
                    basic_row[j] = Some(i);
                }
            }
        }
        let pivot_limit = binomial_saturating((n + m) as u128, m as u128).saturating_mul(2);
        Tableau {
            n,
            rows,
            basis,
            basic_row,
            at_upper: vec![false; n],
            upper: &p.upper,
            cost: &p.c,
            reduced: Row { num: vec![T::Int::zero(); n], rhs: T::Int::zero(), den: T::Int::one() },
            artificials_pinned: false,
            pivots: 0,
            pivot_limit,
        }
    }

    /// `None` when infeasible, `Some(None)` when unbounded, otherwise the
    /// optimal point as numerator/denominator pairs of the scaled variables.
    #[allow(clippy::type_complexity)]
    fn run(mut self) -> Option<Option<Vec<(T::Int, T::Int)>>> {
        // phase one: maximise -(sum of artificials); artificial rows start
        // with denominator one
        if self.basis.iter().any(|v| matches!(v, Var::Artificial(_))) {
            for (i, var) in self.basis.iter().enumerate() {
                if let Var::Artificial(_) = var {
                    for (acc, v) in self.reduced.num.iter_mut().zip(&self.rows[i].num) {
                        if !v.is_zero() {
                            *acc = acc.clone() + v.clone();
                        }
                    }
                }
            }
            for j in 0..self.n {
                if self.basic_row[j].is_some() {
                    self.reduced.num[j] = T::Int::zero();
                }
            }
            if !self.optimize() {
                unreachable!("phase one objective is bounded");
            }
            let infeasible = self
                .basis
                .iter()
                .zip(&self.rows)
                .any(|(v, r)| matches!(v, Var::Artificial(_)) && r.rhs.is_positive());
            if infeasible {
                return None;
            }
        }
        self.artificials_pinned = true;
        // phase two: reduced costs c_j - sum_i c_B(i) row_i[j]
        let mut reduced = Row { num: self.cost.to_vec(), rhs: T::Int::zero(), den: T::Int::one() };
        for i in 0..self.rows.len() {
            if let Var::Structural(b) = self.basis[i] {
                if self.cost[b].is_zero() {
                    continue;
                }
                let row = &self.rows[i];
                let (cb, d) = (self.cost[b].clone(), row.den.clone());
                for (j, acc) in reduced.num.iter_mut().enumerate() {
                    *acc = acc.clone() * d.clone();
                    if !row.num[j].is_zero() {
                        *acc = acc.clone() - cb.clone() * row.num[j].clone() * reduced.den.clone();
                    }
                }
                reduced.den = reduced.den.clone() * d;
                reduced.reduce();
            }
        }
        self.reduced = reduced;
        if !self.optimize() {
            return Some(None);
        }
        Some(Some(self.solution()))
    }

    fn solution(&self) -> Vec<(T::Int, T::Int)> {
        let mut x: Vec<(T::Int, T::Int)> = (0..self.n)
            .map(|j| match (&self.upper[j], self.at_upper[j]) {
                (Some(u), true) => (u.clone(), T::Int::one()),
                _ => (T::Int::zero(), T::Int::one()),
            })
            .collect();
        for (i, var) in self.basis.iter().enumerate() {
            if let Var::Structural(j) = var {
                x[*j] = (self.rows[i].rhs.clone(), self.rows[i].den.clone());
            }
        }
        x
    }

    fn upper_of(&self, v: Var) -> Option<T::Int> {
        match v {
            Var::Structural(j) => self.upper[j].clone(),
            Var::Artificial(_) if self.artificials_pinned => Some(T::Int::zero()),
            Var::Artificial(_) => None,
        }
    }

    fn var_key(&self, v: Var) -> usize {
        match v {
            Var::Structural(j) => j,
            Var::Artificial(i) => self.n + i,
        }
    }

    fn eligible(&self, j: usize) -> bool {
        if self.basic_row[j].is_some() {
            return false;
        }
        let d = &self.reduced.num[j];
        if self.at_upper[j] {
            d.is_negative()
        } else {
            d.is_positive() && !matches!(&self.upper[j], Some(u) if u.is_zero())
        }
    }

    /// Moves nonbasic `q` by `step` (an integer in scaled units).
    fn shift_basics(&mut self, q: usize, step: &T::Int) {
        for row in &mut self.rows {
            let alpha = &row.num[q];
            if !alpha.is_zero() {
                row.rhs = row.rhs.clone() - step.clone() * alpha.clone();
            }
        }
    }

    /// Runs pivots until optimal (`true`) or unbounded (`false`).
    fn optimize(&mut self) -> bool {
        let mut degenerate_run = 0usize;
        let mut bland = false;
        loop {
            // phase one is done once every artificial sits at zero
            if !self.artificials_pinned
                && self.basis.iter().zip(&self.rows).all(|(v, r)| matches!(v, Var::Structural(_)) || r.rhs.is_zero())
            {
                return true;
            }
            let entering = if bland {
                (0..self.n).find(|&j| self.eligible(j))
            } else {
                (0..self.n)
                    .filter(|&j| self.eligible(j))
                    .max_by(|&x, &y| self.reduced.num[x].abs().cmp(&self.reduced.num[y].abs()).then(y.cmp(&x)))
            };
            let Some(q) = entering else { return true };
            let increasing = !self.at_upper[q];

            // ratio test over fractions `num / den` with `den > 0`
            let one = T::Int::one();
            let mut best: Option<(T::Int, T::Int, Option<usize>, bool)> =
                self.upper[q].clone().map(|u| (u, one.clone(), None, false));
            for i in 0..self.rows.len() {
                let row = &self.rows[i];
                let alpha = &row.num[q];
                if alpha.is_zero() {
                    continue;
                }
                let decreases = alpha.is_positive() == increasing;
                let (num, leaves_upper) = if decreases {
                    (row.rhs.clone(), false)
                } else {
                    match self.upper_of(self.basis[i]) {
                        Some(u) => (u * row.den.clone() - row.rhs.clone(), true),
                        None => continue,
                    }
                };
                let den = alpha.abs();
                let better = match &best {
                    None => true,
                    Some((bn, bd, r, _)) => match less(&num, &den, bn, bd) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => match r {
                            None => false,
                            Some(r) => self.var_key(self.basis[i]) < self.var_key(self.basis[*r]),
                        },
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((num, den, Some(i), leaves_upper));
                }
            }
            let Some((theta, _, row, leaves_upper)) = best else { return false };

            self.pivots += 1;
            assert!((self.pivots as u128) <= self.pivot_limit, "simplex exceeded its basis-count bound");
            if theta.is_zero() {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }

            match row {
                None => {
                    // bound flip
                    let u = self.upper[q].clone().expect("flip needs a bound");
                    let step = if increasing { u } else { -u };
                    self.shift_basics(q, &step);
                    self.at_upper[q] = !self.at_upper[q];
                }
                Some(r) => {
                    if self.at_upper[q] {
                        let u = self.upper[q].clone().expect("at an upper bound");
                        self.shift_basics(q, &-u);
                        self.at_upper[q] = false;
                    }
                    let leaving = self.basis[r];
                    self.pivot(r, q);
                    self.basis[r] = Var::Structural(q);
                    self.basic_row[q] = Some(r);
                    if let Var::Structural(l) = leaving {
                        self.basic_row[l] = None;
                        if leaves_upper {
                            if let Some(u) = self.upper[l].clone() {
                                self.at_upper[l] = true;
                                self.shift_basics(l, &u);
                            }
                        }
                    }
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let mut pivot = std::mem::replace(&mut self.rows[r], Row { num: Vec::new(), rhs: T::Int::zero(), den: T::Int::one() });
        // the pivot row becomes num / num[q]
        if pivot.num[q].is_negative() {
            pivot.num.iter_mut().for_each(|v| *v = -v.clone());
            pivot.rhs = -pivot.rhs.clone();
        }
        pivot.den = pivot.num[q].clone();
        pivot.reduce();
        let nz: Vec<usize> = (0..self.n).filter(|&j| !pivot.num[j].is_zero()).collect();
        for row in &mut self.rows {
            if !row.num.is_empty() {
                row.eliminate(&pivot, q, &nz);
            }
        }
        self.reduced.eliminate(&pivot, q, &nz);
        self.rows[r] = pivot;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, RatMat};

    fn r(v: i64) -> Rat {
        Rat::from_i64(v)
    }

    #[test]
    fn small_max() {
        // max x + y, x + 2y + s = 4, 3x + y + t = 6
        let a = RatMat::from_i64(&[&[1, 2, 1, 0], &[3, 1, 0, 1]]);
        let lp = Lp::new(a, vec![r(4), r(6)], vec![r(1), r(1), r(0), r(0)], vec![None; 4]);
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, Rat::new(14.into(), 5.into()));
                assert_eq!(x[0], Rat::new(8.into(), 5.into()));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = RatMat::from_i64(&[&[1, 1]]);
        assert_eq!(Lp::new(a.clone(), vec![r(-1)], vec![r(0), r(0)], vec![None; 2]).solve(), LpOutcome::Infeasible);
        let a = RatMat::from_i64(&[&[1, -1]]);
        assert_eq!(Lp::new(a, vec![r(0)], vec![r(1), r(0)], vec![None; 2]).solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn upper_bounds_flip() {
        // max x0 + x1, x0 - x1 = 0, x0 <= 3
        let a = RatMat::from_i64(&[&[1, -1]]);
        let lp = Lp::new(a, vec![r(0)], vec![r(1), r(1)], vec![Some(r(3)), None]);
        assert_eq!(lp.solve(), LpOutcome::Optimal { x: vec![r(3), r(3)], value: r(6) });
    }

    #[test]
    fn redundant_rows() {
        let a = RatMat::from_i64(&[&[1, 1], &[2, 2]]);
        let lp = Lp::new(a, vec![r(1), r(2)], vec![r(1), r(0)], vec![None; 2]);
        assert_eq!(lp.solve(), LpOutcome::Optimal { x: vec![r(1), r(0)], value: r(1) });
    }
}
