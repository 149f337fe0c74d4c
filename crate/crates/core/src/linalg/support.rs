//! Maximal supports proposed in floating point and certified exactly.
//!
//! For an integer matrix `H` the cone `{x >= 0 : H x = 0}` has a largest
//! support `S`. A floating-point LP guesses `S`; two exact certificates then
//! settle it:
//!
//! * a point of the cone that is positive on all of `S`, and
//! * a row combination `z` with `z^T H` zero on `S` and positive off it, so
//!   that `0 = z^T H x` forces every point of the cone to vanish outside `S`.
//!
//! Both are computed from the float data by fixing the free coordinates to
//! nearby rationals and solving for the rest exactly. When rounding or the
//! guess itself is off, a certificate fails to check and the caller falls back
//! to an exact method.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular::{echelon, Lifter, SparseRows};

/// Largest denominator tried when rounding a float to a rational.
const MAX_DENOMINATOR: i64 = 1 << 20;

/// A point of the cone with certified maximal support, or `None` when the
/// certificates could not be produced.
pub(crate) fn cone_max_support(h: &SparseRows, width: usize) -> Option<Vec<BigRational>> {
    let (y, x) = float_max_support(h, width)?;
    let support: Vec<usize> = (0..width).filter(|&j| y[j] > 0.5).collect();
    let (prow, pcol) = echelon(h, &support, width);
    let block: SparseRows = {
        let mut at = vec![usize::MAX; width];
        for (k, &c) in pcol.iter().enumerate() {
            at[c] = k;
        }
        prow.iter()
            .map(|&i| h[i].iter().filter(|(c, _)| at[*c] != usize::MAX).map(|(c, v)| (at[*c], v.clone())).collect())
            .collect()
    };
    let lifter = Lifter::new(block.clone())?;
    let point = interior_point(h, width, &support, &prow, &pcol, &lifter, &x)?;
    if support.len() < width {
        let transposed = Lifter::new(transpose(&block, pcol.len()))?;
        separate(h, width, &support, &prow, &pcol, &transposed)?;
    }
    Some(point)
}

/// `(y, y + s)` of an optimal solution of `max sum y` over
/// `H (y + s) = 0`, `0 <= y <= 1`, `s >= 0`.
fn float_max_support(h: &SparseRows, width: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let y: Vec<_> = (0..width).map(|_| lp.add_var(1.0, (0.0, 1.0))).collect();
    let s: Vec<_> = (0..width).map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for row in h {
        let mut e = LinearExpr::empty();
        for (c, v) in row {
            let f = v.to_f64()?;
            e.add(y[*c], f);
            e.add(s[*c], f);
        }
        lp.add_constraint(e, ComparisonOp::Eq, 0.0);
    }
    let solved = lp.solve().ok()?;
    let sol = solved.solution()?;
    let ys: Vec<f64> = y.iter().map(|&v| sol.var_value(v)).collect();
    let xs: Vec<f64> = y.iter().zip(&s).map(|(&a, &b)| sol.var_value(a) + sol.var_value(b)).collect();
    Some((ys, xs))
}

/// `z` with `(z^T H)_j = 0` on the support and `>= 1` off it, in floats.
fn float_separator(h: &SparseRows, width: usize, in_support: &[bool]) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let z: Vec<_> = (0..h.len()).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    let mut cols: Vec<LinearExpr> = (0..width).map(|_| LinearExpr::empty()).collect();
    for (i, row) in h.iter().enumerate() {
        for (c, v) in row {
            cols[*c].add(z[i], v.to_f64()?);
        }
    }
    for (j, e) in cols.into_iter().enumerate() {
        if in_support[j] {
            lp.add_constraint(e, ComparisonOp::Eq, 0.0);
        } else {
            lp.add_constraint(e, ComparisonOp::Ge, 1.0);
        }
    }
    let solved = lp.solve().ok()?;
    let sol = solved.solution()?;
    Some(z.iter().map(|&v| sol.var_value(v)).collect())
}

/// Continued-fraction rounding to a rational with a small denominator.
fn rational_near(f: f64) -> Option<BigRational> {
    if !f.is_finite() {
        return None;
    }
    let tolerance = 1e-9 * f.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut rest = f;
    loop {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > i128::from(MAX_DENOMINATOR) {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - rest.floor();
        if (f - p1 as f64 / q1 as f64).abs() <= tolerance || frac < 1e-12 {
            break;
        }
        rest = 1.0 / frac;
    }
    (q1 > 0).then(|| BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigInt {
    values.fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

fn transpose(rows: &SparseRows, width: usize) -> SparseRows {
    let mut out: SparseRows = vec![Vec::new(); width];
    for (i, row) in rows.iter().enumerate() {
        for (c, v) in row {
            out[*c].push((i, v.clone()));
        }
    }
    out
}

/// Fixes the non-pivot support coordinates to rounded float values and
/// solves for the pivot coordinates; checks positivity and `H x = 0`.
fn interior_point(
    h: &SparseRows,
    width: usize,
    support: &[usize],
    prow: &[usize],
    pcol: &[usize],
    lifter: &Lifter,
    guess: &[f64],
) -> Option<Vec<BigRational>> {
    let mut x: Vec<BigRational> = vec![BigRational::zero(); width];
    let mut is_pivot = vec![false; width];
    for &c in pcol {
        is_pivot[c] = true;
    }
    for &j in support.iter().filter(|&&j| !is_pivot[j]) {
        x[j] = rational_near(guess[j])?;
        if !x[j].is_positive() {
            return None;
        }
    }
    let l = lcm_of_denominators(x.iter());
    let scaled: Vec<BigInt> = x.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
    let rhs: Vec<BigInt> = prow
        .iter()
        .map(|&i| -h[i].iter().filter(|(c, _)| !is_pivot[*c]).map(|(c, v)| v * &scaled[*c]).sum::<BigInt>())
        .collect();
    let (nums, den) = lifter.solve(&rhs)?;
    // x = X / (den * l) with X integral
    let mut big: Vec<BigInt> = scaled.iter().map(|v| v * &den).collect();
    for (k, &c) in pcol.iter().enumerate() {
        big[c] = nums[k].clone();
    }
    if support.iter().any(|&j| !big[j].is_positive()) {
        return None;
    }
    let balanced = h.iter().all(|row| row.iter().map(|(c, v)| v * &big[*c]).sum::<BigInt>().is_zero());
    if !balanced {
        return None;
    }
    let scale = den * l;
    Some(big.into_iter().map(|v| BigRational::new(v, scale.clone())).collect())
}

/// Produces and checks the row combination that rules out every coordinate
/// outside the support.
fn separate(
    h: &SparseRows,
    width: usize,
    support: &[usize],
    prow: &[usize],
    pcol: &[usize],
    transposed: &Lifter,
) -> Option<()> {
    let mut in_support = vec![false; width];
    for &j in support {
        in_support[j] = true;
    }
    let guess = float_separator(h, width, &in_support)?;
    let mut is_pivot_row = vec![false; h.len()];
    for &i in prow {
        is_pivot_row[i] = true;
    }
    let mut z: Vec<BigRational> = vec![BigRational::zero(); h.len()];
    for i in (0..h.len()).filter(|&i| !is_pivot_row[i]) {
        z[i] = rational_near(guess[i])?;
    }
    let l = lcm_of_denominators(z.iter());
    let scaled: Vec<BigInt> = z.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
    // pivot block columns: (z^T H)_{pcol[k]} restricted to free rows, negated
    let mut rhs = vec![BigInt::zero(); pcol.len()];
    let mut at = vec![usize::MAX; width];
    for (k, &c) in pcol.iter().enumerate() {
        at[c] = k;
    }
    for (i, row) in h.iter().enumerate() {
        if is_pivot_row[i] || scaled[i].is_zero() {
            continue;
        }
        for (c, v) in row {
            if at[*c] != usize::MAX {
                rhs[at[*c]] -= v * &scaled[i];
            }
        }
    }
    let (nums, den) = transposed.solve(&rhs)?;
    let mut big: Vec<BigInt> = scaled.iter().map(|v| v * &den).collect();
    for (k, &i) in prow.iter().enumerate() {
        big[i] = nums[k].clone();
    }
    let mut w = vec![BigInt::zero(); width];
    for (i, row) in h.iter().enumerate() {
        if big[i].is_zero() {
            continue;
        }
        for (c, v) in row {
            w[*c] += v * &big[i];
        }
    }
    let ok = (0..width).all(|j| if in_support[j] { w[j].is_zero() } else { w[j].is_positive() });
    ok.then_some(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &[&[i64]]) -> SparseRows {
        m.iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, BigInt::from(*v))).collect())
            .collect()
    }

    fn support(x: &[BigRational]) -> Vec<usize> {
        (0..x.len()).filter(|&j| x[j].is_positive()).collect()
    }

    #[test]
    fn full_support() {
        // x0 + x1 = x2
        let h = rows(&[&[1, 1, -1]]);
        let x = cone_max_support(&h, 3).unwrap();
        assert_eq!(support(&x), vec![0, 1, 2]);
    }

    #[test]
    fn partial_support() {
        // x0 - x1 = 0 and x2 + x3 = 0: only the first pair can be positive
        let h = rows(&[&[1, -1, 0, 0], &[0, 0, 1, 1]]);
        let x = cone_max_support(&h, 4).unwrap();
        assert_eq!(support(&x), vec![0, 1]);
    }

    #[test]
    fn pointed_cone() {
        let h = rows(&[&[1, 2, 3]]);
        let x = cone_max_support(&h, 3).unwrap();
        assert!(support(&x).is_empty());
    }

    fn reaches(h: &SparseRows, width: usize, j: usize) -> bool {
        use crate::linalg::simplex::{Lp, LpOutcome};
        use crate::{Rat, RatMat};
        let a: Vec<Vec<Rat>> = h
            .iter()
            .map(|row| {
                let mut r = vec![Rat::zero(); width];
                for (c, v) in row {
                    r[*c] = Rat::from_integer(v.clone());
                }
                r
            })
            .collect();
        let c = (0..width).map(|k| if k == j { Rat::one() } else { Rat::zero() }).collect();
        let lp = Lp::new(RatMat::from_rows(a, width).unwrap(), vec![Rat::zero(); h.len()], c, vec![Some(Rat::one()); width]);
        matches!(lp.solve(), LpOutcome::Optimal { value, .. } if value.is_positive())
    }

    proptest::proptest! {
        #[test]
        fn certificates_are_sound(entries in proptest::collection::vec(-2i64..=2, 15), m in 1usize..=3, width in 1usize..=5) {
            let grid: Vec<&[i64]> = entries.chunks(5).take(m).map(|r| &r[..width]).collect();
            let h = rows(&grid);
            if let Some(x) = cone_max_support(&h, width) {
                for row in &h {
                    let s: BigRational = row.iter().map(|(c, v)| &x[*c] * BigRational::from_integer(v.clone())).sum();
                    proptest::prop_assert!(s.is_zero());
                }
                for j in 0..width {
                    proptest::prop_assert!(!x[j].is_negative());
                    proptest::prop_assert_eq!(x[j].is_positive(), reaches(&h, width, j));
                }
            }
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(rational_near(0.3333333333333333), Some(BigRational::new(1.into(), 3.into())));
        assert_eq!(rational_near(-2.5), Some(BigRational::new((-5).into(), 2.into())));
        assert_eq!(rational_near(7.0), Some(BigRational::from_integer(7.into())));
        assert_eq!(rational_near(f64::NAN), None);
    }
}
