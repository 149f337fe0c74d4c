use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinearSystem;
use crate::error::{Error, Result};
use crate::scalar::{ext_gcd, Scalar};

/// Finds an integer solution of `A x = b` by unimodular column reduction of
/// `A` to lower echelon form (`A U = H`), forward substitution in `H y = b`,
/// and `x = U y`.
pub fn solve_integer<T: Scalar>(sys: &LinearSystem<T>) -> Result<Option<Vec<T>>> {
    if !sys.is_integral() {
        return Err(Error::Input("integer solving needs integral coefficients".into()));
    }
    let (m, n) = sys.matrix.shape();
    let int = |v: &T| v.as_int().expect("checked integral");
    let mut h: Vec<Vec<T::Int>> = (0..m).map(|i| sys.matrix.row(i).iter().map(int).collect()).collect();
    let mut u: Vec<Vec<T::Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::Int::one() } else { T::Int::zero() }).collect())
        .collect();
    let b: Vec<T::Int> = sys.rhs.iter().map(int).collect();

    // column operation on both H and U: (c_k, c_j) <- (p c_k + q c_j, r c_k + s c_j)
    let combine = |mat: &mut Vec<Vec<T::Int>>, k: usize, j: usize, p: &T::Int, q: &T::Int, r: &T::Int, s: &T::Int| {
        for row in mat.iter_mut() {
            let (ck, cj) = (row[k].clone(), row[j].clone());
            if ck.is_zero() && cj.is_zero() {
                continue;
            }
            row[k] = p.clone() * ck.clone() + q.clone() * cj.clone();
            row[j] = r.clone() * ck + s.clone() * cj;
        }
    };

    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m];
    let mut k = 0;
    for i in 0..m {
        if k == n {
            break;
        }
        for j in (k + 1)..n {
            if h[i][j].is_zero() {
                continue;
            }
            let (a, c) = (h[i][k].clone(), h[i][j].clone());
            let (g, x, y) = ext_gcd(&a, &c);
            let (r, s) = (-(c / g.clone()), a / g);
            combine(&mut h, k, j, &x, &y, &r, &s);
            combine(&mut u, k, j, &x, &y, &r, &s);
        }
        if !h[i][k].is_zero() {
            if h[i][k].is_negative() {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[k] = -row[k].clone();
                }
            }
            pivot_of_row[i] = Some(k);
            k += 1;
        }
    }

    let mut y = vec![T::Int::zero(); n];
    for i in 0..m {
        let mut residual = b[i].clone();
        for (l, yl) in y.iter().enumerate().take(k) {
            if !yl.is_zero() && Some(l) != pivot_of_row[i] {
                residual = residual - h[i][l].clone() * yl.clone();
            }
        }
        match pivot_of_row[i] {
            Some(p) => {
                let (q, rem) = residual.div_rem(&h[i][p]);
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[p] = q;
            }
            None => {
                if !residual.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    let x: Vec<T> = (0..n)
        .map(|i| {
            let s = (0..n)
                .filter(|&j| !y[j].is_zero())
                .fold(T::Int::zero(), |acc, j| acc + u[i][j].clone() * y[j].clone());
            T::from_int(s)
        })
        .collect();
    debug_assert!(sys.is_solution(&x));
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{LinSys, Rat};

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| Rat::from_i64(x)).collect()
    }

    #[test]
    fn basic_cases() {
        assert_eq!(solve_integer(&LinSys::from_i64(&[&[2]], &[4])).unwrap(), Some(ints(&[2])));
        assert_eq!(solve_integer(&LinSys::from_i64(&[&[2]], &[3])).unwrap(), None);
        let sys = LinSys::from_i64(&[&[2, 3]], &[1]);
        let x = solve_integer(&sys).unwrap().unwrap();
        assert!(sys.is_solution(&x) && x.iter().all(|v| v.is_integer()));
    }

    #[test]
    fn rational_but_not_integral() {
        let sys = LinSys::from_i64(&[&[1, 1], &[1, -1]], &[1, 0]);
        assert_eq!(solve_integer(&sys).unwrap(), None);
        let sys = LinSys::from_i64(&[&[2, 0, 4], &[0, 6, 9], &[2, 6, 13]], &[2, 3, 5]);
        let x = solve_integer(&sys).unwrap().unwrap();
        assert!(sys.is_solution(&x));
    }

    #[test]
    fn rejects_fractions() {
        let sys = LinSys::new(crate::RatMat::from_i64(&[&[1]]), vec![Rat::new(1.into(), 2.into())]).unwrap();
        assert!(solve_integer(&sys).is_err());
    }
}
