//! Exact integer linear algebra through arithmetic modulo a word-size prime.
//!
//! Pivot structure is read off an elimination modulo `P`; square systems are
//! solved by p-adic lifting followed by rational reconstruction, and every
//! reconstructed answer is checked against the integer system before it is
//! returned. A bad prime therefore costs a `None`, never a wrong answer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `2^31 - 1`; products of two residues fit in a `u64`.
const P: u64 = 2_147_483_647;

/// Lifting steps before giving up, about 9 decimal digits each.
const MAX_LIFTS: usize = 2_000;

/// A sparse integer matrix stored by rows.
pub(crate) type SparseRows = Vec<Vec<(usize, BigInt)>>;

fn residue(v: &BigInt) -> u64 {
    let r = v.mod_floor(&BigInt::from(P));
    r.to_u64().expect("residue below the modulus")
}

fn mul(a: u64, b: u64) -> u64 {
    a * b % P
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn inverse(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, P - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Dense residues of `rows` restricted to `cols`, in that column order.
fn dense(rows: &SparseRows, cols: &[usize], width: usize) -> Vec<Vec<u64>> {
    let mut at = vec![usize::MAX; width];
    for (k, &c) in cols.iter().enumerate() {
        at[c] = k;
    }
    rows.iter()
        .map(|row| {
            let mut out = vec![0u64; cols.len()];
            for (c, v) in row {
                if at[*c] != usize::MAX {
                    out[at[*c]] = residue(v);
                }
            }
            out
        })
        .collect()
}

/// Row echelon form modulo `P` of the submatrix on `cols` (column indices
/// below `width`). Returns `(pivot rows, pivot columns)`, paired in order;
/// both are original indices. The pivot block is invertible over the
/// rationals, and its size equals the rational rank unless `P` divides a
/// maximal minor.
pub(crate) fn echelon(rows: &SparseRows, cols: &[usize], width: usize) -> (Vec<usize>, Vec<usize>) {
    let mut m = dense(rows, cols, width);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let (mut prow, mut pcol) = (Vec::new(), Vec::new());
    let mut top = 0;
    for k in 0..cols.len() {
        let Some(found) = (top..m.len()).find(|&i| m[i][k] != 0) else { continue };
        m.swap(top, found);
        order.swap(top, found);
        let inv = inverse(m[top][k]);
        let pivot: Vec<u64> = m[top].iter().map(|&v| mul(v, inv)).collect();
        for row in m.iter_mut().skip(top + 1) {
            let f = row[k];
            if f == 0 {
                continue;
            }
            for (v, &p) in row.iter_mut().zip(&pivot).skip(k) {
                if p != 0 {
                    *v = sub(*v, mul(f, p));
                }
            }
        }
        m[top] = pivot;
        prow.push(order[top]);
        pcol.push(cols[k]);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    (prow, pcol)
}

/// Solver for a fixed square integer matrix that is invertible modulo `P`.
pub(crate) struct Lifter {
    rows: SparseRows,
    inv: Vec<Vec<u64>>,
}

impl Lifter {
    /// `rows` is square with column indices `0..rows.len()`; `None` when
    /// the matrix is singular modulo `P`.
    pub(crate) fn new(rows: SparseRows) -> Option<Self> {
        let n = rows.len();
        let cols: Vec<usize> = (0..n).collect();
        let mut a = dense(&rows, &cols, n);
        let mut inv: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                e
            })
            .collect();
        for k in 0..n {
            let found = (k..n).find(|&i| a[i][k] != 0)?;
            a.swap(k, found);
            inv.swap(k, found);
            let s = inverse(a[k][k]);
            a[k].iter_mut().for_each(|v| *v = mul(*v, s));
            inv[k].iter_mut().for_each(|v| *v = mul(*v, s));
            let (pa, pi) = (a[k].clone(), inv[k].clone());
            for i in 0..n {
                let f = a[i][k];
                if i == k || f == 0 {
                    continue;
                }
                for (v, &p) in a[i].iter_mut().zip(&pa).skip(k) {
                    if p != 0 {
                        *v = sub(*v, mul(f, p));
                    }
                }
                for (v, &p) in inv[i].iter_mut().zip(&pi) {
                    if p != 0 {
                        *v = sub(*v, mul(f, p));
                    }
                }
            }
        }
        Some(Lifter { rows, inv })
    }

    fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|row| row.iter().map(|(c, v)| v * &x[*c]).sum()).collect()
    }

    /// The rational solution of `A x = b` as numerators over one positive
    /// denominator, or `None` if lifting does not converge.
    pub(crate) fn solve(&self, b: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
        let n = self.rows.len();
        if b.iter().all(Zero::is_zero) {
            return Some((vec![BigInt::zero(); n], BigInt::one()));
        }
        let p = BigInt::from(P);
        let mut res = b.to_vec();
        let mut acc = vec![BigInt::zero(); n];
        let mut modulus = BigInt::one();
        let mut next_check = 2;
        for step in 1..=MAX_LIFTS {
            let r: Vec<u64> = res.iter().map(residue).collect();
            let x: Vec<u64> = self
                .inv
                .iter()
                .map(|row| row.iter().zip(&r).fold(0u64, |s, (&a, &b)| (s + mul(a, b)) % P))
                .collect();
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            let ax = self.apply(&xb);
            for (ri, axi) in res.iter_mut().zip(ax) {
                *ri = (&*ri - axi) / &p;
            }
            for (a, xi) in acc.iter_mut().zip(&xb) {
                *a += xi * &modulus;
            }
            modulus *= &p;
            if step == next_check {
                next_check += next_check / 2 + 1;
                if let Some(sol) = self.reconstruct(&acc, &modulus, b) {
                    return Some(sol);
                }
            }
        }
        None
    }

    fn reconstruct(&self, acc: &[BigInt], modulus: &BigInt, b: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
        let mut den = BigInt::one();
        for a in acc {
            let v = (a * &den).mod_floor(modulus);
            let (_, d) = rational_reconstruction(&v, modulus)?;
            den *= d;
        }
        let half = modulus / BigInt::from(2);
        let nums: Vec<BigInt> = acc
            .iter()
            .map(|a| {
                let v = (a * &den).mod_floor(modulus);
                if v > half {
                    v - modulus
                } else {
                    v
                }
            })
            .collect();
        let ok = self.apply(&nums).iter().zip(b).all(|(l, r)| *l == r * &den);
        ok.then_some((nums, den))
    }
}

/// `(a, b)` with `a / b = v (mod m)`, `|a|, b <= sqrt(m / 2)`, `b > 0`.
fn rational_reconstruction(v: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), v.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &[&[i64]]) -> SparseRows {
        m.iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, BigInt::from(*v))).collect())
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn echelon_finds_rank() {
        let m = rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let (r, c) = echelon(&m, &[0, 1, 2], 3);
        assert_eq!(r.len(), 2);
        assert_eq!(c, vec![0, 1]);
        assert!(r.contains(&2));
        let (r, c) = echelon(&m, &[2], 3);
        assert_eq!((r.len(), c), (1, vec![2]));
    }

    #[test]
    fn lifting_solves_exactly() {
        let l = Lifter::new(rows(&[&[2, 0], &[1, 3]])).unwrap();
        // x = (1/2, 1/6)
        let (x, d) = l.solve(&big(&[1, 1])).unwrap();
        assert_eq!(&x[0] * BigInt::from(2), d);
        assert_eq!(&x[1] * BigInt::from(6), d);
    }

    #[test]
    fn lifting_large_answers() {
        // Hilbert-like matrix scaled to integers: large numerators and denominators
        let n = 8;
        let l = 720_720i64;
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| l / (i + j + 1) as i64).collect()).collect();
        let refs: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
        let lifter = Lifter::new(rows(&refs)).unwrap();
        let b = big(&[1, -1, 2, -2, 3, -3, 4, -4]);
        let (x, d) = lifter.solve(&b).unwrap();
        let ax = lifter.apply(&x);
        for (l, r) in ax.iter().zip(&b) {
            assert_eq!(*l, r * &d);
        }
    }

    #[test]
    fn singular_is_rejected() {
        assert!(Lifter::new(rows(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn reconstruction_inverts_division() {
        let m = BigInt::from(P) * BigInt::from(P);
        // 3 / 7 mod m
        let inv7 = BigInt::from(7).modpow(&(BigInt::from(P) * BigInt::from(P - 1) - 1), &m);
        let v = (BigInt::from(3) * inv7).mod_floor(&m);
        assert_eq!(rational_reconstruction(&v, &m), Some((BigInt::from(3), BigInt::from(7))));
    }
}
