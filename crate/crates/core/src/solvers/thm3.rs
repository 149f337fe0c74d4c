//! `Z` and `Q` via sums and components: the target is an exchange product
//! iff its total sum is a combination of the generators' total sums and each
//! of its columns is a combination of generator columns.
//!
//! Witness layout: `R - 1` left parking slots, a middle block whose first
//! slot is the hub and whose next `n` slots hold the target, then `R - 1`
//! right parking slots (`R` = widest generator). All mass is first gathered
//! on the hub and then sent to the target slots by column moves.

use num_traits::Zero;

use super::{check_witness, Domain, Term, Verdict, Witness};
use crate::datavec::{column_sum, compon_of, MatrixInstance};
use crate::error::Result;
use crate::linalg::{solve_integer, solve_rational, LinearSystem};
use crate::{Rat, RatMat, RatVec};

pub fn solve_q(inst: &MatrixInstance) -> Verdict {
    solve_ring(inst, Domain::Q).expect("rational solving does not fail")
}

pub fn solve_z(inst: &MatrixInstance) -> Verdict {
    solve_ring(inst, Domain::Z).expect("instance matrices are integral")
}

fn combination(columns: &[RatVec], dim: usize, target: &RatVec, domain: Domain) -> Result<Option<RatVec>> {
    let a = RatMat::from_columns(dim, columns)?;
    let sys = LinearSystem::new(a, target.clone())?;
    Ok(match domain {
        Domain::Z => solve_integer(&sys)?,
        _ => solve_rational(&sys).map(|s| s.particular),
    })
}

struct Layout {
    parking: usize,
    width: usize,
}

impl Layout {
    fn slots(&self) -> usize {
        2 * self.parking + self.width
    }

    fn middle(&self, k: usize) -> usize {
        self.parking + k
    }

    /// Column `col` of a width-`r` generator on slot `at`, the rest parked.
    fn moved(&self, r: usize, col: usize, at: usize) -> Vec<usize> {
        let left = (0..col).map(|c| self.parking - col + c);
        let right = (0..r - col - 1).map(|c| self.parking + self.width + c);
        left.chain(std::iter::once(at)).chain(right).collect()
    }

    /// Terms of a column move: `coeff * column` leaves `from` for `to`.
    fn column_move(&self, out: &mut Vec<Term>, vector: usize, r: usize, col: usize, from: usize, to: usize, coeff: &Rat) {
        out.push(Term { coeff: coeff.clone(), vector, placement: self.moved(r, col, to) });
        out.push(Term { coeff: -coeff.clone(), vector, placement: self.moved(r, col, from) });
    }
}

fn solve_ring(inst: &MatrixInstance, domain: Domain) -> Result<Verdict> {
    let d = inst.dimension;
    let n = inst.n();
    if n == 0 {
        return Ok(Verdict::solvable(Witness::default()));
    }
    let sums: Vec<RatVec> = inst.generators.iter().map(column_sum).collect();
    let Some(alpha) = combination(&sums, d, &column_sum(&inst.target), domain)? else {
        return Ok(Verdict::unsolvable());
    };
    // each generator column with its owner
    let mut pieces: Vec<(RatVec, usize, usize)> = Vec::new();
    for (j, m) in inst.generators.iter().enumerate() {
        for (i, c) in m.columns().into_iter().enumerate() {
            if !pieces.iter().any(|(p, _, _)| *p == c) {
                pieces.push((c, j, i));
            }
        }
    }
    let piece_cols: Vec<RatVec> = pieces.iter().map(|(c, _, _)| c.clone()).collect();
    let mut betas = Vec::new();
    for a in compon_of(&inst.target) {
        match combination(&piece_cols, d, &a, domain)? {
            Some(b) => betas.push((a, b)),
            None => return Ok(Verdict::unsolvable()),
        }
    }

    let widest = inst.widths().into_iter().max().unwrap_or(1);
    let layout = Layout { parking: widest - 1, width: (n + 1).max(widest) };
    let hub = layout.middle(0);
    let mut terms = Vec::new();
    for (j, m) in inst.generators.iter().enumerate() {
        let a = &alpha[j];
        if a.is_zero() {
            continue;
        }
        let r = m.cols();
        terms.push(Term { coeff: a.clone(), vector: j, placement: (0..r).map(|i| layout.middle(i)).collect() });
        for i in 1..r {
            layout.column_move(&mut terms, j, r, i, layout.middle(i), hub, a);
        }
    }
    for l in 0..n {
        let col = inst.target.col(l);
        let (_, beta) = betas.iter().find(|(a, _)| *a == col).expect("every target column solved");
        for ((_, j, i), b) in pieces.iter().zip(beta) {
            if !b.is_zero() {
                layout.column_move(&mut terms, *j, inst.generators[*j].cols(), *i, hub, layout.middle(1 + l), b);
            }
        }
    }
    let witness = Witness { terms, slots: layout.slots() }.normalized();
    if let Err(e) = check_witness(inst, &witness, domain) {
        return Err(crate::Error::Internal(format!("synthesised witness does not verify: {e}")));
    }
    Ok(Verdict::solvable(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{verify_witness, Status};

    #[test]
    fn zero_target() {
        let inst = MatrixInstance::from_i64(&[], &[&[&[1, -1]]]);
        let v = solve_q(&inst);
        assert_eq!(v.status, Status::Solvable);
        assert_eq!(v.witness.unwrap(), Witness::default());
    }

    #[test]
    fn two_copies() {
        let inst = MatrixInstance::from_i64(&[&[1, 1]], &[&[&[1]]]);
        for v in [solve_q(&inst), solve_z(&inst)] {
            assert_eq!(v.status, Status::Solvable);
            assert!(verify_witness(&inst, v.witness.as_ref().unwrap(), Domain::Z));
        }
    }

    #[test]
    fn sum_mismatch() {
        let inst = MatrixInstance::from_i64(&[&[1]], &[&[&[1, -1]]]);
        assert_eq!(solve_q(&inst).status, Status::Unsolvable);
        assert_eq!(solve_z(&inst).status, Status::Unsolvable);
    }

    #[test]
    fn up_down_move() {
        let inst = MatrixInstance::from_i64(&[&[1, -1]], &[&[&[-1, 1]]]);
        let v = solve_q(&inst);
        assert_eq!(v.status, Status::Solvable);
        assert!(verify_witness(&inst, v.witness.as_ref().unwrap(), Domain::Z));
    }

    #[test]
    fn parity_separates_z_from_q() {
        let inst = MatrixInstance::from_i64(&[&[1]], &[&[&[2]]]);
        assert_eq!(solve_q(&inst).status, Status::Solvable);
        assert_eq!(solve_z(&inst).status, Status::Unsolvable);
        let w = solve_q(&inst).witness.unwrap();
        assert!(verify_witness(&inst, &w, Domain::Q));
    }

    #[test]
    fn multi_column_generators() {
        let inst = MatrixInstance::from_i64(
            &[&[1, 0, 2], &[0, 1, -1]],
            &[&[&[1, 0], &[0, 1]], &[&[1, 1, 2], &[-1, 0, 1]]],
        );
        for v in [solve_q(&inst), solve_z(&inst)] {
            if v.status == Status::Solvable {
                assert!(verify_witness(&inst, v.witness.as_ref().unwrap(), Domain::Q));
            }
        }
    }
}
