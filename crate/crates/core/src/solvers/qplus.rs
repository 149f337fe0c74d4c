//! `Q+` through rational multihistograms.
//!
//! A rational multihistogram is a run of a net whose configuration is the
//! vector of profile counters `q(j, i)`, `i < r_j - 1`: reading a column
//! `w` subtracts `w(j, i+1)` from `q(j, i)` and then adds `w(j, i)`. The run
//! alternates segments of columns from the cone `C_0` with single columns
//! from `C_{D_t}`, starts and ends at zero.
//!
//! [`solve_qplus`] decides this with one LP over segment aggregates and a
//! support fixpoint: a segment may only use coordinates that can be switched
//! on from its start configuration and switched off towards its end
//! configuration. [`solve_qplus_literal`] assembles the full semi-equation
//! instead and is meant for small instances.

use num_traits::{One, Signed, Zero};

use super::{Verdict, Status};
use crate::datavec::MatrixInstance;
use crate::linalg::{max_support_solution, LinearSystem, SystemBuilder};
use crate::linpn::reach_into;
use crate::semieq::{self, SemiEq};
use crate::{LinSys, Rat, RatVec};

/// The assembled system and the solution that certifies a `Q+` verdict.
#[derive(Clone, Debug)]
pub struct QplusEvidence {
    pub system: LinSys,
    pub solution: RatVec,
}

struct Shape {
    widths: Vec<usize>,
    offsets: Vec<usize>,
    poff: Vec<usize>,
    rows: usize,
    counters: usize,
}

impl Shape {
    fn new(inst: &MatrixInstance) -> Self {
        let widths = inst.widths();
        let (mut offsets, mut poff) = (Vec::new(), Vec::new());
        let (mut o, mut p) = (0, 0);
        for &r in &widths {
            offsets.push(o);
            poff.push(p);
            o += r;
            p += r - 1;
        }
        Shape { widths, offsets, poff, rows: o, counters: p }
    }

    /// `(counter, row added, row subtracted)` for every counter.
    fn counters(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.counters);
        for (j, &r) in self.widths.iter().enumerate() {
            for i in 0..r - 1 {
                out.push((self.poff[j] + i, self.offsets[j] + i, self.offsets[j] + i + 1));
            }
        }
        out
    }
}

struct Layout {
    u: Vec<Vec<usize>>,
    y: Vec<Vec<usize>>,
    m: Vec<Vec<usize>>,
}

fn assemble(inst: &MatrixInstance, shape: &Shape) -> (LinSys, Layout) {
    let n = inst.n();
    let stacked = inst.stacked();
    let mut b = SystemBuilder::new();
    let u: Vec<Vec<usize>> = (0..=n).map(|_| b.vars(shape.rows).collect()).collect();
    let y: Vec<Vec<usize>> = (0..n).map(|_| b.vars(shape.rows).collect()).collect();
    let m: Vec<Vec<usize>> = (0..n).map(|_| b.vars(shape.counters).collect()).collect();
    let homogeneous = LinearSystem::homogeneous(stacked.clone());
    for us in &u {
        b.embed(&homogeneous, us);
    }
    for (t, yt) in y.iter().enumerate() {
        b.embed(&LinearSystem::new(stacked.clone(), inst.target.col(t)).expect("shared rows"), yt);
    }
    let one = Rat::one;
    for s in 0..=n {
        for (p, plus, minus) in shape.counters() {
            let mut terms = vec![(u[s][plus], one()), (u[s][minus], -one())];
            if s > 0 {
                terms.push((m[s - 1][p], one()));
                terms.push((y[s - 1][plus], one()));
            }
            if s < n {
                terms.push((y[s][minus], -one()));
                terms.push((m[s][p], -one()));
            }
            b.eq(terms, Rat::zero());
        }
    }
    (b.build(), Layout { u, y, m })
}

/// Coordinates of `C_0` usable in a segment that starts with the counters
/// in `marked` positive, within the rows `within`.
fn forward(shape: &Shape, c0: &LinSys, within: &[bool], mut marked: Vec<bool>) -> Vec<bool> {
    loop {
        let mut allowed = vec![false; shape.rows];
        for (j, &r) in shape.widths.iter().enumerate() {
            for i in 0..r {
                let row = shape.offsets[j] + i;
                allowed[row] = within[row] && (i == 0 || marked[shape.poff[j] + i - 1]);
            }
        }
        let support = support_of(c0, &allowed);
        let mut grew = false;
        for (p, plus, _) in shape.counters() {
            if support[plus] && !marked[p] {
                marked[p] = true;
                grew = true;
            }
        }
        if !grew {
            return support;
        }
    }
}

/// Mirror image of [`forward`]: coordinates that can be undone from a
/// segment end with the counters in `marked` positive.
fn backward(shape: &Shape, c0: &LinSys, within: &[bool], mut marked: Vec<bool>) -> Vec<bool> {
    loop {
        let mut allowed = vec![false; shape.rows];
        for (j, &r) in shape.widths.iter().enumerate() {
            for i in 0..r {
                let row = shape.offsets[j] + i;
                allowed[row] = within[row] && (i == r - 1 || marked[shape.poff[j] + i]);
            }
        }
        let support = support_of(c0, &allowed);
        let mut grew = false;
        for (p, _, minus) in shape.counters() {
            if support[minus] && !marked[p] {
                marked[p] = true;
                grew = true;
            }
        }
        if !grew {
            return support;
        }
    }
}

fn support_of(sys: &LinSys, allowed: &[bool]) -> Vec<bool> {
    let x = max_support_solution(sys, allowed).expect("homogeneous systems are feasible");
    x.iter().map(|v| v.is_positive()).collect()
}

/// Decides `Q+` solvability; a `Solvable` verdict carries the LP solution as
/// evidence instead of a placement witness.
pub fn solve_qplus(inst: &MatrixInstance) -> Verdict {
    match solve_qplus_with_evidence(inst) {
        Some(ev) => Verdict { status: Status::Solvable, witness: None, evidence: Some(ev.solution) },
        None => Verdict::unsolvable(),
    }
}

pub fn solve_qplus_with_evidence(inst: &MatrixInstance) -> Option<QplusEvidence> {
    let n = inst.n();
    let shape = Shape::new(inst);
    let (sys, lay) = assemble(inst, &shape);
    let c0 = LinearSystem::homogeneous(inst.stacked());
    let mut allowed = vec![true; sys.vars()];
    loop {
        let x = max_support_solution(&sys, &allowed)?;
        let pos = |v: usize| x[v].is_positive();
        let mut changed = false;
        for s in 0..=n {
            let within: Vec<bool> = lay.u[s].iter().map(|&v| pos(v)).collect();
            if !within.iter().any(|&b| b) {
                continue;
            }
            let mut starts = vec![false; shape.counters];
            let mut ends = vec![false; shape.counters];
            for (p, plus, minus) in shape.counters() {
                starts[p] = s > 0 && (pos(lay.m[s - 1][p]) || pos(lay.y[s - 1][plus]));
                ends[p] = s < n && (pos(lay.m[s][p]) || pos(lay.y[s][minus]));
            }
            let fwd = forward(&shape, &c0, &within, starts);
            let bwd = backward(&shape, &c0, &within, ends);
            for row in 0..shape.rows {
                if within[row] && !(fwd[row] && bwd[row]) {
                    allowed[lay.u[s][row]] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            debug_assert!(sys.is_solution(&x));
            return Some(QplusEvidence { system: sys, solution: x });
        }
    }
}

/// The literal construction: one reachability semi-equation per segment of
/// the profile-counter net, glued by single target-column steps whose
/// subtraction keeps the counters nonnegative. Exponentially cheaper
/// alternatives exist; this one mirrors the definitions and serves as a
/// cross-check on small inputs.
pub fn solve_qplus_literal(inst: &MatrixInstance) -> Verdict {
    let n = inst.n();
    let shape = Shape::new(inst);
    let stacked = inst.stacked();
    let pc = shape.counters;
    let counters = shape.counters();

    // reading rule over (z-, z+, w): w in C_0, z- = w shifted, z+ = w
    let mut rb = SystemBuilder::new();
    let zm: Vec<usize> = rb.vars(pc).collect();
    let zp: Vec<usize> = rb.vars(pc).collect();
    let w: Vec<usize> = rb.vars(shape.rows).collect();
    rb.embed(&LinearSystem::homogeneous(stacked.clone()), &w);
    for &(p, plus, minus) in &counters {
        rb.eq(vec![(zm[p], Rat::one()), (w[minus], -Rat::one())], Rat::zero());
        rb.eq(vec![(zp[p], Rat::one()), (w[plus], -Rat::one())], Rat::zero());
    }
    let reading = rb.build();

    let mut b = SystemBuilder::new();
    let mut start: Vec<usize> = b.vars(pc).collect();
    for &v in &start {
        b.eq(vec![(v, Rat::one())], Rat::zero());
    }
    let mut implications = Vec::new();
    for s in 0..=n {
        let (end, imps) = reach_into(&mut b, pc, std::slice::from_ref(&reading), &start);
        implications.extend(imps);
        if s == n {
            for &v in &end {
                b.eq(vec![(v, Rat::one())], Rat::zero());
            }
            break;
        }
        let y: Vec<usize> = b.vars(shape.rows).collect();
        b.embed(&LinearSystem::new(stacked.clone(), inst.target.col(s)).expect("shared rows"), &y);
        let slack: Vec<usize> = b.vars(pc).collect();
        let next: Vec<usize> = b.vars(pc).collect();
        for &(p, plus, minus) in &counters {
            b.eq(vec![(end[p], Rat::one()), (y[minus], -Rat::one()), (slack[p], -Rat::one())], Rat::zero());
            b.eq(vec![(next[p], Rat::one()), (slack[p], -Rat::one()), (y[plus], -Rat::one())], Rat::zero());
        }
        start = next;
    }
    let se = SemiEq::new(b.build(), implications).expect("indices allocated above");
    match semieq::solve_qplus(&se) {
        Some(x) => Verdict { status: Status::Solvable, witness: None, evidence: Some(x) },
        None => Verdict::unsolvable(),
    }
}
