//! Bounded search for integer multihistograms.
//!
//! The search reads the word of a multihistogram column by column. Its state
//! is the number of target columns consumed so far together with the
//! profile counters `q(j, i) = sum H_j(i, ..p) - sum H_j(i+1, ..p)`. Reading
//! a column `w` needs `q(j, i) >= w(j, i+1)` (prefix dominance) and moves `q`
//! to `q + w(j, i) - w(j, i+1)`; equal row sums mean the final `q` is zero.

use std::collections::{HashMap, VecDeque};

use num_traits::ToPrimitive;

use super::{check_witness, qplus, solve_z, Domain, Status, Term, Verdict, Witness};
use crate::datavec::MatrixInstance;
use crate::histogram::decompose;
use crate::linalg::{enumerate_with_bounds, LinearSystem};
use crate::{Rat, RatMat};

#[derive(Clone, Debug)]
pub struct NSearchOptions {
    /// Most columns in a multihistogram.
    pub col_bound: usize,
    /// Largest entry of a multihistogram.
    pub entry_bound: u64,
    /// The caller vouches that any solution fits the bounds, so an
    /// exhausted search proves unsolvability.
    pub bounds_complete: bool,
    /// Total node budget across all column enumerations.
    pub budget: u64,
}

impl Default for NSearchOptions {
    fn default() -> Self {
        NSearchOptions { col_bound: 8, entry_bound: 8, bounds_complete: false, budget: 5_000_000 }
    }
}

type State = (usize, Vec<i64>);

struct Shape {
    widths: Vec<usize>,
    offsets: Vec<usize>,
    /// profile counter `(j, i)` lives at `poff[j] + i`, `i < r_j - 1`
    poff: Vec<usize>,
    counters: usize,
}

impl Shape {
    fn new(widths: Vec<usize>) -> Self {
        let mut offsets = Vec::new();
        let mut poff = Vec::new();
        let (mut o, mut p) = (0, 0);
        for &r in &widths {
            offsets.push(o);
            poff.push(p);
            o += r;
            p += r - 1;
        }
        Shape { widths, offsets, poff, counters: p }
    }

    fn bounds(&self, q: &[i64], b: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for (j, &r) in self.widths.iter().enumerate() {
            out.push(b);
            for i in 0..r - 1 {
                out.push(b.min(q[self.poff[j] + i].max(0) as u64));
            }
        }
        out
    }

    fn read(&self, q: &[i64], w: &[i64]) -> Vec<i64> {
        let mut next = q.to_vec();
        for (j, &r) in self.widths.iter().enumerate() {
            for i in 0..r - 1 {
                let p = self.poff[j] + i;
                next[p] += w[self.offsets[j] + i] - w[self.offsets[j] + i + 1];
            }
        }
        next
    }
}

pub fn solve_n_bounded(inst: &MatrixInstance, opts: &NSearchOptions) -> Verdict {
    // both relaxations are necessary for N and far cheaper than the search
    if solve_z(inst).status == Status::Unsolvable || qplus::solve_qplus(inst).status == Status::Unsolvable {
        return Verdict::unsolvable();
    }
    let shape = Shape::new(inst.widths());
    let n = inst.n();
    let stacked = inst.stacked();
    let systems: Vec<LinearSystem<Rat>> = std::iter::once(LinearSystem::homogeneous(stacked.clone()))
        .chain((0..n).map(|t| LinearSystem::new(stacked.clone(), inst.target.col(t)).expect("shared rows")))
        .collect();
    let mut cache: HashMap<(usize, Vec<u64>), Vec<Vec<i64>>> = HashMap::new();
    let mut budget = opts.budget;
    let mut exhausted = false;

    let start: State = (0, vec![0; shape.counters]);
    let mut parent: HashMap<State, Option<(State, Vec<i64>)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut found = None;
    while let Some((state, depth)) = queue.pop_front() {
        let (t, q) = &state;
        if *t == n && q.iter().all(|&v| v == 0) {
            found = Some(state);
            break;
        }
        if depth == opts.col_bound {
            continue;
        }
        let bounds = shape.bounds(q, opts.entry_bound);
        let letters: Vec<usize> = if *t < n { vec![0, t + 1] } else { vec![0] };
        for letter in letters {
            let key = (letter, bounds.clone());
            if !cache.contains_key(&key) {
                let e = enumerate_with_bounds(&systems[letter], &bounds, budget).expect("bounds sized to variables");
                budget = budget.saturating_sub(1 + e.solutions.len() as u64);
                if e.exhausted {
                    exhausted = true;
                }
                let cols = e
                    .solutions
                    .into_iter()
                    .map(|s| s.iter().map(|v| v.to_integer().to_i64().expect("bounded entry")).collect::<Vec<i64>>())
                    .filter(|w| w.iter().any(|&v| v != 0))
                    .collect();
                cache.insert(key.clone(), cols);
            }
            for w in &cache[&key] {
                let next: State = (if letter == 0 { *t } else { t + 1 }, shape.read(q, w));
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some((state.clone(), w.clone())));
                queue.push_back((next, depth + 1));
            }
            if budget == 0 {
                exhausted = true;
                break;
            }
        }
        if exhausted {
            break;
        }
    }

    if let Some(end) = found {
        let mut word = Vec::new();
        let mut cur = end;
        while let Some(Some((prev, w))) = parent.get(&cur) {
            word.push(w.clone());
            cur = prev.clone();
        }
        word.reverse();
        return Verdict::solvable(witness_from_word(inst, &shape, &word));
    }
    if exhausted || !opts.bounds_complete {
        return Verdict::unknown();
    }
    Verdict::unsolvable()
}

/// Histograms from a word, then one term per simple histogram.
fn witness_from_word(inst: &MatrixInstance, shape: &Shape, word: &[Vec<i64>]) -> Witness {
    let c = word.len();
    let mut terms = Vec::new();
    let family: Vec<RatMat> = shape
        .widths
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let mut h = RatMat::zeros(r, c);
            for (p, w) in word.iter().enumerate() {
                for i in 0..r {
                    h[(i, p)] = Rat::from_integer(w[shape.offsets[j] + i].into());
                }
            }
            h
        })
        .collect();
    debug_assert!(crate::histogram::is_multihistogram(&family, &inst.target, &inst.generators, crate::histogram::Mode::Integer));
    for (j, h) in family.iter().enumerate() {
        for s in decompose(h).expect("search keeps every member a histogram") {
            terms.push(Term { coeff: Rat::from_integer(1.into()), vector: j, placement: s.map().to_vec() });
        }
    }
    let w = Witness { terms, slots: c }.normalized();
    debug_assert!(check_witness(inst, &w, Domain::N).is_ok());
    w
}
