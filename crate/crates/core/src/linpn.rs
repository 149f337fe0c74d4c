//! Vector addition systems and homogeneous linear Petri nets.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::SystemBuilder;
use crate::semieq::SemiEq;
use crate::scalar::Scalar;
use crate::{LinSys, Rat, RatVec};

/// A VAS `(A, i, f)` over `N^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vas {
    pub dimension: usize,
    pub actions: Vec<Vec<i64>>,
    pub init: Vec<i64>,
    pub final_: Vec<i64>,
}

impl Vas {
    pub fn new(dimension: usize, actions: Vec<Vec<i64>>, init: Vec<i64>, final_: Vec<i64>) -> Result<Self> {
        if actions.iter().chain([&init, &final_]).any(|v| v.len() != dimension) {
            return Err(Error::Dimension(format!("every vector must have {dimension} entries")));
        }
        if init.iter().chain(&final_).any(|&v| v < 0) {
            return Err(Error::Input("initial and final configurations must be nonnegative".into()));
        }
        Ok(Vas { dimension, actions, init, final_ })
    }

    /// Configurations visited by firing `run` (action indices) from `init`,
    /// or `None` if some step goes negative.
    pub fn replay(&self, run: &[usize]) -> Option<Vec<Vec<i64>>> {
        let mut cur = self.init.clone();
        let mut trace = vec![cur.clone()];
        for &a in run {
            cur = add(&cur, self.actions.get(a)?)?;
            trace.push(cur.clone());
        }
        Some(trace)
    }

    /// `run` is a valid run from `init` to `final`.
    pub fn is_run(&self, run: &[usize]) -> bool {
        self.replay(run).is_some_and(|t| t.last() == Some(&self.final_))
    }
}

fn add(c: &[i64], a: &[i64]) -> Option<Vec<i64>> {
    c.iter()
        .zip(a)
        .map(|(x, y)| x.checked_add(*y).filter(|v| *v >= 0))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reach {
    /// A shortest run, as action indices.
    Reachable(Vec<usize>),
    Unreachable,
    Unknown,
}

/// States explored before [`vas_bounded_reach`] gives up.
pub const REACH_STATE_BUDGET: usize = 2_000_000;

/// Breadth-first search over configurations with entries at most
/// `norm_bound` and runs of at most `step_bound` steps. `Unreachable` is
/// reported only when the explored set is closed: no enabled action leaves
/// the box and the step bound never cut the search short.
pub fn vas_bounded_reach(vas: &Vas, norm_bound: i64, step_bound: usize) -> Reach {
    let in_box = |c: &[i64]| c.iter().all(|&v| v <= norm_bound);
    if !in_box(&vas.init) {
        return Reach::Unknown;
    }
    let mut parent: HashMap<Vec<i64>, Option<(Vec<i64>, usize)>> = HashMap::new();
    parent.insert(vas.init.clone(), None);
    let mut queue = VecDeque::from([(vas.init.clone(), 0usize)]);
    let mut closed = true;
    while let Some((c, depth)) = queue.pop_front() {
        if c == vas.final_ {
            let mut run = Vec::new();
            let mut cur = c;
            while let Some(Some((prev, a))) = parent.get(&cur) {
                run.push(*a);
                cur = prev.clone();
            }
            run.reverse();
            debug_assert!(vas.is_run(&run));
            return Reach::Reachable(run);
        }
        for (k, a) in vas.actions.iter().enumerate() {
            let Some(next) = add(&c, a) else { continue };
            if !in_box(&next) {
                closed = false;
                continue;
            }
            if parent.contains_key(&next) {
                continue;
            }
            if depth == step_bound || parent.len() >= REACH_STATE_BUDGET {
                closed = false;
                continue;
            }
            parent.insert(next.clone(), Some((c.clone(), k)));
            queue.push_back((next, depth + 1));
        }
    }
    if closed {
        Reach::Unreachable
    } else {
        Reach::Unknown
    }
}

/// A homogeneous linear Petri net: each rule is a homogeneous system over
/// `2d` variables, the first `d` subtracted and the last `d` added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLinearPn {
    pub dimension: usize,
    pub rules: Vec<LinSys>,
}

impl HomLinearPn {
    pub fn new(dimension: usize, rules: Vec<LinSys>) -> Result<Self> {
        for (p, r) in rules.iter().enumerate() {
            if r.vars() != 2 * dimension {
                return Err(Error::Dimension(format!("rule {p} has {} variables, expected {}", r.vars(), 2 * dimension)));
            }
            if !r.is_homogeneous() {
                return Err(Error::Input(format!("rule {p} is not homogeneous")));
            }
        }
        Ok(HomLinearPn { dimension, rules })
    }

    fn is_rule_solution(&self, rule: usize, v: &[Rat]) -> bool {
        self.rules[rule].is_solution(v) && v.iter().all(|x| !x.is_negative())
    }
}

/// One transition: `c - v[..d] + v[d..]`, or `None` when `c - v[..d]` is
/// not a configuration.
pub fn pn_step(pn: &HomLinearPn, c: &[Rat], rule: usize, v: &[Rat]) -> Result<Option<RatVec>> {
    let d = pn.dimension;
    if rule >= pn.rules.len() || c.len() != d {
        return Err(Error::Input("bad rule index or configuration size".into()));
    }
    if !pn.is_rule_solution(rule, v) {
        return Err(Error::Input(format!("vector is not a nonnegative solution of rule {rule}")));
    }
    let mid: RatVec = (0..d).map(|j| c[j].clone() - v[j].clone()).collect();
    if mid.iter().any(Signed::is_negative) {
        return Ok(None);
    }
    Ok(Some((0..d).map(|j| mid[j].clone() + v[d + j].clone()).collect()))
}

/// The sufficient reachability condition: `f - i = sum(-u_p^- + u_p^+)`, and
/// `u_p` subtracts only where `i` is positive and adds only where `f` is.
pub fn serge12_check(pn: &HomLinearPn, i: &[Rat], f: &[Rat], u: &[RatVec]) -> bool {
    let d = pn.dimension;
    if u.len() != pn.rules.len() || (0..u.len()).any(|p| !pn.is_rule_solution(p, &u[p])) {
        return false;
    }
    (0..d).all(|j| {
        let delta = u.iter().fold(Rat::zero(), |acc, up| acc - up[j].clone() + up[d + j].clone());
        delta == f[j].clone() - i[j].clone()
    }) && u.iter().all(|up| {
        (0..d).all(|j| (!up[j].is_positive() || i[j].is_positive()) && (!up[d + j].is_positive() || f[j].is_positive()))
    })
}

/// A semi-equation describing the reachability relation of a net: its
/// nonnegative solutions projected onto `start` and `end` are exactly the
/// pairs `(c, c')` with `c ->* c'`.
#[derive(Clone, Debug)]
pub struct ReachSemiEq {
    pub semieq: SemiEq<Rat>,
    pub start: Vec<usize>,
    pub end: Vec<usize>,
}

impl ReachSemiEq {
    /// The same system with `start` and `end` fixed to the given values.
    pub fn pinned(&self, start: &[Rat], end: &[Rat]) -> SemiEq<Rat> {
        let mut b = SystemBuilder::new();
        b.vars(self.semieq.vars());
        b.embed(&self.semieq.system, &(0..self.semieq.vars()).collect::<Vec<_>>());
        for (vars, vals) in [(&self.start, start), (&self.end, end)] {
            for (&v, x) in vars.iter().zip(vals) {
                b.eq(vec![(v, Rat::one())], x.clone());
            }
        }
        SemiEq { system: b.build(), implications: self.semieq.implications.clone() }
    }
}

/// Allocates one macro step from configuration `from`: a solution of every
/// rule fired together, with nonnegative slack after the subtractions.
/// Rules may carry auxiliary variables after their first `2d`.
/// Returns the variables of the resulting configuration.
fn macro_step(b: &mut SystemBuilder<Rat>, d: usize, rules: &[LinSys], from: &[usize]) -> Vec<usize> {
    let to: Vec<usize> = b.vars(d).collect();
    let slack: Vec<usize> = b.vars(d).collect();
    let firings: Vec<Vec<usize>> = rules
        .iter()
        .map(|rule| {
            let v: Vec<usize> = b.vars(rule.vars()).collect();
            b.embed(rule, &v);
            v
        })
        .collect();
    for j in 0..d {
        // from - sum v^- - slack = 0
        let mut terms = vec![(from[j], Rat::one()), (slack[j], -Rat::one())];
        terms.extend(firings.iter().map(|v| (v[j], -Rat::one())));
        b.eq(terms, Rat::zero());
        // to = slack + sum v^+
        let mut terms = vec![(to[j], Rat::one()), (slack[j], -Rat::one())];
        terms.extend(firings.iter().map(|v| (v[d + j], -Rat::one())));
        b.eq(terms, Rat::zero());
    }
    to
}

/// Adds to `b` the reachability constraints from the configuration `start`
/// (`d` existing variables) and returns the end configuration's variables
/// together with the implications.
pub(crate) fn reach_into(
    b: &mut SystemBuilder<Rat>,
    d: usize,
    rules: &[LinSys],
    start: &[usize],
) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut i_prime = start.to_vec();
    for _ in 0..d {
        i_prime = macro_step(b, d, rules, &i_prime);
    }
    let f_prime: Vec<usize> = b.vars(d).collect();
    let mut end = f_prime.clone();
    for _ in 0..d {
        end = macro_step(b, d, rules, &end);
    }
    let aggregates: Vec<Vec<usize>> = rules
        .iter()
        .map(|rule| {
            let u: Vec<usize> = b.vars(rule.vars()).collect();
            b.embed(rule, &u);
            u
        })
        .collect();
    let mut implications = Vec::new();
    for j in 0..d {
        // f' - i' + sum u^- - sum u^+ = 0
        let mut terms = vec![(f_prime[j], Rat::one()), (i_prime[j], -Rat::one())];
        for u in &aggregates {
            terms.push((u[j], Rat::one()));
            terms.push((u[d + j], -Rat::one()));
            implications.push((u[j], i_prime[j]));
            implications.push((u[d + j], f_prime[j]));
        }
        b.eq(terms, Rat::zero());
    }
    (end, implications)
}

/// Reachability as a semi-equation: up to `d` macro steps from the start,
/// an aggregate middle segment satisfying [`serge12_check`], and up to `d`
/// macro steps to the end.
pub fn build_reach_semieq(pn: &HomLinearPn) -> ReachSemiEq {
    let mut b = SystemBuilder::new();
    let start: Vec<usize> = b.vars(pn.dimension).collect();
    let (end, implications) = reach_into(&mut b, pn.dimension, &pn.rules, &start);
    let semieq = SemiEq::new(b.build(), implications).expect("indices allocated above");
    ReachSemiEq { semieq, start, end }
}

/// Homogeneous rule whose solutions are the nonnegative multiples of `v`
/// (a continuous transition).
pub fn ray_rule(v: &[i64]) -> LinSys {
    let n = v.len();
    let pivot = v.iter().position(|&x| x != 0);
    let mut b = SystemBuilder::new();
    b.vars(n);
    match pivot {
        None => {
            for j in 0..n {
                b.eq(vec![(j, Rat::one())], Rat::zero());
            }
        }
        Some(p) => {
            for j in (0..n).filter(|&j| j != p) {
                // v_p x_j - v_j x_p = 0
                b.eq(vec![(j, Rat::from_i64(v[p])), (p, -Rat::from_i64(v[j]))], Rat::zero());
            }
        }
    }
    let sys = b.build();
    debug_assert!(sys.is_homogeneous());
    sys
}
