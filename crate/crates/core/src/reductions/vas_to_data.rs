use std::collections::BTreeSet;

use log::warn;
use num_traits::ToPrimitive;

use crate::datavec::{place_columns, DataVector, MatrixInstance};
use crate::error::{Error, Result};
use crate::linpn::Vas;
use crate::solvers::{check_witness, Domain, Witness};
use crate::{Rat, RatMat};

/// An action `a` written as `s+ - s-` with `s-` spread over lower data
/// than `s+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataRealization {
    pub base_action: Vec<i64>,
    pub spread_neg: Vec<Vec<i64>>,
    pub spread_pos: Vec<Vec<i64>>,
}

impl DataRealization {
    /// Data values `1, 2, ...`: the negative block first.
    pub fn to_data_vector(&self) -> DataVector {
        DataVector::from_matrix(&self.to_matrix())
    }

    pub fn to_matrix(&self) -> RatMat {
        let d = self.base_action.len();
        let cols: Vec<Vec<Rat>> = self
            .spread_neg
            .iter()
            .map(|c| c.iter().map(|&v| Rat::from_integer((-v).into())).collect())
            .chain(self.spread_pos.iter().map(|c| c.iter().map(|&v| Rat::from_integer(v.into())).collect()))
            .collect();
        RatMat::from_columns(d, &cols).expect("uniform dimension")
    }
}

/// Realizations produced per action before [`enumerate_realizations`]
/// stops with an error.
pub const DEFAULT_REALIZATION_CAP: usize = 20_000;

/// Ordered sequences of nonzero nonnegative vectors summing to `v`.
fn compositions(v: &[i64], cap: usize, out: &mut Vec<Vec<Vec<i64>>>, prefix: &mut Vec<Vec<i64>>) -> bool {
    if v.iter().all(|&x| x == 0) {
        if out.len() >= cap {
            return false;
        }
        out.push(prefix.clone());
        return true;
    }
    // every nonzero part p <= v, in lexicographic order
    let mut part = vec![0i64; v.len()];
    loop {
        let mut i = v.len();
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if part[i] < v[i] {
                part[i] += 1;
                for p in part.iter_mut().skip(i + 1) {
                    *p = 0;
                }
                break;
            }
        }
        let rest: Vec<i64> = v.iter().zip(&part).map(|(a, b)| a - b).collect();
        prefix.push(part.clone());
        let ok = compositions(&rest, cap, out, prefix);
        prefix.pop();
        if !ok {
            return false;
        }
    }
}

/// All realizations of `a` up to order isomorphism; at most `cap`.
pub fn enumerate_realizations(a: &[i64], cap: usize) -> Result<Vec<DataRealization>> {
    let neg: Vec<i64> = a.iter().map(|&x| (-x).max(0)).collect();
    let pos: Vec<i64> = a.iter().map(|&x| x.max(0)).collect();
    let (mut negs, mut poss) = (Vec::new(), Vec::new());
    let complete = compositions(&neg, cap, &mut negs, &mut Vec::new()) && compositions(&pos, cap, &mut poss, &mut Vec::new());
    if !complete || negs.len().saturating_mul(poss.len()) > cap {
        warn!("realizations of {a:?} exceed the cap of {cap}");
        return Err(Error::Budget(format!("realizations of {a:?} exceed the cap of {cap}")));
    }
    let mut out = Vec::with_capacity(negs.len() * poss.len());
    for n in &negs {
        for p in &poss {
            out.push(DataRealization { base_action: a.to_vec(), spread_neg: n.clone(), spread_pos: p.clone() });
        }
    }
    Ok(out)
}

/// Adds a counter holding one token and an action `(-f, -1)`, so that `f`
/// is reachable in the input iff zero is reachable in the output.
pub fn normalize_final(vas: &Vas) -> Vas {
    if vas.final_.iter().all(|&v| v == 0) {
        return vas.clone();
    }
    let d = vas.dimension;
    let mut actions: Vec<Vec<i64>> = vas
        .actions
        .iter()
        .map(|a| a.iter().copied().chain(std::iter::once(0)).collect())
        .collect();
    actions.push(vas.final_.iter().map(|&v| -v).chain(std::iter::once(-1)).collect());
    let init = vas.init.iter().copied().chain(std::iter::once(1)).collect();
    Vas::new(d + 1, actions, init, vec![0; d + 1]).expect("well-formed by construction")
}

/// The instance of a VAS with zero final configuration, and the action each
/// generator realizes.
#[derive(Clone, Debug)]
pub struct VasInstance {
    pub instance: MatrixInstance,
    pub realizations: Vec<DataRealization>,
    pub action_of: Vec<usize>,
}

/// Generators: every realization of every nonzero action. Target: minus
/// the initial configuration, on a single datum.
pub fn vas_to_instance(vas: &Vas, cap: usize) -> Result<VasInstance> {
    if vas.final_.iter().any(|&v| v != 0) {
        return Err(Error::Input("final configuration must be zero; normalize first".into()));
    }
    let d = vas.dimension;
    let mut seen = BTreeSet::new();
    let (mut generators, mut realizations, mut action_of) = (Vec::new(), Vec::new(), Vec::new());
    for (k, a) in vas.actions.iter().enumerate() {
        if a.iter().all(|&v| v == 0) || !seen.insert(a.clone()) {
            continue;
        }
        for r in enumerate_realizations(a, cap)? {
            generators.push(r.to_matrix());
            realizations.push(r);
            action_of.push(k);
        }
    }
    if generators.is_empty() {
        return Err(Error::Input("the VAS has no nonzero action".into()));
    }
    let target = if vas.init.iter().all(|&v| v == 0) {
        RatMat::zeros(d, 0)
    } else {
        let col: Vec<Rat> = vas.init.iter().map(|&v| Rat::from_integer((-v).into())).collect();
        RatMat::from_columns(d, &[col])?
    };
    Ok(VasInstance { instance: MatrixInstance::new(target, generators)?, realizations, action_of })
}

/// Orders the copies of an `N` witness along the immediate-consequence
/// relation and returns the VAS actions together with the data
/// configurations after each step (the first one is the spread of `init`).
pub fn witness_to_data_run(vi: &VasInstance, vas: &Vas, w: &Witness) -> Result<(Vec<usize>, Vec<RatMat>)> {
    check_witness(&vi.instance, w, Domain::N).map_err(Error::Input)?;
    let sum = w.evaluate(&vi.instance).map_err(Error::Input)?;
    // copies: (term index, lower slots, upper slots)
    let mut copies: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for (t, term) in w.terms.iter().enumerate() {
        let count = term.coeff.to_integer().to_usize().ok_or_else(|| Error::Input("coefficient too large".into()))?;
        let k = vi.realizations[term.vector].spread_neg.len();
        for _ in 0..count {
            copies.push((t, term.placement[..k].to_vec(), term.placement[k..].to_vec()));
        }
    }
    let m = copies.len();
    // b after a when an upper slot of a is a lower slot of b
    let mut indegree = vec![0usize; m];
    let mut succ = vec![Vec::new(); m];
    for a in 0..m {
        for b in 0..m {
            if a != b && copies[a].2.iter().any(|s| copies[b].1.contains(s)) {
                succ[a].push(b);
                indegree[b] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..m).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(&i) = ready.iter().next() {
        ready.remove(&i);
        order.push(i);
        for &b in &succ[i] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.insert(b);
            }
        }
    }
    if order.len() != m {
        return Err(Error::Internal("immediate-consequence relation has a cycle".into()));
    }
    // initial data configuration: -(target), i.e. the spread of init
    let mut conf = sum.scale(&Rat::from_integer((-1).into()));
    let mut trace = vec![conf.clone()];
    let mut actions = Vec::with_capacity(m);
    for &i in &order {
        let term = &w.terms[copies[i].0];
        let placed = place_columns(&vi.instance.generators[term.vector], &term.placement, w.slots)?;
        conf = conf.add(&placed)?;
        if !conf.is_nonnegative() {
            return Err(Error::Internal("data run went negative".into()));
        }
        trace.push(conf.clone());
        actions.push(vi.action_of[term.vector]);
    }
    if !conf.is_zero() {
        return Err(Error::Internal("data run does not end at zero".into()));
    }
    if !vas.is_run(&actions) {
        return Err(Error::Internal("reconstructed actions are not a run".into()));
    }
    Ok((actions, trace))
}

pub fn witness_to_run(vi: &VasInstance, vas: &Vas, w: &Witness) -> Result<Vec<usize>> {
    witness_to_data_run(vi, vas, w).map(|(run, _)| run)
}
