use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{ToPrimitive, Zero};

use crate::datavec::MatrixInstance;
use crate::error::{Error, Result};
use crate::histogram::{check_multihistogram, profile, Mode};
use crate::linalg::{enumerate_n_solutions_bounded, LinearSystem};
use crate::linpn::Vas;
use crate::{Rat, RatMat};

/// What a transition of the gadget does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transition {
    /// Moves one token from buffer `row` to profile counter `row` of `block`.
    Move { block: usize, row: usize },
    /// Reads a zero-valued letter while in control state `state`.
    Take { state: usize, letter: usize },
    /// Returns the control token after a [`Transition::Take`].
    Release { state: usize },
    /// Reads the letter matching target column `state` and advances.
    Read { state: usize, letter: usize },
    /// Consumes the final control token.
    Accept,
}

/// The VAS built from an instance and a finite column alphabet. Zero is
/// reachable from `init` iff a multihistogram over the alphabet exists.
#[derive(Clone, Debug)]
pub struct HistVas {
    pub vas: Vas,
    pub alphabet: Vec<Vec<i64>>,
    pub transitions: Vec<Transition>,
    /// First counter of each block; a block of `r` rows owns `r - 1`
    /// buffers followed by `r - 1` profile counters.
    pub block_offset: Vec<usize>,
    pub widths: Vec<usize>,
    pub ctrl_offset: usize,
    pub aux_offset: usize,
}

impl HistVas {
    pub fn buffer(&self, block: usize, row: usize) -> usize {
        self.block_offset[block] + row
    }

    pub fn profile_counter(&self, block: usize, row: usize) -> usize {
        self.block_offset[block] + self.widths[block] - 1 + row
    }

    fn index_of(&self, t: &Transition) -> usize {
        self.transitions.iter().position(|x| x == t).expect("transition exists")
    }
}

fn to_i64(v: &Rat) -> Result<i64> {
    if !v.is_integer() {
        return Err(Error::Input(format!("entry {v} is not an integer")));
    }
    v.to_integer().to_i64().ok_or_else(|| Error::Input(format!("entry {v} does not fit in i64")))
}

/// Value of a stacked column under `[M_1 | ... | M_k]`.
fn letter_value(stacked: &RatMat, w: &[i64]) -> Vec<Rat> {
    let w: Vec<Rat> = w.iter().map(|&x| Rat::from_integer(x.into())).collect();
    stacked.mul_vec(&w).expect("letter length matches")
}

/// Nonzero stacked columns with entries at most `bound` whose value is zero
/// or one of the target columns.
pub fn column_alphabet(inst: &MatrixInstance, bound: u64) -> Result<Vec<Vec<i64>>> {
    let stacked = inst.stacked();
    let mut rhs = vec![vec![Rat::zero(); inst.dimension]];
    rhs.extend(inst.target.columns());
    let mut out = BTreeSet::new();
    for b in rhs {
        let e = enumerate_n_solutions_bounded(&LinearSystem::new(stacked.clone(), b)?, bound);
        if e.exhausted {
            return Err(Error::Budget("column alphabet enumeration ran out of budget".into()));
        }
        for s in e.solutions {
            if s.iter().any(|x| !x.is_zero()) {
                out.insert(s.iter().map(to_i64).collect::<Result<Vec<_>>>()?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Builds the gadget. Control is a one-hot chain `ctrl_0 .. ctrl_n` with one
/// auxiliary counter per state so that zero-valued letters can be read in
/// place without an untested self-loop.
pub fn instance_to_vas(inst: &MatrixInstance, alphabet: &[Vec<i64>]) -> Result<HistVas> {
    let widths = inst.widths();
    let total: usize = widths.iter().sum();
    if let Some(w) = alphabet.iter().find(|w| w.len() != total || w.iter().any(|&x| x < 0)) {
        return Err(Error::Input(format!("letter {w:?} is not a nonnegative column of length {total}")));
    }
    let mut block_offset = Vec::with_capacity(widths.len());
    let mut next = 0;
    for &r in &widths {
        block_offset.push(next);
        next += 2 * (r - 1);
    }
    let n = inst.n();
    let ctrl_offset = next;
    let aux_offset = ctrl_offset + n + 1;
    let dim = aux_offset + n + 1;
    let stacked = inst.stacked();
    let targets = inst.target.columns();

    let mut actions = Vec::new();
    let mut transitions = Vec::new();
    for (j, &r) in widths.iter().enumerate() {
        for row in 0..r - 1 {
            let mut a = vec![0i64; dim];
            a[block_offset[j] + row] = -1;
            a[block_offset[j] + r - 1 + row] = 1;
            actions.push(a);
            transitions.push(Transition::Move { block: j, row });
        }
    }
    // counter effect of reading a letter
    let reading = |w: &[i64]| {
        let mut a = vec![0i64; dim];
        let mut start = 0;
        for (j, &r) in widths.iter().enumerate() {
            let col = &w[start..start + r];
            for row in 0..r - 1 {
                a[block_offset[j] + row] += col[row];
                a[block_offset[j] + r - 1 + row] -= col[row + 1];
            }
            start += r;
        }
        a
    };
    for s in 0..=n {
        let mut release = vec![0i64; dim];
        release[aux_offset + s] = -1;
        release[ctrl_offset + s] = 1;
        let mut any_take = false;
        for (l, w) in alphabet.iter().enumerate() {
            let value = letter_value(&stacked, w);
            if value.iter().all(Zero::is_zero) {
                let mut a = reading(w);
                a[ctrl_offset + s] -= 1;
                a[aux_offset + s] += 1;
                actions.push(a);
                transitions.push(Transition::Take { state: s, letter: l });
                any_take = true;
            }
            if s < n && value == targets[s] {
                let mut a = reading(w);
                a[ctrl_offset + s] -= 1;
                a[ctrl_offset + s + 1] += 1;
                actions.push(a);
                transitions.push(Transition::Read { state: s, letter: l });
            }
        }
        if any_take {
            actions.push(release);
            transitions.push(Transition::Release { state: s });
        }
    }
    let mut accept = vec![0i64; dim];
    accept[ctrl_offset + n] = -1;
    actions.push(accept);
    transitions.push(Transition::Accept);

    let mut init = vec![0i64; dim];
    init[ctrl_offset] = 1;
    let vas = Vas::new(dim, actions, init, vec![0; dim])?;
    Ok(HistVas { vas, alphabet: alphabet.to_vec(), transitions, block_offset, widths, ctrl_offset, aux_offset })
}

/// A run of the gadget driven by a multihistogram, with the configuration
/// after every step.
#[derive(Clone, Debug)]
pub struct WordTrace {
    pub gadget: HistVas,
    pub run: Vec<usize>,
    pub configs: Vec<Vec<i64>>,
}

/// Feeds the columns of a multihistogram to the gadget built over its own
/// letters. Before each letter every buffer is emptied into its profile
/// counter. After `j` letters the two counters of row `i` of a block hold
/// `prof(H0)(i, j - 1) + H0(i + 1, j)`, where `H0` is the histogram padded
/// with a zero column; this is checked after every letter.
pub fn simulate_word(inst: &MatrixInstance, family: &[RatMat]) -> Result<WordTrace> {
    let assignment = check_multihistogram(family, &inst.target, &inst.generators, Mode::Integer).map_err(Error::Input)?;
    let cols = family.first().map_or(0, |h| h.cols());
    let word: Vec<Vec<i64>> = (0..cols)
        .map(|p| family.iter().flat_map(|h| h.col(p)).map(|v| to_i64(&v)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let alphabet: Vec<Vec<i64>> =
        word.iter().filter(|w| w.iter().any(|&x| x != 0)).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let gadget = instance_to_vas(inst, &alphabet)?;
    let padded: Vec<RatMat> = family.iter().map(|h| h.insert_col(h.cols(), &vec![Rat::zero(); h.rows()])).collect();
    let profiles: Vec<RatMat> = padded.iter().map(profile).collect();

    let mut conf = gadget.vas.init.clone();
    let mut configs = vec![conf.clone()];
    let mut run = Vec::new();
    let mut fire = |t: usize, conf: &mut Vec<i64>, run: &mut Vec<usize>, configs: &mut Vec<Vec<i64>>| -> Result<()> {
        for (c, a) in conf.iter_mut().zip(&gadget.vas.actions[t]) {
            *c += a;
        }
        if conf.iter().any(|&c| c < 0) {
            return Err(Error::Internal(format!("counter went negative after {:?}", gadget.transitions[t])));
        }
        run.push(t);
        configs.push(conf.clone());
        Ok(())
    };
    let flush = |conf: &mut Vec<i64>, run: &mut Vec<usize>, configs: &mut Vec<Vec<i64>>, fire: &mut dyn FnMut(usize, &mut Vec<i64>, &mut Vec<usize>, &mut Vec<Vec<i64>>) -> Result<()>| -> Result<()> {
        for (j, &r) in gadget.widths.iter().enumerate() {
            for row in 0..r - 1 {
                let t = gadget.index_of(&Transition::Move { block: j, row });
                for _ in 0..conf[gadget.buffer(j, row)] {
                    fire(t, conf, run, configs)?;
                }
            }
        }
        Ok(())
    };
    let mut state = 0;
    for (p, w) in word.iter().enumerate() {
        flush(&mut conf, &mut run, &mut configs, &mut fire)?;
        if w.iter().any(|&x| x != 0) {
            let letter = alphabet.binary_search(w).expect("letter in alphabet");
            if assignment.get(state) == Some(&p) {
                fire(gadget.index_of(&Transition::Read { state, letter }), &mut conf, &mut run, &mut configs)?;
                state += 1;
            } else {
                fire(gadget.index_of(&Transition::Take { state, letter }), &mut conf, &mut run, &mut configs)?;
                fire(gadget.index_of(&Transition::Release { state }), &mut conf, &mut run, &mut configs)?;
            }
        } else if assignment.get(state) == Some(&p) {
            return Err(Error::Input("a zero column cannot match a target column".into()));
        }
        for (j, &r) in gadget.widths.iter().enumerate() {
            for i in 0..r - 1 {
                let held = conf[gadget.buffer(j, i)] + conf[gadget.profile_counter(j, i)];
                let expected = &profiles[j][(i, p)] + &padded[j][(i + 1, p + 1)];
                if Rat::from_integer(held.into()) != expected {
                    return Err(Error::Internal(format!(
                        "counter invariant fails at block {j}, row {i}, after {} letters",
                        p + 1
                    )));
                }
            }
        }
    }
    flush(&mut conf, &mut run, &mut configs, &mut fire)?;
    fire(gadget.index_of(&Transition::Accept), &mut conf, &mut run, &mut configs)?;
    if conf.iter().any(|&c| c != 0) || !gadget.vas.is_run(&run) {
        return Err(Error::Internal("simulation does not end at zero".into()));
    }
    Ok(WordTrace { gadget, run, configs })
}

/// Breadth-first search for a multihistogram whose columns come from
/// `alphabet`, using at most `max_cols` columns. The state is the number of
/// target columns read and, per block row, the difference of consecutive
/// prefix sums. `Ok(None)` is definitive only when `complete` is set.
pub fn multihistogram_over_alphabet(
    inst: &MatrixInstance,
    alphabet: &[Vec<i64>],
    max_cols: usize,
) -> Result<(Option<Vec<RatMat>>, bool)> {
    let widths = inst.widths();
    let stacked = inst.stacked();
    let targets = inst.target.columns();
    let n = inst.n();
    let values: Vec<Vec<Rat>> = alphabet.iter().map(|w| letter_value(&stacked, w)).collect();
    let dims: usize = widths.iter().map(|r| r - 1).sum();
    type State = (usize, Vec<i64>);
    let start: State = (0, vec![0; dims]);
    let mut parent: HashMap<State, Option<(State, usize)>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut complete = true;
    while let Some(((s, q), depth)) = queue.pop_front() {
        if s == n && q.iter().all(|&x| x == 0) {
            let mut letters = Vec::new();
            let mut cur = (s, q);
            while let Some(Some((prev, l))) = parent.get(&cur) {
                letters.push(*l);
                cur = prev.clone();
            }
            letters.reverse();
            return Ok((Some(family_of(&widths, alphabet, &letters)), complete));
        }
        for (l, w) in alphabet.iter().enumerate() {
            let zero = values[l].iter().all(Zero::is_zero);
            let advance = s < n && values[l] == targets[s];
            for next_s in [zero.then_some(s), advance.then_some(s + 1)].into_iter().flatten() {
                let Some(next_q) = step(&widths, &q, w) else { continue };
                let key = (next_s, next_q);
                if parent.contains_key(&key) {
                    continue;
                }
                if depth == max_cols {
                    complete = false;
                    continue;
                }
                parent.insert(key.clone(), Some(((s, q.clone()), l)));
                queue.push_back((key, depth + 1));
            }
        }
    }
    Ok((None, complete))
}

fn step(widths: &[usize], q: &[i64], w: &[i64]) -> Option<Vec<i64>> {
    let mut out = q.to_vec();
    let (mut qi, mut wi) = (0, 0);
    for &r in widths {
        for row in 0..r - 1 {
            if q[qi] < w[wi + row + 1] {
                return None;
            }
            out[qi] += w[wi + row] - w[wi + row + 1];
            qi += 1;
        }
        wi += r;
    }
    Some(out)
}

fn family_of(widths: &[usize], alphabet: &[Vec<i64>], letters: &[usize]) -> Vec<RatMat> {
    let mut start = 0;
    widths
        .iter()
        .map(|&r| {
            let rows: Vec<Vec<Rat>> = (0..r)
                .map(|i| letters.iter().map(|&l| Rat::from_integer(alphabet[l][start + i].into())).collect())
                .collect();
            start += r;
            RatMat::from_rows(rows, letters.len()).expect("uniform rows")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linpn::{vas_bounded_reach, Reach};

    #[test]
    fn single_cell() {
        let inst = MatrixInstance::from_i64(&[&[1]], &[&[&[1]]]);
        let g = instance_to_vas(&inst, &[vec![1]]).unwrap();
        assert_eq!(vas_bounded_reach(&g.vas, 4, 10), Reach::Reachable(vec![0, 1]));
        let g = instance_to_vas(&inst, &[]).unwrap();
        assert_eq!(vas_bounded_reach(&g.vas, 4, 10), Reach::Unreachable);
    }

    #[test]
    fn degree_two_histogram_drives_counters() {
        let h = RatMat::from_i64(&[&[1, 1, 0, 0, 0], &[0, 0, 2, 0, 0], &[0, 0, 0, 1, 1]]);
        let inst = MatrixInstance::from_i64(&[&[1, 1, -2, 3, 3]], &[&[&[1, -1, 3]]]);
        let trace = simulate_word(&inst, &[h]).unwrap();
        assert!(trace.configs.last().unwrap().iter().all(|&c| c == 0));
        assert!(trace.gadget.vas.is_run(&trace.run));
        let takes = trace.run.iter().filter(|&&t| matches!(trace.gadget.transitions[t], Transition::Take { .. })).count();
        assert_eq!(takes, 0);
    }

    #[test]
    fn non_histogram_is_rejected() {
        let inst = MatrixInstance::from_i64(&[&[1]], &[&[&[1, 2]]]);
        assert!(simulate_word(&inst, &[RatMat::from_i64(&[&[0], &[1]])]).is_err());
    }

    #[test]
    fn search_agrees_with_reachability() {
        let inst = MatrixInstance::from_i64(&[&[1, -1]], &[&[&[1, -1]]]);
        let alphabet = column_alphabet(&inst, 2).unwrap();
        let (found, _) = multihistogram_over_alphabet(&inst, &alphabet, 6).unwrap();
        let family = found.unwrap();
        assert!(crate::histogram::is_multihistogram(&family, &inst.target, &inst.generators, Mode::Integer));
        let g = instance_to_vas(&inst, &alphabet).unwrap();
        assert!(matches!(vas_bounded_reach(&g.vas, 4, 40), Reach::Reachable(_)));
        simulate_word(&inst, &family).unwrap();
    }
}
