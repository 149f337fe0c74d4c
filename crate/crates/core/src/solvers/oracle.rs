//! Brute-force reference: fix a slot count and a placement of the target,
//! put every generator on every placement into those slots, and decide the
//! coefficients exactly. Never answers `Unsolvable`.

use num_traits::{One, Zero};

use super::{Domain, Term, Verdict, Witness};
use crate::combinatorics::increasing_maps;
use crate::datavec::{place_columns, MatrixInstance};
use crate::linalg::{feasible_nonneg, first_n_solution_bounded, solve_integer, solve_rational, LinearSystem};
use crate::{Rat, RatMat, RatVec};

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Most generator copies in an `N` combination.
    pub m_bound: u64,
    /// Largest slot count tried.
    pub slot_bound: usize,
    /// Node budget for each `N` search.
    pub budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { m_bound: 4, slot_bound: 6, budget: 2_000_000 }
    }
}

fn flatten(m: &RatMat) -> RatVec {
    m.columns().into_iter().flatten().collect()
}

pub fn oracle_pproduct(inst: &MatrixInstance, domain: Domain, opts: &OracleOptions) -> Verdict {
    let n = inst.n();
    for slots in n..=opts.slot_bound {
        let mut placed: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut columns: Vec<RatVec> = Vec::new();
        for (j, m) in inst.generators.iter().enumerate() {
            for p in increasing_maps(m.cols(), slots) {
                columns.push(flatten(&place_columns(m, &p, slots).expect("valid placement")));
                placed.push((j, p));
            }
        }
        let rows = inst.dimension * slots;
        for tp in increasing_maps(n, slots) {
            let target = flatten(&place_columns(&inst.target, &tp, slots).expect("valid placement"));
            let Some(x) = coefficients(&columns, rows, target, domain, opts) else { continue };
            let terms = placed
                .iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|((vector, placement), coeff)| Term { coeff, vector: *vector, placement: placement.clone() })
                .collect();
            let witness = Witness { terms, slots }.normalized();
            debug_assert!(super::verify_witness(inst, &witness, domain));
            return Verdict::solvable(witness);
        }
    }
    Verdict::unknown()
}

fn coefficients(columns: &[RatVec], rows: usize, target: RatVec, domain: Domain, opts: &OracleOptions) -> Option<Vec<Rat>> {
    let a = RatMat::from_columns(rows, columns).expect("uniform column length");
    match domain {
        Domain::Q => solve_rational(&LinearSystem::new(a, target).ok()?).map(|s| s.particular),
        Domain::Z => solve_integer(&LinearSystem::new(a, target).ok()?).ok()?,
        Domain::QPlus => feasible_nonneg(&LinearSystem::new(a, target).ok()?),
        Domain::N => {
            // extra row: sum of copies plus slack equals m_bound
            let k = columns.len();
            let mut extended: Vec<RatVec> = columns.iter().map(|c| {
                let mut c = c.clone();
                c.push(Rat::one());
                c
            }).collect();
            let mut slack = vec![Rat::zero(); rows];
            slack.push(Rat::one());
            extended.push(slack);
            let mut rhs = target;
            rhs.push(Rat::from_integer((opts.m_bound as i64).into()));
            let sys = LinearSystem::new(RatMat::from_columns(rows + 1, &extended).ok()?, rhs).ok()?;
            let found = first_n_solution_bounded(&sys, &vec![opts.m_bound; k + 1], opts.budget).ok()?;
            found.solutions.into_iter().next().map(|mut x| {
                x.truncate(k);
                x
            })
        }
    }
}
