//! Solvers for the exchange-product problem over `N`, `Z`, `Q` and `Q+`.
//!
//! A witness is a list of terms `(coeff, generator, placement)`: the
//! generator's columns are put on the given slots of a shared slot sequence,
//! scaled, and summed. A witness is valid when the sum is a 0-extension of
//! the target matrix and every coefficient lies in the domain.

mod nsearch;
mod oracle;
mod qplus;
mod thm3;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::datavec::{place_columns, MatrixInstance};
use crate::error::Error;
use crate::histogram::recover_simple;
use crate::scalar::Scalar;
use crate::{Rat, RatMat, RatVec};

pub use nsearch::{solve_n_bounded, NSearchOptions};
pub use oracle::{oracle_pproduct, OracleOptions};
pub use qplus::{solve_qplus, solve_qplus_literal, solve_qplus_with_evidence, QplusEvidence};
pub use thm3::{solve_q, solve_z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    N,
    Z,
    Q,
    QPlus,
}

impl Domain {
    pub fn contains(self, c: &Rat) -> bool {
        match self {
            Domain::N => c.is_integral() && !c.is_negative(),
            Domain::Z => c.is_integral(),
            Domain::Q => true,
            Domain::QPlus => !c.is_negative(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::N => "N",
            Domain::Z => "Z",
            Domain::Q => "Q",
            Domain::QPlus => "Qplus",
        })
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "N" => Ok(Domain::N),
            "Z" => Ok(Domain::Z),
            "Q" => Ok(Domain::Q),
            "Qplus" | "Q+" => Ok(Domain::QPlus),
            _ => Err(Error::Input(format!("unknown domain {s:?} (expected N, Z, Q or Qplus)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Solvable,
    Unsolvable,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Solvable => "solvable",
            Status::Unsolvable => "unsolvable",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub coeff: Rat,
    pub vector: usize,
    pub placement: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub terms: Vec<Term>,
    pub slots: usize,
}

impl Witness {
    /// Merges terms with equal generator and placement, drops zero
    /// coefficients and sorts.
    pub fn normalized(self) -> Self {
        let mut acc: BTreeMap<(usize, Vec<usize>), Rat> = BTreeMap::new();
        for t in self.terms {
            let e = acc.entry((t.vector, t.placement)).or_insert_with(Rat::zero);
            *e = e.clone() + t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((vector, placement), coeff)| Term { coeff, vector, placement })
            .collect();
        Witness { terms, slots: self.slots }
    }

    /// Sum of the placed, scaled generators.
    pub fn evaluate(&self, inst: &MatrixInstance) -> Result<RatMat, String> {
        let mut sum = RatMat::zeros(inst.dimension, self.slots);
        for (k, t) in self.terms.iter().enumerate() {
            let m = inst
                .generators
                .get(t.vector)
                .ok_or_else(|| format!("term {k}: no generator {}", t.vector))?;
            let placed = place_columns(m, &t.placement, self.slots).map_err(|e| format!("term {k}: {e}"))?;
            sum = sum.add(&placed.scale(&t.coeff)).expect("same shape");
        }
        Ok(sum)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// Nonnegative solution of the assembled semi-equation, for `Q+`.
    pub evidence: Option<RatVec>,
}

impl Verdict {
    pub fn solvable(witness: Witness) -> Self {
        Verdict { status: Status::Solvable, witness: Some(witness), evidence: None }
    }

    pub fn unsolvable() -> Self {
        Verdict { status: Status::Unsolvable, witness: None, evidence: None }
    }

    pub fn unknown() -> Self {
        Verdict { status: Status::Unknown, witness: None, evidence: None }
    }
}

/// Checks a witness against an instance; `Err` explains the first problem.
pub fn check_witness(inst: &MatrixInstance, w: &Witness, domain: Domain) -> Result<(), String> {
    if let Some(t) = w.terms.iter().find(|t| !domain.contains(&t.coeff)) {
        return Err(format!("coefficient {} is not in {domain}", t.coeff));
    }
    let sum = w.evaluate(inst)?;
    if recover_simple(&sum, &inst.target).is_none() {
        return Err("the weighted sum is not a 0-extension of the target".into());
    }
    Ok(())
}

pub fn verify_witness(inst: &MatrixInstance, w: &Witness, domain: Domain) -> bool {
    check_witness(inst, w, domain).is_ok()
}
