//! Data vectors over an ordered domain and their matrix encodings.
//!
//! Only the relative order of data values matters, so everything downstream
//! works on [`MatrixInstance`]: the target and each generator become `d x c`
//! matrices whose columns are the values at consecutive support points.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::{Rat, RatMat, RatVec};

/// A finitely supported map from ordered data to `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataVector {
    dimension: usize,
    points: Vec<(Rat, RatVec)>,
}

impl DataVector {
    /// Points must be in strictly increasing datum order with nonzero values.
    pub fn new(dimension: usize, points: Vec<(Rat, RatVec)>) -> Result<Self> {
        for (k, (datum, value)) in points.iter().enumerate() {
            if value.len() != dimension {
                return Err(Error::Dimension(format!(
                    "point {k} has {} entries, expected {dimension}",
                    value.len()
                )));
            }
            if value.iter().all(Zero::is_zero) {
                return Err(Error::Input(format!("point {k} (datum {datum}) has a zero value")));
            }
            if k > 0 && points[k - 1].0 >= *datum {
                return Err(Error::Input(format!("data not strictly increasing at point {k}")));
            }
        }
        Ok(DataVector { dimension, points })
    }

    pub fn zero(dimension: usize) -> Self {
        DataVector { dimension, points: Vec::new() }
    }

    /// Reads the columns of `m` as values at data `1, 2, ...`; zero columns
    /// are skipped.
    pub fn from_matrix(m: &RatMat) -> Self {
        let points = m
            .columns()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.iter().all(Zero::is_zero))
            .map(|(j, c)| (Rat::from_i64(j as i64 + 1), c))
            .collect();
        DataVector { dimension: m.rows(), points }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[(Rat, RatVec)] {
        &self.points
    }

    pub fn support_len(&self) -> usize {
        self.points.len()
    }

    pub fn is_integral(&self) -> bool {
        self.points.iter().all(|(_, v)| v.iter().all(Scalar::is_integral))
    }

    pub fn to_matrix(&self) -> RatMat {
        let cols: Vec<RatVec> = self.points.iter().map(|(_, v)| v.clone()).collect();
        RatMat::from_columns(self.dimension, &cols).expect("uniform dimension")
    }

    pub fn undata(&self) -> RatVec {
        column_sum(&self.to_matrix())
    }

    pub fn compon(&self) -> Vec<RatVec> {
        compon_of(&self.to_matrix())
    }
}

/// Sum of all columns.
pub fn column_sum(m: &RatMat) -> RatVec {
    (0..m.rows())
        .map(|i| m.row(i).iter().fold(Rat::zero(), |a, b| a + b))
        .collect()
}

/// Distinct nonzero columns, sorted.
pub fn compon_of(m: &RatMat) -> Vec<RatVec> {
    m.columns()
        .into_iter()
        .filter(|c| !c.iter().all(Zero::is_zero))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Every 0-extension of `m` with at most `c_max` columns, sorted and
/// without duplicates.
pub fn zero_extensions_up_to(m: &RatMat, c_max: usize) -> Vec<RatMat> {
    let c = m.cols();
    let mut out = BTreeSet::new();
    for total in c..=c_max {
        for placement in crate::combinatorics::increasing_maps(c, total) {
            out.insert(place_columns(m, &placement, total).expect("valid placement"));
        }
    }
    out.into_iter().collect()
}

/// The `rows x slots` matrix carrying column `i` of `m` at slot
/// `placement[i]` and zeros elsewhere. Slots are 0-based.
pub fn place_columns(m: &RatMat, placement: &[usize], slots: usize) -> Result<RatMat> {
    if placement.len() != m.cols() {
        return Err(Error::Input(format!(
            "placement has {} entries for {} columns",
            placement.len(),
            m.cols()
        )));
    }
    if placement.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input("placement is not strictly increasing".into()));
    }
    if placement.last().is_some_and(|&p| p >= slots) {
        return Err(Error::Input(format!("placement exceeds {slots} slots")));
    }
    let mut out = RatMat::zeros(m.rows(), slots);
    for (i, &p) in placement.iter().enumerate() {
        for r in 0..m.rows() {
            out[(r, p)] = m[(r, i)].clone();
        }
    }
    Ok(out)
}

/// `v` moved onto the slots `placement` (0-based, strictly increasing).
pub fn shift_embed(v: &DataVector, placement: &[usize], slots: usize) -> Result<RatMat> {
    place_columns(&v.to_matrix(), placement, slots)
}

/// A target and generators of equal dimension, all integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub dimension: usize,
    pub target: DataVector,
    pub generators: Vec<DataVector>,
}

impl Instance {
    pub fn new(dimension: usize, target: DataVector, generators: Vec<DataVector>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Input("no generators".into()));
        }
        for v in std::iter::once(&target).chain(&generators) {
            if v.dimension() != dimension {
                return Err(Error::Dimension(format!(
                    "data vector of dimension {} in a dimension-{dimension} instance",
                    v.dimension()
                )));
            }
            if !v.is_integral() {
                return Err(Error::Input("instance values must be integers".into()));
            }
        }
        Ok(Instance { dimension, target, generators })
    }

    pub fn to_matrix_problem(&self) -> MatrixInstance {
        MatrixInstance {
            dimension: self.dimension,
            target: self.target.to_matrix(),
            generators: self.generators.iter().map(DataVector::to_matrix).collect(),
        }
    }
}

/// The target matrix `D` and generator matrices `M_1..M_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixInstance {
    pub dimension: usize,
    pub target: RatMat,
    pub generators: Vec<RatMat>,
}

impl MatrixInstance {
    pub fn new(target: RatMat, generators: Vec<RatMat>) -> Result<Self> {
        let dimension = target.rows();
        if generators.is_empty() {
            return Err(Error::Input("no generators".into()));
        }
        for (k, m) in std::iter::once(&target).chain(&generators).enumerate() {
            if m.rows() != dimension {
                return Err(Error::Dimension(format!("matrix {k} has {} rows, expected {dimension}", m.rows())));
            }
            if !m.is_integral() {
                return Err(Error::Input("instance values must be integers".into()));
            }
            if (0..m.cols()).any(|j| m.is_zero_col(j)) {
                return Err(Error::Input(format!("matrix {k} has a zero column")));
            }
        }
        Ok(MatrixInstance { dimension, target, generators })
    }

    /// Builds from integer literals; panics on invalid input.
    pub fn from_i64(target: &[&[i64]], generators: &[&[&[i64]]]) -> Self {
        let dim = if target.is_empty() { generators[0].len() } else { target.len() };
        let t = if target.is_empty() || target[0].is_empty() {
            RatMat::zeros(dim, 0)
        } else {
            RatMat::from_i64(target)
        };
        Self::new(t, generators.iter().map(|g| RatMat::from_i64(g)).collect()).expect("valid literal instance")
    }

    pub fn to_instance(&self) -> Instance {
        Instance {
            dimension: self.dimension,
            target: DataVector::from_matrix(&self.target),
            generators: self.generators.iter().map(DataVector::from_matrix).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn n(&self) -> usize {
        self.target.cols()
    }

    /// Column dimensions `r_j` of the generators.
    pub fn widths(&self) -> Vec<usize> {
        self.generators.iter().map(|m| m.cols()).collect()
    }

    /// `[M_1 | ... | M_k]`.
    pub fn stacked(&self) -> RatMat {
        let refs: Vec<&RatMat> = self.generators.iter().collect();
        RatMat::hstack(self.dimension, &refs).expect("shared row dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex() -> DataVector {
        DataVector::new(
            3,
            vec![
                (Rat::from_i64(1), vec![1, 3, 0].into_iter().map(Rat::from_i64).collect()),
                (Rat::from_i64(2), vec![2, 0, 2].into_iter().map(Rat::from_i64).collect()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_example_matrix() {
        let m = ex().to_matrix();
        assert_eq!(m, RatMat::from_i64(&[&[1, 2], &[3, 0], &[0, 2]]));
        let exts = zero_extensions_up_to(&m, 4);
        assert!(exts.contains(&RatMat::from_i64(&[&[0, 1, 2], &[0, 3, 0], &[0, 0, 2]])));
        assert!(exts.contains(&RatMat::from_i64(&[&[1, 0, 0, 2], &[3, 0, 0, 0], &[0, 0, 0, 2]])));
        // 1 + 3 + 6 placements
        assert_eq!(exts.len(), 10);
        assert_eq!(zero_extensions_up_to(&m, 2), vec![m]);
    }

    #[test]
    fn projections() {
        let v = ex();
        assert_eq!(v.undata(), vec![Rat::from_i64(3), Rat::from_i64(3), Rat::from_i64(2)]);
        assert_eq!(v.compon().len(), 2);
        let z = DataVector::zero(2);
        assert_eq!(z.to_matrix().shape(), (2, 0));
        assert_eq!(z.undata(), vec![Rat::zero(), Rat::zero()]);
        assert!(z.compon().is_empty());
        let w = DataVector::from_matrix(&RatMat::from_i64(&[&[1, 1]]));
        assert_eq!(w.compon(), vec![vec![Rat::from_i64(1)]]);
    }

    #[test]
    fn ordering_enforced() {
        let one = vec![Rat::from_i64(1)];
        assert!(DataVector::new(1, vec![(Rat::from_i64(2), one.clone()), (Rat::from_i64(1), one.clone())]).is_err());
        assert!(DataVector::new(1, vec![(Rat::from_i64(2), vec![Rat::zero()])]).is_err());
    }

    #[test]
    fn embedding() {
        let s = shift_embed(&ex(), &[0, 2], 4).unwrap();
        assert_eq!(s, RatMat::from_i64(&[&[1, 0, 2, 0], &[3, 0, 0, 0], &[0, 0, 2, 0]]));
        assert_eq!(shift_embed(&ex(), &[0, 1], 2).unwrap(), ex().to_matrix());
        assert!(shift_embed(&ex(), &[1, 1], 3).is_err());
        assert_eq!(shift_embed(&DataVector::zero(3), &[], 2).unwrap(), RatMat::zeros(3, 2));
    }

    #[test]
    fn round_trip() {
        let inst = MatrixInstance::from_i64(&[&[1, 2], &[3, 0], &[0, 2]], &[&[&[1], &[1], &[1]]]);
        assert_eq!(inst.to_instance().to_matrix_problem(), inst);
    }
}
