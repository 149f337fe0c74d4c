//! Histograms: nonnegative matrices with equal row sums and row-prefix
//! dominance between consecutive rows, plus the operations built on them.
//!
//! Rows and columns are 0-based. A simple histogram with `r` rows and `c`
//! columns is stored as its placement map `f: {0..r} -> {0..c}`, which is
//! strictly increasing.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Integer,
    Rational,
}

/// First condition that keeps a matrix from being a histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Negative { row: usize, col: usize },
    NonIntegral { row: usize, col: usize },
    RowSum { row: usize },
    /// `sum H(row, 0..prefix) < sum H(row+1, 0..prefix+1)`.
    Dominance { row: usize, prefix: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative { row, col } => write!(f, "negative entry at ({row}, {col})"),
            Violation::NonIntegral { row, col } => write!(f, "non-integral entry at ({row}, {col})"),
            Violation::RowSum { row } => write!(f, "row {row} sum differs from row 0"),
            Violation::Dominance { row, prefix } => {
                write!(f, "prefix dominance fails between rows {row} and {} at length {prefix}", row + 1)
            }
        }
    }
}

fn prefix_sums<T: Scalar>(h: &Matrix<T>) -> Vec<Vec<T>> {
    (0..h.rows())
        .map(|i| {
            let mut acc = T::zero();
            let mut out = vec![T::zero()];
            for v in h.row(i) {
                acc = acc + v.clone();
                out.push(acc.clone());
            }
            out
        })
        .collect()
}

fn check_entries<T: Scalar>(h: &Matrix<T>, mode: Mode) -> std::result::Result<(), Violation> {
    for row in 0..h.rows() {
        for col in 0..h.cols() {
            let v = &h[(row, col)];
            if v.is_negative() {
                return Err(Violation::Negative { row, col });
            }
            if mode == Mode::Integer && !v.is_integral() {
                return Err(Violation::NonIntegral { row, col });
            }
        }
    }
    Ok(())
}

/// Returns the degree, or the first violated condition.
pub fn check_histogram<T: Scalar>(h: &Matrix<T>, mode: Mode) -> std::result::Result<T, Violation> {
    check_entries(h, mode)?;
    let (r, c) = h.shape();
    if r == 0 {
        return Ok(T::zero());
    }
    let pre = prefix_sums(h);
    let degree = pre[0][c].clone();
    for (row, p) in pre.iter().enumerate() {
        if p[c] != degree {
            return Err(Violation::RowSum { row });
        }
    }
    for row in 0..r - 1 {
        for prefix in 0..c {
            if pre[row][prefix] < pre[row + 1][prefix + 1] {
                return Err(Violation::Dominance { row, prefix });
            }
        }
    }
    Ok(degree)
}

pub fn is_histogram<T: Scalar>(h: &Matrix<T>, mode: Mode) -> bool {
    check_histogram(h, mode).is_ok()
}

/// `prof(i, j) = sum H(i, 0..=j) - sum H0(i+1, 0..=j+1)` over the
/// zero-padded `H0`, for `0 <= i < r-1` and `0 <= j < c`.
pub fn profile<T: Scalar>(h: &Matrix<T>) -> Matrix<T> {
    let (r, c) = h.shape();
    let pre = prefix_sums(h);
    let rows = (0..r.saturating_sub(1))
        .map(|i| (0..c).map(|j| pre[i][j + 1].clone() - pre[i + 1][(j + 2).min(c)].clone()).collect())
        .collect();
    Matrix::from_rows(rows, c).expect("rectangular")
}

/// Histogram test through the profile: nonnegative profile with zero last
/// column, and additionally `H(i+1, 0) = 0`, the prefix-length-0 case that
/// the profile columns do not cover.
pub fn is_histogram_via_profile<T: Scalar>(h: &Matrix<T>, mode: Mode) -> bool {
    if check_entries(h, mode).is_err() {
        return false;
    }
    let (r, c) = h.shape();
    if r <= 1 {
        return true;
    }
    if c == 0 {
        return true;
    }
    if (1..r).any(|i| !h[(i, 0)].is_zero()) {
        return false;
    }
    let p = profile(h);
    p.entries().all(|v| !v.is_negative()) && (0..r - 1).all(|i| p[(i, c - 1)].is_zero())
}

/// A degree-1 histogram, given by its strictly increasing placement map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleHistogram {
    map: Vec<usize>,
    cols: usize,
}

impl SimpleHistogram {
    pub fn new(map: Vec<usize>, cols: usize) -> Result<Self> {
        if map.windows(2).any(|w| w[0] >= w[1]) || map.last().is_some_and(|&l| l >= cols) {
            return Err(Error::Input(format!("{map:?} is not a strictly increasing map into {cols} columns")));
        }
        Ok(SimpleHistogram { map, cols })
    }

    pub fn identity(n: usize) -> Self {
        SimpleHistogram { map: (0..n).collect(), cols: n }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn rows(&self) -> usize {
        self.map.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.map.len(), self.cols);
        for (i, &j) in self.map.iter().enumerate() {
            m[(i, j)] = T::one();
        }
        m
    }

    /// Reads a 0/1 matrix with a single one per row.
    pub fn from_matrix<T: Scalar>(m: &Matrix<T>) -> Option<Self> {
        let mut map = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let ones: Vec<usize> = (0..m.cols()).filter(|&j| !m[(i, j)].is_zero()).collect();
            if ones.len() != 1 || !m[(i, ones[0])].is_one() {
                return None;
            }
            map.push(ones[0]);
        }
        SimpleHistogram::new(map, m.cols()).ok()
    }
}

/// Splits an integer histogram of degree `s` into `s` simple histograms by
/// repeatedly taking, in each row, the leftmost positive entry.
pub fn decompose<T: Scalar>(h: &Matrix<T>) -> Result<Vec<SimpleHistogram>> {
    let degree = check_histogram(h, Mode::Integer).map_err(|v| Error::Input(format!("not a histogram: {v}")))?;
    let s: usize = degree
        .as_int()
        .and_then(|d| d.to_string().parse().ok())
        .ok_or_else(|| Error::Input("degree out of range".into()))?;
    let (r, c) = h.shape();
    let mut rest = h.clone();
    let mut out = Vec::with_capacity(s);
    if r == 0 {
        return Ok(out);
    }
    for _ in 0..s {
        let map: Vec<usize> = (0..r)
            .map(|i| (0..c).find(|&j| rest[(i, j)].is_positive()).expect("positive row sum"))
            .collect();
        let simple = SimpleHistogram::new(map, c)
            .map_err(|e| Error::Internal(format!("leftmost extraction not monotone: {e}")))?;
        for (i, &j) in simple.map().iter().enumerate() {
            rest[(i, j)] = rest[(i, j)].clone() - T::one();
        }
        if !is_histogram(&rest, Mode::Integer) {
            return Err(Error::Internal("remainder after extraction is not a histogram".into()));
        }
        out.push(simple);
    }
    debug_assert!(rest.is_zero());
    Ok(out)
}

/// `M * S`: column `i` of `m` moved to column `f(i)`.
pub fn mul_simple<T: Scalar>(m: &Matrix<T>, s: &SimpleHistogram) -> Result<Matrix<T>> {
    if m.cols() != s.rows() {
        return Err(Error::Dimension(format!("{} columns against {} rows", m.cols(), s.rows())));
    }
    let mut out = Matrix::zeros(m.rows(), s.cols());
    for (i, &j) in s.map().iter().enumerate() {
        for r in 0..m.rows() {
            out[(r, j)] = m[(r, i)].clone();
        }
    }
    Ok(out)
}

/// The lexicographically least `S` with `n = M * S`, if `n` is a
/// 0-extension of `m`.
pub fn recover_simple<T: Scalar>(n: &Matrix<T>, m: &Matrix<T>) -> Option<SimpleHistogram> {
    if n.rows() != m.rows() {
        return None;
    }
    let mut map = Vec::with_capacity(m.cols());
    for p in 0..n.cols() {
        let i = map.len();
        let col = n.col(p);
        if i < m.cols() && col == m.col(i) {
            map.push(p);
        } else if !col.iter().all(Zero::is_zero) {
            return None;
        }
    }
    if map.len() != m.cols() {
        return None;
    }
    SimpleHistogram::new(map, n.cols()).ok()
}

/// Replaces column `j` by the two columns `left`, `right`.
pub fn smear<T: Scalar>(h: &Matrix<T>, j: usize, left: &[T], right: &[T]) -> Result<Matrix<T>> {
    let (r, c) = h.shape();
    if j >= c {
        return Err(Error::Input(format!("column {j} out of range for {c} columns")));
    }
    if left.len() != r || right.len() != r {
        return Err(Error::Dimension(format!("split columns must have {r} entries")));
    }
    for i in 0..r {
        if left[i].is_negative() || right[i].is_negative() {
            return Err(Error::Input("split columns must be nonnegative".into()));
        }
        if left[i].clone() + right[i].clone() != h[(i, j)] {
            return Err(Error::Input(format!("split does not sum to column {j} in row {i}")));
        }
    }
    let mut out = h.clone();
    out.set_col(j, left);
    let out = out.insert_col(j + 1, right);
    if is_histogram(h, Mode::Rational) {
        assert!(is_histogram(&out, Mode::Rational), "smear of a histogram must be a histogram");
    }
    Ok(out)
}

/// Column `p` of a family, stacked into one vector.
pub fn stacked_column<T: Scalar>(family: &[Matrix<T>], p: usize) -> Vec<T> {
    family.iter().flat_map(|h| h.col(p)).collect()
}

/// Checks that `family` is a `(D, M)`-multihistogram: each member is a
/// histogram, and the column word matches `C_0* C_D0 C_0* ... C_Dn-1 C_0*`.
/// On success returns the positions assigned to the target columns.
pub fn check_multihistogram<T: Scalar>(
    family: &[Matrix<T>],
    d: &Matrix<T>,
    gens: &[Matrix<T>],
    mode: Mode,
) -> std::result::Result<Vec<usize>, String> {
    if family.len() != gens.len() {
        return Err(format!("{} histograms for {} generators", family.len(), gens.len()));
    }
    let c = family.first().map_or(0, |h| h.cols());
    for (j, (h, m)) in family.iter().zip(gens).enumerate() {
        if h.cols() != c {
            return Err(format!("histogram {j} has {} columns, expected {c}", h.cols()));
        }
        if h.rows() != m.cols() {
            return Err(format!("histogram {j} has {} rows, generator has {} columns", h.rows(), m.cols()));
        }
        if m.rows() != d.rows() {
            return Err(format!("generator {j} has {} rows, target has {}", m.rows(), d.rows()));
        }
        check_histogram(h, mode).map_err(|v| format!("histogram {j}: {v}"))?;
    }
    // value of each word letter under [M_1 | ... | M_k]
    let values: Vec<Vec<T>> = (0..c)
        .map(|p| {
            let mut acc = vec![T::zero(); d.rows()];
            for (h, m) in family.iter().zip(gens) {
                let col = h.col(p);
                let v = m.mul_vec(&col).expect("shapes checked");
                for (a, b) in acc.iter_mut().zip(v) {
                    *a = a.clone() + b;
                }
            }
            acc
        })
        .collect();
    let n = d.cols();
    let targets: Vec<Vec<T>> = (0..n).map(|i| d.col(i)).collect();
    let is_zero = |v: &Vec<T>| v.iter().all(Zero::is_zero);
    // ok[i][p]: target columns i.. can be matched within letters p..
    let mut ok = vec![vec![false; c + 1]; n + 1];
    ok[n][c] = true;
    for p in (0..c).rev() {
        ok[n][p] = ok[n][p + 1] && is_zero(&values[p]);
    }
    for i in (0..n).rev() {
        for p in (0..c).rev() {
            let take = values[p] == targets[i] && ok[i + 1][p + 1];
            let skip = is_zero(&values[p]) && ok[i][p + 1];
            ok[i][p] = take || skip;
        }
    }
    if !ok[0][0] {
        return Err("column word is not in the target language".into());
    }
    let mut assignment = Vec::with_capacity(n);
    let (mut i, mut p) = (0, 0);
    while i < n {
        if values[p] == targets[i] && ok[i + 1][p + 1] {
            assignment.push(p);
            i += 1;
        }
        p += 1;
    }
    Ok(assignment)
}

pub fn is_multihistogram<T: Scalar>(family: &[Matrix<T>], d: &Matrix<T>, gens: &[Matrix<T>], mode: Mode) -> bool {
    check_multihistogram(family, d, gens, mode).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rat, RatMat};

    fn worked_h() -> RatMat {
        RatMat::from_i64(&[&[1, 1, 0, 0, 0], &[0, 0, 2, 0, 0], &[0, 0, 0, 1, 1]])
    }

    #[test]
    fn validation() {
        assert_eq!(check_histogram(&worked_h(), Mode::Integer), Ok(Rat::from_i64(2)));
        assert_eq!(
            check_histogram(&RatMat::from_i64(&[&[1, 0], &[1, 0]]), Mode::Integer),
            Err(Violation::Dominance { row: 0, prefix: 0 })
        );
        assert_eq!(check_histogram(&RatMat::from_i64(&[&[1, 0], &[0, 1]]), Mode::Integer), Ok(Rat::from_i64(1)));
        let half = RatMat::from_rows(vec![vec![Rat::new(1.into(), 2.into())]], 1).unwrap();
        assert!(is_histogram(&half, Mode::Rational));
        assert!(!is_histogram(&half, Mode::Integer));
    }

    #[test]
    fn profiles() {
        let id = RatMat::from_i64(&[&[1, 0], &[0, 1]]);
        // prof(0,0) = H(0,0) - H(1,0) - H(1,1); prof(0,1) = 1 - 1
        assert_eq!(profile(&id), RatMat::from_i64(&[&[0, 0]]));
        assert_eq!(profile(&RatMat::from_i64(&[&[1, 2, 3]])).shape(), (0, 3));
        let p = profile(&worked_h());
        assert!(p.col(4).iter().all(Zero::is_zero));
        for m in [worked_h(), id, RatMat::from_i64(&[&[1, 0], &[1, 0]])] {
            assert_eq!(is_histogram_via_profile(&m, Mode::Integer), is_histogram(&m, Mode::Integer));
        }
    }

    #[test]
    fn worked_decomposition() {
        let parts = decompose(&worked_h()).unwrap();
        assert_eq!(parts, vec![SimpleHistogram::new(vec![0, 2, 3], 5).unwrap(), SimpleHistogram::new(vec![1, 2, 4], 5).unwrap()]);
        let s = SimpleHistogram::new(vec![1, 3], 4).unwrap();
        let tripled = s.to_matrix::<Rat>().scale(&Rat::from_i64(3));
        assert_eq!(decompose(&tripled).unwrap(), vec![s.clone(), s.clone(), s]);
        assert!(decompose(&RatMat::zeros(2, 3)).unwrap().is_empty());
    }

    #[test]
    fn simple_products() {
        let m = RatMat::from_i64(&[&[1, 2], &[3, 0], &[0, 2]]);
        let s = SimpleHistogram::new(vec![0, 2], 4).unwrap();
        let n = mul_simple(&m, &s).unwrap();
        assert_eq!(n, RatMat::from_i64(&[&[1, 0, 2, 0], &[3, 0, 0, 0], &[0, 0, 2, 0]]));
        assert_eq!(n, m.mul(&s.to_matrix()).unwrap());
        assert_eq!(recover_simple(&n, &m), Some(s));
        assert_eq!(recover_simple(&m, &m), Some(SimpleHistogram::identity(2)));
        assert_eq!(recover_simple(&RatMat::from_i64(&[&[0, 0]]), &RatMat::from_i64(&[&[1]])), None);
        let five = RatMat::from_i64(&[&[5]]);
        assert_eq!(mul_simple(&five, &SimpleHistogram::new(vec![1], 2).unwrap()).unwrap(), RatMat::from_i64(&[&[0, 5]]));
    }

    #[test]
    fn worked_smear() {
        let h = RatMat::from_i64(&[&[3, 0, 0, 1, 0, 0, 0], &[0, 1, 0, 0, 3, 0, 0], &[0, 0, 0, 1, 0, 1, 2]]);
        let l: Vec<Rat> = [0, 2, 0].into_iter().map(Rat::from_i64).collect();
        let r: Vec<Rat> = [0, 1, 0].into_iter().map(Rat::from_i64).collect();
        let out = smear(&h, 4, &l, &r).unwrap();
        assert_eq!(
            out,
            RatMat::from_i64(&[&[3, 0, 0, 1, 0, 0, 0, 0], &[0, 1, 0, 0, 2, 1, 0, 0], &[0, 0, 0, 1, 0, 0, 1, 2]])
        );
        assert!(smear(&h, 4, &r, &r).is_err());
    }

    #[test]
    fn multihistograms() {
        let d = RatMat::from_i64(&[&[1, 2], &[3, 0]]);
        let fam = vec![RatMat::from_i64(&[&[1, 0], &[0, 1]])];
        assert_eq!(check_multihistogram(&fam, &d, &[d.clone()], Mode::Integer), Ok(vec![0, 1]));
        let empty = RatMat::zeros(2, 0);
        let zero_fam = vec![RatMat::zeros(2, 3)];
        assert!(is_multihistogram(&zero_fam, &empty, &[d.clone()], Mode::Integer));
        let bad = vec![RatMat::from_i64(&[&[1, 0], &[1, 0]])];
        assert!(!is_multihistogram(&bad, &d, &[d.clone()], Mode::Integer));
    }
}
