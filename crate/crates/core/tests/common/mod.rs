#![allow(dead_code)]

use odlin::datavec::MatrixInstance;
use odlin::histogram::SimpleHistogram;
use odlin::linpn::Vas;
use odlin::semieq::SemiEq;
use odlin::{LinSys, Rat, RatMat};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

pub fn to_i64(m: &RatMat) -> Vec<Vec<i64>> {
    m.to_rows().iter().map(|r| r.iter().map(|v| v.to_integer().try_into().unwrap()).collect()).collect()
}

/// Rows written as `[[a,b],[c,d]]`, the way matrices are typeset.
pub fn show(m: &RatMat) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max: i64) -> RatMat {
    let data: Vec<Vec<Rat>> = (0..rows).map(|_| (0..cols).map(|_| rat(rng.gen_range(0..=max))).collect()).collect();
    RatMat::from_rows(data, cols).unwrap()
}

pub fn random_simple(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> SimpleHistogram {
    let mut map = sample(rng, cols, rows).into_vec();
    map.sort_unstable();
    SimpleHistogram::new(map, cols).unwrap()
}

/// A sum of `degree` random simple histograms.
pub fn random_histogram(rng: &mut ChaCha8Rng, rows: usize, cols: usize, degree: usize) -> RatMat {
    let mut h = RatMat::zeros(rows, cols);
    for _ in 0..degree {
        h = h.add(&random_simple(rng, rows, cols).to_matrix()).unwrap();
    }
    h
}

/// Histogram test written from the definition: equal row sums and, for
/// every row, the prefix of the next row one column longer never exceeds
/// it.
pub fn reference_is_histogram(h: &RatMat) -> bool {
    let m = h.to_rows();
    if m.iter().flatten().any(|v| !v.is_integer() || *v < rat(0)) {
        return false;
    }
    let c = h.cols();
    let total = |row: &Vec<Rat>| row.iter().fold(rat(0), |a, b| a + b);
    if m.windows(2).any(|w| total(&w[0]) != total(&w[1])) {
        return false;
    }
    let prefix = |row: &Vec<Rat>, len: usize| row[..len.min(c)].iter().fold(rat(0), |a, b| a + b);
    m.windows(2).all(|w| (0..=c).all(|l| prefix(&w[1], l + 1) <= prefix(&w[0], l)))
}

fn random_generator(rng: &mut ChaCha8Rng, d: usize, width: usize, bound: i64) -> RatMat {
    let cols: Vec<Vec<Rat>> = (0..width)
        .map(|_| loop {
            let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
            if c.iter().any(|&v| v != 0) {
                break c.into_iter().map(rat).collect();
            }
        })
        .collect();
    RatMat::from_columns(d, &cols).unwrap()
}

/// Places each generator at random slots with a coefficient from
/// `coeffs` and drops the zero columns of the sum.
fn planted_target(rng: &mut ChaCha8Rng, d: usize, gens: &[RatMat], coeffs: &[i64], copies: usize) -> RatMat {
    let slots = gens.iter().map(RatMat::cols).max().unwrap() + 2;
    let mut sum = RatMat::zeros(d, slots);
    for _ in 0..copies {
        let g = &gens[rng.gen_range(0..gens.len())];
        let mut placement = sample(rng, slots, g.cols()).into_vec();
        placement.sort_unstable();
        let placed = odlin::datavec::place_columns(g, &placement, slots).unwrap();
        let c = coeffs[rng.gen_range(0..coeffs.len())];
        sum = sum.add(&placed.scale(&rat(c))).unwrap();
    }
    sum.drop_zero_columns()
}

/// Instances mixing random targets with targets planted from `N` and `Z`
/// combinations, so that every verdict occurs.
pub fn random_instance(rng: &mut ChaCha8Rng, d_max: usize, k_max: usize, supp_max: usize, bound: i64) -> MatrixInstance {
    let d = rng.gen_range(1..=d_max);
    let k = rng.gen_range(1..=k_max);
    let gens: Vec<RatMat> = (0..k)
        .map(|_| {
            let width = rng.gen_range(1..=supp_max);
            random_generator(rng, d, width, bound)
        })
        .collect();
    let copies = rng.gen_range(1..=3);
    let width = rng.gen_range(1..=supp_max);
    let target = match rng.gen_range(0..4) {
        0 => planted_target(rng, d, &gens, &[1], copies),
        1 => planted_target(rng, d, &gens, &[1, -1, 2], copies),
        2 => RatMat::zeros(d, 0),
        _ => random_generator(rng, d, width, bound),
    };
    MatrixInstance::new(target, gens).unwrap()
}

pub fn random_semieq(rng: &mut ChaCha8Rng) -> SemiEq<Rat> {
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=4);
    let a: Vec<Vec<Rat>> = (0..m).map(|_| (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect();
    let a = RatMat::from_rows(a, n).unwrap();
    let b = if rng.gen_bool(0.5) {
        let x: Vec<Rat> = (0..n)
            .map(|_| if rng.gen_bool(0.4) { rat(0) } else { Rat::new(rng.gen_range(1..=4).into(), rng.gen_range(1..=3).into()) })
            .collect();
        a.mul_vec(&x).unwrap()
    } else {
        (0..m).map(|_| rat(rng.gen_range(-2..=2))).collect()
    };
    let implications: Vec<(usize, usize)> =
        (0..rng.gen_range(0..=4)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    SemiEq::new(LinSys::new(a, b).unwrap(), implications).unwrap()
}

pub fn vas(d: usize, actions: &[&[i64]], init: &[i64]) -> Vas {
    Vas::new(d, actions.iter().map(|a| a.to_vec()).collect(), init.to_vec(), vec![0; d]).unwrap()
}

/// Small VAS whose zero configuration is reachable from `init`.
pub fn reachable_vas() -> Vec<Vas> {
    vec![
        vas(1, &[&[-1]], &[1]),
        vas(1, &[&[-1]], &[2]),
        vas(1, &[&[-2]], &[2]),
        vas(1, &[&[1], &[-2]], &[1]),
        vas(2, &[&[-1, 1], &[0, -1]], &[1, 0]),
        vas(2, &[&[-1, 2], &[0, -1]], &[1, 0]),
        vas(2, &[&[-1, -1]], &[1, 1]),
        vas(2, &[&[1, -1], &[-2, 0]], &[0, 2]),
        vas(2, &[&[-1, 0], &[0, -1], &[1, 1]], &[0, 0]),
        vas(3, &[&[-1, 1, 0], &[0, -1, 1], &[0, 0, -1]], &[1, 0, 0]),
        vas(2, &[&[-2, 1], &[0, -1]], &[2, 0]),
        vas(1, &[&[2], &[-1]], &[1]),
    ]
}

/// Small VAS from which zero is unreachable and whose reachable set is
/// finite, so breadth-first search closes.
pub fn unreachable_vas() -> Vec<Vas> {
    vec![
        vas(1, &[&[-2]], &[1]),
        vas(1, &[&[-2]], &[3]),
        vas(2, &[&[-1, 1]], &[1, 0]),
        vas(2, &[&[-1, -1]], &[2, 1]),
        vas(2, &[&[-1, 1], &[0, -2]], &[1, 0]),
        vas(2, &[&[1, -1], &[-1, -1]], &[0, 1]),
        vas(3, &[&[-1, 1, 0], &[0, -1, 1]], &[1, 0, 0]),
        vas(3, &[&[-1, -1, 0], &[0, 0, -1]], &[1, 0, 1]),
        vas(2, &[&[-2, 1], &[0, -2]], &[2, 0]),
        vas(1, &[&[-2]], &[5]),
        vas(2, &[&[-1, 2], &[0, -2]], &[1, 1]),
        vas(3, &[&[-1, 0, 1], &[0, -1, -1]], &[1, 0, 0]),
    ]
}

pub fn instance(target: &[&[i64]], gens: &[&[&[i64]]]) -> MatrixInstance {
    MatrixInstance::from_i64(target, gens)
}

/// `(D, M)` pairs for the histogram-to-VAS round trip: whether a
/// multihistogram exists, then the instance.
pub fn gadget_pairs() -> Vec<(bool, MatrixInstance)> {
    vec![
        (true, instance(&[&[1]], &[&[&[1]]])),
        (true, instance(&[&[1, 1]], &[&[&[1]]])),
        (true, instance(&[&[2]], &[&[&[2]]])),
        (true, instance(&[&[1, -1]], &[&[&[1, -1]]])),
        (true, instance(&[&[1, 2]], &[&[&[1, 2]]])),
        (true, instance(&[&[2, 4]], &[&[&[1, 2]]])),
        (true, instance(&[&[1, 3, 2]], &[&[&[1, 2]]])),
        (true, instance(&[&[1, 0], &[0, 1]], &[&[&[1, 0], &[0, 1]]])),
        (true, instance(&[&[2]], &[&[&[1]], &[&[1, 1]]])),
        (false, instance(&[&[3]], &[&[&[1, 2]]])),
        (false, instance(&[&[2, 1]], &[&[&[1, 2]]])),
        (false, instance(&[&[1]], &[&[&[2]]])),
        (false, instance(&[&[1], &[1]], &[&[&[1, 0], &[0, 1]]])),
        (false, instance(&[&[1, 1]], &[&[&[2]], &[&[2, 1]]])),
    ]
}
