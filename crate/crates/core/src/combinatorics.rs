//! Small enumeration helpers.

/// All strictly increasing maps `{0..k} -> {0..n}` in lexicographic order.
pub fn increasing_maps(k: usize, n: usize) -> IncreasingMaps {
    IncreasingMaps { cur: if k <= n { Some((0..k).collect()) } else { None }, n }
}

pub struct IncreasingMaps {
    cur: Option<Vec<usize>>,
    n: usize,
}

impl Iterator for IncreasingMaps {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (k - i) {
                next[i] += 1;
                for l in i + 1..k {
                    next[l] = next[l - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Nondecreasing maps `{0..k} -> {0..n}` in lexicographic order.
pub fn nondecreasing_maps(k: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    increasing_maps(k, n + k - 1)
        .map(|m| m.iter().enumerate().map(|(i, v)| v - i).collect())
        .collect()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}
