use std::ops::ControlFlow;

use super::PairwiseDistances;

/// Suffix sizes from which exact suffix optima are worth computing.
pub const DEFAULT_SUFFIX_START: usize = 11;
/// Prefix lengths at which a partial vector is probed for satisfiability.
pub const DEFAULT_PREFIX_DEPTHS: [usize; 2] = [10, 15];

/// `get(k)`: a lower bound on the total distance of the last `k` inputs to
/// any common center.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuffixBounds {
    values: Vec<Option<u32>>,
}

impl SuffixBounds {
    pub fn set(&mut self, size: usize, total: u32) {
        if self.values.len() <= size {
            self.values.resize(size + 1, None);
        }
        self.values[size] = Some(total);
    }

    pub fn get(&self, size: usize) -> Option<u32> {
        self.values.get(size).copied().flatten()
    }

    /// `(size, bound)` pairs in increasing size.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.values.iter().enumerate().filter_map(|(k, v)| v.map(|v| (k, v)))
    }
}

/// A satisfiability probe on vector prefixes: after the first `depth`
/// components are fixed (for each listed depth), `check` may reject them.
pub struct PrefixCheck<'a> {
    pub depths: Vec<usize>,
    pub check: &'a mut dyn FnMut(&[u32]) -> bool,
}

/// Sum of absolute differences over all pairs of components.
pub fn score(d: &[u32]) -> u64 {
    let mut v: Vec<i64> = d.iter().map(|&x| x as i64).collect();
    v.sort_unstable();
    let m = v.len() as i64;
    v.iter().enumerate().map(|(k, &x)| (2 * k as i64 - (m - 1)) * x).sum::<i64>() as u64
}

struct Walk<'a, 'b> {
    dist: &'a PairwiseDistances,
    suffix: Option<&'a SuffixBounds>,
    prefix: Option<PrefixCheck<'b>>,
    /// `far[k]`: largest distance between two inputs at positions >= k.
    far: Vec<u32>,
    d: Vec<u32>,
}

impl Walk<'_, '_> {
    fn new<'a, 'b>(dist: &'a PairwiseDistances, suffix: Option<&'a SuffixBounds>, prefix: Option<PrefixCheck<'b>>) -> Walk<'a, 'b> {
        let m = dist.m();
        let mut far = vec![0u32; m + 1];
        for k in (0..m).rev() {
            far[k] = far[k + 1].max((k + 1..m).map(|j| dist.get(k, j)).max().unwrap_or(0));
        }
        Walk { dist, suffix, prefix, far, d: Vec::with_capacity(m) }
    }

    /// Least value for position `j` given the components fixed so far.
    fn least(&self, j: usize) -> u32 {
        self.d.iter().enumerate().map(|(i, &di)| self.dist.get(i, j).saturating_sub(di)).max().unwrap_or(0)
    }

    fn rec(&mut self, remaining: u32, visit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>) -> ControlFlow<()> {
        let m = self.dist.m();
        let k = self.d.len();
        if k == m {
            return if remaining == 0 { visit(&self.d) } else { ControlFlow::Continue(()) };
        }
        let lo = self.least(k);
        if k + 1 == m {
            if remaining < lo {
                return ControlFlow::Continue(());
            }
            self.d.push(remaining);
            let r = self.rec(0, visit);
            self.d.pop();
            return r;
        }
        for v in lo..=remaining {
            self.d.push(v);
            let rest = remaining - v;
            if self.feasible_rest(rest) && self.prefix_ok() {
                self.rec(rest, visit)?;
            }
            self.d.pop();
        }
        ControlFlow::Continue(())
    }

    fn feasible_rest(&self, rest: u32) -> bool {
        let m = self.dist.m();
        let k = self.d.len();
        let need: u64 = (k..m).map(|j| self.least(j) as u64).sum();
        if need > rest as u64 || self.far[k] > rest {
            return false;
        }
        match self.suffix.and_then(|s| s.get(m - k)) {
            Some(bound) => rest >= bound,
            None => true,
        }
    }

    fn prefix_ok(&mut self) -> bool {
        let k = self.d.len();
        let m = self.dist.m();
        match self.prefix.as_mut() {
            Some(p) if k < m && p.depths.contains(&k) => (p.check)(&self.d),
            _ => true,
        }
    }
}

/// Every vector with components summing to `total` and `d_i + d_j >=
/// D[i][j]` for all pairs, ordered by score then lexicographically.
/// Suffix bounds and the prefix probe only drop vectors that cannot be
/// realized by any center.
pub fn enumerate_vectors(
    total: u32,
    dist: &PairwiseDistances,
    suffix: Option<&SuffixBounds>,
    prefix: Option<PrefixCheck<'_>>,
) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    if dist.m() == 0 {
        return out;
    }
    let mut walk = Walk::new(dist, suffix, prefix);
    let _ = walk.rec(total, &mut |d| {
        out.push(d.to_vec());
        ControlFlow::Continue(())
    });
    out.sort_by_cached_key(|d| (score(d), d.clone()));
    out
}

/// Whether any vector sums to `total` under the pairwise constraints.
pub fn vector_exists(total: u32, dist: &PairwiseDistances) -> bool {
    if dist.m() == 0 {
        return false;
    }
    let mut walk = Walk::new(dist, None, None);
    walk.rec(total, &mut |_| ControlFlow::Break(())).is_break()
}

/// The least total admitting a vector. No center can do better, since the
/// distances to a center satisfy every pairwise constraint.
pub fn total_lower_bound(dist: &PairwiseDistances) -> u32 {
    let start = (0..dist.m()).flat_map(|i| (0..dist.m()).map(move |j| (i, j))).map(|(i, j)| dist.get(i, j)).max().unwrap_or(0);
    (start..).find(|&s| vector_exists(s, dist)).unwrap()
}
