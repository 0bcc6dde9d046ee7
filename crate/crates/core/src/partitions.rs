//! Partitions, bilateral partitions and Pieri sets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Trailing zeros are stripped on construction, so `(2,1,0)` and `(2,1)` are
/// the same value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition, rejecting increasing input.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("parts {parts:?} are not weakly decreasing"));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    /// The one-row partition `(n)`, empty for `n = 0`.
    pub fn row(n: u32) -> Self {
        Partition::new(vec![n]).unwrap()
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Pads with zeros to exactly `r` entries.
    pub fn pad(&self, r: usize) -> Result<Vec<u32>> {
        if r < self.length() {
            return domain(format!("cannot pad {self} to length {r}"));
        }
        let mut v = self.0.clone();
        v.resize(r, 0);
        Ok(v)
    }

    /// Componentwise containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.length() <= other.length() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All partitions of `n`, in decreasing lexicographic order.
    pub fn all_of_weight(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of weight at most `n` with at most `max_len` parts.
    pub fn all_up_to(n: u32, max_len: usize) -> Vec<Partition> {
        (0..=n)
            .flat_map(Partition::all_of_weight)
            .filter(|p| p.length() <= max_len)
            .collect()
    }

    /// All partitions contained in `self`.
    pub fn subpartitions(&self) -> Vec<Partition> {
        fn rec(outer: &[u32], i: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if i == outer.len() {
                out.push(Partition::new(cur.clone()).unwrap());
                return;
            }
            for p in 0..=outer[i].min(max) {
                cur.push(p);
                rec(outer, i + 1, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&self.0, 0, u32::MAX, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Parses a bracketed, comma separated integer list such as `[2,1]` or `[]`.
/// The brackets are optional.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let inner = match (t.strip_prefix('['), t.ends_with(']')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => t,
        _ => {
            return Err(Error::Parse { pos: 0, msg: format!("unbalanced brackets in {s:?}") });
        }
    };
    let mut out = Vec::new();
    let mut pos = t.len() - inner.len();
    for item in inner.split(',') {
        let trimmed = item.trim();
        if !trimmed.is_empty() {
            let v = trimmed.parse::<i64>().map_err(|e| Error::Parse {
                pos,
                msg: format!("{trimmed:?}: {e}"),
            })?;
            out.push(v);
        }
        pos += item.len() + 1;
    }
    Ok(out)
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_int_list(s)?;
        let parts = v
            .into_iter()
            .map(|p| u32::try_from(p).map_err(|_| Error::Domain(format!("negative part in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// A weakly decreasing integer sequence of a fixed length `r`.
///
/// The length is part of the value: `(0)` labels `b_0` in `∧¹V` while `(0,0)`
/// labels `b_1∧b_0` in `∧²V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BilateralPartition(Vec<i64>);

impl BilateralPartition {
    pub fn new(parts: impl Into<Vec<i64>>) -> Result<Self> {
        let parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("parts {parts:?} are not weakly decreasing"));
        }
        Ok(BilateralPartition(parts))
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The smallest part, or 0 for the empty sequence.
    pub fn last(&self) -> i64 {
        self.0.last().copied().unwrap_or(0)
    }

    /// Splits `μ` as `μ_k·(1^k) + κ` with `κ` an ordinary partition.
    pub fn split_shift(&self) -> (i64, Partition) {
        let c = self.last();
        let parts = self.0.iter().map(|&p| (p - c) as u32).collect::<Vec<_>>();
        (c, Partition::new(parts).unwrap())
    }

    /// The strictly decreasing indices `i_j = k − j + μ_j`.
    pub fn to_indices(&self) -> Vec<i64> {
        bilateral_to_indices(self)
    }
}

impl fmt::Display for BilateralPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for BilateralPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BilateralPartition::new(parse_int_list(s)?)
    }
}

/// Converts a strictly decreasing index tuple to its bilateral partition.
pub fn indices_to_bilateral(indices: &[i64]) -> Result<BilateralPartition> {
    if indices.windows(2).any(|w| w[0] <= w[1]) {
        return domain(format!("indices {indices:?} are not strictly decreasing"));
    }
    let k = indices.len() as i64;
    let parts = indices
        .iter()
        .enumerate()
        .map(|(j, &i)| i - (k - 1 - j as i64))
        .collect::<Vec<_>>();
    Ok(BilateralPartition(parts))
}

/// Inverse of [`indices_to_bilateral`].
pub fn bilateral_to_indices(mu: &BilateralPartition) -> Vec<i64> {
    let k = mu.len() as i64;
    mu.0.iter()
        .enumerate()
        .map(|(j, &p)| p + (k - 1 - j as i64))
        .collect()
}

/// Direction of a Pieri step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieriDirection {
    /// Add a horizontal strip of size `i`.
    Plus,
    /// Remove a horizontal strip of size `i`.
    Minus,
}

/// Partitions interlacing `λ` and differing from it by `i` boxes.
///
/// `Plus` gives `μ_1 ≥ λ_1 ≥ μ_2 ≥ … ≥ μ_r ≥ λ_r` with `|μ| = |λ| + i`;
/// `Minus` gives `λ_1 ≥ μ_1 ≥ λ_2 ≥ … ≥ λ_r ≥ μ_r` with `|μ| = |λ| − i`.
/// Both are limited to `r` rows.
pub fn pieri_set(
    lambda: &Partition,
    r: usize,
    i: u32,
    direction: PieriDirection,
) -> Result<BTreeSet<Partition>> {
    let lam = lambda.pad(r)?;
    let target = match direction {
        PieriDirection::Plus => lambda.weight() as i64 + i as i64,
        PieriDirection::Minus => lambda.weight() as i64 - i as i64,
    };
    let mut out = BTreeSet::new();
    if target < 0 {
        return Ok(out);
    }
    let bounds: Vec<(u32, u32)> = (0..r)
        .map(|j| match direction {
            PieriDirection::Plus => {
                let hi = if j == 0 { lam[0] + i } else { lam[j - 1] };
                (lam[j], hi)
            }
            PieriDirection::Minus => {
                let lo = if j + 1 < r { lam[j + 1] } else { 0 };
                (lo, lam[j])
            }
        })
        .collect();
    fn rec(
        bounds: &[(u32, u32)],
        j: usize,
        remaining: i64,
        cur: &mut Vec<u32>,
        out: &mut BTreeSet<Partition>,
    ) {
        if j == bounds.len() {
            if remaining == 0 {
                out.insert(Partition::new(cur.clone()).unwrap());
            }
            return;
        }
        let tail_max: i64 = bounds[j + 1..].iter().map(|b| b.1 as i64).sum();
        let tail_min: i64 = bounds[j + 1..].iter().map(|b| b.0 as i64).sum();
        let (lo, hi) = bounds[j];
        for p in lo..=hi {
            let rest = remaining - p as i64;
            if rest < tail_min || rest > tail_max {
                continue;
            }
            cur.push(p);
            rec(bounds, j + 1, rest, cur, out);
            cur.pop();
        }
    }
    rec(&bounds, 0, target, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Sign of the permutation sorting `v` into strictly decreasing order, or
/// `None` if `v` has a repeated entry. Sorts `v` in place.
pub fn sort_decreasing_with_sign(v: &mut [i64]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] <= v[j] {
            if v[j - 1] == v[j] {
                return None;
            }
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    Some(sign)
}

/// Permutations `π` of `0..n` with `allowed(i, π(i))` for every `i`,
/// together with their signs. Used to expand determinants with structural
/// zeros.
pub fn signed_permutations(n: usize, allowed: impl Fn(usize, usize) -> bool) -> Vec<(i32, Vec<usize>)> {
    fn rec(
        n: usize,
        i: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        allowed: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<(i32, Vec<usize>)>,
    ) {
        if i == n {
            let mut inv = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if cur[a] > cur[b] {
                        inv += 1;
                    }
                }
            }
            out.push((if inv % 2 == 0 { 1 } else { -1 }, cur.clone()));
            return;
        }
        for j in 0..n {
            if !used[j] && allowed(i, j) {
                used[j] = true;
                cur.push(j);
                rec(n, i + 1, used, cur, allowed, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 0, &mut vec![false; n], &mut Vec::new(), &allowed, &mut out);
    out
}
