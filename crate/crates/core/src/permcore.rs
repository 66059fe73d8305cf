//! Permutations, occurrence counting for `12...j` and `132`, and the
//! exhaustive enumeration oracles.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_132_avoiding`] and [`brute_table`].
pub const AVOIDER_BOUND: usize = 14;

/// Largest `n` accepted by [`brute_one132_table`], which scans all of `S_n`.
pub const FULL_SCAN_BOUND: usize = 10;

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let idx = (v as usize).wrapping_sub(1);
            if idx >= n {
                return Err(Error::InvalidPermutation {
                    len: n,
                    reason: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidPermutation {
                    len: n,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Permutation(values))
    }

    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// Relabels any sequence of distinct integers by rank.
    pub fn standardize(values: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut out = vec![0; values.len()];
        for (rank, i) in order.into_iter().enumerate() {
            out[i] = rank as u32 + 1;
        }
        Permutation(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// Splits `pi = (left, n, right)` around the maximum, standardizing both
    /// parts. `None` for the empty permutation.
    pub fn split_at_max(&self) -> Option<(Permutation, Permutation)> {
        let pos = self.0.iter().position_max()?;
        Some((
            Permutation::standardize(&self.0[..pos]),
            Permutation::standardize(&self.0[pos + 1..]),
        ))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Occurrence counts `eta_0..=eta_k` of the increasing patterns `12...j` in
/// one permutation; `eta_0` is always 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceProfile {
    counts: Vec<BigUint>,
}

impl OccurrenceProfile {
    /// Runs the ending-position dynamic program once for all `j <= k`.
    pub fn of(pi: &Permutation, k: usize) -> Self {
        let v = pi.values();
        let n = v.len();
        let width = k.min(n);
        // ends[p][len - 1]: increasing subsequences of length `len` ending at p
        let mut ends: Vec<Vec<BigUint>> = Vec::with_capacity(n);
        let mut counts = vec![BigUint::zero(); k + 1];
        counts[0] = BigUint::one();
        for p in 0..n {
            let mut row = vec![BigUint::zero(); width];
            if width > 0 {
                row[0] = BigUint::one();
            }
            for q in 0..p {
                if v[q] < v[p] {
                    for len in 1..width {
                        if !ends[q][len - 1].is_zero() {
                            row[len] += &ends[q][len - 1];
                        }
                    }
                }
            }
            for (len, c) in row.iter().enumerate() {
                counts[len + 1] += c;
            }
            ends.push(row);
        }
        OccurrenceProfile { counts }
    }

    pub fn k(&self) -> usize {
        self.counts.len() - 1
    }

    /// `eta_j`; zero beyond `k`.
    pub fn eta(&self, j: usize) -> BigUint {
        self.counts.get(j).cloned().unwrap_or_default()
    }

    /// `eta_1..=eta_k`.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts[1..]
    }
}

/// Number of occurrences of `12...j` in `pi`; 1 when `j = 0`.
pub fn count_occurrences(pi: &Permutation, j: usize) -> BigUint {
    OccurrenceProfile::of(pi, j).eta(j)
}

pub fn avoids_132(pi: &Permutation) -> bool {
    let v = pi.values();
    // for each middle position, the smallest value to its left is the best
    // candidate for the '1'
    let mut min_before = u32::MAX;
    for j in 0..v.len() {
        if min_before < v[j] && v[j + 1..].iter().any(|&l| min_before < l && l < v[j]) {
            return false;
        }
        min_before = min_before.min(v[j]);
    }
    true
}

fn count_132_capped(v: &[u32], cap: u128) -> u128 {
    let mut total = 0u128;
    for j in 1..v.len() {
        for l in j + 1..v.len() {
            if v[l] < v[j] {
                total += v[..j].iter().filter(|&&i| i < v[l]).count() as u128;
                if total > cap {
                    return total;
                }
            }
        }
    }
    total
}

/// Number of index triples `i < j < l` with `pi_i < pi_l < pi_j`.
pub fn count_132_occurrences(pi: &Permutation) -> BigUint {
    BigUint::from(count_132_capped(pi.values(), u128::MAX))
}

#[derive(Debug)]
struct Block {
    len: usize,
    count: usize,
    data: Vec<u8>,
}

impl Block {
    fn get(&self, idx: usize) -> &[u8] {
        &self.data[idx * self.len..(idx + 1) * self.len]
    }
}

/// Flat lists of all 132-avoiders of each length `0..=max`, in
/// enumeration order.
fn avoider_blocks(max: usize) -> Vec<Block> {
    let mut blocks: Vec<Block> = vec![Block {
        len: 0,
        count: 1,
        data: Vec::new(),
    }];
    for m in 1..=max {
        let mut data = Vec::new();
        let mut count = 0;
        for l in 1..=m {
            let (left, right) = (&blocks[l - 1], &blocks[m - l]);
            let shift = (m - l) as u8;
            for a in 0..left.count {
                for b in 0..right.count {
                    data.extend(left.get(a).iter().map(|&x| x + shift));
                    data.push(m as u8);
                    data.extend_from_slice(right.get(b));
                    count += 1;
                }
            }
        }
        blocks.push(Block {
            len: m,
            count,
            data,
        });
    }
    blocks
}

/// Lazily yields the 132-avoiders of one length.
///
/// Each is `(left + (n - l), n, right)` with the maximum at position `l`,
/// `left` and `right` avoiders of lengths `l - 1` and `n - l`. Order: `l`
/// ascending, then `left`, then `right`.
#[derive(Debug)]
pub struct Avoiders {
    n: usize,
    blocks: Arc<Vec<Block>>,
    l: usize,
    a: usize,
    b: usize,
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.n == 0 {
            if self.l == 0 {
                self.l = 1;
                return Some(Permutation::empty());
            }
            return None;
        }
        while self.l <= self.n {
            let left = &self.blocks[self.l - 1];
            let right = &self.blocks[self.n - self.l];
            if self.a >= left.count {
                self.l += 1;
                self.a = 0;
                self.b = 0;
                continue;
            }
            let shift = (self.n - self.l) as u32;
            let mut values = Vec::with_capacity(self.n);
            values.extend(left.get(self.a).iter().map(|&x| x as u32 + shift));
            values.push(self.n as u32);
            values.extend(right.get(self.b).iter().map(|&x| x as u32));
            self.b += 1;
            if self.b >= right.count {
                self.b = 0;
                self.a += 1;
            }
            return Some(Permutation(values));
        }
        None
    }
}

/// All 132-avoiding permutations of length `n`, each exactly once.
pub fn enumerate_132_avoiding(n: usize) -> Result<Avoiders> {
    if n > AVOIDER_BOUND {
        return Err(Error::Capacity {
            what: "132-avoider enumeration",
            n,
            bound: AVOIDER_BOUND,
        });
    }
    Ok(Avoiders {
        n,
        blocks: Arc::new(avoider_blocks(n.saturating_sub(1))),
        l: if n == 0 { 0 } else { 1 },
        a: 0,
        b: 0,
    })
}

fn tally<I: IntoIterator<Item = Permutation>>(perms: I, k: usize) -> BTreeMap<u64, BigUint> {
    let mut table: BTreeMap<u64, BigUint> = BTreeMap::new();
    for pi in perms {
        let r = count_occurrences(&pi, k)
            .to_u64()
            .expect("occurrence count within enumeration bound fits u64");
        *table.entry(r).or_default() += 1u32;
    }
    table
}

/// `r -> f_n^r(k)` by enumeration; only positive counts are present.
pub fn brute_table(n: usize, k: usize) -> Result<BTreeMap<u64, BigUint>> {
    Ok(tally(enumerate_132_avoiding(n)?, k))
}

/// `r -> phi_n^r(k)`: permutations of length `n` with exactly one 132
/// occurrence, by the number of `12...k` occurrences. Scans all of `S_n`.
pub fn brute_one132_table(n: usize, k: usize) -> Result<BTreeMap<u64, BigUint>> {
    if n > FULL_SCAN_BOUND {
        return Err(Error::Capacity {
            what: "full permutation scan",
            n,
            bound: FULL_SCAN_BOUND,
        });
    }
    let one132 = (1..=n as u32)
        .permutations(n)
        .filter(|v| count_132_capped(v, 1) == 1)
        .map(Permutation);
    Ok(tally(one132, k))
}
