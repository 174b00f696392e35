//! Brute-force partition enumeration and the difference/parity conditions
//! that the official series, the ghost series and the h-polynomials count.

use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::OracleError;
use crate::series::TruncatedSeries;
use crate::shelves::ShelfIndex;

/// A nonincreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&p| p == part).count() as u32
    }

    pub fn largest(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn smallest(&self) -> Option<u32> {
        self.0.last().copied()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, p) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

struct Frame {
    remaining: u32,
    candidate: u32,
}

/// Depth-first stream of the partitions of `n` with all parts in
/// `[min_part, max_part]`, in lexicographically descending order.
pub struct Partitions {
    parts: Vec<u32>,
    stack: Vec<Frame>,
    min_part: u32,
}

impl Partitions {
    pub fn bounded(n: u32, min_part: u32, max_part: u32) -> Self {
        Self {
            parts: Vec::new(),
            stack: vec![Frame {
                remaining: n,
                candidate: max_part.min(n),
            }],
            min_part: min_part.max(1),
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        loop {
            let top = self.stack.last_mut()?;
            if top.remaining == 0 {
                let out = Partition(self.parts.clone());
                self.stack.pop();
                self.parts.pop();
                return Some(out);
            }
            if top.candidate < self.min_part {
                self.stack.pop();
                self.parts.pop();
                continue;
            }
            let p = top.candidate;
            top.candidate -= 1;
            let remaining = top.remaining - p;
            self.parts.push(p);
            self.stack.push(Frame {
                remaining,
                candidate: p.min(remaining),
            });
        }
    }
}

/// Every partition of `n`, each exactly once.
pub fn enumerate(n: u32) -> Partitions {
    Partitions::bounded(n, 1, n)
}

/// A set of conditions on partitions.
///
/// Windows are taken only where they fit: the gap condition looks at
/// `π_t, π_{t+k-1}` and the parity condition at `π_t..=π_{t+k-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionProfile {
    pub k: u32,
    /// Every part is at least this.
    pub min_part: u32,
    /// The part `min_part` occurs at most this many times.
    pub min_part_cap: u32,
    /// Required residue mod 2 of the sum of every flat `(k-1)`-window.
    pub parity: u32,
    /// Optional bound on the largest part.
    pub max_part: Option<u32>,
    /// Optional constraint `m_p(π) ∈ allowed`.
    pub top_multiplicity: Option<(u32, Vec<u32>)>,
}

fn parity_of(v: i64) -> u32 {
    v.rem_euclid(2) as u32
}

impl ConditionProfile {
    /// Conditions counted by `B_{(k-1)J+i}`.
    pub fn official(k: u32, shelf: u32, i: u32) -> Self {
        let r = ShelfIndex::new(k, shelf, i).r();
        Self {
            k,
            min_part: shelf + 1,
            min_part_cap: k - i,
            parity: parity_of(r as i64 + k as i64),
            max_part: None,
            top_multiplicity: None,
        }
    }

    /// Conditions counted by `~B_{(k-1)J+i}`; `shelf = -1, i = k` gives `~B_1`.
    pub fn ghost(k: u32, shelf: i64, i: u32) -> Self {
        assert!(
            k >= 2 && (2..=k).contains(&i),
            "ghost index i must lie in 2..={k}"
        );
        assert!(shelf >= -1, "ghost shelf must be at least -1");
        let r = (k as i64 - 1) * shelf + i as i64;
        Self {
            k,
            min_part: (shelf + 1) as u32,
            min_part_cap: k - i,
            parity: parity_of(r + k as i64 + 1),
            max_part: None,
            top_multiplicity: None,
        }
    }

    /// Conditions counted by the coefficients of `{}^J_i h^{(j)}_l`.
    pub fn h(k: u32, start: u32, j: u32, l: u32, i: u32) -> Self {
        assert!(j > start, "h-conditions need j >= J + 1");
        assert!((1..=k).contains(&l) && (1..=k).contains(&i));
        let allowed = if l == 1 { vec![0] } else { vec![l - 2, l - 1] };
        Self {
            k,
            min_part: start + 1,
            min_part_cap: k - i,
            parity: parity_of((k as i64 - 1) * j as i64 + l as i64 - k as i64),
            max_part: Some(j),
            top_multiplicity: Some((j, allowed)),
        }
    }
}

/// Whether `π` meets every clause of `profile`.
pub fn satisfies(pi: &Partition, profile: &ConditionProfile) -> bool {
    let parts = pi.parts();
    let len = parts.len();
    let k = profile.k as usize;

    if let Some(s) = pi.smallest() {
        if s < profile.min_part {
            return false;
        }
    }
    if let (Some(max), Some(big)) = (profile.max_part, pi.largest()) {
        if big > max {
            return false;
        }
    }
    if pi.multiplicity(profile.min_part) > profile.min_part_cap {
        return false;
    }
    if let Some((part, allowed)) = &profile.top_multiplicity {
        if !allowed.contains(&pi.multiplicity(*part)) {
            return false;
        }
    }
    // π_t - π_{t+k-1} >= 2
    if (0..len.saturating_sub(k - 1)).any(|t| parts[t] - parts[t + k - 1] < 2) {
        return false;
    }
    // π_t - π_{t+k-2} <= 1 only if the window sum has the target parity
    let span = k - 2;
    (0..len.saturating_sub(span)).all(|t| {
        parts[t] - parts[t + span] > 1 || parts[t..=t + span].iter().sum::<u32>() % 2 == profile.parity
    })
}

/// Partitions of `n` meeting `profile`, generated with the part bounds pruned in.
pub fn witnesses(profile: &ConditionProfile, n: u32) -> impl Iterator<Item = Partition> + '_ {
    Partitions::bounded(n, profile.min_part, profile.max_part.unwrap_or(n))
        .filter(move |pi| satisfies(pi, profile))
}

pub fn count(profile: &ConditionProfile, n: u32) -> u64 {
    witnesses(profile, n).count() as u64
}

/// `b_{k,r}(n)`. At edge indices both decompositions are counted and
/// required to agree.
pub fn count_official(k: u32, r: u32, n: u32) -> Result<u64, OracleError> {
    let idx = ShelfIndex::official(k, r);
    let canonical = count(&ConditionProfile::official(k, idx.j, idx.i), n);
    if let Some(alt) = idx.edge_partner() {
        let alternate = count(&ConditionProfile::official(k, alt.j, alt.i), n);
        if alternate != canonical {
            return Err(OracleError::EdgeCountMismatch {
                r,
                n,
                canonical,
                alternate,
            });
        }
    }
    Ok(canonical)
}

/// Profile for `~b_{k,r}`, including the extension `r = 1`.
pub fn ghost_profile(k: u32, r: u32) -> ConditionProfile {
    match ShelfIndex::ghost(k, r) {
        Some(idx) => ConditionProfile::ghost(k, idx.j as i64, idx.i),
        None => ConditionProfile::ghost(k, -1, k),
    }
}

/// `~b_{k,r}(n)`.
pub fn count_ghost(k: u32, r: u32, n: u32) -> u64 {
    count(&ghost_profile(k, r), n)
}

/// Whether `{}^J_i h^{(j)}_l` vanishes identically by parity.
pub fn h_vanishes(k: u32, start: u32, j: u32, l: u32, i: u32) -> bool {
    if k % 2 == 1 {
        l % 2 != i % 2
    } else {
        (j - start + l) % 2 != i % 2
    }
}

/// `{}^J_i h^{(j)}_l(n)`.
pub fn count_h(k: u32, start: u32, j: u32, l: u32, i: u32, n: u32) -> u64 {
    if h_vanishes(k, start, j, l, i) {
        return 0;
    }
    count(&ConditionProfile::h(k, start, j, l, i), n)
}

/// Generating function `sum_{n <= n_max} count(n) q^n` as a series of order `n_max`.
pub fn count_series<F>(n_max: u32, mut f: F) -> TruncatedSeries
where
    F: FnMut(u32) -> u64,
{
    let coeffs = (0..=n_max).map(|n| BigInt::from(f(n))).collect();
    TruncatedSeries::from_coeffs(0, coeffs, n_max as i64)
}

pub fn official_count_series(k: u32, r: u32, n_max: u32) -> Result<TruncatedSeries, OracleError> {
    let counts = (0..=n_max)
        .map(|n| count_official(k, r, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(count_series(n_max, |n| counts[n as usize]))
}

pub fn ghost_count_series(k: u32, r: u32, n_max: u32) -> TruncatedSeries {
    let profile = ghost_profile(k, r);
    count_series(n_max, |n| count(&profile, n))
}

pub fn h_count_series(k: u32, start: u32, j: u32, l: u32, i: u32, n_max: u32) -> TruncatedSeries {
    count_series(n_max, |n| count_h(k, start, j, l, i, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// p(n) by Euler's pentagonal recurrence.
    fn partition_numbers(max: usize) -> Vec<u64> {
        let mut p = vec![0i64; max + 1];
        p[0] = 1;
        for n in 1..=max as i64 {
            let mut acc = 0;
            for m in 1.. {
                let g1 = m * (3 * m - 1) / 2;
                if g1 > n {
                    break;
                }
                let sign = if m % 2 == 1 { 1 } else { -1 };
                acc += sign * p[(n - g1) as usize];
                let g2 = m * (3 * m + 1) / 2;
                if g2 <= n {
                    acc += sign * p[(n - g2) as usize];
                }
            }
            p[n as usize] = acc;
        }
        p.into_iter().map(|v| v as u64).collect()
    }

    #[test]
    fn enumerate_small() {
        let zero: Vec<_> = enumerate(0).collect();
        assert_eq!(zero, vec![Partition(vec![])]);
        let four: Vec<Vec<u32>> = enumerate(4).map(|p| p.0).collect();
        assert_eq!(
            four,
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }

    #[test]
    fn enumerate_matches_partition_function() {
        let p = partition_numbers(40);
        for n in 0..=40u32 {
            assert_eq!(enumerate(n).count() as u64, p[n as usize], "p({n})");
        }
        assert_eq!(p[40], 37338);
    }

    #[test]
    fn pruned_generation_matches_filtered_enumeration() {
        for n in 0..=20 {
            for lo in 1..=4 {
                for hi in [2, 5, 20] {
                    let pruned: Vec<_> = Partitions::bounded(n, lo, hi).collect();
                    let filtered: Vec<_> = enumerate(n)
                        .filter(|pi| pi.parts().iter().all(|&p| p >= lo && p <= hi))
                        .collect();
                    assert_eq!(pruned, filtered, "n={n} lo={lo} hi={hi}");
                }
            }
        }
    }

    #[test]
    fn partition_accessors() {
        let pi = Partition::new(vec![1, 3, 3, 2]);
        assert_eq!(pi.parts(), &[3, 3, 2, 1]);
        assert_eq!(pi.len(), 4);
        assert_eq!(pi.sum(), 9);
        assert_eq!(pi.multiplicity(3), 2);
        assert_eq!(pi.to_string(), "(3,3,2,1)");
    }

    #[test]
    fn official_clause_examples() {
        let profile = ConditionProfile::official(3, 0, 3);
        assert!(satisfies(&Partition::new(vec![5]), &profile));
        assert!(!satisfies(&Partition::new(vec![3, 2]), &profile));
        assert_eq!(count_official(3, 3, 5).unwrap(), 1);
    }

    #[test]
    fn k2_parts_even_and_distinct() {
        let profile = ConditionProfile::official(2, 0, 2);
        assert!(satisfies(&Partition::new(vec![4, 2]), &profile));
        assert!(!satisfies(&Partition::new(vec![3, 1]), &profile));
        assert!(!satisfies(&Partition::new(vec![2, 2]), &profile));
        assert_eq!(count_official(2, 2, 6).unwrap(), 2);
    }

    #[test]
    fn empty_partition_passes_everything() {
        let empty = Partition::new(vec![]);
        for k in 2..=5 {
            for i in 1..=k {
                assert!(satisfies(&empty, &ConditionProfile::official(k, 2, i)));
                assert_eq!(count_official(k, i, 0).unwrap(), 1);
                if i >= 2 {
                    assert!(satisfies(&empty, &ConditionProfile::ghost(k, 1, i)));
                }
            }
            assert_eq!(count_ghost(k, 1, 0), 1);
            assert_eq!(count_h(k, 0, 1, 1, if k % 2 == 1 { 1 } else { 2 }, 0), 1);
        }
    }

    #[test]
    fn ghost_edge_equals_next_official() {
        for k in 2..=4 {
            for shelf in 0..=2u32 {
                let r_ghost = (k - 1) * shelf + k;
                let r_off = (k - 1) * (shelf + 1) + 2;
                for n in 0..=20 {
                    assert_eq!(count_ghost(k, r_ghost, n), count_official(k, r_off, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn h_parity_vanishing() {
        for n in 0..=15 {
            assert_eq!(count_h(3, 0, 3, 2, 1, n), 0);
            assert_eq!(count_h(5, 1, 4, 1, 2, n), 0);
        }
    }

    #[test]
    fn relaxing_multiplicity_never_decreases() {
        // i and i - 2 share the parity target, so only the cap differs
        for k in 3..=5 {
            for shelf in 0..=1 {
                for n in 0..=18 {
                    for i in 3..=k {
                        let tight = count(&ConditionProfile::official(k, shelf, i), n);
                        let loose = count(&ConditionProfile::official(k, shelf, i - 2), n);
                        assert!(tight <= loose, "k={k} i={i} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn edge_decompositions_agree() {
        for k in 2..=4 {
            for r in 1..=12 {
                for n in 0..=16 {
                    count_official(k, r, n).unwrap();
                }
            }
        }
    }
}
