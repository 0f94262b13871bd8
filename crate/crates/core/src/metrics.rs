//! Cayley and Kendall τ distances.
//!
//! Both distances are graph distances in a Cayley graph of `S_n` whose edges
//! are right multiplications by a transposition. The closed forms used here
//! are the cycle count of `p ∘ q⁻¹` (Cayley) and the inversion count of
//! `p⁻¹ ∘ q` (Kendall). [`bfs_distance`] walks the graph directly and exists
//! only to check those closed forms.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation, Transposition, MAX_N};

/// Largest `n` for which [`bfs_distance`] may run without a distance cap.
pub const ORACLE_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Cayley,
    Kendall,
}

impl MetricKind {
    pub const ALL: [MetricKind; 2] = [MetricKind::Cayley, MetricKind::Kendall];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Cayley => "cayley",
            MetricKind::Kendall => "kendall",
        }
    }

    /// Diameter of `S_n` under this metric.
    pub fn max_distance(self, n: usize) -> u32 {
        let n = n as u32;
        match self {
            MetricKind::Cayley => n.saturating_sub(1),
            MetricKind::Kendall => n * n.saturating_sub(1) / 2,
        }
    }

    pub fn distance(self, p: &Permutation, q: &Permutation) -> Result<u32> {
        distance(p, q, self)
    }

    #[inline]
    pub(crate) fn distance_unchecked(self, p: &Permutation, q: &Permutation) -> u32 {
        match self {
            MetricKind::Cayley => cayley_unchecked(p, q),
            MetricKind::Kendall => kendall_unchecked(p, q),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cayley" => Ok(MetricKind::Cayley),
            "kendall" => Ok(MetricKind::Kendall),
            other => Err(Error::OutOfRange(format!("unknown metric {other:?}"))),
        }
    }
}

/// The transpositions generating the Cayley graph for a metric: every pair of
/// positions for Cayley, neighbouring positions only for Kendall.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    metric: MetricKind,
    n: usize,
}

impl GeneratorSet {
    pub fn new(metric: MetricKind, n: usize) -> Result<Self> {
        crate::perm::check_len(n)?;
        Ok(GeneratorSet { metric, n })
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        match self.metric {
            MetricKind::Cayley => self.n * (self.n - 1) / 2,
            MetricKind::Kendall => self.n - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Generators in index order: `(1 2), (1 3), ..., (n-1 n)` for Cayley and
    /// `(1 2), (2 3), ...` for Kendall.
    pub fn transpositions(&self) -> Vec<Transposition> {
        self.position_pairs()
            .into_iter()
            .map(|(a, b)| Transposition::new(a + 1, b + 1).expect("valid pair"))
            .collect()
    }

    /// Zero-based position pairs in generator-index order.
    pub(crate) fn position_pairs(&self) -> Vec<(usize, usize)> {
        match self.metric {
            MetricKind::Cayley => (0..self.n)
                .flat_map(|a| (a + 1..self.n).map(move |b| (a, b)))
                .collect(),
            MetricKind::Kendall => (0..self.n.saturating_sub(1)).map(|a| (a, a + 1)).collect(),
        }
    }
}

fn check_same_len(p: &Permutation, q: &Permutation) -> Result<()> {
    if p.len() == q.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        })
    }
}

/// `n` minus the number of cycles of `p ∘ q⁻¹`.
pub fn cayley_distance(p: &Permutation, q: &Permutation) -> Result<u32> {
    check_same_len(p, q)?;
    Ok(cayley_unchecked(p, q))
}

#[inline]
fn cayley_unchecked(p: &Permutation, q: &Permutation) -> u32 {
    let quotient = p.compose_unchecked(&q.inverse());
    (p.len() - quotient.cycle_count()) as u32
}

/// Inversion count of `p⁻¹ ∘ q`.
pub fn kendall_distance(p: &Permutation, q: &Permutation) -> Result<u32> {
    check_same_len(p, q)?;
    Ok(kendall_unchecked(p, q))
}

#[inline]
fn kendall_unchecked(p: &Permutation, q: &Permutation) -> u32 {
    inversions(&p.inverse().compose_unchecked(q))
}

pub fn distance(p: &Permutation, q: &Permutation, metric: MetricKind) -> Result<u32> {
    check_same_len(p, q)?;
    Ok(metric.distance_unchecked(p, q))
}

/// Number of pairs of positions `a < b` with `p[a] > p[b]`, by merge sort.
pub fn inversions(p: &Permutation) -> u32 {
    let n = p.len();
    let mut buf = [0u8; MAX_N];
    let mut scratch = [0u8; MAX_N];
    buf[..n].copy_from_slice(p.entries());
    merge_count(&mut buf[..n], &mut scratch[..n])
}

fn merge_count(a: &mut [u8], scratch: &mut [u8]) -> u32 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (lo, hi) = a.split_at_mut(mid);
        let (slo, shi) = scratch.split_at_mut(mid);
        merge_count(lo, slo) + merge_count(hi, shi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if a[i] <= a[j] {
            scratch[k] = a[i];
            i += 1;
        } else {
            scratch[k] = a[j];
            j += 1;
            count += (mid - i) as u32;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&a[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&a[j..n]);
    a.copy_from_slice(&scratch[..n]);
    count
}

/// Result of a breadth-first oracle search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfsOutcome {
    Distance(u32),
    /// The target lies farther than the requested cap.
    Exceeded,
}

impl BfsOutcome {
    pub fn distance(self) -> Option<u32> {
        match self {
            BfsOutcome::Distance(d) => Some(d),
            BfsOutcome::Exceeded => None,
        }
    }
}

enum Visited {
    Bits(Vec<u64>),
    Set(HashSet<u64>),
}

impl Visited {
    fn new(n: usize) -> Self {
        if n <= ORACLE_MAX_N {
            let total = factorial(n).expect("n checked") as usize;
            Visited::Bits(vec![0; total.div_ceil(64)])
        } else {
            Visited::Set(HashSet::new())
        }
    }

    /// Marks `rank`, returning true if it was not yet visited.
    fn insert(&mut self, rank: u64) -> bool {
        match self {
            Visited::Bits(bits) => {
                let (w, b) = ((rank / 64) as usize, rank % 64);
                let fresh = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                fresh
            }
            Visited::Set(set) => set.insert(rank),
        }
    }
}

/// Graph distance from `p` to `q` in the Cayley graph generated by `gens`,
/// found by breadth-first search. Slow; use it only to cross-check the closed
/// forms.
///
/// Without a cap the search needs `n <= 8`. With a cap the search stops once
/// every vertex within `cap` has been seen and reports
/// [`BfsOutcome::Exceeded`].
pub fn bfs_distance(
    p: &Permutation,
    q: &Permutation,
    gens: &GeneratorSet,
    cap: Option<u32>,
) -> Result<BfsOutcome> {
    check_same_len(p, q)?;
    if gens.n() != p.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: gens.n(),
        });
    }
    if cap.is_none() && p.len() > ORACLE_MAX_N {
        return Err(Error::OracleCap {
            n: p.len(),
            max: ORACLE_MAX_N,
        });
    }
    if p == q {
        return Ok(BfsOutcome::Distance(0));
    }
    let pairs = gens.position_pairs();
    let mut visited = Visited::new(p.len());
    visited.insert(p.rank_value());
    let mut frontier = vec![*p];
    let mut depth = 0u32;
    while !frontier.is_empty() {
        if cap.is_some_and(|c| depth >= c) {
            return Ok(BfsOutcome::Exceeded);
        }
        let mut next = Vec::new();
        for x in &frontier {
            for &(a, b) in &pairs {
                let y = x.swap_unchecked(a, b);
                if y == *q {
                    return Ok(BfsOutcome::Distance(depth + 1));
                }
                if visited.insert(y.rank_value()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    // Both generator sets connect S_n, so this is only reached for n = 1.
    Ok(BfsOutcome::Exceeded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate;

    fn p(s: &[u8]) -> Permutation {
        Permutation::new(s).unwrap()
    }

    fn id(n: usize) -> Permutation {
        Permutation::identity(n).unwrap()
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley_distance(&p(&[1, 3, 2, 5, 6, 4]), &id(6)).unwrap(), 3);
        let x = p(&[2, 4, 1, 3]);
        assert_eq!(cayley_distance(&x, &x).unwrap(), 0);
        assert_eq!(cayley_distance(&p(&[4, 3, 2, 1]), &id(4)).unwrap(), 2);
    }

    #[test]
    fn kendall_examples() {
        let x = p(&[2, 4, 1, 3]);
        assert_eq!(kendall_distance(&x, &x).unwrap(), 0);
        assert_eq!(kendall_distance(&p(&[2, 1, 3, 4, 5]), &id(5)).unwrap(), 1);
        assert_eq!(kendall_distance(&p(&[4, 3, 2, 1]), &id(4)).unwrap(), 6);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(inversions(&id(7)), 0);
        assert_eq!(inversions(&p(&[3, 1, 2])), 2);
        for n in 1..=12 {
            let rev = Permutation::reversal(n).unwrap();
            assert_eq!(inversions(&rev) as usize, n * (n - 1) / 2);
        }
    }

    #[test]
    fn inversions_match_pair_count() {
        for x in enumerate(6).unwrap() {
            let e = x.entries();
            let mut brute = 0;
            for a in 0..e.len() {
                for b in a + 1..e.len() {
                    if e[a] > e[b] {
                        brute += 1;
                    }
                }
            }
            assert_eq!(inversions(&x), brute);
        }
    }

    #[test]
    fn bfs_examples() {
        let cay = GeneratorSet::new(MetricKind::Cayley, 6).unwrap();
        let x = p(&[1, 3, 2, 5, 6, 4]);
        assert_eq!(bfs_distance(&x, &x, &cay, None).unwrap(), BfsOutcome::Distance(0));
        assert_eq!(bfs_distance(&x, &id(6), &cay, None).unwrap(), BfsOutcome::Distance(3));
        let ken = GeneratorSet::new(MetricKind::Kendall, 3).unwrap();
        assert_eq!(
            bfs_distance(&p(&[3, 1, 2]), &id(3), &ken, None).unwrap(),
            BfsOutcome::Distance(2)
        );
        let ken4 = GeneratorSet::new(MetricKind::Kendall, 4).unwrap();
        assert_eq!(
            bfs_distance(&p(&[4, 3, 2, 1]), &id(4), &ken4, None).unwrap(),
            BfsOutcome::Distance(6)
        );
    }

    #[test]
    fn bfs_cap_and_limits() {
        let ken = GeneratorSet::new(MetricKind::Kendall, 4).unwrap();
        let rev = p(&[4, 3, 2, 1]);
        assert_eq!(bfs_distance(&rev, &id(4), &ken, Some(5)).unwrap(), BfsOutcome::Exceeded);
        assert_eq!(
            bfs_distance(&rev, &id(4), &ken, Some(6)).unwrap(),
            BfsOutcome::Distance(6)
        );

        let big = GeneratorSet::new(MetricKind::Cayley, 9).unwrap();
        let x = p(&[2, 1, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(
            bfs_distance(&x, &id(9), &big, None),
            Err(Error::OracleCap { n: 9, max: 8 })
        );
        assert_eq!(bfs_distance(&x, &id(9), &big, Some(2)).unwrap(), BfsOutcome::Distance(1));
        let far = p(&[2, 3, 1, 5, 4, 6, 7, 8, 9]);
        assert_eq!(bfs_distance(&far, &id(9), &big, Some(2)).unwrap(), BfsOutcome::Exceeded);
        assert_eq!(bfs_distance(&far, &id(9), &big, Some(3)).unwrap(), BfsOutcome::Distance(3));
    }

    #[test]
    fn dispatch_examples() {
        let x = p(&[1, 3, 2, 5, 6, 4]);
        assert_eq!(distance(&x, &id(6), MetricKind::Cayley).unwrap(), 3);
        assert_eq!(distance(&id(4), &id(4), MetricKind::Kendall).unwrap(), 0);
        assert_eq!(distance(&p(&[4, 3, 2, 1]), &id(4), MetricKind::Kendall).unwrap(), 6);
        assert!(distance(&id(3), &id(4), MetricKind::Cayley).is_err());
    }

    #[test]
    fn generator_sets() {
        let cay = GeneratorSet::new(MetricKind::Cayley, 5).unwrap();
        assert_eq!(cay.len(), 10);
        assert_eq!(cay.transpositions().len(), 10);
        let ken = GeneratorSet::new(MetricKind::Kendall, 5).unwrap();
        assert_eq!(ken.len(), 4);
        assert!(ken.transpositions().iter().all(|t| t.is_adjacent()));
    }

    #[test]
    fn cayley_conjugate_variant_agrees() {
        // p ∘ q⁻¹ and q⁻¹ ∘ p are conjugate, so their cycle counts agree
        let all: Vec<_> = enumerate(5).unwrap().collect();
        for a in all.iter().step_by(7) {
            for b in &all {
                let other = b.inverse().compose(a).unwrap();
                assert_eq!(cayley_distance(a, b).unwrap() as usize, 5 - other.cycle_count());
            }
        }
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("Cayley".parse::<MetricKind>().unwrap(), MetricKind::Cayley);
        assert_eq!("kendall".parse::<MetricKind>().unwrap(), MetricKind::Kendall);
        assert!("ulam".parse::<MetricKind>().is_err());
        assert_eq!(MetricKind::Kendall.max_distance(5), 10);
        assert_eq!(MetricKind::Cayley.max_distance(5), 4);
    }
}
