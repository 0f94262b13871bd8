//! Ball sizes and the classical bounds on code size.
//!
//! By the closed forms in [`crate::metrics`], the sphere of radius `k` around
//! the identity is the set of permutations with `n - k` cycles (Cayley) or
//! with `k` inversions (Kendall). Sphere sizes are therefore unsigned Stirling
//! numbers of the first kind and Mahonian numbers, and ball sizes are their
//! prefix sums. Both metrics are right-invariant, so these sizes do not depend
//! on the center.
//!
//! Bounds are parametrised by the minimum distance `D` of the code: a code of
//! minimum distance `D` is an independent set in the graph joining
//! permutations at distance at most `D - 1`.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{GeneratorSet, MetricKind};
use crate::perm::{check_len, factorial, Permutation};

/// Unsigned Stirling number of the first kind: permutations of `S_n` with
/// exactly `k` cycles.
pub fn stirling_first_unsigned(n: usize, k: usize) -> Result<u64> {
    if k > n || n > crate::perm::MAX_N {
        return Err(Error::OutOfRange(format!("stirling c({n}, {k})")));
    }
    let mut row = vec![1u64];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        for j in 1..=m {
            let same = if j < m { row[j] } else { 0 };
            next[j] = row[j - 1] + (m as u64 - 1) * same;
        }
        row = next;
    }
    Ok(row[k])
}

/// Coefficients of `∏_{i=1..n} (1 + q + ... + q^{i-1})`.
fn mahonian_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for i in 1..=n {
        let mut next = vec![0u64; row.len() + i - 1];
        for (k, &c) in row.iter().enumerate() {
            for slot in &mut next[k..k + i] {
                *slot += c;
            }
        }
        row = next;
    }
    row
}

/// Number of permutations of `S_n` with exactly `k` inversions.
pub fn mahonian(n: usize, k: usize) -> Result<u64> {
    if n > crate::perm::MAX_N || k > n * n.saturating_sub(1) / 2 {
        return Err(Error::OutOfRange(format!("mahonian({n}, {k})")));
    }
    Ok(mahonian_row(n)[k])
}

/// Number of permutations at distance exactly `k` from any fixed center.
pub fn sphere_size(n: usize, k: u32, metric: MetricKind) -> Result<u64> {
    check_len(n)?;
    if k > metric.max_distance(n) {
        return Ok(0);
    }
    match metric {
        MetricKind::Cayley => stirling_first_unsigned(n, n - k as usize),
        MetricKind::Kendall => mahonian(n, k as usize),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallSize {
    pub n: usize,
    pub radius: u32,
    pub metric: MetricKind,
    pub size: u64,
}

/// `V(n, d)`: the number of permutations within distance `radius` of a center.
pub fn ball_size(n: usize, radius: u32, metric: MetricKind) -> Result<BallSize> {
    check_len(n)?;
    let top = radius.min(metric.max_distance(n));
    let size = match metric {
        MetricKind::Cayley => (0..=top as usize)
            .map(|k| stirling_first_unsigned(n, n - k))
            .sum::<Result<u64>>()?,
        MetricKind::Kendall => mahonian_row(n)[..=top as usize].iter().sum(),
    };
    Ok(BallSize {
        n,
        radius,
        metric,
        size,
    })
}

/// Every permutation within distance `radius` of `center`, found by bounded
/// breadth-first search and returned in rank order. The result has
/// `ball_size(n, radius, metric)` elements; the caller is responsible for
/// keeping that affordable.
pub fn ball_enumerate(center: &Permutation, radius: u32, metric: MetricKind) -> Vec<Permutation> {
    let mut out = bfs_ball(center, radius, metric);
    out.sort_unstable();
    out
}

/// Bounded BFS, results in discovery order.
pub(crate) fn bfs_ball(center: &Permutation, radius: u32, metric: MetricKind) -> Vec<Permutation> {
    let pairs = GeneratorSet::new(metric, center.len())
        .expect("center has a valid length")
        .position_pairs();
    let mut seen: HashSet<Permutation> = HashSet::from([*center]);
    let mut out = vec![*center];
    let mut frontier = vec![*center];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for &(a, b) in &pairs {
                let y = x.swap_unchecked(a, b);
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    out
}

fn check_bound_args(n: usize, min_distance: u32, metric: MetricKind) -> Result<()> {
    check_len(n)?;
    if min_distance == 0 || min_distance - 1 > metric.max_distance(n) {
        return Err(Error::OutOfRange(format!(
            "minimum distance {min_distance} not in 1..={} for {metric} at n = {n}",
            metric.max_distance(n) + 1
        )));
    }
    Ok(())
}

/// Gilbert–Varshamov lower bound `n! / V(n, D - 1)`: some code of minimum
/// distance `D` has at least the ceiling of this many words.
pub fn gv_lower(n: usize, min_distance: u32, metric: MetricKind) -> Result<Ratio<u64>> {
    check_bound_args(n, min_distance, metric)?;
    let v = ball_size(n, min_distance - 1, metric)?.size;
    Ok(Ratio::new(factorial(n)?, v))
}

/// Sphere-packing upper bound `n! / V(n, ⌊(D - 1) / 2⌋)`.
pub fn sphere_packing_upper(n: usize, min_distance: u32, metric: MetricKind) -> Result<Ratio<u64>> {
    check_bound_args(n, min_distance, metric)?;
    let v = ball_size(n, (min_distance - 1) / 2, metric)?.size;
    Ok(Ratio::new(factorial(n)?, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KnownValue {
    pub value: u64,
    /// Which classical result supplies the value.
    pub source: &'static str,
}

/// Exactly known maximum code sizes:
///
/// * `D = 1`: the whole group, `n!`, for both metrics;
/// * Kendall, `D = 2`: `n!/2`, attained by the even permutations;
/// * Kendall, `2/3 · C(n,2) < D <= C(n,2)`: `2`.
///
/// The last range is strict on the left. At `D = 2/3 · C(n,2)` three words can
/// still be pairwise far enough apart (e.g. `n = 4, D = 4`).
pub fn known_exact(n: usize, min_distance: u32, metric: MetricKind) -> Option<KnownValue> {
    check_len(n).ok()?;
    if min_distance == 1 {
        return Some(KnownValue {
            value: factorial(n).ok()?,
            source: "whole group",
        });
    }
    if metric != MetricKind::Kendall || n < 2 {
        return None;
    }
    if min_distance == 2 {
        return Some(KnownValue {
            value: factorial(n).ok()? / 2,
            source: "even permutations",
        });
    }
    let pairs = metric.max_distance(n);
    if 3 * min_distance > 2 * pairs && min_distance <= pairs {
        return Some(KnownValue {
            value: 2,
            source: "antipodal pair",
        });
    }
    None
}

/// One cell of a bounds table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub metric: MetricKind,
    pub n: usize,
    #[serde(rename = "D")]
    pub min_distance: u32,
    pub gv_num: u64,
    pub gv_den: u64,
    pub gv_ceil: u64,
    pub sp_num: u64,
    pub sp_den: u64,
    pub sp_floor: u64,
    pub known_exact: Option<u64>,
    pub known_source: Option<&'static str>,
    /// GV bound scaled by `n^{2(D-1)} / n!` (Cayley) or `n^{D-1} / n!`
    /// (Kendall). Flat in `n` when the ball grows at the textbook rate.
    pub gv_normalized: f64,
}

impl BoundsRow {
    pub fn new(n: usize, min_distance: u32, metric: MetricKind) -> Result<Self> {
        let gv = gv_lower(n, min_distance, metric)?;
        let sp = sphere_packing_upper(n, min_distance, metric)?;
        let known = known_exact(n, min_distance, metric);
        let radius = min_distance - 1;
        let exponent = match metric {
            MetricKind::Cayley => 2 * radius,
            MetricKind::Kendall => radius,
        };
        let v = ball_size(n, radius, metric)?.size;
        Ok(BoundsRow {
            metric,
            n,
            min_distance,
            gv_num: *gv.numer(),
            gv_den: *gv.denom(),
            gv_ceil: gv.ceil().to_integer(),
            sp_num: *sp.numer(),
            sp_den: *sp.denom(),
            sp_floor: sp.floor().to_integer(),
            known_exact: known.map(|k| k.value),
            known_source: known.map(|k| k.source),
            gv_normalized: (n as f64).powi(exponent as i32) / v as f64,
        })
    }

    pub fn gv_lower(&self) -> Ratio<u64> {
        Ratio::new(self.gv_num, self.gv_den)
    }

    pub fn sp_upper(&self) -> Ratio<u64> {
        Ratio::new(self.sp_num, self.sp_den)
    }

    /// `ceil(gv) <= known <= floor(sp)` and `ceil(gv) <= floor(sp)`.
    pub fn is_consistent(&self) -> bool {
        self.gv_ceil <= self.sp_floor
            && self
                .known_exact
                .map_or(true, |k| self.gv_ceil <= k && k <= self.sp_floor)
    }
}

/// One row per `(n, D)` in the given ranges, n-major. Cells where `D - 1`
/// exceeds the diameter of `S_n` are skipped.
pub fn bounds_table(
    ns: RangeInclusive<usize>,
    ds: RangeInclusive<u32>,
    metric: MetricKind,
) -> Result<Vec<BoundsRow>> {
    let mut rows = Vec::new();
    for n in ns {
        check_len(n)?;
        for d in ds.clone() {
            if d == 0 || d - 1 > metric.max_distance(n) {
                continue;
            }
            rows.push(BoundsRow::new(n, d, metric)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::distance;
    use crate::perm::enumerate;

    fn id(n: usize) -> Permutation {
        Permutation::identity(n).unwrap()
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_first_unsigned(4, 4).unwrap(), 1);
        assert_eq!(stirling_first_unsigned(4, 2).unwrap(), 11);
        assert_eq!(stirling_first_unsigned(0, 0).unwrap(), 1);
        for n in 1..=12 {
            let total: u64 = (0..=n).map(|k| stirling_first_unsigned(n, k).unwrap()).sum();
            assert_eq!(total, factorial(n).unwrap());
        }
        assert!(stirling_first_unsigned(4, 5).is_err());
        assert!(stirling_first_unsigned(13, 1).is_err());
    }

    #[test]
    fn stirling_matches_cycle_census() {
        let mut counts = [0u64; 5];
        for x in enumerate(4).unwrap() {
            counts[x.cycle_count()] += 1;
        }
        for (k, &count) in counts.iter().enumerate().skip(1) {
            assert_eq!(stirling_first_unsigned(4, k).unwrap(), count);
        }
    }

    #[test]
    fn mahonian_examples() {
        assert_eq!(mahonian_row(4), vec![1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(mahonian(4, 2).unwrap(), 5);
        for n in 1..=12 {
            assert_eq!(mahonian(n, 0).unwrap(), 1);
            assert_eq!(mahonian_row(n).iter().sum::<u64>(), factorial(n).unwrap());
        }
        assert!(mahonian(4, 7).is_err());
    }

    #[test]
    fn ball_size_examples() {
        assert_eq!(ball_size(4, 2, MetricKind::Cayley).unwrap().size, 18);
        assert_eq!(ball_size(4, 2, MetricKind::Kendall).unwrap().size, 9);
        for m in MetricKind::ALL {
            assert_eq!(ball_size(6, 0, m).unwrap().size, 1);
        }
        assert_eq!(ball_size(6, 2, MetricKind::Cayley).unwrap().size, 101);
        assert_eq!(ball_size(6, 2, MetricKind::Kendall).unwrap().size, 20);
        assert_eq!(ball_size(5, 1, MetricKind::Cayley).unwrap().size, 11);
    }

    #[test]
    fn full_radius_covers_group() {
        for n in 1..=12 {
            let full = factorial(n).unwrap();
            assert_eq!(ball_size(n, n as u32 - 1, MetricKind::Cayley).unwrap().size, full);
            let diam = MetricKind::Kendall.max_distance(n);
            assert_eq!(ball_size(n, diam, MetricKind::Kendall).unwrap().size, full);
            assert_eq!(ball_size(n, diam + 5, MetricKind::Kendall).unwrap().size, full);
        }
    }

    #[test]
    fn ball_enumerate_examples() {
        let c = id(3);
        assert_eq!(ball_enumerate(&c, 0, MetricKind::Cayley), vec![c]);
        let cay: Vec<String> = ball_enumerate(&c, 1, MetricKind::Cayley)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(cay, ["1 2 3", "1 3 2", "2 1 3", "3 2 1"]);
        let ken: Vec<String> = ball_enumerate(&c, 1, MetricKind::Kendall)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(ken, ["1 2 3", "1 3 2", "2 1 3"]);
    }

    #[test]
    fn ball_enumerate_agrees_with_distance_filter() {
        let center: Permutation = "3 1 5 2 4".parse().unwrap();
        for m in MetricKind::ALL {
            for r in 0..=4 {
                let filtered: Vec<_> = enumerate(5)
                    .unwrap()
                    .filter(|x| distance(&center, x, m).unwrap() <= r)
                    .collect();
                assert_eq!(ball_enumerate(&center, r, m), filtered);
            }
        }
    }

    #[test]
    fn gv_examples() {
        assert_eq!(gv_lower(5, 2, MetricKind::Cayley).unwrap(), Ratio::new(120, 11));
        assert_eq!(gv_lower(6, 1, MetricKind::Kendall).unwrap(), Ratio::from_integer(720));
        assert_eq!(gv_lower(4, 3, MetricKind::Kendall).unwrap(), Ratio::new(8, 3));
        assert!(gv_lower(4, 0, MetricKind::Cayley).is_err());
        assert!(gv_lower(4, 5, MetricKind::Cayley).is_err());
        assert!(gv_lower(4, 7, MetricKind::Kendall).is_ok());
        assert!(gv_lower(4, 8, MetricKind::Kendall).is_err());
    }

    #[test]
    fn sphere_packing_examples() {
        for m in MetricKind::ALL {
            assert_eq!(sphere_packing_upper(5, 1, m).unwrap(), Ratio::from_integer(120));
            assert_eq!(sphere_packing_upper(5, 2, m).unwrap(), Ratio::from_integer(120));
        }
        assert_eq!(sphere_packing_upper(4, 3, MetricKind::Kendall).unwrap(), Ratio::from_integer(6));
        assert_eq!(sphere_packing_upper(5, 3, MetricKind::Cayley).unwrap(), Ratio::new(120, 11));
    }

    #[test]
    fn known_exact_examples() {
        assert_eq!(known_exact(5, 2, MetricKind::Kendall).unwrap().value, 60);
        assert_eq!(known_exact(6, 1, MetricKind::Cayley).unwrap().value, 720);
        assert_eq!(known_exact(5, 7, MetricKind::Kendall).unwrap().value, 2);
        assert_eq!(known_exact(5, 6, MetricKind::Kendall), None);
        assert_eq!(known_exact(5, 3, MetricKind::Cayley), None);
        assert_eq!(known_exact(5, 11, MetricKind::Kendall), None);
        // boundary cases where three words fit
        assert_eq!(known_exact(3, 2, MetricKind::Kendall).unwrap().value, 3);
        assert_eq!(known_exact(4, 4, MetricKind::Kendall), None);
        assert_eq!(known_exact(6, 10, MetricKind::Kendall), None);
        assert_eq!(known_exact(6, 11, MetricKind::Kendall).unwrap().value, 2);
    }

    /// Brute-force check of the "exactly two words" range: no three
    /// permutations are pairwise at distance >= D. By right-invariance one of
    /// them can be taken to be the identity.
    #[test]
    fn antipodal_range_admits_no_triple() {
        for n in 3..=6 {
            let all: Vec<_> = enumerate(n).unwrap().collect();
            let e = id(n);
            for d in 1..=MetricKind::Kendall.max_distance(n) {
                let far: Vec<_> = all
                    .iter()
                    .filter(|x| distance(&e, x, MetricKind::Kendall).unwrap() >= d)
                    .collect();
                let triple = far.iter().enumerate().any(|(i, a)| {
                    far[i + 1..]
                        .iter()
                        .any(|b| distance(a, b, MetricKind::Kendall).unwrap() >= d)
                });
                if let Some(k) = known_exact(n, d, MetricKind::Kendall) {
                    if k.value == 2 {
                        assert!(!triple, "n={n} D={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_cell_and_invariants() {
        let rows = bounds_table(5..=5, 2..=2, MetricKind::Cayley).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].gv_lower(), Ratio::new(120, 11));
        assert_eq!(rows[0].sp_upper(), Ratio::from_integer(120));
        assert_eq!(rows[0].gv_ceil, 11);

        let k = bounds_table(4..=4, 2..=2, MetricKind::Kendall).unwrap();
        assert_eq!(k[0].known_exact, Some(12));

        for m in MetricKind::ALL {
            let rows = bounds_table(1..=12, 1..=30, m).unwrap();
            assert!(!rows.is_empty());
            assert!(rows.iter().all(BoundsRow::is_consistent));
        }
        // infeasible cells are skipped
        assert!(bounds_table(3..=3, 4..=6, MetricKind::Cayley).unwrap().is_empty());
    }

    /// V_C(n, d) / n^{2d} stays in a fixed band for n = 6..10. Band edges were
    /// computed from the Stirling recurrence and frozen here.
    #[test]
    fn cayley_ball_growth_band() {
        let bands = [(1u32, 0.44, 0.47), (2, 0.077, 0.093)];
        for (d, lo, hi) in bands {
            for n in 6..=10 {
                let v = ball_size(n, d, MetricKind::Cayley).unwrap().size as f64;
                let ratio = v / (n as f64).powi(2 * d as i32);
                assert!(lo <= ratio && ratio <= hi, "d={d} n={n} ratio={ratio}");
            }
        }
    }
}
