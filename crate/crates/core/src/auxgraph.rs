//! Statistics of the auxiliary graphs on `S_n`.
//!
//! The graph for `(n, d, metric)` joins two permutations when their distance
//! is between 1 and `d`; codes of minimum distance `d + 1` are exactly its
//! independent sets. The graphs are never built. Right multiplication by a
//! fixed permutation is an automorphism, so every vertex sees the same local
//! picture and global counts follow from the neighbourhood of the identity.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::balls::{ball_size, bfs_ball};
use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::perm::{check_len, factorial, Permutation};

/// Default cap on `n! · Δ²` for exact triangle censuses; admits every
/// `n <= 7, d <= 2` case.
pub const DEFAULT_WORK_BUDGET: u128 = 250_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuxGraphSpec {
    pub n: usize,
    pub d: u32,
    pub metric: MetricKind,
}

impl AuxGraphSpec {
    /// Requires `1 <= d < diameter`; at `d >= diameter` the graph is complete.
    pub fn new(n: usize, d: u32, metric: MetricKind) -> Result<Self> {
        check_len(n)?;
        let diam = metric.max_distance(n);
        if d == 0 || d >= diam {
            return Err(Error::OutOfRange(format!(
                "adjacency radius {d} must be in 1..{diam} for {metric} at n = {n}"
            )));
        }
        Ok(AuxGraphSpec { n, d, metric })
    }

    /// Like [`AuxGraphSpec::new`] but also accepts radii at or past the
    /// diameter, where the graph is complete.
    pub fn allowing_complete(n: usize, d: u32, metric: MetricKind) -> Result<Self> {
        check_len(n)?;
        if d == 0 {
            return Err(Error::OutOfRange("adjacency radius must be >= 1".into()));
        }
        Ok(AuxGraphSpec { n, d, metric })
    }

    pub fn vertex_count(&self) -> u64 {
        factorial(self.n).expect("length checked at construction")
    }

    /// `Δ = V(n, d) - 1`; the graph is regular.
    pub fn max_degree(&self) -> u64 {
        ball_size(self.n, self.d, self.metric)
            .expect("length checked at construction")
            .size
            - 1
    }

    /// Cost model for [`triangle_count_exact`]: `n! · Δ²`.
    pub fn census_work(&self) -> u128 {
        let delta = self.max_degree() as u128;
        self.vertex_count() as u128 * delta * delta
    }
}

/// The neighbours of `p`, in rank order.
pub fn neighborhood(p: &Permutation, spec: &AuxGraphSpec) -> Result<Vec<Permutation>> {
    if p.len() != spec.n {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: spec.n,
        });
    }
    let mut ball = bfs_ball(p, spec.d, spec.metric);
    ball.retain(|x| x != p);
    ball.sort_unstable();
    Ok(ball)
}

/// Number of edges among the given vertices.
fn edges_within(vertices: &[Permutation], spec: &AuxGraphSpec) -> u64 {
    vertices
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            vertices[i + 1..]
                .iter()
                .filter(|b| spec.metric.distance_unchecked(a, b) <= spec.d)
                .count() as u64
        })
        .sum()
}

/// Triangles containing `p`, i.e. edges inside its neighbourhood.
pub fn triangles_through(p: &Permutation, spec: &AuxGraphSpec) -> Result<u64> {
    Ok(edges_within(&neighborhood(p, spec)?, spec))
}

/// Exact number of triangles. Counts the triangles through the identity and
/// scales by `n! / 3`. Refuses when `n! · Δ²` exceeds `budget`.
pub fn triangle_count_exact(spec: &AuxGraphSpec, budget: u128) -> Result<u128> {
    let work = spec.census_work();
    if work > budget {
        return Err(Error::BudgetExceeded {
            required: work,
            budget,
            hint: "use sampled mode (--samples K --seed S)",
        });
    }
    let id = Permutation::identity_unchecked(spec.n);
    let through_id = triangles_through(&id, spec)? as u128;
    let total = spec.vertex_count() as u128 * through_id;
    debug_assert_eq!(total % 3, 0);
    Ok(total / 3)
}

/// Closed form for the complete graph on `n!` vertices: `C(n!, 3)`.
pub fn complete_graph_triangles(n: usize) -> Result<u128> {
    let v = factorial(n)? as u128;
    binomial(v, 3).ok_or(Error::Overflow("C(n!, 3)"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangleEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Monte Carlo triangle estimate. Sample `i` draws a vertex uniformly by rank
/// from the ChaCha stream `(seed, i)`, so the estimate does not depend on how
/// samples are spread over threads.
pub fn triangle_count_sampled(spec: &AuxGraphSpec, samples: u64, seed: u64) -> Result<TriangleEstimate> {
    if samples == 0 {
        return Err(Error::OutOfRange("sample count must be >= 1".into()));
    }
    let vertices = spec.vertex_count();
    let counts: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let v = Permutation::unrank_unchecked(spec.n, rng.gen_range(0..vertices));
            let mut nb = bfs_ball(&v, spec.d, spec.metric);
            nb.retain(|x| *x != v);
            edges_within(&nb, spec)
        })
        .collect();

    let scale = vertices as f64 / 3.0;
    let xs: Vec<f64> = counts.iter().map(|&c| c as f64 * scale).collect();
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let stderr = if xs.len() > 1 {
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    Ok(TriangleEstimate {
        estimate: mean,
        stderr,
        samples,
        seed,
    })
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Finite-`n` ceiling on ordered triangle completions, taken from the
/// counting argument that bounds triangles in these graphs:
///
/// * Cayley: `n! · C(n, min(n, 4d-1)) · (4d-1)^{4d}`;
/// * Kendall: `n! · n · C(n, min(n, 2d-2)) · (2d)^{4d}`, where `(2d)^{4d}`
///   stands in for the unspecified constant factor.
///
/// A fixed vertex together with an ordered pair of neighbours is determined
/// by a transposition sequence of length at most `2d` touching at most
/// `4d - 1` positions; when `n` is smaller than that, all `n` positions are
/// available, hence the `min`. Six times the triangle count never exceeds
/// this value.
pub fn lemma_counting_cap(spec: &AuxGraphSpec) -> Result<u128> {
    let n = spec.n as u128;
    let d = spec.d as u128;
    let fact = spec.vertex_count() as u128;
    let overflow = Error::Overflow("lemma counting cap");
    let cap = match spec.metric {
        MetricKind::Cayley => {
            let support = 4 * d - 1;
            let choose = binomial(n, support.min(n)).ok_or(overflow.clone())?;
            let words = support
                .checked_pow(4 * spec.d)
                .ok_or(overflow.clone())?;
            fact.checked_mul(choose).and_then(|x| x.checked_mul(words))
        }
        MetricKind::Kendall => {
            let choose = binomial(n, (2 * d - 2).min(n)).ok_or(overflow.clone())?;
            let split = (2 * d).checked_pow(4 * spec.d).ok_or(overflow.clone())?;
            fact.checked_mul(n)
                .and_then(|x| x.checked_mul(choose))
                .and_then(|x| x.checked_mul(split))
        }
    };
    cap.ok_or(overflow)
}

/// `N / (Δ + 1)`: every graph with maximum degree `Δ` has an independent set
/// at least this large.
pub fn simple_indep_bound(vertices: u64, max_degree: u64) -> Ratio<u64> {
    Ratio::new(vertices, max_degree + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AksBound {
    pub value: f64,
    /// Set when `T = 0` and the bound was evaluated at `T = 1`; the value is
    /// then conservative.
    pub triangle_free: bool,
}

/// Independence lower bound for graphs with few triangles,
/// `N / (10Δ) · (ln Δ - ½ ln(T / N))`, natural logarithm. `T = 0` is
/// evaluated as `T = 1`.
pub fn aks_bound(vertices: u64, max_degree: u64, triangles: f64) -> Result<AksBound> {
    if vertices == 0 || max_degree == 0 || triangles.is_nan() || triangles < 0.0 {
        return Err(Error::OutOfRange(format!(
            "aks bound needs N >= 1, Δ >= 1, T >= 0 (got {vertices}, {max_degree}, {triangles})"
        )));
    }
    let n = vertices as f64;
    let delta = max_degree as f64;
    let triangle_free = triangles == 0.0;
    let t = triangles.max(1.0);
    let value = n / (10.0 * delta) * (delta.ln() - 0.5 * (t / n).ln());
    Ok(AksBound {
        value,
        triangle_free,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum TriangleCount {
    Exact { value: u128 },
    Sampled(TriangleEstimate),
}

impl TriangleCount {
    pub fn value(&self) -> f64 {
        match self {
            TriangleCount::Exact { value } => *value as f64,
            TriangleCount::Sampled(e) => e.estimate,
        }
    }

    pub fn stderr(&self) -> Option<f64> {
        match self {
            TriangleCount::Exact { .. } => None,
            TriangleCount::Sampled(e) => Some(e.stderr),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub spec: AuxGraphSpec,
    pub vertices: u64,
    pub max_degree: u64,
    pub triangles: TriangleCount,
    /// `T / (n! · n^{4d-1})` (Cayley) or `T / (n! · n^{2d-1})` (Kendall).
    pub normalized_ratio: f64,
    pub lemma_cap: u128,
    pub simple_bound: Ratio<u64>,
    pub aks_bound: AksBound,
}

pub fn graph_stats(spec: &AuxGraphSpec, mode: CensusMode, budget: u128) -> Result<GraphStats> {
    let vertices = spec.vertex_count();
    let max_degree = spec.max_degree();
    let triangles = match mode {
        CensusMode::Exact => TriangleCount::Exact {
            value: triangle_count_exact(spec, budget)?,
        },
        CensusMode::Sampled { samples, seed } => {
            TriangleCount::Sampled(triangle_count_sampled(spec, samples, seed)?)
        }
    };
    let exponent = match spec.metric {
        MetricKind::Cayley => 4 * spec.d - 1,
        MetricKind::Kendall => 2 * spec.d - 1,
    };
    let normalized_ratio =
        triangles.value() / (vertices as f64 * (spec.n as f64).powi(exponent as i32));
    Ok(GraphStats {
        spec: *spec,
        vertices,
        max_degree,
        triangles,
        normalized_ratio,
        lemma_cap: lemma_counting_cap(spec)?,
        simple_bound: simple_indep_bound(vertices, max_degree),
        aks_bound: aks_bound(vertices, max_degree, triangles.value())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::gv_lower;
    use crate::metrics::distance;
    use crate::perm::enumerate;

    fn spec(n: usize, d: u32, m: MetricKind) -> AuxGraphSpec {
        AuxGraphSpec::new(n, d, m).unwrap()
    }

    #[test]
    fn spec_domain() {
        assert!(AuxGraphSpec::new(4, 3, MetricKind::Cayley).is_err());
        assert!(AuxGraphSpec::new(4, 0, MetricKind::Cayley).is_err());
        assert!(AuxGraphSpec::new(4, 5, MetricKind::Kendall).is_ok());
        assert!(AuxGraphSpec::allowing_complete(4, 3, MetricKind::Cayley).is_ok());
    }

    #[test]
    fn neighborhood_examples() {
        let id3 = Permutation::identity(3).unwrap();
        assert_eq!(neighborhood(&id3, &spec(3, 1, MetricKind::Cayley)).unwrap().len(), 3);
        assert_eq!(neighborhood(&id3, &spec(3, 1, MetricKind::Kendall)).unwrap().len(), 2);
        let s = spec(6, 2, MetricKind::Cayley);
        assert_eq!(
            neighborhood(&Permutation::identity(6).unwrap(), &s).unwrap().len() as u64,
            s.max_degree()
        );
    }

    #[test]
    fn distance_one_graphs_are_triangle_free() {
        for m in MetricKind::ALL {
            for n in 3..=6 {
                let s = spec(n, 1, m);
                assert_eq!(triangle_count_exact(&s, DEFAULT_WORK_BUDGET).unwrap(), 0);
            }
        }
    }

    /// Oracle values from an independent brute-force scan (Python, all
    /// triples at n = 5, neighbourhood pairs otherwise), frozen here.
    #[test]
    fn frozen_triangle_counts() {
        let cases = [
            (5, 2, MetricKind::Cayley, 19_600u128),
            (6, 2, MetricKind::Cayley, 404_400),
            (7, 2, MetricKind::Cayley, 7_820_400),
            (5, 3, MetricKind::Cayley, 140_200),
            (4, 2, MetricKind::Kendall, 112),
            (5, 2, MetricKind::Kendall, 1_320),
            (6, 3, MetricKind::Kendall, 107_520),
            (7, 3, MetricKind::Kendall, 1_545_600),
        ];
        for (n, d, m, expected) in cases {
            let t = triangle_count_exact(&spec(n, d, m), DEFAULT_WORK_BUDGET).unwrap();
            assert_eq!(t, expected, "{m} n={n} d={d}");
        }
    }

    #[test]
    fn complete_graph_closed_form() {
        let s = AuxGraphSpec::allowing_complete(4, 3, MetricKind::Cayley).unwrap();
        assert_eq!(triangle_count_exact(&s, DEFAULT_WORK_BUDGET).unwrap(), 2024);
        assert_eq!(complete_graph_triangles(4).unwrap(), 2024);
    }

    #[test]
    fn budget_refusal() {
        let s = spec(7, 3, MetricKind::Cayley);
        match triangle_count_exact(&s, DEFAULT_WORK_BUDGET) {
            Err(Error::BudgetExceeded { required, .. }) => assert_eq!(required, s.census_work()),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn vertex_transitivity() {
        let s = spec(5, 2, MetricKind::Kendall);
        let base = triangles_through(&Permutation::identity(5).unwrap(), &s).unwrap();
        for x in enumerate(5).unwrap().step_by(13) {
            assert_eq!(triangles_through(&x, &s).unwrap(), base);
        }
    }

    #[test]
    fn sampled_examples() {
        let bip = spec(6, 1, MetricKind::Cayley);
        let e = triangle_count_sampled(&bip, 25, 3).unwrap();
        assert_eq!((e.estimate, e.stderr), (0.0, 0.0));

        let s = spec(5, 2, MetricKind::Cayley);
        let e = triangle_count_sampled(&s, 120, 11).unwrap();
        assert_eq!(e.estimate, 19_600.0);
        assert_eq!(e.stderr, 0.0);

        assert_eq!(
            triangle_count_sampled(&s, 10, 5).unwrap(),
            triangle_count_sampled(&s, 10, 5).unwrap()
        );
        assert!(triangle_count_sampled(&s, 0, 5).is_err());
    }

    #[test]
    fn lemma_cap_examples() {
        assert_eq!(lemma_counting_cap(&spec(5, 1, MetricKind::Cayley)).unwrap(), 97_200);
        assert_eq!(lemma_counting_cap(&spec(5, 1, MetricKind::Kendall)).unwrap(), 9_600);
        // n < 4d - 1: all positions are available
        assert_eq!(
            lemma_counting_cap(&spec(5, 2, MetricKind::Cayley)).unwrap(),
            120 * 7u128.pow(8)
        );
    }

    #[test]
    fn lemma_cap_dominates_ordered_triangles() {
        for m in MetricKind::ALL {
            for n in 3..=6 {
                for d in 1..m.max_distance(n).min(4) {
                    let s = spec(n, d, m);
                    if s.census_work() > DEFAULT_WORK_BUDGET {
                        continue;
                    }
                    let t = triangle_count_exact(&s, DEFAULT_WORK_BUDGET).unwrap();
                    assert!(6 * t <= lemma_counting_cap(&s).unwrap(), "{m} n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn simple_bound_examples() {
        assert_eq!(simple_indep_bound(24, 5), Ratio::from_integer(4));
        assert_eq!(simple_indep_bound(24, 0), Ratio::from_integer(24));
        for m in MetricKind::ALL {
            let s = spec(6, 2, m);
            assert_eq!(
                simple_indep_bound(s.vertex_count(), s.max_degree()),
                gv_lower(6, 3, m).unwrap()
            );
        }
    }

    #[test]
    fn aks_examples() {
        let b = aks_bound(120, 10, 120.0).unwrap();
        assert!((b.value - 1.2 * 10f64.ln()).abs() < 1e-12);
        assert!(!b.triangle_free);
        assert_eq!(aks_bound(50, 1, 50.0).unwrap().value, 0.0);
        assert!(aks_bound(50, 3, 0.0).unwrap().triangle_free);
        assert!(aks_bound(50, 0, 0.0).is_err());
        assert!(aks_bound(0, 2, 0.0).is_err());
    }

    #[test]
    fn brute_force_triples_at_n5() {
        let all: Vec<_> = enumerate(5).unwrap().collect();
        let m = MetricKind::Cayley;
        let adj = |a: &Permutation, b: &Permutation| {
            let x = distance(a, b, m).unwrap();
            (1..=2).contains(&x)
        };
        let mut t = 0u128;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if !adj(&all[i], &all[j]) {
                    continue;
                }
                for k in j + 1..all.len() {
                    if adj(&all[i], &all[k]) && adj(&all[j], &all[k]) {
                        t += 1;
                    }
                }
            }
        }
        assert_eq!(t, triangle_count_exact(&spec(5, 2, m), DEFAULT_WORK_BUDGET).unwrap());
    }
}
