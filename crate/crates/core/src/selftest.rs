//! Quick consistency suite run by `permcode selftest`.

use serde::Serialize;

use crate::balls::{ball_enumerate, ball_size};
use crate::metrics::{bfs_distance, distance, GeneratorSet, MetricKind};
use crate::perm::{enumerate, factorial, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
}

fn check(name: String, cases: u64, failures: u64) -> Check {
    Check {
        name,
        passed: failures == 0,
        cases,
        failures,
    }
}

fn oracle_equivalence(n: usize, metric: MetricKind) -> Check {
    let all: Vec<Permutation> = enumerate(n).expect("n in range").collect();
    let gens = GeneratorSet::new(metric, n).expect("n in range");
    let mut failures = 0;
    for p in &all {
        for q in &all {
            let closed = distance(p, q, metric).expect("same length");
            let walked = bfs_distance(p, q, &gens, None).expect("n within oracle cap").distance();
            if walked != Some(closed) {
                failures += 1;
            }
        }
    }
    check(format!("{metric}-oracle-n{n}"), (all.len() * all.len()) as u64, failures)
}

fn rank_round_trip(n: usize) -> Check {
    let mut failures = 0;
    let mut cases = 0;
    for (r, p) in enumerate(n).expect("n in range").enumerate() {
        cases += 1;
        let ok = p.rank().value() == r as u64
            && Permutation::unrank(n, r as u64).as_ref() == Ok(&p)
            && p.compose(&p.inverse()).map(|x| x.is_identity()) == Ok(true);
        if !ok {
            failures += 1;
        }
    }
    check(format!("rank-and-inverse-n{n}"), cases, failures)
}

fn ball_identities(n: usize, metric: MetricKind) -> Check {
    let center = Permutation::identity(n).expect("n in range");
    let mut failures = 0;
    let top = metric.max_distance(n);
    for r in 0..=top {
        let expected = ball_size(n, r, metric).expect("n in range").size;
        if ball_enumerate(&center, r, metric).len() as u64 != expected {
            failures += 1;
        }
    }
    if ball_size(n, top, metric).expect("n in range").size != factorial(n).expect("n in range") {
        failures += 1;
    }
    check(format!("{metric}-balls-n{n}"), top as u64 + 2, failures)
}

/// Oracle equivalence, rank round trips and ball identities for `1..=n_max`.
pub fn run(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(rank_round_trip(n));
        for m in MetricKind::ALL {
            out.push(oracle_equivalence(n, m));
            out.push(ball_identities(n, m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        let checks = super::run(4);
        assert_eq!(checks.len(), 4 * 5);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}
