//! Permutation codes: constructors, verification and the text file format.
//!
//! Sieve constructors walk `S_n` in some rank order and keep every
//! permutation not yet covered by the radius-`(D - 1)` ball of an earlier
//! codeword. Each codeword covers at most `V(n, D - 1)` permutations, so a
//! finished sieve always holds at least `n! / V(n, D - 1)` words, and the
//! result is maximal.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::balls::bfs_ball;
use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::perm::{check_len, enumerate, factorial, Permutation};

pub mod io;
pub mod order;
mod verify;

pub use order::FeistelOrder;
pub use verify::{verify_min_distance, MinDistance, VerificationReport, VerifyMode, DEFAULT_VERIFY_BUDGET};

/// Largest `n` for constructors that keep one bit (or counter) per element
/// of `S_n`.
pub const SIEVE_MAX_N: usize = 10;

/// Default number of local-search passes for the triangle-aware constructor.
pub const DEFAULT_PASSES: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Greedy,
    Random,
    TriangleAware,
    Parity,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Random => "random",
            Method::TriangleAware => "triangle-aware",
            Method::Parity => "parity",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Method::Greedy),
            "random" => Ok(Method::Random),
            "triangle-aware" => Ok(Method::TriangleAware),
            "parity" => Ok(Method::Parity),
            other => Err(Error::OutOfRange(format!("unknown construction method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub method: Method,
    pub seed: Option<u64>,
}

/// A set of distinct permutations of one length, with the minimum distance it
/// was designed for. Construction does not check the distance; see
/// [`verify_min_distance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    metric: MetricKind,
    n: usize,
    design_distance: u32,
    words: Vec<Permutation>,
    provenance: Provenance,
}

impl Code {
    pub fn new(
        metric: MetricKind,
        n: usize,
        design_distance: u32,
        words: Vec<Permutation>,
        provenance: Provenance,
    ) -> Result<Self> {
        check_len(n)?;
        if design_distance == 0 {
            return Err(Error::InvalidCode("design distance must be >= 1".into()));
        }
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return Err(Error::InvalidCode(format!("word {w} does not have length {n}")));
        }
        let mut sorted = words.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidCode(format!("duplicate word {}", w[0])));
        }
        Ok(Code {
            metric,
            n,
            design_distance,
            words,
            provenance,
        })
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn design_distance(&self) -> u32 {
        self.design_distance
    }

    pub fn words(&self) -> &[Permutation] {
        &self.words
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn check_sieve_args(n: usize, min_distance: u32) -> Result<()> {
    check_len(n)?;
    if n > SIEVE_MAX_N {
        return Err(Error::SieveCap {
            n,
            max: SIEVE_MAX_N,
        });
    }
    if min_distance == 0 {
        return Err(Error::OutOfRange("minimum distance must be >= 1".into()));
    }
    Ok(())
}

/// Shared state for ball translations: by right-invariance the ball around
/// `w` is `{ w ∘ b : b in ball(id) }`.
struct Balls {
    offsets: Vec<Permutation>,
}

impl Balls {
    fn new(n: usize, radius: u32, metric: MetricKind) -> Self {
        let mut offsets = bfs_ball(&Permutation::identity_unchecked(n), radius, metric);
        offsets.sort_unstable();
        Balls { offsets }
    }

    fn around<'a>(&'a self, w: &'a Permutation) -> impl Iterator<Item = Permutation> + 'a {
        self.offsets.iter().map(move |b| w.compose_unchecked(b))
    }
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(len: u64) -> Self {
        Bits(vec![0; len.div_ceil(64) as usize])
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] & (1 << (i % 64)) != 0
    }

    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }
}

fn sieve(n: usize, balls: &Balls, order: impl Iterator<Item = u64>) -> Vec<Permutation> {
    let mut covered = Bits::new(factorial(n).expect("n checked"));
    let mut words = Vec::new();
    for r in order {
        if covered.get(r) {
            continue;
        }
        let w = Permutation::unrank_unchecked(n, r);
        for x in balls.around(&w) {
            covered.set(x.rank_value());
        }
        words.push(w);
    }
    words
}

/// Sieve in plain rank order. Deterministic; at least `⌈n!/V(n, D-1)⌉` words.
pub fn construct_greedy_lex(n: usize, min_distance: u32, metric: MetricKind) -> Result<Code> {
    check_sieve_args(n, min_distance)?;
    let balls = Balls::new(n, min_distance - 1, metric);
    let words = sieve(n, &balls, 0..factorial(n)?);
    Code::new(
        metric,
        n,
        min_distance,
        words,
        Provenance {
            method: Method::Greedy,
            seed: None,
        },
    )
}

fn random_sieve(n: usize, balls: &Balls, seed: u64, restart: u64) -> Vec<Permutation> {
    let order = FeistelOrder::new(factorial(n).expect("n checked"), seed, restart);
    sieve(n, balls, order.iter())
}

/// Sieve along `restarts` seeded pseudorandom rank orders; keeps the largest
/// result, the earliest restart on ties.
pub fn construct_random_greedy(
    n: usize,
    min_distance: u32,
    metric: MetricKind,
    seed: u64,
    restarts: u32,
) -> Result<Code> {
    check_sieve_args(n, min_distance)?;
    if restarts == 0 {
        return Err(Error::OutOfRange("restarts must be >= 1".into()));
    }
    let balls = Balls::new(n, min_distance - 1, metric);
    let runs: Vec<Vec<Permutation>> = (0..restarts as u64)
        .into_par_iter()
        .map(|r| random_sieve(n, &balls, seed, r))
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.len() > runs[best].len() {
            best = i;
        }
    }
    let words = runs.into_iter().nth(best).expect("restarts >= 1");
    Code::new(
        metric,
        n,
        min_distance,
        words,
        Provenance {
            method: Method::Random,
            seed: Some(seed),
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSearchReport {
    pub phase_one_size: usize,
    pub passes_run: u32,
    pub swaps: u64,
}

/// Seeded random sieve followed by local search with (1-out, 2-in) moves:
/// drop a codeword, look in its ball for two permutations that are now
/// uncovered and at distance `>= D` from each other, and take both (plus any
/// further uncovered permutation from the same ball). Stops after a pass with
/// no improvement or after `passes` passes.
///
/// This is a heuristic for large independent sets in the auxiliary graph; it
/// carries no guarantee beyond the sieve's.
pub fn construct_triangle_aware(
    n: usize,
    min_distance: u32,
    metric: MetricKind,
    seed: u64,
    passes: u32,
) -> Result<(Code, LocalSearchReport)> {
    check_sieve_args(n, min_distance)?;
    let balls = Balls::new(n, min_distance - 1, metric);
    let mut words = random_sieve(n, &balls, seed, 0);
    let phase_one_size = words.len();

    let mut cover = vec![0u32; factorial(n)? as usize];
    let adjust = |cover: &mut [u32], w: &Permutation, up: bool| {
        for x in balls.around(w) {
            let c = &mut cover[x.rank_value() as usize];
            if up {
                *c += 1;
            } else {
                *c -= 1;
            }
        }
    };
    for w in &words {
        adjust(&mut cover, w, true);
    }

    let mut report = LocalSearchReport {
        phase_one_size,
        passes_run: 0,
        swaps: 0,
    };
    for _ in 0..passes {
        report.passes_run += 1;
        let mut improved = false;
        let mut idx = 0;
        while idx < words.len() {
            let c = words[idx];
            adjust(&mut cover, &c, false);
            let free: Vec<Permutation> = balls
                .around(&c)
                .filter(|x| cover[x.rank_value() as usize] == 0)
                .collect();
            match far_pair(&free, min_distance, metric) {
                Some((a, b)) => {
                    words[idx] = free[a];
                    adjust(&mut cover, &free[a], true);
                    words.push(free[b]);
                    adjust(&mut cover, &free[b], true);
                    for x in &free {
                        if cover[x.rank_value() as usize] == 0 {
                            words.push(*x);
                            adjust(&mut cover, x, true);
                        }
                    }
                    report.swaps += 1;
                    improved = true;
                }
                None => adjust(&mut cover, &c, true),
            }
            idx += 1;
        }
        if !improved {
            break;
        }
    }

    let code = Code::new(
        metric,
        n,
        min_distance,
        words,
        Provenance {
            method: Method::TriangleAware,
            seed: Some(seed),
        },
    )?;
    Ok((code, report))
}

fn far_pair(cands: &[Permutation], min_distance: u32, metric: MetricKind) -> Option<(usize, usize)> {
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            if metric.distance_unchecked(&cands[i], &cands[j]) >= min_distance {
                return Some((i, j));
            }
        }
    }
    None
}

/// All even permutations: `n!/2` words at pairwise Kendall distance >= 2.
pub fn construct_parity_kendall(n: usize) -> Result<Code> {
    check_sieve_args(n, 2)?;
    if n < 2 {
        return Err(Error::OutOfRange("parity code needs n >= 2".into()));
    }
    let words = enumerate(n)?.filter(Permutation::is_even).collect();
    Code::new(
        MetricKind::Kendall,
        n,
        2,
        words,
        Provenance {
            method: Method::Parity,
            seed: None,
        },
    )
}

/// True when no permutation outside the code is at distance `>= D` from
/// every codeword. Exhaustive over `S_n`.
pub fn is_maximal(code: &Code) -> bool {
    let balls = Balls::new(code.n, code.design_distance - 1, code.metric);
    let mut covered = Bits::new(factorial(code.n).expect("valid code"));
    for w in code.words() {
        for x in balls.around(w) {
            covered.set(x.rank_value());
        }
    }
    (0..factorial(code.n).expect("valid code")).all(|r| covered.get(r))
}
