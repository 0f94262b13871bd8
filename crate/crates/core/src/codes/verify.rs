use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::Code;
use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::perm::Permutation;

/// Default cap on distance evaluations for exhaustive verification.
pub const DEFAULT_VERIFY_BUDGET: u64 = 4_000_000_000;

/// Minimum pairwise distance; infinite for codes with fewer than two words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinDistance {
    Finite(u32),
    Infinite,
}

impl MinDistance {
    pub fn finite(self) -> Option<u32> {
        match self {
            MinDistance::Finite(d) => Some(d),
            MinDistance::Infinite => None,
        }
    }
}

/// Finite values serialise as numbers, infinity as the string `"inf"`.
impl Serialize for MinDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MinDistance::Finite(d) => s.serialize_u32(*d),
            MinDistance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Per-word data that makes repeated pairwise distances cheap.
enum Prepared {
    /// Inverses; the distance is `n` minus the cycles of `p ∘ q⁻¹`.
    Cayley(usize, Vec<Permutation>),
    /// Bit `k` records the relative order of the `k`-th value pair; the
    /// distance is the number of pairs ordered differently.
    Kendall(Vec<u128>),
}

impl Prepared {
    fn new(code: &Code) -> Self {
        match code.metric {
            MetricKind::Cayley => {
                Prepared::Cayley(code.n, code.words.iter().map(Permutation::inverse).collect())
            }
            MetricKind::Kendall => Prepared::Kendall(code.words.iter().map(order_mask).collect()),
        }
    }

    #[inline]
    fn distance(&self, words: &[Permutation], i: usize, j: usize) -> u32 {
        match self {
            Prepared::Cayley(n, inverses) => {
                (n - words[i].compose_unchecked(&inverses[j]).cycle_count()) as u32
            }
            Prepared::Kendall(masks) => (masks[i] ^ masks[j]).count_ones(),
        }
    }
}

fn order_mask(p: &Permutation) -> u128 {
    let pos = p.inverse();
    let pos = pos.entries();
    let mut mask = 0u128;
    let mut bit = 0;
    for a in 0..pos.len() {
        for b in a + 1..pos.len() {
            if pos[a] > pos[b] {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerifyMode {
    /// Every unordered pair.
    Exhaustive,
    /// `pairs` seeded random pairs; the result only bounds the true minimum
    /// from above.
    Sampled { pairs: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub min_distance: MinDistance,
    /// A pair realising `min_distance`.
    pub witness: Option<(Permutation, Permutation)>,
    pub pairs_checked: u64,
    pub mode: VerifyMode,
    pub design_distance: u32,
    /// `min_distance >= design_distance`. Only conclusive in exhaustive mode.
    pub meets_design: bool,
}

fn report(
    code: &Code,
    mode: VerifyMode,
    best: Option<(u32, usize, usize)>,
    pairs_checked: u64,
) -> VerificationReport {
    let (min_distance, witness) = match best {
        Some((d, i, j)) => (MinDistance::Finite(d), Some((code.words[i], code.words[j]))),
        None => (MinDistance::Infinite, None),
    };
    VerificationReport {
        min_distance,
        witness,
        pairs_checked,
        mode,
        design_distance: code.design_distance,
        meets_design: min_distance >= MinDistance::Finite(code.design_distance),
    }
}

/// Minimum pairwise distance of `code` under its own metric.
///
/// Exhaustive mode reports the lexicographically first closest pair and
/// refuses when `|C|(|C|-1)/2` exceeds `budget`. The result does not depend
/// on the number of worker threads.
pub fn verify_min_distance(code: &Code, mode: VerifyMode, budget: u64) -> Result<VerificationReport> {
    let words = &code.words;
    let m = words.len();
    match mode {
        VerifyMode::Exhaustive => {
            let pairs = (m as u128) * (m.saturating_sub(1) as u128) / 2;
            if pairs > budget as u128 {
                return Err(Error::BudgetExceeded {
                    required: pairs,
                    budget: budget as u128,
                    hint: "use sampled verification (--sampled K --seed S)",
                });
            }
            let prepared = Prepared::new(code);
            let best = (0..m)
                .into_par_iter()
                .filter_map(|i| {
                    (i + 1..m)
                        .map(|j| (prepared.distance(words, i, j), i, j))
                        .min()
                })
                .min();
            Ok(report(code, mode, best, pairs as u64))
        }
        VerifyMode::Sampled { pairs, seed } => {
            if m < 2 {
                return Ok(report(code, mode, None, 0));
            }
            let prepared = Prepared::new(code);
            let best = (0..pairs)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s);
                    let i = rng.gen_range(0..m);
                    let mut j = rng.gen_range(0..m - 1);
                    if j >= i {
                        j += 1;
                    }
                    let (i, j) = (i.min(j), i.max(j));
                    (prepared.distance(words, i, j), s, i, j)
                })
                .min()
                .map(|(d, _, i, j)| (d, i, j));
            Ok(report(code, mode, best, pairs))
        }
    }
}
