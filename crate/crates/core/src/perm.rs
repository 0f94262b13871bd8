//! Permutations of `{1..n}` in one-line notation.
//!
//! A [`Permutation`] is a small `Copy` value (at most [`MAX_N`] entries) so it
//! can be passed around freely in the hot loops of the sieve and the census.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported length. `12!` still fits comfortably in a `u64` rank.
pub const MAX_N: usize = 12;

const FACTORIALS: [u64; MAX_N + 1] = {
    let mut table = [1u64; MAX_N + 1];
    let mut i = 1;
    while i <= MAX_N {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

/// `n!` for `n <= MAX_N`.
pub fn factorial(n: usize) -> Result<u64> {
    FACTORIALS
        .get(n)
        .copied()
        .ok_or(Error::LengthOutOfRange(n))
}

pub(crate) fn check_len(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::LengthOutOfRange(n))
    }
}

/// A bijection on `{1..n}`; `entries()[i]` is the image of `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    entries: [u8; MAX_N],
}

impl Permutation {
    /// Builds a permutation from one-line notation, checking that the entries
    /// are exactly `1..=n` in some order.
    pub fn new(entries: &[u8]) -> Result<Self> {
        let n = entries.len();
        check_len(n)?;
        let mut seen = 0u16;
        for &v in entries {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "entry {v} outside 1..={n}"
                )));
            }
            let bit = 1u16 << (v - 1);
            if seen & bit != 0 {
                return Err(Error::InvalidPermutation(format!("entry {v} repeated")));
            }
            seen |= bit;
        }
        let mut buf = [0u8; MAX_N];
        buf[..n].copy_from_slice(entries);
        Ok(Permutation { n: n as u8, entries: buf })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Self::identity_unchecked(n))
    }

    pub(crate) fn identity_unchecked(n: usize) -> Self {
        let mut entries = [0u8; MAX_N];
        for (i, e) in entries.iter_mut().enumerate().take(n) {
            *e = i as u8 + 1;
        }
        Permutation { n: n as u8, entries }
    }

    /// `(n, n-1, ..., 1)`, the last permutation in rank order.
    pub fn reversal(n: usize) -> Result<Self> {
        check_len(n)?;
        let mut entries = [0u8; MAX_N];
        for (i, e) in entries.iter_mut().enumerate().take(n) {
            *e = (n - i) as u8;
        }
        Ok(Permutation { n: n as u8, entries })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.entries[..self.n as usize]
    }

    /// Image of the 1-based point `i`.
    pub fn image(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::PositionOutOfRange {
                position: i,
                n: self.len(),
            });
        }
        Ok(self.entries[i - 1] as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.entries()
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    fn same_len(&self, other: &Permutation) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            })
        }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.same_len(other)?;
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        let mut entries = [0u8; MAX_N];
        for (e, &o) in entries.iter_mut().zip(other.entries()) {
            *e = self.entries[o as usize - 1];
        }
        Permutation { n: self.n, entries }
    }

    pub fn inverse(&self) -> Permutation {
        let mut entries = [0u8; MAX_N];
        for (i, &v) in self.entries().iter().enumerate() {
            entries[v as usize - 1] = i as u8 + 1;
        }
        Permutation { n: self.n, entries }
    }

    /// Swaps the entries at positions `t.i()` and `t.j()`; equal to
    /// `self ∘ t.as_permutation(n)`.
    pub fn apply_transposition(&self, t: Transposition) -> Result<Permutation> {
        if t.j() > self.len() {
            return Err(Error::PositionOutOfRange {
                position: t.j(),
                n: self.len(),
            });
        }
        Ok(self.swap_unchecked(t.i() - 1, t.j() - 1))
    }

    #[inline]
    pub(crate) fn swap_unchecked(&self, a: usize, b: usize) -> Permutation {
        let mut out = *self;
        out.entries.swap(a, b);
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = 0u16;
        let mut count = 0;
        for start in 0..self.len() {
            if seen & (1 << start) != 0 {
                continue;
            }
            count += 1;
            let mut j = start;
            while seen & (1 << j) == 0 {
                seen |= 1 << j;
                j = self.entries[j] as usize - 1;
            }
        }
        count
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let mut seen = 0u16;
        let mut cycles = Vec::new();
        // Scanning starts in increasing order, so each cycle begins at its
        // minimum and the cycles come out sorted by leader.
        for start in 0..self.len() {
            if seen & (1 << start) != 0 {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while seen & (1 << j) == 0 {
                seen |= 1 << j;
                cycle.push(j as u8 + 1);
                j = self.entries[j] as usize - 1;
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    /// True when the permutation is a product of an even number of
    /// transpositions.
    pub fn is_even(&self) -> bool {
        (self.len() - self.cycle_count()) % 2 == 0
    }

    /// Lexicographic (Lehmer code) rank in `[0, n!)`.
    pub fn rank(&self) -> Rank {
        Rank {
            value: self.rank_value(),
            n: self.n,
        }
    }

    #[inline]
    pub(crate) fn rank_value(&self) -> u64 {
        let n = self.len();
        let mut unused: u16 = (1u16 << n) - 1;
        let mut value = 0u64;
        for i in 0..n {
            let v = self.entries[i] - 1;
            let smaller = (unused & ((1u16 << v) - 1)).count_ones() as u64;
            value += smaller * FACTORIALS[n - 1 - i];
            unused &= !(1u16 << v);
        }
        value
    }

    pub fn unrank(n: usize, value: u64) -> Result<Permutation> {
        check_len(n)?;
        if value >= FACTORIALS[n] {
            return Err(Error::RankOutOfRange { value, n });
        }
        Ok(Self::unrank_unchecked(n, value))
    }

    pub(crate) fn unrank_unchecked(n: usize, mut value: u64) -> Permutation {
        let mut unused: u16 = (1u16 << n) - 1;
        let mut entries = [0u8; MAX_N];
        for (i, e) in entries.iter_mut().enumerate().take(n) {
            let f = FACTORIALS[n - 1 - i];
            let mut digit = value / f;
            value %= f;
            let mut bits = unused;
            // select the digit-th remaining value
            while digit > 0 {
                bits &= bits - 1;
                digit -= 1;
            }
            let v = bits.trailing_zeros() as u8;
            unused &= !(1u16 << v);
            *e = v + 1;
        }
        Permutation { n: n as u8, entries }
    }

    /// Advances to the lexicographic successor; false at the last permutation.
    pub(crate) fn advance(&mut self) -> bool {
        let e = &mut self.entries[..self.n as usize];
        let Some(i) = (0..e.len().saturating_sub(1)).rev().find(|&i| e[i] < e[i + 1]) else {
            return false;
        };
        let j = (i + 1..e.len()).rev().find(|&j| e[j] > e[i]).unwrap();
        e.swap(i, j);
        e[i + 1..].reverse();
        true
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries().iter().map(u8::to_string).collect::<Vec<_>>().join(","))
    }
}

/// Parses space-separated one-line notation, e.g. `"1 3 2 5 6 4"`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u8>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad entry {tok:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        if entries.is_empty() {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        Permutation::new(&entries)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The exchange of positions `i < j` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    i: u8,
    j: u8,
}

impl Transposition {
    /// Accepts the two positions in either order.
    pub fn new(i: usize, j: usize) -> Result<Self> {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        if lo == 0 || lo == hi || hi > MAX_N {
            return Err(Error::InvalidTransposition { i, j });
        }
        Ok(Transposition {
            i: lo as u8,
            j: hi as u8,
        })
    }

    pub fn i(&self) -> usize {
        self.i as usize
    }

    pub fn j(&self) -> usize {
        self.j as usize
    }

    pub fn is_adjacent(&self) -> bool {
        self.j == self.i + 1
    }

    /// The 2-cycle `(i j)` as a permutation of length `n`.
    pub fn as_permutation(&self, n: usize) -> Result<Permutation> {
        Permutation::identity(n)?.apply_transposition(*self)
    }
}

/// Canonical cycle form: every cycle starts at its minimum, cycles are sorted
/// by leader, and fixed points are kept as 1-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    cycles: Vec<Vec<u8>>,
}

impl CycleDecomposition {
    pub fn cycles(&self) -> &[Vec<u8>] {
        &self.cycles
    }

    pub fn count(&self) -> usize {
        self.cycles.len()
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let body: Vec<String> = c.iter().map(u8::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank {
    value: u64,
    n: u8,
}

impl Rank {
    pub fn new(n: usize, value: u64) -> Result<Self> {
        check_len(n)?;
        if value >= FACTORIALS[n] {
            return Err(Error::RankOutOfRange { value, n });
        }
        Ok(Rank {
            value,
            n: n as u8,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn unrank(&self) -> Permutation {
        Permutation::unrank_unchecked(self.n(), self.value)
    }
}

/// Iterator over a contiguous rank interval of `S_n`, in rank order.
#[derive(Clone, Debug)]
pub struct Enumerate {
    next: Permutation,
    remaining: u64,
}

impl Iterator for Enumerate {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let current = self.next;
        self.remaining -= 1;
        if self.remaining > 0 {
            self.next.advance();
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Enumerate {}

/// Every element of `S_n`, identity first.
pub fn enumerate(n: usize) -> Result<Enumerate> {
    check_len(n)?;
    enumerate_range(n, 0..FACTORIALS[n])
}

/// The permutations whose ranks fall in `ranks`. Workers can split `[0, n!)`
/// into disjoint intervals and enumerate each independently.
pub fn enumerate_range(n: usize, ranks: Range<u64>) -> Result<Enumerate> {
    check_len(n)?;
    let total = FACTORIALS[n];
    if ranks.end > total || ranks.start > ranks.end {
        return Err(Error::OutOfRange(format!(
            "rank interval {}..{} not within 0..{total}",
            ranks.start, ranks.end
        )));
    }
    let start = if ranks.start < total { ranks.start } else { 0 };
    Ok(Enumerate {
        next: Permutation::unrank_unchecked(n, start),
        remaining: ranks.end - ranks.start,
    })
}
