//! Permutation codes under the Cayley and Kendall τ metrics.
//!
//! * [`perm`]: permutations of `{1..n}`, cycles, Lehmer ranks, enumeration.
//! * [`metrics`]: closed-form distances and a breadth-first oracle.
//! * [`balls`]: ball sizes, Gilbert–Varshamov and sphere-packing bounds,
//!   exactly known code sizes.
//! * [`auxgraph`]: degree and triangle statistics of the graphs whose
//!   independent sets are codes, and the independence bounds built on them.
//! * [`codes`]: sieve, randomized and local-search constructors, the parity
//!   code, verification and the code file format.
//!
//! Lengths are capped at [`MAX_N`] = 12 so that ranks and ball sizes stay
//! exact in 64-bit integers.

pub mod auxgraph;
pub mod balls;
pub mod codes;
pub mod error;
pub mod metrics;
pub mod perm;
pub mod selftest;

pub use auxgraph::{AuxGraphSpec, CensusMode, GraphStats};
pub use balls::{BallSize, BoundsRow};
pub use codes::{Code, Method, MinDistance, VerificationReport, VerifyMode};
pub use error::{Error, FormatProblem, Result};
pub use metrics::{BfsOutcome, GeneratorSet, MetricKind};
pub use num_rational::Ratio;
pub use perm::{factorial, CycleDecomposition, Permutation, Rank, Transposition, MAX_N};
