//! Permutation pattern containment and the machinery around it: zero-one
//! matrices with interval-minor containment, greedy multi-thread scanning,
//! shift-based self-similarity statistics, and a structure-vs-randomness
//! decomposition of permutations with an explicit forest encoding.
//!
//! All randomized entry points are deterministic functions of an explicit
//! 64-bit seed; see [`rng`] for the stream-splitting rule.
//!
//! ```
//! use permscan::{Permutation, ZeroOneMatrix};
//! use permscan::scanning::scan_thread;
//!
//! // 25314 contains the pattern 321 at positions 2, 3, 4.
//! let host: Permutation = "2,5,3,1,4".parse()?;
//! let witness = host.contains_pattern(&"3,2,1".parse()?)?.unwrap();
//! assert_eq!(witness.indices, vec![2, 3, 4]);
//!
//! // A thread scan finds patterns inside a random 0-1 matrix the same way.
//! let matrix = ZeroOneMatrix::random(8, 40, 7);
//! let trace = scan_thread(&matrix, &Permutation::identity(3), 2, None)?;
//! assert!(trace.success);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod matrix;
pub mod perm;
pub mod quasirandom;
pub mod rng;
pub mod scanning;
pub mod stats;
pub mod structure;

pub use matrix::{CoupledSample, ZeroOneMatrix};
pub use perm::{ContainmentWitness, Permutation};
pub use quasirandom::{PartialMap, Ratio, ShiftWitness};
pub use scanning::{ScanReport, ThreadTrace};
pub use structure::{Decomposition, Encoding, ShiftGraph, ShiftSystem};
