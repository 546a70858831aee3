//! Exact spectral analysis of symmetric Boolean functions.
//!
//! A symmetric function f: {0,1}^n -> {-1,+1} is determined by its value on
//! each Hamming level, so its Fourier transform collapses to one coefficient
//! per level. This crate computes those level spectra with exact rational
//! arithmetic, derives structure parameters (how far f is from a constant or
//! parity pattern near the middle levels), evaluates upper and lower bounds on
//! the spectral norm, builds pruned parity decision trees certifying the norm,
//! and solves the approximate-spectral-norm linear program with an exact
//! rational simplex.
//!
//! Entry points:
//! - [`function::SymmetricFunction`]: the level-value representation.
//! - [`spectrum`]: level spectra, brute-force oracle, norms, entropies.
//! - [`structure`]: pattern-fit window parameters and the level-weighted
//!   quadratic functional.
//! - [`bounds`]: entropy bounds, norm bounds, noise-damping inequalities.
//! - [`pdt`]: pruned parity decision trees and norm certificates.
//! - [`lp`]: the approximate-norm linear program and exact simplex.
//! - [`analysis`], [`sweep`], [`verify`], [`dsl`]: the CLI-facing layer.

pub mod analysis;
pub mod bounds;
pub mod dsl;
pub mod error;
pub mod exact;
pub mod function;
pub mod lp;
pub mod pdt;
pub mod spectrum;
pub mod structure;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Exact;
pub use function::SymmetricFunction;

/// Default level count above which analysis switches from exact rational
/// reporting to the float path. Overridable via `SYMSPEC_EXACT_LIMIT`.
pub const DEFAULT_EXACT_LIMIT: usize = 64;

/// Default input-size cap for the brute-force truth-table oracle.
pub const DEFAULT_ORACLE_CAP: usize = 20;

/// Trees are materialized node-by-node up to this n; above it they stay
/// virtual and counting uses the closed form.
pub const PDT_MATERIALIZE_LIMIT: usize = 20;
