//! Modulo-m Toeplitz fixed points and their lattice subsequences.
//!
//! The substitution a -> Wa over a word W of length m − 1 has a unique
//! infinite fixed point X. This crate generates X lazily, indexes it in
//! O(log n), and decides for any q >= 1 whether the subsequence
//! X(qN) = X(q), X(2q), … is itself such a fixed point — returning the
//! generator word and the structural decompositions that come with
//! membership, or a concrete finite witness with a rejection. A brute-force
//! oracle cross-validates every verdict without ever touching the decision
//! procedure.
//!
//! * [`holeword`] — hole-terminated partial words and their composition
//!   algebra (associative, with `?` as identity).
//! * [`toeplitz`] — fixed-point specs, prefix streaming, random access and
//!   the prefix membership conditions.
//! * [`lattice`] — the q-reduction, the decision procedure, generator
//!   synthesis, the U∘V split and the Q∘T∘D decomposition.
//! * [`oracle`] — brute-force extraction, cross-checking and corpus sweeps
//!   (data-parallel when the default `parallel` feature is enabled).

pub mod error;
pub mod holeword;
pub mod lattice;
pub mod oracle;
pub mod toeplitz;

pub use error::Error;
pub use holeword::{Letter, PartialWord, Word};
pub use lattice::{decide, Decision, QReduction, Verdict};
pub use oracle::{brute_force_decide, cross_check};
pub use toeplitz::ToeplitzSpec;
