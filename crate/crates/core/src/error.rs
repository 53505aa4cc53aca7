use crate::lattice::Rejection;

/// Everything that can go wrong across the crate.
///
/// Every message names the invariant or hypothesis that was violated, so CLI
/// diagnostics can surface them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid letter {0:?}: letters must be printable, non-whitespace and distinct from '?' and '.'")]
    InvalidLetter(char),
    #[error("a partial word must be non-empty and end with exactly one hole ('?')")]
    MissingHole,
    #[error("the hole symbol '?' may only appear as the final symbol of a partial word")]
    EmbeddedHole,
    #[error("iterating a word of length {base} {n} times overflows the addressable length range")]
    IterateOverflow { base: usize, n: u32 },
    #[error("the bare hole \"?\" has no limit word to expand")]
    ExpandBareHole,
    #[error("composition source stream was exhausted; sources are contractually infinite")]
    SourceExhausted,

    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("generator length must be m - 1 = {expected}, got {found}")]
    GeneratorLength { expected: u64, found: usize },
    #[error("sequence indices are 1-based; index 0 is outside the domain")]
    IndexZero,
    #[error("prefix of length {len} is shorter than the modulus m = {m}")]
    PrefixTooShort { len: usize, m: u64 },
    #[error("index arithmetic exceeded the 64-bit unsigned range")]
    IndexOverflow,

    #[error("the moduli differ ({0} vs {1}); both fixed points must share one modulus")]
    ModulusMismatch(u64, u64),
    #[error("hypothesis m \u{2224} q violated: m = {m} divides q = {q}")]
    ModulusDividesQ { q: u64, m: u64 },
    #[error("hypothesis q \u{2224} m violated: q = {q} divides m = {m}")]
    QDividesModulus { q: u64, m: u64 },
    #[error("q = {q} divides no power of m = {m}")]
    QNotLatticeAdic { q: u64, m: u64 },
    #[error("the fixed point is a constant word")]
    ConstantWord,
    #[error("X({q}N) is not a modulo-{m} Toeplitz fixed point: {reason}")]
    SubsequenceNotMember { q: u64, m: u64, reason: Rejection },
    #[error("internal inconsistency: the Q/T/D factors do not reproduce the generator word")]
    QtdIdentityMismatch,

    #[error("oracle depth {depth} is below the minimum m\u{00b2} = {min}")]
    DepthTooSmall { depth: u64, min: u64 },
}
