//! Modulo-m Toeplitz fixed points.
//!
//! A [`ToeplitzSpec`] is the pair (m, W) with |W| = m - 1; it determines the
//! infinite fixed point X of the substitution a -> Wa. The sequence obeys
//! X(mj) = X(j) and X(j) = w_{j mod m} whenever m does not divide j, which
//! yields O(count) streaming prefix generation and O(log n) random access.

use std::fmt;

use crate::error::Error;
use crate::holeword::{Letter, Word};

/// The pair (m, W) defining a modulo-m Toeplitz fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToeplitzSpec {
    m: u64,
    generator: Word,
}

impl ToeplitzSpec {
    pub fn new(m: u64, generator: Word) -> Result<Self, Error> {
        if m < 2 {
            return Err(Error::ModulusTooSmall(m));
        }
        if generator.len() as u64 != m - 1 {
            return Err(Error::GeneratorLength { expected: m - 1, found: generator.len() });
        }
        Ok(ToeplitzSpec { m, generator })
    }

    pub fn parse(m: u64, generator: &str) -> Result<Self, Error> {
        Self::new(m, generator.parse()?)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn generator(&self) -> &Word {
        &self.generator
    }

    /// True iff every generator letter equals the first, i.e. the fixed
    /// point is the constant word. The decision theorems exclude this case,
    /// so callers gate on it.
    pub fn is_constant(&self) -> bool {
        let letters = self.generator.letters();
        letters.iter().all(|&l| l == letters[0])
    }

    /// The letter X(n), n >= 1, in O(log_m n) arithmetic operations: strip
    /// factors of m (X(mj) = X(j)), then read the generator directly.
    pub fn access(&self, index: u64) -> Result<Letter, Error> {
        if index == 0 {
            return Err(Error::IndexZero);
        }
        let mut n = index;
        while n % self.m == 0 {
            n /= self.m;
        }
        Ok(self.generator.letters()[(n % self.m) as usize - 1])
    }

    /// The prefix X(1)…X(count).
    ///
    /// Positions not divisible by m come straight from the generator;
    /// positions mj repeat the already-emitted position j, so the whole
    /// prefix costs O(count).
    pub fn fixed_prefix(&self, count: usize) -> Word {
        let generator = self.generator.letters();
        let mut letters: Vec<Letter> = Vec::with_capacity(count);
        for position in 1..=count as u64 {
            let letter = if position % self.m == 0 {
                letters[(position / self.m) as usize - 1]
            } else {
                generator[(position % self.m) as usize - 1]
            };
            letters.push(letter);
        }
        Word::new(letters)
    }

    /// Infinite stream of X(1), X(2), …; single-consumer, O(n) memory after
    /// n letters.
    pub fn prefix_iter(&self) -> PrefixIter<'_> {
        PrefixIter::new(self)
    }
}

impl fmt::Display for ToeplitzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m = {}, W = {})", self.m, self.generator)
    }
}

/// Infinite iterator over the letters of a fixed point.
#[derive(Debug, Clone)]
pub struct PrefixIter<'a> {
    generator: &'a [Letter],
    m: u64,
    emitted: Vec<Letter>,
}

impl<'a> PrefixIter<'a> {
    fn new(spec: &'a ToeplitzSpec) -> Self {
        PrefixIter { generator: spec.generator.letters(), m: spec.m, emitted: Vec::new() }
    }
}

impl Iterator for PrefixIter<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let position = self.emitted.len() as u64 + 1;
        let letter = if position % self.m == 0 {
            self.emitted[(position / self.m) as usize - 1]
        } else {
            self.generator[(position % self.m) as usize - 1]
        };
        self.emitted.push(letter);
        Some(letter)
    }
}

/// Outcome of an almost-periodicity scan; `witness` is the smallest index j
/// with q not dividing j and word[j] != word[j + q].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityReport {
    witness: Option<u64>,
}

impl PeriodicityReport {
    pub fn is_periodic(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<u64> {
        self.witness
    }
}

/// Checks whether `word` is almost q-periodic: w_j = w_{j+q} for every j
/// with q not dividing j and j + q <= |word|.
///
/// For q >= |word| the condition is vacuously true.
pub fn is_almost_periodic(word: &Word, q: u64) -> PeriodicityReport {
    assert!(q >= 2, "almost periodicity is defined for q >= 2");
    let letters = word.letters();
    let len = letters.len() as u64;
    let mut j = 1;
    while j + q <= len {
        if j % q != 0 && letters[j as usize - 1] != letters[(j + q) as usize - 1] {
            return PeriodicityReport { witness: Some(j) };
        }
        j += 1;
    }
    PeriodicityReport { witness: None }
}

/// Which of the two fixed-point membership conditions a prefix violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipCondition {
    /// X(mj) = X(j) for every j.
    ScaleInvariance,
    /// X(j) = X(j + m) whenever m does not divide j.
    AlmostPeriodicity,
}

impl fmt::Display for MembershipCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipCondition::ScaleInvariance => write!(f, "X(mj) = X(j)"),
            MembershipCondition::AlmostPeriodicity => write!(f, "X(j) = X(j+m) for m \u{2224} j"),
        }
    }
}

/// Verdict of [`check_prefix_conditions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixCheck {
    Pass,
    Fail { condition: MembershipCondition, witness: u64 },
}

impl PrefixCheck {
    pub fn is_pass(&self) -> bool {
        matches!(self, PrefixCheck::Pass)
    }
}

/// Verifies both membership conditions on a finite prefix: X(mj) = X(j) for
/// every mj within range, and X(j) = X(j + m) for every m-indivisible j with
/// j + m within range. Reports the condition and smallest witness on failure.
pub fn check_prefix_conditions(word: &Word, m: u64) -> Result<PrefixCheck, Error> {
    assert!(m >= 2, "membership conditions are defined for m >= 2");
    let letters = word.letters();
    let len = letters.len() as u64;
    if len < m {
        return Err(Error::PrefixTooShort { len: letters.len(), m });
    }
    for j in 1..=len {
        if let Some(mj) = j.checked_mul(m) {
            if mj <= len && letters[mj as usize - 1] != letters[j as usize - 1] {
                return Ok(PrefixCheck::Fail {
                    condition: MembershipCondition::ScaleInvariance,
                    witness: j,
                });
            }
        }
        if j % m != 0 && j + m <= len && letters[j as usize - 1] != letters[(j + m) as usize - 1] {
            return Ok(PrefixCheck::Fail {
                condition: MembershipCondition::AlmostPeriodicity,
                witness: j,
            });
        }
    }
    Ok(PrefixCheck::Pass)
}
