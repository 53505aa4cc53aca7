//! The algebra of hole-terminated partial words.
//!
//! A [`PartialWord`] is a finite word over the alphabet followed by exactly
//! one hole symbol `?`. Composition substitutes the right operand's symbols
//! into successive copies of the left operand's body:
//!
//! ```text
//! U ∘ V = (u_1…u_{r-1} v_1)(u_1…u_{r-1} v_2)…(u_1…u_{r-1} ?)
//! ```
//!
//! The operation is associative (not commutative) with the bare hole `?` as
//! identity, and iterating any partial word of length >= 2 converges to an
//! infinite limit word that [`PartialWord::expand`] materializes prefix by
//! prefix without ever building the iterates themselves.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The hole symbol used in all text interfaces.
pub const HOLE: char = '?';
/// Accepted on input as a trailing alias for the hole (shell ergonomics);
/// always normalized to `?` on output and never a legal letter.
pub const HOLE_ALIAS: char = '.';

/// One alphabet symbol: printable, non-whitespace, never `?` or `.`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(char);

impl Letter {
    pub fn new(symbol: char) -> Result<Self, Error> {
        if symbol == HOLE
            || symbol == HOLE_ALIAS
            || symbol.is_whitespace()
            || symbol.is_control()
        {
            return Err(Error::InvalidLetter(symbol));
        }
        Ok(Letter(symbol))
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite hole-free word over the alphabet. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// This word followed by the hole, as a partial word.
    pub fn with_hole(&self) -> PartialWord {
        PartialWord { body: self.clone() }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.chars().map(Letter::new).collect::<Result<Vec<_>, _>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.0 {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A finite word terminated by exactly one hole: `body` then `?`.
///
/// The length of a partial word counts the hole, so the identity `?` has
/// length 1 and `aab?` has length 4.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialWord {
    body: Word,
}

// A partial word always contains at least the hole, so `is_empty` would be
// a constant `false`.
#[allow(clippy::len_without_is_empty)]
impl PartialWord {
    pub fn new(body: Word) -> Self {
        PartialWord { body }
    }

    /// The bare hole `?`: the identity of composition.
    pub fn identity() -> Self {
        PartialWord { body: Word::empty() }
    }

    pub fn body(&self) -> &Word {
        &self.body
    }

    /// Total length including the hole (the r in `u_1…u_{r-1}?`).
    pub fn len(&self) -> usize {
        self.body.len() + 1
    }

    pub fn is_identity(&self) -> bool {
        self.body.is_empty()
    }

    /// Composition `self ∘ other`: each symbol of `other` (hole last) is
    /// appended to a fresh copy of `self`'s body.
    ///
    /// The result has length `self.len() * other.len()`.
    pub fn compose(&self, other: &PartialWord) -> PartialWord {
        let mut body = Vec::with_capacity(self.len() * other.len() - 1);
        for &letter in other.body.letters() {
            body.extend_from_slice(self.body.letters());
            body.push(letter);
        }
        body.extend_from_slice(self.body.letters());
        PartialWord { body: Word(body) }
    }

    /// The n-th iterate `U ∘ U ∘ … ∘ U` (n factors, n >= 1).
    ///
    /// Fails if the result length `|U|^n` does not fit the address space;
    /// lengths are never silently truncated.
    pub fn iterate(&self, n: u32) -> Result<PartialWord, Error> {
        assert!(n >= 1, "iterate requires n >= 1");
        self.len()
            .checked_pow(n)
            .ok_or(Error::IterateOverflow { base: self.len(), n })?;
        let mut result = self.clone();
        for _ in 1..n {
            result = result.compose(self);
        }
        Ok(result)
    }

    /// The first `count` letters of the limit word `U^(∞)`.
    ///
    /// Position j carries `body[j mod r]` when r does not divide j and
    /// repeats position j/r otherwise, so the prefix is produced in O(count)
    /// without materializing any iterate. Requires `|U| >= 2`.
    pub fn expand(&self, count: usize) -> Result<Word, Error> {
        if self.is_identity() {
            return Err(Error::ExpandBareHole);
        }
        let r = self.len();
        let body = self.body.letters();
        let mut letters = Vec::with_capacity(count);
        for position in 1..=count {
            let letter = if position % r == 0 {
                letters[position / r - 1]
            } else {
                body[position % r - 1]
            };
            letters.push(letter);
        }
        Ok(Word(letters))
    }

    /// Infinite stream of the limit word `U^(∞)`.
    ///
    /// Keeps every emitted letter (positions divisible by r repeat earlier
    /// ones), so pulling n letters holds O(n) memory.
    pub fn limit_iter(&self) -> Result<LimitIter, Error> {
        if self.is_identity() {
            return Err(Error::ExpandBareHole);
        }
        Ok(LimitIter { word: self.clone(), emitted: Vec::new() })
    }

    /// Lazy composition `self ∘ source` with an infinite letter stream.
    ///
    /// Pulls one source letter at the start of each block of `self.len()`
    /// output letters, so n outputs consume exactly ceil(n / len) source
    /// letters. A dried-up source is reported as an error, never as silent
    /// truncation.
    pub fn compose_stream<I>(&self, source: I) -> ComposeStream<I::IntoIter>
    where
        I: IntoIterator<Item = Letter>,
    {
        ComposeStream {
            body: self.body.clone(),
            source: source.into_iter(),
            offset: 0,
            pending: None,
            failed: false,
        }
    }
}

impl FromStr for PartialWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut chars: Vec<char> = s.chars().collect();
        match chars.pop() {
            Some(HOLE) | Some(HOLE_ALIAS) => {}
            _ => return Err(Error::MissingHole),
        }
        let body = chars
            .into_iter()
            .map(|c| if c == HOLE { Err(Error::EmbeddedHole) } else { Letter::new(c) })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PartialWord { body: Word(body) })
    }
}

impl fmt::Display for PartialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{HOLE}", self.body)
    }
}

/// Infinite iterator over the limit word of a partial word. See
/// [`PartialWord::limit_iter`].
#[derive(Debug, Clone)]
pub struct LimitIter {
    word: PartialWord,
    emitted: Vec<Letter>,
}

impl Iterator for LimitIter {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        let position = self.emitted.len() + 1;
        let r = self.word.len();
        let letter = if position % r == 0 {
            self.emitted[position / r - 1]
        } else {
            self.word.body.letters()[position % r - 1]
        };
        self.emitted.push(letter);
        Some(letter)
    }
}

/// Iterator produced by [`PartialWord::compose_stream`].
#[derive(Debug)]
pub struct ComposeStream<I> {
    body: Word,
    source: I,
    offset: usize,
    pending: Option<Letter>,
    failed: bool,
}

impl<I: Iterator<Item = Letter>> Iterator for ComposeStream<I> {
    type Item = Result<Letter, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        if self.offset == 0 {
            match self.source.next() {
                Some(letter) => self.pending = Some(letter),
                None => {
                    self.failed = true;
                    return Some(Err(Error::SourceExhausted));
                }
            }
        }
        let out = if self.offset < self.body.len() {
            self.body.letters()[self.offset]
        } else {
            self.pending.take().expect("block letter pulled at block start")
        };
        self.offset = (self.offset + 1) % (self.body.len() + 1);
        Some(Ok(out))
    }
}
