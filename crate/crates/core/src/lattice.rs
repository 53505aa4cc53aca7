//! Lattice subsequences of Toeplitz fixed points.
//!
//! For X a modulo-m Toeplitz fixed point and q >= 1, the q-subsequence
//! X(qN) = X(q), X(2q), … is again a modulo-m Toeplitz fixed point only for
//! very particular q. Membership depends solely on the m-adic part p of the
//! canonical factorization q = m^k · h · p (gcd(h, m) = 1, every prime of p
//! divides m, m not dividing p):
//!
//! * p = 1: always a member.
//! * p not dividing m²: never a member.
//! * p dividing m: member iff X(1)…X(m) is almost p-periodic.
//! * p dividing m² only: member iff X(1)…X(m²) is almost p-periodic.
//!
//! Members come with their generator word Y(j) = X(qj), the U∘V split of the
//! m^s-prefix, and — when q divides neither m nor vice versa — the rigid
//! Q∘T∘D shape of the generator, whose reversal D∘T∘Q generates X(qN).

use serde::Serialize;
use std::fmt;

use crate::error::Error;
use crate::holeword::{Letter, PartialWord, Word};
use crate::toeplitz::{is_almost_periodic, ToeplitzSpec};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The canonical factorization q = m^k · h · p with gcd(h, m) = 1 and p a
/// product of primes dividing m that m itself does not divide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QReduction {
    /// The original q.
    pub q: u64,
    /// Exponent of m stripped from q.
    pub k: u32,
    /// The part of q coprime to m.
    pub h: u64,
    /// The m-adic remainder; membership of X(qN) depends only on this.
    pub p: u64,
}

/// Factors q as m^k · h · p without factoring anything into primes: strip
/// whole powers of m, then peel the m-adic part off by repeated gcd.
pub fn reduce_q(q: u64, m: u64) -> QReduction {
    assert!(q >= 1, "q must be positive");
    assert!(m >= 2, "modulus must be at least 2");
    let mut k = 0;
    let mut rest = q;
    while rest % m == 0 {
        rest /= m;
        k += 1;
    }
    let mut h = rest;
    loop {
        let g = gcd(h, m);
        if g == 1 {
            break;
        }
        h /= g;
    }
    QReduction { q, k, h, p: rest / h }
}

/// Why a q-subsequence is not a modulo-m Toeplitz fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// The m-adic part p of q divides no power of m below m³, i.e. p ∤ m².
    PNotDividingMSquared,
    /// The required prefix is not almost p-periodic; `witness` is the
    /// smallest violating index within the first `checked_prefix_len`
    /// letters.
    AlmostPeriodicityFails { checked_prefix_len: u64, witness: u64 },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::PNotDividingMSquared => write!(f, "its reduced part p does not divide m\u{00b2}"),
            Rejection::AlmostPeriodicityFails { checked_prefix_len, witness } => write!(
                f,
                "X(1)\u{2026}X({checked_prefix_len}) is not almost p-periodic (witness j = {witness})"
            ),
        }
    }
}

/// Membership verdict with its evidence: the generator word on success, a
/// concrete rejection witness otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Member { generator: Word },
    NotMember { reason: Rejection },
}

/// The answer to "is X(qN) a modulo-m Toeplitz fixed point?".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub reduction: QReduction,
    pub verdict: Verdict,
    /// Set when X is constant: membership is then immediate and the
    /// periodicity theorems were never consulted.
    pub constant_shortcut: bool,
}

impl Decision {
    pub fn is_member(&self) -> bool {
        matches!(self.verdict, Verdict::Member { .. })
    }

    pub fn generator(&self) -> Option<&Word> {
        match &self.verdict {
            Verdict::Member { generator } => Some(generator),
            Verdict::NotMember { .. } => None,
        }
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match &self.verdict {
            Verdict::Member { .. } => None,
            Verdict::NotMember { reason } => Some(reason),
        }
    }
}

/// Decides whether X(qN) is a modulo-m Toeplitz fixed point.
///
/// The generator of a member is always synthesized by random access at the
/// original q (not the reduced p): X(qN) and X(pN) share membership but not
/// necessarily letters.
pub fn decide(spec: &ToeplitzSpec, q: u64) -> Result<Decision, Error> {
    assert!(q >= 1, "q must be positive");
    let m = spec.modulus();
    let reduction = reduce_q(q, m);
    if spec.is_constant() {
        return Ok(Decision {
            reduction,
            verdict: Verdict::Member { generator: spec.generator().clone() },
            constant_shortcut: true,
        });
    }
    let p = reduction.p;
    if p == 1 {
        return member(spec, q, reduction);
    }
    let m_squared = m.checked_mul(m).ok_or(Error::IndexOverflow)?;
    if m_squared % p != 0 {
        return Ok(Decision {
            reduction,
            verdict: Verdict::NotMember { reason: Rejection::PNotDividingMSquared },
            constant_shortcut: false,
        });
    }
    // p | m allows the cheaper length-m check; otherwise p | m² forces the
    // full length-m² scan.
    let checked_len = if m % p == 0 { m } else { m_squared };
    let prefix = spec.fixed_prefix(checked_len as usize);
    match is_almost_periodic(&prefix, p).witness() {
        None => member(spec, q, reduction),
        Some(witness) => Ok(Decision {
            reduction,
            verdict: Verdict::NotMember {
                reason: Rejection::AlmostPeriodicityFails { checked_prefix_len: checked_len, witness },
            },
            constant_shortcut: false,
        }),
    }
}

fn member(spec: &ToeplitzSpec, q: u64, reduction: QReduction) -> Result<Decision, Error> {
    let m = spec.modulus();
    let mut letters = Vec::with_capacity((m - 1) as usize);
    for j in 1..m {
        let index = q.checked_mul(j).ok_or(Error::IndexOverflow)?;
        letters.push(spec.access(index)?);
    }
    Ok(Decision {
        reduction,
        verdict: Verdict::Member { generator: Word::new(letters) },
        constant_shortcut: false,
    })
}

/// Outcome of [`is_q_subsequence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsequenceCheck {
    Holds,
    /// X(qN) is not a modulo-m Toeplitz fixed point at all.
    NotLattice { reason: Rejection },
    /// X(qN) is one, but Y's generator disagrees at `index` (1-based):
    /// X(q · index) = `lattice` while Y(index) = `candidate`.
    GeneratorMismatch { index: u64, lattice: Letter, candidate: Letter },
}

impl SubsequenceCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SubsequenceCheck::Holds)
    }
}

/// Is Y the q-subsequence of X? True iff X(qN) is a modulo-m Toeplitz fixed
/// point and Y's generator matches it letter for letter.
pub fn is_q_subsequence(
    x: &ToeplitzSpec,
    y: &ToeplitzSpec,
    q: u64,
) -> Result<SubsequenceCheck, Error> {
    if x.modulus() != y.modulus() {
        return Err(Error::ModulusMismatch(x.modulus(), y.modulus()));
    }
    let decision = decide(x, q)?;
    match decision.verdict {
        Verdict::NotMember { reason } => Ok(SubsequenceCheck::NotLattice { reason }),
        Verdict::Member { generator } => {
            let pairs = generator.letters().iter().zip(y.generator().letters());
            for (i, (&lattice, &candidate)) in pairs.enumerate() {
                if lattice != candidate {
                    return Ok(SubsequenceCheck::GeneratorMismatch {
                        index: i as u64 + 1,
                        lattice,
                        candidate,
                    });
                }
            }
            Ok(SubsequenceCheck::Holds)
        }
    }
}

/// The two-factor split of the m^s-prefix of a member:
/// X(1)…X(m^s−1)? = U ∘ V with U = X(1)…X(q−1)? and
/// V = X(q) X(2q) … X(m^s−q)?. The subsequence itself is (V ∘ U)^(∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvSplit {
    /// U: the first q−1 letters of X, hole-terminated (length q).
    pub prefix: PartialWord,
    /// V: every q-th letter up to m^s − q, hole-terminated (length m^s / q).
    pub samples: PartialWord,
    /// The exponent with q | m^s used for the split.
    pub s: u32,
}

impl UvSplit {
    /// U ∘ V: reproduces the m^s-prefix of X.
    pub fn product(&self) -> PartialWord {
        self.prefix.compose(&self.samples)
    }

    /// V ∘ U: its limit word is X(qN).
    pub fn subsequence_root(&self) -> PartialWord {
        self.samples.compose(&self.prefix)
    }
}

/// Splits the m^s-prefix of a member as U ∘ V.
///
/// Requires m ∤ q, q | m^s and a Member verdict. q = 1 degenerates to
/// U = "?" and V = W? (with s = 1), under which every split identity holds.
pub fn split_uv(spec: &ToeplitzSpec, q: u64) -> Result<UvSplit, Error> {
    assert!(q >= 1, "q must be positive");
    let m = spec.modulus();
    if q == 1 {
        return Ok(UvSplit {
            prefix: PartialWord::identity(),
            samples: spec.generator().with_hole(),
            s: 1,
        });
    }
    if q % m == 0 {
        return Err(Error::ModulusDividesQ { q, m });
    }
    let reduction = reduce_q(q, m);
    if reduction.h != 1 {
        return Err(Error::QNotLatticeAdic { q, m });
    }
    let decision = decide(spec, q)?;
    if let Some(&reason) = decision.rejection() {
        return Err(Error::SubsequenceNotMember { q, m, reason });
    }
    let (s, power) = if m % q == 0 {
        (1, m)
    } else {
        (2, m.checked_mul(m).ok_or(Error::IndexOverflow)?)
    };
    let prefix = spec.fixed_prefix((q - 1) as usize).with_hole();
    let mut samples = Vec::with_capacity((power / q - 1) as usize);
    for j in 1..power / q {
        samples.push(spec.access(j * q)?);
    }
    Ok(UvSplit { prefix, samples: Word::new(samples).with_hole(), s })
}

/// The rigid shape forced on the generator when X(qN) is a member with
/// q ∤ m and m ∤ q: with d = gcd(m, q), q1 = q/d, m1 = m/d, t = d/q1 − 1
/// and a = X(1),
///
/// ```text
/// X(1)…X(m−1)? = (a^{q1−1}?) ∘ (X(q1)…X(t·q1)?) ∘ (a^{m1−1}?) = Q ∘ T ∘ D
/// ```
///
/// and X(qN) = (D ∘ T ∘ Q)^(∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QtdDecomposition {
    /// Q = a^{q1−1}?
    pub q_factor: PartialWord,
    /// T = X(q1) X(2·q1) … X(t·q1)?
    pub t_factor: PartialWord,
    /// D = a^{m1−1}?
    pub d_factor: PartialWord,
    pub d: u64,
    pub q1: u64,
    pub m1: u64,
    pub t: u64,
}

impl QtdDecomposition {
    /// Q ∘ T ∘ D: reproduces the generator word with its trailing hole.
    pub fn generator_product(&self) -> PartialWord {
        self.q_factor.compose(&self.t_factor.compose(&self.d_factor))
    }

    /// D ∘ T ∘ Q: its limit word is X(qN).
    pub fn subsequence_product(&self) -> PartialWord {
        self.d_factor.compose(&self.t_factor.compose(&self.q_factor))
    }
}

fn constant_partial(letter: Letter, count: u64) -> PartialWord {
    Word::new(vec![letter; count as usize]).with_hole()
}

/// Computes the Q ∘ T ∘ D decomposition of a member with q ∤ m and m ∤ q.
///
/// Each violated hypothesis (constant word, q | m, m | q, q dividing no
/// power of m, or a NotMember verdict) gets its own error value.
pub fn decompose_qtd(spec: &ToeplitzSpec, q: u64) -> Result<QtdDecomposition, Error> {
    assert!(q >= 1, "q must be positive");
    let m = spec.modulus();
    if spec.is_constant() {
        return Err(Error::ConstantWord);
    }
    if q % m == 0 {
        return Err(Error::ModulusDividesQ { q, m });
    }
    if m % q == 0 {
        return Err(Error::QDividesModulus { q, m });
    }
    let reduction = reduce_q(q, m);
    if reduction.h != 1 {
        return Err(Error::QNotLatticeAdic { q, m });
    }
    let decision = decide(spec, q)?;
    if let Some(&reason) = decision.rejection() {
        return Err(Error::SubsequenceNotMember { q, m, reason });
    }
    let d = gcd(m, q);
    let q1 = q / d;
    let m1 = m / d;
    // Membership forces q1 to be a proper factor of d; anything else would
    // contradict the decision procedure.
    if q1 >= d || d % q1 != 0 {
        return Err(Error::QtdIdentityMismatch);
    }
    let t = d / q1 - 1;
    let a = spec.access(1)?;
    let mut sampled = Vec::with_capacity(t as usize);
    for j in 1..=t {
        sampled.push(spec.access(j * q1)?);
    }
    let decomposition = QtdDecomposition {
        q_factor: constant_partial(a, q1 - 1),
        t_factor: Word::new(sampled).with_hole(),
        d_factor: constant_partial(a, m1 - 1),
        d,
        q1,
        m1,
        t,
    };
    if decomposition.generator_product() != spec.generator().with_hole() {
        return Err(Error::QtdIdentityMismatch);
    }
    Ok(decomposition)
}

/// The factor r = m^s / q (smallest s with q | m^s) satisfying
/// X = Y(rN) whenever Y = X(qN).
///
/// Errors if q has a prime factor that m lacks (no such s exists) or if m^s
/// escapes the 64-bit range before q divides it.
pub fn inverse_factor(q: u64, m: u64) -> Result<u64, Error> {
    assert!(q >= 1, "q must be positive");
    assert!(m >= 2, "modulus must be at least 2");
    if reduce_q(q, m).h != 1 {
        return Err(Error::QNotLatticeAdic { q, m });
    }
    let mut power: u128 = 1;
    while power % q as u128 != 0 {
        power = power.checked_mul(m as u128).ok_or(Error::IndexOverflow)?;
    }
    u64::try_from(power / q as u128).map_err(|_| Error::IndexOverflow)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut candidate = 2;
    while candidate * candidate <= n {
        if n % candidate == 0 {
            let mut exponent = 0;
            while n % candidate == 0 {
                n /= candidate;
                exponent += 1;
            }
            factors.push((candidate, exponent));
        }
        candidate += if candidate == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// The divisors of m² that m does not divide, ascending. Every lattice class
/// q = m^k · h · p reduces to exactly one of them.
pub fn lattice_candidates(m: u64) -> Result<Vec<u64>, Error> {
    m.checked_mul(m).ok_or(Error::IndexOverflow)?;
    let mut divisors = vec![1u64];
    for (prime, exponent) in factorize(m) {
        let mut extended = Vec::with_capacity(divisors.len() * (2 * exponent as usize + 1));
        for &d in &divisors {
            let mut value = d;
            extended.push(value);
            for _ in 0..2 * exponent {
                value *= prime;
                extended.push(value);
            }
        }
        divisors = extended;
    }
    divisors.sort_unstable();
    divisors.retain(|&d| d % m != 0);
    Ok(divisors)
}

/// Classifies every candidate class p of m²: the Member subset is the
/// complete list of lattice subsequences of X up to coprime factors and
/// powers of m.
///
/// Candidates are evaluated in parallel when the `parallel` feature is on;
/// the output order is always ascending in p.
pub fn enumerate(spec: &ToeplitzSpec) -> Result<Vec<(u64, Decision)>, Error> {
    let candidates = lattice_candidates(spec.modulus())?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        candidates.par_iter().map(|&p| decide(spec, p).map(|d| (p, d))).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        candidates.iter().map(|&p| decide(spec, p).map(|d| (p, d))).collect()
    }
}

// ---------------------------------------------------------------------------
// Machine-readable documents (stable wire schema)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ReductionDocument {
    pub k: u32,
    pub h: u64,
    pub p: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessDocument {
    pub checked_prefix_length: u64,
    pub index: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionDocument {
    #[serde(rename = "Q")]
    pub q_factor: String,
    #[serde(rename = "T")]
    pub t_factor: String,
    #[serde(rename = "D")]
    pub d_factor: String,
    pub d: u64,
    pub q1: u64,
    pub m1: u64,
    pub t: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UvDocument {
    #[serde(rename = "U")]
    pub prefix: String,
    #[serde(rename = "V")]
    pub samples: String,
    pub s: u32,
}

/// Serialized form of a [`Decision`]; the field names are the wire contract.
/// The optional `decomposition` and `uv` blocks are attached when a caller
/// has computed them.
#[derive(Debug, Clone, Serialize)]
pub struct DecisionDocument {
    pub verdict: &'static str,
    pub reduction: ReductionDocument,
    pub reason: Option<&'static str>,
    pub witness: Option<WitnessDocument>,
    pub generator: Option<String>,
    pub constant_shortcut: bool,
    pub decomposition: Option<DecompositionDocument>,
    pub uv: Option<UvDocument>,
}

impl From<&Decision> for DecisionDocument {
    fn from(decision: &Decision) -> Self {
        let (verdict, reason, witness, generator) = match &decision.verdict {
            Verdict::Member { generator } => ("Member", None, None, Some(generator.to_string())),
            Verdict::NotMember { reason } => match reason {
                Rejection::PNotDividingMSquared => {
                    ("NotMember", Some("PNotDividingMSquared"), None, None)
                }
                Rejection::AlmostPeriodicityFails { checked_prefix_len, witness } => (
                    "NotMember",
                    Some("AlmostPeriodicityFails"),
                    Some(WitnessDocument {
                        checked_prefix_length: *checked_prefix_len,
                        index: *witness,
                    }),
                    None,
                ),
            },
        };
        DecisionDocument {
            verdict,
            reduction: ReductionDocument {
                k: decision.reduction.k,
                h: decision.reduction.h,
                p: decision.reduction.p,
            },
            reason,
            witness,
            generator,
            constant_shortcut: decision.constant_shortcut,
            decomposition: None,
            uv: None,
        }
    }
}

impl DecisionDocument {
    pub fn with_uv(mut self, split: &UvSplit) -> Self {
        self.uv = Some(UvDocument {
            prefix: split.prefix.to_string(),
            samples: split.samples.to_string(),
            s: split.s,
        });
        self
    }

    pub fn with_decomposition(mut self, qtd: &QtdDecomposition) -> Self {
        self.decomposition = Some(DecompositionDocument {
            q_factor: qtd.q_factor.to_string(),
            t_factor: qtd.t_factor.to_string(),
            d_factor: qtd.d_factor.to_string(),
            d: qtd.d,
            q1: qtd.q1,
            m1: qtd.m1,
            t: qtd.t,
        });
        self
    }
}
