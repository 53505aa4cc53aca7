//! Theorem-independent brute-force verification.
//!
//! The oracle never consults the decision procedure: it extracts the
//! q-subsequence letter by letter, regenerates a fixed point from the
//! extracted generator and compares the two to a finite depth. Any genuine
//! non-member must disagree with its own regeneration at some finite index,
//! so a `RejectedAt` is conclusive while `ConsistentUpTo` is bounded
//! evidence, never a proof.

use crate::error::Error;
use crate::holeword::Word;
use crate::lattice::{inverse_factor, reduce_q, Decision, DecisionDocument, Verdict};
use crate::toeplitz::ToeplitzSpec;

/// Depth used when a caller does not pick one.
///
/// Four substitution levels (m⁴) with a floor of 4096 cover every rejection
/// except one family: when the m-adic part p of q divides a high power of m
/// only, X(qN) can impersonate another fixed point all the way out to
/// (m^s/p)·(m−1), where s is the smallest exponent with p | m^s — the first
/// honest letter X(j) only reappears at index (m^s/p)·j of the subsequence.
/// The measured worst case over the two-letter corpus (m <= 8, q <= m³) is
/// exactly that bound, so the default adds the rung m·(m^s/p) on top.
pub fn default_depth(m: u64, q: u64) -> u64 {
    let base = m.checked_pow(4).unwrap_or(u64::MAX).max(4096);
    let adic = inverse_factor(reduce_q(q, m).p, m).unwrap_or(0).saturating_mul(m);
    base.max(adic)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    /// The extracted subsequence matched its own regeneration at every index
    /// up to the depth. Bounded evidence of membership, not a proof.
    ConsistentUpTo(u64),
    /// Smallest index where the extracted subsequence differs from the fixed
    /// point generated by its own first m−1 letters. Conclusive rejection.
    RejectedAt(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub outcome: OracleOutcome,
    /// Y(1)…Y(m−1) with Y(j) = X(qj).
    pub extracted_generator: Word,
    pub compared_depth: u64,
}

impl OracleVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self.outcome, OracleOutcome::ConsistentUpTo(_))
    }

    pub fn rejected_at(&self) -> Option<u64> {
        match self.outcome {
            OracleOutcome::RejectedAt(index) => Some(index),
            OracleOutcome::ConsistentUpTo(_) => None,
        }
    }
}

/// Extracts Y(j) = X(qj) for j <= depth and compares Y against the fixed
/// point generated by Y(1)…Y(m−1).
///
/// If X(qN) is a modulo-m Toeplitz fixed point at all, its generator must be
/// exactly those m−1 letters, so any failure shows up as a concrete mismatch.
pub fn brute_force_decide(
    spec: &ToeplitzSpec,
    q: u64,
    depth: u64,
) -> Result<OracleVerdict, Error> {
    assert!(q >= 1, "q must be positive");
    let m = spec.modulus();
    let min_depth = m.checked_mul(m).ok_or(Error::IndexOverflow)?;
    if depth < min_depth {
        return Err(Error::DepthTooSmall { depth, min: min_depth });
    }
    q.checked_mul(depth).ok_or(Error::IndexOverflow)?;

    let extracted: Word =
        (1..=depth).map(|j| spec.access(q * j)).collect::<Result<_, _>>()?;
    let generator = Word::new(extracted.letters()[..(m - 1) as usize].to_vec());
    let regenerated = ToeplitzSpec::new(m, generator.clone())?.fixed_prefix(depth as usize);

    let disagreement = extracted
        .letters()
        .iter()
        .zip(regenerated.letters())
        .position(|(a, b)| a != b)
        .map(|i| i as u64 + 1);
    Ok(OracleVerdict {
        outcome: match disagreement {
            Some(index) => OracleOutcome::RejectedAt(index),
            None => OracleOutcome::ConsistentUpTo(depth),
        },
        extracted_generator: generator,
        compared_depth: depth,
    })
}

/// Why a cross-check between the decision procedure and the oracle failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disagreement {
    /// The decision was produced for a different q than the one checked.
    MismatchedInputs { decision_q: u64, checked_q: u64 },
    /// The theorem says member but the oracle found a mismatch.
    MemberRejected { rejected_at: u64 },
    /// The theorem rejects but the oracle stayed consistent to full depth.
    RejectionUnconfirmed,
    /// Both say member, with different generators; smallest differing index.
    GeneratorDiffers { index: u64 },
}

/// Side-by-side record of a theorem verdict and an oracle verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub q: u64,
    pub decision: Decision,
    pub oracle: OracleVerdict,
    pub disagreement: Option<Disagreement>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.disagreement.is_none()
    }
}

/// Confronts a [`Decision`] with the brute-force oracle at the given depth.
///
/// Passes iff a Member decision is consistent with an identical extracted
/// generator, or a NotMember decision is rejected by the oracle too.
pub fn cross_check(
    spec: &ToeplitzSpec,
    q: u64,
    decision: &Decision,
    depth: u64,
) -> Result<CrossCheckReport, Error> {
    let oracle = brute_force_decide(spec, q, depth)?;
    let disagreement = if decision.reduction.q != q {
        Some(Disagreement::MismatchedInputs { decision_q: decision.reduction.q, checked_q: q })
    } else {
        match (&decision.verdict, &oracle.outcome) {
            (Verdict::Member { generator }, OracleOutcome::ConsistentUpTo(_)) => generator
                .letters()
                .iter()
                .zip(oracle.extracted_generator.letters())
                .position(|(a, b)| a != b)
                .map(|i| Disagreement::GeneratorDiffers { index: i as u64 + 1 }),
            (Verdict::Member { .. }, OracleOutcome::RejectedAt(index)) => {
                Some(Disagreement::MemberRejected { rejected_at: *index })
            }
            (Verdict::NotMember { .. }, OracleOutcome::ConsistentUpTo(_)) => {
                Some(Disagreement::RejectionUnconfirmed)
            }
            (Verdict::NotMember { .. }, OracleOutcome::RejectedAt(_)) => None,
        }
    };
    Ok(CrossCheckReport { q, decision: decision.clone(), oracle, disagreement })
}

/// One unit of sweep work: decide(spec, q) cross-checked at `depth`.
#[derive(Debug, Clone)]
pub struct SweepCase {
    pub spec: ToeplitzSpec,
    pub q: u64,
    pub depth: u64,
}

/// Aggregate of a corpus sweep. `disagreements` is empty on a clean run.
#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub checked: usize,
    pub members: usize,
    pub rejected: usize,
    pub disagreements: Vec<CrossCheckReport>,
}

fn check_case(case: &SweepCase) -> Result<CrossCheckReport, Error> {
    let decision = crate::lattice::decide(&case.spec, case.q)?;
    cross_check(&case.spec, case.q, &decision, case.depth)
}

fn summarize(reports: Vec<CrossCheckReport>) -> SweepSummary {
    let mut summary = SweepSummary { checked: reports.len(), ..SweepSummary::default() };
    for report in reports {
        if report.decision.is_member() {
            summary.members += 1;
        } else {
            summary.rejected += 1;
        }
        if !report.passed() {
            summary.disagreements.push(report);
        }
    }
    summary
}

/// Cross-checks every case, sharding across threads when the `parallel`
/// feature is enabled.
pub fn sweep(cases: &[SweepCase]) -> Result<SweepSummary, Error> {
    #[cfg(feature = "parallel")]
    {
        sweep_parallel(cases)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_sequential(cases)
    }
}

/// Single-threaded sweep; always available as the reference path.
pub fn sweep_sequential(cases: &[SweepCase]) -> Result<SweepSummary, Error> {
    let reports = cases.iter().map(check_case).collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(reports))
}

/// Data-parallel sweep over the case list. Cases are independent, so the
/// only coordination is the final deterministic-order collect.
#[cfg(feature = "parallel")]
pub fn sweep_parallel(cases: &[SweepCase]) -> Result<SweepSummary, Error> {
    use rayon::prelude::*;
    let reports = cases.par_iter().map(check_case).collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(reports))
}

/// Serialized cross-check report: the decision fields plus the oracle's.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CrossCheckDocument {
    #[serde(flatten)]
    pub decision: DecisionDocument,
    pub outcome: &'static str,
    pub rejected_at: Option<u64>,
    pub compared_depth: u64,
    pub extracted_generator: String,
}

impl From<&CrossCheckReport> for CrossCheckDocument {
    fn from(report: &CrossCheckReport) -> Self {
        CrossCheckDocument {
            decision: DecisionDocument::from(&report.decision),
            outcome: match report.oracle.outcome {
                OracleOutcome::ConsistentUpTo(_) => "ConsistentUpTo",
                OracleOutcome::RejectedAt(_) => "RejectedAt",
            },
            rejected_at: report.oracle.rejected_at(),
            compared_depth: report.oracle.compared_depth,
            extracted_generator: report.oracle.extracted_generator.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::decide;

    fn spec(m: u64, generator: &str) -> ToeplitzSpec {
        ToeplitzSpec::parse(m, generator).expect("test spec")
    }

    #[test]
    fn oracle_confirms_member_and_extracts_generator() {
        let x6 = spec(6, "aaaba");
        let verdict = brute_force_decide(&x6, 2, 1296).unwrap();
        assert_eq!(verdict.outcome, OracleOutcome::ConsistentUpTo(1296));
        assert_eq!(verdict.extracted_generator.to_string(), "abaab");
        assert_eq!(verdict.compared_depth, 1296);
    }

    #[test]
    fn oracle_rejects_non_member_early() {
        let x6 = spec(6, "aaaba");
        let verdict = brute_force_decide(&x6, 3, 1296).unwrap();
        match verdict.outcome {
            OracleOutcome::RejectedAt(index) => assert!(index <= 36, "index = {index}"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn oracle_handles_constant_words() {
        let verdict = brute_force_decide(&spec(2, "a"), 7, 16).unwrap();
        assert_eq!(verdict.outcome, OracleOutcome::ConsistentUpTo(16));
    }

    #[test]
    fn oracle_enforces_minimum_depth() {
        assert_eq!(
            brute_force_decide(&spec(6, "aaaba"), 2, 35),
            Err(Error::DepthTooSmall { depth: 35, min: 36 })
        );
    }

    #[test]
    fn oracle_reports_index_overflow() {
        let x6 = spec(6, "aaaba");
        assert_eq!(brute_force_decide(&x6, u64::MAX / 2, 1296), Err(Error::IndexOverflow));
    }

    #[test]
    fn rejection_witness_is_stable_under_deeper_search() {
        let x6 = spec(6, "aaaba");
        let shallow = brute_force_decide(&x6, 3, 36).unwrap();
        let deep = brute_force_decide(&x6, 3, 1296).unwrap();
        assert_eq!(shallow.rejected_at(), deep.rejected_at());
    }

    #[test]
    fn consistency_is_monotone_in_depth() {
        let x6 = spec(6, "aaaba");
        assert!(brute_force_decide(&x6, 2, 1296).unwrap().is_consistent());
        for depth in [36u64, 100, 500, 1000] {
            assert!(brute_force_decide(&x6, 2, depth).unwrap().is_consistent());
        }
    }

    #[test]
    fn cross_check_agreement_both_ways() {
        let x12 = spec(12, "aabaaaaabaa");
        for q in [18u64, 4] {
            let decision = decide(&x12, q).unwrap();
            let report = cross_check(&x12, q, &decision, 1728).unwrap();
            assert!(report.passed(), "q = {q}: {:?}", report.disagreement);
        }
    }

    #[test]
    fn cross_check_flags_mismatched_inputs() {
        let x12 = spec(12, "aabaaaaabaa");
        let decision_for_3 = decide(&x12, 3).unwrap();
        let report = cross_check(&x12, 6, &decision_for_3, 1728).unwrap();
        assert_eq!(
            report.disagreement,
            Some(Disagreement::MismatchedInputs { decision_q: 3, checked_q: 6 })
        );
    }

    #[test]
    fn default_depth_floors_at_4096_and_tracks_adic_classes() {
        assert_eq!(default_depth(2, 3), 4096);
        assert_eq!(default_depth(8, 7), 4096);
        assert_eq!(default_depth(12, 5), 20736);
        // p = 128 divides 6^7 first; the impersonation horizon is
        // (6^7 / 128) * 5 = 10935, inside the 2187 * 6 rung.
        assert_eq!(default_depth(6, 128), 2187 * 6);
        assert!(default_depth(6, 128) > 10935 * 6 / 7);
    }

    #[test]
    fn deep_adic_rejection_needs_more_than_four_levels() {
        // decide() rejects q = 128 for this word (p = 128 does not divide
        // 36), but the subsequence stays consistent with the constant word
        // past depth 6^4 and even 4096; the true witness sits at 10935.
        let x = spec(6, "bbbba");
        let decision = decide(&x, 128).unwrap();
        assert!(!decision.is_member());
        let shallow = brute_force_decide(&x, 128, 4096).unwrap();
        assert!(shallow.is_consistent());
        let deep = brute_force_decide(&x, 128, default_depth(6, 128)).unwrap();
        assert_eq!(deep.rejected_at(), Some(10935));
        let report = cross_check(&x, 128, &decision, default_depth(6, 128)).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn small_exhaustive_sweep_is_clean() {
        // All two-letter specs for m in {2, 3, 4}, every q up to m³.
        let mut cases = Vec::new();
        for m in 2u64..=4 {
            let len = (m - 1) as u32;
            for bits in 0u32..1 << len {
                let word: String =
                    (0..len).map(|i| if bits >> i & 1 == 0 { 'a' } else { 'b' }).collect();
                let spec = spec(m, &word);
                for q in 1..=m * m * m {
                    cases.push(SweepCase { spec: spec.clone(), q, depth: m.pow(4) });
                }
            }
        }
        let summary = sweep_sequential(&cases).unwrap();
        assert_eq!(summary.checked, cases.len());
        assert!(summary.disagreements.is_empty(), "{:?}", summary.disagreements);
        assert!(summary.members > 0 && summary.rejected > 0);

        #[cfg(feature = "parallel")]
        {
            let parallel = sweep_parallel(&cases).unwrap();
            assert_eq!(parallel.checked, summary.checked);
            assert_eq!(parallel.members, summary.members);
            assert_eq!(parallel.disagreements.len(), summary.disagreements.len());
        }
    }

    #[test]
    fn cross_check_document_carries_both_sides() {
        let x6 = spec(6, "aaaba");
        let decision = decide(&x6, 3).unwrap();
        let report = cross_check(&x6, 3, &decision, 1296).unwrap();
        let value = serde_json::to_value(CrossCheckDocument::from(&report)).unwrap();
        assert_eq!(value["verdict"], "NotMember");
        assert_eq!(value["outcome"], "RejectedAt");
        assert!(value["rejected_at"].as_u64().is_some());
        assert_eq!(value["compared_depth"], 1296);
        assert_eq!(value["extracted_generator"].as_str().unwrap().len(), 5);
    }
}
