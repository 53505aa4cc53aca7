//! End-to-end checks of the CLI contract: exit statuses, text output and the
//! stability of the JSON documents.

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("toeplitz").chain(args.iter().copied());
    let code = toeplitz_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut with_json: Vec<&str> = args.to_vec();
    with_json.push("--json");
    let (code, out, err) = run(&with_json);
    let value = serde_json::from_str(&out)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {out:?}, stderr: {err:?}"));
    (code, value)
}

#[test]
fn decide_member_exit_zero() {
    let (code, out, _) = run(&["decide", "--m", "12", "--word", "aabaaaaabaa", "--q", "18"]);
    assert_eq!(code, 0);
    assert!(out.contains("Member"));
    assert!(out.contains("abaaabaaaba"));
}

#[test]
fn decide_non_member_exit_one() {
    let (code, out, _) = run(&["decide", "--m", "12", "--word", "aabaaaaabaa", "--q", "4"]);
    assert_eq!(code, 1);
    assert!(out.contains("NotMember"));
    assert!(out.contains("witness j = 3"));
}

#[test]
fn decide_json_document_is_field_exact() {
    let (code, value) = run_json(&["decide", "--m", "12", "--word", "aabaaaaabaa", "--q", "18"]);
    assert_eq!(code, 0);
    assert_eq!(value["verdict"], "Member");
    assert_eq!(value["reduction"], serde_json::json!({"k": 0, "h": 1, "p": 18}));
    assert_eq!(value["reason"], Value::Null);
    assert_eq!(value["witness"], Value::Null);
    assert_eq!(value["generator"], "abaaabaaaba");
    assert_eq!(value["constant_shortcut"], false);
    assert!(value.as_object().unwrap().contains_key("decomposition"));
    assert!(value.as_object().unwrap().contains_key("uv"));

    let (code, value) = run_json(&["decide", "--m", "12", "--word", "aabaaaaabaa", "--q", "4"]);
    assert_eq!(code, 1);
    assert_eq!(value["verdict"], "NotMember");
    assert_eq!(value["reason"], "AlmostPeriodicityFails");
    assert_eq!(value["witness"], serde_json::json!({"checked_prefix_length": 12, "index": 3}));
    assert_eq!(value["generator"], Value::Null);
}

#[test]
fn decide_constant_shortcut_flagged() {
    let (code, value) = run_json(&["decide", "--m", "2", "--word", "a", "--q", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(value["constant_shortcut"], true);
    assert_eq!(value["generator"], "a");
}

#[test]
fn validation_errors_exit_two_with_diagnostic() {
    let (code, _, err) = run(&["decide", "--m", "6", "--word", "ab", "--q", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("m - 1 = 5"), "stderr: {err}");

    let (code, _, err) = run(&["decide", "--m", "6", "--word", "aa?ba", "--q", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid letter"), "stderr: {err}");

    let (code, _, _) = run(&["decide", "--m", "6", "--word", "aaaba"]);
    assert_eq!(code, 2); // missing --q

    // q is 1-based everywhere; 0 is rejected at the flag level.
    for sub in ["decide", "decompose", "verify"] {
        let (code, _, err) = run(&[sub, "--m", "6", "--word", "aaaba", "--q", "0"]);
        assert_eq!(code, 2, "{sub} stderr: {err}");
    }

    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("decide"));
}

#[test]
fn generate_prints_prefix() {
    let (code, out, _) = run(&["generate", "--m", "6", "--word", "aaaba", "--length", "12"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "aaabaaaaabaa");

    let (code, value) =
        run_json(&["generate", "--m", "6", "--word", "aaaba", "--length", "12"]);
    assert_eq!(code, 0);
    assert_eq!(value["prefix"], "aaabaaaaabaa");
    assert_eq!(value["length"], 12);
}

#[test]
fn access_prints_single_letter() {
    let (code, out, _) = run(&["access", "--m", "12", "--word", "aabaaaaabaa", "--index", "36"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "b");

    // 1-based domain: index 0 is a validation error.
    let (code, _, err) = run(&["access", "--m", "12", "--word", "aabaaaaabaa", "--index", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("1-based"), "stderr: {err}");
}

#[test]
fn enumerate_table_lists_members() {
    let (code, out, _) = run(&["enumerate", "--m", "6", "--word", "aaaba"]);
    assert_eq!(code, 0);
    let member_rows: Vec<&str> = out.lines().filter(|l| l.contains("Member")
        && !l.contains("NotMember")).collect();
    assert_eq!(member_rows.len(), 2);
    assert!(member_rows[0].starts_with('1'));
    assert!(member_rows[1].starts_with('2'));
    assert!(member_rows[1].contains("abaab"));
}

#[test]
fn enumerate_json_rows_embed_decisions() {
    let (code, value) = run_json(&["enumerate", "--m", "12", "--word", "aabaaaaabaa"]);
    assert_eq!(code, 0);
    let candidates = value["candidates"].as_array().unwrap();
    let ps: Vec<u64> = candidates.iter().map(|c| c["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, [1, 2, 3, 4, 6, 8, 9, 16, 18]);
    let members: Vec<u64> = candidates
        .iter()
        .filter(|c| c["verdict"] == "Member")
        .map(|c| c["p"].as_u64().unwrap())
        .collect();
    assert_eq!(members, [1, 3, 6, 18]);
    assert_eq!(candidates[8]["generator"], "abaaabaaaba");
}

#[test]
fn compose_left_associates_and_normalizes_hole() {
    let (code, out, _) = run(&["compose", "aa?", "b?", "a?"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "aabaaaaabaa?");

    // '.' is accepted as a trailing alias for the hole.
    let (code, out, _) = run(&["compose", "aa.", "b.", "a."]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "aabaaaaabaa?");

    let (code, value) = run_json(&["compose", "b?", "a?"]);
    assert_eq!(code, 0);
    assert_eq!(value["result"], "bab?");

    let (code, _, err) = run(&["compose", "a?b?"]);
    assert_eq!(code, 2);
    assert!(err.contains("hole"), "stderr: {err}");
}

#[test]
fn decompose_reports_both_factorizations() {
    let (code, out, _) = run(&["decompose", "--m", "12", "--word", "aabaaaaabaa", "--q", "18"]);
    assert_eq!(code, 0);
    assert!(out.contains("U = aabaaaaabaaaaabaa?"), "out: {out}");
    assert!(out.contains("V = abaaaba?"), "out: {out}");
    assert!(out.contains("Q = aa?"), "out: {out}");

    let (code, value) =
        run_json(&["decompose", "--m", "12", "--word", "aabaaaaabaa", "--q", "18"]);
    assert_eq!(code, 0);
    assert_eq!(
        value["decomposition"],
        serde_json::json!({"Q": "aa?", "T": "b?", "D": "a?", "d": 6, "q1": 3, "m1": 2, "t": 1})
    );
    assert_eq!(
        value["uv"],
        serde_json::json!({"U": "aabaaaaabaaaaabaa?", "V": "abaaaba?", "s": 2})
    );
}

#[test]
fn decompose_without_qtd_when_q_divides_m() {
    let (code, out, _) = run(&["decompose", "--m", "6", "--word", "aaaba", "--q", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("U = a?"));
    assert!(out.contains("V = ab?"));
    assert!(out.contains("not applicable"));

    let (code, value) = run_json(&["decompose", "--m", "6", "--word", "aaaba", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(value["uv"]["s"], 1);
    assert_eq!(value["decomposition"], Value::Null);
}

#[test]
fn decompose_negative_cases_exit_one() {
    // NotMember: no decomposition exists.
    let (code, _, err) = run(&["decompose", "--m", "12", "--word", "aabaaaaabaa", "--q", "9"]);
    assert_eq!(code, 1);
    assert!(err.contains("not a modulo-12"), "stderr: {err}");

    // q divides no power of m.
    let (code, _, err) = run(&["decompose", "--m", "12", "--word", "aabaaaaabaa", "--q", "5"]);
    assert_eq!(code, 1);
    assert!(err.contains("divides no power"), "stderr: {err}");

    // m divides q.
    let (code, _, err) = run(&["decompose", "--m", "12", "--word", "aabaaaaabaa", "--q", "24"]);
    assert_eq!(code, 1);
    assert!(err.contains("divides q"), "stderr: {err}");
}

#[test]
fn verify_agreement_exits_zero() {
    // Depth pinned so this test never consults TOEPLITZ_DEPTH, which a
    // sibling test mutates.
    let (code, out, _) = run(&[
        "verify", "--m", "12", "--word", "aabaaaaabaa", "--q", "18", "--depth", "1728",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS"), "out: {out}");

    let (code, out, _) = run(&[
        "verify", "--m", "12", "--word", "aabaaaaabaa", "--q", "4", "--depth", "1728",
    ]);
    assert_eq!(code, 0, "both sides reject: agreement");
    assert!(out.contains("rejected at index"), "out: {out}");
}

#[test]
fn verify_json_mirrors_decision_plus_oracle_fields() {
    let (code, value) = run_json(&[
        "verify", "--m", "6", "--word", "aaaba", "--q", "2", "--depth", "1296",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value["verdict"], "Member");
    assert_eq!(value["generator"], "abaab");
    assert_eq!(value["outcome"], "ConsistentUpTo");
    assert_eq!(value["rejected_at"], Value::Null);
    assert_eq!(value["compared_depth"], 1296);
    assert_eq!(value["extracted_generator"], "abaab");
}

#[test]
fn verify_depth_resolution_flag_env_default() {
    // Default depth: max(m^4, 4096) for a shallow class.
    let (code, value) = run_json(&["verify", "--m", "6", "--word", "aaaba", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(value["compared_depth"], 4096);

    // Deep-adic class: default rises to m * (m^s / p).
    let (code, value) = run_json(&["verify", "--m", "6", "--word", "bbbba", "--q", "128"]);
    assert_eq!(code, 0);
    assert_eq!(value["compared_depth"], 2187 * 6);
    assert_eq!(value["outcome"], "RejectedAt");
    assert_eq!(value["rejected_at"], 10935);

    // Environment override sits between flagless default and explicit flag.
    std::env::set_var(toeplitz_cli::DEPTH_ENV_VAR, "100");
    let (code, value) = run_json(&["verify", "--m", "6", "--word", "aaaba", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(value["compared_depth"], 100);

    let (code, value) = run_json(&[
        "verify", "--m", "6", "--word", "aaaba", "--q", "2", "--depth", "50",
    ]);
    assert_eq!(code, 0);
    assert_eq!(value["compared_depth"], 50);

    std::env::set_var(toeplitz_cli::DEPTH_ENV_VAR, "not-a-number");
    let (code, _, err) = run(&["verify", "--m", "6", "--word", "aaaba", "--q", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("TOEPLITZ_DEPTH"), "stderr: {err}");
    std::env::remove_var(toeplitz_cli::DEPTH_ENV_VAR);

    // Depth below m^2 is a validation error.
    let (code, _, err) = run(&[
        "verify", "--m", "6", "--word", "aaaba", "--q", "2", "--depth", "10",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("below the minimum"), "stderr: {err}");
}
