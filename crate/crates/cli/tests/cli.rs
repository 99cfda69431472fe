use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

use quatk::adams::{psi_series, PhiPoly};
use quatk::kring::{relations_for, KElement, RelationId};
use quatk::GroupParams;
use quatk_cli::{run, Outcome, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn quatk(args: &[&str]) -> Outcome {
    run(std::iter::once("quatk").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = quatk(&full);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).expect("a single JSON document")
}

#[test]
fn present_q8_golden() {
    let out = quatk(&["present", "--n", "3"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(
        out.stdout,
        "K-ring of BQ_8 (n = 3, k = 2): generators v1 = η1 − 1, v2 = η2 − 1, φ = d_1 − 2\n\
         (1) v1^2 = -2v1\n\
         (2) v2^2 = -2v2\n\
         (4) v1φ = -2v1\n\
         (5) v2φ = -2v2\n\
         (6) v1v2 = φ^2 + 4φ - 2v1 - 2v2\n\
         derived (3): φ^3 = -6φ^2 - 8φ\n"
    );
}

#[test]
fn present_q16_expands_psi() {
    let out = quatk(&["present", "--n", "4", "--format", "text"]);
    assert!(out.stdout.contains("(5) v2φ = φ^3 + 6φ^2 + 8φ - 2v2"));
    assert!(out
        .stdout
        .contains("(6) v1v2 = φ^4 + 8φ^3 + 20φ^2 + 16φ - 2v2"));
    assert!(!out.stdout.contains("(3) "));
}

#[test]
fn present_json_round_trips() {
    for n in 3..=6 {
        let doc = json(&["present", "--n", &n.to_string()]);
        let params = GroupParams::new(n).unwrap();
        let set = relations_for(params).unwrap();
        let relations = doc["relations"].as_array().unwrap();
        let numbers: Vec<u64> = relations
            .iter()
            .map(|r| r["relation"].as_u64().unwrap())
            .collect();
        assert_eq!(numbers, vec![1, 2, 4, 5, 6]);
        for entry in relations.iter().chain([&doc["derived"]]) {
            let id = RelationId::PRESENTATION
                .into_iter()
                .chain([RelationId::R3])
                .find(|id| u64::from(id.number()) == entry["relation"].as_u64().unwrap())
                .unwrap();
            let rhs = KElement::from_json(params, &entry["rhs"]).unwrap();
            assert_eq!(
                rhs.to_kpoly(),
                set.rule(id).unwrap().rhs,
                "n = {n}, relation {id}"
            );
        }
    }
}

#[test]
fn order_golden() {
    let out = quatk(&["order", "--n", "3", "--N", "0"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(
        out.stdout,
        "order of φ in R/φ^2R (n = 3, N = 0): 8\n\
         as power of two: 2^3\n\
         expected 2^(n+2N) = 2^3 = 8\n\
         match: true\n"
    );
    let doc = json(&["order", "--n", "3", "--N", "0"]);
    assert_eq!(doc["order"], "2^3");
    assert_eq!(doc["expected"], "2^3");
    assert_eq!(doc["order_value"], "8");
    assert_eq!(doc["match"], true);
}

#[test]
fn order_by_ideal_power() {
    let doc = json(&["order", "--n", "4", "--ideal-power", "2"]);
    assert_eq!(doc["order_value"], "16");
    let doc = json(&["order", "--n", "3", "--ideal-power", "1"]);
    assert_eq!(doc["order_value"], "1");
}

#[test]
fn table_text_and_json_agree() {
    let text = quatk(&["table", "--n-max", "5", "--N-max", "2"]);
    assert_eq!(text.code, EXIT_OK);
    let doc = json(&["table", "--n-max", "5", "--N-max", "2"]);
    assert_eq!(doc["all_match"], true);
    let cells = doc["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    let rows: Vec<&str> = text.stdout.lines().skip(1).take(3).collect();
    for (row, chunk) in rows.iter().zip(cells.chunks(3)) {
        let entries: Vec<&str> = row.split_whitespace().skip(1).collect();
        let orders: Vec<&str> = chunk.iter().map(|c| c["order"].as_str().unwrap()).collect();
        assert_eq!(entries, orders);
    }
    assert!(text.stdout.ends_with("9/9 cells match 2^(n+2N)\n"));
}

#[test]
fn adams_json_round_trips_and_methods_agree() {
    for i in [1, 2, 7, 40] {
        let series = json(&["adams", "--i", &i.to_string()]);
        let cheb = json(&["adams", "--i", &i.to_string(), "--method", "chebyshev"]);
        assert_eq!(series["psi"], cheb["psi"]);
        let parsed = PhiPoly::from_json(&series["psi"]).unwrap();
        assert_eq!(parsed, psi_series(i).unwrap());
        let text = quatk(&["adams", "--i", &i.to_string()]);
        assert_eq!(text.stdout, format!("ψ^{i}(φ) = {parsed}\n"));
    }
}

#[test]
fn g_golden_and_valuations() {
    let out = quatk(&["g", "--k", "2"]);
    assert_eq!(
        out.stdout,
        "g_4(φ) = φ^3 + 6φ^2 + 8φ\n\
         linear coefficient: 8 (ν₂ = 3)\n\
         quadratic coefficient: 6 (ν₂ = 1)\n\
         g_4 = ψ^3 − ψ^1: true\n"
    );
    let doc = json(&["g", "--k", "16"]);
    assert_eq!(doc["linear"]["nu2"], 6);
    assert_eq!(doc["quadratic"]["nu2"], 4);
    assert_eq!(doc["identity"], true);
}

#[test]
fn cohomology_forms() {
    assert_eq!(
        quatk(&["cohomology", "--p", "0"]).stdout,
        "H^0(BQ_{4k}; Z) = Z\n"
    );
    assert_eq!(
        quatk(&["cohomology", "--p", "7"]).stdout,
        "H^7(BQ_{4k}; Z) = 0\n"
    );
    assert_eq!(
        quatk(&["cohomology", "--p", "6", "--n", "3"]).stdout,
        "H^6(BQ_8; Z) = Z_2 ⊕ Z_2\n"
    );
    let doc = json(&["cohomology", "--p", "8", "--n", "5"]);
    assert_eq!(doc["factors"], serde_json::json!([32]));
    assert_eq!(doc["group"], "Z_32");
}

#[test]
fn consistency_agrees_with_text() {
    let doc = json(&["consistency", "--n", "4", "--N", "1"]);
    let text = quatk(&["consistency", "--n", "4", "--N", "1"]).stdout;
    for key in ["torsion", "phi_order"] {
        let computed = doc[key]["computed"].as_str().unwrap();
        assert!(
            text.contains(&format!("computed {computed},")),
            "{key}: {text}"
        );
        assert_eq!(doc[key]["match"], true);
    }
    assert_eq!(doc["growth"]["computed"], "4");
}

#[test]
fn verify_all_passes() {
    for n in ["3", "4", "5"] {
        let out = quatk(&["verify", "--n", n, "--suite", "all"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        assert!(!out.stdout.contains("FAIL"));
        let doc = json(&["verify", "--n", n]);
        assert_eq!(doc["pass"], true);
        assert_eq!(doc["reports"].as_array().unwrap().len(), 6);
        assert_eq!(doc["passed"], doc["total"]);
    }
}

#[test]
fn verify_single_suite() {
    for suite in [
        "relations",
        "oracle",
        "redundancy",
        "minimality",
        "restriction",
        "confluence",
    ] {
        let doc = json(&["verify", "--n", "4", "--suite", suite]);
        assert_eq!(doc["reports"][0]["suite"], suite);
        assert_eq!(doc["pass"], true);
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["present"],
        &["present", "--n", "2"],
        &["present", "--n", "11"],
        &["present", "--n", "-3"],
        &["present", "--n", "abc"],
        &["verify", "--n", "9"],
        &["verify", "--n", "3", "--suite", "nope"],
        &["order", "--n", "3"],
        &["order", "--n", "3", "--N", "0", "--ideal-power", "2"],
        &["order", "--n", "3", "--ideal-power", "0"],
        &["order", "--n", "3", "--N", "99999999999999999999999"],
        &["table", "--n-max", "3"],
        &["adams", "--i", "0"],
        &["adams", "--i", "2001"],
        &["adams", "--i", "3", "--method", "magic"],
        &["g", "--k", "1"],
        &["cohomology"],
        &["cohomology", "--p", "4", "--n", "1"],
        &["consistency", "--n", "3"],
        &["present", "--n", "3", "--format", "xml"],
    ];
    for args in cases {
        let out = quatk(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let out = quatk(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("consistency"));
}

#[test]
fn binary_forwards_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_quatk");
    let ok = Command::new(bin)
        .args(["verify", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let usage = Command::new(bin)
        .args(["order", "--n", "0", "--N", "0"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    assert!(usage.stdout.is_empty());
    let out = Command::new(bin)
        .args(["order", "--n", "3", "--N", "0"])
        .output()
        .unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        quatk(&["order", "--n", "3", "--N", "0"]).stdout
    );
}

#[test]
fn output_is_deterministic() {
    let a = quatk(&["table", "--n-max", "5", "--N-max", "3", "--format", "json"]);
    for _ in 0..3 {
        assert_eq!(
            quatk(&["table", "--n-max", "5", "--N-max", "3", "--format", "json"]),
            a
        );
    }
}

fn token() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("present".to_string()),
        Just("verify".to_string()),
        Just("order".to_string()),
        Just("adams".to_string()),
        Just("g".to_string()),
        Just("cohomology".to_string()),
        Just("--n".to_string()),
        Just("--N".to_string()),
        Just("--i".to_string()),
        Just("--k".to_string()),
        Just("--p".to_string()),
        Just("--suite".to_string()),
        Just("--ideal-power".to_string()),
        Just("--format".to_string()),
        Just("json".to_string()),
        (-3i64..7).prop_map(|v| v.to_string()),
        "[a-z0-9=-]{0,6}",
        any::<u64>().prop_map(|v| v.to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn arbitrary_arguments_never_panic(args in proptest::collection::vec(token(), 0..6)) {
        let out = quatk(&args.iter().map(String::as_str).collect::<Vec<_>>());
        prop_assert!([EXIT_OK, EXIT_FAILURE, EXIT_USAGE].contains(&out.code));
        if out.code == EXIT_USAGE {
            prop_assert!(out.stdout.is_empty());
        }
    }
}
