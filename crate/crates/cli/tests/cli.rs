use std::io::Write;
use std::process::{Command, Output, Stdio};

use polyrecon::{charpoly, deck, deck_mod, io as pio, oracle, parse_graph6, reconstruct};
use serde_json::{json, Value};

fn polyrecon(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyrecon"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn deck_json(g6: &str, generalized: bool) -> String {
    pio::deck_to_json(&deck(&parse_graph6(g6).unwrap(), generalized, None).unwrap()).to_string()
}

#[test]
fn charpoly_of_triangle() {
    let out = polyrecon(&["charpoly", "Bw"], None);
    assert!(out.status.success());
    assert_eq!(json_of(&out), json!({ "phi": ["1", "0", "-3", "-2"] }));
    let out = polyrecon(&["charpoly", "Bw", "--mod", "4"], None);
    assert_eq!(json_of(&out), json!({ "phi": ["1", "0", "1", "2"] }));
}

#[test]
fn charpoly_matches_library() {
    for g6 in ["Dhc", "E?~o", "FCZbg", "G?zTb_"] {
        let g = parse_graph6(g6).unwrap();
        let out = polyrecon(&["charpoly", g6], None);
        assert_eq!(json_of(&out)["phi"], json!(pio::coeff_strings(charpoly(&g).coeffs())));
    }
}

#[test]
fn edge_list_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "3 3\n0 1\n1 2\n0 2").unwrap();
    let out = polyrecon(&["charpoly", f.path().to_str().unwrap()], None);
    assert_eq!(json_of(&out), json!({ "phi": ["1", "0", "-3", "-2"] }));
}

#[test]
fn deck_is_byte_identical_to_library() {
    for (g6, generalized) in [("Dhc", false), ("Dhc", true), ("E?~o", true)] {
        let mut args = vec!["deck", g6];
        if generalized {
            args.push("--generalized");
        }
        let out = polyrecon(&args, None);
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), deck_json(g6, generalized));
    }
}

#[test]
fn deck_then_reconstruct_round_trip() {
    let d = polyrecon(&["deck", "Bw", "--generalized"], None);
    let out = polyrecon(&["reconstruct", "--deck", "-"], Some(std::str::from_utf8(&d.stdout).unwrap()));
    assert!(out.status.success());
    assert_eq!(
        json_of(&out),
        json!({ "status": "success", "phi": ["1", "0", "-3", "-2"], "phi_complement": ["1", "0", "0", "0"] })
    );
}

#[test]
fn reconstruct_matches_library_on_order_six_graphs() {
    for g in oracle::unlabeled_graphs(6).unwrap().into_iter().step_by(7) {
        let d = deck(&g, true, None).unwrap();
        let text = pio::deck_to_json(&d).to_string();
        let want = reconstruct::reconstruct_full(&d).unwrap();
        let out = polyrecon(&["reconstruct", "--deck", "-"], Some(&text));
        assert_eq!(json_of(&out), pio::outcome_to_json(&want));
        let want = reconstruct::reconstruct_controllable(&d).unwrap();
        let out = polyrecon(&["reconstruct", "--deck", "-", "--controllable"], Some(&text));
        assert_eq!(json_of(&out), pio::outcome_to_json(&want));
        assert_eq!(out.status.code(), Some(if want.is_success() { 0 } else { 2 }));
    }
}

#[test]
fn rank_too_low_exits_with_two() {
    // C7 has a walk matrix of rank 1
    let text = pio::deck_to_json(&deck(&polyrecon::Graph::cycle(7), true, None).unwrap()).to_string();
    let out = polyrecon(&["reconstruct", "--deck", "-", "--s", "6", "--t", "6"], Some(&text));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["status"], "rank_too_low");
}

#[test]
fn c4free_and_not_applicable() {
    let star = pio::deck_to_json(&deck(&polyrecon::Graph::star(6), false, None).unwrap()).to_string();
    let out = polyrecon(&["reconstruct-c4free", "--deck", "-"], Some(&star));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let k33 = pio::deck_to_json(&deck(&polyrecon::Graph::complete_bipartite(3, 3), false, None).unwrap()).to_string();
    let out = polyrecon(&["reconstruct-c4free", "--deck", "-"], Some(&k33));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["status"], "not_applicable");
}

#[test]
fn deck_mod_matches_library() {
    for g6 in ["Ch", "Dhc", "E@hW", "EqGW"] {
        let d = deck(&parse_graph6(g6).unwrap(), false, None).unwrap();
        let report = deck_mod::deck_mod_report(&d).unwrap();
        let out = polyrecon(&["deck-mod", "--deck", "-"], Some(&pio::deck_to_json(&d).to_string()));
        assert_eq!(json_of(&out), pio::deck_mod_to_json(&report));
        let applicable = !matches!(report.theorem5, deck_mod::Theorem5Verdict::NotApplicable);
        assert_eq!(out.status.code(), Some(if applicable { 0 } else { 2 }));
    }
    // P5: odd order with full F2 rank, so the constant modulo 4 is out of reach
    let p5 = pio::deck_to_json(&deck(&polyrecon::Graph::path(5), false, None).unwrap()).to_string();
    let out = polyrecon(&["deck-mod", "--deck", "-"], Some(&p5));
    assert_eq!(json_of(&out)["theorem5"], "not_applicable");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn complement_mod4_of_triangle() {
    let out = polyrecon(&["complement-mod4", "--poly", "-", "--n", "3"], Some(r#"{"phi": ["1","0","-3","-2"]}"#));
    assert_eq!(json_of(&out), json!({ "phibar_mod4": ["1", "0", "0", "0"] }));
    let out = polyrecon(&["complement-mod4", "--poly", "-", "--n", "4"], Some(r#"["1","0","-3","-2"]"#));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn walk_rank() {
    // P4: rank 2 over Q, 2 over F2 as well
    let out = polyrecon(&["walk-rank", "Ch"], None);
    assert_eq!(json_of(&out)["rank"], 2);
    let out = polyrecon(&["walk-rank", "Bw", "--mod2"], None);
    assert_eq!(json_of(&out), json!({ "rank": 1, "field": "F2" }));
}

#[test]
fn verify_small_sweep() {
    let out = polyrecon(&["verify", "--n-max", "6", "--checks", "all", "--jobs", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["counterexamples"], json!([]));
    // deterministic without --timing
    let again = polyrecon(&["verify", "--n-max", "6", "--checks", "all", "--jobs", "1"], None);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn collisions_match_library() {
    let out = polyrecon(&["collisions", "--n", "6"], None);
    assert_eq!(json_of(&out), serde_json::to_value(oracle::deck_collision_search(6).unwrap()).unwrap());
}

#[test]
fn errors_are_json() {
    for args in [&["charpoly", "not a graph"][..], &["--frobnicate"], &["deck-mod", "--deck", "/nonexistent"], &["verify", "--n-max", "5", "--checks", "nope"]] {
        let out = polyrecon(args, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(json_of(&out)["error"].is_string());
    }
    let out = polyrecon(&["reconstruct", "--deck", "-"], Some("{"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_file_and_pretty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deck.json");
    let out = polyrecon(&["deck", "Bw", "--generalized", "--pretty", "--out", path.to_str().unwrap()], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\n  \"n\": 3"));
    let out = polyrecon(&["reconstruct", "--deck", path.to_str().unwrap()], None);
    assert_eq!(json_of(&out)["status"], "success");
}
