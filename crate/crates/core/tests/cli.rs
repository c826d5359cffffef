use std::process::{Command, Output};
use trisect_core::diagram::{catalog, Diagram, CATALOG};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn trisect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trisect")).args(args).output().expect("spawn trisect")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn count_on_s4() {
    let o = trisect(&["eval", "count", "--C", "Z/2", "--B", "Z/3", "s4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "l=6, invariant=1");
}

#[test]
fn invariant_survives_a_move_file() {
    let before = trisect(&["eval", "invariant", "--triplet", "kashaev:n=3", "cp2"]);
    assert_eq!(code(&before), 0);
    let dir = tempfile::tempdir().unwrap();
    let moved = dir.path().join("moved.json");
    let moves = format!("{FIXTURES}/moves/cp2_insert.json");
    let o = trisect(&["moves", "apply", "cp2", &moves, "-o", moved.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let d = Diagram::from_json(&std::fs::read_to_string(&moved).unwrap(), true).unwrap();
    assert_eq!(d.crossings.len(), 5);
    let after = trisect(&["eval", "invariant", "--triplet", "kashaev:n=3", moved.to_str().unwrap()]);
    assert_eq!(stdout(&after), stdout(&before));
    assert!(stdout(&before).contains('≈'), "exact and decimal forms: {}", stdout(&before));
}

#[test]
fn mixed_moves_keep_both_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let moved = dir.path().join("s4.json");
    let moves = format!("{FIXTURES}/moves/s4_mixed.json");
    assert_eq!(code(&trisect(&["moves", "apply", "s4", &moves, "-o", moved.to_str().unwrap()])), 0);
    let m = moved.to_str().unwrap();
    assert_eq!(stdout(&trisect(&["eval", "invariant", "--triplet", "group:C=S3,B=Z/2", m])).trim(), "1");
    assert_eq!(stdout(&trisect(&["eval", "count", "--C", "S3", "--B", "Z/2", m])).trim(), "l=144, invariant=1");
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["eval", "invariant", "--triplet", "kashaev:n=5", "--all-roots", "--json", "cp2"],
        vec!["eval", "count", "--C", "S3", "--B", "Z/2", "--M", "cosets:(102,0),(012,1)", "--json", "cp2"],
        vec!["crosscheck", "--triplet", "group:C=Z/2,B=Z/2", "--json", "s4"],
        vec!["selftest", "--only", "2,10", "--json"],
    ] {
        let (a, b) = (trisect(&args), trisect(&args));
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap();
    }
}

#[test]
fn all_roots_lists_three_branches() {
    let o = trisect(&["eval", "invariant", "--triplet", "kashaev:n=4", "--all-roots", "--json", "cp2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["invariant"]["branches"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&trisect(&["eval", "bracket", "--triplet", "kashaev:n=x", "s4"])), 2);
    assert_eq!(code(&trisect(&["eval", "bracket", "s4"])), 2);
    assert_eq!(code(&trisect(&["eval", "count", "--C", "Q8", "--B", "Z/2", "s4"])), 2);
    assert_eq!(code(&trisect(&["frobnicate"])), 2);
    assert_eq!(code(&trisect(&["eval", "bracket", "--triplet", "kashaev:n=2", "--backend", "approx", "s4"])), 2);
    assert_eq!(code(&trisect(&["--help"])), 0);

    let o = trisect(&["eval", "bracket", "--triplet", "kashaev:n=2", "/nonexistent.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: io error"));
    let o = trisect(&["eval", "bracket", "--triplet", "kashaev:n=3", "--cap", "1", "s4"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the size cap"));
    let o = trisect(&["eval", "count", "--C", "Z/2", "--B", "Z/3", "--M", "cosets:(1,0)", "--boundary", "q", "s4-disc"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn domain_errors_are_verbatim() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"[{"move": "two_point_delete", "p": "x", "q": "y"}]"#).unwrap();
    let o = trisect(&["moves", "apply", "cp2", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = trisect_core::moves::two_point_delete(&catalog("cp2").unwrap(), "x", "y").unwrap_err();
    assert_eq!(String::from_utf8_lossy(&o.stderr).trim(), format!("error: {err}"));
}

#[test]
fn catalog_fixtures_match_the_builtins() {
    for name in CATALOG {
        let o = trisect(&["catalog", name]);
        assert_eq!(code(&o), 0);
        let shipped = std::fs::read_to_string(format!("{FIXTURES}/catalog/{name}.json")).unwrap();
        assert_eq!(stdout(&o), shipped, "{name}");
        assert_eq!(Diagram::from_json(&shipped, false).unwrap(), catalog(name).unwrap());
    }
}

#[test]
fn validate_reports_violations() {
    assert_eq!(code(&trisect(&["validate", "cp2"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let mut d = catalog("cp2").unwrap();
    d.crossings[0].sign = 1;
    d.genus = 2;
    std::fs::write(&path, d.to_json_string()).unwrap();
    let o = trisect(&["validate", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
}

#[test]
fn float_backend_and_evaluators() {
    let exact = trisect(&["eval", "bracket", "--triplet", "kashaev:n=3", "cp2"]);
    let float = trisect(&["eval", "bracket", "--triplet", "kashaev:n=3", "--backend", "float", "--evaluator", "rep", "cp2"]);
    assert_eq!(code(&float), 0);
    let tail = |o: &Output| stdout(o).rsplit('≈').next().unwrap().trim().to_string();
    assert_eq!(stdout(&float).trim(), tail(&exact));
}

#[test]
fn axioms_and_weak_triplets() {
    assert_eq!(code(&trisect(&["axioms", "--triplet", "kashaev:n=4"])), 0);
    assert_eq!(code(&trisect(&["axioms", "--C", "S3", "--B", "Z/2", "--M", "cosets:(102,0),(012,1)"])), 0);
    let perturbed = format!("file:{FIXTURES}/triplets/kashaev3_perturbed.json");
    assert_eq!(code(&trisect(&["axioms", "--triplet", &perturbed])), 1);
}

#[test]
fn injected_fault_names_the_criterion() {
    let o = trisect(&["selftest", "--only", "2", "--inject-fault"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("[FAIL]  2 pairings and triplets"), "{out}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("pairings and triplets"));
    assert_eq!(code(&trisect(&["selftest", "--only", "12"])), 2);
}

#[test]
fn thread_count_from_environment() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_trisect"))
            .env("TRISECT_THREADS", v)
            .args(["eval", "count", "--C", "Z/3", "--B", "Z/3", "s4"])
            .output()
            .unwrap()
    };
    assert_eq!(stdout(&run("1")), stdout(&run("4")));
    assert_eq!(code(&run("0")), 2);
}
