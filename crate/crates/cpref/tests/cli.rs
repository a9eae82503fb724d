use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cpref::cli::{run_interactive, EngineChoice, RunConfig};
use cpref::xml::{parse_result, parse_spec};
use cpref_core::{verify_proof, ProofKind, Query, Subject};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cpref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpref"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

fn spec(name: &str) -> cpref_core::PreferenceSpec {
    parse_spec(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

#[test]
fn batch_consistency_with_both_engines() {
    let out = cpref(&["--query", &path("q_consistency.xml"), "--engine", "both", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains(r#"<RESULT KIND="CONSISTENCY" ANSWER="true" ENGINE="SYMBOLIC" ELAPSED-MS="0.000">"#));
    assert!(text.contains(r#"<CHECKED-BY ENGINE="EXPLICIT" ANSWER="true"/>"#));
    assert!(!text.contains("<PROOF"));
}

#[test]
fn batch_dominance_writes_a_replayable_proof() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("result.xml");
    for engine in ["explicit", "symbolic", "both"] {
        let out = cpref(&[
            "--query",
            &path("q_dominance.xml"),
            "--engine",
            engine,
            "--out",
            out_file.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let p1 = spec("p1.xml");
        let text = std::fs::read_to_string(&out_file).unwrap();
        assert_eq!(text.matches("<OUTCOME").count(), 4);
        assert_eq!(text.matches("STATEMENT-ID=").count(), 3);
        let doc = parse_result(&text, &p1).unwrap();
        assert!(doc.answer);
        let query = Query::dominance(
            p1.parse_outcome("a=0,b=1,c=0").unwrap(),
            p1.parse_outcome("a=1,b=0,c=1").unwrap(),
        );
        assert!(verify_proof(Subject::Single(&p1), &query.kind, &doc.proof.unwrap()).unwrap());
    }
    let out = cpref(&["--query", &path("q_not_dominance.xml")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(r#"ANSWER="false""#));
}

#[test]
fn batch_inconsistency_and_subsumption() {
    let out = cpref(&["--query", &path("q_inconsistency.xml"), "--engine", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let d2 = spec("d2.xml");
    let doc = parse_result(&stdout(&out), &d2).unwrap();
    assert!(!doc.answer);
    let proof = doc.proof.unwrap();
    assert_eq!(proof.kind, ProofKind::InconsistencyCycle);
    assert_eq!(proof.steps.len(), 4);
    assert_eq!(d2.format_outcome(&proof.steps[0].from), "a=0,b=0");

    let out = cpref(&["--query", &path("q_subsumption.xml"), "--engine", "symbolic"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains(r#"ANSWER="false""#));
    assert!(text.contains(r#"<COUNTER-FLIP STATEMENT-ID="s3">"#));

    let out = cpref(&["--query", &path("q_equivalence.xml")]);
    assert!(stdout(&out).contains(r#"DIRECTION="P1_NOT_IN_P2""#));

    // Command-line specifications override the query's.
    let out = cpref(&[
        "--query",
        &path("q_equivalence.xml"),
        "--spec",
        &path("d2.xml"),
        "--spec2",
        &path("d2.xml"),
    ]);
    assert!(stdout(&out).contains(r#"KIND="EQUIVALENCE" ANSWER="true""#), "{}", stderr(&out));
}

#[test]
fn reruns_are_byte_identical() {
    let run = || stdout(&cpref(&["--query", &path("q_dominance.xml"), "--no-timing"]));
    assert_eq!(run(), run());
}

#[test]
fn exit_codes() {
    let out = cpref(&["--query", &path("q_undefined.xml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("variable d is not defined in the preference specification"));
    assert!(stderr(&out).contains("undefined.xml"));

    let out = cpref(&["--query", &path("q_dominance.xml"), "--engine", "explicit", "--node-limit", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("exceed the explicit engine's limit"));

    // A blown node budget on a small space falls back to the explicit engine.
    let out = cpref(&["--query", &path("q_dominance.xml"), "--node-budget", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains(r#"ENGINE="EXPLICIT""#));
    let out = cpref(&[
        "--query",
        &path("q_dominance.xml"),
        "--node-budget",
        "8",
        "--engine",
        "symbolic",
        "--node-limit",
        "4",
    ]);
    // ...unless the explicit engine is out of bounds too.
    assert_eq!(out.status.code(), Some(3));

    let out = cpref(&["--spec", &path("p1.xml")]);
    assert_eq!(out.status.code(), Some(2));
    let out = cpref(&["--query", &path("missing.xml")]);
    assert_eq!(out.status.code(), Some(1));
    let out = cpref(&["--query", &path("q_subsumption.xml"), "--spec", &path("p1.xml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("need 2 specification(s)"));
}

#[test]
fn emitted_models() {
    let out = cpref(&["--spec", &path("p1.xml"), "--emit-smv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), std::fs::read_to_string(data("p1.smv")).unwrap());

    let out = cpref(&["--query", &path("q_dominance.xml"), "--emit-smv"]);
    assert!(stdout(&out).ends_with(
        "SPEC (a=1 & b=0 & c=1) -> EF (a=0 & b=1 & c=0)\nSPEC !((a=1 & b=0 & c=1) -> EF (a=0 & b=1 & c=0))\n"
    ));

    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("eq.smv");
    let out = cpref(&["--query", &path("q_equivalence.xml"), "--emit-smv", "--out", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let forward = std::fs::read_to_string(&model).unwrap();
    let reverse = std::fs::read_to_string(dir.path().join("eq.reverse.smv")).unwrap();
    assert!(forward.contains("next(g1)") && forward.contains("next(g2)"));
    // The reverse model swaps the roles: P1-minus-s3 forward, P1 backward.
    assert!(forward.contains("c=1 & b=0 & cha=0 & chb=0 & chc=1 : 1;"));
    assert!(reverse.contains("c=0 & b=0 & cha=0 & chb=0 & chc=1 : 1;"));

    let out = cpref(&["--spec", &path("d2.xml"), "--dump-ipg"]);
    assert_eq!(stdout(&out).lines().count(), 4);
    assert!(stdout(&out).contains("a=0,b=0 -> a=1,b=0 : s1"));
}

#[test]
fn interactive_session() {
    let specs = [spec("p1.xml"), spec("p1_minus_s3.xml")];
    let config = RunConfig {
        engine: EngineChoice::Both,
        ..RunConfig::default()
    };
    let input = "1\na=0,b=1\na=0,b=1,c=0\na=1,b=0,c=1\n2\n4\n7\nq\n";
    let mut output = Vec::new();
    run_interactive(&config, &specs, input.as_bytes(), &mut output).unwrap();
    let text = String::from_utf8(output).unwrap();
    assert!(text.contains("outcome is missing variable `c`"), "{text}");
    let expected_dominance = "true\n  flip a=1,b=0,c=1 -> a=0,b=0,c=1  [s1]\n";
    assert!(text.contains(expected_dominance), "{text}");
    assert_eq!(text.matches("  flip ").count(), 3);
    assert!(text.contains("> true\n\n1) dominance"), "{text}");
    assert!(text.contains("false\n  direction P1_NOT_IN_P2\n  counter-flip a=0,b=0,c=1 -> a=0,b=0,c=0  [s3]\n"), "{text}");
    assert!(text.contains("unknown choice `7`"));

    // One specification: no pair queries, and end of input quits.
    let mut output = Vec::new();
    run_interactive(&config, &specs[..1], "3\n".as_bytes(), &mut output).unwrap();
    let text = String::from_utf8(output).unwrap();
    assert!(!text.contains("equivalence"));
    assert!(text.contains("unknown choice `3`"));
}

#[cfg(unix)]
fn fake_checker(dir: &Path, verdicts: &[&str]) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let body: String = verdicts
        .iter()
        .map(|v| format!("echo '-- specification phi is {v}'\n"))
        .collect();
    let path = dir.join(format!("nusmv-{}.sh", verdicts.join("-")));
    std::fs::write(&path, format!("#!/bin/sh\n{body}")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

#[cfg(unix)]
#[test]
fn external_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let agree = fake_checker(dir.path(), &["true"]);
    let out = cpref(&["--query", &path("q_consistency.xml"), "--checker", agree.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains(r#"<CHECKED-BY ENGINE="SMV" ANSWER="true"/>"#));

    let disagree = fake_checker(dir.path(), &["false"]);
    let out = cpref(&["--query", &path("q_consistency.xml"), "--checker", disagree.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("engines disagree"));

    let out = cpref(&["--query", &path("q_consistency.xml"), "--checker", "/nonexistent/nusmv"]);
    assert_eq!(out.status.code(), Some(1));
}
