use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use pap_core::corpus::fixtures;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn pap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pap"))
        .args(args)
        .output()
        .unwrap()
}

fn pap_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pap"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    corpus(name).display().to_string()
}

#[test]
fn solve_network_with_count() {
    let o = pap(&[
        "solve",
        &path("network_prob.pap"),
        "--cost",
        "count",
        "--all",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "cost=2  { offline(b), offline(f) }\n");
}

#[test]
fn necessary_offline_f() {
    let o = pap(&["necessary", &path("network_prob.pap"), "offline(f)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "yes\n");
    let o = pap(&["necessary", &path("network_prob.pap"), "offline(b)"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "no\n");
}

#[test]
fn models_of_ex21() {
    let o = pap(&["models", &path("ex21.pap")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "{a, c}\n{b, c}\n");
}

#[test]
fn set_queries() {
    let f = path("network_count.pap");
    let o = pap(&[
        "admissible",
        &f,
        "--hypotheses",
        "offline(c), offline(d), offline(f)",
    ]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "yes\n"));
    let o = pap(&[
        "optimal",
        &f,
        "--hypotheses",
        "offline(c),offline(d),offline(f)",
    ]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "no\n"));
    let o = pap(&["admissible", &f, "--hypotheses", "offline(f)"]);
    assert_eq!(code(&o), 1);
    let o = pap(&["admissible", &f, "--hypotheses", "offline(z)"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn json_schema() {
    let o = pap(&["--json", "solve", &path("network_prob.pap"), "--all"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["consistent", "optimal_cost", "solutions", "stats"]);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["optimal_cost"], 0.744);
    assert_eq!(
        v["solutions"],
        serde_json::json!([
            ["offline(b)", "offline(f)"],
            ["offline(c)", "offline(d)", "offline(f)"]
        ])
    );
    for k in ["nodes", "checks", "ms"] {
        assert!(v["stats"][k].is_u64(), "{k}");
    }

    let o = pap(&[
        "--json",
        "relevant",
        &path("network_prob.pap"),
        "offline(a)",
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"answer": false, "consistent": true}));
}

#[test]
fn engine_and_oracle_agree_on_corpus() {
    for f in fixtures() {
        let file = path(&format!("{}.pap", f.name));
        let engine = pap(&["--json", "solve", &file, "--all"]);
        let oracle = pap(&["--json", "--oracle", "solve", &file, "--all"]);
        assert_eq!(code(&engine), code(&oracle), "{}", f.name);
        let mut a: Value = serde_json::from_str(&stdout(&engine)).unwrap();
        let mut b: Value = serde_json::from_str(&stdout(&oracle)).unwrap();
        a.as_object_mut().unwrap().remove("stats");
        b.as_object_mut().unwrap().remove("stats");
        assert_eq!(a, b, "{}", f.name);
        assert_eq!(
            code(&engine),
            if f.expected.consistent { 0 } else { 1 },
            "{}",
            f.name
        );
    }
}

#[test]
fn decision_exit_codes_follow_expected() {
    for f in fixtures() {
        let file = path(&format!("{}.pap", f.name));
        let p = f.instance().unwrap();
        for h in p.hypothesis_atoms() {
            let shown = h.to_string();
            let o = pap(&["relevant", &file, &shown]);
            assert_eq!(
                code(&o),
                if f.expected.relevant.contains(&shown) {
                    0
                } else {
                    1
                },
                "{} {shown}",
                f.name
            );
        }
        let o = pap(&["check", &file]);
        assert_eq!(
            code(&o),
            if f.expected.consistent { 0 } else { 1 },
            "{}",
            f.name
        );
    }
}

#[test]
fn stdin_and_inconsistency() {
    let o = pap_stdin(&["check", "-"], "a :- not a.\n");
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "inconsistent\n"));
    let o = pap_stdin(&["solve", "-"], "a :- not a.\n");
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "inconsistent\n"));
    let o = pap_stdin(&["necessary", "-", "h"], "#hypothesis h.\n#observe a.\n");
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("no admissible solution"));
}

#[test]
fn input_errors_exit_2() {
    let o = pap_stdin(&["check", "-"], "a :- \n");
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("-:1:"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let o = pap(&["solve", "/no/such/file.pap"]);
    assert_eq!(code(&o), 2);

    let o = pap(&["relevant", &path("fishing.pap"), "p(X)"]);
    assert_eq!(code(&o), 2);

    let o = pap(&["frobnicate"]);
    assert_eq!(code(&o), 2);

    let o = pap_stdin(&["ground", "-"], "p(X) :- q(X), X < a.\nq(b).\n");
    assert_eq!(code(&o), 2);
}

#[test]
fn node_cap_exit_3() {
    let o = pap(&["--node-cap", "1", "solve", &path("blocks2.pap")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("node cap"));
}

#[test]
fn gen_tsp_reproduces_fixture() {
    let o = pap(&["gen", "tsp", "--n", "4", "--weights", &path("tsp4.weights")]);
    assert_eq!(code(&o), 0);
    let fixture = std::fs::read_to_string(corpus("tsp4.pap")).unwrap();
    assert_eq!(stdout(&o), fixture);

    let o = pap(&["gen", "tsp", "--n", "5", "--weights", &path("tsp4.weights")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn ground_dump() {
    let o = pap(&["ground", &path("fishing.pap")]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "is_saturday.\ngo_fishing :- is_saturday, not rains.\n"
    );
}
