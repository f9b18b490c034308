use std::process::Command;

use moddiq_cli::{run_command, Outcome};
use serde_json::Value;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/worked_example.ideal");

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["moddiq"];
    argv.extend_from_slice(args);
    run_command(argv)
}

fn run_on_fixture(args: &[&str]) -> Outcome {
    let mut a = args.to_vec();
    a.extend_from_slice(&["--input", FIXTURE]);
    run(&a)
}

fn json_of(o: &Outcome) -> Value {
    serde_json::from_str(o.stdout.trim()).unwrap_or_else(|e| panic!("bad json {e}: {}", o.stdout))
}

fn basis(v: &Value) -> Vec<String> {
    v["result_basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn moddiq_returns_j_certified() {
    let o = run_on_fixture(&["moddiq", "--ideal", "I", "--by", "J", "--json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    assert_eq!(basis(&v), ["x^2 + x", "x*y + y"]);
    assert_eq!(v["certified"], true);
    assert!(v["rounds"].as_u64().unwrap() >= 1);
}

#[test]
fn direct_and_modular_commands_agree() {
    for (direct, modular) in [("quotient", "modquotient"), ("sat", "modsat"), ("diq", "moddiq")] {
        let d = json_of(&run_on_fixture(&[direct, "--ideal", "I", "--by", "J", "--json"]));
        let m = json_of(&run_on_fixture(&[modular, "--ideal", "I", "--by", "J", "--json"]));
        assert_eq!(d["result_basis"], m["result_basis"], "{direct}");
        assert_eq!(d.get("exponent"), m.get("exponent"), "{direct}");
    }
}

#[test]
fn association_verdicts_and_exit_codes() {
    let o = run_on_fixture(&["asstest", "--ideal", "I", "--by", "Y", "--json"]);
    assert_eq!(o.code, 3);
    assert_eq!(json_of(&o)["verdict"], "inconclusive");

    let o = run_on_fixture(&["nonasstest", "--ideal", "I", "--by", "Y", "--json"]);
    assert_eq!(o.code, 0);
    assert_eq!(json_of(&o)["verdict"], "not_associated");

    let o = run_on_fixture(&["asstest", "--ideal", "I", "--by", "P"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verdict: associated"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let o = run_on_fixture(&["quotient", "--ideal", "I"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("--by"));

    assert_eq!(run_on_fixture(&["gb", "--ideal", "NOPE"]).code, 2);
    assert_eq!(run(&["gb"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);

    let dir = std::env::temp_dir().join(format!("moddiq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.ideal");
    std::fs::write(&bad, "ring: x\norder: lex\nideal I:\n  x^-1\n").unwrap();
    let o = run(&["gb", "--ideal", "I", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 4, column 5"), "{}", o.stderr);
}

#[test]
fn order_override_changes_the_basis() {
    let d = json_of(&run_on_fixture(&["gb", "--ideal", "J", "--json", "--order", "lex"]));
    assert_eq!(basis(&d), ["x^2 + x", "x*y + y"]);
    let o = run_on_fixture(&["gb", "--ideal", "J", "--order", "block(x:lex; y:grevlex)"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(run_on_fixture(&["gb", "--ideal", "J", "--order", "block(x:lex)"]).code, 2);
}

#[test]
fn expired_timeout_exits_4() {
    let o = run_on_fixture(&["moddiq", "--ideal", "I", "--by", "J", "--timeout", "0"]);
    assert_eq!(o.code, 4, "{}", o.stderr);
}

fn without_wall(o: &Outcome) -> Value {
    let mut v = json_of(o);
    v.as_object_mut().unwrap().remove("wall_micros");
    v
}

#[test]
fn seed_fixes_the_run() {
    for cmd in ["moddiq", "nonasstest", "idecomp"] {
        let args = [cmd, "--ideal", "I", "--by", if cmd == "nonasstest" { "Y" } else { "J" }, "--json", "--seed", "7"];
        let a = run_on_fixture(&args);
        let b = run_on_fixture(&args);
        assert_eq!(without_wall(&a), without_wall(&b), "{cmd}");
        let c = run_on_fixture(&[cmd, "--ideal", "I", "--by", "J", "--json", "--seed", "8"]);
        if cmd == "moddiq" {
            assert_ne!(json_of(&a)["primes_used"], json_of(&c)["primes_used"]);
        }
    }
}

#[test]
fn json_keys_are_sorted() {
    let o = run_on_fixture(&["idecomp", "--ideal", "I", "--json"]);
    assert_eq!(o.code, 0);
    fn check(v: &Value) {
        match v {
            Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                let mut sorted = keys.clone();
                sorted.sort();
                assert_eq!(keys, sorted);
                m.values().for_each(check);
            }
            Value::Array(a) => a.iter().for_each(check),
            _ => {}
        }
    }
    // Check key order in the raw text, not after a re-parse.
    let raw = &o.stdout;
    let pos = |k: &str| raw.find(&format!("\"{k}\":")).unwrap();
    assert!(pos("certified") < pos("cover_verified"));
    assert!(pos("groups") < pos("input_hash"));
    assert!(pos("primes_used") < pos("result_basis"));
    check(&json_of(&o));
    let v = json_of(&o);
    assert_eq!(v["cover_verified"], true);
}

#[test]
fn run_log_is_written() {
    let dir = std::env::temp_dir().join(format!("moddiq-log-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let log = dir.join("run.jsonl");
    let o = run_on_fixture(&["modquotient", "--ideal", "I", "--by", "J", "--log", log.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.lines().count() >= 1);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v.get("prime").is_some(), "{line}");
    }
}

#[test]
fn jobs_flag_does_not_change_results() {
    let a = run_on_fixture(&["moddiq", "--ideal", "I", "--by", "J", "--json", "--jobs", "1"]);
    let b = run_on_fixture(&["moddiq", "--ideal", "I", "--by", "J", "--json", "--jobs", "3"]);
    assert_eq!(without_wall(&a), without_wall(&b));
}

#[test]
fn bench_runs_a_suite_file() {
    let dir = std::env::temp_dir().join(format!("moddiq-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let suite = dir.join("suite.txt");
    std::fs::write(
        &suite,
        "ring: x, y\norder: grevlex\nideal I:\n  x^4 + x^3\n  x^2*y + x*y\nideal J:\n  x^2 + x\n  x*y + y\n\
         case q: quotient I J\ncase d: diq I J timeout=20\n",
    )
    .unwrap();
    let o = run(&["bench", "--suite", suite.to_str().unwrap(), "--json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json_of(&o);
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    for c in cases {
        assert_eq!(c["equal_results"], "yes", "{c}");
    }
    let text = run(&["bench", "--suite", suite.to_str().unwrap()]);
    assert!(text.stdout.lines().count() == 3, "{}", text.stdout);

    let empty = dir.join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["bench", "--suite", empty.to_str().unwrap(), "--json"]);
    assert_eq!(json_of(&o)["cases"], Value::Array(vec![]));
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_moddiq"))
        .args(["diq", "--ideal", "I", "--by", "J", "--input", FIXTURE])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = run_on_fixture(&["diq", "--ideal", "I", "--by", "J"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);

    let out = Command::new(env!("CARGO_BIN_EXE_moddiq"))
        .args(["quotient", "--ideal", "I", "--input", FIXTURE])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
