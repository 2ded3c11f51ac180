//! End-to-end runs of the `stokeslab` binary.

use std::io::Write;
use std::process::{Command, Stdio};

use stokeslab::format::{Body, Document, PresentationDoc};
use stokeslab_core::presentation::Constr0Presentation;

struct Run {
    code: i32,
    stdout: String,
}

fn run(args: &[&str], stdin: &str, env: Option<(&str, &str)>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stokeslab"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("STOKESLAB_SEED");
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run { code: out.status.code().unwrap(), stdout: String::from_utf8(out.stdout).unwrap() }
}

fn e2_doc() -> String {
    Document::new(Body::Presentation(PresentationDoc::from_presentation(&Constr0Presentation::two_point_example())))
        .to_json()
}

fn verdict(stdout: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(stdout).unwrap();
    v["payload"]["verdict"].as_str().unwrap().to_string()
}

#[test]
fn validate_accepts_the_example() {
    let r = run(&["validate"], &e2_doc(), None);
    assert_eq!(r.code, 0);
    assert_eq!(verdict(&r.stdout), "ok");
}

#[test]
fn compare_agrees_on_the_diagonal() {
    let r = run(&["compare", "--theta", "1/1"], &e2_doc(), None);
    assert_eq!(r.code, 0);
    assert_eq!(verdict(&r.stdout), "agree");
    let q = run(&["--quiet", "compare", "--theta", "1/1"], &e2_doc(), None);
    assert_eq!(q.stdout, "agree\n");
}

#[test]
fn monodromy_of_the_example() {
    let r = run(&["monodromy"], &e2_doc(), None);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let m = &v["payload"]["details"]["total_monodromy"];
    assert_eq!(m, &serde_json::json!([["7/1", "1/1"], ["15/1", "3/1"]]));
}

#[test]
fn laplace_then_inverse_laplace() {
    let sd = run(&["laplace", "--theta", "1/1"], &e2_doc(), None);
    assert_eq!(sd.code, 0);
    let v: serde_json::Value = serde_json::from_str(&sd.stdout).unwrap();
    assert_eq!(v["kind"], "stokes_data");
    assert_eq!(v["payload"]["s"], serde_json::json!([["1/1", "1/3"], ["0/1", "1/1"]]));
    assert_eq!(v["payload"]["q"], serde_json::json!([["2/1", "0/1"], ["15/1", "3/1"]]));
    let back = run(&["inverse-laplace"], &sd.stdout, None);
    assert_eq!(back.code, 0);
    let p = Document::parse(&back.stdout).unwrap().presentation().unwrap();
    assert_eq!(p.maps, Constr0Presentation::two_point_example().maps);
}

#[test]
fn cohomology_and_roundtrip_pass() {
    let r = run(&["cohomology", "--xi", "0,0"], &e2_doc(), None);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["payload"]["details"]["h1_dim"], 1);
    assert_eq!(v["payload"]["details"]["h0_dim"], 0);
    let rt = run(&["roundtrip", "--seed", "3"], &e2_doc(), None);
    assert_eq!(rt.code, 0);
    assert_eq!(verdict(&rt.stdout), "pass");
}

#[test]
fn generate_is_deterministic() {
    let a = run(&["generate", "--seed", "7", "--n", "3", "--maxdim", "2"], "", None);
    let b = run(&["generate", "--seed", "7", "--n", "3", "--maxdim", "2"], "", None);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let p = Document::parse(&a.stdout).unwrap().presentation().unwrap();
    assert_eq!(p.n(), 3);
    assert!(p.dims.iter().all(|&d| (1..=2).contains(&d)));
    let validated = run(&["validate"], &a.stdout, None);
    assert_eq!(validated.code, 0);
}

#[test]
fn seed_variable_overrides_the_flag() {
    let flag = run(&["generate", "--seed", "11", "--n", "2", "--maxdim", "2"], "", None);
    let env = run(&["generate", "--seed", "5", "--n", "2", "--maxdim", "2"], "", Some(("STOKESLAB_SEED", "11")));
    let other = run(&["generate", "--seed", "5", "--n", "2", "--maxdim", "2"], "", None);
    assert_eq!(flag.stdout, env.stdout);
    assert_ne!(other.stdout, env.stdout);
}

#[test]
fn bad_input_exits_with_two() {
    let r = run(&["validate"], "{ not json", None);
    assert_eq!(r.code, 2);
    assert_eq!(verdict(&r.stdout), "error");
    let singular = e2_doc().replacen("\"2/1\"", "\"0/1\"", 1);
    assert_eq!(run(&["validate"], &singular, None).code, 2);
    assert_eq!(run(&["laplace", "--theta", "0/0"], &e2_doc(), None).code, 2);
    assert_eq!(run(&["frobnicate"], "", None).code, 2);
    assert_eq!(run(&["generate", "--n", "9"], "", None).code, 2);
}

#[test]
fn small_selftest_passes() {
    let r = run(&["--quiet", "selftest", "--instances", "5"], "", None);
    assert_eq!(r.stdout, "pass\n");
    assert_eq!(r.code, 0);
}
