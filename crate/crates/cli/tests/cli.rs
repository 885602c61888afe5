use orbit_cli::{run, EXIT_INPUT, EXIT_NO, EXIT_RESOURCE, EXIT_UNDECIDED, EXIT_YES};
use orbit_core::arith::parse_rational;
use serde_json::Value;
use std::path::PathBuf;

const ONE_DIM: &str = "n 1\nA 2\nx 1\ny 4\ndelta 1/2\n";
const ROTATION: &str = "# irrational rotation\nn 2\nA 3/5 -4/5\nA 4/5 3/5\nx 1 0\ny 2 0\ndelta 1/2\n";

fn file(name: &str, text: &str) -> String {
    let p: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn orbit(args: &[&str]) -> (i32, String) {
    run(std::iter::once("orbit").chain(args.iter().copied()))
}

#[test]
fn decide_verdicts_and_exit_codes() {
    let f = file("one.txt", ONE_DIM);
    assert_eq!(orbit(&["decide", &f]), (EXIT_YES, "YES k=2".to_string()));

    let f = file("rot_half.txt", ROTATION);
    let (code, out) = orbit(&["decide", &f]);
    assert_eq!(code, EXIT_NO);
    assert!(out.starts_with("NO bound="), "{out}");

    let f = file("rot_one.txt", &ROTATION.replace("delta 1/2", "delta 1"));
    let (code, out) = orbit(&["decide", &f]);
    assert_eq!(code, EXIT_UNDECIDED);
    assert!(out.starts_with("UNDECIDED boundary lower="), "{out}");
    assert!(!out.contains('\n'));
}

#[test]
fn input_errors() {
    let f = file("short.txt", "n 2\nA 1 0\nx 1 0\ny 0 0\ndelta 1\n");
    let (code, out) = orbit(&["decide", &f]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("line 3"), "{out}");

    let (code, _) = orbit(&["decide", "/nonexistent/instance.txt"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _) = orbit(&["decide"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _) = orbit(&["frobnicate", "x"]);
    assert_eq!(code, EXIT_INPUT);
    let f = file("one_flags.txt", ONE_DIM);
    let (code, _) = orbit(&["decide", &f, "--max-j", "many"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, out) = orbit(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("decide"));
}

#[test]
fn resource_caps() {
    let f = file("two_no.txt", "n 2\nA 2 0\nA 0 2\nx 1 0\ny 5 0\ndelta 1/2\n");
    assert_eq!(orbit(&["decide", &f]).0, EXIT_NO);
    let (code, out) = orbit(&["decide", &f, "--sweep-cap", "1"]);
    assert_eq!(code, EXIT_RESOURCE, "{out}");
    assert!(out.contains("sweep-cap"));
}

#[test]
fn json_carries_certificates() {
    let f = file("rot_json.txt", ROTATION);
    let (code, out) = orbit(&["decide", &f, "--json", "--approx", "6"]);
    assert_eq!(code, EXIT_NO);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["verdict"], "NO");
    let cert = &v["result"]["certificates"];
    assert_eq!(cert["gap"]["outcome"], "RADIUS_BELOW_D");
    assert!(cert["gap"]["eta"].is_string());
    assert!(cert["contraction"].is_object());
    assert_eq!(v["instance"]["delta"], "1/2");
    assert_eq!(v["approx"]["delta"], "0.500000");

    let f = file("two_json.txt", "n 2\nA 2 0\nA 0 2\nx 1 0\ny 5 0\ndelta 1/2\n");
    let v: Value = serde_json::from_str(&orbit(&["decide", &f, "--json"]).1).unwrap();
    assert_eq!(v["result"]["certificates"]["limit_set"], "EMPTY");
    assert!(v["result"]["certificates"]["growth"]["c"].is_string());
}

#[test]
fn limitset_and_distance() {
    let f = file("two_ls.txt", "n 2\nA 2 0\nA 0 2\nx 1 0\ny 5 0\ndelta 1/2\n");
    let (code, out) = orbit(&["limitset", &f]);
    assert_eq!(code, 0);
    assert!(out.starts_with("EMPTY c="), "{out}");

    let f = file("rot_ls.txt", ROTATION);
    let (_, out) = orbit(&["limitset", &f]);
    assert!(out.starts_with("TORUS period=1 free_phases=1"), "{out}");
    let v: Value = serde_json::from_str(&orbit(&["limitset", &f, "--json"]).1).unwrap();
    assert_eq!(v["kind"], "torus");
    assert_eq!(v["modes"].as_array().unwrap().len(), 2);

    let (code, out) = orbit(&["distance", &f, "--level", "5", "--approx", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("DISTANCE level=5 lower="), "{out}");
    let v: Value = serde_json::from_str(&orbit(&["distance", &f, "--level", "5", "--json"]).1).unwrap();
    let upper = parse_rational(v["distance"]["upper"].as_str().unwrap()).unwrap();
    let gap = upper - parse_rational("1").unwrap();
    assert!(gap > parse_rational("0").unwrap() && gap <= parse_rational("1/32").unwrap());
}

#[test]
fn orbit_prefix_is_exact() {
    let f = file("quarter.txt", "n 2\nA 0 -1\nA 1 0\nx 1/2 0\ny 0 0\ndelta 1\n");
    let (code, out) = orbit(&["orbit", &f, "--horizon", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["k=0 1/2 0", "k=1 0 1/2", "k=2 -1/2 0", "k=3 0 -1/2", "k=4 1/2 0"]);
    let v: Value = serde_json::from_str(&orbit(&["orbit", &f, "--horizon", "1", "--json"]).1).unwrap();
    assert_eq!(v["points"][1]["point"][1], "1/2");
}
