use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankcover")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.sv");
    std::fs::write(&file, "0^3\n").unwrap();
    let f = file.to_str().unwrap();
    let ok = bin(&["verify", f, "-r", "1", "--field", "gf(2^2)", "--length", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("covering radius: 1"));
    let bad = bin(&["verify", f, "-r", "0", "--field", "gf(2^2)", "--length", "2"]);
    assert_eq!(bad.status.code(), Some(1));
    // no header and no --field
    assert_eq!(bin(&["verify", f, "-r", "1"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "/nonexistent.sv", "-r", "1"]).status.code(), Some(2));
}

#[test]
fn verify_published_code_json() {
    let o = bin(&["--json", "verify", &data("codes/gf16_n3_r2_k7.sv"), "-r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["covering_radius"], 2);
    assert_eq!(v["size"], 7);
}

#[test]
fn intersect_values() {
    let o = bin(&["intersect", "-m", "5", "-n", "3", "-r", "2", "-s", "2", "-d", "3"]);
    assert_eq!(stdout(&o).trim(), "1232");
    let o = bin(&["intersect", "-m", "6", "-n", "4", "-r", "3", "-s", "3", "-d", "4"]);
    assert_eq!(stdout(&o).trim(), "756800");
    // over the cap
    let o = bin(&["--cap", "1024", "intersect", "-m", "4", "-n", "3", "-r", "2", "-s", "2", "-d", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_report() {
    let o = bin(&["--json", "bound", "-m", "4", "-n", "4", "-r", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best_lower"], "293");
    assert_eq!(v["entries"][0]["value"], "290");
    let o = bin(&["bound", "-m", "5", "-n", "4", "-r", "2"]);
    assert!(stdout(&o).contains("256"));
    assert_eq!(bin(&["bound", "-m", "4", "-n", "4"]).status.code(), Some(2));
    assert_eq!(bin(&["bound", "-q", "4", "-m", "2", "-n", "2", "-r", "1"]).status.code(), Some(2));
}

#[test]
fn construct_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("jsl.sv");
    let o = bin(&["construct", "jsl", "-m", "3", "-n", "3", "-r", "1", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("jsl.json")).unwrap()).unwrap();
    assert_eq!(cert["radius_verified"], true);
    assert_eq!(bin(&["verify", out.to_str().unwrap(), "-r", "1"]).status.code(), Some(0));
    let o = bin(&["construct", "mrd", "-m", "2", "-n", "2", "-d", "2"]);
    assert!(stdout(&o).starts_with("# gf(2^2) n=2"));
}

#[test]
fn volume_and_tables() {
    let o = bin(&["volume", "-m", "2", "-n", "2", "-r", "1"]);
    assert!(stdout(&o).contains("= 10"));
    let o = bin(&["table", "--analytic-only", "--max-m", "4", "--csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4,4,1,f,293,"));
    let o = bin(&["table", "--linear", "--diff", &data("table2_golden.csv")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
