use std::path::PathBuf;
use std::process::{Command, Output};

fn cremona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cremona-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dh_demo_prints_a_transcript() {
    let o = cremona(&["dh-demo", "--n", "8", "--ring", "Z:65536", "--na", "5", "--nb", "7", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("TRANSCRIPT v1\n"));
    for part in ["ring Z 65536", "map base", "map c_A", "map c_B", "shared-digest "] {
        assert!(out.contains(part), "missing {part}");
    }
}

#[test]
fn same_seed_same_output() {
    let args = ["dh-demo", "--n", "8", "--ring", "F:127", "--na", "3", "--nb", "4", "--seed", "9"];
    let (a, b) = (cremona(&args), cremona(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = cremona(&["dh-demo", "--n", "8", "--ring", "F:127", "--na", "3", "--nb", "4", "--seed", "10"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn small_graph_checks_out() {
    let o = cremona(&["graph", "verify", "--k", "3", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("order 54"));
    let girth: usize = out
        .lines()
        .find_map(|l| l.strip_prefix("girth "))
        .and_then(|g| g.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(girth >= 8);
}

#[test]
fn tiny_ring_is_a_usage_error() {
    let o = cremona(&["dh-demo", "--n", "8", "--ring", "Z:2", "--na", "3", "--nb", "4", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("needs at least 3 regular elements"));
}

#[test]
fn seed_is_required() {
    for args in [
        &["dh-demo", "--n", "8", "--ring", "Z:256", "--na", "3", "--nb", "4"][..],
        &["keygen", "--n", "8", "--ring", "Z:256", "--p", "4"][..],
    ] {
        let o = cremona(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("--seed"));
    }
}

#[test]
fn keygen_encrypt_decrypt_round_trip() {
    let (public, secret) = (scratch("rt-public.txt"), scratch("rt-secret.txt"));
    let o = cremona(&[
        "keygen",
        "--n",
        "10",
        "--ring",
        "Z:256",
        "--p",
        "6",
        "--seed",
        "4",
        "--out",
        public.to_str().unwrap(),
        "--export-secret",
        secret.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let plain = "1,2,3,4,5,6,7,8,9,250";
    let enc = cremona(&["encrypt", "--public", public.to_str().unwrap(), "--input", plain]);
    assert_eq!(enc.status.code(), Some(0), "{}", stderr(&enc));
    let cipher = stdout(&enc).trim().to_string();
    assert_ne!(cipher, plain);
    let dec = cremona(&["decrypt", "--secret", secret.to_str().unwrap(), "--input", &cipher]);
    assert_eq!(dec.status.code(), Some(0), "{}", stderr(&dec));
    assert_eq!(stdout(&dec).trim(), plain);
}

#[test]
fn keygen_without_export_writes_no_secret() {
    let o = cremona(&["keygen", "--n", "6", "--ring", "F:127", "--p", "4", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("STABLEMAP v1\n"));
    assert!(!out.contains("SECRET"));
}

#[test]
fn corrupted_map_reports_its_line() {
    let path = scratch("corrupt.txt");
    let o = cremona(&["keygen", "--n", "6", "--ring", "Z:256", "--p", "4", "--seed", "1"]);
    let text = stdout(&o);
    let broken: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 4 { l.replacen("coord 2:", "coord 2 =", 1) } else { l.to_string() })
        .collect();
    std::fs::write(&path, broken.join("\n") + "\n").unwrap();
    let e = cremona(&["encrypt", "--public", path.to_str().unwrap(), "--input", "1,2,3,4,5,6"]);
    assert_eq!(e.status.code(), Some(1));
    assert!(stderr(&e).contains("line 5"), "{}", stderr(&e));
    let v = cremona(&["verify-suite", "--only", "1", "--stablemap", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("FAIL stablemap"));
}

#[test]
fn walks_run_and_expand() {
    let o = cremona(&["walk", "run", "--ring", "F:7", "--n", "4", "--walk", "1,2", "--vertex", "P 1,2,3,4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("P "));
    let s = cremona(&["walk", "symbolic", "--ring", "F:7", "--n", "3", "--zwalk", "1:2"]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).starts_with("STABLEMAP v1\nring F 7\n"));
    let odd = cremona(&["walk", "run", "--ring", "F:7", "--n", "4", "--walk", "1,2,3", "--vertex", "P 1,2,3,4"]);
    assert_eq!(odd.status.code(), Some(2));
}

#[test]
fn verify_suite_single_criterion() {
    let o = cremona(&["verify-suite", "--only", "1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 2);
}

#[test]
fn bench_limits_are_usage_errors() {
    let o = cremona(&["bench", "keygen", "--n", "500", "--p", "10", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
