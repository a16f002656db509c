use std::fs;
use std::process::Command;

use sz_ovoid::designs::verify_2design;
use sz_ovoid::export::design_from_json;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sz-ovoid"))
}

#[test]
fn verify_q8_passes() {
    let out = bin().args(["verify", "--q", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("closure order 29120"));
    assert!(text.contains("setwise stabilizer of Delta2 = K (56 elements)"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_q8_alternate_poly() {
    let out = bin().args(["verify", "--q", "8", "--poly", "0xD"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("v=65 k=8 lambda=7 b=520 r=64"));
    assert!(text.contains("v=65 k=56 lambda=385 b=520 r=448"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["build", "--q", "10"],
        vec!["build", "--q", "2"],
        vec!["build", "--q", "8", "--poly", "0xF"],
        vec!["build"],
        vec!["build", "--q", "8", "--family", "4"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = bin().args(["build", "--q", "10"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("q must be an odd power of 2, q ≥ 8"));
}

#[test]
fn export_files_roundtrip_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    for _ in 0..2 {
        let out = bin()
            .args(["export", "--q", "8", "--format", "json", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let f2 = fs::read_to_string(dir.path().join("d.f2.json")).unwrap();
    let f3 = fs::read_to_string(dir.path().join("d.f3.json")).unwrap();
    for text in [&f2, &f3] {
        let d = design_from_json(text).unwrap();
        assert!(verify_2design(&d).passed());
    }

    let again = bin().args(["export", "--q", "8", "--family", "2", "--format", "json"]).output().unwrap();
    assert_eq!(String::from_utf8(again.stdout).unwrap(), f2);
}

#[test]
fn export_matrix_and_blocks_to_stdout() {
    let out = bin().args(["export", "--q", "8", "--family", "2", "--format", "matrix"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 66);
    assert_eq!(lines[0], "65 520 8 7 64");
    assert!(lines[1..].iter().all(|l| l.len() == 520));

    let out = bin().args(["export", "--q", "8", "--family", "2", "--format", "blocks"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 521);
    assert!(text.starts_with("# q=8 family=2"));
}

#[test]
fn build_prints_summary() {
    let out = bin().args(["build", "--q", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().collect::<Vec<_>>(),
        [
            "q=8 family=2 v=65 k=8 lambda=7 b=520 r=64 gcd(r,lambda)=1",
            "q=8 family=3 v=65 k=56 lambda=385 b=520 r=448 gcd(r,lambda)=7",
        ]
    );
}
