use std::process::{Command, Output};

use density_core::Rational;
use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_density-lab"))
        .args(args)
        .env_remove("DENSITY_LAB_MAX_DEPTH")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = lab(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn spongy_verify_example() {
    let j = json_of(&[
        "spongy", "verify", "--M", "2/1", "--eps", "1/12", "--depth", "5",
    ]);
    assert_eq!(j["f"], "5/18");
    assert_eq!(j["g_bs"], "5/27");
    assert_eq!(j["measure"], "5/9");
    let checks = j["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["result"] == "pass"));
    assert_eq!(j["all_pass"], true);
}

/// `⋃_{n<12} (−2·4^{−n−1}; −4^{−n−1}) ∪ (4^{−n}/2; 4^{−n})`.
fn half_density_parts() -> Vec<(Rational, Rational)> {
    let mut parts = Vec::new();
    for n in 0..12i64 {
        let s = Rational::pow2(-2 * n);
        let t = Rational::pow2(-2 * n - 2);
        parts.push((-(&t * Rational::integer(2)), -t));
        parts.push((&s / Rational::integer(2), s));
    }
    parts.sort();
    parts
}

fn overlap(parts: &[(Rational, Rational)], lo: &Rational, hi: &Rational) -> Rational {
    parts
        .iter()
        .map(|(a, b)| {
            let l = a.clone().max(lo.clone());
            let h = b.clone().min(hi.clone());
            if l < h {
                h - l
            } else {
                Rational::zero()
            }
        })
        .sum()
}

#[test]
fn density_window_gives_ten_ratios() {
    let parts = half_density_parts();
    let doc = serde_json::json!({
        "parts": parts
            .iter()
            .map(|(a, b)| serde_json::json!({
                "lo": a.to_string(), "hi": b.to_string(), "lo_closed": false, "hi_closed": false
            }))
            .collect::<Vec<_>>()
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("A.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = lab(&[
        "--format",
        "csv",
        "density",
        "window",
        "--set",
        path.to_str().unwrap(),
        "--x",
        "0/1",
        "--scales",
        "dyadic:10",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,eps_approx,window,window_approx,left,left_approx,right,right_approx"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 10);
    let zero = Rational::zero();
    for (k, row) in rows.iter().enumerate() {
        let e = Rational::pow2(-(k as i64) - 1);
        assert_eq!(q(row[0]), e);
        let two = Rational::integer(2);
        assert_eq!(q(row[2]), overlap(&parts, &-&e, &e) / (&e * &two));
        assert_eq!(q(row[4]), overlap(&parts, &-&e, &zero) / &e);
        assert_eq!(q(row[6]), overlap(&parts, &zero, &e) / &e);
        let half = Rational::new(1, 2);
        let w = q(row[2]);
        assert!(w <= half && &half - &w <= Rational::pow2(-24) / (&e * &two));
        let approx: f64 = row[3].parse().unwrap();
        assert!((approx - 0.5).abs() < 1e-4);
    }
}

#[test]
fn sharp_trajectory_climbs() {
    let out = lab(&[
        "--format",
        "csv",
        "reduce",
        "sharp",
        "--r",
        "3/8",
        "--matrix",
        "allzero:4",
        "--depth",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rho: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(rho, ["0", "1", "2", "3"]);
    let j = json_of(&["reduce", "sharp", "--matrix", "allzero:4", "--depth", "4"]);
    let rho: Vec<Value> = j["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rho"].clone())
        .collect();
    assert_eq!(rho, [0, 1, 2, 3]);
}

#[test]
fn matrix_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    std::fs::write(&path, "# row one\ntail=row-ones:1\n00\n00\n").unwrap();
    let j = json_of(&["reduce", "blur-transform", "--code", path.to_str().unwrap()]);
    assert_eq!(j["in_p3"], false);
    assert_eq!(j["output_in_p3"], false);
    let j = json_of(&["reduce", "blur-transform", "--code", "allzero:2"]);
    assert_eq!(j["output_in_p3"], true);
}

#[test]
fn outputs_are_deterministic() {
    let runs = [
        vec!["spongy", "build", "--depth", "3"],
        vec!["--format", "csv", "spongy", "scan", "--depth", "2"],
        vec!["embed", "stage", "--seed", "7", "--stages", "1"],
        vec!["cantor", "thick", "--stages", "3"],
        vec![
            "reduce",
            "compact",
            "--code",
            "rowones:1:1",
            "--depth",
            "4",
            "--columns",
            "8",
        ],
    ];
    for args in runs {
        let a = lab(&args);
        let b = lab(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn emitted_rationals_round_trip() {
    let j = json_of(&["cantor", "fat-cantor", "--depth", "3"]);
    for node in j["nodes"].as_object().unwrap().values() {
        for key in ["lo", "hi", "length", "limit_measure"] {
            let s = node[key].as_str().unwrap();
            assert_eq!(q(s).to_string(), s);
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fat.csv");
    let out = lab(&[
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
        "cantor",
        "fat-cantor",
        "--depth",
        "1",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("error json");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let out = lab(&["spongy", "verify", "--M", "2/0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "parse");

    let out = lab(&["reduce", "sharp", "--matrix", "allzero:x"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "parse");

    let out = lab(&["spongy", "verify", "--M", "2", "--eps", "1/11"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "precondition");

    let out = lab(&["reduce", "sharp", "--r", "1/3", "--matrix", "allzero:2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = lab(&[
        "--format",
        "csv",
        "density",
        "window",
        "--set",
        "{\"parts\":[}",
        "--x",
        "0",
        "--scales",
        "1/2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn depth_ceiling_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_density-lab"))
        .args(["cantor", "fat-cantor", "--depth", "5"])
        .env("DENSITY_LAB_MAX_DEPTH", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "precondition");
    let out = lab(&["reduce", "sharp", "--matrix", "allzero:2", "--depth", "25"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_all_passes() {
    let j = json_of(&["check", "all"]);
    assert_eq!(j["all_pass"], true, "{j}");
}
