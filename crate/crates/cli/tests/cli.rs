use std::fs;
use std::process::Command;

use serde_json::Value;

use euclid_oracle::arith;

fn euclid(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_euclid"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (value, code)
}

#[test]
fn unit_of_sqrt_two() {
    let (v, code) = euclid(&["unit", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["x"].as_u64(), v["y"].as_u64(), v["norm"].as_i64()),
        (Some(1), Some(1), Some(-1))
    );
}

#[test]
fn class_number_of_sqrt_ten() {
    let (v, code) = euclid(&["classnumber", "--d", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["class_number"], 2);
}

#[test]
fn sieve_matches_naive_loop() {
    let (v, code) = euclid(&["sieve", "--a", "3", "--f", "16", "--xmax", "1000"]);
    assert_eq!(code, 0);
    // with epsilon = 1 every prime p = 3 (mod 16) up to 1000 is a candidate;
    // (p - 1)/2 < 1000^(9/20) forces a prime or a windowed semiprime q1 q2
    let naive = arith::primes_in_progression(2, 1000, 3, 16)
        .into_iter()
        .filter(|&p| {
            let f = arith::factor((p - 1) / 2);
            let n: u32 = f.iter().map(|&(_, e)| e).sum();
            match n {
                1 => true,
                2 => {
                    let q1 = f[0].0 as f64;
                    q1 > 1000f64.powf(0.28) && q1 < 1000f64.powf(0.45)
                }
                _ => false,
            }
        })
        .count();
    assert_eq!(v[0]["count"], naive as u64);
}

#[test]
fn sieve_csv_and_grid() {
    let out = Command::new(env!("CARGO_BIN_EXE_euclid"))
        .args([
            "sieve",
            "--a",
            "3",
            "--f",
            "16",
            "--xmax",
            "5000",
            "--grid",
            "1000,2000",
            "--csv",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "x,count,normalized,prime,windowed_semiprime,rejected"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1000,"));
}

#[test]
fn kuroda_command() {
    let (v, code) = euclid(&["kuroda", "--q", "3", "--r", "5", "--s", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["class_number"], 2);
    assert_eq!(v["radicands"], serde_json::json!([3, 35, 105]));
}

#[test]
fn errors_are_structured() {
    let (v, code) = euclid(&["classnumber", "--d", "12"]);
    assert_eq!(code, 3);
    assert_eq!(v["kind"], "argument");
    let (_, code) = euclid(&[
        "sieve", "--a", "3", "--f", "16", "--xmax", "1000", "--b", "0.2",
    ]);
    assert_eq!(code, 3);
    let (_, code) = euclid(&["classnumber"]);
    assert_eq!(code, 64);
    let (_, code) = euclid(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn residues_and_multi_from_files() {
    let dir = std::env::temp_dir().join(format!("euclid-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let field = dir.join("field.json");
    fs::write(
        &field,
        r#"{"fields": [{"k": {"radicands": [3, 35]}, "h": {"radicands": [3, 5, 7]}}]}"#,
    )
    .unwrap();
    let (v, code) = euclid(&["residues", "--field", field.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["f"].as_u64(), v["count"].as_u64()),
        (Some(1680), Some(16))
    );

    let input = dir.join("multi.json");
    fs::write(&input, r#"{"radicands": [2, 5, 13]}"#).unwrap();
    let out = dir.join("cert.json");
    let (_, code) = euclid(&[
        "certify",
        "multi",
        "--kind",
        "three-quadratic",
        "--input",
        input.to_str().unwrap(),
        "--xs",
        "20000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let cert: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["verdict"]["status"], "CERTIFIED");
    assert_eq!(cert["kind"], "three_quadratic");

    let (_, code) = euclid(&[
        "certify",
        "multi",
        "--kind",
        "two-cubic",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    fs::remove_dir_all(&dir).unwrap();
}
