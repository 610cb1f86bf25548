//! Criterion 9: byte-identical CLI outputs across repeated runs and across
//! thread counts, plus sanity checks of the documented output formats.

use std::process::Command;

fn run(args: &[&str], threads: &str) -> (Vec<u8>, i32) {
    let exe = env!("CARGO_BIN_EXE_sparse-orbits");
    let output = Command::new(exe)
        .args(args)
        .env("SPARSE_ORBIT_THREADS", threads)
        .output()
        .expect("binary runs");
    (output.stdout, output.status.code().unwrap_or(-1))
}

#[test]
fn criterion_9_determinism() {
    let suites: Vec<Vec<&str>> = vec![
        vec!["decompose", "--N", "360", "--C", "2", "--d", "2"],
        vec!["residues", "--N", "48", "--C", "3", "--d", "2"],
        vec![
            "lemma-count", "--q", "101,1009", "--r", "2", "--trials", "5", "--seed", "11",
        ],
        vec![
            "char-sums", "--mode", "second-moment", "--modulus-max", "40", "--window-max", "6",
        ],
        vec!["char-sums", "--mode", "pair-count", "--modulus-max", "60"],
        vec!["cf", "--rule", "power", "--exponent", "5", "--terms", "6", "--first", "2"],
        vec![
            "cf", "--construct", "true", "--q1", "2", "--length", "8", "--prime", "true",
        ],
        vec![
            "rigidity",
            "--system-json",
            r#"{"kind":"skew","cf":{"rule":"power","exponent":6,"terms":7,"first":3},"schedule":{"lower_set":"all"}}"#,
            "--q-indices", "1,2,3",
            "--grid", "128",
        ],
        vec![
            "orbit",
            "--system-json",
            r#"{"kind":"skew","cf":{"quotients":[0,2,20000000,3,2,6,1,4]},"schedule":{"lower_set":"none"}}"#,
            "--C", "2",
            "--checkpoints", "200,2000",
            "--starts", "2",
            "--k-max", "3",
            "--seed", "7",
        ],
        vec!["vdc", "--kind", "random", "--length", "48", "--window", "12", "--count", "20", "--seed", "3"],
        vec!["weyl", "--coeffs", "0,1,2,1", "--q-max", "30", "--difference", "2"],
    ];
    for args in &suites {
        let (first, code) = run(args, "1");
        assert_eq!(code, 0, "nonzero exit for {args:?}");
        assert!(!first.is_empty(), "empty output for {args:?}");
        let (second, _) = run(args, "1");
        assert_eq!(first, second, "two runs differ for {args:?}");
        let (threaded, _) = run(args, "4");
        assert_eq!(first, threaded, "thread counts differ for {args:?}");
    }
    println!("criterion 9 PASS: {} subcommand configs byte-identical across runs and SPARSE_ORBIT_THREADS in {{1, 4}}", suites.len());
}

#[test]
fn csv_outputs_carry_schema_header() {
    for args in [
        vec!["residues", "--N", "12", "--C", "2"],
        vec!["cf", "--quotients", "1,1,1,1,1,1"],
        vec!["vdc", "--kind", "constant", "--length", "8", "--window", "8", "--count", "1"],
    ] {
        let (out, code) = run(&args, "1");
        assert_eq!(code, 0);
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# schema=1\n"), "missing schema line for {args:?}");
    }
}

#[test]
fn documented_examples() {
    // four-term decomposition at N = 15
    let (out, code) = run(&["decompose", "--N", "15", "--C", "2", "--d", "1"], "1");
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(json["combo"]["terms"].as_array().unwrap().len(), 4);

    // Fibonacci denominators
    let (out, _) = run(&["cf", "--quotients", "1,1,1,1,1,1"], "1");
    let text = String::from_utf8(out).unwrap();
    let qs: Vec<&str> = text
        .lines()
        .skip(2)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(qs, vec!["1", "1", "2", "3", "5", "8"]);

    // complete residue system: ratio exactly 1
    let (out, _) = run(
        &["lemma-count", "--q", "5", "--r", "1", "--M", "5", "--N", "5", "--trials", "1"],
        "1",
    );
    let text = String::from_utf8(out).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.ends_with(",1"), "ratio not 1: {last}");

    // schema violations exit with code 2, budget exhaustion with 3
    let (_, code) = run(&["decompose", "--C", "2"], "1");
    assert_eq!(code, 2);
    let (_, code) = run(
        &["cf", "--construct", "true", "--q1", "2", "--length", "5", "--prime", "true",
          "--congruence", "2,0", "--budget", "20"],
        "1",
    );
    assert_eq!(code, 3);
    // every subcommand honors --budget
    for args in [
        vec!["decompose", "--N", "5000", "--budget", "100"],
        vec!["residues", "--N", "5000", "--budget", "100"],
        vec!["lemma-count", "--q", "10007", "--budget", "100"],
        vec!["char-sums", "--modulus-max", "300", "--budget", "100"],
        vec!["rigidity", "--system-json", r#"{"kind":"rotation","cf":{"quotients":[1,1,1,1]}}"#,
             "--q-indices", "1", "--budget", "100"],
        vec!["orbit", "--system-json", r#"{"kind":"rotation","cf":{"quotients":[1,1,1,1]}}"#,
             "--budget", "100"],
        vec!["vdc", "--count", "100", "--budget", "100"],
        vec!["weyl", "--q-max", "50", "--budget", "100"],
    ] {
        let (_, code) = run(&args, "1");
        assert_eq!(code, 3, "budget not honored for {args:?}");
    }
}
