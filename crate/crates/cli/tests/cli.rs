use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_multweyl"));
    c.env_remove("WEYL_THREADS");
    c
}

fn tmp(name: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_file(&p);
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn vmvt_small_count() {
    let v = json_of(&run(&["vmvt", "--r", "2", "--d", "2", "--V", "3"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["J"], 15);
    assert_eq!(v["params"]["r"], 2);
    assert_eq!(v["params"]["V"], 3);
}

#[test]
fn vmvt_interval_file() {
    let path = tmp("intervals.txt");
    std::fs::write(&path, "# two copies of (0,3]\n0 3\n10,13\n").unwrap();
    let v = json_of(&run(&[
        "vmvt",
        "--r",
        "2",
        "--d",
        "2",
        "--intervals",
        path.to_str().unwrap(),
    ]));
    assert_eq!(v["result"]["J"], 30);
}

#[test]
fn sharpness_reaches_prime_gap() {
    let v = json_of(&run(&["sharpness", "--phase", "sqrt:2*x", "--N", "1000"]));
    assert_eq!(v["result"]["lower_bound"], 73);
    assert!(v["result"]["abs"].as_f64().unwrap() >= 73.0);
}

#[test]
fn unknown_flag_is_a_parameter_error() {
    let out_path = tmp("never.json");
    let out = run(&[
        "vmvt",
        "--r",
        "2",
        "--d",
        "2",
        "--V",
        "3",
        "--bogus",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[parameter]"));
}

#[test]
fn resource_guard_exit_code() {
    let out = run(&["roots", "--poly", "x^2+1", "--N", "2000000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[resource]"));
}

#[test]
fn irreducibility_gate() {
    assert_eq!(
        run(&["roots", "--poly", "x^2-1", "--N", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["roots", "--poly", "x^4+1", "--N", "10"])
            .status
            .code(),
        Some(2)
    );
    let v = json_of(&run(&[
        "roots",
        "--poly",
        "x^4+1",
        "--N",
        "10",
        "--assume-irreducible",
    ]));
    assert_eq!(v["result"]["irreducibility"]["kind"], "asserted");
}

#[test]
fn roots_csv_from_extension() {
    let path = tmp("roots.csv");
    let out = run(&[
        "roots",
        "--poly",
        "x^2+1",
        "--N",
        "65",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,rho,roots");
    assert_eq!(lines[5], "5,2,2 3");
    assert_eq!(lines[65], "65,4,8 18 47 57");
}

#[test]
fn config_is_merged_under_flags() {
    let cfg = tmp("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"command": "vmvt", "seed": 9, "params": {"r": 2, "d": 1, "V": 3}}"#,
    )
    .unwrap();
    let v = json_of(&run(&[
        "vmvt",
        "--config",
        cfg.to_str().unwrap(),
        "--d",
        "2",
    ]));
    assert_eq!(v["result"]["J"], 15);
    assert_eq!(v["params"]["d"], 2);
    assert_eq!(v["params"]["seed"], 9);

    std::fs::write(&cfg, r#"{"params": {"r": 2, "d": 2, "V": 3, "colour": 1}}"#).unwrap();
    assert_eq!(
        run(&["vmvt", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&cfg, r#"{"verbose": true}"#).unwrap();
    assert_eq!(
        run(&["vmvt", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&cfg, r#"{"command": "roots"}"#).unwrap();
    assert_eq!(
        run(&["vmvt", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn charsum_fields() {
    let v = json_of(&run(&[
        "charsum",
        "--k",
        "4",
        "--chi-index",
        "1",
        "--phase",
        "sqrt:2*x^2",
        "--N",
        "1000",
    ]));
    let r = &v["result"];
    assert_eq!(r["k"], 4);
    assert_eq!(r["chi"]["conductor"], 4);
    for key in ["sum_re", "sum_im", "normalized", "N"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert_eq!(
        run(&[
            "charsum",
            "--k",
            "4",
            "--chi-index",
            "2",
            "--phase",
            "x",
            "--N",
            "10"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases: [&[&str]; 4] = [
        &[
            "sum",
            "--f",
            "liouville",
            "--phase",
            "sqrt:2*x^2 + golden*x",
            "--N",
            "50000",
            "--report",
            "7,0",
        ],
        &[
            "partition",
            "--N",
            "10007",
            "--s",
            "100",
            "--weight",
            "phase",
        ],
        &[
            "equidist",
            "--poly",
            "x^2+1",
            "--phase",
            "sqrt:2*x",
            "--N",
            "20000",
            "--h1",
            "2",
            "--h2",
            "3",
            "--discrepancy",
        ],
        &["sharpness", "--phase", "pi*x^2", "--N", "2000"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for threads in ["1", "4"] {
            let path = tmp(&format!("det_{i}_{threads}.json"));
            let out = run(&[
                args,
                &["--threads", threads, "--out", path.to_str().unwrap()][..],
            ]
            .concat());
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(std::fs::read(&path).unwrap());
        }
        let env_out = bin().args(*args).env("WEYL_THREADS", "3").output().unwrap();
        assert!(env_out.status.success());
        assert_eq!(outputs[0], outputs[1], "{args:?}");
        assert_eq!(outputs[0], env_out.stdout, "{args:?}");
    }
}
