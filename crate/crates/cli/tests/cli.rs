use std::path::PathBuf;
use std::process::{Command, Output};

fn bq(args: &[&str]) -> Output {
    bq_env(args, &[])
}

fn bq_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bq"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run bq")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// `x1,x2 -> y1,y2` lines of `X -> X + (t1, t2)` over GF(13).
fn translation_table(t1: u64, t2: u64) -> String {
    let mut s = String::from("# translation\n");
    for x1 in 0..13 {
        for x2 in 0..13 {
            s.push_str(&format!(
                "{x1},{x2} -> {},{}\n",
                (x1 + t1) % 13,
                (x2 + t2) % 13
            ));
        }
    }
    s
}

#[test]
fn verify_identities_passes() {
    let o = bq(&["verify-identities", "--field", "GF(13)", "--exhaustive"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("28561 pairs"));
    assert!(stdout(&o).ends_with("result: pass\n"));
}

#[test]
fn decompose_expression() {
    let o = bq(&[
        "decompose",
        "--field",
        "GF(13)",
        "--map",
        "translate(2,3) . rot(0,1)",
        "--exhaustive",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("map: translate(2, 3) . rot(0, 1)"));
    assert!(
        out.contains("reconstruction=(X -> [[0, 12], [1, 0]] X + (2, 3)) o (id, id)"),
        "{out}"
    );
}

#[test]
fn decompose_lorentz_over_tower() {
    let o = bq(&[
        "decompose-lorentz",
        "--field",
        "Q[sqrt 2][sqrt -1]",
        "--map",
        "hom(conj@1) . translate(1,0)",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("gamma=conj@1"));
    assert!(stdout(&o).contains("branch=theta"));
}

#[test]
fn chains() {
    let o = bq(&[
        "chain",
        "--from",
        "(0,0)",
        "--to",
        "(7/3,22/5)",
        "--mode",
        "rational",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("prime factor 3"), "{}", stdout(&o));
    let o = bq(&["chain", "--from", "(0,0)", "--to", "(7/3,22/5)"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = bq(&[
        "chain",
        "--from",
        "(0,0)",
        "--to",
        "(8/5,1/5)",
        "--mode",
        "rational",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = bq(&["imaginary-chain", "--point", "(2*i, 0)"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("edge=1 phi=1 psi=4"));
    let o = bq(&["imaginary-chain", "--point", "(1, 2)"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn table_files() {
    let path = temp_file("shift.txt", &translation_table(1, 2));
    let p = path.to_str().unwrap();
    let o = bq(&["decompose", "--field", "GF(13)", "--table", p]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("X + (1, 2)) o (id, id)"));

    let broken = translation_table(1, 2).replace("0,1 -> 1,3", "0,1 -> 5,5");
    let path = temp_file("broken.txt", &broken);
    let o = bq(&[
        "decompose",
        "--field",
        "GF(13)",
        "--table",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("error: images do not form an orthonormal frame"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let corpus: &[&[&str]] = &[
        &["decompose", "--field", "GF(5)", "--map", "swap"],
        &["decompose", "--field", "GF(13)", "--map", "rot(1,1)"],
        &["decompose", "--field", "GF(13)", "--map", "translate(1,"],
        &["decompose", "--field", "Q", "--map", "xi"],
        &["decompose", "--field", "Q", "--map", "hom(conj@1)"],
        &["decompose", "--field", "Q", "--map", "lambda(0)"],
        &[
            "decompose",
            "--field",
            "GF(13)",
            "--table",
            "/nonexistent/table.txt",
        ],
        &["decompose", "--field", "GF(13)"],
        &["verify-identities", "--field", "Q[i]", "--exhaustive"],
        &["verify-identities", "--exhaustive", "--samples", "3"],
        &[
            "chain", "--field", "GF(13)", "--from", "(0,0)", "--to", "(1,0)",
        ],
        &["chain", "--from", "(0,0", "--to", "(1,0)"],
        &["enumerate-ortho", "--field", "Q"],
        &["search-preservers", "--field", "Q[i]"],
        &["no-such-command"],
    ];
    for args in corpus {
        let o = bq(args);
        assert_eq!(
            code(&o),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn verdict_failures_exit_1() {
    let o = bq(&["decompose", "--field", "Q[i]", "--map", "xi"]);
    assert_eq!(code(&o), 1);
    let o = bq(&["search-preservers", "--budget", "500"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL census: incomplete"));
    assert!(stdout(&o).contains("PASS no anomalies"));
}

#[test]
fn json_reports_are_line_delimited_and_reproducible() {
    let args = ["witness-nonisometry", "--format", "json"];
    let a = bq(&args);
    let b = bq(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect();
    let report = &lines.last().unwrap()["report"];
    assert_eq!(report["command"], "witness-nonisometry");
    assert_eq!(report["passed"], true);
    assert_eq!(lines[0]["record"]["phi"], "r1");
    assert_eq!(lines[0]["record"]["image_phi"], "-r1");

    let c = bq(&["witness-nonisometry", "--format", "json", "--seed", "7"]);
    assert_eq!(code(&c), 0);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn worker_count_does_not_change_reports() {
    let args = [
        "search-preservers",
        "--budget",
        "3000",
        "--list",
        "--format",
        "json",
    ];
    let one = bq_env(&args, &[("BQ_WORKERS", "1")]);
    let four = bq_env(&args, &[("BQ_WORKERS", "4")]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(code(&one), code(&four));
}

#[test]
fn enumerate_ortho_lists_group() {
    let o = bq(&["enumerate-ortho", "--field", "GF(17)", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 33);
    assert!(text.lines().next().unwrap().contains("[[1, 0], [0, 1]]"));
}
