//! The `jdirac` binary: exit codes, golden output and determinism.

mod common;

use std::process::{Command, Output};

use jacobi_dirac::cli::parse;

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn jdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jdirac"))
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = jdirac(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Every command line of the golden fixtures, with the fixture path in
/// position 1.
fn golden_commands() -> Vec<Vec<String>> {
    let table: &[(&str, &[&str])] = &[
        ("contact.jd", &["check-jacobi"]),
        ("broken.jd", &["check-jacobi"]),
        ("parse_error.jd", &["check-jacobi"]),
        ("contact.jd", &["check-dirac", "--distribution", "Dq"]),
        ("contact.jd", &["check-dirac", "--distribution", "Dp"]),
        ("contact.jd", &["check-dirac", "--omega"]),
        (
            "contact.jd",
            &["bracket", "--f", "t", "--g", "t*p", "--mode", "crJ"],
        ),
        (
            "contact.jd",
            &["bracket", "--f", "t", "--g", "t*p", "--mode", "J"],
        ),
        (
            "contact.jd",
            &[
                "bracket",
                "--f",
                "t",
                "--g",
                "p",
                "--mode",
                "L",
                "--distribution",
                "Dq",
            ],
        ),
        (
            "contact.jd",
            &["courant-axioms", "--samples", "10", "--seed", "7"],
        ),
        (
            "poisson2.jd",
            &["courant-axioms", "--samples", "10", "--seed", "7"],
        ),
        ("contact.jd", &["reduce", "--distribution", "Dq"]),
        ("contact.jd", &["reduce", "--distribution", "Dt"]),
        ("contact5.jd", &["reduce", "--submanifold"]),
        (
            "contact5.jd",
            &["reduce", "--distribution", "D2", "--submanifold"],
        ),
        ("contact.jd", &["build-l", "--distribution", "Dq"]),
        ("scaled.jd", &["build-l", "--distribution", "Dq"]),
        ("contact.jd", &["symmetry-reduce", "--fields", "Dq"]),
        ("contact.jd", &["symmetry-reduce", "--fields", "Dp"]),
        ("contact5.jd", &["symmetry-reduce", "--fields", "T"]),
        ("rotation.jd", &["check-dirac", "--distribution", "R"]),
        ("rotation.jd", &["symmetry-reduce", "--fields", "R"]),
        ("poisson2.jd", &["check-submanifold", "--case", "first"]),
        ("contact5.jd", &["check-submanifold", "--case", "second"]),
    ];
    table
        .iter()
        .map(|(file, args)| {
            let mut v = vec![args[0].to_string(), fixture_path(file)];
            v.extend(args[1..].iter().map(|s| s.to_string()));
            v
        })
        .collect()
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    for cmd in golden_commands() {
        let mut args: Vec<&str> = vec!["--json"];
        args.extend(cmd.iter().map(String::as_str));
        let a = jdirac(&args);
        let b = jdirac(&args);
        assert!(!a.stdout.is_empty(), "{cmd:?}");
        assert_eq!(a.stdout, b.stdout, "{cmd:?}");
        assert_eq!(a.status.code(), b.status.code(), "{cmd:?}");
        let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(
            doc["exit"].as_i64(),
            a.status.code().map(i64::from),
            "{cmd:?}"
        );
    }
}

#[test]
fn exit_code_contract() {
    let (code, out, _) = run(&["check-jacobi", &fixture_path("contact.jd")]);
    assert_eq!(code, 0);
    assert!(out.ends_with("result: PASS\n"));

    let (code, out, _) = run(&["check-jacobi", &fixture_path("broken.jd")]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] [E,Λ] = ∂t∧∂p"), "{out}");

    let (code, out, err) = run(&["check-jacobi", &fixture_path("parse_error.jd")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(
        err,
        "error: parse error at line 6, column 1: component (p,q) duplicates (q,p)\n"
    );

    let (code, _, err) = run(&["check-jacobi", &fixture_path("missing.jd")]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"), "{err}");

    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(
        run(&[
            "bracket",
            &fixture_path("contact.jd"),
            "--f",
            "t",
            "--g",
            "q +"
        ])
        .0,
        2
    );
}

#[test]
fn refusals_and_unverified_input_exit_with_one() {
    let (code, _, err) = run(&[
        "symmetry-reduce",
        &fixture_path("contact.jd"),
        "--fields",
        "Dp",
    ]);
    assert_eq!(code, 1);
    assert_eq!(
        err,
        "error: refused: X is not a symmetry: L_XΛ = ∂t∧∂p, L_XE = 0\n"
    );

    let (code, _, _) = run(&[
        "bracket",
        &fixture_path("broken.jd"),
        "--f",
        "t",
        "--g",
        "q",
    ]);
    assert_eq!(code, 1);

    let (code, _, err) = run(&[
        "bracket",
        &fixture_path("contact.jd"),
        "--f",
        "q",
        "--g",
        "t",
        "--mode",
        "L",
        "--distribution",
        "Dq",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("⟨d^φf, X⟩ = 1"), "{err}");
}

#[test]
fn check_jacobi_golden() {
    let (_, out, _) = run(&["check-jacobi", &fixture_path("broken.jd")]);
    assert_eq!(
        out,
        "Jacobi structure\n  [FAIL] [Λ,Λ] + 2E∧Λ = -2*∂t∧∂q∧∂p\n  [FAIL] [E,Λ] = ∂t∧∂p\n  overall: FAIL\nresult: FAIL\n"
    );
}

#[test]
fn reduce_golden() {
    let (code, out, _) = run(&[
        "reduce",
        &fixture_path("contact.jd"),
        "--distribution",
        "Dq",
    ]);
    assert_eq!(code, 0);
    assert!(
        out.ends_with(
            "results\n  reduced chart = (t, p)\n  lambda (t,p) = p\n  e t = 1\nresult: PASS\n"
        ),
        "{out}"
    );

    let (code, out, _) = run(&["reduce", &fixture_path("contact5.jd"), "--submanifold"]);
    assert_eq!(code, 1);
    assert!(
        out.contains("[FAIL] Λ^#(dq2)|_N ∈ TN + π(D) = ∂p2"),
        "{out}"
    );

    let (code, out, _) = run(&[
        "reduce",
        &fixture_path("contact5.jd"),
        "--distribution",
        "D2",
        "--submanifold",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("reduced chart = (t, q1, p1)"), "{out}");
    assert!(out.contains("lambda (q1,p1) = 1"), "{out}");
    assert!(out.contains("lambda (t,p1) = p1"), "{out}");
}

#[test]
fn bracket_modes_agree() {
    let file = fixture_path("contact.jd");
    let a = run(&[
        "bracket", &file, "--f", "t^2 + q", "--g", "p*q", "--mode", "crJ",
    ]);
    let b = run(&[
        "bracket", &file, "--f", "t^2 + q", "--g", "p*q", "--mode", "J",
    ]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}

#[test]
fn build_l_golden() {
    let (code, out, _) = run(&[
        "build-l",
        &fixture_path("scaled.jd"),
        "--distribution",
        "Dq",
    ]);
    assert_eq!(code, 0);
    for line in [
        "  omega lambda (t,p) = p\n",
        "  omega e t = 1\n",
        "  Ω ≡ 0 (mod D) = no\n",
        "  projection is a Jacobi map = no\n",
        "[PASS] quotient of L = [quotient] structure = 0\n",
    ] {
        assert!(out.contains(line), "missing {line:?} in\n{out}");
    }
    let (_, out, _) = run(&[
        "build-l",
        &fixture_path("contact.jd"),
        "--distribution",
        "Dq",
    ]);
    assert!(out.contains("  Ω ≡ 0 (mod D) = yes\n"), "{out}");
    assert!(
        out.contains("  projection is a Jacobi map = yes\n"),
        "{out}"
    );
}

#[test]
fn fixtures_survive_a_print_parse_roundtrip() {
    for name in [
        "contact.jd",
        "broken.jd",
        "scaled.jd",
        "contact5.jd",
        "poisson2.jd",
        "rotation.jd",
    ] {
        let f = common::fixture(name);
        let again = parse(&f.to_string()).unwrap();
        assert_eq!(again, f, "{name}");
    }
}
