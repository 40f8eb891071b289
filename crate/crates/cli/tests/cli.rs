use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superharmonic"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn validator() -> (boon::Schemas, boon::SchemaIndex) {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let mut schemas = boon::Schemas::new();
    let mut compiler = boon::Compiler::new();
    compiler
        .add_resource("urn:superharmonic:report", schema)
        .unwrap();
    let index = compiler
        .compile("urn:superharmonic:report", &mut schemas)
        .unwrap();
    (schemas, index)
}

#[test]
fn test_fischer_exceptional_example() {
    let v = json(&["fischer", "--m", "2", "--n", "3", "--k", "6"]);
    let summands: Vec<(String, u64, u64)> = v["reports"][0]["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["kind"].as_str().unwrap().to_string(),
                s["degree"].as_u64().unwrap(),
                s["r_power"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        summands,
        [("Ht".to_string(), 6, 0), ("Ht".to_string(), 4, 2)]
    );
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["verified"], true);
}

#[test]
fn test_fischer_classical_text() {
    let out = run(&["fischer", "--m", "3", "--n", "0", "--k", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("summands: H_4 (dim 9) + R^2 H_2 (dim 5) + R^4 H_0 (dim 1)"));
}

#[test]
fn test_usage_errors_exit_two() {
    for args in [
        &["fischer", "--m", "2", "--n", "3", "--k", "-1"][..],
        &["fischer", "--m", "-1", "--n", "3", "--k", "1"],
        &["fischer", "--m", "2", "--n", "3"],
        &["fischer", "--m", "2", "--n", "3", "--k", "13"],
        &["fischer", "--m", "2", "--n", "3", "--k", "1", "--kmax", "2"],
        &["gt-basis", "--m", "2", "--n", "1", "--kmax", "2"],
        &["branch", "--m", "0", "--n", "2", "--k", "1"],
        &[
            "branch",
            "--m",
            "2",
            "--n",
            "3",
            "--k",
            "3",
            "--generalized",
        ],
        &[
            "verify", "--suite", "nope", "--m", "1", "--n", "1", "--k", "1",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(
        run(&[
            "fischer",
            "--m",
            "2",
            "--n",
            "3",
            "--k",
            "13",
            "--max-degree",
            "13"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn test_branch_generalized_example() {
    let v = json(&[
        "branch",
        "--m",
        "2",
        "--n",
        "3",
        "--k",
        "4",
        "--generalized",
    ]);
    let r = &v["reports"][0];
    assert_eq!(r["mode"], "generalized");
    let mults: Vec<u64> = r["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(mults, [2, 2, 2, 1, 1]);
    assert_eq!(r["lhs_dim"], r["rhs_dim"]);
}

#[test]
fn test_gt_basis_lines() {
    let out = run(&["gt-basis", "--m", "1", "--n", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let polys: Vec<&str> = text
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(polys, ["t1", "t2", "x1"]);
    assert!(text.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn test_gt_basis_trivial_degree() {
    let out = run(&["gt-basis", "--m", "3", "--n", "2", "--k", "0"]);
    assert_eq!(
        stdout(&out)
            .lines()
            .map(|l| l.split('\t').nth(1).unwrap())
            .collect::<Vec<_>>(),
        ["1"]
    );
}

#[test]
fn test_verify_suites_pass() {
    let out = run(&[
        "verify", "--suite", "sl2", "--m", "2", "--n", "2", "--kmax", "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for suite in [
        "osp",
        "fischer",
        "theoremA",
        "composition",
        "ck",
        "branching",
        "gt",
        "all",
    ] {
        let out = run(&[
            "verify", "--suite", suite, "--m", "2", "--n", "1", "--kmax", "4",
        ]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
    }
    let out = run(&[
        "verify", "--suite", "theoremA", "--m", "0", "--n", "2", "--kmax", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[skip] theoremA k=4"));
}

#[test]
fn test_output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("superharmonic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let args = [
        "fischer", "--m", "2", "--n", "1", "--kmax", "3", "--format", "json",
    ];
    let direct = run(&args);
    let mut with_file = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["--output", p]);
    let out = run(&with_file);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn test_json_validates_against_schema() {
    let (schemas, index) = validator();
    for args in [
        &["fischer", "--m", "2", "--n", "3", "--kmax", "6"][..],
        &["fischer", "--m", "0", "--n", "2", "--kmax", "4"],
        &["branch", "--m", "3", "--n", "3", "--kmax", "5"],
        &[
            "branch",
            "--m",
            "2",
            "--n",
            "1",
            "--k",
            "2",
            "--generalized",
        ],
        &[
            "gt-basis", "--m", "2", "--n", "1", "--k", "2", "--target", "Ht",
        ],
        &["gt-basis", "--m", "0", "--n", "2", "--k", "2"],
        &[
            "verify", "--suite", "all", "--m", "1", "--n", "1", "--kmax", "3",
        ],
        &[
            "verify", "--suite", "theoremA", "--m", "0", "--n", "1", "--kmax", "3",
        ],
    ] {
        let v = json(args);
        if let Err(e) = schemas.validate(&v, index) {
            panic!("{args:?}: {e}");
        }
    }
    let bad = serde_json::json!({ "schema_version": "2", "command": "fischer" });
    assert!(schemas.validate(&bad, index).is_err());
}

#[test]
fn test_text_and_json_agree_on_dimensions() {
    let text = stdout(&run(&["fischer", "--m", "2", "--n", "3", "--k", "5"]));
    let v = json(&["fischer", "--m", "2", "--n", "3", "--k", "5"]);
    for s in v["reports"][0]["summands"].as_array().unwrap() {
        assert!(text.contains(&format!("(dim {})", s["dim"])));
    }
    assert!(text.contains(&format!("dim P_5 = {}", v["reports"][0]["ambient_dim"])));
}
