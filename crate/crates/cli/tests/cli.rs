use std::process::{Command, Output};

use serde_json::Value;

const CURVE: [&str; 8] = ["--p", "13", "--a", "1", "--b", "1", "--n", "3"];

fn fo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn with_curve<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&CURVE);
    v.extend_from_slice(extra);
    v
}

#[test]
fn cohomology_of_minus_three_infinity() {
    let out = fo(&with_curve("cohomology", &["--inf", "-3"]));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["h0"], 0);
    assert_eq!(v["h1"], 3);
}

#[test]
fn cohomology_obeys_riemann_roch() {
    for (d_inf, d_p0) in [("2", "1"), ("-1", "-1"), ("0", "0"), ("4", "-2")] {
        let out = fo(&with_curve(
            "cohomology",
            &["--inf", d_inf, "--at-p0", d_p0],
        ));
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        let deg: i64 = d_inf.parse::<i64>().unwrap() + d_p0.parse::<i64>().unwrap();
        let (h0, h1) = (v["h0"].as_i64().unwrap(), v["h1"].as_i64().unwrap());
        assert_eq!(h0 - h1, deg);
        // on a genus-one curve a nonzero degree kills one of the two groups
        if deg != 0 {
            assert_eq!(h0.min(h1), 0);
        }
    }
}

#[test]
fn bracket_eval_at_n2_is_zero() {
    let out = fo(&[
        "bracket-eval",
        "--p",
        "11",
        "--a",
        "1",
        "--b",
        "1",
        "--n",
        "2",
        "--phi",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 0);
    assert_eq!(v["end_dim"], 2);
    let zero = v["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .all(|x| *x == 0);
    assert!(zero);
}

#[test]
fn curve_info_certifies_torsion() {
    let out = fo(&with_curve("curve-info", &[]));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let m = v["P0_multiples"].as_array().unwrap();
    assert_eq!(m.len(), 3);
    assert_eq!(m[2], "infinity");
    assert!(m[..2].iter().all(|p| p.is_array()));
    assert_eq!(v["w"]["pole_order"], 3);
}

#[test]
fn sweep_is_deterministic() {
    let args = with_curve("bracket-sweep", &["--points", "6", "--seed", "7"]);
    let a = fo(&args);
    let b = fo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["count"], 6);
}

#[test]
fn config_file_matches_flags() {
    let dir = std::env::temp_dir().join(format!("fo-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.json");
    std::fs::write(
        &path,
        r#"{"p": 13, "a": 1, "b": 1, "n": 3, "P0": [10, 6], "phi": ["1", "-1", "1/2"]}"#,
    )
    .unwrap();
    let from_file = fo(&["bracket-eval", "--config", path.to_str().unwrap()]);
    let from_flags = fo(&with_curve(
        "bracket-eval",
        &["--P0", "10,6", "--phi", "1,12,7"],
    ));
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn exit_codes() {
    // no torsion search over the rationals
    let out = fo(&[
        "curve-info",
        "--p",
        "rationals",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // (0, 1) on y² = x³ + 1 has order 3, not 4
    let out = fo(&[
        "curve-info",
        "--p",
        "rationals",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "4",
        "--P0",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = fo(&with_curve("bracket-eval", &["--phi", "1,2"]));
    assert_eq!(out.status.code(), Some(2));
    // a truncation too small to reach every class of Ext¹
    let out = fo(&with_curve("bracket-eval", &["--phi", "1,2,1", "--N", "0"]));
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn rationals_match_the_rank_formula() {
    let out = fo(&[
        "bracket-eval",
        "--p",
        "rationals",
        "--a",
        "0",
        "--b",
        "1",
        "--n",
        "3",
        "--P0",
        "0,1",
        "--phi",
        "1,3,7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["end_dim"], 1);
}

#[test]
fn leaf_test_and_conormal_bracket() {
    let out = fo(&with_curve("leaf-test", &["--phi", "1,2,3"]));
    assert_eq!(out.status.code(), Some(0));
    let tests = json(&out)["tests"].as_array().unwrap().clone();
    assert!(tests
        .iter()
        .all(|t| t["deformation_trivial"] == t["in_image"]));
    let sweep = json(&fo(&with_curve("bracket-sweep", &[])));
    let degenerate = sweep["points"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["rank"] == 0)
        .expect("a degenerate point")
        .clone();
    let phi: Vec<String> = degenerate["phi"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect();
    let out = fo(&with_curve("conormal", &["--phi", &phi.join(",")]));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "match");
    assert_eq!(v["ker_dim"], 2);
}
