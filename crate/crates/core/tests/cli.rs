use std::path::{Path, PathBuf};
use std::process::Command;

use voaforms::cli::{EXIT_INPUT, EXIT_NONCONVERGENCE, EXIT_PASS, EXIT_VERIFY};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn voaforms(args: &[&str], threads: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_voaforms"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("VOAFORMS_THREADS", t),
        None => cmd.env_remove("VOAFORMS_THREADS"),
    };
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn build_a1(dir: &Path, n: &str) -> PathBuf {
    let out = dir.join("a1.manifest.json");
    let (code, _, err) = voaforms(
        &["build", "--lattice", p(&data("a1.json")), "--generators", p(&data("a1_roots.json")), "--max-degree", n, "--out", p(&out)],
        None,
    );
    assert_eq!(code, EXIT_PASS, "{err}");
    out
}

#[test]
fn build_writes_manifest_with_expected_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_a1(dir.path(), "4");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let ranks: Vec<u64> = (0..=4).map(|s| m["degrees"][s.to_string()]["basis_rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 3, 4, 7, 13]);
    assert_eq!(m["cutoff"], 4);
    assert_eq!(m["generators"], serde_json::json!(["e(1)", "e(-1)"]));
}

#[test]
fn build_without_generators_is_vacuum_only() {
    let (code, out, _) = voaforms(&["build", "--lattice", p(&data("a1.json")), "--max-degree", "2"], None);
    assert_eq!(code, EXIT_PASS);
    let m: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(m["degrees"]["0"]["gram"], serde_json::json!([["1"]]));
    assert_eq!(m["degrees"]["1"]["basis_rank"], 0);
}

#[test]
fn input_errors_exit_one() {
    let (code, _, err) = voaforms(&["build", "--lattice", p(&data("odd.json"))], None);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("lattice not even"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("gens.json");
    std::fs::write(&bad, r#"["e(1)", "h(1,-1"]"#).unwrap();
    let (code, _, err) = voaforms(&["build", "--lattice", p(&data("a1.json")), "--generators", p(&bad)], None);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("generators[1]"), "{err}");

    let (code, _, err) = voaforms(&["verify"], None);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("--manifest"), "{err}");

    let (code, _, _) = voaforms(&["verify", "--manifest", p(&dir.path().join("missing.json"))], None);
    assert_eq!(code, EXIT_INPUT);

    let (code, _, _) = voaforms(&["build", "--lattice", p(&data("a1.json")), "--max-degree", "2", "--gen-degree", "3"], None);
    assert_eq!(code, EXIT_INPUT);

    let (code, _, _) = voaforms(&["frobnicate"], None);
    assert_eq!(code, EXIT_INPUT);

    let (code, _, _) = voaforms(&["build", "--lattice", p(&data("a1.json"))], Some("zero"));
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn generators_above_cutoff_respect_truncate_flag() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("gens.json");
    std::fs::write(&g, r#"["e(1) + e(2)"]"#).unwrap();
    let a1 = data("a1.json");
    let base = ["build", "--lattice", p(&a1), "--generators", p(&g), "--max-degree", "2"];
    assert_eq!(voaforms(&base, None).0, EXIT_INPUT);
    let mut dropped = base.to_vec();
    dropped.extend(["--truncate", "drop"]);
    assert_eq!(voaforms(&dropped, None).0, EXIT_PASS);
}

#[test]
fn nonconvergence_exits_two() {
    let (code, _, err) = voaforms(
        &["build", "--lattice", p(&data("a1.json")), "--generators", p(&data("a1_roots.json")), "--iter-bound", "1"],
        None,
    );
    assert_eq!(code, EXIT_NONCONVERGENCE);
    assert!(err.contains("did not converge"), "{err}");
}

#[test]
fn verify_passes_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = build_a1(dir.path(), "4");
    let (code, out, _) = voaforms(&["verify", "--manifest", p(&manifest)], None);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("all checks passed"));

    let mut m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    m["degrees"]["1"]["gram"][0][0] = serde_json::json!("1/2");
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, serde_json::to_string(&m).unwrap()).unwrap();
    let (code, out, _) = voaforms(&["verify", "--manifest", p(&corrupted), "--format", "json"], None);
    assert_eq!(code, EXIT_VERIFY);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    let li = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "check_li").unwrap();
    assert_eq!(li["passed"], false);
    assert_eq!(li["detail"]["witness"]["value"], "1/2");
    assert_eq!(li["detail"]["witness"]["degree"], 1);
}

#[test]
fn verify_dihedral_suite() {
    let (code, out, _) = voaforms(&["verify", "--suite", "dihedral2a"], None);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("Tr(AB) = 1/4"));
    assert!(out.contains("= 1/4 but (a, a*b) = 17/128"));
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = build_a1(dir.path(), "4");
    let args = ["verify", "--manifest", p(&manifest), "--format", "json", "--seed", "11"];
    let (c1, one, _) = voaforms(&args, Some("1"));
    let (c4, four, _) = voaforms(&args, Some("4"));
    let (_, again, _) = voaforms(&args, Some("4"));
    assert_eq!((c1, c4), (EXIT_PASS, EXIT_PASS));
    assert_eq!(one, four);
    assert_eq!(four, again);
    assert!(one.contains("\"seed\": 11"));
}

#[test]
fn rescale_dual_tel_nli() {
    let a1 = data("a1.json");
    let roots = data("a1_roots.json");
    let form = ["--lattice", p(&a1), "--generators", p(&roots), "--max-degree", "3", "--format", "json"];
    let run = |cmd: &str, extra: &[&str]| {
        let mut args = vec![cmd];
        args.extend(form);
        args.extend(extra);
        let (code, out, err) = voaforms(&args, None);
        assert_eq!(code, EXIT_PASS, "{cmd}: {err}");
        serde_json::from_str::<serde_json::Value>(&out).unwrap()
    };
    let r = run("rescale", &[]);
    assert_eq!((r["m1"].as_str(), r["m2"].as_str()), (Some("1"), Some("2")));
    let r = run("rescale", &["--scale-degree", "1", "--scale", "1/2"]);
    assert_eq!((r["m1"].as_str(), r["m2"].as_str(), r["li"].as_bool()), (Some("4"), Some("1"), Some(true)));

    let d = run("dual", &[]);
    assert_eq!(d["degrees"][0]["self_dual"], true);
    assert_eq!(d["degrees"][1]["exponent"], "2");

    let t = run("tel", &["--action", p(&data("a1_minus_one.json"))]);
    assert_eq!(t["passed"], true);
    assert_eq!(t["degrees"][1]["exponent"], "2");

    let n = run("nli-transfer", &["--other-generators", p(&roots)]);
    assert_eq!((n["j_into_k"].as_str(), n["k_into_j"].as_str()), (Some("1"), Some("1")));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = voaforms(&["--help"], None);
    assert_eq!(code, EXIT_PASS);
    for sub in ["build", "verify", "rescale", "dual", "tel", "dihedral2a", "nli-transfer"] {
        assert!(out.contains(sub), "{sub}");
    }
}
