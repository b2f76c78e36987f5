use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn qra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qra"))
        .args(args)
        .env_remove("QRA_BUDGET_MS")
        .output()
        .expect("run qra")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn check_valid_files() {
    for (file, label) in [
        ("w3_1_2.frame.json", "DqRA-frame: ok"),
        ("s4.algebra.json", "DqRA: ok"),
        ("chain2.base.json", "Dq(E): ok"),
        ("identity.morphism.json", "homomorphism: ok"),
    ] {
        let o = qra(&["check", &data(file)]);
        assert_eq!(code(&o), 0, "{file}: {}", stderr(&o));
        assert!(stdout(&o).contains(label), "{file}: {}", stdout(&o));
    }
}

#[test]
fn broken_frame_reports_a_witness() {
    let o = qra(&["check", &data("broken.frame.json")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("DqRA-frame: FAILED"), "{out}");
    assert!(out.contains("z~ ∈ x∘y ⇔ y- ∈ z∘x"), "{out}");
    assert!(out.contains("[0, 2, 1]"), "{out}");
}

#[test]
fn broken_frame_as_json() {
    let o = qra(&["--format", "json", "check", &data("broken.frame.json")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
}

#[test]
fn constant_map_is_not_a_homomorphism() {
    let o = qra(&["morphism-check", &data("constant.morphism.json")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("preserves 1"), "{}", stdout(&o));
}

#[test]
fn malformed_input_exits_2_naming_the_file() {
    for file in ["ragged.algebra.json", "truncated.json"] {
        let path = data(file);
        let o = qra(&["check", &path]);
        assert_eq!(code(&o), 2, "{file}");
        assert!(stderr(&o).contains(&path), "{file}: {}", stderr(&o));
    }
    let o = qra(&["check", &data("missing.json")]);
    assert_eq!(code(&o), 2);
    let o = qra(&["check", "NoSuchName"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&qra(&["frobnicate"])), 2);
    assert_eq!(
        code(&qra(&["enumerate", "--poset", "2", "--signature", "xyz"])),
        2
    );
    assert_eq!(code(&qra(&["subreducts", "--index", "1", "--all"])), 2);
}

#[test]
fn count_small_sizes() {
    let o = qra(&["count", "--max-size", "6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let row = out
        .lines()
        .find(|l| l.split_whitespace().next() == Some("DqRA"))
        .expect("DqRA row");
    let counts: Vec<&str> = row.split_whitespace().skip(1).collect();
    assert_eq!(counts, ["1", "1", "2", "10", "8", "50"]);
}

#[test]
fn roundtrip_every_bundled_frame_and_ra() {
    let frames = std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/frames"))
        .unwrap()
        .map(|e| {
            e.unwrap()
                .path()
                .file_stem()
                .unwrap()
                .to_string_lossy()
                .into_owned()
        });
    let ras = (1..=37).map(|k| format!("RA{k}"));
    let mut n = 0;
    for name in frames.chain(ras) {
        let o = qra(&["roundtrip", &name]);
        assert_eq!(code(&o), 0, "{name}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains(": ok"), "{name}");
        n += 1;
    }
    assert_eq!(n, 14 + 37);
}

#[test]
fn iso_with_and_without_negation() {
    let o = qra(&["iso", "W4_2_1a", "W4_2_1b"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("not isomorphic"));
    let o = qra(&["iso", "--reduct", "W4_2_1a", "W4_2_1b"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("isomorphic"));
}

#[test]
fn complex_then_dual_matches_file() {
    let o = qra(&["complex", "W4_1_3"]);
    assert_eq!(code(&o), 0);
    let fresh: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(data("s4.algebra.json")).unwrap()).unwrap();
    assert_eq!(fresh, saved);
    let o = qra(&["dual", &data("s4.algebra.json")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn subreducts_table_and_json() {
    let o = qra(&["subreducts", "--all"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 38);
    let fam = |f: &str| {
        out.lines()
            .filter(|l| l.split_whitespace().nth(1) == Some(f))
            .count()
    };
    assert_eq!((fam("A12"), fam("B8"), fam("none")), (20, 10, 7));

    let o = qra(&["--format", "json", "subreducts", "--index", "19"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["family"], "B8");
    assert_eq!(v[0]["subreduct"]["elements"].as_array().unwrap().len(), 8);
}

#[test]
fn represent_boolean_and_budget() {
    let o = qra(&["represent", "B2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("verified"));

    let o = Command::new(env!("CARGO_BIN_EXE_qra"))
        .args(["represent", "S3", "--max-points", "2", "--ignore-filter"])
        .env("QRA_BUDGET_MS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let cp: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cp["max_points"], 2);
    assert_eq!(cp["next_base"], 0);
}

#[test]
fn enumerate_emits_frames() {
    let dir = std::env::temp_dir().join(format!("qra-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = qra(&[
        "enumerate",
        "--poset",
        "1+1",
        "--signature",
        "dqra",
        "--emit",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert!(!files.is_empty());
    for f in &files {
        let o = qra(&["check", f.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", f.display());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
