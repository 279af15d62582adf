use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nashforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }

    fn circuit(&self, name: &str) -> String {
        let out = self.s(&format!("{name}.json"));
        let o = run(&["fixture", "circuit", "--name", name, "-o", &out]);
        assert_eq!(code(&o), 0);
        out
    }
}

fn strings(v: &Value) -> Vec<Vec<String>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|e| e.as_str().unwrap().to_string())
                .collect()
        })
        .collect()
}

fn rows(r: &[&[&str]]) -> Vec<Vec<String>> {
    r.iter()
        .map(|row| row.iter().map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn reduce_builds_the_worked_game() {
    let d = Dir::new();
    let c = d.circuit("one_minus");
    let g = d.s("g.json");
    let o = run(&["reduce", &c, "--target", "game", "-o", &g]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout_json(&o);
    assert_eq!(report["passed"], Value::Bool(true));
    let doc = json_file(&d.path("g.json"));
    assert_eq!(doc["schema"], "nashforge/v1");
    assert_eq!(doc["meta"]["kind"], "rank_k_plus_1");
    assert_eq!(
        strings(&doc["A"]),
        rows(&[&["1/2", "1/2", "0"], &["0", "1", "0"], &["0", "0", "1"]])
    );
    assert_eq!(
        strings(&doc["B"]),
        rows(&[&["-1/2", "-1/2", "0"], &["1", "-1", "0"], &["1", "2", "1"]])
    );
    let rank = report["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "game_rank")
        .unwrap();
    assert_eq!(rank["passed"], Value::Bool(true));
}

#[test]
fn reduce_symmetric_target() {
    let d = Dir::new();
    let c = d.circuit("one_minus");
    let s = d.s("s.json");
    assert_eq!(
        code(&run(&["reduce", &c, "--target", "symmetric", "-o", &s])),
        0
    );
    let doc = json_file(&d.path("s.json"));
    assert_eq!(doc["meta"]["kind"], "symmetric");
    assert_eq!(
        strings(&doc["A"]),
        rows(&[&["-1", "1", "1"], &["-1", "-1", "2"], &["0", "0", "1"]])
    );
    let o = run(&["solve", &s]);
    let report = stdout_json(&o);
    let eq = &report["equilibria"].as_array().unwrap()[0];
    assert_eq!(eq["x"], serde_json::json!(["1/4", "1/4", "1/2"]));
    assert_eq!(eq["lambda"], serde_json::json!(["1/2"]));
}

#[test]
fn other_targets_write_their_documents() {
    let d = Dir::new();
    let c = d.circuit("rotate");
    for (target, kind) in [("lp", "param_lp"), ("lcp", "lcp"), ("imitation", "game")] {
        let out = d.s(&format!("{target}.json"));
        assert_eq!(
            code(&run(&["reduce", &c, "--target", target, "-o", &out])),
            0
        );
        assert_eq!(json_file(Path::new(&out))["kind"], kind);
    }
}

#[test]
fn roundtrip_recovers_one_half() {
    let d = Dir::new();
    let c = d.circuit("one_minus");
    let o = run(&["verify", &c, "--mode", "roundtrip"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["lambdas"], serde_json::json!([["1/2"]]));
}

#[test]
fn lemmas_pass_on_examples() {
    let d = Dir::new();
    for name in ["one_minus", "max_pair"] {
        let c = d.circuit(name);
        let o = run(&[
            "verify",
            &c,
            "--mode",
            "lemmas",
            "--seed",
            "3",
            "--semimonotone-trials",
            "200",
        ]);
        assert_eq!(
            code(&o),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn corrupted_game_is_an_alarm() {
    let d = Dir::new();
    let c = d.circuit("one_minus");
    let g = d.s("g.json");
    assert_eq!(code(&run(&["reduce", &c, "--target", "game", "-o", &g])), 0);
    let mut doc = json_file(Path::new(&g));
    doc["B"][1][0] = Value::String("3/2".into());
    fs::write(&g, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = run(&["verify", &g, "--circuit", &c]);
    assert_eq!(code(&o), 3);
    let r = stdout_json(&o);
    assert_eq!(r["passed"], Value::Bool(false));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL game_matches_circuit"));
}

#[test]
fn invalid_brouwer_input_exits_2_with_violations() {
    let d = Dir::new();
    let bad = d.s("bad.json");
    fs::write(
        &bad,
        r#"{"k":2,"n":2,"gates":[{"op":"const","v":false}],"outputs":[0,0,0,0]}"#,
    )
    .unwrap();
    let o = run(&["compile", &bad, "-o", &d.s("out.json")]);
    assert_eq!(code(&o), 2);
    let listing: Value = {
        let err = String::from_utf8_lossy(&o.stderr);
        let start = err.find('{').unwrap();
        let end = err.rfind('}').unwrap();
        serde_json::from_str(&err[start..=end]).unwrap()
    };
    assert!(!listing["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let d = Dir::new();
    let bad = d.s("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        code(&run(&[
            "reduce",
            &bad,
            "--target",
            "game",
            "-o",
            &d.s("g.json")
        ])),
        2
    );
    assert_eq!(
        code(&run(&["eval", &d.s("missing.json"), "--lambda", "0"])),
        2
    );
}

#[test]
fn compile_writes_circuit_and_meta() {
    let d = Dir::new();
    let b = d.s("b.json");
    assert_eq!(
        code(&run(&[
            "fixture", "brouwer", "--k", "2", "--n", "2", "-o", &b
        ])),
        0
    );
    let f = d.s("f.json");
    let o = run(&["compile", &b, "-o", &f, "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["grid_restriction"], "PASS");
    let meta = json_file(&d.path("f.meta.json"));
    assert_eq!(meta["L"], 32);
    assert_eq!(meta["sample_count"], 16);
    assert_eq!(meta["shrunk"], Value::Bool(false));
    assert_eq!(meta["source_grid"]["k"], 2);

    let fs_ = d.s("fs.json");
    let o = run(&["compile", &b, "-o", &fs_, "--shrink", "--check"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        json_file(&d.path("fs.meta.json"))["shrunk"],
        Value::Bool(true)
    );
    let e = run(&["eval", &fs_, "--lambda", "0,0"]);
    assert_eq!(stdout_json(&e)["outputs"], serde_json::json!(["0", "1/3"]));
}

#[test]
fn approx_mode_reports_a_simplex() {
    let d = Dir::new();
    let b = d.s("b.json");
    assert_eq!(code(&run(&["fixture", "brouwer", "-o", &b])), 0);
    let o = run(&["verify", &b, "--mode", "approx"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["extraction"]["simplex"].as_array().unwrap().len(), 3);
    let oracle = stdout_json(&run(&["oracle", &b]));
    assert!(oracle["simplices"]
        .as_array()
        .unwrap()
        .contains(&r["extraction"]["simplex"]));
}

#[test]
fn lemke_howson_from_the_command_line() {
    let d = Dir::new();
    let c = d.circuit("one_minus");
    let g = d.s("g.json");
    assert_eq!(code(&run(&["reduce", &c, "--target", "game", "-o", &g])), 0);
    let o = run(&["solve", &g, "--method", "lh", "--label", "0"]);
    assert_eq!(code(&o), 0);
    let eq = &stdout_json(&o)["equilibria"][0];
    assert_eq!(eq["x"], serde_json::json!(["2/5", "1/5", "2/5"]));
    assert_eq!(
        code(&run(&["solve", &g, "--method", "lh", "--label", "99"])),
        2
    );
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let d = Dir::new();
    let c = d.circuit("max_pair");
    let a = d.s("a.json");
    let b = d.s("b.json");
    run(&["reduce", &c, "--target", "game", "-o", &a]);
    run(&["reduce", &c, "--target", "game", "-o", &b]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let r1 = run(&[
        "verify",
        &c,
        "--mode",
        "lemmas",
        "--seed",
        "9",
        "--semimonotone-trials",
        "50",
    ]);
    let r2 = run(&[
        "verify",
        &c,
        "--mode",
        "lemmas",
        "--seed",
        "9",
        "--semimonotone-trials",
        "50",
    ]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn manifest_runs_the_chain() {
    let d = Dir::new();
    d.circuit("one_minus");
    let manifest = d.s("pipeline.json");
    fs::write(
        &manifest,
        r#"{"stages":[
            {"command":"reduce","input":"one_minus.json","target":"game","output":"g.json"},
            {"command":"solve","input":"g.json","output":"ne.json"},
            {"command":"verify","input":"g.json","circuit":"one_minus.json","output":"v.json"}]}"#,
    )
    .unwrap();
    let o = run(&["run", &manifest]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ne = json_file(&d.path("ne.json"));
    assert_eq!(ne["equilibria"][0]["lambda"], serde_json::json!(["1/2"]));
    assert_eq!(json_file(&d.path("v.json"))["passed"], Value::Bool(true));

    fs::write(
        &manifest,
        r#"{"stages":[
            {"command":"reduce","input":"one_minus.json","target":"lp","output":"lp.json"},
            {"command":"solve","input":"lp.json"}]}"#,
    )
    .unwrap();
    let o = run(&["run", &manifest]);
    assert_eq!(code(&o), 2);
    assert!(!d.path("lp.json").exists());
}
