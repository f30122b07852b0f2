use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const X: &str = r#"{"metric": {"kind": "explicit", "d": [[0, 1], [1, 0]]}, "measure": "uniform",
  "target": {"kind": "euclidean", "dim": 1}, "values": [[0], [1]]}"#;
const Y: &str = r#"{"metric": {"kind": "explicit", "d": [[0, 1], [1, 0]]}, "measure": "uniform",
  "target": {"kind": "euclidean", "dim": 1}, "values": [[0], [0]]}"#;

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn run(args: &[&Path], flags: &[&str], env: Option<(&str, &str)>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mmfield"));
    cmd.args(flags.iter().take(1)).args(args).args(flags.iter().skip(1)).env_remove("MMFIELD_SEED");
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gw_on_identical_files_is_zero() {
    let d = Dir::new();
    let x = d.file("x.json", X);
    let o = run(&[&x, &x], &["gw", "--p", "inf"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["p"], "inf");
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["error_bound"], 0.0);
}

#[test]
fn gw_worked_pair_and_local_mode() {
    let d = Dir::new();
    let (x, y) = (d.file("x.json", X), d.file("y.json", Y));
    let v: Value = serde_json::from_str(&stdout(&run(&[&x, &y], &["gw"], None))).unwrap();
    assert_eq!(v["value"], 1.0);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["value", "p", "mode", "coupling", "error_bound"]);
    let v: Value = serde_json::from_str(&stdout(&run(&[&x, &y], &["gw", "--mode", "local", "--p", "2"], None))).unwrap();
    assert_eq!(v["mode"], "local");
    assert!(v["error_bound"].is_null());
    // 12 significant digits.
    assert_eq!(v["value"].as_f64().unwrap().to_string(), "0.707106781187");
}

#[test]
fn hypergraph_on_the_path() {
    let d = Dir::new();
    let pts = d.file("points.json", "[[0], [1], [2]]");
    let out = d.path("field.json");
    let o = run(&[], &["hypergraph", "build", "--input", pts.to_str().unwrap(), "--r", "1", "--p", "1", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = mmfield::io::parse_field(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(f.len(), 2);
    assert_eq!(f.measure(), &[0.5, 0.5]);
    assert_eq!(f.values()[0], mmfield::TargetPoint::real(0.5));
    // The manifest lands next to the output.
    let m: Value = serde_json::from_str(&std::fs::read_to_string(d.path("field.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "hypergraph");
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn adm_row_with_noise_band() {
    let d = Dir::new();
    let (x, y) = (d.file("x.json", X), d.file("y.json", Y));
    let o = run(&[&x, &y], &["adm", "--n", "4", "--N", "500", "--p", "1", "--seed", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,p,N,seed,estimate,lower_noise,upper_noise,oracle");
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&cols[..4], ["4", "1", "500", "1"]);
    let (est, lo, hi): (f64, f64, f64) = (cols[4].parse().unwrap(), cols[5].parse().unwrap(), cols[6].parse().unwrap());
    assert!(lo <= est && est <= hi);
    assert!(est > 0.8 && est <= 1.0);
    assert_eq!(cols[7], "1");
}

#[test]
fn environment_seed_overrides_flag() {
    let d = Dir::new();
    let (x, y) = (d.file("x.json", X), d.file("y.json", Y));
    let flags = ["converge", "--n-list", "2,4", "--N", "50", "--seed", "1"];
    let plain = stdout(&run(&[&x, &y], &flags, None));
    let env = stdout(&run(&[&x, &y], &flags, Some(("MMFIELD_SEED", "9"))));
    let direct = stdout(&run(&[&x, &y], &["converge", "--n-list", "2,4", "--N", "50", "--seed", "9"], None));
    assert_eq!(env, direct);
    assert_ne!(env, plain);
    assert!(env.lines().nth(1).unwrap().starts_with("2,1,50,9,"));
}

#[test]
fn exit_codes() {
    let d = Dir::new();
    let x = d.file("x.json", X);

    let bad_lipschitz = d.file(
        "bad.json",
        r#"{"metric": {"kind": "explicit", "d": [[0, 1], [1, 0]]}, "measure": "uniform",
           "target": {"kind": "euclidean", "dim": 1}, "values": [[0], [5]]}"#,
    );
    let o = run(&[&bad_lipschitz], &["validate"], None);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"][0]["kind"], "lipschitz");
    assert_eq!(run(&[&x], &["validate"], None).status.code(), Some(0));

    let malformed = d.file("m.json", "{\n  \"metric\": {\"kind\": \"explicit\", \"d\": [[0]]},\n  oops\n}");
    let o = run(&[&malformed], &["validate"], None);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let ambiguous = d.file(
        "a.json",
        r#"{"metric": {"kind": "explicit", "d": [[0]], "points": [[0]]}, "measure": "uniform",
           "target": {"kind": "euclidean", "dim": 1}, "values": [[0]]}"#,
    );
    assert_eq!(run(&[&ambiguous], &["validate"], None).status.code(), Some(4));

    // d(new, 0) + d(new, 1) = 0.2 < d(0, 1): not a metric extension.
    let cand = d.file("c.json", r#"{"f": [0.1, 0.1], "b": [0.5]}"#);
    let o = run(&[&x], &["extend", "--candidate", cand.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));

    let big = format!(
        r#"{{"metric": {{"kind": "euclidean", "points": {pts}}}, "measure": "uniform",
           "target": {{"kind": "euclidean", "dim": 1}}, "values": {vals}}}"#,
        pts = serde_json::to_string(&(0..5).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap(),
        vals = serde_json::to_string(&vec![vec![0.0]; 5]).unwrap(),
    );
    let big = d.file("big.json", &big);
    assert_eq!(run(&[&big, &big], &["gw"], None).status.code(), Some(3));
}

#[test]
fn glue_and_extend_emit_fields() {
    let d = Dir::new();
    let (x, y) = (d.file("x.json", X), d.file("y.json", Y));
    let coupling = d.file("p.json", "[[0.5, 0], [0, 0.5]]");
    let o = run(&[&x, &y], &["glue", "--coupling", coupling.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let g = mmfield::io::parse_field(&stdout(&o)).unwrap();
    assert_eq!(g.len(), 4);
    assert_eq!(g.metric().get(0, 2), 1.0);
    let o = run(&[&x, &y], &["glue", "--optimal"], None);
    assert_eq!(o.status.code(), Some(0));

    let cand = d.file("c.json", r#"{"f": [1, 1], "b": [0.5]}"#);
    let o = run(&[&x], &["extend", "--candidate", cand.to_str().unwrap(), "--reweight"], None);
    assert_eq!(o.status.code(), Some(0));
    let f = mmfield::io::parse_field(&stdout(&o)).unwrap();
    assert_eq!(f.len(), 3);
    assert!((f.measure()[2] - 1.0 / 3.0).abs() < 1e-11);
}
