use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn put(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }
}

fn tropkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropkm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn arg(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

const STD2: &str = "n=2 field=Q\n1 0\n0 1\n";
const SHIFTED2: &str = "n=2 field=Q\nt^-1 0\n0 t\n";
const STD3: &str = "n=3 field=Fp:5\n1 0 0\n0 1 0\n0 0 1\n";

fn conf_of(group: &str, blocks: &[&str]) -> String {
    format!("group={group}\n{}", blocks.join("\n"))
}

#[test]
fn distance_command() {
    let f = Files::new();
    let a = f.put("a.lat", STD2);
    let b = f.put("b.lat", SHIFTED2);
    let o = tropkm(&["distance", arg(&a), arg(&b)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("(1, -1)\n"), "{}", stdout(&o));
    let o = tropkm(&["distance", arg(&a), arg(&a)]);
    assert!(stdout(&o).starts_with("(0, 0)\n"));
    let ragged = f.put("r.lat", "n=2 field=Q\n1 0\n0\n");
    let o = tropkm(&["distance", arg(&a), arg(&ragged)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));
    let c = f.put("c.lat", STD3);
    assert_eq!(code(&tropkm(&["distance", arg(&c), arg(&c), "--field", "q"])), 3);
    let three = f.put("three.lat", "n=3 field=Q\n1 0 0\n0 1 0\n0 0 1\n");
    assert_eq!(code(&tropkm(&["distance", arg(&a), arg(&three)])), 3);
    let o = tropkm(&["distance", arg(&a), arg(&b), "--output", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mu"], serde_json::json!([1, -1]));
}

#[test]
fn precision_errors_exit_4() {
    let f = Files::new();
    let a = f.put("a.lat", STD2);
    let b = f.put("b.lat", "n=2 field=Q\n1+O(t^2) 0\n0 t^5\n");
    assert_eq!(code(&tropkm(&["distance", arg(&a), arg(&b)])), 4);
}

#[test]
fn invariant_command() {
    let f = Files::new();
    let conf = f.put("c.conf", &conf_of("SL", &[STD3, STD3, STD3]));
    let o = tropkm(&["invariant", arg(&conf), "--indices", "1,1,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0\n");
    assert_eq!(code(&tropkm(&["invariant", arg(&conf), "--indices", "1,1,2"])), 5);
    assert_eq!(code(&tropkm(&["invariant", arg(&conf), "--indices", "2,2,2", "--dual"])), 0);
    let pair = f.put("p.conf", &conf_of("PGL", &[STD2, SHIFTED2]));
    let o = tropkm(&["invariant", arg(&pair), "--indices", "1,1"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn certificates_round_trip_through_verify() {
    let f = Files::new();
    let conf = f.put("c.conf", &conf_of("PGL", &[STD2, SHIFTED2]));
    let o = tropkm(&["invariant", arg(&conf), "--indices", "1,1", "--certificate", "--output", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cert = f.put("cert.json", &serde_json::to_string_pretty(&v["certificate"]).unwrap());
    let o = tropkm(&["verify", arg(&cert)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut bad = v["certificate"].clone();
    bad["optimum"] = serde_json::json!(99);
    let bad = f.put("bad.json", &bad.to_string());
    assert_eq!(code(&tropkm(&["verify", arg(&bad)])), 1);
    let junk = f.put("junk.json", "{ not json");
    assert_eq!(code(&tropkm(&["verify", arg(&junk)])), 2);
}

#[test]
fn assignment_command() {
    let f = Files::new();
    let c = f.put("c.csv", "0,2\n3,4\n");
    let o = tropkm(&["assignment", arg(&c)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("value: 4\npermutation: 1 2\n"), "{out}");
    let z = f.put("z.csv", "0,0,0\n0,0,0\n0,0,0\n");
    assert!(stdout(&tropkm(&["assignment", arg(&z)])).starts_with("value: 0\n"));
    let bad = f.put("bad.csv", "0,2\n3\n");
    assert_eq!(code(&tropkm(&["assignment", arg(&bad)])), 2);
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    let c = f.put("c.csv", "3,1,4\n1,5,9\n2,6,5\n");
    let a = tropkm(&["assignment", arg(&c), "--seed", "7"]);
    let b = tropkm(&["assignment", arg(&c), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let j = tropkm(&["assignment", arg(&c), "--seed", "7", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert!(stdout(&a).starts_with(&format!("value: {}\n", v["value"])));
}

#[test]
fn checks() {
    let f = Files::new();
    let same = f.put("same.conf", &conf_of("SL", &[STD3, STD3, STD3, STD3]));
    let o = tropkm(&["check", "identity", arg(&same), "--indices", "0,1,1,1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = tropkm(&["check", "conjecture", arg(&same), "--params", "2,2,1,1", "--trials", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("report only") && out.contains("(lhs): 0") && out.contains("(rhs): 0"), "{out}");
    let o = tropkm(&["check", "oracle-sample", arg(&same), "--indices", "1,1,1,0", "--trials", "5"]);
    assert_eq!(code(&o), 0);
    let o = tropkm(&["check", "oracle-metric", arg(&same), "--indices", "1,1,1,0", "--radius", "1"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn positivity_check_command() {
    let f = Files::new();
    let conf = f.put("c.conf", &conf_of("PGL", &[STD2, STD2]));
    let good = f.put("good.bases", "n=2 field=Q\n1 0\n0 1\n\nn=2 field=Q\n1 0\n1 1\n");
    let o = tropkm(&["check", "positivity", arg(&conf), "--bases", arg(&good)]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let flipped = f.put("bad.bases", "n=2 field=Q\n1 0\n0 1\n\nn=2 field=Q\n-1 0\n-1 1\n");
    let o = tropkm(&["check", "positivity", arg(&conf), "--bases", arg(&flipped)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&tropkm(&["distance"])), 2);
    assert_eq!(code(&tropkm(&["assignment", "/nonexistent/cost.csv"])), 2);
    assert_eq!(code(&tropkm(&["--horizon", "4", "assignment", "x"])), 2);
}
