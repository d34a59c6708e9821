use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_excmap");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn excmap")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses JSONL and drops every `timestamp` field.
fn records(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap_or_else(|e| panic!("{e}: {l}"));
            if let Some(o) = v.as_object_mut() {
                o.remove("timestamp");
            }
            v
        })
        .collect()
}

fn json(args: &[&str]) -> (i32, Vec<Value>) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    (code(&out), records(&stdout(&out)))
}

fn write_triple(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

/// Affine group of Z/3 with G the translations and Frobenius i -> q i.
fn affine3(q: u64) -> String {
    let m = q % 3;
    let frob: Vec<u64> = (0..3).map(|i| i * m % 3).collect();
    format!(r#"{{"n":3,"gens_A":[[1,2,0],{frob:?}],"gens_G":[[1,2,0]],"frob":{frob:?},"base":0}}"#)
}

#[test]
fn exceptional_exit_codes() {
    let (c, r) = json(&["exceptional", "x^3 over GF(5)"]);
    assert_eq!(c, 0);
    assert_eq!(r[0]["payload"]["verdict"], "exceptional");
    assert_eq!(r[0]["payload"]["witness_k"], 3);

    let (c, r) = json(&["exceptional", "x^2", "--q", "3"]);
    assert_eq!(c, 0);
    let p = &r[0]["payload"];
    assert_eq!(p["verdict"], "not_exceptional");
    assert_ne!(p["collision"]["a"], p["collision"]["b"]);
    assert!(p["collision"]["image"].as_str().is_some());

    let (c, r) = json(&["exceptional", "x over GF(2)"]);
    assert_eq!(c, 0);
    assert_eq!(r[0]["payload"]["verdict"], "exceptional");

    let (c, r) = json(&["exceptional", "x^3 over GF(7)", "--window", "2"]);
    assert_eq!(c, 3);
    assert_eq!(r[0]["payload"]["verdict"], "inconclusive");

    assert_eq!(code(&run(&["exceptional", "x^^3 over GF(7)"])), 2);
    assert_eq!(code(&run(&["exceptional", "x^3 over GF(6)"])), 2);
    assert_eq!(code(&run(&["exceptional", "x^3"])), 2);
    assert_eq!(code(&run(&["exceptional", "x^3 over GF(5)", "--q", "5"])), 2);
    assert_eq!(code(&run(&["exceptional", "x^2", "--p", "3", "--n", "2"])), 0);
}

#[test]
fn ramify_reports_profile() {
    let (c, r) = json(&["ramify", "x^3 over GF(5)"]);
    assert_eq!(c, 0);
    let p = &r[0]["payload"];
    assert_eq!(p["pass"], true);
    let profile = p["profile"].as_array().unwrap();
    assert!(profile.iter().any(|e| e["e"] == 3 && e["gcd"] == 1));
}

#[test]
fn scan_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (q, n, expected) in [(3, 2, 0), (2, 2, 1), (2, 1, 1)] {
        let out = dir.path().join(format!("{q}_{n}"));
        let (c, _) = json(&["scan", "--q", &q.to_string(), "--n", &n.to_string(), "--out", out.to_str().unwrap()]);
        assert_eq!(c, 0, "q={q} n={n}");
        let text = fs::read_to_string(out.join(format!("scan_q{q}_n{n}.jsonl"))).unwrap();
        let recs = records(&text);
        assert_eq!(recs[0]["record"], "header");
        assert_eq!(recs[0]["payload"]["q"], q);
        let summary = recs.last().unwrap();
        assert_eq!(summary["record"], "summary");
        assert_eq!(summary["payload"]["exceptional_count"], expected);
        assert_eq!(summary["payload"]["violations"].as_array().unwrap().len(), 0);
        let rows: Vec<_> = recs.iter().filter(|r| r["record"] == "candidate").collect();
        assert_eq!(rows.len() as u64, summary["payload"]["total_candidates"].as_u64().unwrap());
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r["index"], i as u64);
            for key in ["poly", "verdict", "ram_profile", "gcds"] {
                assert!(r.get(key).is_some(), "{key} missing in {r}");
            }
        }
    }
}

#[test]
fn scan_refuses_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["scan", "--q", "2", "--n", "2", "--out", out])), 0);
    assert_eq!(code(&run(&["scan", "--q", "2", "--n", "2", "--out", out])), 2);
    assert_eq!(code(&run(&["scan", "--q", "2", "--n", "2", "--out", out, "--resume"])), 2);
    assert_eq!(code(&run(&["scan", "--q", "6", "--n", "2"])), 2);
    assert_eq!(code(&run(&["scan", "--p", "4", "--n", "2"])), 2);
}

fn strip_timestamps(path: &Path) -> Vec<Value> {
    records(&fs::read_to_string(path).unwrap())
}

#[test]
fn scan_resumes_after_interruption() {
    let args = |out: &str| -> Vec<String> {
        ["scan", "--q", "4", "--n", "3", "--chunk", "3", "--out", out].iter().map(|s| s.to_string()).collect()
    };
    let full = tempfile::tempdir().unwrap();
    let full_out = full.path().to_str().unwrap().to_string();
    let st = Command::new(BIN).args(args(&full_out)).output().unwrap();
    assert_eq!(code(&st), 0);
    let report = full.path().join("scan_q4_n3.jsonl");
    let reference = fs::read_to_string(&report).unwrap();

    // same run, cut after the header and five rows with a torn sixth row
    let part = tempfile::tempdir().unwrap();
    let part_out = part.path().to_str().unwrap().to_string();
    let st = Command::new(BIN).args(args(&part_out)).output().unwrap();
    assert_eq!(code(&st), 0);
    let lines: Vec<&str> = reference.lines().collect();
    let kept: String = lines[..6].iter().map(|l| format!("{l}\n")).collect();
    let torn = format!("{kept}{}", &lines[6][..20]);
    let part_report = part.path().join("scan_q4_n3.jsonl");
    let original_header = lines[0];
    fs::write(&part_report, &torn).unwrap();
    let cursor_path = part.path().join("scan_q4_n3.cursor.json");
    let mut cursor: Value = serde_json::from_str(&fs::read_to_string(&cursor_path).unwrap()).unwrap();
    cursor["next_index"] = 5.into();
    cursor["byte_offset"] = (kept.len() as u64).into();
    cursor["complete"] = false.into();
    fs::write(&cursor_path, cursor.to_string()).unwrap();

    let mut resume = args(&part_out);
    resume.push("--resume".into());
    let st = Command::new(BIN).args(&resume).output().unwrap();
    assert_eq!(code(&st), 0, "{}", String::from_utf8_lossy(&st.stderr));

    let resumed = fs::read_to_string(&part_report).unwrap();
    assert!(resumed.starts_with(original_header));
    let normalize = |v: Vec<Value>| -> Vec<Value> {
        v.into_iter()
            .map(|mut r| {
                if let Some(o) = r.get_mut("config").and_then(Value::as_object_mut) {
                    o.remove("out");
                }
                r
            })
            .collect()
    };
    assert_eq!(normalize(strip_timestamps(&part_report)), normalize(strip_timestamps(&report)));

    // a different configuration cannot resume this cursor
    cursor["complete"] = false.into();
    fs::write(&cursor_path, cursor.to_string()).unwrap();
    let st = Command::new(BIN).args(&resume).arg("--strict-bound").output().unwrap();
    assert_eq!(code(&st), 2);
}

#[test]
fn scan_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (d, jobs) in [(&a, "1"), (&b, "4")] {
        let out = d.path().to_str().unwrap();
        let st = run(&["scan", "--q", "4", "--n", "3", "--chunk", "5", "--jobs", jobs, "--out", out]);
        assert_eq!(code(&st), 0);
    }
    let strip = |d: &tempfile::TempDir| -> Vec<Value> {
        let mut v = strip_timestamps(&d.path().join("scan_q4_n3.jsonl"));
        for r in &mut v {
            if let Some(o) = r.get_mut("config").and_then(Value::as_object_mut) {
                o.remove("out");
            }
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));

    let (_, x) = json(&["exceptional", "(x^2+1)/(x+2) over GF(9)"]);
    let (_, y) = json(&["exceptional", "(x^2+1)/(x+2) over GF(9)"]);
    assert_eq!(x, y);
}

#[test]
fn triple_files() {
    let dir = tempfile::tempdir().unwrap();
    let f5 = write_triple(dir.path(), "a5.json", &affine3(5));
    let (c, r) = json(&["triple", f5.to_str().unwrap()]);
    assert_eq!(c, 0);
    let items = r[0]["payload"]["nt_ram"]["items"].as_object().unwrap();
    assert_eq!(items.len(), 14);
    assert!(items.values().all(|v| v == true));
    assert_eq!(r[0]["payload"]["nt_ram"]["agreement"], true);

    let f7 = write_triple(dir.path(), "a7.json", &affine3(7));
    let (c, r) = json(&["triple", f7.to_str().unwrap()]);
    assert_eq!(c, 0);
    let items = r[0]["payload"]["nt_ram"]["items"].as_object().unwrap();
    assert_eq!(items.len(), 14);
    assert!(items.values().all(|v| v == false));
    assert_eq!(r[0]["payload"]["nt_ram"]["agreement"], true);

    let bad = write_triple(dir.path(), "bad.json", r#"{"n":3,"gens_A":[[1,2,0]"#);
    assert_eq!(code(&run(&["triple", bad.to_str().unwrap()])), 2);
    let not_perm = write_triple(dir.path(), "np.json", r#"{"n":3,"gens_A":[[1,1,0]],"gens_G":[],"frob":[0,1,2]}"#);
    assert_eq!(code(&run(&["triple", not_perm.to_str().unwrap()])), 2);
    // S3 with trivial G: the quotient A/G is not cyclic
    let s3 = write_triple(dir.path(), "s3.json", r#"{"n":3,"gens_A":[[1,2,0],[0,2,1]],"gens_G":[],"frob":[0,2,1]}"#);
    assert_eq!(code(&run(&["triple", s3.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["triple", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn tame_examples() {
    let (c, r) = json(&["tame", "--n", "3", "--q", "5"]);
    assert_eq!(c, 0);
    assert_eq!(r[0]["payload"]["coprime"]["agree"], true);
    assert_eq!(r[0]["payload"]["coprime"]["items"], serde_json::json!([true, true, true, true]));

    let (c, r) = json(&["tame", "--n", "4", "--q", "5"]);
    assert_eq!(c, 0);
    assert_eq!(r[0]["payload"]["coprime"]["agree"], true);
    assert_eq!(r[0]["payload"]["coprime"]["items"], serde_json::json!([false, false, false, false]));

    assert_eq!(code(&run(&["tame", "--n", "5", "--q", "5"])), 2);
    assert_eq!(code(&run(&["tame", "--n", "3", "--q", "6"])), 2);
}

#[test]
fn sweep_agrees_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let st = run(&["sweep", "--format", "json", "--out", out]);
    assert_eq!(code(&st), 0);
    let recs = records(&fs::read_to_string(dir.path().join("sweep.jsonl")).unwrap());
    let rows: Vec<_> = recs.iter().filter(|r| r["record"] == "row").collect();
    let expected = [2u64, 3, 4, 5, 7, 8, 9, 11, 13]
        .iter()
        .map(|&q| (1..=12u64).filter(|&n| gcd(n, q) == 1).count())
        .sum::<usize>();
    assert_eq!(rows.len(), expected);
    for r in &rows {
        assert_eq!(r["agree"], true);
        assert_eq!(r["subext_holds"], true);
        assert_eq!(r["items"].as_array().unwrap().len(), 4);
    }
    assert_eq!(records(&stdout(&st)), recs);
    assert_eq!(code(&run(&["sweep", "--q", "6"])), 2);
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn root_of_one_unit() {
    let (c, r) = json(&["root", "1 + t over GF(3) prec 10", "--m", "2"]);
    assert_eq!(c, 0);
    assert_eq!(r[0]["payload"]["verified"], true);
    assert_eq!(r[0]["payload"]["precision"], 10);
    let (c, r) = json(&["root", "1 + t over GF(5)", "--degree", "3", "--prec", "20"]);
    assert_eq!(c, 0);
    assert_eq!(r[0]["payload"]["precision"], 20);
    assert_eq!(code(&run(&["root", "2 + t over GF(5)", "--m", "2"])), 2);
    assert_eq!(code(&run(&["root", "1 + t over GF(5)", "--m", "5"])), 2);
    assert_eq!(code(&run(&["root", "1 + t over GF(5) prec 0", "--m", "2"])), 2);
}

#[test]
fn appends_to_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for _ in 0..2 {
        assert_eq!(code(&run(&["exceptional", "x^3 over GF(5)", "--out", out])), 0);
    }
    let recs = records(&fs::read_to_string(dir.path().join("exceptional.jsonl")).unwrap());
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0], recs[1]);
}

/// Field names and nesting of every report kind, frozen in `tests/golden`.
fn schema(v: &Value) -> Value {
    match v {
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), schema(v))).collect()),
        Value::Array(a) => Value::Array(a.iter().take(1).map(schema).collect()),
        Value::String(_) => "string".into(),
        Value::Number(_) => "number".into(),
        Value::Bool(_) => "bool".into(),
        Value::Null => "null".into(),
    }
}

fn check_golden(name: &str, recs: &[Value]) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    let got = Value::Array(recs.iter().map(schema).collect());
    if std::env::var_os("EXCMAP_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
    }
    let want: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(got, want, "schema of {name} changed");
}

#[test]
fn golden_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let f5 = write_triple(dir.path(), "a5.json", &affine3(5));
    let cases: Vec<(&str, Vec<String>)> = vec![
        ("exceptional", vec!["exceptional".into(), "x^3 over GF(5)".into()]),
        ("not_exceptional", vec!["exceptional".into(), "x^2 over GF(3)".into()]),
        ("ramify", vec!["ramify".into(), "x^3 over GF(5)".into()]),
        ("scan", vec!["scan".into(), "--q".into(), "2".into(), "--n".into(), "2".into()]),
        ("triple", vec!["triple".into(), f5.to_str().unwrap().into()]),
        ("tame", vec!["tame".into(), "--n".into(), "3".into(), "--q".into(), "5".into()]),
        ("sweep", vec!["sweep".into(), "--n".into(), "2".into(), "--q".into(), "3".into()]),
        ("root", vec!["root".into(), "1 + t over GF(3) prec 8".into(), "--m".into(), "2".into()]),
    ];
    for (name, args) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c, recs) = json(&args);
        assert_eq!(c, 0, "{name}");
        assert!(!recs.is_empty());
        check_golden(name, &recs);
    }
}
