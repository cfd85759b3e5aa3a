use std::process::{Command, Output};

use serde_json::Value;

fn critlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critlab")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = critlab(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text:?}"));
    (v, out.status.code().unwrap())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_examples() {
    let (v, code) = json(&["classify", "--group", "Z6", "--A", "0,1", "--B", "0,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["class"], "CriticalSum");
    assert_eq!(v["results"]["deficit"], "0/1");
    assert_eq!(v["results"]["stabilizer_AB"], serde_json::json!(["0", "3"]));
    let (v, _) = json(&["classify", "--group", "Z5", "--A", "0,1", "--B", "0,1"]);
    assert_eq!(v["results"]["class"], "SubCritical");
    let (v, _) = json(&["classify", "--group", "Z1", "--A", "0", "--B", "0"]);
    assert_eq!(v["results"]["class"], "CriticalFull");
    for key in ["command", "inputs", "results", "validations", "version"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn dyson_example() {
    let (v, code) = json(&["dyson", "--group", "Z5", "--A", "0,2", "--B", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["final_B"], serde_json::json!(["0"]));
    assert!(v["validations"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn twisted_sturmian_example() {
    let (v, code) = json(&["sturmian", "--target", "twisted", "--half-i", "1/8", "--half-j", "1/8"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["m_IJ"], "1/2");
    assert_eq!(v["validations"][0]["passed"], true);
    let (v, code) = json(&["sturmian", "--half-i", "1/4", "--half-j", "1/4"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "precondition");
}

#[test]
fn reduce_and_relative() {
    let (v, code) = json(&["reduce", "--group", "Z6", "--A", "0,1", "--B", "0,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["certificate"]["kernel"], serde_json::json!(["0", "3"]));
    assert_eq!(v["results"]["certificate"]["digest"].as_str().unwrap().len(), 64);
    let (v, code) = json(&["relative", "--group", "Z6", "--A", "0,1", "--B", "0,2", "--U", "0,3"]);
    assert_eq!(code, 0);
    assert!(v["results"]["outcome"]["locally_subcritical"].is_object());
    let (v, code) = json(&["relative", "--group", "D3", "--A", "(0,0)", "--B", "(0,0)", "--U", "(0,0),(0,1)"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "precondition");
}

#[test]
fn error_paths_are_json() {
    let (v, code) = json(&["classify", "--group", "Z5", "--A", "0,9", "--B", "0"]);
    assert_eq!((v["error"]["code"].as_str(), code), (Some("parse"), 2));
    let (v, code) = json(&["classify", "--group", "Y5", "--A", "0", "--B", "0"]);
    assert_eq!((v["error"]["code"].as_str(), code), (Some("parse"), 2));
    let (v, code) = json(&["frobnicate"]);
    assert_eq!((v["error"]["code"].as_str(), code), (Some("usage"), 2));
    let (v, code) = json(&["survey", "--family", "cyclic", "--max", "17"]);
    assert_eq!((v["error"]["code"].as_str(), code), (Some("budget_exceeded"), 3));
    let (v, code) = json(&["vosper", "--group", "Z6", "--A", "0,1", "--B", "0,1"]);
    assert_eq!((v["error"]["code"].as_str(), code), (Some("precondition"), 2));
    assert!(v["error"]["message"].as_str().unwrap().contains("not prime"));
}

#[test]
fn order_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_critlab"))
        .args(["--json", "group", "Z8"])
        .env("CRITLAB_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["error"]["code"], "budget_exceeded");
}

fn brute_critical(n: usize) -> usize {
    let mut count = 0;
    for a in 1u32..1 << n {
        for b in 1u32..1 << n {
            let mut ab = 0u32;
            for x in (0..n).filter(|x| a >> x & 1 == 1) {
                for y in (0..n).filter(|y| b >> y & 1 == 1) {
                    ab |= 1 << ((x + y) % n);
                }
            }
            let (ka, kb) = (a.count_ones(), b.count_ones());
            if ab.count_ones() == ka + kb && ka + kb < n as u32 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn survey_examples() {
    let out = critlab(&["survey", "--family", "cyclic", "--max", "1"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("pair,Z1,0,0,CriticalFull"));

    let out = critlab(&["survey", "--family", "cyclic", "--max", "8", "--filter", "critical", "--format", "jsonl", "--counts"]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        if v["kind"] == "count" {
            let n = v["order"].as_u64().unwrap() as usize;
            assert_eq!(v["matched"].as_u64().unwrap() as usize, brute_critical(n), "Z{n}");
        } else {
            assert_eq!(v["class"], "CriticalSum");
        }
    }

    let out = critlab(&[
        "survey", "--family", "dihedral", "--max", "4", "--filter", "subcritical", "--check", "kemperman", "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let rows: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["check"]["passed"] == true));
}

#[test]
fn survey_output_is_independent_of_jobs() {
    let args = ["survey", "--family", "all", "--max", "6", "--filter", "critical"];
    let one = critlab(&[&args[..], &["--jobs", "1"]].concat());
    let three = critlab(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn survey_resume_is_byte_identical() {
    for format in ["csv", "jsonl"] {
        let dir = tempfile::tempdir().unwrap();
        let cp = dir.path().join("survey.ckpt");
        let base = ["survey", "--family", "cyclic", "--max", "7", "--filter", "critical", "--format", format];
        let full = critlab(&base);
        let fresh = critlab(&[&base[..], &["--checkpoint", cp.to_str().unwrap()]].concat());
        assert_eq!(full.stdout, fresh.stdout);
        let saved: Value = serde_json::from_str(&std::fs::read_to_string(&cp).unwrap()).unwrap();
        assert_eq!(saved["completed_groups"], 7);

        // pretend the run stopped after Z1..Z4
        let mut partial = saved.clone();
        partial["completed_groups"] = 4.into();
        std::fs::write(&cp, partial.to_string()).unwrap();
        let resumed = critlab(&[&base[..], &["--checkpoint", cp.to_str().unwrap()]].concat());
        let text = stdout(&full);
        let done = ["Z1", "Z2", "Z3", "Z4"];
        let expected: String = text
            .split_inclusive('\n')
            .filter(|l| {
                let group = if format == "csv" {
                    l.split(',').nth(1).unwrap_or("").to_string()
                } else {
                    serde_json::from_str::<Value>(l).unwrap()["group"].as_str().unwrap().to_string()
                };
                !l.starts_with("kind,") && !done.contains(&group.as_str())
            })
            .collect();
        assert_eq!(stdout(&resumed), expected, "{format}");

        let mut other = saved.clone();
        other["options"]["max"] = 6.into();
        std::fs::write(&cp, other.to_string()).unwrap();
        assert_eq!(critlab(&[&base[..], &["--checkpoint", cp.to_str().unwrap()]].concat()).status.code(), Some(2));
    }
}

#[test]
fn verify_selected_criteria() {
    let (v, code) = json(&["verify", "--suite", "2,6"]);
    assert_eq!(code, 0);
    assert_eq!(v["validations"].as_array().unwrap().len(), 2);
    let (v, code) = json(&["verify", "--suite", "11"]);
    assert_eq!((v["error"]["code"].as_str(), code), (Some("parse"), 2));
}

#[test]
fn text_mode_reports() {
    let out = critlab(&["group", "D3", "--subgroups"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("order: 6") && text.contains("[ok] associativity"), "{text}");
}
