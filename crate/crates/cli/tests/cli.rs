use std::io::Write;
use std::process::{Command, Output, Stdio};

fn rotplan(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rotplan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn gen(args: &[&str]) -> String {
    let mut a = vec!["gen"];
    a.extend_from_slice(args);
    let out = rotplan(&a, "");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tetra_check_emits_a_rotation() {
    let out = rotplan(&["check", "-"], &gen(&["tetra"]));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# embeddable\n2complex v1\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("rotation ")).count(), 6);
    let v = rotplan(&["verify", "-"], &text);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn moebius_disc_is_obstructed_by_windings_one_and_two() {
    let out = rotplan(&["check", "-"], &gen(&["moebius-disc"]));
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("certificate torus-crossing ")).unwrap();
    let mut w: Vec<u32> = line.split(' ').skip(2).map(|t| t.parse().unwrap()).collect();
    w.sort();
    assert_eq!(w, [1, 2]);
}

#[test]
fn cone_over_k5_is_obstructed_at_the_apex() {
    let out = rotplan(&["check", "-"], &gen(&["cone", "K5"]));
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("certificate non-planar-link 0 K5 "));
}

#[test]
fn json_report_is_versioned() {
    let out = rotplan(&["--json", "check", "-"], &gen(&["torus-cross", "1", "3"]));
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"], "obstructed");
    assert_eq!(v["certificate"]["kind"], "torus-crossing");
    assert_eq!(v["certificate"]["windings"], serde_json::json!([1, 3]));
}

#[test]
fn malformed_input_exits_with_one_and_a_location() {
    let out = rotplan(&["check", "-"], "2complex v1\nvertex 0\nedge 0 0 9\n");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("3:10: unknown vertex `9`"), "{err}");
}

#[test]
fn oracle_and_check_agree_on_generators() {
    for args in [&["tetra"][..], &["octa"], &["delta2"], &["deltaplus", "2"], &["cone", "K4"], &["cone", "K5"], &["annulus", "4"], &["parallel", "2"]] {
        let doc = gen(args);
        let c = rotplan(&["check", "-"], &doc).status.code();
        let o = rotplan(&["oracle", "--cap", "1000000", "-"], &doc).status.code();
        assert_eq!(c, o, "{args:?}");
        assert!(matches!(c, Some(0) | Some(2)));
    }
}

#[test]
fn oracle_cap_is_an_error() {
    let out = rotplan(&["oracle", "--cap", "1", "-"], &gen(&["cone", "K5"]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stretch_writes_document_and_trace() {
    let dir = std::env::temp_dir().join(format!("rotplan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("trace.txt");
    let out = rotplan(&["--trace", trace.to_str().unwrap(), "stretch", "--op", "split", "-", "0"], &gen(&["cone", "C4"]));
    assert_eq!(out.status.code(), Some(1), "the apex link of a cone over a cycle is connected");
    let doc = "2complex v1\nvertex 0\nvertex 1\nvertex 2\nvertex 3\nvertex 4\nedge 0 0 1\nedge 1 1 2\nedge 2 0 2\nedge 3 0 3\nedge 4 3 4\nedge 5 0 4\nface 0 +0 +1 -2\nface 1 +3 +4 -5\n";
    let out = rotplan(&["--trace", trace.to_str().unwrap(), "stretch", "--op", "split", "-", "0"], doc);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex ")).count(), 6);
    let t = std::fs::read_to_string(&trace).unwrap();
    assert!(t.starts_with("# stretch trace\nstep SplitVertex vertex=0\n"), "{t}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn link_dump_classifies() {
    let out = rotplan(&["--json", "link", "-", "0"], &gen(&["cone", "K4"]));
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["arcs"].as_array().unwrap().len(), 6);
    assert_eq!(v["class"], "Subdivision3Connected");
}

#[test]
fn random_generation_depends_only_on_the_seed() {
    let a = gen(&["random", "7", "10", "4", "--seed", "11"]);
    assert_eq!(a, gen(&["random", "7", "10", "4", "--seed", "11"]));
    assert_ne!(a, gen(&["random", "7", "10", "4", "--seed", "12"]));
}

#[test]
fn unknown_generator_is_an_error() {
    assert_eq!(rotplan(&["gen", "klein"], "").status.code(), Some(1));
    assert_eq!(rotplan(&["gen", "deltaplus", "0"], "").status.code(), Some(1));
}

#[test]
fn batch_mode_reports_each_file() {
    let dir = std::env::temp_dir().join(format!("rotplan-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let names = [("a.txt", gen(&["tetra"])), ("b.txt", gen(&["cone", "K33"])), ("c.txt", "garbage\n".to_string())];
    let mut args = vec!["check".to_string()];
    for (n, body) in &names {
        let p = dir.join(n);
        std::fs::write(&p, body).unwrap();
        args.push(p.to_str().unwrap().to_string());
    }
    let a: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = rotplan(&a, "");
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].ends_with("a.txt: embeddable"));
    assert!(lines[1].ends_with("b.txt: obstructed"));
    assert!(lines[2].contains("c.txt: error"));
    std::fs::remove_dir_all(&dir).unwrap();
}
