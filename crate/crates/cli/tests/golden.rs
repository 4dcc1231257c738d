use std::path::PathBuf;

use rotplan::commands;
use rotplan::format::{parse, print, read, Document};
use rotplan_core::pipeline::Limits;

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files.into_iter().map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())).collect()
}

#[test]
fn corpus_round_trips_byte_for_byte() {
    let files = corpus();
    assert!(files.len() >= 20);
    for (name, text) in files {
        let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(print(&doc), text, "{name}");
    }
}

#[test]
fn corpus_survives_loading() {
    for (name, text) in corpus() {
        let l = read(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let doc = Document::from_complex(&l.complex, &l.names, l.rotation.as_ref(), l.certificate.as_ref());
        assert_eq!(print(&doc), text, "{name}");
    }
}

#[test]
fn embedded_answers_verify() {
    for (name, text) in corpus() {
        let out = commands::verify(&text);
        if name.ends_with("_rotation.txt") || name.ends_with("_certificate.txt") {
            assert_eq!(out.unwrap().code, commands::EXIT_OK, "{name}");
        } else {
            assert!(out.is_err(), "{name}");
        }
    }
}

#[test]
fn check_reproduces_stored_answers() {
    let files = corpus();
    for (name, text) in &files {
        let Some(stem) = name.strip_suffix("_rotation.txt").or_else(|| name.strip_suffix("_certificate.txt")) else { continue };
        let Some((_, input)) = files.iter().find(|(n, _)| n == &format!("{stem}.txt")) else { continue };
        let out = commands::check(input, &Limits::default(), false).unwrap();
        let body = out.stdout.split_once('\n').unwrap().1;
        assert_eq!(body, text, "{name}");
    }
}
