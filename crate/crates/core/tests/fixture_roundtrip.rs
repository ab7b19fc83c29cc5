use std::fs;
use std::path::{Path, PathBuf};

use glosis_core::rdf::{is_isomorphic, parse_turtle, serialize_turtle};

fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn turtle_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            turtle_files(&path, out);
        } else if path.extension().is_some_and(|e| e == "ttl") {
            out.push(path);
        }
    }
}

#[test]
fn every_fixture_round_trips() {
    let mut files = Vec::new();
    turtle_files(&fixture_root(), &mut files);
    files.sort();
    assert!(files.len() >= 12);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let g = parse_turtle(&text, None).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!g.is_empty(), "{}", path.display());
        let out = serialize_turtle(&g, g.prefixes());
        let back = parse_turtle(&out, None).unwrap_or_else(|e| panic!("{}: {e}\n{out}", path.display()));
        assert!(is_isomorphic(&g, &back), "{} did not round-trip:\n{out}", path.display());
    }
}
