use std::path::{Path, PathBuf};
use std::{fs, io};

use crate::rdf::{parse_turtle, Graph, TurtleError};

/// One `IRI<TAB>path` line of a module manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub iri: String,
    pub path: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: expected `IRI<TAB>path`")]
    Format { path: PathBuf, line: usize },
    #[error("{path}: {source}")]
    Turtle { path: PathBuf, source: TurtleError },
}

/// Reads a manifest. Relative paths resolve against the manifest's
/// directory; blank lines and lines starting with `#` are skipped.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let text = fs::read_to_string(path).map_err(|source| ManifestError::Io { path: path.into(), source })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (iri, file) = line
            .split_once('\t')
            .filter(|(a, b)| !a.trim().is_empty() && !b.trim().is_empty())
            .ok_or(ManifestError::Format { path: path.into(), line: i + 1 })?;
        out.push(ManifestEntry { iri: iri.trim().to_string(), path: dir.join(file.trim()) });
    }
    Ok(out)
}

/// Reads a manifest and parses every module it lists, with the module IRI
/// as base.
pub fn load_manifest(path: &Path) -> Result<Vec<(String, Graph)>, ManifestError> {
    read_manifest(path)?
        .into_iter()
        .map(|e| {
            let text =
                fs::read_to_string(&e.path).map_err(|source| ManifestError::Io { path: e.path.clone(), source })?;
            let g = parse_turtle(&text, Some(&e.iri))
                .map_err(|source| ManifestError::Turtle { path: e.path.clone(), source })?;
            Ok((e.iri, g))
        })
        .collect()
}
