use std::fmt;
use std::str::FromStr;

use crate::rdf::vocab::{owl, rdf};
use crate::rdf::{Graph, Term, Triple};

use super::TransformError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VersionSpec {
    pub major: u64,
    pub minor: u64,
    pub micro: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VersionPart {
    Major,
    Minor,
    Micro,
}

impl FromStr for VersionPart {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "major" => Ok(VersionPart::Major),
            "minor" => Ok(VersionPart::Minor),
            "micro" | "patch" => Ok(VersionPart::Micro),
            _ => Err(format!("unknown version part {s:?}; expected major, minor or micro")),
        }
    }
}

impl VersionSpec {
    pub fn bump(self, part: VersionPart) -> VersionSpec {
        match part {
            VersionPart::Major => VersionSpec { major: self.major + 1, minor: 0, micro: 0 },
            VersionPart::Minor => VersionSpec { minor: self.minor + 1, micro: 0, ..self },
            VersionPart::Micro => VersionSpec { micro: self.micro + 1, ..self },
        }
    }
}

impl FromStr for VersionSpec {
    type Err = String;

    /// Accepts `MAJOR.MINOR.MICRO` with an optional leading `v`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().strip_prefix(['v', 'V']).unwrap_or(s.trim());
        let parts: Vec<&str> = body.split('.').collect();
        let num = |p: &str| -> Result<u64, String> {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("{s:?} is not MAJOR.MINOR.MICRO"));
            }
            p.parse().map_err(|_| format!("{s:?} has an out-of-range component"))
        };
        match parts[..] {
            [a, b, c] => Ok(VersionSpec { major: num(a)?, minor: num(b)?, micro: num(c)? }),
            _ => Err(format!("{s:?} is not MAJOR.MINOR.MICRO")),
        }
    }
}

impl fmt::Display for VersionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.major, self.minor, self.micro)
    }
}

/// The node carrying the module header: the module IRI when it has triples,
/// otherwise the single owl:Ontology instance.
fn ontology_node(module: &str, g: &Graph) -> Result<Term, TransformError> {
    let named = Term::iri(module);
    if g.object(&named, owl::VERSION_INFO).is_some() || g.has(&named, rdf::TYPE, &Term::iri(owl::ONTOLOGY)) {
        return Ok(named);
    }
    let mut onts = g.instances_of(owl::ONTOLOGY);
    match (onts.next(), onts.next()) {
        (Some(o), None) => Ok(o.clone()),
        _ => {
            Err(TransformError::Version { module: module.to_string(), message: "no unique owl:Ontology header".into() })
        }
    }
}

/// Bumps every module to the same new version: the highest current version
/// with `part` incremented. Rewrites owl:versionInfo and sets owl:versionIRI
/// to `<module IRI>/<version>`; no other triple changes.
pub fn bump_version(
    modules: &[(String, Graph)],
    part: VersionPart,
) -> Result<(VersionSpec, Vec<(String, Graph)>), TransformError> {
    let mut headers = Vec::new();
    for (iri, g) in modules {
        let node = ontology_node(iri, g)?;
        let mut infos = g.objects(&node, owl::VERSION_INFO);
        let info = match (infos.next(), infos.next()) {
            (Some(i), None) => i.clone(),
            (None, _) => {
                return Err(TransformError::Version { module: iri.clone(), message: "no owl:versionInfo".into() })
            }
            _ => {
                return Err(TransformError::Version {
                    module: iri.clone(),
                    message: "more than one owl:versionInfo".into(),
                })
            }
        };
        let v: VersionSpec =
            info.value().parse().map_err(|message| TransformError::Version { module: iri.clone(), message })?;
        headers.push((node, info, v));
    }
    let Some(current) = headers.iter().map(|h| h.2).max() else {
        return Ok((VersionSpec { major: 0, minor: 0, micro: 0 }.bump(part), Vec::new()));
    };
    let next = current.bump(part);
    let out = modules
        .iter()
        .zip(headers)
        .map(|((iri, g), (node, info, _))| {
            let mut g = g.clone();
            g.remove(&Triple::new(node.clone(), Term::iri(owl::VERSION_INFO), info.clone()));
            let lit = match info.as_literal() {
                Some(l) => match l.language() {
                    Some(lang) => Term::lang(next.to_string(), lang),
                    None => Term::typed(next.to_string(), l.datatype()),
                },
                None => Term::literal(next.to_string()),
            };
            g.add(node.clone(), Term::iri(owl::VERSION_INFO), lit);
            for old in g.matching(Some(&node), Some(&Term::iri(owl::VERSION_IRI)), None) {
                g.remove(&old);
            }
            let base = iri.trim_end_matches('/');
            g.add(node, Term::iri(owl::VERSION_IRI), Term::iri(format!("{base}/{next}")));
            (iri.clone(), g)
        })
        .collect();
    Ok((next, out))
}
