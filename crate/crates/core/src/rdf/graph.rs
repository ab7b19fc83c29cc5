use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::term::{Term, Triple};
use super::vocab::rdf;

type Index = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

/// Ordered prefix declarations as they appeared in a document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: Vec<(String, String)>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a declaration, keeping first-declaration order.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        let prefix = prefix.into();
        let namespace = namespace.into();
        match self.entries.iter_mut().find(|(p, _)| *p == prefix) {
            Some(entry) => entry.1 = namespace,
            None => self.entries.push((prefix, namespace)),
        }
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.entries.iter().find(|(p, _)| p == prefix).map(|(_, ns)| ns.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, ns)| (p.as_str(), ns.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Expands `prefix:local`; returns `None` if the text has no colon or an
    /// unknown prefix.
    pub fn expand(&self, curie: &str) -> Option<String> {
        let (prefix, local) = curie.split_once(':')?;
        self.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// The longest namespace that is a prefix of `iri`, with the remaining
    /// local part.
    pub fn split<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        self.entries
            .iter()
            .filter(|(_, ns)| !ns.is_empty() && iri.starts_with(ns.as_str()))
            .max_by_key(|(_, ns)| ns.len())
            .map(|(p, ns)| (p.as_str(), &iri[ns.len()..]))
    }

    pub fn with_well_known() -> Self {
        let mut map = PrefixMap::new();
        for (p, ns) in super::vocab::WELL_KNOWN_PREFIXES {
            map.insert(*p, *ns);
        }
        map
    }
}

impl<P: Into<String>, N: Into<String>> FromIterator<(P, N)> for PrefixMap {
    fn from_iter<T: IntoIterator<Item = (P, N)>>(iter: T) -> Self {
        let mut map = PrefixMap::new();
        for (p, n) in iter {
            map.insert(p, n);
        }
        map
    }
}

/// An in-memory set of triples with subject, predicate-object and object
/// indexes. Duplicate inserts are no-ops.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    spo: Index,
    pos: Index,
    osp: Index,
    len: usize,
    prefixes: PrefixMap,
    next_blank: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo
    }
}

impl Eq for Graph {}

fn index_insert(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    index.entry(a.clone()).or_default().entry(b.clone()).or_default().insert(c.clone())
}

fn index_remove(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    let Some(inner) = index.get_mut(a) else {
        return false;
    };
    let Some(set) = inner.get_mut(b) else {
        return false;
    };
    let removed = set.remove(c);
    if set.is_empty() {
        inner.remove(b);
    }
    if inner.is_empty() {
        index.remove(a);
    }
    removed
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn set_prefixes(&mut self, prefixes: PrefixMap) {
        self.prefixes = prefixes;
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let Triple { subject: s, predicate: p, object: o } = triple;
        if !index_insert(&mut self.spo, &s, &p, &o) {
            return false;
        }
        index_insert(&mut self.pos, &p, &o, &s);
        index_insert(&mut self.osp, &o, &s, &p);
        self.len += 1;
        true
    }

    pub fn add(&mut self, s: Term, p: Term, o: Term) -> bool {
        self.insert(Triple::new(s, p, o))
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (s, p, o) = (&triple.subject, &triple.predicate, &triple.object);
        if !index_remove(&mut self.spo, s, p, o) {
            return false;
        }
        index_remove(&mut self.pos, p, o, s);
        index_remove(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|m| m.get(&triple.predicate))
            .is_some_and(|set| set.contains(&triple.object))
    }

    /// All triples in subject-predicate-object order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, m)| {
            m.iter().flat_map(move |(p, set)| {
                set.iter().map(move |o| Triple { subject: s.clone(), predicate: p.clone(), object: o.clone() })
            })
        })
    }

    /// Triples matching every bound position. The order is fixed by the
    /// index consulted, so it is stable for a given graph content.
    pub fn matching(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
        let mk = |s: &Term, p: &Term, o: &Term| Triple { subject: s.clone(), predicate: p.clone(), object: o.clone() };
        let mut out = Vec::new();
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                let t = mk(s, p, o);
                if self.contains(&t) {
                    out.push(t);
                }
            }
            (Some(s), Some(p), None) => {
                if let Some(set) = self.spo.get(s).and_then(|m| m.get(p)) {
                    out.extend(set.iter().map(|o| mk(s, p, o)));
                }
            }
            (Some(s), None, None) => {
                if let Some(m) = self.spo.get(s) {
                    for (p, set) in m {
                        out.extend(set.iter().map(|o| mk(s, p, o)));
                    }
                }
            }
            (None, Some(p), Some(o)) => {
                if let Some(set) = self.pos.get(p).and_then(|m| m.get(o)) {
                    out.extend(set.iter().map(|s| mk(s, p, o)));
                }
            }
            (None, Some(p), None) => {
                if let Some(m) = self.pos.get(p) {
                    for (o, set) in m {
                        out.extend(set.iter().map(|s| mk(s, p, o)));
                    }
                }
            }
            (None, None, Some(o)) => {
                if let Some(m) = self.osp.get(o) {
                    for (s, set) in m {
                        out.extend(set.iter().map(|p| mk(s, p, o)));
                    }
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(set) = self.osp.get(o).and_then(|m| m.get(s)) {
                    out.extend(set.iter().map(|p| mk(s, p, o)));
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &str) -> impl Iterator<Item = &'a Term> + 'a {
        let p = Term::Iri(p.to_string());
        self.spo.get(s).and_then(|m| m.get(&p)).into_iter().flat_map(|set| set.iter())
    }

    pub fn object(&self, s: &Term, p: &str) -> Option<&Term> {
        self.objects(s, p).next()
    }

    pub fn subjects<'a>(&'a self, p: &str, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        let p = Term::Iri(p.to_string());
        self.pos.get(&p).and_then(|m| m.get(o)).into_iter().flat_map(|set| set.iter())
    }

    pub fn has(&self, s: &Term, p: &str, o: &Term) -> bool {
        self.spo.get(s).and_then(|m| m.get(&Term::Iri(p.to_string()))).is_some_and(|set| set.contains(o))
    }

    /// Instances declared with `rdf:type class`.
    pub fn instances_of<'a>(&'a self, class: &str) -> impl Iterator<Item = &'a Term> + 'a {
        self.subjects(rdf::TYPE, &Term::Iri(class.to_string()))
    }

    pub fn types<'a>(&'a self, node: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.objects(node, rdf::TYPE)
    }

    pub fn subject_terms(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    pub fn object_terms(&self) -> impl Iterator<Item = &Term> {
        self.osp.keys()
    }

    /// Number of triples in which the term is the object.
    pub fn object_occurrences(&self, o: &Term) -> usize {
        self.osp.get(o).map(|m| m.values().map(BTreeSet::len).sum()).unwrap_or(0)
    }

    /// Every subject or object, without duplicates.
    pub fn nodes(&self) -> BTreeSet<Term> {
        self.spo.keys().chain(self.osp.keys()).cloned().collect()
    }

    pub fn blank_nodes(&self) -> BTreeSet<Term> {
        self.nodes().into_iter().filter(Term::is_blank).collect()
    }

    /// A blank-node label not used anywhere in this graph.
    pub fn fresh_blank(&mut self) -> Term {
        loop {
            let t = Term::BlankNode(format!("g{}", self.next_blank));
            self.next_blank += 1;
            if !self.spo.contains_key(&t) && !self.osp.contains_key(&t) {
                return t;
            }
        }
    }

    /// Adds every triple of `other`, giving its blank nodes fresh labels so
    /// they never merge with blank nodes already present. Prefixes of
    /// `other` are added where not already declared.
    pub fn merge(&mut self, other: &Graph) {
        let mut relabel: HashMap<Term, Term> = HashMap::new();
        let mut map = |g: &mut Graph, t: &Term| -> Term {
            if t.is_blank() {
                if let Some(m) = relabel.get(t) {
                    return m.clone();
                }
                let fresh = g.fresh_blank();
                relabel.insert(t.clone(), fresh.clone());
                fresh
            } else {
                t.clone()
            }
        };
        for t in other.iter() {
            let s = map(self, &t.subject);
            let o = map(self, &t.object);
            self.insert(Triple { subject: s, predicate: t.predicate, object: o });
        }
        for (p, ns) in other.prefixes.iter() {
            if self.prefixes.get(p).is_none() {
                self.prefixes.insert(p, ns);
            }
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<T: IntoIterator<Item = Triple>>(&mut self, iter: T) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

/// A default graph plus named graphs.
#[derive(Clone, Debug, Default)]
pub struct Dataset {
    default: Graph,
    named: BTreeMap<String, Graph>,
}

#[derive(Debug, thiserror::Error)]
#[error("named graph <{0}> already present in dataset")]
pub struct DuplicateGraph(pub String);

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_default(graph: Graph) -> Self {
        Dataset { default: graph, named: BTreeMap::new() }
    }

    pub fn default_graph(&self) -> &Graph {
        &self.default
    }

    pub fn default_graph_mut(&mut self) -> &mut Graph {
        &mut self.default
    }

    pub fn add_named(&mut self, iri: impl Into<String>, graph: Graph) -> Result<(), DuplicateGraph> {
        let iri = iri.into();
        if self.named.contains_key(&iri) {
            return Err(DuplicateGraph(iri));
        }
        self.named.insert(iri, graph);
        Ok(())
    }

    pub fn named(&self, iri: &str) -> Option<&Graph> {
        self.named.get(iri)
    }

    pub fn graph_names(&self) -> impl Iterator<Item = &str> {
        self.named.keys().map(String::as_str)
    }

    /// Default graph merged with every named graph; blank nodes stay
    /// graph-local.
    pub fn union_graph(&self) -> Graph {
        let mut g = self.default.clone();
        for named in self.named.values() {
            g.merge(named);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o))
    }

    #[test]
    fn duplicates_are_ignored() {
        let mut g = Graph::new();
        assert!(g.insert(t("a", "p", "b")));
        assert!(!g.insert(t("a", "p", "b")));
        assert_eq!(g.len(), 1);
        assert!(g.remove(&t("a", "p", "b")));
        assert!(g.is_empty());
        assert!(g.matching(None, None, None).is_empty());
    }

    #[test]
    fn every_access_pattern_hits_the_same_triple() {
        let g: Graph = [t("a", "p", "b"), t("a", "q", "c"), t("d", "p", "b")].into_iter().collect();
        let (a, p, b) = (Term::iri("a"), Term::iri("p"), Term::iri("b"));
        assert_eq!(g.matching(Some(&a), None, None).len(), 2);
        assert_eq!(g.matching(None, Some(&p), Some(&b)).len(), 2);
        assert_eq!(g.matching(None, None, Some(&b)).len(), 2);
        assert_eq!(g.matching(Some(&a), None, Some(&b)).len(), 1);
        assert_eq!(g.matching(Some(&a), Some(&p), None).len(), 1);
        assert_eq!(g.matching(None, Some(&p), None).len(), 2);
    }

    #[test]
    fn merge_keeps_blank_nodes_apart() {
        let mut a = Graph::new();
        a.add(Term::blank("b0"), Term::iri("p"), Term::iri("x"));
        let mut b = Graph::new();
        b.add(Term::blank("b0"), Term::iri("p"), Term::iri("y"));
        a.merge(&b);
        assert_eq!(a.len(), 2);
        assert_eq!(a.blank_nodes().len(), 2);
    }

    #[test]
    fn prefix_split_prefers_longest_namespace() {
        let map: PrefixMap = [("a", "http://ex.org/"), ("b", "http://ex.org/sub/")].into_iter().collect();
        assert_eq!(map.split("http://ex.org/sub/x"), Some(("b", "x")));
        assert_eq!(map.expand("a:y").as_deref(), Some("http://ex.org/y"));
        assert_eq!(map.expand("zz:y"), None);
    }
}
