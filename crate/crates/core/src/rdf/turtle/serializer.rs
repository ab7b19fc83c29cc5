use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::rdf::graph::{Graph, PrefixMap};
use crate::rdf::term::{escape_iri, escape_string, Literal, Term};
use crate::rdf::vocab::{rdf, xsd};

/// Writes `graph` as Turtle. Subjects are emitted in term order, then
/// predicates (`rdf:type` first), then objects. Blank nodes referenced once
/// are nested as `[ ... ]`, well-formed lists as `( ... )`.
pub fn serialize_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut w = Writer { graph, prefixes, inline: HashSet::new(), lists: BTreeMap::new(), out: String::new() };
    w.plan();
    w.write();
    w.out
}

struct Writer<'a> {
    graph: &'a Graph,
    prefixes: &'a PrefixMap,
    /// Blank nodes written nested inside their single referencing triple.
    inline: HashSet<Term>,
    /// List heads written in `( ... )` form, with their members.
    lists: BTreeMap<Term, Vec<Term>>,
    out: String,
}

impl Writer<'_> {
    fn plan(&mut self) {
        let g = self.graph;
        let first = Term::iri(rdf::FIRST);
        let rest = Term::iri(rdf::REST);
        // Cells that belong to a well-formed list (exactly first+rest,
        // referenced once); the head is the cell not referenced via rdf:rest.
        let mut cells = BTreeSet::new();
        for b in g.blank_nodes() {
            let outgoing = g.matching(Some(&b), None, None);
            let only_list = outgoing.len() == 2
                && outgoing.iter().filter(|t| t.predicate == first).count() == 1
                && outgoing.iter().filter(|t| t.predicate == rest).count() == 1;
            if only_list && g.object_occurrences(&b) == 1 {
                cells.insert(b);
            }
        }
        for head in &cells {
            let referrers = g.matching(None, None, Some(head));
            if referrers[0].predicate == rest
                && referrers[0].subject.is_blank()
                && cells.contains(&referrers[0].subject)
            {
                continue;
            }
            let mut members = Vec::new();
            let mut node = head.clone();
            let mut seen = HashSet::new();
            let ok = loop {
                if node == Term::iri(rdf::NIL) {
                    break true;
                }
                if !cells.contains(&node) || !seen.insert(node.clone()) {
                    break false;
                }
                members.push(g.object(&node, rdf::FIRST).unwrap().clone());
                node = g.object(&node, rdf::REST).unwrap().clone();
            };
            if ok {
                self.lists.insert(head.clone(), members);
            }
        }
        let list_cells: HashSet<Term> = self
            .lists
            .keys()
            .flat_map(|head| {
                let mut v = vec![];
                let mut node = head.clone();
                while node != Term::iri(rdf::NIL) {
                    v.push(node.clone());
                    node = g.object(&node, rdf::REST).unwrap().clone();
                }
                v
            })
            .collect();
        // Blank nodes nested once; cycles of single-referenced blank nodes
        // would never be emitted, so only accept nodes whose referrer chain
        // reaches a non-inlined subject.
        for b in g.blank_nodes() {
            if list_cells.contains(&b) {
                continue;
            }
            if g.object_occurrences(&b) == 1 && self.chain_is_rooted(&b, &list_cells) {
                self.inline.insert(b);
            }
        }
        for head in self.lists.keys() {
            self.inline.insert(head.clone());
        }
        for cell in list_cells {
            self.inline.insert(cell);
        }
    }

    fn chain_is_rooted(&self, b: &Term, list_cells: &HashSet<Term>) -> bool {
        let g = self.graph;
        let mut seen = HashSet::new();
        let mut node = b.clone();
        loop {
            if !seen.insert(node.clone()) {
                return false;
            }
            let referrers = g.matching(None, None, Some(&node));
            match referrers.as_slice() {
                [] => return true,
                [t] if t.subject.is_blank()
                    && (g.object_occurrences(&t.subject) == 1 || list_cells.contains(&t.subject)) =>
                {
                    node = t.subject.clone();
                }
                _ => return true,
            }
        }
    }

    fn write(&mut self) {
        for (p, ns) in self.prefixes.iter() {
            let mut iri = String::new();
            escape_iri(&mut iri, ns);
            self.out.push_str(&format!("@prefix {p}: <{iri}> .\n"));
        }
        let subjects: Vec<Term> = self.graph.subject_terms().filter(|s| !self.inline.contains(*s)).cloned().collect();
        let (named, blank): (Vec<_>, Vec<_>) = subjects.into_iter().partition(|s| !s.is_blank());
        for s in named.iter().chain(blank.iter()) {
            if !self.out.is_empty() {
                self.out.push('\n');
            }
            let subject = self.term(s);
            self.out.push_str(&subject);
            self.predicate_objects(s, 1);
            self.out.push_str(" .\n");
        }
    }

    fn predicate_objects(&mut self, s: &Term, depth: usize) {
        let triples = self.graph.matching(Some(s), None, None);
        let mut by_pred: Vec<(Term, Vec<Term>)> = Vec::new();
        for t in triples {
            match by_pred.last_mut() {
                Some((p, objs)) if *p == t.predicate => objs.push(t.object),
                _ => by_pred.push((t.predicate, vec![t.object])),
            }
        }
        by_pred.sort_by_key(|(p, _)| p.as_iri() != Some(rdf::TYPE));
        let indent = "    ".repeat(depth);
        for (i, (p, objs)) in by_pred.iter().enumerate() {
            if i > 0 {
                self.out.push_str(" ;");
            }
            self.out.push('\n');
            self.out.push_str(&indent);
            let verb = if p.as_iri() == Some(rdf::TYPE) { "a".to_string() } else { self.term(p) };
            self.out.push_str(&verb);
            self.out.push(' ');
            for (j, o) in objs.iter().enumerate() {
                if j > 0 {
                    self.out.push_str(", ");
                }
                self.object(o, depth);
            }
        }
    }

    fn object(&mut self, o: &Term, depth: usize) {
        if let Some(members) = self.lists.get(o).cloned() {
            self.out.push('(');
            for m in &members {
                self.out.push(' ');
                self.object(m, depth + 1);
            }
            self.out.push_str(" )");
        } else if self.inline.contains(o) {
            if self.graph.matching(Some(o), None, None).is_empty() {
                self.out.push_str("[]");
                return;
            }
            self.out.push('[');
            self.predicate_objects(o, depth + 1);
            self.out.push_str(" ]");
        } else {
            let text = self.term(o);
            self.out.push_str(&text);
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Iri(iri) => self.iri(iri),
            Term::BlankNode(label) => format!("_:{label}"),
            Term::Literal(lit) => self.literal(lit),
        }
    }

    fn iri(&self, iri: &str) -> String {
        if let Some((prefix, local)) = self.prefixes.split(iri) {
            if is_plain_local(local) {
                return format!("{prefix}:{local}");
            }
        }
        let mut s = String::from("<");
        escape_iri(&mut s, iri);
        s.push('>');
        s
    }

    fn literal(&self, lit: &Literal) -> String {
        let lex = lit.lexical();
        match lit.datatype() {
            xsd::INTEGER if is_integer_shorthand(lex) => return lex.to_string(),
            xsd::DECIMAL if is_decimal_shorthand(lex) => return lex.to_string(),
            xsd::BOOLEAN if lex == "true" || lex == "false" => return lex.to_string(),
            _ => {}
        }
        let mut s = String::from("\"");
        escape_string(&mut s, lex);
        s.push('"');
        if let Some(lang) = lit.language() {
            s.push('@');
            s.push_str(lang);
        } else if lit.datatype() != xsd::STRING {
            s.push_str("^^");
            s.push_str(&self.iri(lit.datatype()));
        }
        s
    }
}

fn is_integer_shorthand(lex: &str) -> bool {
    let digits = lex.strip_prefix(['+', '-']).unwrap_or(lex);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn is_decimal_shorthand(lex: &str) -> bool {
    let body = lex.strip_prefix(['+', '-']).unwrap_or(lex);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.chars().all(|c| c.is_ascii_digit()) && !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

/// A local name that can be written after `prefix:` without escapes.
fn is_plain_local(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let mut chars = local.chars();
    let first = chars.next().unwrap();
    if !(first.is_alphanumeric() || first == '_') {
        return false;
    }
    if local.ends_with('.') {
        return false;
    }
    local.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::turtle::parse_turtle;

    #[test]
    fn empty_graph_writes_only_prefixes() {
        let prefixes: PrefixMap = [("ex", "http://ex.org/")].into_iter().collect();
        assert_eq!(serialize_turtle(&Graph::new(), &prefixes), "@prefix ex: <http://ex.org/> .\n");
        assert_eq!(serialize_turtle(&Graph::new(), &PrefixMap::new()), "");
    }

    #[test]
    fn single_triple_is_one_statement() {
        let mut g = Graph::new();
        g.add(Term::iri("http://ex.org/s"), Term::iri("http://ex.org/p"), Term::literal("x"));
        let text = serialize_turtle(&g, &PrefixMap::new());
        assert_eq!(text.trim_end().lines().count(), 2);
        assert!(text.trim_end().ends_with('.'));
        assert_eq!(parse_turtle(&text, None).unwrap(), g);
    }

    #[test]
    fn one_of_list_is_written_as_collection() {
        let src = "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n@prefix ex: <http://ex.org/> .\n\
                   ex:C owl:oneOf ( ex:N ex:V ex:F ) .";
        let g = parse_turtle(src, None).unwrap();
        let text = serialize_turtle(&g, g.prefixes());
        assert!(text.contains("owl:oneOf ( ex:N ex:V ex:F )"), "{text}");
    }

    #[test]
    fn local_names_needing_escapes_fall_back_to_full_iris() {
        let prefixes: PrefixMap = [("ex", "http://ex.org/")].into_iter().collect();
        let mut g = Graph::new();
        g.add(Term::iri("http://ex.org/a/b"), Term::iri("http://ex.org/p"), Term::iri("http://ex.org/end."));
        let text = serialize_turtle(&g, &prefixes);
        assert!(text.contains("<http://ex.org/a/b>"));
        assert!(text.contains("<http://ex.org/end.>"));
        assert_eq!(parse_turtle(&text, None).unwrap(), g);
    }
}
