use std::collections::HashSet;

use super::graph::Graph;
use super::term::Term;
use super::vocab::rdf;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ListError {
    #[error("list node {0} has no rdf:first")]
    MissingFirst(Term),
    #[error("list node {0} has no rdf:rest")]
    MissingRest(Term),
    #[error("list node {0} has more than one rdf:first or rdf:rest")]
    Ambiguous(Term),
    #[error("list revisits node {0}")]
    Cycle(Term),
}

/// Members of the RDF collection starting at `head`, in chain order.
pub fn read_list(graph: &Graph, head: &Term) -> Result<Vec<Term>, ListError> {
    let mut members = Vec::new();
    let mut seen = HashSet::new();
    let mut node = head.clone();
    while node.as_iri() != Some(rdf::NIL) {
        if !seen.insert(node.clone()) {
            return Err(ListError::Cycle(node));
        }
        let firsts: Vec<_> = graph.objects(&node, rdf::FIRST).collect();
        let rests: Vec<_> = graph.objects(&node, rdf::REST).collect();
        match (firsts.as_slice(), rests.as_slice()) {
            ([], _) => return Err(ListError::MissingFirst(node)),
            (_, []) => return Err(ListError::MissingRest(node)),
            ([first], [rest]) => {
                members.push((*first).clone());
                node = (*rest).clone();
            }
            _ => return Err(ListError::Ambiguous(node)),
        }
    }
    Ok(members)
}

/// Adds a collection holding `items` and returns its head (`rdf:nil` when
/// empty).
pub fn write_list(graph: &mut Graph, items: &[Term]) -> Term {
    let cells: Vec<Term> = items.iter().map(|_| graph.fresh_blank()).collect();
    for (i, item) in items.iter().enumerate() {
        let rest = cells.get(i + 1).cloned().unwrap_or_else(|| Term::iri(rdf::NIL));
        graph.add(cells[i].clone(), Term::iri(rdf::FIRST), item.clone());
        graph.add(cells[i].clone(), Term::iri(rdf::REST), rest);
    }
    cells.first().cloned().unwrap_or_else(|| Term::iri(rdf::NIL))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nil_is_the_empty_list() {
        assert_eq!(read_list(&Graph::new(), &Term::iri(rdf::NIL)).unwrap(), vec![]);
    }

    #[test]
    fn missing_rest_is_reported_with_node() {
        let mut g = Graph::new();
        g.add(Term::blank("x"), Term::iri(rdf::FIRST), Term::iri("http://a"));
        assert_eq!(read_list(&g, &Term::blank("x")), Err(ListError::MissingRest(Term::blank("x"))));
    }

    #[test]
    fn cycles_are_detected() {
        let mut g = Graph::new();
        g.add(Term::blank("x"), Term::iri(rdf::FIRST), Term::iri("http://a"));
        g.add(Term::blank("x"), Term::iri(rdf::REST), Term::blank("x"));
        assert_eq!(read_list(&g, &Term::blank("x")), Err(ListError::Cycle(Term::blank("x"))));
    }
}
