use std::collections::{BTreeSet, VecDeque};

use crate::rdf::{Graph, Term};

use super::ast::PathExpr;

/// Nodes reachable from `start` along `path`. Closures include `start`
/// itself at zero steps; cycles are cut by a visited set.
pub fn eval_path(graph: &Graph, path: &PathExpr, start: &Term) -> BTreeSet<Term> {
    forward(graph, path, start).into_iter().collect()
}

/// End nodes from `start`, one entry per distinct route for predicates,
/// sequences and alternatives; closures contribute each node once.
pub(crate) fn forward(graph: &Graph, path: &PathExpr, start: &Term) -> Vec<Term> {
    match path {
        PathExpr::Predicate(p) => {
            graph.matching(Some(start), Some(&Term::iri(p)), None).into_iter().map(|t| t.object).collect()
        }
        PathExpr::Inverse(p) => match &**p {
            PathExpr::Predicate(p) => {
                graph.matching(None, Some(&Term::iri(p)), Some(start)).into_iter().map(|t| t.subject).collect()
            }
            other => forward(graph, &other.inverse(), start),
        },
        PathExpr::Sequence(steps) => {
            let mut current = vec![start.clone()];
            for step in steps {
                current = current.iter().flat_map(|n| forward(graph, step, n)).collect();
            }
            current
        }
        PathExpr::Alternative(alts) => alts.iter().flat_map(|a| forward(graph, a, start)).collect(),
        PathExpr::ZeroOrMore(p) => closure(graph, p, start, true),
        PathExpr::OneOrMore(p) => closure(graph, p, start, false),
        PathExpr::ZeroOrOne(p) => {
            let mut out: BTreeSet<Term> = forward(graph, p, start).into_iter().collect();
            out.insert(start.clone());
            out.into_iter().collect()
        }
    }
}

fn closure(graph: &Graph, step: &PathExpr, start: &Term, reflexive: bool) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    if reflexive {
        seen.insert(start.clone());
        out.push(start.clone());
    }
    queue.push_back(start.clone());
    while let Some(n) = queue.pop_front() {
        for m in forward(graph, step, &n) {
            if seen.insert(m.clone()) {
                out.push(m.clone());
                queue.push_back(m);
            }
        }
    }
    out
}

/// (start, end) pairs of `path` given optional fixed endpoints.
pub(crate) fn pairs(graph: &Graph, path: &PathExpr, s: Option<&Term>, o: Option<&Term>) -> Vec<(Term, Term)> {
    match (s, o) {
        (Some(s), Some(o)) => forward(graph, path, s).into_iter().filter(|n| n == o).map(|n| (s.clone(), n)).collect(),
        (Some(s), None) => forward(graph, path, s).into_iter().map(|n| (s.clone(), n)).collect(),
        (None, Some(o)) => forward(graph, &path.inverse(), o).into_iter().map(|n| (n, o.clone())).collect(),
        (None, None) => {
            if let PathExpr::Predicate(p) = path {
                return graph
                    .matching(None, Some(&Term::iri(p)), None)
                    .into_iter()
                    .map(|t| (t.subject, t.object))
                    .collect();
            }
            // Zero-length paths relate every node of the graph to itself.
            graph
                .nodes()
                .iter()
                .flat_map(|n| forward(graph, path, n).into_iter().map(move |m| (n.clone(), m)))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Graph {
        let mut g = Graph::new();
        let b = "http://www.w3.org/2004/02/skos/core#broader";
        g.add(Term::iri("a"), Term::iri(b), Term::iri("b"));
        g.add(Term::iri("b"), Term::iri(b), Term::iri("c"));
        g.add(Term::iri("c"), Term::iri(b), Term::iri("a"));
        g
    }

    #[test]
    fn closure_is_reflexive_and_stops_on_cycles() {
        let g = chain();
        let p =
            PathExpr::ZeroOrMore(Box::new(PathExpr::Predicate("http://www.w3.org/2004/02/skos/core#broader".into())));
        let reach = eval_path(&g, &p, &Term::iri("a"));
        assert_eq!(reach.len(), 3);
        let lonely = eval_path(&g, &p, &Term::iri("z"));
        assert_eq!(lonely, BTreeSet::from([Term::iri("z")]));
    }

    #[test]
    fn inverse_pairs_swap() {
        let g = chain();
        let p = PathExpr::Predicate("http://www.w3.org/2004/02/skos/core#broader".into()).inverse();
        let mut got = pairs(&g, &p, Some(&Term::iri("b")), None);
        got.sort();
        assert_eq!(got, vec![(Term::iri("b"), Term::iri("a"))]);
    }
}
