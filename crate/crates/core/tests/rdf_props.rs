use glosis_core::rdf::{
    is_isomorphic, parse_turtle, read_list, serialize_turtle, write_list, Graph, PrefixMap, Term, Triple,
};
use proptest::prelude::*;

fn iri() -> impl Strategy<Value = Term> {
    (0..12u8).prop_map(|i| Term::iri(format!("http://ex.org/n{i}")))
}

fn predicate() -> impl Strategy<Value = Term> {
    (0..5u8).prop_map(|i| Term::iri(format!("http://ex.org/p{i}")))
}

fn subject() -> impl Strategy<Value = Term> {
    prop_oneof![3 => iri(), 1 => (0..6u8).prop_map(|i| Term::blank(format!("b{i}")))]
}

fn literal() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z \"\\\\\n]{0,6}".prop_map(Term::literal),
        (-50i32..50).prop_map(|n| Term::typed(n.to_string(), "http://www.w3.org/2001/XMLSchema#integer")),
        "[a-z]{1,4}".prop_map(|s| Term::lang(s, "en")),
        "[0-9]\\.[0-9]{1,2}".prop_map(|s| Term::typed(s, "http://www.w3.org/2001/XMLSchema#float")),
    ]
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![subject(), literal()]
}

fn triple() -> impl Strategy<Value = Triple> {
    (subject(), predicate(), object()).prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    prop::collection::vec(triple(), 0..max).prop_map(|ts| ts.into_iter().collect())
}

fn pattern_term<S: Strategy<Value = Term>>(s: S) -> impl Strategy<Value = Option<Term>> {
    prop::option::of(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matching_equals_full_scan(
        g in graph(1000),
        s in pattern_term(subject()),
        p in pattern_term(predicate()),
        o in pattern_term(object()),
    ) {
        let mut got = g.matching(s.as_ref(), p.as_ref(), o.as_ref());
        got.sort();
        let mut expected: Vec<Triple> = g
            .iter()
            .filter(|t| s.as_ref().is_none_or(|s| &t.subject == s)
                && p.as_ref().is_none_or(|p| &t.predicate == p)
                && o.as_ref().is_none_or(|o| &t.object == o))
            .collect();
        expected.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn serialize_then_parse_is_isomorphic(g in graph(60)) {
        let prefixes: PrefixMap = [("ex", "http://ex.org/")].into_iter().collect();
        let text = serialize_turtle(&g, &prefixes);
        let back = parse_turtle(&text, None).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert!(is_isomorphic(&g, &back), "{}", text);
    }

    #[test]
    fn lists_survive_serialization(items in prop::collection::vec(prop_oneof![iri(), literal()], 0..=20)) {
        let mut g = Graph::new();
        let head = write_list(&mut g, &items);
        g.add(Term::iri("http://ex.org/C"), Term::iri("http://www.w3.org/2002/07/owl#oneOf"), head);
        let text = serialize_turtle(&g, &PrefixMap::new());
        let back = parse_turtle(&text, None).unwrap();
        let head = back.object(&Term::iri("http://ex.org/C"), "http://www.w3.org/2002/07/owl#oneOf").unwrap();
        prop_assert_eq!(read_list(&back, head).unwrap(), items);
    }
}
