mod common;

use common::*;
use glosis_core::rdf::{Graph, Term, Triple};
use glosis_core::schema::load_catalog;
use glosis_core::validate::{validate_codelists, validate_dataset, Rule, Severity, ValidationConfig};
use proptest::prelude::*;

const LUCAS: &str = "http://w3id.org/glosis/open/LUCAS/topsoildata/#";
const UNIT: &str = "http://qudt.org/vocab/unit/";
const QUDT_UNIT: &str = "http://qudt.org/schema/qudt/unit";
const NUMERIC: &str = "http://qudt.org/schema/qudt/numericValue";
const FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

fn lucas() -> Graph {
    turtle("data/lucas_26761786.ttl")
}

fn ph_value() -> Term {
    Term::iri(format!("{LUCAS}phCaCl2_value_26761786"))
}

fn replace(g: &mut Graph, old: Triple, new: Triple) {
    assert!(g.remove(&old), "{old} not present");
    g.insert(new);
}

#[test]
fn data_fixtures_have_no_errors() {
    let cat = mini_catalog();
    for f in ["data/lucas_26761786.ttl", "data/srdb_12211.ttl", "data/wosis_profiles.ttl"] {
        let report = validate_dataset(&turtle(f), &cat, &ValidationConfig::default());
        assert!(report.conforms(), "{f}:\n{}", report.to_text());
    }
}

#[test]
fn srdb_silt_result_outside_conductivity_values_is_a_warning() {
    let report = validate_dataset(&turtle("data/srdb_12211.ttl"), &mini_catalog(), &ValidationConfig::default());
    let r3: Vec<_> = report.findings().iter().filter(|f| f.rule == Rule::R3).collect();
    assert_eq!(r3.len(), 1);
    assert_eq!(r3[0].severity, Severity::Warning);
    assert!(r3[0].focus.value().ends_with("si_12211_CN-SN-N180"));
}

#[test]
fn unit_mutation_is_one_r4_error() {
    let mut g = lucas();
    let unit = Term::iri(QUDT_UNIT);
    replace(
        &mut g,
        Triple::new(ph_value(), unit.clone(), Term::iri(format!("{UNIT}PH"))),
        Triple::new(ph_value(), unit, Term::iri(format!("{UNIT}PERCENT"))),
    );
    let report = validate_dataset(&g, &mini_catalog(), &ValidationConfig::default());
    let errors: Vec<_> = report.errors().collect();
    assert_eq!(errors.len(), 1, "{}", report.to_text());
    assert_eq!(errors[0].rule, Rule::R4);
    assert_eq!(errors[0].focus, ph_value());
}

#[test]
fn numeric_mutation_is_one_r4_error() {
    let mut g = lucas();
    let p = Term::iri(NUMERIC);
    replace(
        &mut g,
        Triple::new(ph_value(), p.clone(), Term::typed("4.30", FLOAT)),
        Triple::new(ph_value(), p, Term::typed("abc", FLOAT)),
    );
    let report = validate_dataset(&g, &mini_catalog(), &ValidationConfig::default());
    let errors: Vec<_> = report.errors().collect();
    assert_eq!(errors.len(), 1, "{}", report.to_text());
    assert_eq!(errors[0].rule, Rule::R4);
}

#[test]
fn foreign_roots_abundance_member_is_one_r7_error() {
    let mut g = lucas();
    g.add(
        Term::iri("http://example.org/rootsAbundanceValueCode-X"),
        Term::iri(TYPE),
        Term::iri(iri(CL, "RootsAbundanceValueCode")),
    );
    let report = validate_dataset(&g, &mini_catalog(), &ValidationConfig::default());
    let errors: Vec<_> = report.errors().collect();
    assert_eq!(errors.len(), 1, "{}", report.to_text());
    assert_eq!(errors[0].rule, Rule::R7);
}

#[test]
fn mini_codelists_conform() {
    let report = validate_codelists(&mini_catalog());
    assert!(report.findings().is_empty(), "{}", report.to_text());
}

fn catalog_without(predicate: &str, subject: &str) -> glosis_core::schema::OntologyCatalog {
    let modules = mini_modules()
        .into_iter()
        .map(|(iri, mut g)| {
            for t in g.matching(Some(&Term::iri(subject)), Some(&Term::iri(predicate)), None) {
                g.remove(&t);
            }
            (iri, g)
        })
        .collect();
    load_catalog(modules).unwrap()
}

#[test]
fn removed_see_also_is_a_reciprocity_warning() {
    let cat = catalog_without("http://www.w3.org/2000/01/rdf-schema#seeAlso", &iri(CL, "rootsAbundanceValueCode"));
    let report = validate_codelists(&cat);
    assert_eq!(report.findings().len(), 1, "{}", report.to_text());
    assert_eq!((report.findings()[0].rule, report.findings()[0].severity), (Rule::R7, Severity::Warning));
}

#[test]
fn removed_in_scheme_is_an_error() {
    let cat = catalog_without("http://www.w3.org/2004/02/skos/core#inScheme", &iri(CL, "rootsAbundanceValueCode-N"));
    let report = validate_codelists(&cat);
    assert_eq!(report.findings().len(), 1, "{}", report.to_text());
    assert_eq!((report.findings()[0].rule, report.findings()[0].severity), (Rule::R7, Severity::Error));
}

#[test]
fn plot_cardinality_is_warning_unless_strict() {
    let mut g = Graph::new();
    g.add(Term::iri("http://ex/plot"), Term::iri(TYPE), Term::iri(iri(SP, "GL_Plot")));
    let cat = mini_catalog();
    let lax = validate_dataset(&g, &cat, &ValidationConfig::default());
    assert_eq!(lax.count(Severity::Warning), 8);
    assert!(lax.conforms());
    let strict = validate_dataset(&g, &cat, &ValidationConfig { strict: true, ..Default::default() });
    assert_eq!(strict.count(Severity::Error), 8);
    assert_eq!(lax.findings().len(), strict.findings().len());
}

#[test]
fn overrides_change_severity_only() {
    let mut g = lucas();
    g.add(Term::iri("http://ex/plot"), Term::iri(TYPE), Term::iri(iri(SP, "GL_Plot")));
    let cat = mini_catalog();
    let base = validate_dataset(&g, &cat, &ValidationConfig::default());
    let mut config = ValidationConfig::default();
    config.overrides.insert(Rule::R6, Severity::Error);
    let over = validate_dataset(&g, &cat, &config);
    let strip = |r: &glosis_core::validate::ValidationReport| {
        r.findings().iter().map(|f| (f.rule, f.focus.clone(), f.message.clone())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&base), strip(&over));
    assert!(!over.conforms());
}

#[test]
fn untyped_nodes_produce_nothing() {
    let mut g = Graph::new();
    g.add(Term::iri("http://ex/x"), Term::iri("http://www.w3.org/ns/sosa/hasResult"), Term::literal("junk"));
    g.add(Term::iri("http://ex/x"), Term::iri(QUDT_UNIT), Term::iri("http://ex/nonsense"));
    assert!(validate_dataset(&g, &mini_catalog(), &ValidationConfig::default()).findings().is_empty());
}

#[test]
fn observation_rules_fire_on_bad_data() {
    let src = format!(
        "@prefix sosa: <http://www.w3.org/ns/sosa/> . @prefix g_lh: <{LH}> . @prefix g_sp: <{SP}> .
         <http://ex/site> a g_sp:GL_Site .
         <http://ex/o1> a g_lh:PH ; sosa:hasFeatureOfInterest <http://ex/site> ;
             sosa:observedProperty <http://ex/wrongProperty> ;
             sosa:usedProcedure <http://ex/unknownProcedure> .
         <http://ex/o2> a g_lh:LayerRemarks ; sosa:hasSimpleResult 42 ."
    );
    let g = glosis_core::rdf::parse_turtle(&src, None).unwrap();
    let report = validate_dataset(&g, &mini_catalog(), &ValidationConfig::default());
    let rules: Vec<(Rule, Severity)> = report.findings().iter().map(|f| (f.rule, f.severity)).collect();
    assert!(rules.contains(&(Rule::R1, Severity::Error)), "{}", report.to_text());
    assert!(rules.contains(&(Rule::R2, Severity::Error)));
    assert!(rules.contains(&(Rule::R3, Severity::Error)));
    assert!(rules.contains(&(Rule::R5, Severity::Error)));
    assert!(rules.contains(&(Rule::R8, Severity::Warning)));
    let mut sorted = report.findings().to_vec();
    sorted.sort_by(|a, b| (a.rule, &a.focus).cmp(&(b.rule, &b.focus)));
    assert_eq!(sorted, report.findings());
    let json = report.to_json();
    assert_eq!(json["conforms"], false);
    assert_eq!(json["findings"].as_array().unwrap().len(), report.findings().len());
}

fn violation() -> impl Strategy<Value = Triple> {
    let subjects = ["phCaCl2_26761786", "phCaCl2_value_26761786", "ec_value_26761786", "layer_26761786", "lu_26761786"];
    let s = prop::sample::select(subjects.to_vec()).prop_map(|s| Term::iri(format!("{LUCAS}{s}")));
    let kind = prop_oneof![
        Just((QUDT_UNIT.to_string(), Term::iri(format!("{UNIT}PERCENT")))),
        Just((NUMERIC.to_string(), Term::typed("x1", FLOAT))),
        Just(("http://www.w3.org/ns/sosa/hasFeatureOfInterest".to_string(), Term::iri("http://ex/nowhere"))),
        Just((TYPE.to_string(), Term::iri(iri(CL, "RootsAbundanceValueCode")))),
        Just((TYPE.to_string(), Term::iri(iri(SP, "GL_Plot")))),
        Just(("http://www.w3.org/ns/sosa/usedProcedure".to_string(), Term::iri("http://ex/proc"))),
    ];
    (s, kind).prop_map(|(s, (p, o))| Triple::new(s, Term::iri(p), o))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adding_violations_never_removes_findings(extra in prop::collection::vec(violation(), 1..4)) {
        let cat = mini_catalog();
        let config = ValidationConfig::default();
        let mut g = lucas();
        let mut before = validate_dataset(&g, &cat, &config).findings().to_vec();
        for t in extra {
            g.insert(t);
            let after = validate_dataset(&g, &cat, &config);
            for f in &before {
                prop_assert!(after.findings().contains(f), "lost {:?}", f);
            }
            prop_assert_eq!(after.clone(), validate_dataset(&g, &cat, &config));
            before = after.findings().to_vec();
        }
    }
}
