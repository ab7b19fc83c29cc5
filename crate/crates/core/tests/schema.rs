mod common;

use common::*;
use glosis_core::rdf::vocab::{qudt, sosa, xsd};
use glosis_core::rdf::{parse_turtle, Graph, Term};
use glosis_core::schema::{
    load_catalog, CatalogWarning, Category, ClassExpr, RestrictionKind, RestrictionSpec, SchemaError,
};

fn spec(p: &str, kind: RestrictionKind) -> RestrictionSpec {
    RestrictionSpec { on_property: p.to_string(), kind }
}

#[test]
fn mini_catalog_loads_without_unresolved_imports() {
    let cat = mini_catalog();
    assert_eq!(cat.modules().count(), 8);
    assert!(cat.warnings().is_empty(), "{:?}", cat.warnings());
    assert_eq!(cat.import_closure("http://w3id.org/glosis/model/main").len(), 8);
    // Counted by reading the fixture: roots abundance, sand property and
    // physio-chemical property codelists; observation classes FragmentCover,
    // RootsAbundance, LayerRemarks, PH, ElectricalConductivity,
    // NitrogenTotal and LandUseClass.
    assert_eq!(cat.codelists().len(), 3);
    let observations = cat.profiles().filter(|p| p.category == Category::Observation).count();
    assert_eq!(observations, 7);
}

#[test]
fn empty_and_duplicate_inputs() {
    let cat = load_catalog(vec![]).unwrap();
    assert!(cat.is_empty() && cat.codelists().is_empty() && cat.procedures().is_empty());
    let g = Graph::new();
    let err = load_catalog(vec![("http://m".into(), g.clone()), ("http://m".into(), g)]).unwrap_err();
    assert_eq!(err, SchemaError::DuplicateModule("http://m".into()));
}

#[test]
fn absent_import_is_a_warning() {
    let g = parse_turtle("<http://m> a <http://www.w3.org/2002/07/owl#Ontology> ; <http://www.w3.org/2002/07/owl#imports> <http://absent> .", None).unwrap();
    let cat = load_catalog(vec![("http://m".into(), g)]).unwrap();
    assert_eq!(
        cat.warnings(),
        &[CatalogWarning::UnresolvedImport { module: "http://m".into(), import: "http://absent".into() }]
    );
}

#[test]
fn fragment_cover_profile() {
    let cat = mini_catalog();
    let p = cat.extract_class_profile(&iri(CM, "FragmentCover")).unwrap();
    assert_eq!(p.category, Category::Observation);
    assert_eq!(p.superclasses, vec![sosa::OBSERVATION.to_string()]);
    assert!(p.restrictions.contains(&spec(
        sosa::OBSERVED_PROPERTY,
        RestrictionKind::HasValue(Term::iri(iri(CM, "fragmentCoverProperty")))
    )));
    assert!(p.restrictions.contains(&spec(
        sosa::HAS_RESULT,
        RestrictionKind::SomeValuesFrom(ClassExpr::Named(iri(CL, "FragmentCoverValueCode")))
    )));
    assert_eq!(p.restrictions.len(), 2);
}

#[test]
fn bulk_density_value_profile() {
    let cat = mini_catalog();
    let p = cat.extract_class_profile(&iri(LH, "BulkDensityWholeSoilValue")).unwrap();
    assert_eq!(p.category, Category::QuantityValue);
    assert_eq!(p.restrictions.len(), 2);
    assert!(p.restrictions.contains(&spec(
        qudt::UNIT,
        RestrictionKind::HasValue(Term::iri("http://qudt.org/vocab/unit/KiloGM-PER-DeciM3"))
    )));
    assert!(p
        .restrictions
        .contains(&spec(qudt::NUMERIC_VALUE, RestrictionKind::AllValuesFrom(ClassExpr::Named(xsd::FLOAT.into())))));
}

#[test]
fn plot_profile_has_eight_cardinalities() {
    let cat = mini_catalog();
    let p = cat.extract_class_profile(&iri(SP, "GL_Plot")).unwrap();
    assert_eq!(p.category, Category::SpatialObject);
    let props: Vec<String> = p
        .restrictions
        .iter()
        .map(|r| {
            assert_eq!(r.kind, RestrictionKind::Cardinality(1));
            r.on_property.trim_start_matches(SP).to_string()
        })
        .collect();
    let mut expected = vec![
        "location",
        "remarks",
        "responsibleOrganization",
        "positionalAccuracy",
        "altitude",
        "timestamp",
        "mapSheetID",
        "country",
    ];
    expected.sort();
    let mut got = props.clone();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn union_and_simple_result_restrictions() {
    let cat = mini_catalog();
    let roots = cat.extract_class_profile(&iri(LH, "RootsAbundance")).unwrap();
    assert!(roots.restrictions.contains(&spec(
        sosa::HAS_FEATURE_OF_INTEREST,
        RestrictionKind::AllValuesFrom(ClassExpr::Union(vec![iri(LH, "GL_Layer"), iri(LH, "GL_Horizon")]))
    )));
    assert!(roots.restrictions.contains(&spec(
        sosa::HAS_RESULT,
        RestrictionKind::SomeValuesFrom(ClassExpr::Named(iri(CL, "RootsAbundanceValueCode")))
    )));
    let remarks = cat.extract_class_profile(&iri(LH, "LayerRemarks")).unwrap();
    assert!(remarks.restrictions.contains(&spec(
        sosa::HAS_SIMPLE_RESULT,
        RestrictionKind::AllValuesFrom(ClassExpr::Named(xsd::STRING.into()))
    )));
}

#[test]
fn unknown_class_and_undecodable_restriction() {
    let cat = mini_catalog();
    assert!(matches!(cat.extract_class_profile("http://nowhere/X"), Err(SchemaError::UnknownClass(_))));
    let g = parse_turtle(
        "@prefix owl: <http://www.w3.org/2002/07/owl#> . @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
         <http://ex/C> a owl:Class ; rdfs:subClassOf [ a owl:Restriction ; owl:hasValue <http://ex/v> ] .",
        None,
    )
    .unwrap();
    let cat = load_catalog(vec![("http://ex/m".into(), g)]).unwrap();
    match cat.extract_class_profile("http://ex/C") {
        Err(SchemaError::UndecodableRestriction { node, .. }) => assert!(node.is_blank()),
        other => panic!("{other:?}"),
    }
    assert_eq!(cat.warnings().len(), 1);
}

#[test]
fn profiles_survive_reserialization() {
    let cat = mini_catalog();
    for p in cat.profiles() {
        let again = load_catalog(vec![("http://ex/m".into(), p.to_graph())]).unwrap();
        let q = again.extract_class_profile(&p.class).unwrap();
        let mut a = p.restrictions.clone();
        let mut b = q.restrictions.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{}", p.class);
        assert_eq!(p.superclasses, q.superclasses);
        assert_eq!(cat.extract_class_profile(&p.class).unwrap(), *p);
    }
}

#[test]
fn roots_abundance_codelist_is_closed_in_order() {
    let cat = mini_catalog();
    let cl = cat.codelist_for_class(&iri(CL, "RootsAbundanceValueCode")).unwrap();
    assert!(cl.closed && !cl.observable_property);
    assert_eq!(cl.scheme, iri(CL, "rootsAbundanceValueCode"));
    let notations: Vec<_> = cl.concepts.iter().map(|c| c.notation.clone().unwrap()).collect();
    assert_eq!(notations, ["N", "V", "F", "C", "M"]);
    assert_eq!(cl.concepts[0].pref_label.as_deref(), Some("None"));
    assert!(cl.scheme_sees_class && cl.class_sees_scheme);
}

#[test]
fn sand_property_codelist_is_an_observable_property() {
    let cat = mini_catalog();
    let cl = cat.codelist_for_class(&iri(CL, "SandPropertyCode")).unwrap();
    assert!(cl.observable_property && !cl.closed);
    assert_eq!(cat.category(&cl.class), Category::Codelist);
}

#[test]
fn closed_codelist_members_are_typed_and_in_scheme() {
    let cat = mini_catalog();
    let g = cat.graph();
    for cl in cat.codelists().iter().filter(|c| c.closed) {
        for c in &cl.concepts {
            let node = Term::iri(&c.iri);
            assert!(g.has(&node, "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", &Term::iri(&cl.class)));
            assert!(g.has(&node, "http://www.w3.org/2004/02/skos/core#inScheme", &Term::iri(&cl.scheme)));
        }
    }
}

#[test]
fn procedure_schemes() {
    let cat = mini_catalog();
    let nitrogen = cat.procedures().iter().find(|p| p.scheme == iri(PROC, "nitrogenTotalProcedure")).unwrap();
    let kj = nitrogen.concept(&iri(PROC, "nitrogenTotalProcedure-TotalN_kjeldahl")).unwrap();
    assert_eq!(kj.pref_label.as_deref(), Some("TotalN_kjeldahl"));
    assert!(kj.scope_notes.contains(&Term::iri("https://en.wikipedia.org/wiki/Kjeldahl_method")));
    let ph = cat.procedures().iter().find(|p| p.scheme == iri(PROC, "pHProcedure")).unwrap();
    assert!(ph.concept(&iri(PROC, "pHProcedure-pHCaCl2")).is_some());
    assert!(ph.concept(&iri(PROC, "pHProcedure-pHH2O")).is_some());
    assert_eq!(ph.descendants(&iri(PROC, "pHProcedure-pHH2O")).len(), 2);
    assert!(ph.broader_cycle().is_none());
    assert_eq!(cat.procedures().len(), 2);
}

#[test]
fn metadata_matches_module_triples() {
    let cat = mini_catalog();
    for (iri, g) in cat.modules() {
        let rec = cat.extract_metadata(iri).unwrap();
        let s = Term::iri(iri);
        let lookup = |p: &str| g.object(&s, p).map(|t| t.value().to_string());
        assert_eq!(rec.title, lookup("http://purl.org/dc/terms/title"));
        assert_eq!(rec.version_info.as_deref(), Some("1.0.1"));
        assert_eq!(rec.license, lookup("http://purl.org/dc/terms/license"));
        assert_eq!(rec.creators, ["Soil Data Modelling Group"]);
        assert_eq!(rec.contributors, ["Codelist Editors"]);
        assert_eq!(rec.affiliations, ["Example Soil Institute", "Example Survey Agency"]);
    }
    assert!(matches!(cat.extract_metadata("http://nope"), Err(SchemaError::UnknownModule(_))));
}

#[test]
fn equivalence_aliases_reach_observation() {
    let cat = mini_catalog();
    let om = "http://def.isotc211.org/iso19156/2011/Observation#OM_Observation";
    assert!(cat.superclasses(&iri(LH, "PH")).contains(om));
    assert!(cat.superclasses(om).contains(sosa::OBSERVATION));
}
