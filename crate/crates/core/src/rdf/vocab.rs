//! IRI constants for the vocabularies the toolkit reasons about.

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
    pub const SEE_ALSO: &str = "http://www.w3.org/2000/01/rdf-schema#seeAlso";
    pub const LITERAL: &str = "http://www.w3.org/2000/01/rdf-schema#Literal";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
    pub const NON_NEGATIVE_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#nonNegativeInteger";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

pub mod owl {
    pub const NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const ONTOLOGY: &str = "http://www.w3.org/2002/07/owl#Ontology";
    pub const RESTRICTION: &str = "http://www.w3.org/2002/07/owl#Restriction";
    pub const ON_PROPERTY: &str = "http://www.w3.org/2002/07/owl#onProperty";
    pub const SOME_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#someValuesFrom";
    pub const ALL_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#allValuesFrom";
    pub const HAS_VALUE: &str = "http://www.w3.org/2002/07/owl#hasValue";
    pub const CARDINALITY: &str = "http://www.w3.org/2002/07/owl#cardinality";
    pub const MIN_CARDINALITY: &str = "http://www.w3.org/2002/07/owl#minCardinality";
    pub const MAX_CARDINALITY: &str = "http://www.w3.org/2002/07/owl#maxCardinality";
    pub const UNION_OF: &str = "http://www.w3.org/2002/07/owl#unionOf";
    pub const ONE_OF: &str = "http://www.w3.org/2002/07/owl#oneOf";
    pub const IMPORTS: &str = "http://www.w3.org/2002/07/owl#imports";
    pub const VERSION_INFO: &str = "http://www.w3.org/2002/07/owl#versionInfo";
    pub const VERSION_IRI: &str = "http://www.w3.org/2002/07/owl#versionIRI";
    pub const EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";
}

pub mod skos {
    pub const NS: &str = "http://www.w3.org/2004/02/skos/core#";
    pub const CONCEPT: &str = "http://www.w3.org/2004/02/skos/core#Concept";
    pub const CONCEPT_SCHEME: &str = "http://www.w3.org/2004/02/skos/core#ConceptScheme";
    pub const PREF_LABEL: &str = "http://www.w3.org/2004/02/skos/core#prefLabel";
    pub const NOTATION: &str = "http://www.w3.org/2004/02/skos/core#notation";
    pub const DEFINITION: &str = "http://www.w3.org/2004/02/skos/core#definition";
    pub const NOTE: &str = "http://www.w3.org/2004/02/skos/core#note";
    pub const SCOPE_NOTE: &str = "http://www.w3.org/2004/02/skos/core#scopeNote";
    pub const IN_SCHEME: &str = "http://www.w3.org/2004/02/skos/core#inScheme";
    pub const TOP_CONCEPT_OF: &str = "http://www.w3.org/2004/02/skos/core#topConceptOf";
    pub const BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";
    pub const NARROWER: &str = "http://www.w3.org/2004/02/skos/core#narrower";
}

pub mod sosa {
    pub const NS: &str = "http://www.w3.org/ns/sosa/";
    pub const OBSERVATION: &str = "http://www.w3.org/ns/sosa/Observation";
    pub const OBSERVABLE_PROPERTY: &str = "http://www.w3.org/ns/sosa/ObservableProperty";
    pub const PROCEDURE: &str = "http://www.w3.org/ns/sosa/Procedure";
    pub const HAS_FEATURE_OF_INTEREST: &str = "http://www.w3.org/ns/sosa/hasFeatureOfInterest";
    pub const OBSERVED_PROPERTY: &str = "http://www.w3.org/ns/sosa/observedProperty";
    pub const HAS_RESULT: &str = "http://www.w3.org/ns/sosa/hasResult";
    pub const HAS_SIMPLE_RESULT: &str = "http://www.w3.org/ns/sosa/hasSimpleResult";
    pub const USED_PROCEDURE: &str = "http://www.w3.org/ns/sosa/usedProcedure";
}

pub mod qudt {
    pub const NS: &str = "http://qudt.org/schema/qudt/";
    pub const QUANTITY_VALUE: &str = "http://qudt.org/schema/qudt/QuantityValue";
    pub const NUMERIC_VALUE: &str = "http://qudt.org/schema/qudt/numericValue";
    pub const UNIT: &str = "http://qudt.org/schema/qudt/unit";
    pub const UNIT_NS: &str = "http://qudt.org/vocab/unit/";
}

pub mod gsp {
    pub const NS: &str = "http://www.opengis.net/ont/geosparql#";
    pub const FEATURE: &str = "http://www.opengis.net/ont/geosparql#Feature";
    pub const GEOMETRY: &str = "http://www.opengis.net/ont/geosparql#Geometry";
    pub const HAS_GEOMETRY: &str = "http://www.opengis.net/ont/geosparql#hasGeometry";
    pub const AS_WKT: &str = "http://www.opengis.net/ont/geosparql#asWKT";
    pub const WKT_LITERAL: &str = "http://www.opengis.net/ont/geosparql#wktLiteral";
    pub const FUNCTION_NS: &str = "http://www.opengis.net/def/function/geosparql/";
    pub const SF_INTERSECTS: &str = "http://www.opengis.net/def/function/geosparql/sfIntersects";
}

pub mod dcterms {
    pub const NS: &str = "http://purl.org/dc/terms/";
    pub const TITLE: &str = "http://purl.org/dc/terms/title";
    pub const CREATOR: &str = "http://purl.org/dc/terms/creator";
    pub const CONTRIBUTOR: &str = "http://purl.org/dc/terms/contributor";
    pub const LICENSE: &str = "http://purl.org/dc/terms/license";
    pub const DESCRIPTION: &str = "http://purl.org/dc/terms/description";
}

pub mod foaf {
    pub const NS: &str = "http://xmlns.com/foaf/0.1/";
    pub const NAME: &str = "http://xmlns.com/foaf/0.1/name";
}

pub mod schema_org {
    pub const NS: &str = "http://schema.org/";
    pub const AFFILIATION: &str = "http://schema.org/affiliation";
    pub const NAME: &str = "http://schema.org/name";
}

pub mod iso28258 {
    pub const NS: &str = "http://w3id.org/glosis/model/iso28258/2013#";
    pub const SITE_TYPICAL_PROFILE: &str = "http://w3id.org/glosis/model/iso28258/2013#Site.typicalProfile";
    pub const PROFILE_ELEMENT: &str = "http://w3id.org/glosis/model/iso28258/2013#Profile.element";
}

/// The namespace table used throughout GloSIS documents, plus the W3C
/// vocabularies every document relies on. Queries may use these prefixes
/// without declaring them.
pub const WELL_KNOWN_PREFIXES: &[(&str, &str)] = &[
    ("rdf", rdf::NS),
    ("rdfs", rdfs::NS),
    ("owl", owl::NS),
    ("xsd", xsd::NS),
    ("skos", skos::NS),
    ("dcterms", dcterms::NS),
    ("foaf", foaf::NS),
    ("schema", schema_org::NS),
    ("glosis_sp", "http://w3id.org/glosis/model/siteplot/"),
    ("glosis_pr", "http://w3id.org/glosis/model/profile/"),
    ("glosis_lh", "http://w3id.org/glosis/model/layerhorizon/"),
    ("glosis_cl", "http://w3id.org/glosis/model/codelists/"),
    ("glosis_proc", "http://w3id.org/glosis/model/procedure/"),
    ("glosis_cm", "http://w3id.org/glosis/model/common/"),
    ("ssn", "http://www.w3.org/ns/ssn/"),
    ("sosa", sosa::NS),
    ("qudt", qudt::NS),
    ("unit", qudt::UNIT_NS),
    ("gn", "http://www.geonames.org/ontology#"),
    ("nuts", "http://nuts.geovocab.org/id/"),
    ("gsp", gsp::NS),
    ("geof", gsp::FUNCTION_NS),
    ("iso28258", iso28258::NS),
    ("iso19115-1", "http://def.isotc211.org/iso19115/-1/2018/CitationAndResponsiblePartyInformation#"),
    ("cap-parcel", "http://lpis.ec.europa.eu/registry/applicationschema/cap-iacs-parcel#"),
    ("lcc-cr", "https://www.omg.org/spec/LCC/Countries/CountryRepresentation/"),
    ("ramon", "http://rdfdata.eionet.europa.eu/ramon/ontology/"),
    ("bif", "http://www.openlinksw.com/schemas/bif#"),
];
