//! Closed-world checking of data graphs against catalog restrictions.
//!
//! Validation is type-driven: only nodes with an asserted rdf:type are
//! checked, against the restrictions of every class in their superclass
//! closure. Restrictions on properties outside the observation, result,
//! quantity and procedure pattern are checked for cardinality only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rdf::vocab::{qudt, rdf, rdfs, skos, sosa, xsd};
use crate::rdf::{Graph, Term};
use crate::schema::{ClassExpr, OntologyCatalog, RestrictionKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Rule {
    /// Feature of interest typed within the allowed classes.
    R1,
    /// Observed property fixed by hasValue or drawn from a property codelist.
    R2,
    /// Result drawn from the restricted class.
    R3,
    /// Quantity value datatype and unit.
    R4,
    /// Simple result datatype.
    R5,
    /// Property cardinality.
    R6,
    /// Codelist integrity.
    R7,
    /// Procedure drawn from a known procedure scheme.
    R8,
}

impl Rule {
    pub const ALL: [Rule; 8] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7, Rule::R8];

    pub fn id(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
        }
    }

    pub fn parse(id: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id().eq_ignore_ascii_case(id))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub rule: Rule,
    pub focus: Term,
    pub path: Option<String>,
    pub message: String,
    pub severity: Severity,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationConfig {
    /// Escalates R6 cardinality findings to errors.
    pub strict: bool,
    pub overrides: BTreeMap<Rule, Severity>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    findings: Vec<Finding>,
}

#[derive(serde::Serialize)]
struct FindingJson<'a> {
    rule: &'static str,
    severity: Severity,
    focus: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<&'a str>,
    message: &'a str,
}

impl ValidationReport {
    fn new(mut findings: Vec<Finding>) -> Self {
        findings.sort();
        findings.dedup();
        ValidationReport { findings }
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.findings.iter().filter(|f| f.severity == severity).count()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn conforms(&self) -> bool {
        self.count(Severity::Error) == 0
    }

    /// Re-grades findings; the finding set itself is unchanged.
    pub fn with_config(mut self, config: &ValidationConfig) -> Self {
        for f in &mut self.findings {
            if f.rule == Rule::R6 && config.strict {
                f.severity = Severity::Error;
            }
            if let Some(s) = config.overrides.get(&f.rule) {
                f.severity = *s;
            }
        }
        self
    }

    pub fn merge(self, other: ValidationReport) -> Self {
        let mut all = self.findings;
        all.extend(other.findings);
        ValidationReport::new(all)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let findings: Vec<FindingJson> = self
            .findings
            .iter()
            .map(|f| FindingJson {
                rule: f.rule.id(),
                severity: f.severity,
                focus: f.focus.to_string(),
                path: f.path.as_deref(),
                message: &f.message,
            })
            .collect();
        serde_json::json!({
            "conforms": self.conforms(),
            "errors": self.count(Severity::Error),
            "warnings": self.count(Severity::Warning),
            "findings": findings,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            let path = f.path.as_deref().map(|p| format!("<{p}>")).unwrap_or_else(|| "-".into());
            out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", f.rule, f.severity, f.focus, path, f.message));
        }
        out.push_str(&format!(
            "{} error(s), {} warning(s); {}\n",
            self.count(Severity::Error),
            self.count(Severity::Warning),
            if self.conforms() { "conforms" } else { "does not conform" }
        ));
        out
    }
}

struct Checker<'a> {
    data: &'a Graph,
    cat: &'a OntologyCatalog,
    findings: Vec<Finding>,
}

impl Checker<'_> {
    fn push(&mut self, rule: Rule, severity: Severity, focus: &Term, path: Option<&str>, message: String) {
        self.findings.push(Finding { rule, severity, focus: focus.clone(), path: path.map(str::to_string), message });
    }

    fn typed_in(&self, node: &Term, expr: &ClassExpr) -> bool {
        let types = self.cat.types_of(self.data, node);
        expr.members().iter().any(|c| types.contains(*c))
    }

    fn values(&self, node: &Term, p: &str) -> Vec<Term> {
        self.data.objects(node, p).cloned().collect()
    }

    fn check_node(&mut self, node: &Term) {
        let types = self.cat.types_of(self.data, node);
        let mut restrictions = BTreeSet::new();
        for c in &types {
            if let Some(p) = self.cat.profile(c) {
                restrictions.extend(p.restrictions.iter().cloned());
            }
        }
        for r in &restrictions {
            let p = r.on_property.as_str();
            let values = self.values(node, p);
            match (&r.kind, p) {
                (RestrictionKind::Cardinality(n), _) if values.len() as u64 != *n => self.push(
                    Rule::R6,
                    Severity::Warning,
                    node,
                    Some(p),
                    format!("expected exactly {n} value(s), found {}", values.len()),
                ),
                (RestrictionKind::MinCardinality(n), _) if (values.len() as u64) < *n => self.push(
                    Rule::R6,
                    Severity::Warning,
                    node,
                    Some(p),
                    format!("expected at least {n} value(s), found {}", values.len()),
                ),
                (RestrictionKind::MaxCardinality(n), _) if values.len() as u64 > *n => self.push(
                    Rule::R6,
                    Severity::Warning,
                    node,
                    Some(p),
                    format!("expected at most {n} value(s), found {}", values.len()),
                ),
                (RestrictionKind::AllValuesFrom(e), sosa::HAS_FEATURE_OF_INTEREST) => {
                    let bad: Vec<&Term> = values.iter().filter(|v| !self.typed_in(v, e)).collect();
                    for v in bad {
                        self.push(
                            Rule::R1,
                            Severity::Error,
                            node,
                            Some(p),
                            format!("feature of interest {v} is not typed as {e}"),
                        );
                    }
                }
                (RestrictionKind::HasValue(expected), sosa::OBSERVED_PROPERTY) => {
                    self.check_observed_property(node, expected, &values, &restrictions)
                }
                (RestrictionKind::SomeValuesFrom(e) | RestrictionKind::AllValuesFrom(e), sosa::OBSERVED_PROPERTY) => {
                    let all = matches!(r.kind, RestrictionKind::AllValuesFrom(_));
                    let ok = values.iter().filter(|v| self.typed_in(v, e)).count();
                    if (all && ok < values.len()) || (!all && ok == 0 && !values.is_empty()) {
                        self.push(
                            Rule::R2,
                            Severity::Error,
                            node,
                            Some(p),
                            format!("observed property is not drawn from {e}"),
                        );
                    } else if !all && values.is_empty() {
                        self.push(Rule::R2, Severity::Error, node, Some(p), "no observed property".into());
                    }
                }
                (RestrictionKind::SomeValuesFrom(e), sosa::HAS_RESULT) => self.check_result(node, e, &values),
                (RestrictionKind::AllValuesFrom(e), sosa::HAS_RESULT) => {
                    let bad: Vec<&Term> = values.iter().filter(|v| !self.typed_in(v, e)).collect();
                    for v in bad {
                        self.push(Rule::R3, Severity::Error, node, Some(p), format!("result {v} is not typed as {e}"));
                    }
                }
                (RestrictionKind::AllValuesFrom(ClassExpr::Named(dt)), qudt::NUMERIC_VALUE) => {
                    for v in &values {
                        if let Some(problem) = datatype_problem(v, dt) {
                            self.push(Rule::R4, Severity::Error, node, Some(p), problem);
                        }
                    }
                }
                (RestrictionKind::HasValue(unit), qudt::UNIT) => {
                    if !values.contains(unit) {
                        let found = values.iter().map(Term::to_string).collect::<Vec<_>>().join(", ");
                        let found = if found.is_empty() { "none".to_string() } else { found };
                        self.push(
                            Rule::R4,
                            Severity::Error,
                            node,
                            Some(p),
                            format!("unit must be {unit}, found {found}"),
                        );
                    }
                }
                (RestrictionKind::AllValuesFrom(ClassExpr::Named(dt)), sosa::HAS_SIMPLE_RESULT) => {
                    for v in &values {
                        if let Some(problem) = datatype_problem(v, dt) {
                            self.push(Rule::R5, Severity::Error, node, Some(p), problem);
                        }
                    }
                }
                (RestrictionKind::SomeValuesFrom(e), sosa::USED_PROCEDURE)
                    if !values.iter().any(|v| self.typed_in(v, e)) =>
                {
                    self.push(Rule::R8, Severity::Warning, node, Some(p), format!("no procedure typed as {e}"));
                }
                _ => {}
            }
        }
        for v in self.values(node, sosa::USED_PROCEDURE) {
            let known = self.cat.procedures().iter().any(|s| s.concept(v.value()).is_some());
            if !known {
                self.push(
                    Rule::R8,
                    Severity::Warning,
                    node,
                    Some(sosa::USED_PROCEDURE),
                    format!("procedure {v} is not a concept of a known procedure scheme"),
                );
            }
        }
        for cl in self.cat.codelists().iter().filter(|c| c.closed) {
            if types.contains(&cl.class) && !cl.contains(node.value()) {
                self.push(
                    Rule::R7,
                    Severity::Error,
                    node,
                    Some(rdf::TYPE),
                    format!("typed as closed codelist <{}> but not among its enumerated members", cl.class),
                );
            }
        }
    }

    fn check_observed_property(
        &mut self,
        node: &Term,
        expected: &Term,
        values: &[Term],
        restrictions: &BTreeSet<crate::schema::RestrictionSpec>,
    ) {
        let p = sosa::OBSERVED_PROPERTY;
        if values.is_empty() {
            self.push(Rule::R2, Severity::Error, node, Some(p), format!("observed property {expected} missing"));
            return;
        }
        if values.contains(expected) {
            return;
        }
        // A value class given for the same property designates the codelist;
        // otherwise any observable-property codelist is accepted.
        let designated: Vec<&ClassExpr> = restrictions
            .iter()
            .filter(|r| r.on_property == p)
            .filter_map(|r| match &r.kind {
                RestrictionKind::SomeValuesFrom(e) | RestrictionKind::AllValuesFrom(e) => Some(e),
                _ => None,
            })
            .collect();
        let accepted = values.iter().any(|v| {
            if designated.is_empty() {
                let types = self.cat.types_of(self.data, v);
                self.cat.codelists().iter().any(|c| c.observable_property && types.contains(&c.class))
            } else {
                designated.iter().any(|e| self.typed_in(v, e))
            }
        });
        if !accepted {
            let found = values.iter().map(Term::to_string).collect::<Vec<_>>().join(", ");
            self.push(
                Rule::R2,
                Severity::Error,
                node,
                Some(p),
                format!("observed property must be {expected}, found {found}"),
            );
        }
    }

    fn check_result(&mut self, node: &Term, expr: &ClassExpr, values: &[Term]) {
        let p = sosa::HAS_RESULT;
        if values.is_empty() {
            self.push(Rule::R3, Severity::Error, node, Some(p), format!("no result; expected one typed as {expr}"));
            return;
        }
        if values.iter().any(|v| self.typed_in(v, expr)) {
            return;
        }
        let typed_elsewhere =
            values.iter().any(|v| self.data.types(v).next().is_some() || self.cat.graph().types(v).next().is_some());
        if typed_elsewhere {
            self.push(Rule::R3, Severity::Warning, node, Some(p), format!("result typed outside {expr}"));
        } else {
            self.push(Rule::R3, Severity::Error, node, Some(p), format!("result is not typed as {expr}"));
        }
    }
}

/// Applies R1-R8 to every typed node of `data`, plus the catalog-side R7
/// codelist checks.
pub fn validate_dataset(data: &Graph, cat: &OntologyCatalog, config: &ValidationConfig) -> ValidationReport {
    let mut checker = Checker { data, cat, findings: Vec::new() };
    let typed: BTreeSet<Term> =
        data.matching(None, Some(&Term::iri(rdf::TYPE)), None).into_iter().map(|t| t.subject).collect();
    for node in &typed {
        checker.check_node(node);
    }
    ValidationReport::new(checker.findings).merge(validate_codelists(cat)).with_config(config)
}

/// R7 over every codelist of the catalog: seeAlso reciprocity (warning) and
/// enumerated members typed and in scheme (error).
pub fn validate_codelists(cat: &OntologyCatalog) -> ValidationReport {
    let g = cat.graph();
    let mut findings = Vec::new();
    let mut push = |severity, focus: Term, path: &str, message: String| {
        findings.push(Finding { rule: Rule::R7, severity, focus, path: Some(path.to_string()), message });
    };
    for cl in cat.codelists() {
        if !cl.scheme_sees_class {
            push(
                Severity::Warning,
                Term::iri(&cl.scheme),
                rdfs::SEE_ALSO,
                format!("scheme does not point to its class <{}>", cl.class),
            );
        }
        if !cl.class_sees_scheme {
            push(
                Severity::Warning,
                Term::iri(&cl.class),
                rdfs::SEE_ALSO,
                format!("class does not point to its scheme <{}>", cl.scheme),
            );
        }
        if !cl.closed {
            continue;
        }
        for c in &cl.concepts {
            let node = Term::iri(&c.iri);
            if !g.has(&node, rdf::TYPE, &Term::iri(&cl.class)) {
                push(
                    Severity::Error,
                    node.clone(),
                    rdf::TYPE,
                    format!("enumerated member is not typed <{}>", cl.class),
                );
            }
            if !g.has(&node, skos::IN_SCHEME, &Term::iri(&cl.scheme)) {
                push(
                    Severity::Error,
                    node,
                    skos::IN_SCHEME,
                    format!("enumerated member is not in scheme <{}>", cl.scheme),
                );
            }
        }
    }
    ValidationReport::new(findings)
}

fn is_integer_type(dt: &str) -> bool {
    matches!(
        dt.strip_prefix(xsd::NS),
        Some(
            "integer"
                | "nonNegativeInteger"
                | "positiveInteger"
                | "nonPositiveInteger"
                | "negativeInteger"
                | "long"
                | "int"
                | "short"
                | "byte"
                | "unsignedLong"
                | "unsignedInt"
                | "unsignedShort"
                | "unsignedByte"
        )
    )
}

/// Whether a literal typed `actual` is acceptable where `expected` is required.
fn datatype_conforms(actual: &str, expected: &str) -> bool {
    actual == expected
        || expected == rdfs::LITERAL
        || (expected == xsd::STRING && actual == rdf::LANG_STRING)
        || (expected == xsd::DECIMAL && is_integer_type(actual))
        || (expected == xsd::INTEGER && is_integer_type(actual))
}

/// Checks a lexical form against the XSD lexical space of `dt`. Unknown
/// datatypes accept any form.
pub fn lexical_valid(lex: &str, dt: &str) -> bool {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let signed = |s: &str| s.strip_prefix(['+', '-']).unwrap_or(s).to_string();
    if is_integer_type(dt) {
        let body = signed(lex);
        let neg = lex.starts_with('-');
        let ok = digits(&body);
        return ok
            && match dt.strip_prefix(xsd::NS).unwrap_or("") {
                "nonNegativeInteger" | "unsignedLong" | "unsignedInt" | "unsignedShort" | "unsignedByte" => {
                    !neg || body.bytes().all(|b| b == b'0')
                }
                "positiveInteger" => !neg && body.bytes().any(|b| b != b'0'),
                "nonPositiveInteger" => neg || body.bytes().all(|b| b == b'0'),
                "negativeInteger" => neg && body.bytes().any(|b| b != b'0'),
                _ => true,
            };
    }
    match dt {
        xsd::DECIMAL => {
            let body = signed(lex);
            match body.split_once('.') {
                Some((i, f)) => {
                    (i.is_empty() || digits(i)) && (f.is_empty() || digits(f)) && !(i.is_empty() && f.is_empty())
                }
                None => digits(&body),
            }
        }
        xsd::FLOAT | xsd::DOUBLE => {
            if matches!(lex, "INF" | "+INF" | "-INF" | "NaN") {
                return true;
            }
            let (mantissa, exp) = match lex.find(['e', 'E']) {
                Some(i) => (&lex[..i], Some(&lex[i + 1..])),
                None => (lex, None),
            };
            lexical_valid(mantissa, xsd::DECIMAL) && exp.is_none_or(|e| digits(&signed(e)))
        }
        xsd::BOOLEAN => matches!(lex, "true" | "false" | "1" | "0"),
        _ => true,
    }
}

fn datatype_problem(v: &Term, expected: &str) -> Option<String> {
    let Some(lit) = v.as_literal() else {
        return Some(format!("{v} is not a literal of <{expected}>"));
    };
    if !datatype_conforms(lit.datatype(), expected) {
        return Some(format!("{v} has datatype <{}>, expected <{expected}>", lit.datatype()));
    }
    if !lexical_valid(lit.lexical(), lit.datatype()) {
        return Some(format!("\"{}\" is not a valid <{}> lexical form", lit.lexical(), lit.datatype()));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexical_forms() {
        assert!(lexical_valid("4.30", xsd::FLOAT));
        assert!(lexical_valid("1.3e-2", xsd::DOUBLE));
        assert!(lexical_valid("70", xsd::FLOAT));
        assert!(lexical_valid("-INF", xsd::FLOAT));
        assert!(!lexical_valid("abc", xsd::FLOAT));
        assert!(!lexical_valid("", xsd::FLOAT));
        assert!(!lexical_valid(".", xsd::DECIMAL));
        assert!(lexical_valid("1", xsd::NON_NEGATIVE_INTEGER));
        assert!(!lexical_valid("-1", xsd::NON_NEGATIVE_INTEGER));
        assert!(!lexical_valid("1.0", xsd::INTEGER));
    }

    #[test]
    fn datatype_derivation() {
        assert!(datatype_conforms(xsd::INTEGER, xsd::DECIMAL));
        assert!(datatype_conforms(rdf::LANG_STRING, xsd::STRING));
        assert!(!datatype_conforms(xsd::DECIMAL, xsd::INTEGER));
        assert!(!datatype_conforms(xsd::INTEGER, xsd::FLOAT));
        assert!(datatype_problem(&Term::lang("x", "en"), xsd::STRING).is_none());
        assert!(datatype_problem(&Term::literal("x"), xsd::STRING).is_none());
        assert!(datatype_problem(&Term::iri("http://x"), xsd::STRING).is_some());
    }

    #[test]
    fn rule_ids_parse() {
        for r in Rule::ALL {
            assert_eq!(Rule::parse(r.id()), Some(r));
        }
        assert_eq!(Rule::parse("r9"), None);
    }
}
