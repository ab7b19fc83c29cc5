use serde_json::{json, Map, Value};

use crate::rdf::vocab::xsd;
use crate::rdf::Term;

use super::{QueryError, SolutionTable};

fn term_json(t: &Term) -> Value {
    match t {
        Term::Iri(i) => json!({ "type": "uri", "value": i }),
        Term::BlankNode(b) => json!({ "type": "bnode", "value": b }),
        Term::Literal(l) => {
            let mut m = Map::new();
            m.insert("type".into(), "literal".into());
            m.insert("value".into(), l.lexical().into());
            if let Some(lang) = l.language() {
                m.insert("xml:lang".into(), lang.into());
            } else if l.datatype() != xsd::STRING {
                m.insert("datatype".into(), l.datatype().into());
            }
            Value::Object(m)
        }
    }
}

/// SPARQL 1.1 results JSON. Unbound variables are omitted from a binding.
pub fn to_sparql_json(table: &SolutionTable) -> Value {
    let bindings: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let m: Map<String, Value> =
                table.vars.iter().zip(row).filter_map(|(v, t)| t.as_ref().map(|t| (v.clone(), term_json(t)))).collect();
            Value::Object(m)
        })
        .collect();
    json!({ "head": { "vars": table.vars }, "results": { "bindings": bindings } })
}

fn json_term(v: &Value) -> Result<Term, QueryError> {
    let bad = |m: &str| QueryError::Results(m.to_string());
    let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| bad("binding without type"))?;
    let value = v.get("value").and_then(Value::as_str).ok_or_else(|| bad("binding without value"))?;
    Ok(match kind {
        "uri" => Term::iri(value),
        "bnode" => Term::blank(value),
        "literal" | "typed-literal" => {
            if let Some(lang) = v.get("xml:lang").and_then(Value::as_str) {
                Term::lang(value, lang)
            } else if let Some(dt) = v.get("datatype").and_then(Value::as_str) {
                Term::typed(value, dt)
            } else {
                Term::literal(value)
            }
        }
        other => return Err(bad(&format!("unknown term type {other:?}"))),
    })
}

/// Parses SPARQL 1.1 results JSON, as returned by a remote endpoint.
pub fn from_sparql_json(doc: &Value) -> Result<SolutionTable, QueryError> {
    let bad = |m: &str| QueryError::Results(m.to_string());
    let vars: Vec<String> = doc
        .pointer("/head/vars")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing head.vars"))?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad("variable name is not a string")))
        .collect::<Result<_, _>>()?;
    let bindings =
        doc.pointer("/results/bindings").and_then(Value::as_array).ok_or_else(|| bad("missing results.bindings"))?;
    let mut table = SolutionTable::new(vars);
    for b in bindings {
        let obj = b.as_object().ok_or_else(|| bad("binding is not an object"))?;
        let mut row = Vec::with_capacity(table.vars.len());
        for v in &table.vars {
            row.push(obj.get(v).map(json_term).transpose()?);
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// SPARQL 1.1 results CSV: lexical forms and IRIs without markup.
pub fn to_csv(table: &SolutionTable) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&table.vars).expect("writing to memory");
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|t| match t {
                None => String::new(),
                Some(Term::BlankNode(b)) => format!("_:{b}"),
                Some(t) => t.value().to_string(),
            })
            .collect();
        w.write_record(&cells).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV of UTF-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let table = SolutionTable {
            vars: vec!["a".into(), "b".into()],
            rows: vec![
                vec![Some(Term::iri("http://x")), Some(Term::typed("4.3", xsd::FLOAT))],
                vec![Some(Term::lang("sol", "fr")), None],
                vec![Some(Term::blank("b0")), Some(Term::literal("x"))],
            ],
        };
        let back = from_sparql_json(&to_sparql_json(&table)).unwrap();
        assert_eq!(back, table);
        assert_eq!(to_csv(&table).lines().next(), Some("a,b"));
    }
}
