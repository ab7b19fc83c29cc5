//! SPARQL-subset parsing and evaluation over in-memory graphs.

mod ast;
mod eval;
mod expr;
mod lexer;
mod parser;
mod path;
mod results;
mod service;

pub use ast::*;
pub use eval::{evaluate, evaluate_graph, evaluate_with, EvalOptions};
pub use expr::builtin_call;
pub use lexer::{tokenize, Tok, Token};
pub use parser::parse_query;
pub use path::eval_path;
pub use results::{from_sparql_json, to_csv, to_sparql_json};
pub use service::{LocalEndpoints, NoServices, ServiceClient};

use crate::rdf::Term;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QueryError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { message: String, line: usize, column: usize },
    #[error("unsupported feature {feature} at {line}:{column}")]
    Unsupported { feature: String, line: usize, column: usize },
    #[error("service <{endpoint}> failed: {message}")]
    Service { endpoint: String, message: String },
    #[error("malformed results: {0}")]
    Results(String),
}

/// Query results: a variable header and one row of optional bindings per
/// solution. Every row has the header's width.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolutionTable {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

impl SolutionTable {
    pub fn new(vars: Vec<String>) -> Self {
        SolutionTable { vars, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Binding of `var` in row `row`.
    pub fn get(&self, row: usize, var: &str) -> Option<&Term> {
        let c = self.column(var)?;
        self.rows.get(row)?.get(c)?.as_ref()
    }

    /// Rows as sorted multiset, for order-insensitive comparison.
    pub fn sorted_rows(&self) -> Vec<Vec<Option<Term>>> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }
}
