use std::collections::BTreeMap;

use crate::rdf::Dataset;

use super::{evaluate, parse_query, SolutionTable};

/// Answers the SELECT queries of SERVICE blocks.
pub trait ServiceClient: Send + Sync {
    /// Runs `query` at `endpoint`. The error is a human-readable reason.
    fn query(&self, endpoint: &str, query: &str) -> Result<SolutionTable, String>;
}

/// Fails every SERVICE call.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoServices;

impl ServiceClient for NoServices {
    fn query(&self, endpoint: &str, _query: &str) -> Result<SolutionTable, String> {
        Err(format!("no service client is configured for <{endpoint}>"))
    }
}

/// In-process endpoints keyed by endpoint IRI.
#[derive(Debug, Clone, Default)]
pub struct LocalEndpoints {
    endpoints: BTreeMap<String, Dataset>,
}

impl LocalEndpoints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, endpoint: impl Into<String>, dataset: Dataset) {
        self.endpoints.insert(endpoint.into(), dataset);
    }

    pub fn with(mut self, endpoint: impl Into<String>, dataset: Dataset) -> Self {
        self.insert(endpoint, dataset);
        self
    }
}

impl ServiceClient for LocalEndpoints {
    fn query(&self, endpoint: &str, query: &str) -> Result<SolutionTable, String> {
        let dataset = self.endpoints.get(endpoint).ok_or_else(|| format!("unknown endpoint <{endpoint}>"))?;
        let q = parse_query(query).map_err(|e| e.to_string())?;
        evaluate(dataset, &q, self).map_err(|e| e.to_string())
    }
}
