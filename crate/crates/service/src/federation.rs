use std::collections::BTreeSet;
use std::time::Duration;

use glosis_core::query::{from_sparql_json, ServiceClient, SolutionTable};

/// SERVICE client speaking the SPARQL protocol over HTTP. Only registered
/// endpoint URLs are contacted.
pub struct HttpServices {
    allowed: BTreeSet<String>,
    agent: ureq::Agent,
}

impl HttpServices {
    pub fn new<'a>(endpoints: impl IntoIterator<Item = &'a String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
        HttpServices { allowed: endpoints.into_iter().cloned().collect(), agent }
    }
}

impl ServiceClient for HttpServices {
    fn query(&self, endpoint: &str, query: &str) -> Result<SolutionTable, String> {
        if !self.allowed.contains(endpoint) {
            return Err(format!("<{endpoint}> is not a registered endpoint"));
        }
        let mut response = self
            .agent
            .post(endpoint)
            .header("Accept", "application/sparql-results+json")
            .header("Content-Type", "application/sparql-query")
            .send(query)
            .map_err(|e| e.to_string())?;
        let body = response.body_mut().read_to_string().map_err(|e| e.to_string())?;
        let doc: serde_json::Value = serde_json::from_str(&body).map_err(|e| e.to_string())?;
        from_sparql_json(&doc).map_err(|e| e.to_string())
    }
}
