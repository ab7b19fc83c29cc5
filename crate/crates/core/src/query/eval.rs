use std::collections::BTreeSet;

use crate::rdf::{Dataset, Graph, Term};

use super::ast::*;
use super::expr::{eval, holds, order_cmp, Solution};
use super::path::pairs;
use super::{QueryError, ServiceClient, SolutionTable};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// A failing SERVICE block contributes no solutions instead of failing
    /// the query.
    pub lenient_services: bool,
}

/// Evaluates `query` over the union of the dataset's graphs.
pub fn evaluate(dataset: &Dataset, query: &Query, services: &dyn ServiceClient) -> Result<SolutionTable, QueryError> {
    evaluate_with(dataset, query, services, EvalOptions::default())
}

pub fn evaluate_with(
    dataset: &Dataset,
    query: &Query,
    services: &dyn ServiceClient,
    options: EvalOptions,
) -> Result<SolutionTable, QueryError> {
    if dataset.graph_names().next().is_none() {
        return evaluate_graph(dataset.default_graph(), query, services, options);
    }
    evaluate_graph(&dataset.union_graph(), query, services, options)
}

pub fn evaluate_graph(
    graph: &Graph,
    query: &Query,
    services: &dyn ServiceClient,
    options: EvalOptions,
) -> Result<SolutionTable, QueryError> {
    let cx = Context { graph, services, options };
    let vars = query.output_vars();
    let sols = cx.query(query)?;
    let rows = sols.into_iter().map(|s| vars.iter().map(|v| s.get(v).cloned()).collect()).collect();
    Ok(SolutionTable { vars, rows })
}

struct Context<'a> {
    graph: &'a Graph,
    services: &'a dyn ServiceClient,
    options: EvalOptions,
}

fn compatible(a: &Solution, b: &Solution) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|(k, v)| large.get(k).is_none_or(|w| w == v))
}

fn join(left: Vec<Solution>, right: &[Solution]) -> Vec<Solution> {
    let mut out = Vec::new();
    for l in &left {
        for r in right {
            if compatible(l, r) {
                let mut m = l.clone();
                m.extend(r.iter().map(|(k, v)| (k.clone(), v.clone())));
                out.push(m);
            }
        }
    }
    out
}

impl Context<'_> {
    /// Solutions of a query restricted to its projected variables, in
    /// result order.
    fn query(&self, q: &Query) -> Result<Vec<Solution>, QueryError> {
        let sols = self.group(&q.pattern)?;
        let mut extended: Vec<Solution> = if q.is_aggregate() {
            // No GROUP BY: the whole table is one group; an empty table
            // gives no row.
            if sols.is_empty() {
                Vec::new()
            } else {
                let mut row = Solution::new();
                if let Projection::Items(items) = &q.projection {
                    for item in items {
                        if let SelectItem::Expr { expr, alias } = item {
                            if let Some(v) = eval(expr, &row, Some(&sols)) {
                                row.insert(alias.clone(), v);
                            }
                        }
                    }
                }
                vec![row]
            }
        } else {
            let mut sols = sols;
            if let Projection::Items(items) = &q.projection {
                for sol in &mut sols {
                    for item in items {
                        if let SelectItem::Expr { expr, alias } = item {
                            if let Some(v) = eval(expr, sol, None) {
                                sol.insert(alias.clone(), v);
                            }
                        }
                    }
                }
            }
            sols
        };
        if !q.order_by.is_empty() {
            let mut keyed: Vec<(Vec<Option<Term>>, Solution)> = extended
                .into_iter()
                .map(|s| (q.order_by.iter().map(|k| eval(&k.expr, &s, None)).collect(), s))
                .collect();
            keyed.sort_by(|(a, _), (b, _)| {
                for (k, (x, y)) in q.order_by.iter().zip(a.iter().zip(b)) {
                    let o = order_cmp(x.as_ref(), y.as_ref());
                    let o = if k.descending { o.reverse() } else { o };
                    if o.is_ne() {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            });
            extended = keyed.into_iter().map(|(_, s)| s).collect();
        }
        let vars = q.output_vars();
        let mut out: Vec<Solution> =
            extended.into_iter().map(|s| s.into_iter().filter(|(k, _)| vars.contains(k)).collect()).collect();
        if q.distinct {
            let mut seen = BTreeSet::new();
            out.retain(|s| seen.insert(s.clone()));
        }
        if let Some(n) = q.limit {
            out.truncate(n);
        }
        Ok(out)
    }

    fn group(&self, g: &GroupPattern) -> Result<Vec<Solution>, QueryError> {
        let mut sols = vec![Solution::new()];
        let mut filters = Vec::new();
        for e in &g.elements {
            match e {
                Element::Bgp(tps) => {
                    let refs: Vec<&TriplePattern> = tps.iter().collect();
                    let mut out = Vec::new();
                    for s in &sols {
                        self.bgp(s, &refs, &mut out);
                    }
                    sols = out;
                }
                Element::Filter(f) => filters.push(f),
                Element::Group(inner) => sols = join(sols, &self.group(inner)?),
                Element::Union(branches) => {
                    let mut all = Vec::new();
                    for b in branches {
                        all.extend(self.group(b)?);
                    }
                    sols = join(sols, &all);
                }
                Element::SubSelect(q) => sols = join(sols, &self.query(q)?),
                Element::Service { endpoint, silent, pattern } => {
                    let remote = self.service(endpoint, *silent, pattern)?;
                    sols = join(sols, &remote);
                }
            }
            if sols.is_empty() {
                break;
            }
        }
        sols.retain(|s| filters.iter().all(|f| holds(f, s)));
        Ok(sols)
    }

    fn service(&self, endpoint: &str, silent: bool, pattern: &GroupPattern) -> Result<Vec<Solution>, QueryError> {
        let text = format!("SELECT * WHERE {pattern}");
        match self.services.query(endpoint, &text) {
            Ok(table) => Ok(table
                .rows
                .into_iter()
                .map(|row| table.vars.iter().zip(row).filter_map(|(v, t)| t.map(|t| (v.clone(), t))).collect())
                .collect()),
            Err(_) if silent => Ok(vec![Solution::new()]),
            Err(_) if self.options.lenient_services => Ok(Vec::new()),
            Err(message) => Err(QueryError::Service { endpoint: endpoint.into(), message }),
        }
    }

    /// Extends `sol` by every match of `patterns`, taking the most bound
    /// pattern next.
    fn bgp(&self, sol: &Solution, patterns: &[&TriplePattern], out: &mut Vec<Solution>) {
        if patterns.is_empty() {
            out.push(sol.clone());
            return;
        }
        let (best, _) = patterns
            .iter()
            .enumerate()
            .max_by_key(|(i, tp)| (boundness(tp, sol), std::cmp::Reverse(*i)))
            .expect("non-empty");
        let tp = patterns[best];
        let rest: Vec<&TriplePattern> =
            patterns.iter().enumerate().filter(|(i, _)| *i != best).map(|(_, tp)| *tp).collect();
        for next in self.match_pattern(tp, sol) {
            self.bgp(&next, &rest, out);
        }
    }

    fn match_pattern(&self, tp: &TriplePattern, sol: &Solution) -> Vec<Solution> {
        let s = resolve(&tp.subject, sol);
        let o = resolve(&tp.object, sol);
        let mut out = Vec::new();
        match &tp.verb {
            Verb::Path(PathExpr::Predicate(p)) => {
                let p = Term::iri(p);
                for t in self.graph.matching(s.as_ref(), Some(&p), o.as_ref()) {
                    let mut m = sol.clone();
                    if bind(&mut m, &tp.subject, t.subject) && bind(&mut m, &tp.object, t.object) {
                        out.push(m);
                    }
                }
            }
            Verb::Path(path) => {
                for (x, y) in pairs(self.graph, path, s.as_ref(), o.as_ref()) {
                    let mut m = sol.clone();
                    if bind(&mut m, &tp.subject, x) && bind(&mut m, &tp.object, y) {
                        out.push(m);
                    }
                }
            }
            Verb::Var(v) => {
                let p = sol.get(v).cloned();
                if p.as_ref().is_some_and(|p| !p.is_iri()) {
                    return out;
                }
                for t in self.graph.matching(s.as_ref(), p.as_ref(), o.as_ref()) {
                    let mut m = sol.clone();
                    if bind(&mut m, &tp.subject, t.subject)
                        && bind(&mut m, &TermPattern::Var(v.clone()), t.predicate)
                        && bind(&mut m, &tp.object, t.object)
                    {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

fn resolve(p: &TermPattern, sol: &Solution) -> Option<Term> {
    match p {
        TermPattern::Term(t) => Some(t.clone()),
        TermPattern::Var(v) => sol.get(v).cloned(),
    }
}

/// Binds a variable position, failing on a conflicting earlier binding
/// (the same variable used twice in one pattern).
fn bind(sol: &mut Solution, p: &TermPattern, value: Term) -> bool {
    match p {
        TermPattern::Term(t) => *t == value,
        TermPattern::Var(v) => match sol.get(v) {
            Some(existing) => *existing == value,
            None => {
                sol.insert(v.clone(), value);
                true
            }
        },
    }
}

fn boundness(tp: &TriplePattern, sol: &Solution) -> u8 {
    let pos = |p: &TermPattern| match p {
        TermPattern::Term(_) => 1,
        TermPattern::Var(v) => sol.contains_key(v) as u8,
    };
    let verb = match &tp.verb {
        Verb::Path(PathExpr::Predicate(_)) => 1,
        Verb::Path(_) => 0,
        Verb::Var(v) => sol.contains_key(v) as u8,
    };
    // Subject and object bindings narrow more than the predicate does.
    2 * pos(&tp.subject) + 2 * pos(&tp.object) + verb
}
