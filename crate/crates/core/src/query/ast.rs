use std::fmt;

use crate::rdf::Term;

/// A SELECT query. Prefixed names are already expanded.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub distinct: bool,
    pub projection: Projection,
    pub pattern: GroupPattern,
    pub order_by: Vec<OrderKey>,
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// `SELECT *`: every in-scope variable, in first-appearance order.
    All,
    Items(Vec<SelectItem>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SelectItem {
    Var(String),
    Expr { expr: Expr, alias: String },
}

impl SelectItem {
    pub fn name(&self) -> &str {
        match self {
            SelectItem::Var(v) => v,
            SelectItem::Expr { alias, .. } => alias,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderKey {
    pub expr: Expr,
    pub descending: bool,
}

/// Elements of a `{ ... }` group, joined in order; filters apply to the
/// whole group.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupPattern {
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Bgp(Vec<TriplePattern>),
    Filter(Expr),
    Group(GroupPattern),
    /// Two or more branches whose solutions are concatenated.
    Union(Vec<GroupPattern>),
    SubSelect(Box<Query>),
    Service {
        endpoint: String,
        silent: bool,
        pattern: GroupPattern,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermPattern {
    Var(String),
    Term(Term),
}

impl TermPattern {
    pub fn var(&self) -> Option<&str> {
        match self {
            TermPattern::Var(v) => Some(v),
            TermPattern::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verb {
    Var(String),
    Path(PathExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub verb: Verb,
    pub object: TermPattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Predicate(String),
    Inverse(Box<PathExpr>),
    Sequence(Vec<PathExpr>),
    Alternative(Vec<PathExpr>),
    ZeroOrMore(Box<PathExpr>),
    OneOrMore(Box<PathExpr>),
    ZeroOrOne(Box<PathExpr>),
}

impl PathExpr {
    pub fn inverse(&self) -> PathExpr {
        match self {
            PathExpr::Predicate(_) => PathExpr::Inverse(Box::new(self.clone())),
            PathExpr::Inverse(p) => (**p).clone(),
            PathExpr::Sequence(ps) => PathExpr::Sequence(ps.iter().rev().map(PathExpr::inverse).collect()),
            PathExpr::Alternative(ps) => PathExpr::Alternative(ps.iter().map(PathExpr::inverse).collect()),
            PathExpr::ZeroOrMore(p) => PathExpr::ZeroOrMore(Box::new(p.inverse())),
            PathExpr::OneOrMore(p) => PathExpr::OneOrMore(Box::new(p.inverse())),
            PathExpr::ZeroOrOne(p) => PathExpr::ZeroOrOne(Box::new(p.inverse())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    /// Cast to the given XSD datatype IRI.
    Cast(&'static str),
    SfIntersects,
    /// Case-sensitive substring match on lexical forms.
    TextContains,
    Str,
    Contains,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AggregateFn {
    Count,
    Sum,
    Avg,
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(String),
    Const(Term),
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Compare(CompareOp, Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Call(Function, Vec<Expr>),
    /// `arg` is `None` for `COUNT(*)`.
    Aggregate {
        func: AggregateFn,
        distinct: bool,
        arg: Option<Box<Expr>>,
    },
}

impl Expr {
    pub fn has_aggregate(&self) -> bool {
        match self {
            Expr::Aggregate { .. } => true,
            Expr::Var(_) | Expr::Const(_) => false,
            Expr::Not(e) | Expr::Neg(e) => e.has_aggregate(),
            Expr::Or(a, b) | Expr::And(a, b) | Expr::Compare(_, a, b) | Expr::Arith(_, a, b) => {
                a.has_aggregate() || b.has_aggregate()
            }
            Expr::Call(_, args) => args.iter().any(Expr::has_aggregate),
        }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => out.push(v.clone()),
            Expr::Const(_) => {}
            Expr::Not(e) | Expr::Neg(e) => e.vars(out),
            Expr::Or(a, b) | Expr::And(a, b) | Expr::Compare(_, a, b) | Expr::Arith(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.vars(out)),
            Expr::Aggregate { arg, .. } => {
                if let Some(a) = arg {
                    a.vars(out)
                }
            }
        }
    }
}

impl GroupPattern {
    /// Variables that can be bound by solutions of this group, in
    /// first-appearance order.
    pub fn in_scope_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        let mut push = |v: &str| {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        };
        for e in &self.elements {
            match e {
                Element::Bgp(tps) => {
                    for tp in tps {
                        if let Some(v) = tp.subject.var() {
                            push(v);
                        }
                        if let Verb::Var(v) = &tp.verb {
                            push(v);
                        }
                        if let Some(v) = tp.object.var() {
                            push(v);
                        }
                    }
                }
                Element::Filter(_) => {}
                Element::Group(g) | Element::Service { pattern: g, .. } => {
                    for v in g.in_scope_vars() {
                        push(&v);
                    }
                }
                Element::Union(branches) => {
                    for b in branches {
                        for v in b.in_scope_vars() {
                            push(&v);
                        }
                    }
                }
                Element::SubSelect(q) => {
                    for v in q.output_vars() {
                        push(&v);
                    }
                }
            }
        }
    }
}

impl Query {
    /// Column names of the result table.
    pub fn output_vars(&self) -> Vec<String> {
        match &self.projection {
            Projection::All => self.pattern.in_scope_vars().into_iter().filter(|v| !v.starts_with("_:")).collect(),
            Projection::Items(items) => items.iter().map(|i| i.name().to_string()).collect(),
        }
    }

    pub fn is_aggregate(&self) -> bool {
        matches!(&self.projection, Projection::Items(items)
            if items.iter().any(|i| matches!(i, SelectItem::Expr { expr, .. } if expr.has_aggregate())))
    }
}

// SPARQL text rendering. IRIs are written in full so the output needs no
// prologue.

fn write_var(f: &mut fmt::Formatter<'_>, v: &str) -> fmt::Result {
    if v.starts_with("_:") {
        f.write_str(v)
    } else {
        write!(f, "?{v}")
    }
}

impl fmt::Display for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermPattern::Var(v) => write_var(f, v),
            TermPattern::Term(t) => write!(f, "{t}"),
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Predicate(p) => write!(f, "{}", Term::iri(p)),
            PathExpr::Inverse(p) => write!(f, "^({p})"),
            PathExpr::Sequence(ps) | PathExpr::Alternative(ps) => {
                let sep = if matches!(self, PathExpr::Sequence(_)) { "/" } else { "|" };
                f.write_str("(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            PathExpr::ZeroOrMore(p) => write!(f, "({p})*"),
            PathExpr::OneOrMore(p) => write!(f, "({p})+"),
            PathExpr::ZeroOrOne(p) => write!(f, "({p})?"),
        }
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.subject)?;
        match &self.verb {
            Verb::Var(v) => write_var(f, v)?,
            Verb::Path(p) => write!(f, "{p}")?,
        }
        write!(f, " {} .", self.object)
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Function::Cast(dt) => write!(f, "{}", Term::iri(*dt)),
            Function::SfIntersects => write!(f, "{}", Term::iri(crate::rdf::vocab::gsp::SF_INTERSECTS)),
            Function::TextContains => f.write_str("textContains"),
            Function::Str => f.write_str("STR"),
            Function::Contains => f.write_str("CONTAINS"),
            Function::Bound => f.write_str("BOUND"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write_var(f, v),
            Expr::Const(t) => write!(f, "{t}"),
            Expr::Or(a, b) => write!(f, "({a} || {b})"),
            Expr::And(a, b) => write!(f, "({a} && {b})"),
            Expr::Not(e) => write!(f, "(!{e})"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Compare(op, a, b) => {
                let op = match op {
                    CompareOp::Eq => "=",
                    CompareOp::Ne => "!=",
                    CompareOp::Lt => "<",
                    CompareOp::Le => "<=",
                    CompareOp::Gt => ">",
                    CompareOp::Ge => ">=",
                };
                write!(f, "({a} {op} {b})")
            }
            Expr::Arith(op, a, b) => {
                let op = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                    ArithOp::Mul => "*",
                    ArithOp::Div => "/",
                };
                write!(f, "({a} {op} {b})")
            }
            Expr::Call(func, args) => {
                write!(f, "{func}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Aggregate { func, distinct, arg } => {
                let name = match func {
                    AggregateFn::Count => "COUNT",
                    AggregateFn::Sum => "SUM",
                    AggregateFn::Avg => "AVG",
                    AggregateFn::Min => "MIN",
                    AggregateFn::Max => "MAX",
                };
                write!(f, "{name}(")?;
                if *distinct {
                    f.write_str("DISTINCT ")?;
                }
                match arg {
                    Some(a) => write!(f, "{a})"),
                    None => f.write_str("*)"),
                }
            }
        }
    }
}

impl fmt::Display for GroupPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{ ")?;
        for e in &self.elements {
            match e {
                Element::Bgp(tps) => {
                    for tp in tps {
                        write!(f, "{tp} ")?;
                    }
                }
                Element::Filter(x) => write!(f, "FILTER ({x}) ")?,
                Element::Group(g) => write!(f, "{g} ")?,
                Element::Union(branches) => {
                    for (i, b) in branches.iter().enumerate() {
                        if i > 0 {
                            f.write_str("UNION ")?;
                        }
                        write!(f, "{b} ")?;
                    }
                }
                Element::SubSelect(q) => write!(f, "{{ {q} }} ")?,
                Element::Service { endpoint, silent, pattern } => {
                    let silent = if *silent { "SILENT " } else { "" };
                    write!(f, "SERVICE {silent}{} {pattern} ", Term::iri(endpoint))?;
                }
            }
        }
        f.write_str("}")
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        if self.distinct {
            f.write_str("DISTINCT ")?;
        }
        match &self.projection {
            Projection::All => f.write_str("*")?,
            Projection::Items(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match item {
                        SelectItem::Var(v) => write_var(f, v)?,
                        SelectItem::Expr { expr, alias } => write!(f, "({expr} AS ?{alias})")?,
                    }
                }
            }
        }
        write!(f, " WHERE {}", self.pattern)?;
        if !self.order_by.is_empty() {
            f.write_str(" ORDER BY")?;
            for k in &self.order_by {
                let dir = if k.descending { "DESC" } else { "ASC" };
                write!(f, " {dir}({})", k.expr)?;
            }
        }
        if let Some(n) = self.limit {
            write!(f, " LIMIT {n}")?;
        }
        Ok(())
    }
}
