use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::geo;
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Literal, Term};
use crate::validate::lexical_valid;

use super::ast::{AggregateFn, ArithOp, CompareOp, Expr, Function};

pub(crate) type Solution = BTreeMap<String, Term>;

/// A numeric value with the XSD type it carries. Decimals are held as
/// floats; integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Num {
    Integer(i128),
    Decimal(f64),
    Float(f64),
    Double(f64),
}

impl Num {
    fn rank(self) -> u8 {
        match self {
            Num::Integer(_) => 0,
            Num::Decimal(_) => 1,
            Num::Float(_) => 2,
            Num::Double(_) => 3,
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Num::Integer(i) => i as f64,
            Num::Decimal(f) | Num::Float(f) | Num::Double(f) => f,
        }
    }

    fn with_rank(rank: u8, v: f64) -> Num {
        match rank {
            1 => Num::Decimal(v),
            2 => Num::Float(v),
            _ => Num::Double(v),
        }
    }

    pub(crate) fn to_term(self) -> Term {
        match self {
            Num::Integer(i) => Term::typed(i.to_string(), xsd::INTEGER),
            Num::Decimal(f) => {
                let mut s = format_float(f);
                if f.is_finite() && !s.contains('.') {
                    s.push_str(".0");
                }
                Term::typed(s, xsd::DECIMAL)
            }
            Num::Float(f) => Term::typed(format_float(f), xsd::FLOAT),
            Num::Double(f) => Term::typed(format_float(f), xsd::DOUBLE),
        }
    }
}

fn format_float(f: f64) -> String {
    if f.is_nan() {
        "NaN".into()
    } else if f.is_infinite() {
        if f > 0.0 { "INF" } else { "-INF" }.into()
    } else {
        format!("{f}")
    }
}

fn is_integer_dt(dt: &str) -> bool {
    matches!(
        dt.strip_prefix(xsd::NS),
        Some(
            "integer"
                | "int"
                | "long"
                | "short"
                | "byte"
                | "nonNegativeInteger"
                | "positiveInteger"
                | "nonPositiveInteger"
                | "negativeInteger"
                | "unsignedLong"
                | "unsignedInt"
                | "unsignedShort"
                | "unsignedByte"
        )
    )
}

fn parse_float(lex: &str) -> Option<f64> {
    match lex {
        "INF" | "+INF" => Some(f64::INFINITY),
        "-INF" => Some(f64::NEG_INFINITY),
        "NaN" => Some(f64::NAN),
        _ => lex.parse().ok(),
    }
}

/// Numeric value of a typed numeric literal with a valid lexical form.
pub(crate) fn numeric(t: &Term) -> Option<Num> {
    let lit = t.as_literal()?;
    let (lex, dt) = (lit.lexical(), lit.datatype());
    if !lexical_valid(lex, dt) {
        return None;
    }
    if is_integer_dt(dt) {
        return lex.parse().ok().map(Num::Integer);
    }
    match dt {
        xsd::DECIMAL => lex.parse().ok().map(Num::Decimal),
        xsd::FLOAT => parse_float(lex).map(Num::Float),
        xsd::DOUBLE => parse_float(lex).map(Num::Double),
        _ => None,
    }
}

fn boolean(b: bool) -> Term {
    Term::typed(if b { "true" } else { "false" }, xsd::BOOLEAN)
}

fn string_like(t: &Term) -> Option<&Literal> {
    t.as_literal().filter(|l| l.is_string_like())
}

/// Effective boolean value; `None` is a type error.
pub(crate) fn ebv(t: &Term) -> Option<bool> {
    let lit = t.as_literal()?;
    if lit.datatype() == xsd::BOOLEAN {
        return match lit.lexical() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        };
    }
    if let Some(n) = numeric(t) {
        return Some(match n {
            Num::Integer(i) => i != 0,
            other => {
                let f = other.as_f64();
                f != 0.0 && !f.is_nan()
            }
        });
    }
    if lit.is_string_like() && lit.language().is_none() {
        return Some(!lit.lexical().is_empty());
    }
    None
}

fn arith(op: ArithOp, a: Num, b: Num) -> Option<Num> {
    if let (Num::Integer(x), Num::Integer(y)) = (a, b) {
        return match op {
            ArithOp::Add => x.checked_add(y).map(Num::Integer),
            ArithOp::Sub => x.checked_sub(y).map(Num::Integer),
            ArithOp::Mul => x.checked_mul(y).map(Num::Integer),
            ArithOp::Div => (y != 0).then(|| Num::Decimal(x as f64 / y as f64)),
        };
    }
    let rank = a.rank().max(b.rank());
    let (x, y) = (a.as_f64(), b.as_f64());
    if rank == 1 && op == ArithOp::Div && y == 0.0 {
        return None;
    }
    let v = match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x / y,
    };
    Some(Num::with_rank(rank, v))
}

fn num_cmp(a: Num, b: Num) -> Option<Ordering> {
    match (a, b) {
        (Num::Integer(x), Num::Integer(y)) => Some(x.cmp(&y)),
        _ => a.as_f64().partial_cmp(&b.as_f64()),
    }
}

/// Value comparison; `None` when the operands are not comparable.
fn value_cmp(a: &Term, b: &Term) -> Option<Ordering> {
    if let (Some(x), Some(y)) = (numeric(a), numeric(b)) {
        return num_cmp(x, y);
    }
    let (la, lb) = (a.as_literal()?, b.as_literal()?);
    let same_kind = la.datatype() == lb.datatype() && la.language() == lb.language();
    if !same_kind {
        return None;
    }
    match la.datatype() {
        xsd::BOOLEAN => Some(ebv(a)?.cmp(&ebv(b)?)),
        xsd::STRING | rdf::LANG_STRING | xsd::DATE_TIME => Some(la.lexical().cmp(lb.lexical())),
        _ => None,
    }
}

fn compare(op: CompareOp, a: &Term, b: &Term) -> Option<bool> {
    match op {
        CompareOp::Eq | CompareOp::Ne => {
            let eq = match value_cmp(a, b) {
                Some(o) => o == Ordering::Equal,
                None if a == b => true,
                // Distinct IRIs, blank nodes or literals of unrelated kinds.
                None if !a.is_literal() || !b.is_literal() => false,
                None if numeric(a).is_some() != numeric(b).is_some() => return None,
                None => false,
            };
            Some(if op == CompareOp::Eq { eq } else { !eq })
        }
        _ => {
            let o = value_cmp(a, b)?;
            Some(match op {
                CompareOp::Lt => o == Ordering::Less,
                CompareOp::Le => o != Ordering::Greater,
                CompareOp::Gt => o == Ordering::Greater,
                CompareOp::Ge => o != Ordering::Less,
                CompareOp::Eq | CompareOp::Ne => unreachable!(),
            })
        }
    }
}

fn cast(dt: &'static str, t: &Term) -> Option<Term> {
    if dt == xsd::STRING {
        return match t {
            Term::Iri(i) => Some(Term::literal(i.clone())),
            Term::Literal(l) => Some(Term::literal(l.lexical())),
            Term::BlankNode(_) => None,
        };
    }
    let lit = t.as_literal()?;
    let from_num = numeric(t);
    let from_bool = (lit.datatype() == xsd::BOOLEAN).then(|| ebv(t)).flatten();
    let text = lit.is_string_like().then(|| lit.lexical().trim());
    match dt {
        xsd::BOOLEAN => {
            let b = match (from_num, from_bool, text) {
                (Some(n), _, _) => ebv(&n.to_term())?,
                (_, Some(b), _) => b,
                (_, _, Some("true" | "1")) => true,
                (_, _, Some("false" | "0")) => false,
                _ => return None,
            };
            Some(boolean(b))
        }
        xsd::INTEGER => {
            let n = match (from_num, from_bool, text) {
                (Some(Num::Integer(i)), _, _) => i,
                (Some(n), _, _) => {
                    let f = n.as_f64().trunc();
                    if !f.is_finite() || f.abs() > 1e38 {
                        return None;
                    }
                    f as i128
                }
                (_, Some(b), _) => b as i128,
                (_, _, Some(s)) if lexical_valid(s, xsd::INTEGER) => s.parse().ok()?,
                _ => return None,
            };
            Some(Term::typed(n.to_string(), xsd::INTEGER))
        }
        xsd::DECIMAL | xsd::FLOAT | xsd::DOUBLE => {
            let v = match (from_num, from_bool, text) {
                (Some(n), _, _) => n.as_f64(),
                (_, Some(b), _) => b as u8 as f64,
                (_, _, Some(s)) if lexical_valid(s, dt) => parse_float(s)?,
                _ => return None,
            };
            if dt == xsd::DECIMAL && !v.is_finite() {
                return None;
            }
            let rank = match dt {
                xsd::DECIMAL => 1,
                xsd::FLOAT => 2,
                _ => 3,
            };
            Some(Num::with_rank(rank, v).to_term())
        }
        _ => None,
    }
}

/// Applies a builtin to evaluated arguments. `None` signals a type error,
/// which a filter treats as false.
pub fn builtin_call(func: Function, args: &[Term]) -> Option<Term> {
    match (func, args) {
        (Function::Cast(dt), [a]) => cast(dt, a),
        (Function::SfIntersects, [a, b]) => {
            let ga = geo::parse_wkt(a.as_literal()?.lexical()).ok()?;
            let gb = geo::parse_wkt(b.as_literal()?.lexical()).ok()?;
            Some(boolean(geo::sf_intersects(&ga, &gb)))
        }
        (Function::TextContains, [a, b]) => {
            let (a, b) = (a.as_literal()?, b.as_literal()?);
            Some(boolean(a.lexical().contains(b.lexical())))
        }
        (Function::Contains, [a, b]) => {
            let (a, b) = (string_like(a)?, string_like(b)?);
            if b.language().is_some() && b.language() != a.language() {
                return None;
            }
            Some(boolean(a.lexical().contains(b.lexical())))
        }
        (Function::Str, [a]) => match a {
            Term::BlankNode(_) => None,
            other => Some(Term::literal(other.value())),
        },
        _ => None,
    }
}

/// Evaluates `e` under `sol`. Aggregates are computed over `group`; outside
/// an aggregate query they are an error.
pub(crate) fn eval(e: &Expr, sol: &Solution, group: Option<&[Solution]>) -> Option<Term> {
    match e {
        Expr::Var(v) => sol.get(v).cloned(),
        Expr::Const(t) => Some(t.clone()),
        Expr::Or(a, b) => {
            let x = eval(a, sol, group).and_then(|t| ebv(&t));
            let y = eval(b, sol, group).and_then(|t| ebv(&t));
            match (x, y) {
                (Some(true), _) | (_, Some(true)) => Some(boolean(true)),
                (Some(false), Some(false)) => Some(boolean(false)),
                _ => None,
            }
        }
        Expr::And(a, b) => {
            let x = eval(a, sol, group).and_then(|t| ebv(&t));
            let y = eval(b, sol, group).and_then(|t| ebv(&t));
            match (x, y) {
                (Some(false), _) | (_, Some(false)) => Some(boolean(false)),
                (Some(true), Some(true)) => Some(boolean(true)),
                _ => None,
            }
        }
        Expr::Not(a) => Some(boolean(!ebv(&eval(a, sol, group)?)?)),
        Expr::Neg(a) => {
            let n = numeric(&eval(a, sol, group)?)?;
            arith(ArithOp::Sub, Num::Integer(0), n).map(Num::to_term)
        }
        Expr::Compare(op, a, b) => {
            let (x, y) = (eval(a, sol, group)?, eval(b, sol, group)?);
            compare(*op, &x, &y).map(boolean)
        }
        Expr::Arith(op, a, b) => {
            let x = numeric(&eval(a, sol, group)?)?;
            let y = numeric(&eval(b, sol, group)?)?;
            arith(*op, x, y).map(Num::to_term)
        }
        Expr::Call(Function::Bound, args) => match args.first() {
            Some(Expr::Var(v)) => Some(boolean(sol.contains_key(v))),
            _ => None,
        },
        Expr::Call(func, args) => {
            let vals: Option<Vec<Term>> = args.iter().map(|a| eval(a, sol, group)).collect();
            builtin_call(*func, &vals?)
        }
        Expr::Aggregate { func, distinct, arg } => aggregate(*func, *distinct, arg.as_deref(), group?),
    }
}

/// Filter semantics: errors and non-boolean values count as false.
pub(crate) fn holds(e: &Expr, sol: &Solution) -> bool {
    eval(e, sol, None).and_then(|t| ebv(&t)).unwrap_or(false)
}

fn aggregate(func: AggregateFn, distinct: bool, arg: Option<&Expr>, group: &[Solution]) -> Option<Term> {
    let Some(arg) = arg else {
        let n = if distinct { group.iter().collect::<BTreeSet<_>>().len() } else { group.len() };
        return Some(Term::typed(n.to_string(), xsd::INTEGER));
    };
    let mut values: Vec<Term> = Vec::new();
    let mut seen = BTreeSet::new();
    for sol in group {
        match eval(arg, sol, None) {
            Some(v) => {
                if !distinct || seen.insert(v.clone()) {
                    values.push(v);
                }
            }
            // COUNT skips errors; the numeric aggregates fail on them.
            None if func == AggregateFn::Count => {}
            None => return None,
        }
    }
    match func {
        AggregateFn::Count => Some(Term::typed(values.len().to_string(), xsd::INTEGER)),
        AggregateFn::Sum | AggregateFn::Avg => {
            let mut total = Num::Integer(0);
            for v in &values {
                total = arith(ArithOp::Add, total, numeric(v)?)?;
            }
            if func == AggregateFn::Sum {
                return Some(total.to_term());
            }
            if values.is_empty() {
                return Some(Term::typed("0", xsd::INTEGER));
            }
            let avg = match total {
                Num::Integer(_) => arith(ArithOp::Div, total, Num::Integer(values.len() as i128))?,
                other => Num::with_rank(other.rank(), other.as_f64() / values.len() as f64),
            };
            Some(avg.to_term())
        }
        AggregateFn::Min | AggregateFn::Max => {
            let mut best: Option<Term> = None;
            for v in values {
                best = Some(match best {
                    None => v,
                    Some(b) => {
                        let o = order_cmp(Some(&v), Some(&b));
                        let better =
                            if func == AggregateFn::Min { o == Ordering::Less } else { o == Ordering::Greater };
                        if better {
                            v
                        } else {
                            b
                        }
                    }
                });
            }
            best
        }
    }
}

/// ORDER BY ordering: unbound, blank nodes, IRIs, then literals; literals
/// compare by value where comparable and otherwise by term order.
pub(crate) fn order_cmp(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    fn class(t: Option<&Term>) -> u8 {
        match t {
            None => 0,
            Some(Term::BlankNode(_)) => 1,
            Some(Term::Iri(_)) => 2,
            Some(Term::Literal(_)) => 3,
        }
    }
    match (a, b) {
        (Some(x), Some(y)) if x.is_literal() && y.is_literal() => match value_cmp(x, y) {
            Some(Ordering::Equal) | None => x.cmp(y),
            Some(o) => o,
        },
        (Some(x), Some(y)) if class(a) == class(b) => x.cmp(y),
        _ => class(a).cmp(&class(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casts_parse_lexical_forms() {
        let a = builtin_call(Function::Cast(xsd::INTEGER), &[Term::literal("30")]).unwrap();
        assert_eq!(a, Term::typed("30", xsd::INTEGER));
        assert!(builtin_call(Function::Cast(xsd::FLOAT), &[Term::literal("abc")]).is_none());
        assert!(builtin_call(Function::Cast(xsd::INTEGER), &[Term::iri("http://x")]).is_none());
    }

    #[test]
    fn numeric_promotion() {
        let i = Term::typed("2", xsd::INTEGER);
        let f = Term::typed("2.0", xsd::FLOAT);
        assert_eq!(compare(CompareOp::Eq, &i, &f), Some(true));
        assert_eq!(compare(CompareOp::Lt, &i, &Term::literal("3")), None);
        assert_eq!(Num::Decimal(4.0).to_term(), Term::typed("4.0", xsd::DECIMAL));
        assert_eq!(Num::Float(4.3).to_term(), Term::typed("4.3", xsd::FLOAT));
    }
}
