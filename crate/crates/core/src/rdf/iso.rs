//! Graph isomorphism under blank-node renaming.
//!
//! Ground triples must match exactly. Blank nodes are partitioned by
//! iterated neighbourhood hashing and a bijection is then searched by
//! backtracking inside each partition class.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::graph::Graph;
use super::term::{Term, Triple};

/// True when `b` equals `a` up to a bijective renaming of blank nodes.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_bijection(a, b).is_some()
}

/// A blank-node bijection mapping `a` onto `b`, if one exists.
pub fn find_bijection(a: &Graph, b: &Graph) -> Option<BTreeMap<Term, Term>> {
    if a.len() != b.len() {
        return None;
    }
    let ground = |t: &Triple| !t.subject.is_blank() && !t.object.is_blank();
    let ga: HashSet<Triple> = a.iter().filter(ground).collect();
    let gb: HashSet<Triple> = b.iter().filter(ground).collect();
    if ga != gb {
        return None;
    }
    let ba: Vec<Term> = a.blank_nodes().into_iter().collect();
    let bb: Vec<Term> = b.blank_nodes().into_iter().collect();
    if ba.len() != bb.len() {
        return None;
    }
    let ca = colour(a, &ba);
    let cb = colour(b, &bb);
    let mut hist_a: HashMap<u64, usize> = HashMap::new();
    let mut hist_b: HashMap<u64, usize> = HashMap::new();
    for c in ca.values() {
        *hist_a.entry(*c).or_default() += 1;
    }
    for c in cb.values() {
        *hist_b.entry(*c).or_default() += 1;
    }
    if hist_a != hist_b {
        return None;
    }
    // Smallest classes first: they fix the most structure per choice.
    let mut order = ba.clone();
    order.sort_by_key(|n| (hist_a[&ca[n]], ca[n]));
    let non_ground: Vec<Triple> = a.iter().filter(|t| !ground(t)).collect();
    let mut mapping = HashMap::new();
    let mut used = HashSet::new();
    if search(&order, 0, &ca, &cb, &bb, &non_ground, b, &mut mapping, &mut used) {
        Some(mapping.into_iter().collect())
    } else {
        None
    }
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

fn colour(g: &Graph, blanks: &[Term]) -> HashMap<Term, u64> {
    let mut colours: HashMap<Term, u64> = blanks.iter().map(|b| (b.clone(), 0)).collect();
    let classes = |c: &HashMap<Term, u64>| c.values().collect::<HashSet<_>>().len();
    let mut n_classes = 0;
    for _ in 0..=blanks.len() {
        let mut next = HashMap::new();
        for b in blanks {
            let mut sig: Vec<(u8, String, u64)> = Vec::new();
            for t in g.matching(Some(b), None, None) {
                let other = match &t.object {
                    Term::BlankNode(_) => colours[&t.object],
                    o => hash_of(o),
                };
                sig.push((0, t.predicate.value().to_string(), other));
            }
            for t in g.matching(None, None, Some(b)) {
                let other = match &t.subject {
                    Term::BlankNode(_) => colours[&t.subject],
                    s => hash_of(s),
                };
                sig.push((1, t.predicate.value().to_string(), other));
            }
            sig.sort();
            next.insert(b.clone(), hash_of(&(colours[b], sig)));
        }
        colours = next;
        let n = classes(&colours);
        if n == n_classes {
            break;
        }
        n_classes = n;
    }
    colours
}

#[allow(clippy::too_many_arguments)]
fn search(
    order: &[Term],
    i: usize,
    ca: &HashMap<Term, u64>,
    cb: &HashMap<Term, u64>,
    targets: &[Term],
    triples: &[Triple],
    b: &Graph,
    mapping: &mut HashMap<Term, Term>,
    used: &mut HashSet<Term>,
) -> bool {
    if i == order.len() {
        return triples.iter().all(|t| b.contains(&image(t, mapping).unwrap()));
    }
    let node = &order[i];
    for cand in targets {
        if used.contains(cand) || cb[cand] != ca[node] {
            continue;
        }
        mapping.insert(node.clone(), cand.clone());
        used.insert(cand.clone());
        let consistent = triples
            .iter()
            .filter(|t| &t.subject == node || &t.object == node)
            .all(|t| image(t, mapping).is_none_or(|img| b.contains(&img)));
        if consistent && search(order, i + 1, ca, cb, targets, triples, b, mapping, used) {
            return true;
        }
        mapping.remove(node);
        used.remove(cand);
    }
    false
}

/// The triple's image when all its blank nodes are mapped.
fn image(t: &Triple, mapping: &HashMap<Term, Term>) -> Option<Triple> {
    let map = |x: &Term| -> Option<Term> {
        if x.is_blank() {
            mapping.get(x).cloned()
        } else {
            Some(x.clone())
        }
    };
    Some(Triple { subject: map(&t.subject)?, predicate: t.predicate.clone(), object: map(&t.object)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::turtle::parse_turtle;

    fn g(src: &str) -> Graph {
        parse_turtle(src, None).unwrap()
    }

    #[test]
    fn renamed_blank_nodes_are_isomorphic() {
        let a = g("_:x <http://p> _:y . _:y <http://q> <http://o> .");
        let b = g("_:m <http://q> <http://o> . _:n <http://p> _:m .");
        assert!(is_isomorphic(&a, &b));
    }

    #[test]
    fn structure_differences_are_detected() {
        let a = g("_:x <http://p> _:y . _:y <http://p> _:x .");
        let b = g("_:x <http://p> _:x . _:y <http://p> _:y .");
        assert!(!is_isomorphic(&a, &b));
        let c = g("<http://a> <http://p> \"1\" .");
        let d = g("<http://a> <http://p> \"2\" .");
        assert!(!is_isomorphic(&c, &d));
    }

    #[test]
    fn symmetric_blank_nodes_need_backtracking() {
        // Two identical 3-cycles and a 6-cycle share local colours.
        let a = g("_:a <http://p> _:b . _:b <http://p> _:c . _:c <http://p> _:a .
                   _:d <http://p> _:e . _:e <http://p> _:f . _:f <http://p> _:d .");
        let b = g("_:a <http://p> _:b . _:b <http://p> _:c . _:c <http://p> _:d .
                   _:d <http://p> _:e . _:e <http://p> _:f . _:f <http://p> _:a .");
        assert!(!is_isomorphic(&a, &b));
        assert!(is_isomorphic(&a, &a.clone()));
    }
}
