use glosis_core::geo::{bbox, sf_intersects, Coord, Geometry};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Winding number of `ring` around `p`; non-zero means inside for simple rings.
fn winding_number(ring: &[Coord], p: Coord) -> i32 {
    let mut wn = 0;
    for e in ring.windows(2) {
        let (a, b) = (e[0], e[1]);
        let side = (b.lon - a.lon) * (p.lat - a.lat) - (p.lon - a.lon) * (b.lat - a.lat);
        if a.lat <= p.lat {
            if b.lat > p.lat && side > 0.0 {
                wn += 1;
            }
        } else if b.lat <= p.lat && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// A simple (star-shaped) polygon: vertices at sorted angles around a centre.
fn star_polygon(rng: &mut ChaCha8Rng) -> Vec<Coord> {
    let n = rng.gen_range(3..12);
    let (cx, cy) = (rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let mut ring: Vec<Coord> = angles
        .iter()
        .map(|a| {
            let r = rng.gen_range(1.0..20.0);
            Coord::new(cx + r * a.cos(), cy + r * a.sin())
        })
        .collect();
    ring.push(ring[0]);
    ring
}

#[test]
fn point_in_polygon_agrees_with_winding_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 10_000 {
        let ring = star_polygon(&mut rng);
        let poly = Geometry::Polygon { outer: ring.clone(), inner: vec![] };
        let b = bbox(&poly);
        for _ in 0..100 {
            let p = Coord::new(
                rng.gen_range(b.min_lon - 5.0..b.max_lon + 5.0),
                rng.gen_range(b.min_lat - 5.0..b.max_lat + 5.0),
            );
            let expected = winding_number(&ring, p) != 0;
            assert_eq!(sf_intersects(&Geometry::Point(p), &poly), expected, "{p:?} vs {poly}");
            checked += 1;
        }
    }
}

fn coord() -> impl Strategy<Value = Coord> {
    (-100.0..100.0f64, -80.0..80.0f64).prop_map(|(x, y)| Coord::new(x, y))
}

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![
        coord().prop_map(Geometry::Point),
        (coord(), 0.1..30.0f64, 0.1..30.0f64).prop_map(|(c, w, h)| Geometry::rectangle(
            c.lon,
            c.lat,
            c.lon + w,
            c.lat + h
        )),
        (any::<u64>()).prop_map(|seed| {
            let ring = star_polygon(&mut ChaCha8Rng::seed_from_u64(seed));
            Geometry::Polygon { outer: ring, inner: vec![] }
        }),
    ]
}

proptest! {
    #[test]
    fn intersects_is_symmetric(a in geometry(), b in geometry()) {
        prop_assert_eq!(sf_intersects(&a, &b), sf_intersects(&b, &a));
    }

    #[test]
    fn disjoint_boxes_never_intersect(a in geometry(), b in geometry()) {
        let (ba, bb) = (bbox(&a), bbox(&b));
        let disjoint = ba.max_lon < bb.min_lon - 1e-6 || bb.max_lon < ba.min_lon - 1e-6
            || ba.max_lat < bb.min_lat - 1e-6 || bb.max_lat < ba.min_lat - 1e-6;
        if disjoint {
            prop_assert!(!sf_intersects(&a, &b));
        }
    }

    #[test]
    fn vertices_touch_their_polygon(g in geometry()) {
        for v in g.vertices() {
            prop_assert!(sf_intersects(&Geometry::Point(v), &g));
        }
    }

    #[test]
    fn bbox_contains_every_vertex(g in geometry()) {
        let b = bbox(&g);
        prop_assert!(b.min_lon <= b.max_lon && b.min_lat <= b.max_lat);
        for v in g.vertices() {
            prop_assert!(b.contains(v));
        }
    }
}
