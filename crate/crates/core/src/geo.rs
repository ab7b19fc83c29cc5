//! WKT points and polygons with the simple-features intersects predicate.
//!
//! Coordinates are planar (lon, lat) in CRS84 axis order.

use std::fmt;

/// Distance below which two coordinates are considered the same point.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coord {
    pub lon: f64,
    pub lat: f64,
}

impl Coord {
    pub fn new(lon: f64, lat: f64) -> Self {
        Coord { lon, lat }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Coord),
    /// Outer ring then holes; every ring is closed (first == last).
    Polygon {
        outer: Vec<Coord>,
        inner: Vec<Vec<Coord>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min_lon: f64,
    pub min_lat: f64,
    pub max_lon: f64,
    pub max_lat: f64,
}

impl BBox {
    pub fn contains(&self, c: Coord) -> bool {
        c.lon >= self.min_lon && c.lon <= self.max_lon && c.lat >= self.min_lat && c.lat <= self.max_lat
    }

    /// Overlap test with the point tolerance as slack.
    pub fn intersects(&self, other: &BBox) -> bool {
        self.min_lon <= other.max_lon + TOLERANCE
            && other.min_lon <= self.max_lon + TOLERANCE
            && self.min_lat <= other.max_lat + TOLERANCE
            && other.min_lat <= self.max_lat + TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WktError {
    #[error("unsupported geometry type `{0}`")]
    UnsupportedType(String),
    #[error("malformed coordinate list: {0}")]
    Malformed(String),
    #[error("ring is not closed or has fewer than 4 vertices")]
    UnclosedRing,
    #[error("coordinate out of range: ({0}, {1})")]
    OutOfRange(f64, f64),
}

/// Parses a 2-D `POINT` or `POLYGON`. A space before `(` is optional, the
/// type keyword is case-insensitive. Longitude/latitude ranges are checked.
pub fn parse_wkt(text: &str) -> Result<Geometry, WktError> {
    parse_wkt_with(text, true)
}

/// As [`parse_wkt`], optionally skipping the longitude/latitude range check.
pub fn parse_wkt_with(text: &str, check_range: bool) -> Result<Geometry, WktError> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| WktError::Malformed("missing `(`".into()))?;
    let kind = text[..open].trim().to_ascii_uppercase();
    if !text.ends_with(')') {
        return Err(WktError::Malformed("missing closing `)`".into()));
    }
    let body = &text[open + 1..text.len() - 1];
    let geom = match kind.as_str() {
        "POINT" => Geometry::Point(parse_coord(body)?),
        "POLYGON" => {
            let mut rings = parse_rings(body)?.into_iter();
            let outer = rings.next().ok_or_else(|| WktError::Malformed("polygon without rings".into()))?;
            Geometry::Polygon { outer, inner: rings.collect() }
        }
        "" => return Err(WktError::Malformed("missing geometry type".into())),
        other => return Err(WktError::UnsupportedType(other.to_string())),
    };
    if check_range {
        for c in geom.vertices() {
            if !(-180.0..=180.0).contains(&c.lon) || !(-90.0..=90.0).contains(&c.lat) {
                return Err(WktError::OutOfRange(c.lon, c.lat));
            }
        }
    }
    Ok(geom)
}

fn parse_coord(text: &str) -> Result<Coord, WktError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(WktError::Malformed(format!("expected 2 ordinates in `{}`", text.trim())));
    }
    let num = |s: &str| -> Result<f64, WktError> {
        let v: f64 = s.parse().map_err(|_| WktError::Malformed(format!("`{s}` is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(WktError::Malformed(format!("`{s}` is not finite")))
        }
    };
    Ok(Coord::new(num(parts[0])?, num(parts[1])?))
}

fn parse_rings(body: &str) -> Result<Vec<Vec<Coord>>, WktError> {
    let mut rings = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| WktError::Malformed("ring must start with `(`".into()))?;
        let close = inner.find(')').ok_or_else(|| WktError::Malformed("ring missing `)`".into()))?;
        if inner[..close].contains('(') {
            return Err(WktError::Malformed("unexpected `(` inside ring".into()));
        }
        let ring = inner[..close].split(',').map(parse_coord).collect::<Result<Vec<_>, _>>()?;
        if ring.len() < 4 || ring.first() != ring.last() {
            return Err(WktError::UnclosedRing);
        }
        rings.push(ring);
        rest = inner[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(WktError::Malformed("trailing `,`".into()));
            }
        } else if !rest.is_empty() {
            return Err(WktError::Malformed(format!("unexpected `{rest}`")));
        }
    }
    Ok(rings)
}

impl Geometry {
    pub fn point(lon: f64, lat: f64) -> Self {
        Geometry::Point(Coord::new(lon, lat))
    }

    /// Axis-aligned rectangle as a closed counter-clockwise ring.
    pub fn rectangle(min_lon: f64, min_lat: f64, max_lon: f64, max_lat: f64) -> Self {
        let ring = vec![
            Coord::new(min_lon, min_lat),
            Coord::new(max_lon, min_lat),
            Coord::new(max_lon, max_lat),
            Coord::new(min_lon, max_lat),
            Coord::new(min_lon, min_lat),
        ];
        Geometry::Polygon { outer: ring, inner: vec![] }
    }

    pub fn vertices(&self) -> Box<dyn Iterator<Item = Coord> + '_> {
        match self {
            Geometry::Point(c) => Box::new(std::iter::once(*c)),
            Geometry::Polygon { outer, inner } => Box::new(outer.iter().chain(inner.iter().flatten()).copied()),
        }
    }

    fn rings(&self) -> Vec<&[Coord]> {
        match self {
            Geometry::Point(_) => vec![],
            Geometry::Polygon { outer, inner } => {
                std::iter::once(outer.as_slice()).chain(inner.iter().map(Vec::as_slice)).collect()
            }
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geometry::Point(c) => write!(f, "POINT({} {})", c.lon, c.lat),
            Geometry::Polygon { .. } => {
                f.write_str("POLYGON(")?;
                for (i, ring) in self.rings().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str("(")?;
                    for (j, c) in ring.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{} {}", c.lon, c.lat)?;
                    }
                    f.write_str(")")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn bbox(g: &Geometry) -> BBox {
    let mut b =
        BBox { min_lon: f64::INFINITY, min_lat: f64::INFINITY, max_lon: f64::NEG_INFINITY, max_lat: f64::NEG_INFINITY };
    for c in g.vertices() {
        b.min_lon = b.min_lon.min(c.lon);
        b.min_lat = b.min_lat.min(c.lat);
        b.max_lon = b.max_lon.max(c.lon);
        b.max_lat = b.max_lat.max(c.lat);
    }
    b
}

pub fn sf_intersects(a: &Geometry, b: &Geometry) -> bool {
    if !bbox(a).intersects(&bbox(b)) {
        return false;
    }
    match (a, b) {
        (Geometry::Point(p), Geometry::Point(q)) => {
            (p.lon - q.lon).abs() <= TOLERANCE && (p.lat - q.lat).abs() <= TOLERANCE
        }
        (Geometry::Point(p), poly @ Geometry::Polygon { .. })
        | (poly @ Geometry::Polygon { .. }, Geometry::Point(p)) => polygon_covers(poly, *p),
        (Geometry::Polygon { .. }, Geometry::Polygon { .. }) => {
            let (ra, rb) = (a.rings(), b.rings());
            for x in &ra {
                for y in &rb {
                    for ea in x.windows(2) {
                        for eb in y.windows(2) {
                            if segments_intersect(ea[0], ea[1], eb[0], eb[1]) {
                                return true;
                            }
                        }
                    }
                }
            }
            a.vertices().any(|v| polygon_covers(b, v)) || b.vertices().any(|v| polygon_covers(a, v))
        }
    }
}

/// Point in polygon or on its boundary, holes included in the even-odd count.
fn polygon_covers(poly: &Geometry, p: Coord) -> bool {
    let rings = poly.rings();
    if rings.iter().any(|r| r.windows(2).any(|e| on_segment(e[0], e[1], p))) {
        return true;
    }
    let mut inside = false;
    for ring in rings {
        for e in ring.windows(2) {
            let (a, b) = (e[0], e[1]);
            if (a.lat > p.lat) != (b.lat > p.lat) {
                let x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
                if p.lon < x {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

fn cross(o: Coord, a: Coord, b: Coord) -> f64 {
    (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon)
}

fn on_segment(a: Coord, b: Coord, p: Coord) -> bool {
    let len = ((b.lon - a.lon).powi(2) + (b.lat - a.lat).powi(2)).sqrt();
    let dist = if len == 0.0 {
        ((p.lon - a.lon).powi(2) + (p.lat - a.lat).powi(2)).sqrt()
    } else {
        cross(a, b, p).abs() / len
    };
    dist <= TOLERANCE
        && p.lon >= a.lon.min(b.lon) - TOLERANCE
        && p.lon <= a.lon.max(b.lon) + TOLERANCE
        && p.lat >= a.lat.min(b.lat) - TOLERANCE
        && p.lat <= a.lat.max(b.lat) + TOLERANCE
}

fn segments_intersect(p1: Coord, p2: Coord, q1: Coord, q2: Coord) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    on_segment(q1, q2, p1) || on_segment(q1, q2, p2) || on_segment(p1, p2, q1) || on_segment(p1, p2, q2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_with_and_without_space() {
        assert_eq!(parse_wkt("POINT(-8.621613437 37.336764358)").unwrap(), Geometry::point(-8.621613437, 37.336764358));
        assert_eq!(parse_wkt("POINT (107.67 35.22)").unwrap(), Geometry::point(107.67, 35.22));
        assert_eq!(parse_wkt("point(1 2)").unwrap(), Geometry::point(1.0, 2.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_wkt("POINT(0 0 0)"), Err(WktError::Malformed(_))));
        assert!(matches!(parse_wkt("LINESTRING(0 0, 1 1)"), Err(WktError::UnsupportedType(_))));
        assert_eq!(parse_wkt("POLYGON((0 0, 1 0, 1 1, 0 1))"), Err(WktError::UnclosedRing));
        assert!(parse_wkt("POINT(200 0)").is_err());
        assert!(parse_wkt_with("POINT(200 0)", false).is_ok());
        assert!(parse_wkt("POINT(a b)").is_err());
        assert!(parse_wkt("POINT 1 2").is_err());
        assert!(parse_wkt("POLYGON((0 0, 1 0, 1 1, 0 0),)").is_err());
    }

    #[test]
    fn polygon_with_hole() {
        let g = parse_wkt("POLYGON((0 0, 10 0, 10 10, 0 10, 0 0), (4 4, 6 4, 6 6, 4 6, 4 4))").unwrap();
        assert!(sf_intersects(&g, &Geometry::point(1.0, 1.0)));
        assert!(!sf_intersects(&g, &Geometry::point(5.0, 5.0)));
        assert!(sf_intersects(&g, &Geometry::point(4.0, 5.0)));
        assert_eq!(parse_wkt(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn box_query_points() {
        let b = parse_wkt("POLYGON((-79 19, -79 25, -85 25, -85 19, -79 19))").unwrap();
        assert!(sf_intersects(&Geometry::point(-80.25, 22.81999969482422), &b));
        assert!(!sf_intersects(&Geometry::point(107.67, 35.22), &b));
    }

    #[test]
    fn bbox_is_tight() {
        assert_eq!(bbox(&Geometry::point(1.0, 2.0)), BBox { min_lon: 1.0, min_lat: 2.0, max_lon: 1.0, max_lat: 2.0 });
        let sq = parse_wkt("POLYGON((0 0, 0 1, 1 1, 1 0, 0 0))").unwrap();
        assert_eq!(bbox(&sq), BBox { min_lon: 0.0, min_lat: 0.0, max_lon: 1.0, max_lat: 1.0 });
    }

    #[test]
    fn polygon_pairs() {
        let a = Geometry::rectangle(0.0, 0.0, 2.0, 2.0);
        let inside = Geometry::rectangle(0.5, 0.5, 1.0, 1.0);
        let crossing = Geometry::rectangle(1.0, -1.0, 3.0, 1.0);
        let touching = Geometry::rectangle(2.0, 0.0, 3.0, 1.0);
        let apart = Geometry::rectangle(5.0, 5.0, 6.0, 6.0);
        assert!(sf_intersects(&a, &inside) && sf_intersects(&inside, &a));
        assert!(sf_intersects(&a, &crossing));
        assert!(sf_intersects(&a, &touching));
        assert!(!sf_intersects(&a, &apart));
    }
}
