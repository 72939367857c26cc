use super::Point2;
use crate::error::{Error, Result};

/// Checks a polygon and returns its vertices in counterclockwise order.
pub(super) fn validate(vertices: &[Point2]) -> Result<Vec<Point2>> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::DegeneratePolygon(format!("need at least 3 vertices, got {n}")));
    }
    if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(Error::DegeneratePolygon(format!("vertex {i} is not finite")));
    }
    let scale = vertices.iter().map(|p| p.x.abs().max(p.y.abs())).fold(1.0, f64::max);
    let eps = 1e-12 * scale;

    for i in 0..n {
        for j in i + 1..n {
            if vertices[i].dist(vertices[j]) <= eps {
                return Err(Error::DegeneratePolygon(format!("vertices {i} and {j} coincide")));
            }
        }
    }
    for i in 0..n {
        let (a, b, c) = (vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]);
        if (b - a).cross(c - b).abs() <= eps * scale {
            return Err(Error::DegeneratePolygon(format!("vertex {i} is collinear with its neighbours")));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            // adjacent edges share a vertex and are allowed to touch there
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Err(Error::DegeneratePolygon(format!("edges {i} and {j} intersect")));
            }
        }
    }
    let area = signed_area(vertices);
    if area.abs() <= eps * scale {
        return Err(Error::DegeneratePolygon("polygon has zero area".into()));
    }
    let mut ccw = vertices.to_vec();
    if area < 0.0 {
        ccw.reverse();
    }
    Ok(ccw)
}

pub(super) fn signed_area(p: &[Point2]) -> f64 {
    let n = p.len();
    0.5 * (0..n).map(|i| p[i].cross(p[(i + 1) % n])).sum::<f64>()
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2, o: f64| {
        o == 0.0 && r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
pub(super) fn ear_clip(p: &[Point2]) -> Result<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    let mut tris = Vec::with_capacity(p.len() - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&k| {
            let (i0, i1, i2) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (p[i0], p[i1], p[i2]);
            if orient(a, b, c) <= 0.0 {
                return false;
            }
            idx.iter().all(|&j| {
                if j == i0 || j == i1 || j == i2 {
                    return true;
                }
                let q = p[j];
                !(orient(a, b, q) >= 0.0 && orient(b, c, q) >= 0.0 && orient(c, a, q) >= 0.0)
            })
        });
        let Some(k) = ear else {
            return Err(Error::DegeneratePolygon("no ear found; polygon is not simple".into()));
        };
        tris.push([idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]]);
        idx.remove(k);
    }
    tris.push([idx[0], idx[1], idx[2]]);
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let p = validate(&pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])).unwrap();
        assert!(signed_area(&p) > 0.0);
    }

    #[test]
    fn bowtie_is_rejected() {
        let err = validate(&pts(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)])).unwrap_err();
        assert!(err.to_string().contains("intersect"), "{err}");
    }

    #[test]
    fn repeated_and_collinear_vertices_are_rejected() {
        assert!(validate(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).is_err());
        assert!(validate(&pts(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.0, 1.0)])).is_err());
        assert!(validate(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])).is_err());
    }

    #[test]
    fn l_shape_triangulates_with_positive_areas() {
        let p = validate(&pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])).unwrap();
        let tris = ear_clip(&p).unwrap();
        assert_eq!(tris.len(), 4);
        let total: f64 = tris.iter().map(|t| 0.5 * orient(p[t[0]], p[t[1]], p[t[2]])).sum();
        assert!((total - 3.0).abs() < 1e-14);
        assert!(tris.iter().all(|t| orient(p[t[0]], p[t[1]], p[t[2]]) > 0.0));
    }
}
