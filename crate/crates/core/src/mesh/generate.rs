use std::collections::{HashMap, HashSet};
use std::f64::consts::TAU;

use super::{polygon, DomainShape, DomainSpec, DomainTag, Mesh, Point2};
use crate::error::Result;

/// Meshes a domain: structured right-triangle grids for rectangles,
/// concentric rings for disks and ear clipping plus uniform refinement for
/// general polygons.
pub fn generate_mesh(spec: &DomainSpec) -> Result<Mesh> {
    spec.validate()?;
    match &spec.shape {
        DomainShape::Rectangle { min, max } => rectangle(*min, *max, spec.h, spec.label()),
        DomainShape::Disk { center, radius, segments } => {
            let segments = segments.unwrap_or_else(|| default_disk_segments(*radius, spec.h));
            disk(*center, *radius, segments, spec.h)
        }
        DomainShape::Polygon { vertices } => {
            let ccw = polygon::validate(vertices)?;
            let tris = polygon::ear_clip(&ccw)?;
            let mut mesh = Mesh::from_topology(ccw, tris, DomainTag::Polygon { label: spec.label() })?;
            while mesh.max_diameter() > 2.0 * spec.h {
                mesh = refine(&mesh)?;
            }
            Ok(mesh)
        }
    }
}

/// Boundary segment count used when a disk spec leaves it open: the smallest
/// multiple of 16 whose arc length does not exceed `h`. Multiples of 16 give
/// the ring mesh a 16-fold rotational symmetry.
pub fn default_disk_segments(radius: f64, h: f64) -> usize {
    let s = (TAU * radius / h).ceil() as usize;
    s.div_ceil(16).max(1) * 16
}

fn rectangle(min: Point2, max: Point2, h: f64, label: String) -> Result<Mesh> {
    let nx = ((max.x - min.x) / h).ceil().max(1.0) as usize;
    let ny = ((max.y - min.y) / h).ceil().max(1.0) as usize;
    let coord = |lo: f64, hi: f64, i: usize, n: usize| {
        if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        }
    };
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(Point2::new(coord(min.x, max.x, i, nx), coord(min.y, max.y, j, ny)));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Mesh::from_topology(vertices, triangles, DomainTag::Rectangle { label })
}

fn disk(center: Point2, radius: f64, segments: usize, h: f64) -> Result<Mesh> {
    let sectors = [16usize, 8, 4, 2, 1].into_iter().find(|q| segments.is_multiple_of(*q)).unwrap_or(1);
    let rings = (radius / h).ceil().max(1.0) as usize;
    let min_per_ring = 6usize.div_ceil(sectors) * sectors;

    // Ring k has counts[k] vertices on radius r_k = R k / rings; ring 0 is the centre.
    let mut counts = vec![1usize];
    for k in 1..=rings {
        let n = if k == rings {
            segments
        } else {
            let raw = (segments * k).div_ceil(rings * sectors) * sectors;
            raw.max(min_per_ring).min(segments)
        };
        counts.push(n);
    }

    let mut vertices = vec![center];
    let mut offsets = vec![0usize];
    for (k, &n) in counts.iter().enumerate().skip(1) {
        offsets.push(vertices.len());
        let r = if k == rings { radius } else { radius * k as f64 / rings as f64 };
        for i in 0..n {
            let theta = TAU * i as f64 / n as f64;
            vertices.push(Point2::new(center.x + r * theta.cos(), center.y + r * theta.sin()));
        }
    }

    let mut triangles = Vec::new();
    let n1 = counts[1];
    for i in 0..n1 {
        triangles.push([0, offsets[1] + i, offsets[1] + (i + 1) % n1]);
    }
    for k in 2..=rings {
        let (ni, no) = (counts[k - 1], counts[k]);
        let (a, b) = (ni / sectors, no / sectors);
        let inner = |i: usize| offsets[k - 1] + i % ni;
        let outer = |j: usize| offsets[k] + j % no;
        for s in 0..sectors {
            let (i0, j0) = (s * a, s * b);
            let (mut i, mut j) = (0usize, 0usize);
            // Walk both rings through the sector in angular order; integer
            // comparison keeps every sector identical.
            while i < a || j < b {
                let advance_outer = i == a || (j < b && (j + 1) * a <= (i + 1) * b);
                if advance_outer {
                    triangles.push([inner(i0 + i), outer(j0 + j), outer(j0 + j + 1)]);
                    j += 1;
                } else {
                    triangles.push([inner(i0 + i), outer(j0 + j), inner(i0 + i + 1)]);
                    i += 1;
                }
            }
        }
    }
    Mesh::from_topology(vertices, triangles, DomainTag::Disk { center, radius })
}

/// Splits every triangle into four through its edge midpoints. Disk meshes
/// have the new boundary midpoints projected back onto the circle.
pub fn refine(mesh: &Mesh) -> Result<Mesh> {
    let boundary: HashSet<(usize, usize)> = mesh
        .boundary_edges()
        .iter()
        .map(|e| {
            let [a, b] = e.vertices;
            (a.min(b), a.max(b))
        })
        .collect();
    let mut vertices = mesh.vertices().to_vec();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triangles = Vec::with_capacity(4 * mesh.triangles().len());

    let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point2>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoint.entry(key).or_insert_with(|| {
            let mut p = (vertices[a] + vertices[b]) * 0.5;
            if let DomainTag::Disk { center, radius } = mesh.tag() {
                if boundary.contains(&key) {
                    let d = p - *center;
                    p = *center + d * (radius / d.norm());
                }
            }
            vertices.push(p);
            vertices.len() - 1
        })
    };

    for &[a, b, c] in mesh.triangles() {
        let ab = mid(a, b, &mut vertices);
        let bc = mid(b, c, &mut vertices);
        let ca = mid(c, a, &mut vertices);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }
    Mesh::from_topology(vertices, triangles, mesh.tag().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shrink_subdomain;

    #[test]
    fn coarse_unit_square() {
        let m = generate_mesh(&DomainSpec::unit_square(0.5)).unwrap();
        assert!(m.triangles().len() >= 8);
        assert!((m.boundary_length() - 4.0).abs() < 1e-12);
        assert!(m.max_diameter() <= 1.0);
    }

    #[test]
    fn fine_unit_square_area() {
        let m = generate_mesh(&DomainSpec::unit_square(1.0 / 64.0)).unwrap();
        assert!((m.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_chord_sum() {
        let spec = DomainSpec::disk(Point2::new(0.0, 0.0), 1.0, Some(64), 0.1);
        let m = generate_mesh(&spec).unwrap();
        assert_eq!(m.boundary_edges().len(), 64);
        let expected = 64.0 * 2.0 * (std::f64::consts::PI / 64.0).sin();
        assert!((m.boundary_length() - expected).abs() < 1e-12);
        for e in m.boundary_edges() {
            for &v in &e.vertices {
                assert!((m.vertices()[v].norm() - 1.0).abs() < 1e-15);
            }
        }
        assert!(m.max_diameter() <= 0.2);
    }

    #[test]
    fn too_few_disk_segments_is_rejected() {
        let spec = DomainSpec::disk(Point2::new(0.0, 0.0), 1.0, Some(8), 0.05);
        assert!(generate_mesh(&spec).is_err());
    }

    #[test]
    fn disk_meshes_respect_size_bound() {
        for h in [0.3, 0.1, 0.037] {
            let m = generate_mesh(&DomainSpec::unit_disk(h)).unwrap();
            assert!(m.max_diameter() <= 2.0 * h, "h = {h}: {}", m.max_diameter());
        }
    }

    #[test]
    fn polygon_is_refined_to_size() {
        let tri = vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(0.5, 1.5)];
        let m = generate_mesh(&DomainSpec::polygon(tri, 0.1)).unwrap();
        assert!(m.max_diameter() <= 0.2);
        assert!((m.area() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn refinement_counts_and_area() {
        let m = generate_mesh(&DomainSpec::unit_square(0.25)).unwrap();
        let r = refine(&m).unwrap();
        assert_eq!(r.triangles().len(), 4 * m.triangles().len());
        assert!((r.area() - m.area()).abs() < 1e-12);
        let rr = refine(&r).unwrap();
        assert_eq!(rr.boundary_edges().len(), 4 * m.boundary_edges().len());
    }

    #[test]
    fn refined_disk_boundary_is_snapped() {
        let spec = DomainSpec::disk(Point2::new(0.3, -0.2), 2.0, Some(32), 0.5);
        let m = refine(&generate_mesh(&spec).unwrap()).unwrap();
        for e in m.boundary_edges() {
            for &v in &e.vertices {
                assert!((m.vertices()[v].dist(Point2::new(0.3, -0.2)) - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn subdomain_areas_converge() {
        let sq = generate_mesh(&DomainSpec::unit_square(1.0 / 64.0)).unwrap();
        let s = shrink_subdomain(&sq, 0.25).unwrap();
        assert!((s.area(&sq) - 0.25).abs() < 1e-12);

        // Inner disk area is approached from below at first order in h.
        let target = std::f64::consts::PI / 4.0;
        let err = |h: f64| {
            let disk = generate_mesh(&DomainSpec::unit_disk(h)).unwrap();
            target - shrink_subdomain(&disk, 0.5).unwrap().area(&disk)
        };
        let (coarse, fine) = (err(1.0 / 16.0), err(1.0 / 128.0));
        assert!(coarse > 0.0 && fine > 0.0);
        assert!(fine < coarse / 4.0, "{coarse} {fine}");
        assert!(fine < 0.05 * target);
    }

    #[test]
    fn infeasible_margin_names_the_limit() {
        let sq = generate_mesh(&DomainSpec::unit_square(0.1)).unwrap();
        match shrink_subdomain(&sq, 10.0) {
            Err(crate::Error::InfeasibleMargin { largest_feasible, .. }) => {
                assert!((largest_feasible - 0.4).abs() < 1e-12, "{largest_feasible}");
            }
            other => panic!("expected infeasible margin, got {other:?}"),
        }
    }
}
