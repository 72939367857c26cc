//! Triangulated 2D domains with oriented boundary data.
//!
//! Meshes are immutable once built. Every constructor funnels through
//! [`Mesh::from_topology`], which derives the boundary from the triangle
//! list and checks the invariants the rest of the crate relies on:
//! counterclockwise triangles, outward unit normals on boundary edges and a
//! connected vertex graph.

mod generate;
mod io;
mod polygon;

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate_mesh, refine};
pub use io::{read_mesh, write_mesh};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Unit vector at angle `theta` from the x axis.
    pub fn unit(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Geometry a mesh was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DomainShape {
    Polygon { vertices: Vec<Point2> },
    Disk { center: Point2, radius: f64, segments: Option<usize> },
    Rectangle { min: Point2, max: Point2 },
}

/// A domain description plus target mesh size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: DomainShape,
    pub h: f64,
}

impl DomainSpec {
    pub fn unit_square(h: f64) -> Self {
        Self::rectangle(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), h)
    }

    pub fn rectangle(min: Point2, max: Point2, h: f64) -> Self {
        Self { shape: DomainShape::Rectangle { min, max }, h }
    }

    /// Unit disk centred at the origin; the boundary segment count is chosen
    /// from `h`.
    pub fn unit_disk(h: f64) -> Self {
        Self::disk(Point2::new(0.0, 0.0), 1.0, None, h)
    }

    pub fn disk(center: Point2, radius: f64, segments: Option<usize>, h: f64) -> Self {
        Self { shape: DomainShape::Disk { center, radius, segments }, h }
    }

    pub fn polygon(vertices: Vec<Point2>, h: f64) -> Self {
        Self { shape: DomainShape::Polygon { vertices }, h }
    }

    /// Same domain at a different target mesh size. An explicit disk
    /// segment count is dropped so it can follow `h`.
    pub fn with_h(&self, h: f64) -> Self {
        let shape = match &self.shape {
            DomainShape::Disk { center, radius, .. } => {
                DomainShape::Disk { center: *center, radius: *radius, segments: None }
            }
            other => other.clone(),
        };
        Self { shape, h }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Invalid(format!("mesh size h must be positive, got {}", self.h)));
        }
        match &self.shape {
            DomainShape::Polygon { vertices } => polygon::validate(vertices).map(|_| ()),
            DomainShape::Disk { center, radius, segments } => {
                if !center.is_finite() {
                    return Err(Error::Invalid("disk center is not finite".into()));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Invalid(format!("disk radius must be positive, got {radius}")));
                }
                if let Some(s) = segments {
                    if *s < 3 {
                        return Err(Error::Invalid(format!("a disk needs at least 3 boundary segments, got {s}")));
                    }
                    let arc = std::f64::consts::TAU * radius / *s as f64;
                    if arc > 3f64.sqrt() * self.h {
                        return Err(Error::Invalid(format!(
                            "{s} boundary segments are too coarse for h = {} (need at least {})",
                            self.h,
                            (std::f64::consts::TAU * radius / (3f64.sqrt() * self.h)).ceil()
                        )));
                    }
                }
                Ok(())
            }
            DomainShape::Rectangle { min, max } => {
                if !(min.is_finite() && max.is_finite()) || max.x <= min.x || max.y <= min.y {
                    return Err(Error::Invalid(format!(
                        "rectangle corners must satisfy min < max componentwise, got {min:?} / {max:?}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn label(&self) -> String {
        match &self.shape {
            DomainShape::Polygon { vertices } => format!("polygon[{}]", vertices.len()),
            DomainShape::Disk { center, radius, .. } => {
                format!("disk(c=({},{}),r={})", center.x, center.y, radius)
            }
            DomainShape::Rectangle { min, max } => {
                if *min == Point2::new(0.0, 0.0) && *max == Point2::new(1.0, 1.0) {
                    "square".to_string()
                } else {
                    format!("rectangle(({},{}),({},{}))", min.x, min.y, max.x, max.y)
                }
            }
        }
    }
}

/// Where a mesh came from; disks need centre and radius for boundary snapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DomainTag {
    Polygon { label: String },
    Rectangle { label: String },
    Disk { center: Point2, radius: f64 },
    Loaded,
}

impl DomainTag {
    pub fn label(&self) -> String {
        match self {
            DomainTag::Polygon { label } | DomainTag::Rectangle { label } => label.clone(),
            DomainTag::Disk { center, radius } => {
                format!("disk(c=({},{}),r={})", center.x, center.y, radius)
            }
            DomainTag::Loaded => "loaded".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    /// Endpoints, ordered counterclockwise along the boundary.
    pub vertices: [usize; 2],
    /// Outward unit normal, constant along the edge.
    pub normal: Point2,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Point2>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    on_boundary: Vec<bool>,
    tag: DomainTag,
}

impl Mesh {
    /// Builds a mesh from vertices and counterclockwise triangles, deriving the
    /// boundary edges and their outward normals.
    pub fn from_topology(vertices: Vec<Point2>, triangles: Vec<[usize; 3]>, tag: DomainTag) -> Result<Self> {
        let boundary_edges = boundary_from_topology(&vertices, &triangles)?;
        Self::from_parts(vertices, triangles, boundary_edges, tag)
    }

    /// Builds a mesh from explicit parts and validates every invariant.
    pub fn from_parts(
        vertices: Vec<Point2>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
        tag: DomainTag,
    ) -> Result<Self> {
        let mut on_boundary = vec![false; vertices.len()];
        for e in &boundary_edges {
            for &v in &e.vertices {
                if v >= vertices.len() {
                    return Err(Error::MeshInvariant(format!("boundary edge references vertex {v}")));
                }
                on_boundary[v] = true;
            }
        }
        let mesh = Self { vertices, triangles, boundary_edges, on_boundary, tag };
        mesh.check_invariants()?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn tag(&self) -> &DomainTag {
        &self.tag
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn triangle_points(&self, t: usize) -> [Point2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * (b - a).cross(c - a)
    }

    pub fn edge_length(&self, e: &BoundaryEdge) -> f64 {
        self.vertices[e.vertices[0]].dist(self.vertices[e.vertices[1]])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary_edges.iter().map(|e| self.edge_length(e)).sum()
    }

    pub fn max_diameter(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_points(t);
                a.dist(b).max(b.dist(c)).max(c.dist(a))
            })
            .fold(0.0, f64::max)
    }

    /// Distance from every vertex to the boundary polyline.
    pub fn boundary_distances(&self) -> Vec<f64> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                if self.on_boundary[i] {
                    return 0.0;
                }
                self.boundary_edges
                    .iter()
                    .map(|e| point_segment_distance(p, self.vertices[e.vertices[0]], self.vertices[e.vertices[1]]))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Outward normal times length for each edge of triangle `t`.
    pub fn triangle_edge_normals(&self, t: usize) -> [Point2; 3] {
        let p = self.triangle_points(t);
        std::array::from_fn(|k| {
            let e = p[(k + 1) % 3] - p[k];
            Point2::new(e.y, -e.x)
        })
    }

    pub fn check_invariants(&self) -> Result<()> {
        let nv = self.vertices.len();
        if nv == 0 || self.triangles.is_empty() {
            return Err(Error::MeshInvariant("mesh is empty".into()));
        }
        if let Some(i) = self.vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::MeshInvariant(format!("vertex {i} is not finite")));
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::MeshInvariant(format!("triangle {t} references a missing vertex")));
            }
            let area = self.triangle_area(t);
            if !(area > 0.0) {
                return Err(Error::MeshInvariant(format!("triangle {t} has non-positive signed area {area:e}")));
            }
        }

        // Each boundary edge must belong to exactly one triangle and together
        // they must be the full topological boundary.
        let counts = edge_counts(&self.triangles);
        let mut expected: Vec<(usize, usize)> = counts.iter().filter(|(_, (n, _))| *n == 1).map(|(k, _)| *k).collect();
        let mut stored: Vec<(usize, usize)> =
            self.boundary_edges.iter().map(|e| sorted_pair(e.vertices[0], e.vertices[1])).collect();
        expected.sort_unstable();
        stored.sort_unstable();
        if expected != stored {
            return Err(Error::MeshInvariant("boundary edges do not match the topological boundary".into()));
        }
        if let Some((k, _)) = counts.iter().find(|(_, (n, _))| *n > 2) {
            return Err(Error::MeshInvariant(format!("edge {k:?} is shared by more than two triangles")));
        }

        for (i, e) in self.boundary_edges.iter().enumerate() {
            if (e.normal.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::MeshInvariant(format!("boundary edge {i} normal is not unit length")));
            }
            let key = sorted_pair(e.vertices[0], e.vertices[1]);
            let t = counts[&key].1;
            let [a, b, c] = self.triangle_points(t);
            let centroid = (a + b + c) * (1.0 / 3.0);
            let mid = (self.vertices[e.vertices[0]] + self.vertices[e.vertices[1]]) * 0.5;
            if e.normal.dot(mid - centroid) <= 0.0 {
                return Err(Error::MeshInvariant(format!("boundary edge {i} normal points inward")));
            }
        }

        if !is_connected(nv, &self.triangles) {
            return Err(Error::MeshInvariant("mesh is not connected".into()));
        }
        Ok(())
    }
}

/// Triangles of a mesh lying a fixed distance inside the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdomain {
    pub triangles: Vec<usize>,
    pub margin: f64,
    pub description: String,
}

impl Subdomain {
    pub fn area(&self, mesh: &Mesh) -> f64 {
        self.triangles.iter().map(|&t| mesh.triangle_area(t)).sum()
    }
}

/// All triangles whose vertices are at distance at least `margin` from the
/// boundary.
pub fn shrink_subdomain(mesh: &Mesh, margin: f64) -> Result<Subdomain> {
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::Invalid(format!("margin must be positive, got {margin}")));
    }
    let dist = mesh.boundary_distances();
    let tri_depth = |t: &[usize; 3]| t.iter().map(|&v| dist[v]).fold(f64::INFINITY, f64::min);
    let triangles: Vec<usize> =
        mesh.triangles().iter().enumerate().filter(|(_, t)| tri_depth(t) >= margin).map(|(i, _)| i).collect();
    if triangles.is_empty() {
        let largest_feasible = mesh.triangles().iter().map(tri_depth).fold(0.0, f64::max);
        return Err(Error::InfeasibleMargin { margin, largest_feasible });
    }
    Ok(Subdomain { triangles, margin, description: format!("shrink by margin {margin}") })
}

pub(crate) fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(a + ab * t)
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edge -> (number of incident triangles, first incident triangle).
fn edge_counts(triangles: &[[usize; 3]]) -> HashMap<(usize, usize), (usize, usize)> {
    let mut counts: HashMap<(usize, usize), (usize, usize)> = HashMap::with_capacity(triangles.len() * 2);
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let entry = counts.entry(sorted_pair(tri[k], tri[(k + 1) % 3])).or_insert((0, t));
            entry.0 += 1;
        }
    }
    counts
}

fn boundary_from_topology(vertices: &[Point2], triangles: &[[usize; 3]]) -> Result<Vec<BoundaryEdge>> {
    let counts = edge_counts(triangles);
    let mut edges = Vec::new();
    // Triangle order keeps the result deterministic.
    for tri in triangles {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if counts[&sorted_pair(a, b)].0 != 1 {
                continue;
            }
            let (pa, pb) = (
                *vertices.get(a).ok_or_else(|| Error::MeshInvariant(format!("missing vertex {a}")))?,
                *vertices.get(b).ok_or_else(|| Error::MeshInvariant(format!("missing vertex {b}")))?,
            );
            let e = pb - pa;
            let len = e.norm();
            if !(len > 0.0) {
                return Err(Error::MeshInvariant(format!("boundary edge ({a}, {b}) has zero length")));
            }
            edges.push(BoundaryEdge { vertices: [a, b], normal: Point2::new(e.y / len, -e.x / len) });
        }
    }
    Ok(edges)
}

fn is_connected(nv: usize, triangles: &[[usize; 3]]) -> bool {
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut used = vec![false; nv];
    for tri in triangles {
        for &v in tri {
            used[v] = true;
        }
        let r0 = find(&mut parent, tri[0]);
        for &v in &tri[1..] {
            let r = find(&mut parent, v);
            parent[r] = r0;
        }
    }
    if used.iter().any(|u| !u) {
        return false;
    }
    let root = find(&mut parent, 0);
    (0..nv).all(|v| find(&mut parent, v) == root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inward_normal_is_rejected() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        let mut edges = boundary_from_topology(&v, &[[0, 1, 2]]).unwrap();
        edges[0].normal = edges[0].normal * -1.0;
        let err = Mesh::from_parts(v, vec![[0, 1, 2]], edges, DomainTag::Loaded).unwrap_err();
        assert!(err.to_string().contains("inward"), "{err}");
    }

    #[test]
    fn clockwise_triangle_is_rejected() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        assert!(Mesh::from_topology(v, vec![[0, 2, 1]], DomainTag::Loaded).is_err());
    }

    #[test]
    fn disconnected_mesh_is_rejected() {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(5.0, 0.0),
            Point2::new(6.0, 0.0),
            Point2::new(5.0, 1.0),
        ];
        let err = Mesh::from_topology(v, vec![[0, 1, 2], [3, 4, 5]], DomainTag::Loaded).unwrap_err();
        assert!(err.to_string().contains("connected"));
    }

    #[test]
    fn segment_distance() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert_eq!(point_segment_distance(Point2::new(0.5, 2.0), a, b), 2.0);
        assert_eq!(point_segment_distance(Point2::new(-3.0, 4.0), a, b), 5.0);
    }
}
