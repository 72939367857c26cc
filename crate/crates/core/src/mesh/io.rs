//! Plain-text mesh format.
//!
//! ```text
//! NV NT NB
//! x y            (NV lines)
//! i j k          (NT lines, 0-based, counterclockwise)
//! i j nx ny      (NB lines, boundary edge and outward normal)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{BoundaryEdge, DomainTag, Mesh, Point2};
use crate::error::{Error, Result};

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", mesh.vertex_count(), mesh.triangles().len(), mesh.boundary_edges().len());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{:.16e} {:.16e}", p.x, p.y);
    }
    for t in mesh.triangles() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    for e in mesh.boundary_edges() {
        let _ = writeln!(out, "{} {} {:.16e} {:.16e}", e.vertices[0], e.vertices[1], e.normal.x, e.normal.y);
    }
    out
}

pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut tokens = text.split_whitespace();
    let mut next = |what: &str| {
        tokens.next().ok_or_else(|| Error::Parse(format!("unexpected end of mesh file while reading {what}")))
    };
    let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")));
    let real = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("bad real {s:?}: {e}")));

    let nv = int(next("header")?)?;
    let nt = int(next("header")?)?;
    let nb = int(next("header")?)?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        vertices.push(Point2::new(real(next("vertex")?)?, real(next("vertex")?)?));
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        triangles.push([int(next("triangle")?)?, int(next("triangle")?)?, int(next("triangle")?)?]);
    }
    let mut edges = Vec::with_capacity(nb);
    for _ in 0..nb {
        let a = int(next("boundary edge")?)?;
        let b = int(next("boundary edge")?)?;
        let normal = Point2::new(real(next("normal")?)?, real(next("normal")?)?);
        edges.push(BoundaryEdge { vertices: [a, b], normal });
    }
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing data after mesh".into()));
    }
    Mesh::from_parts(vertices, triangles, edges, DomainTag::Loaded)
}

impl Mesh {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, write_mesh(self))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Mesh> {
        read_mesh(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_mesh, DomainSpec};

    #[test]
    fn text_round_trip_is_exact() {
        let m = generate_mesh(&DomainSpec::unit_disk(0.3)).unwrap();
        let text = write_mesh(&m);
        let back = read_mesh(&text).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.triangles(), m.triangles());
        assert_eq!(back.boundary_edges(), m.boundary_edges());
        assert_eq!(write_mesh(&back), text);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = "3 1 3\n0 0\n1 0\n";
        assert!(matches!(read_mesh(text), Err(Error::Parse(_))));
    }
}
