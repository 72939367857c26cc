//! Build the standard domains, refine them, and carve out an interior subdomain.

use robinlab::mesh::{generate_mesh, refine, shrink_subdomain, DomainSpec, Point2};

fn main() -> robinlab::Result<()> {
    let square = generate_mesh(&DomainSpec::unit_square(0.25))?;
    let disk = generate_mesh(&DomainSpec::disk(Point2::new(0.0, 0.0), 1.0, Some(64), 0.1))?;
    let lshape = generate_mesh(&DomainSpec::polygon(
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ],
        0.2,
    ))?;

    for (name, mesh) in [("square", &square), ("disk", &disk), ("L-shape", &lshape)] {
        println!(
            "{name:8} vertices {:5} triangles {:5} boundary edges {:4} area {:.6} perimeter {:.6}",
            mesh.vertex_count(),
            mesh.triangles().len(),
            mesh.boundary_edges().len(),
            mesh.area(),
            mesh.boundary_length()
        );
    }

    // Refinement snaps new boundary midpoints of the disk onto the circle,
    // so the perimeter converges to 2π.
    let fine = refine(&refine(&disk)?)?;
    println!("disk refined twice: perimeter {:.8} (2π = {:.8})", fine.boundary_length(), std::f64::consts::TAU);

    let interior = shrink_subdomain(&fine, 0.5)?;
    println!("{}: {} triangles, area {:.4}", interior.description, interior.triangles.len(), interior.area(&fine));
    match shrink_subdomain(&square, 0.6) {
        Err(e) => println!("margin 0.6 on the square: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
