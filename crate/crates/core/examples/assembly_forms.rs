//! Assemble the stiffness, boundary-mass and mass matrices and evaluate the
//! Robin form, Lebesgue norms and closed-form exponential integrals.

use std::sync::Arc;

use robinlab::assembly::{apply_form, assemble, integrate_exponential, lp_norm, NodalFunction};
use robinlab::mesh::{generate_mesh, DomainSpec, Point2};

fn main() -> robinlab::Result<()> {
    let mesh = Arc::new(generate_mesh(&DomainSpec::unit_square(1.0 / 32.0))?);
    let forms = assemble(mesh.clone(), None)?;
    println!("unknowns {}, nonzeros A {} B {} M {}", forms.dim(), forms.a.nnz(), forms.b.nnz(), forms.m.nnz());

    // For u = 1 the form reduces to −α |∂Ω|.
    let one = NodalFunction::constant(forms.dim(), 1.0);
    println!("a(1, 1) at alpha = 2: {:.12} (expected -8)", apply_form(&forms, 2.0, &one, &one)?);

    let u = NodalFunction::interpolate(&mesh, |x, y| x * y)?;
    println!("||xy||_2 = {:.6} (exact 1/3)", lp_norm(&forms, &u, 2.0, None)?);
    println!("||xy||_1 = {:.6} (exact 1/4)", lp_norm(&forms, &u, 1.0, None)?);

    // ∫ e^{s x·d} over the square and its boundary, kept in scaled form so
    // huge exponents do not overflow.
    for s in [2.0, 200.0, 2000.0] {
        let ex = integrate_exponential(&mesh, Point2::new(0.0, 1.0), s)?;
        println!(
            "s = {s:6}: ln volume {:.6}, boundary/volume {:.6}, flux/volume {:.6}",
            ex.ln_volume(),
            ex.boundary_scaled / ex.volume_scaled,
            ex.flux_scaled / ex.volume_scaled
        );
    }
    Ok(())
}
