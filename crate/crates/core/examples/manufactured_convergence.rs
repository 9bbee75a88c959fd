//! L² and broken-H¹ convergence of the SIPG operator for
//! `−Δu + u = f` on the unit square with `u = cos(πx) cos(πy)`.
//!
//! Pass `--quads` for the quadrilateral grid instead of triangles.

use std::f64::consts::PI;
use std::sync::Arc;

use prion_dg::dg::{assemble_mass, assemble_stiffness, DgSpace};
use prion_dg::linalg::EnvelopeCholesky;
use prion_dg::mesh::{generate_structured, triangulated_rectangle, RegionRule};

fn exact(p: [f64; 2]) -> f64 {
    (PI * p[0]).cos() * (PI * p[1]).cos()
}

fn exact_grad(p: [f64; 2]) -> [f64; 2] {
    [-PI * (PI * p[0]).sin() * (PI * p[1]).cos(), -PI * (PI * p[0]).cos() * (PI * p[1]).sin()]
}

fn main() -> prion_dg::Result<()> {
    let quads = std::env::args().any(|a| a == "--quads");
    println!("{:>3} {:>4} {:>12} {:>6} {:>12} {:>6}", "l", "n", "L2", "rate", "H1", "rate");
    for degree in 1..=3 {
        let mut prev: Option<(f64, f64)> = None;
        for n in [4, 8, 16, 32] {
            let mesh = if quads {
                generate_structured(n, n, 1.0, 1.0, &RegionRule::AllGrey)?
            } else {
                triangulated_rectangle(n, n, 1.0, 1.0, &RegionRule::AllGrey)?
            };
            let mesh = Arc::new(mesh);
            let space = DgSpace::new(mesh, degree)?;
            let ne = space.num_elements();
            let a = assemble_stiffness(&space, &vec![[[1.0, 0.0], [0.0, 1.0]]; ne], &vec![1.0; ne], 10.0)?;
            let lhs = a.linear_combination(1.0, &assemble_mass(&space), 1.0)?;
            let rhs = space.project(|p| (2.0 * PI * PI + 1.0) * exact(p));
            let u = EnvelopeCholesky::factor(&lhs)?.solve(&rhs);
            let e0 = space.l2_error(&u, exact)?;
            let e1 = space.h1_seminorm_error(&u, exact_grad)?;
            let (r0, r1) = prev.map_or((f64::NAN, f64::NAN), |(p0, p1)| ((p0 / e0).log2(), (p1 / e1).log2()));
            println!("{degree:>3} {n:>4} {e0:>12.4e} {r0:>6.2} {e1:>12.4e} {r1:>6.2}");
            prev = Some((e0, e1));
        }
    }
    Ok(())
}
