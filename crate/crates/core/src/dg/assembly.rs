use rayon::prelude::*;

use super::quadrature::segment_rule;
use super::DgSpace;
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, TripletBuilder};

/// Symmetric 2×2 tensor, row-major.
pub type Tensor2 = [[f64; 2]; 2];

/// Largest eigenvalue of a symmetric 2×2 tensor.
pub fn max_eigenvalue(d: &Tensor2) -> f64 {
    let m = 0.5 * (d[0][0] + d[1][1]);
    let r = (0.25 * (d[0][0] - d[1][1]).powi(2) + d[0][1] * d[0][1]).sqrt();
    m + r
}

pub fn min_eigenvalue(d: &Tensor2) -> f64 {
    let m = 0.5 * (d[0][0] + d[1][1]);
    let r = (0.25 * (d[0][0] - d[1][1]).powi(2) + d[0][1] * d[0][1]).sqrt();
    m - r
}

/// `2ab/(a+b)`, zero when both vanish.
pub fn harmonic_mean(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

fn check_field(space: &DgSpace, f: &[f64], name: &str) -> Result<()> {
    if f.len() != space.num_elements() {
        return Err(Error::invalid(format!(
            "{name}: expected {} per-element values, got {}",
            space.num_elements(),
            f.len()
        )));
    }
    Ok(())
}

fn check_coeffs(space: &DgSpace, u: &[f64]) -> Result<()> {
    if u.len() != space.num_dofs() {
        return Err(Error::DimensionMismatch {
            expected: space.num_dofs(),
            got: u.len(),
        });
    }
    Ok(())
}

fn block_diagonal<F>(space: &DgSpace, local: F) -> CsrMatrix
where
    F: Fn(usize) -> Vec<f64> + Sync,
{
    let n = space.local_dim();
    let blocks: Vec<Vec<f64>> = (0..space.num_elements()).into_par_iter().map(&local).collect();
    let mut t = TripletBuilder::with_capacity(space.num_dofs(), space.num_dofs(), blocks.len() * n * n);
    for (k, b) in blocks.iter().enumerate() {
        t.add_block(space.dof_range(k), space.dof_range(k), b);
    }
    t.build()
}

/// `[M_ω]_ij = (ω θ_h φ_j, φ_i)` with `θ_h ≡ 1` when `theta` is `None`.
fn weighted_mass(space: &DgSpace, omega: &[f64], theta: Option<&[f64]>) -> CsrMatrix {
    let n = space.local_dim();
    block_diagonal(space, |k| {
        let e = space.element(k);
        let mut b = vec![0.0; n * n];
        if omega[k] == 0.0 {
            return b;
        }
        let th = theta.map(|t| &t[space.dof_range(k)]);
        for (q, &w) in e.rule.weights.iter().enumerate() {
            let phi = &e.values[q * n..(q + 1) * n];
            let mut s = w * omega[k];
            if let Some(th) = th {
                s *= phi.iter().zip(th).map(|(a, b)| a * b).sum::<f64>();
            }
            for i in 0..n {
                let si = s * phi[i];
                for j in i..n {
                    b[i * n + j] += si * phi[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                b[i * n + j] = b[j * n + i];
            }
        }
        b
    })
}

pub fn assemble_mass(space: &DgSpace) -> CsrMatrix {
    weighted_mass(space, &vec![1.0; space.num_elements()], None)
}

/// `[M_ω]_ij = (ω φ_j, φ_i)` for a per-element coefficient `ω`.
pub fn assemble_linear_reaction(space: &DgSpace, omega: &[f64]) -> Result<CsrMatrix> {
    check_field(space, omega, "reaction coefficient")?;
    Ok(weighted_mass(space, omega, None))
}

/// `[M̂_ω(Θ)]_ij = (ω Θ_h φ_j, φ_i)`.
pub fn assemble_nonlinear_reaction(space: &DgSpace, omega: &[f64], theta: &[f64]) -> Result<CsrMatrix> {
    check_field(space, omega, "reaction coefficient")?;
    check_coeffs(space, theta)?;
    Ok(weighted_mass(space, omega, Some(theta)))
}

/// Matrix-free `out = M̂_ω(Θ) Ψ`, i.e. `out_i = (ω Θ_h Ψ_h, φ_i)`.
pub fn apply_nonlinear_reaction(space: &DgSpace, omega: &[f64], theta: &[f64], psi: &[f64], out: &mut [f64]) {
    let n = space.local_dim();
    out.par_chunks_mut(n).enumerate().for_each(|(k, o)| {
        o.iter_mut().for_each(|v| *v = 0.0);
        if omega[k] == 0.0 {
            return;
        }
        let e = space.element(k);
        let r = space.dof_range(k);
        let (th, ps) = (&theta[r.clone()], &psi[r]);
        for (q, &w) in e.rule.weights.iter().enumerate() {
            let phi = &e.values[q * n..(q + 1) * n];
            let mut tq = 0.0;
            let mut pq = 0.0;
            for i in 0..n {
                tq += phi[i] * th[i];
                pq += phi[i] * ps[i];
            }
            let s = w * omega[k] * tq * pq;
            for i in 0..n {
                o[i] += s * phi[i];
            }
        }
    });
}

/// `[F]_i = (k0, φ_i)` for a per-element source.
pub fn assemble_load(space: &DgSpace, k0: &[f64]) -> Result<Vec<f64>> {
    check_field(space, k0, "source")?;
    let n = space.local_dim();
    let mut f = vec![0.0; space.num_dofs()];
    for (k, chunk) in f.chunks_mut(n).enumerate() {
        let e = space.element(k);
        chunk.iter_mut().zip(&e.integrals).for_each(|(c, i)| *c = k0[k] * i);
    }
    Ok(f)
}

/// Per-face SIPG penalty `η0 · max({d}_H, {k}_H) · ℓ² / {h}_H`.
pub fn face_penalty(eta0: f64, degree: usize, d: (f64, f64), k: (f64, f64), h: (f64, f64)) -> f64 {
    let dh = harmonic_mean(d.0, d.1);
    let kh = harmonic_mean(k.0, k.1);
    eta0 * dh.max(kh) * (degree * degree) as f64 / harmonic_mean(h.0, h.1)
}

/// Symmetric interior-penalty diffusion matrix with homogeneous Neumann
/// boundaries.
///
/// `diffusion` is the per-element tensor `D|_K`, `reaction_scale` the
/// per-element `k^K` entering the penalty.
pub fn assemble_stiffness(space: &DgSpace, diffusion: &[Tensor2], reaction_scale: &[f64], eta0: f64) -> Result<CsrMatrix> {
    if !(eta0 > 0.0) {
        return Err(Error::invalid(format!("penalty constant must be positive, got {eta0}")));
    }
    if diffusion.len() != space.num_elements() {
        return Err(Error::invalid(format!(
            "diffusion: expected {} tensors, got {}",
            space.num_elements(),
            diffusion.len()
        )));
    }
    check_field(space, reaction_scale, "penalty reaction scale")?;
    for (k, d) in diffusion.iter().enumerate() {
        let scale = d.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if (d[0][1] - d[1][0]).abs() > 1e-12 * scale {
            return Err(Error::invalid(format!("diffusion tensor on element {k} is not symmetric")));
        }
        if min_eigenvalue(d) < -1e-12 * scale || d.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("diffusion tensor on element {k} is not positive semidefinite")));
        }
    }
    let n = space.local_dim();
    let mesh = space.mesh();
    let deg = space.degree();

    let mut t = TripletBuilder::with_capacity(
        space.num_dofs(),
        space.num_dofs(),
        n * n * (space.num_elements() + 4 * mesh.faces().len()),
    );

    let vol: Vec<Vec<f64>> = (0..space.num_elements())
        .into_par_iter()
        .map(|k| {
            let d = diffusion[k];
            let mut b = vec![0.0; n * n];
            if d.iter().flatten().all(|&v| v == 0.0) {
                return b;
            }
            let e = space.element(k);
            let mut g = vec![[0.0; 2]; n];
            for (&p, &w) in e.rule.points.iter().zip(&e.rule.weights) {
                e.basis.eval_grad(p, &mut g);
                for i in 0..n {
                    let dg = [d[0][0] * g[i][0] + d[0][1] * g[i][1], d[1][0] * g[i][0] + d[1][1] * g[i][1]];
                    for j in i..n {
                        b[i * n + j] += w * (dg[0] * g[j][0] + dg[1] * g[j][1]);
                    }
                }
            }
            for i in 0..n {
                for j in 0..i {
                    b[i * n + j] = b[j * n + i];
                }
            }
            b
        })
        .collect();
    for (k, b) in vol.iter().enumerate() {
        t.add_block(space.dof_range(k), space.dof_range(k), b);
    }

    let interior: Vec<(usize, usize, usize)> = mesh
        .faces()
        .iter()
        .enumerate()
        .filter_map(|(f, face)| face.neighbor.map(|nb| (f, face.owner, nb)))
        .collect();
    let nq = deg + 1;
    let face_blocks: Vec<Vec<f64>> = interior
        .par_iter()
        .map(|&(f, o, m)| {
            let face = &mesh.faces()[f];
            let vs = mesh.vertices();
            let rule = segment_rule(vs[face.vertices[0]], vs[face.vertices[1]], nq);
            let nrm = face.normal;
            let eta = face_penalty(
                eta0,
                deg,
                (max_eigenvalue(&diffusion[o]), max_eigenvalue(&diffusion[m])),
                (reaction_scale[o], reaction_scale[m]),
                (mesh.diameter(o), mesh.diameter(m)),
            );
            let (dn_o, dn_m) = (diffusion[o], diffusion[m]);
            // local ordering: owner dofs then neighbour dofs
            let nn = 2 * n;
            let mut b = vec![0.0; nn * nn];
            let mut phi = vec![0.0; nn];
            let mut g = vec![[0.0; 2]; n];
            // σ φ and ½ (D∇φ)·n per local dof
            let mut jump = vec![0.0; nn];
            let mut flux = vec![0.0; nn];
            for (p, w) in rule {
                space.element(o).basis.eval(p, &mut phi[..n]);
                space.element(m).basis.eval(p, &mut phi[n..]);
                for (side, (d, off, sigma)) in [(dn_o, 0, 1.0), (dn_m, n, -1.0)].into_iter().enumerate() {
                    let el = if side == 0 { o } else { m };
                    space.element(el).basis.eval_grad(p, &mut g);
                    for i in 0..n {
                        let dg0 = d[0][0] * g[i][0] + d[0][1] * g[i][1];
                        let dg1 = d[1][0] * g[i][0] + d[1][1] * g[i][1];
                        flux[off + i] = 0.5 * (dg0 * nrm[0] + dg1 * nrm[1]);
                        jump[off + i] = sigma * phi[off + i];
                    }
                }
                for i in 0..nn {
                    for j in i..nn {
                        b[i * nn + j] += w * (eta * jump[i] * jump[j] - flux[j] * jump[i] - jump[j] * flux[i]);
                    }
                }
            }
            for i in 0..nn {
                for j in 0..i {
                    b[i * nn + j] = b[j * nn + i];
                }
            }
            b
        })
        .collect();
    for (&(_, o, m), b) in interior.iter().zip(&face_blocks) {
        let nn = 2 * n;
        let (ro, rm) = (space.dof_range(o), space.dof_range(m));
        for i in 0..nn {
            let gi = if i < n { ro.start + i } else { rm.start + i - n };
            for j in 0..nn {
                let gj = if j < n { ro.start + j } else { rm.start + j - n };
                t.push(gi, gj, b[i * nn + j]);
            }
        }
    }
    Ok(t.build())
}
