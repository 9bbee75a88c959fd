use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;

use super::basis::{local_dim, ElementBasis, MAX_DEGREE};
use super::quadrature::PolygonRule;
use crate::error::{Error, Result};
use crate::mesh::geometry::Point;
use crate::mesh::PolyMesh;

/// Per-element basis, volume rule and cached basis values.
#[derive(Debug, Clone)]
pub struct ElementData {
    pub basis: ElementBasis,
    pub rule: PolygonRule,
    /// `values[q * n_loc + i] = φ_i(x_q)`
    pub values: Vec<f64>,
    /// `∫_K φ_i`
    pub integrals: Vec<f64>,
}

/// Discontinuous piecewise-polynomial space of total degree `ℓ`.
#[derive(Debug, Clone)]
pub struct DgSpace {
    mesh: Arc<PolyMesh>,
    degree: usize,
    n_loc: usize,
    elements: Vec<ElementData>,
}

impl DgSpace {
    pub fn new(mesh: Arc<PolyMesh>, degree: usize) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::invalid(format!("polynomial degree must be in 1..={MAX_DEGREE}, got {degree}")));
        }
        let n_loc = local_dim(degree);
        // n points per direction integrates degree 2n − 2 exactly
        let npts = degree + 2;
        let elements = (0..mesh.num_elements())
            .into_par_iter()
            .map(|k| {
                let poly = mesh.element_points(k);
                let rule = PolygonRule::new(&poly, npts);
                let area: f64 = rule.weights.iter().sum();
                if (area - mesh.area(k)).abs() > 1e-10 * mesh.area(k) {
                    return Err(Error::Mesh(format!(
                        "element {k}: sub-triangulation covers area {area}, polygon area {}",
                        mesh.area(k)
                    )));
                }
                let basis = ElementBasis::new(degree, &poly, &rule.points, &rule.weights)
                    .map_err(|e| Error::Mesh(format!("element {k}: {e}")))?;
                let mut values = vec![0.0; rule.len() * n_loc];
                let mut integrals = vec![0.0; n_loc];
                for (q, (&p, &w)) in rule.points.iter().zip(&rule.weights).enumerate() {
                    let v = &mut values[q * n_loc..(q + 1) * n_loc];
                    basis.eval(p, v);
                    integrals.iter_mut().zip(v.iter()).for_each(|(s, phi)| *s += w * phi);
                }
                Ok(ElementData {
                    basis,
                    rule,
                    values,
                    integrals,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mesh,
            degree,
            n_loc,
            elements,
        })
    }

    pub fn mesh(&self) -> &PolyMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<PolyMesh> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn local_dim(&self) -> usize {
        self.n_loc
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn num_dofs(&self) -> usize {
        self.n_loc * self.elements.len()
    }

    pub fn dof_range(&self, k: usize) -> Range<usize> {
        k * self.n_loc..(k + 1) * self.n_loc
    }

    /// Element block boundaries, `num_elements + 1` entries.
    pub fn block_offsets(&self) -> Vec<usize> {
        (0..=self.elements.len()).map(|k| k * self.n_loc).collect()
    }

    pub fn element(&self, k: usize) -> &ElementData {
        &self.elements[k]
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.num_dofs() {
            return Err(Error::DimensionMismatch {
                expected: self.num_dofs(),
                got: u.len(),
            });
        }
        Ok(())
    }

    /// Evaluates `u_h` at a point of element `k`.
    pub fn eval(&self, k: usize, p: Point, u: &[f64]) -> f64 {
        let mut phi = vec![0.0; self.n_loc];
        self.elements[k].basis.eval(p, &mut phi);
        phi.iter().zip(&u[self.dof_range(k)]).map(|(a, b)| a * b).sum()
    }

    /// Elementwise L² projection of `f(k, x)`.
    pub fn project_elementwise<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(usize, Point) -> f64 + Sync,
    {
        let n = self.n_loc;
        let blocks: Vec<Vec<f64>> = self
            .elements
            .par_iter()
            .enumerate()
            .map(|(k, e)| {
                let mut c = vec![0.0; n];
                for (q, (&p, &w)) in e.rule.points.iter().zip(&e.rule.weights).enumerate() {
                    let fw = w * f(k, p);
                    let v = &e.values[q * n..(q + 1) * n];
                    c.iter_mut().zip(v).for_each(|(ci, phi)| *ci += fw * phi);
                }
                c
            })
            .collect();
        blocks.concat()
    }

    pub fn project<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(Point) -> f64 + Sync,
    {
        self.project_elementwise(|_, p| f(p))
    }

    /// Coefficients of the constant function `c`.
    pub fn constant(&self, c: f64) -> Vec<f64> {
        self.project(|_| c)
    }

    /// `∫_Ω u_h`
    pub fn integral(&self, u: &[f64]) -> Result<f64> {
        self.check_len(u)?;
        Ok(self
            .elements
            .iter()
            .enumerate()
            .map(|(k, e)| e.integrals.iter().zip(&u[self.dof_range(k)]).map(|(a, b)| a * b).sum::<f64>())
            .sum())
    }

    /// `|Ω|⁻¹ ∫_Ω u_h`
    pub fn space_average(&self, u: &[f64]) -> Result<f64> {
        Ok(self.integral(u)? / self.mesh.total_area())
    }

    pub fn cell_averages(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        Ok(self
            .elements
            .iter()
            .enumerate()
            .map(|(k, e)| {
                e.integrals.iter().zip(&u[self.dof_range(k)]).map(|(a, b)| a * b).sum::<f64>() / self.mesh.area(k)
            })
            .collect())
    }

    /// `u_h` sampled at each element's own vertices, in element vertex order.
    pub fn vertex_values(&self, u: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_len(u)?;
        Ok((0..self.num_elements())
            .map(|k| {
                self.mesh
                    .element_points(k)
                    .into_iter()
                    .map(|p| self.eval(k, p, u))
                    .collect()
            })
            .collect())
    }

    /// Scales each element's deviation from its mean so that `u_h ≥ 0` at
    /// the volume quadrature points; elements with a negative mean are
    /// reset to zero. Returns the integral added by the resets.
    pub fn positivity_limit(&self, u: &mut [f64]) -> f64 {
        let n = self.n_loc;
        let added: Vec<f64> = u
            .par_chunks_mut(n)
            .enumerate()
            .map(|(k, uk)| {
                let e = &self.elements[k];
                let area = self.mesh.area(k);
                let integral: f64 = e.integrals.iter().zip(uk.iter()).map(|(a, b)| a * b).sum();
                let mean = integral / area;
                let min = (0..e.rule.len())
                    .map(|q| e.values[q * n..(q + 1) * n].iter().zip(uk.iter()).map(|(a, b)| a * b).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                if min >= 0.0 {
                    return 0.0;
                }
                if mean <= 0.0 {
                    uk.iter_mut().for_each(|v| *v = 0.0);
                    return -integral;
                }
                // the constant 1 has coefficients ∫φ_i
                let theta = mean / (mean - min);
                for (v, c) in uk.iter_mut().zip(&e.integrals) {
                    let m = mean * c;
                    *v = m + theta * (*v - m);
                }
                0.0
            })
            .collect();
        added.iter().sum()
    }

    /// `‖u_h − f‖_{L²(Ω)}` with the element volume rules.
    pub fn l2_error<F>(&self, u: &[f64], f: F) -> Result<f64>
    where
        F: Fn(Point) -> f64 + Sync,
    {
        self.check_len(u)?;
        let n = self.n_loc;
        let s: f64 = self
            .elements
            .par_iter()
            .enumerate()
            .map(|(k, e)| {
                let uk = &u[k * n..(k + 1) * n];
                e.rule
                    .points
                    .iter()
                    .zip(&e.rule.weights)
                    .enumerate()
                    .map(|(q, (&p, &w))| {
                        let uh: f64 = e.values[q * n..(q + 1) * n].iter().zip(uk).map(|(a, b)| a * b).sum();
                        w * (uh - f(p)).powi(2)
                    })
                    .sum::<f64>()
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum();
        Ok(s.sqrt())
    }

    /// Broken `H¹` seminorm error `(Σ_K ‖∇(u_h − f)‖²_K)^{1/2}`.
    pub fn h1_seminorm_error<G>(&self, u: &[f64], grad: G) -> Result<f64>
    where
        G: Fn(Point) -> [f64; 2] + Sync,
    {
        self.check_len(u)?;
        let n = self.n_loc;
        let s: f64 = self
            .elements
            .par_iter()
            .enumerate()
            .map(|(k, e)| {
                let uk = &u[k * n..(k + 1) * n];
                let mut g = vec![[0.0; 2]; n];
                let mut acc = 0.0;
                for (&p, &w) in e.rule.points.iter().zip(&e.rule.weights) {
                    e.basis.eval_grad(p, &mut g);
                    let mut gh = [0.0; 2];
                    for (gi, ui) in g.iter().zip(uk) {
                        gh[0] += gi[0] * ui;
                        gh[1] += gi[1] * ui;
                    }
                    let ge = grad(p);
                    acc += w * ((gh[0] - ge[0]).powi(2) + (gh[1] - ge[1]).powi(2));
                }
                acc
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum();
        Ok(s.sqrt())
    }
}
