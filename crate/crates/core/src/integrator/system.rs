use std::sync::Arc;

use crate::dg::{
    apply_nonlinear_reaction, assemble_linear_reaction, assemble_load, assemble_mass, assemble_stiffness, DgSpace,
    Tensor2,
};
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::models::{derive_rates, diffusion_field, DerivedRates, ModelParams};

/// `M ẏ = F(t) + L y + N(y)` with constant `M` and `L`.
pub trait SemiLinearSystem: Sync {
    fn dim(&self) -> usize;
    fn mass(&self) -> &CsrMatrix;
    fn linear(&self) -> &CsrMatrix;
    fn forcing(&self, t: f64, out: &mut [f64]);
    fn nonlinear(&self, y: &[f64], out: &mut [f64]);
    /// Diagonal block partition of `M` (used for `M⁻¹` and preconditioning).
    fn block_offsets(&self) -> Vec<usize>;
    /// Scalar summaries recorded every step.
    fn observables(&self, y: &[f64]) -> Vec<f64>;
    fn observable_names(&self) -> Vec<String>;
    /// Clamps the nonnegative species; returns the integral added. Used only
    /// when the limiter is enabled.
    fn limit_positivity(&self, _y: &mut [f64]) -> f64 {
        0.0
    }
}

/// Stacked `y = (P, Q)` heterodimer discretization.
#[derive(Debug, Clone)]
pub struct HeterodimerSystem {
    space: Arc<DgSpace>,
    params: ModelParams,
    rates: DerivedRates,
    k12: Vec<f64>,
    mass: CsrMatrix,
    linear: CsrMatrix,
    load: Vec<f64>,
}

impl HeterodimerSystem {
    pub fn new(space: Arc<DgSpace>, params: &ModelParams, eta0: f64) -> Result<Self> {
        params.validate()?;
        let diffusion = diffusion_field(space.mesh(), params.d_ext, params.d_axn);
        Self::with_diffusion(space, params, &diffusion, eta0)
    }

    pub fn with_diffusion(space: Arc<DgSpace>, params: &ModelParams, diffusion: &[Tensor2], eta0: f64) -> Result<Self> {
        params.validate()?;
        let rates = derive_rates(params)?;
        let ne = space.num_elements();
        let field = |v: f64| vec![v; ne];
        let a = assemble_stiffness(&space, diffusion, &field(params.k12 + rates.k1), eta0)?;
        let a_t = assemble_stiffness(&space, diffusion, &field(params.k12 + rates.k1_tilde), eta0)?;
        let m = assemble_mass(&space);
        let lp = a.linear_combination(-1.0, &assemble_linear_reaction(&space, &field(rates.k1))?, -1.0)?;
        let lq = a_t.linear_combination(-1.0, &assemble_linear_reaction(&space, &field(rates.k1_tilde))?, -1.0)?;
        let mut load = assemble_load(&space, &field(rates.k0))?;
        load.resize(2 * space.num_dofs(), 0.0);
        Ok(Self {
            mass: CsrMatrix::block_diag(&[&m, &m]),
            linear: CsrMatrix::block_diag(&[&lp, &lq]),
            k12: field(params.k12),
            load,
            rates,
            params: *params,
            space,
        })
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn rates(&self) -> &DerivedRates {
        &self.rates
    }

    /// Stacks separate `P` and `Q` coefficient vectors.
    pub fn stack(&self, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        let n = self.space.num_dofs();
        if p.len() != n || q.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len().max(q.len()),
            });
        }
        Ok([p, q].concat())
    }

    pub fn split<'a>(&self, y: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        y.split_at(self.space.num_dofs())
    }
}

impl SemiLinearSystem for HeterodimerSystem {
    fn dim(&self) -> usize {
        2 * self.space.num_dofs()
    }

    fn mass(&self) -> &CsrMatrix {
        &self.mass
    }

    fn linear(&self) -> &CsrMatrix {
        &self.linear
    }

    fn forcing(&self, _t: f64, out: &mut [f64]) {
        out.copy_from_slice(&self.load);
    }

    fn nonlinear(&self, y: &[f64], out: &mut [f64]) {
        let n = self.space.num_dofs();
        let (p, q) = y.split_at(n);
        let (op, oq) = out.split_at_mut(n);
        apply_nonlinear_reaction(&self.space, &self.k12, p, q, oq);
        op.iter_mut().zip(oq.iter()).for_each(|(a, b)| *a = -b);
    }

    fn block_offsets(&self) -> Vec<usize> {
        let n = self.space.num_dofs();
        let mut o = self.space.block_offsets();
        o.extend(self.space.block_offsets().into_iter().skip(1).map(|v| v + n));
        o
    }

    fn observables(&self, y: &[f64]) -> Vec<f64> {
        let (p, q) = self.split(y);
        vec![
            self.space.space_average(p).unwrap_or(f64::NAN),
            self.space.space_average(q).unwrap_or(f64::NAN),
        ]
    }

    fn observable_names(&self) -> Vec<String> {
        vec!["p_avg".into(), "q_avg".into()]
    }

    fn limit_positivity(&self, y: &mut [f64]) -> f64 {
        let n = self.space.num_dofs();
        self.space.positivity_limit(&mut y[n..])
    }
}

/// Fisher–Kolmogorov discretization for the relative concentration `c`.
#[derive(Debug, Clone)]
pub struct FkSystem {
    space: Arc<DgSpace>,
    alpha: Vec<f64>,
    mass: CsrMatrix,
    linear: CsrMatrix,
}

impl FkSystem {
    pub fn new(space: Arc<DgSpace>, params: &ModelParams, eta0: f64) -> Result<Self> {
        params.validate()?;
        let rates = derive_rates(params)?;
        let diffusion = diffusion_field(space.mesh(), params.d_ext, params.d_axn);
        Self::with_rate(space, &diffusion, rates.alpha, eta0)
    }

    /// `α = 0` gives pure diffusion.
    pub fn with_rate(space: Arc<DgSpace>, diffusion: &[Tensor2], alpha: f64, eta0: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("FK rate must be nonnegative, got {alpha}")));
        }
        let ne = space.num_elements();
        let alpha = vec![alpha; ne];
        let a = assemble_stiffness(&space, diffusion, &alpha, eta0)?;
        let linear = a.linear_combination(-1.0, &assemble_linear_reaction(&space, &alpha)?, 1.0)?;
        Ok(Self {
            mass: assemble_mass(&space),
            linear,
            alpha,
            space,
        })
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        &self.space
    }
}

impl SemiLinearSystem for FkSystem {
    fn dim(&self) -> usize {
        self.space.num_dofs()
    }

    fn mass(&self) -> &CsrMatrix {
        &self.mass
    }

    fn linear(&self) -> &CsrMatrix {
        &self.linear
    }

    fn forcing(&self, _t: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
    }

    fn nonlinear(&self, y: &[f64], out: &mut [f64]) {
        apply_nonlinear_reaction(&self.space, &self.alpha, y, y, out);
        out.iter_mut().for_each(|v| *v = -*v);
    }

    fn block_offsets(&self) -> Vec<usize> {
        self.space.block_offsets()
    }

    fn observables(&self, y: &[f64]) -> Vec<f64> {
        vec![self.space.space_average(y).unwrap_or(f64::NAN)]
    }

    fn observable_names(&self) -> Vec<String> {
        vec!["c_avg".into()]
    }

    fn limit_positivity(&self, y: &mut [f64]) -> f64 {
        self.space.positivity_limit(y)
    }
}
