use super::{ImexTableau, SemiLinearSystem};
use crate::error::{Error, Result};
use crate::linalg::{BlockJacobi, SolverKind, SpdSolver};

/// One-step IMEX map with the stage matrix `M − Δt γ L` factored once.
pub struct ImexStepper<'a, S: SemiLinearSystem + ?Sized> {
    system: &'a S,
    tableau: ImexTableau,
    dt: f64,
    stage: SpdSolver,
    mass_inv: BlockJacobi,
    k: Vec<Vec<f64>>,
    k_hat: Vec<Vec<f64>>,
    base: Vec<f64>,
    rhs: Vec<f64>,
    tmp: Vec<f64>,
}

impl<'a, S: SemiLinearSystem + ?Sized> ImexStepper<'a, S> {
    pub fn new(system: &'a S, tableau: ImexTableau, dt: f64, solver: SolverKind) -> Result<Self> {
        tableau.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("time step must be positive, got {dt}")));
        }
        let n = system.dim();
        let blocks = system.block_offsets();
        let stage_matrix = system.mass().linear_combination(1.0, system.linear(), -dt * tableau.gamma)?;
        let stage = SpdSolver::new(&stage_matrix, solver, &blocks)?;
        let mass_inv = BlockJacobi::new(system.mass(), &blocks)?;
        let s = tableau.stages();
        Ok(Self {
            system,
            dt,
            stage,
            mass_inv,
            k: vec![vec![0.0; n]; s],
            k_hat: vec![vec![0.0; n]; s + 1],
            base: vec![0.0; n],
            rhs: vec![0.0; n],
            tmp: vec![0.0; n],
            tableau,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn tableau(&self) -> &ImexTableau {
        &self.tableau
    }

    fn explicit_stage(&mut self, r: usize, y: &[f64]) {
        self.system.nonlinear(y, &mut self.tmp);
        self.mass_inv.apply(&self.tmp, &mut self.k_hat[r]);
    }

    /// Advances `y` from `t` to `t + Δt` in place.
    pub fn step(&mut self, y: &mut [f64], t: f64) -> Result<()> {
        let n = y.len();
        let s = self.tableau.stages();
        let dt = self.dt;
        let g = self.tableau.gamma;
        let ybar0 = y.to_vec();
        self.explicit_stage(0, &ybar0);
        for i in 0..s {
            self.base.copy_from_slice(y);
            for j in 0..i {
                let c = dt * self.tableau.a[i][j];
                if c != 0.0 {
                    self.base.iter_mut().zip(&self.k[j]).for_each(|(b, k)| *b += c * k);
                }
            }
            for (j, &ah) in self.tableau.a_hat[i + 1].iter().enumerate() {
                let c = dt * ah;
                if c != 0.0 {
                    self.base.iter_mut().zip(&self.k_hat[j]).for_each(|(b, k)| *b += c * k);
                }
            }
            self.system.forcing(t + self.tableau.c[i] * dt, &mut self.rhs);
            self.system.linear().mul_vec_add(1.0, &self.base, &mut self.rhs);
            self.stage.solve_into(&self.rhs, &mut self.k[i])?;
            let needs_next = i + 1 < s || self.tableau.b_hat[s] != 0.0;
            if needs_next {
                let mut ybar = std::mem::take(&mut self.base);
                ybar.iter_mut().zip(&self.k[i]).for_each(|(b, k)| *b += dt * g * k);
                self.explicit_stage(i + 1, &ybar);
                self.base = ybar;
            }
        }
        for j in 0..s {
            let c = dt * self.tableau.b[j];
            if c != 0.0 {
                y.iter_mut().zip(&self.k[j]).for_each(|(v, k)| *v += c * k);
            }
        }
        for j in 0..=s {
            let c = dt * self.tableau.b_hat[j];
            if c != 0.0 {
                y.iter_mut().zip(&self.k_hat[j]).for_each(|(v, k)| *v += c * k);
            }
        }
        debug_assert_eq!(n, self.base.len());
        Ok(())
    }
}
