//! Sparse matrices and the linear solvers used by the time stepper.

mod cholesky;
mod pcg;
mod sparse;

use serde::{Deserialize, Serialize};

pub use cholesky::{reverse_cuthill_mckee, EnvelopeCholesky};
pub use pcg::{dense_cholesky, dense_cholesky_solve, pcg, BlockJacobi, PcgOptions};
pub use sparse::{CsrMatrix, TripletBuilder};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Direct,
    Pcg,
}

/// A factored (or preconditioned) SPD operator ready for repeated solves.
#[derive(Debug, Clone)]
pub enum SpdSolver {
    Direct(EnvelopeCholesky),
    Pcg {
        matrix: CsrMatrix,
        pre: BlockJacobi,
        opts: PcgOptions,
    },
}

impl SpdSolver {
    /// `blocks` gives the block-Jacobi partition for the iterative variant.
    pub fn new(a: &CsrMatrix, kind: SolverKind, blocks: &[usize]) -> Result<Self> {
        Ok(match kind {
            SolverKind::Direct => SpdSolver::Direct(EnvelopeCholesky::factor(a)?),
            SolverKind::Pcg => SpdSolver::Pcg {
                matrix: a.clone(),
                pre: BlockJacobi::new(a, blocks)?,
                opts: PcgOptions::default(),
            },
        })
    }

    pub fn solve_into(&self, b: &[f64], x: &mut [f64]) -> Result<()> {
        match self {
            SpdSolver::Direct(f) => {
                f.solve_into(b, x);
                Ok(())
            }
            SpdSolver::Pcg { matrix, pre, opts } => {
                x.iter_mut().for_each(|v| *v = 0.0);
                pcg(matrix, pre, b, x, *opts).map(|_| ())
            }
        }
    }
}
