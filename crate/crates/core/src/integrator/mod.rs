//! Linearly implicit IMEX Runge–Kutta time integration.

mod stepper;
mod system;
mod tableau;

use serde::{Deserialize, Serialize};

pub use stepper::ImexStepper;
pub use system::{FkSystem, HeterodimerSystem, SemiLinearSystem};
pub use tableau::ImexTableau;

use crate::error::{Error, Result};
use crate::linalg::SolverKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub solver: SolverKind,
    /// Apply the system's positivity limiter after every step.
    #[serde(default)]
    pub positivity_limiter: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            dt: 0.025,
            t_end: 40.0,
            snapshot_times: Vec::new(),
            solver: SolverKind::Direct,
            positivity_limiter: false,
        }
    }
}

/// Space averages at every step plus coefficient snapshots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    /// `observables[n][k]` is observable `k` at `times[n]`
    pub observables: Vec<Vec<f64>>,
    pub snapshots: Vec<Snapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub state: Vec<f64>,
}

impl Trajectory {
    pub fn series(&self, k: usize) -> Vec<f64> {
        self.observables.iter().map(|o| o[k]).collect()
    }

    pub fn final_observables(&self) -> &[f64] {
        self.observables.last().map(|v| v.as_slice()).unwrap_or(&[])
    }
}

fn grid_index(t: f64, dt: f64, what: &str) -> Result<usize> {
    let k = (t / dt).round();
    if !(k >= 0.0) || (k * dt - t).abs() > 1e-9 * t.abs().max(1.0) {
        return Err(Error::invalid(format!("{what} {t} is not a multiple of the time step {dt}")));
    }
    Ok(k as usize)
}

/// Integrates `system` from `y0` over `[0, t_end]`.
pub fn solve<S: SemiLinearSystem + ?Sized>(
    system: &S,
    y0: &[f64],
    tableau: &ImexTableau,
    opts: &SolveOptions,
) -> Result<Trajectory> {
    if y0.len() != system.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            got: y0.len(),
        });
    }
    if !(opts.t_end > 0.0) {
        return Err(Error::invalid(format!("final time must be positive, got {}", opts.t_end)));
    }
    let steps = grid_index(opts.t_end, opts.dt, "final time")?;
    let mut snap_steps = Vec::with_capacity(opts.snapshot_times.len());
    for &t in &opts.snapshot_times {
        let k = grid_index(t, opts.dt, "snapshot time")?;
        if k > steps {
            return Err(Error::invalid(format!("snapshot time {t} exceeds the final time {}", opts.t_end)));
        }
        snap_steps.push(k);
    }
    let mut stepper = ImexStepper::new(system, tableau.clone(), opts.dt, opts.solver)?;
    let mut y = y0.to_vec();
    if opts.positivity_limiter {
        system.limit_positivity(&mut y);
    }
    let mut traj = Trajectory {
        names: system.observable_names(),
        times: Vec::with_capacity(steps + 1),
        observables: Vec::with_capacity(steps + 1),
        snapshots: Vec::new(),
    };
    for n in 0..=steps {
        let t = n as f64 * opts.dt;
        if n > 0 {
            stepper.step(&mut y, (n - 1) as f64 * opts.dt)?;
            if opts.positivity_limiter {
                system.limit_positivity(&mut y);
            }
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumericalAbort { time: t });
            }
        }
        traj.times.push(t);
        traj.observables.push(system.observables(&y));
        for _ in snap_steps.iter().filter(|&&k| k == n) {
            traj.snapshots.push(Snapshot { time: t, state: y.clone() });
        }
    }
    Ok(traj)
}
