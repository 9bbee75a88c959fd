use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Protein, SeedRegion};
use crate::dg::DgSpace;
use crate::error::{Error, Result};
use crate::integrator::{solve, FkSystem, HeterodimerSystem, ImexTableau, SolveOptions, Trajectory};
use crate::models::{classify_equilibrium, BifurcationAxis, EquilibriumKind, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Heterodimer,
    Fk,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heterodimer" => Ok(ModelKind::Heterodimer),
            "fk" | "fisher-kolmogorov" => Ok(ModelKind::Fk),
            other => Err(Error::Config(format!("unknown model '{other}' (expected heterodimer or fk)"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Heterodimer => "heterodimer",
            ModelKind::Fk => "fk",
        })
    }
}

/// Numerical settings shared by single runs and sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub eta0: f64,
    pub tableau: ImexTableau,
    pub solve: SolveOptions,
    /// Initial misfolded level inside the seed, relative to `q_max` (or the
    /// FK carrying capacity).
    pub seed_level: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            eta0: 10.0,
            tableau: ImexTableau::default(),
            solve: SolveOptions {
                positivity_limiter: true,
                ..SolveOptions::default()
            },
            seed_level: 0.1,
        }
    }
}

/// Solution of one run. Heterodimer observables are `(⟨p⟩, ⟨q⟩)`; FK
/// observables are `(⟨c⟩, q_max ⟨c⟩)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub model: ModelKind,
    pub params: ModelParams,
    pub kind: EquilibriumKind,
    pub trajectory: Trajectory,
}

impl RunOutput {
    /// `⟨q⟩(t)` in μg/g for either model.
    pub fn q_avg(&self) -> Vec<f64> {
        self.trajectory.series(1)
    }

    /// `(⟨p⟩, ⟨q⟩)` pairs (heterodimer only).
    pub fn phase_space(&self) -> Option<Vec<(f64, f64)>> {
        (self.model == ModelKind::Heterodimer)
            .then(|| self.trajectory.observables.iter().map(|o| (o[0], o[1])).collect())
    }
}

/// `p₀ ≡ p_max`, `q₀ = seed_level · q_max` on the seed; FK `c₀ = seed_level`
/// on the seed.
pub fn initial_state(
    model: ModelKind,
    space: &DgSpace,
    params: &ModelParams,
    seed: &SeedRegion,
    seed_level: f64,
) -> Vec<f64> {
    let indicator = |v: f64| move |_: usize, x: [f64; 2]| if seed.contains(x) { v } else { 0.0 };
    match model {
        ModelKind::Heterodimer => {
            let p = space.constant(params.p_max());
            let q = space.project_elementwise(indicator(seed_level * params.q_max));
            [p, q].concat()
        }
        ModelKind::Fk => space.project_elementwise(indicator(seed_level)),
    }
}

pub fn simulate(
    model: ModelKind,
    space: Arc<DgSpace>,
    params: &ModelParams,
    seed: &SeedRegion,
    settings: &SimSettings,
) -> Result<RunOutput> {
    let report = classify_equilibrium(params)?;
    let y0 = initial_state(model, &space, params, seed, settings.seed_level);
    let trajectory = match model {
        ModelKind::Heterodimer => {
            let sys = HeterodimerSystem::new(space, params, settings.eta0)?;
            solve(&sys, &y0, &settings.tableau, &settings.solve)?
        }
        ModelKind::Fk => {
            let sys = FkSystem::new(space, params, settings.eta0)?;
            let mut t = solve(&sys, &y0, &settings.tableau, &settings.solve)?;
            t.names.push("q_avg".into());
            t.observables.iter_mut().for_each(|o| o.push(params.q_max * o[0]));
            t
        }
    };
    Ok(RunOutput {
        model,
        params: *params,
        kind: report.kind,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "levels", rename_all = "snake_case")]
pub enum SweepValues {
    /// Quantiles 5/25/50/75/95 % of the fitted distribution plus its mean.
    Default,
    Values(Vec<f64>),
    Quantiles(Vec<f64>),
    /// `n` draws from the fitted distribution.
    Samples { n: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: ModelKind,
    pub protein: Protein,
    pub axis: BifurcationAxis,
    pub values: SweepValues,
    /// Values of the non-swept parameters; distribution means when absent.
    pub base: Option<ModelParams>,
    pub seed_region: Option<SeedRegion>,
    pub settings: SimSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub model: ModelKind,
    pub protein: Protein,
    pub axis: BifurcationAxis,
    /// Sorted by swept value.
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub run: RunOutput,
}

impl SweepResult {
    /// Union of two sweeps along the same axis, in value order.
    pub fn merge(mut self, other: SweepResult) -> Result<SweepResult> {
        if (self.model, self.protein, self.axis) != (other.model, other.protein, other.axis) {
            return Err(Error::Sweep(format!(
                "cannot merge a {} {} sweep over {} with a {} {} sweep over {}",
                self.model, self.protein, self.axis, other.model, other.protein, other.axis
            )));
        }
        self.points.extend(other.points);
        self.points.sort_by(|a, b| a.value.total_cmp(&b.value));
        Ok(self)
    }
}

pub const DEFAULT_QUANTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.model == ModelKind::Fk && self.axis != BifurcationAxis::PDelta {
            return Err(Error::Sweep(format!(
                "the FK model depends on the concentrations only through alpha = p_delta * k12; \
                 cannot sweep over {}",
                self.axis
            )));
        }
        match &self.values {
            SweepValues::Values(v) if v.is_empty() || v.iter().any(|&x| !(x > 0.0 && x.is_finite())) => {
                Err(Error::Sweep("sweep values must be positive and non-empty".into()))
            }
            SweepValues::Quantiles(q) if q.is_empty() || q.iter().any(|&x| !(x > 0.0 && x < 1.0)) => {
                Err(Error::Sweep("quantile levels must lie in (0, 1)".into()))
            }
            SweepValues::Samples { n: 0, .. } => Err(Error::Sweep("sample count must be positive".into())),
            _ => Ok(()),
        }
    }

    pub fn base_params(&self) -> ModelParams {
        self.base.unwrap_or_else(|| self.protein.preset().means())
    }

    /// Concrete swept values, ascending.
    pub fn resolve_values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let dist = self.protein.preset().distribution(self.axis)?;
        let mut v = match &self.values {
            SweepValues::Values(v) => v.clone(),
            SweepValues::Quantiles(q) => q.iter().map(|&p| dist.quantile(p)).collect::<Result<_>>()?,
            SweepValues::Samples { n, seed } => dist.sample(*n, *seed),
            SweepValues::Default => {
                let mut v: Vec<f64> = DEFAULT_QUANTILES
                    .iter()
                    .map(|&p| dist.quantile(p))
                    .collect::<Result<_>>()?;
                v.push(dist.mean());
                v
            }
        };
        v.sort_by(f64::total_cmp);
        Ok(v)
    }
}

/// One-at-a-time sweep; points run in parallel and are returned in value
/// order.
pub fn run_sweep(spec: &SweepSpec, space: Arc<DgSpace>) -> Result<SweepResult> {
    let values = spec.resolve_values()?;
    let base = spec.base_params();
    let seed = spec
        .seed_region
        .clone()
        .unwrap_or_else(|| spec.protein.preset().default_seed(space.mesh()));
    let points = values
        .par_iter()
        .map(|&value| {
            let mut params = base;
            spec.axis.set(&mut params, value);
            let run = simulate(spec.model, space.clone(), &params, &seed, &spec.settings)?;
            Ok(SweepPoint { value, run })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        model: spec.model,
        protein: spec.protein,
        axis: spec.axis,
        points,
    })
}
