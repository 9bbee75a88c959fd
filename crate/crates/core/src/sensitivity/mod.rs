//! Parameter distributions, ECDF validation and one-at-a-time sweeps.

mod ecdf;
mod gamma;
mod presets;
mod sweep;

pub use ecdf::{dkw_half_width, ecdf_compare, ks_statistic, EcdfReport, DKW_ALPHA};
pub use gamma::{fit_gamma, GammaDist};
pub use presets::{bounding_box, ParamStats, Protein, ProteinPreset, SeedRegion};
pub use sweep::{
    initial_state, run_sweep, simulate, ModelKind, RunOutput, SimSettings, SweepPoint, SweepResult, SweepSpec,
    SweepValues, DEFAULT_QUANTILES,
};
