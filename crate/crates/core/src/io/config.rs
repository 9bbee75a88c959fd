use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dg::{basis::MAX_DEGREE, DgSpace};
use crate::error::{Error, Result};
use crate::integrator::{ImexTableau, SolveOptions};
use crate::linalg::SolverKind;
use crate::mesh::{
    agglomerate, generate_structured, load_mesh, triangulated_disc, triangulated_rectangle, PolyMesh, RegionRule,
};
use crate::models::{BifurcationAxis, ModelParams, DEFAULT_D_AXN, DEFAULT_D_EXT, DEFAULT_K12};
use crate::sensitivity::{ModelKind, Protein, SeedRegion, SimSettings, SweepSpec, SweepValues};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Quads,
    Triangles,
}

/// Where the mesh comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshSource {
    File {
        path: PathBuf,
    },
    Structured {
        nx: usize,
        ny: usize,
        width: f64,
        height: f64,
        #[serde(default = "default_cells")]
        cells: GridKind,
        #[serde(default)]
        regions: RegionRule,
    },
    Disc {
        rings: usize,
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
        #[serde(default)]
        regions: RegionRule,
    },
    /// Triangulated disc merged into roughly `target` polygons.
    AgglomeratedDisc {
        rings: usize,
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
        target: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        regions: RegionRule,
    },
}

fn default_cells() -> GridKind {
    GridKind::Quads
}

impl Default for MeshSource {
    /// Two-region square of side 1 mm: white matter with horizontal fibres
    /// in the lower half, grey matter above.
    fn default() -> Self {
        MeshSource::Structured {
            nx: 8,
            ny: 8,
            width: 0.1,
            height: 0.1,
            cells: GridKind::Quads,
            regions: RegionRule::WhiteBelow {
                white_below: 0.05,
                axonal: [1.0, 0.0],
            },
        }
    }
}

impl PartialEq for MeshSource {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_value(self).ok() == serde_json::to_value(other).ok()
    }
}

impl MeshSource {
    pub fn build(&self) -> Result<PolyMesh> {
        match self {
            MeshSource::File { path } => load_mesh(path),
            MeshSource::Structured {
                nx,
                ny,
                width,
                height,
                cells,
                regions,
            } => match cells {
                GridKind::Quads => generate_structured(*nx, *ny, *width, *height, regions),
                GridKind::Triangles => triangulated_rectangle(*nx, *ny, *width, *height, regions),
            },
            MeshSource::Disc {
                rings,
                radius,
                center,
                regions,
            } => triangulated_disc(*rings, *radius, *center, regions),
            MeshSource::AgglomeratedDisc {
                rings,
                radius,
                center,
                target,
                seed,
                regions,
            } => agglomerate(&triangulated_disc(*rings, *radius, *center, regions)?, *target, *seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub protein: Protein,
    /// Overrides of the preset means.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<f64>,
    pub k12: f64,
    pub d_ext: f64,
    pub d_axn: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            kind: ModelKind::Heterodimer,
            protein: Protein::Tau,
            p_min: None,
            p_delta: None,
            q_max: None,
            k12: DEFAULT_K12,
            d_ext: DEFAULT_D_EXT,
            d_axn: DEFAULT_D_AXN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscretizationSection {
    pub degree: usize,
    pub eta0: f64,
    pub solver: SolverKind,
}

impl Default for DiscretizationSection {
    fn default() -> Self {
        Self {
            degree: 5,
            eta0: 10.0,
            solver: SolverKind::Direct,
        }
    }
}

/// A shipped tableau by name, or explicit coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableauSpec {
    Named(String),
    Custom(ImexTableau),
}

impl TableauSpec {
    pub fn resolve(&self) -> Result<ImexTableau> {
        let t = match self {
            TableauSpec::Named(n) => ImexTableau::by_name(n).map_err(|e| Error::Config(e.to_string()))?,
            TableauSpec::Custom(t) => t.clone(),
        };
        t.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub t_end: f64,
    pub tableau: TableauSpec,
    pub snapshots: Vec<f64>,
    pub positivity_limiter: bool,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            dt: 0.025,
            t_end: 40.0,
            tableau: TableauSpec::Named(ImexTableau::default().name),
            snapshots: vec![0.0, 10.0, 20.0, 30.0, 40.0],
            positivity_limiter: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeedSection {
    /// Preset default disc when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<SeedRegion>,
    pub level: f64,
}

impl Default for SeedSection {
    fn default() -> Self {
        Self { region: None, level: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Also write per-element vertex samples to the VTK snapshots.
    pub vertex_values: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            vertex_values: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: BifurcationAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantiles: Option<Vec<f64>>,
    /// Monte Carlo draws from the fitted distribution, seeded by `rng_seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mesh: MeshSource,
    pub model: ModelSection,
    pub discretization: DiscretizationSection,
    pub time: TimeSection,
    pub seed: SeedSection,
    pub output: OutputSection,
    pub rng_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let c: Self = toml::from_str(s).map_err(config_err)?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(config_err)?;
        c.validate()?;
        Ok(c)
    }

    /// Reads `.json` files as JSON and anything else as TOML.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let mut c = if is_json {
            Self::from_json_str(&text)?
        } else {
            Self::from_toml_str(&text)?
        };
        // mesh files are looked up next to the config
        if let MeshSource::File { path: mesh } = &mut c.mesh {
            if mesh.is_relative() {
                if let Some(dir) = path.parent() {
                    *mesh = dir.join(&*mesh);
                }
            }
        }
        Ok(c)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(config_err)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        let d = &self.discretization;
        let t = &self.time;
        if !(m.k12 > 0.0) {
            return Err(config_err(format!("model.k12 must be positive, got {}", m.k12)));
        }
        if !(m.d_ext >= 0.0 && m.d_axn >= 0.0) {
            return Err(config_err("diffusion coefficients must be non-negative"));
        }
        for (name, v) in [("p_min", m.p_min), ("p_delta", m.p_delta), ("q_max", m.q_max)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(config_err(format!("model.{name} must be non-negative, got {v}")));
                }
            }
        }
        if d.degree == 0 || d.degree > MAX_DEGREE {
            return Err(config_err(format!(
                "discretization.degree must lie in 1..={MAX_DEGREE}, got {}",
                d.degree
            )));
        }
        if !(d.eta0 > 0.0) {
            return Err(config_err(format!("discretization.eta0 must be positive, got {}", d.eta0)));
        }
        if !(t.dt > 0.0 && t.t_end > 0.0) {
            return Err(config_err("time.dt and time.t_end must be positive"));
        }
        let steps = (t.t_end / t.dt).round();
        if (steps * t.dt - t.t_end).abs() > 1e-9 * t.t_end {
            return Err(config_err(format!("time.t_end = {} is not a multiple of time.dt = {}", t.t_end, t.dt)));
        }
        if let Some(s) = t.snapshots.iter().find(|&&s| !(s >= 0.0 && s <= t.t_end)) {
            return Err(config_err(format!("snapshot time {s} outside [0, {}]", t.t_end)));
        }
        if !(self.seed.level >= 0.0) {
            return Err(config_err("seed.level must be non-negative"));
        }
        t.tableau.resolve()?;
        if let Some(sw) = &self.sweep {
            let given = [sw.values.is_some(), sw.quantiles.is_some(), sw.samples.is_some()];
            if given.iter().filter(|&&g| g).count() > 1 {
                return Err(config_err("sweep: give at most one of values, quantiles, samples"));
            }
        }
        Ok(())
    }

    /// Preset means with any overrides, `k12` and diffusion applied.
    pub fn params(&self) -> ModelParams {
        let m = &self.model;
        let mut p = m.protein.preset().means();
        p.p_min = m.p_min.unwrap_or(p.p_min);
        p.p_delta = m.p_delta.unwrap_or(p.p_delta);
        p.q_max = m.q_max.unwrap_or(p.q_max);
        p.k12 = m.k12;
        p.d_ext = m.d_ext;
        p.d_axn = m.d_axn;
        p
    }

    pub fn settings(&self) -> Result<SimSettings> {
        Ok(SimSettings {
            eta0: self.discretization.eta0,
            tableau: self.time.tableau.resolve()?,
            solve: SolveOptions {
                dt: self.time.dt,
                t_end: self.time.t_end,
                snapshot_times: self.time.snapshots.clone(),
                solver: self.discretization.solver,
                positivity_limiter: self.time.positivity_limiter,
            },
            seed_level: self.seed.level,
        })
    }

    pub fn build_space(&self) -> Result<Arc<DgSpace>> {
        let mesh = Arc::new(self.mesh.build()?);
        Ok(Arc::new(DgSpace::new(mesh, self.discretization.degree)?))
    }

    pub fn seed_region(&self, mesh: &PolyMesh) -> SeedRegion {
        self.seed
            .region
            .clone()
            .unwrap_or_else(|| self.model.protein.preset().default_seed(mesh))
    }

    pub fn sweep_spec(&self, mesh: &PolyMesh) -> Result<SweepSpec> {
        let sw = self
            .sweep
            .as_ref()
            .ok_or_else(|| config_err("missing [sweep] section"))?;
        let values = match (&sw.values, &sw.quantiles, sw.samples) {
            (Some(v), _, _) => SweepValues::Values(v.clone()),
            (_, Some(q), _) => SweepValues::Quantiles(q.clone()),
            (_, _, Some(n)) => SweepValues::Samples { n, seed: self.rng_seed },
            _ => SweepValues::Default,
        };
        let spec = SweepSpec {
            model: self.model.kind,
            protein: self.model.protein,
            axis: sw.axis,
            values,
            base: Some(self.params()),
            seed_region: Some(self.seed_region(mesh)),
            settings: self.settings()?,
        };
        spec.validate()?;
        Ok(spec)
    }
}
