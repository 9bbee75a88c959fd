use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{MeshSource, RunConfig};
use super::csv_out::{fmt_f64, write_csv, write_trajectory};
use super::vtk::{write_vtk, CellField, VertexField};
use crate::dg::DgSpace;
use crate::error::{Error, Result};
use crate::mesh::{agglomerate, save_mesh, PolyMesh};
use crate::models::{
    bifurcation_surface, bifurcation_value, surface_csv, BifurcationAxis, DerivedRates, EquilibriumKind, ModelParams,
};
use crate::sensitivity::{ecdf_compare, run_sweep, simulate, EcdfReport, GammaDist, ModelKind, Protein, RunOutput, SweepResult};

pub const PROVENANCE_FILE: &str = "run.json";
pub const DISTRIBUTION_HEADER: [&str; 7] = ["param", "a", "b", "mean", "variance", "ks", "pass"];
pub const MANIFEST_HEADER: [&str; 5] = ["axis", "value", "kind", "traj_csv", "vtk_dir"];
pub const ROOTS_HEADER: [&str; 2] = ["axis", "root [ug/g]"];

const AXES: [BifurcationAxis; 3] = [BifurcationAxis::PMin, BifurcationAxis::PDelta, BifurcationAxis::QMax];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitArgs {
    pub protein: Protein,
    /// Draws per distribution for the ECDF check.
    pub samples: usize,
    pub seed: u64,
}

/// Closed range sampled at `n` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridRange {
    pub fn points(&self) -> Vec<f64> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationArgs {
    /// Source of the fixed values; tau when absent.
    pub protein: Option<Protein>,
    pub p_min: Option<f64>,
    pub p_delta: Option<f64>,
    pub q_max: Option<f64>,
    /// All three axes when absent.
    pub axis: Option<BifurcationAxis>,
    /// `q_max*` over a `p_min × p_delta` grid.
    pub surface: Option<(GridRange, GridRange)>,
}

impl BifurcationArgs {
    pub fn fixed(&self) -> ModelParams {
        let mut p = self.protein.unwrap_or(Protein::Tau).preset().means();
        p.p_min = self.p_min.unwrap_or(p.p_min);
        p.p_delta = self.p_delta.unwrap_or(p.p_delta);
        p.q_max = self.q_max.unwrap_or(p.q_max);
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshgenArgs {
    pub mesh: MeshSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgglomerateArgs {
    pub input: MeshSource,
    pub target: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Fit(FitArgs),
    Bifurcation(BifurcationArgs),
    Simulate(RunConfig),
    Sweep(RunConfig),
    Meshgen(MeshgenArgs),
    Agglomerate(AgglomerateArgs),
}

/// Everything needed to regenerate a command's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub command: Command,
}

impl Provenance {
    pub fn new(command: Command) -> Self {
        let seed = match &command {
            Command::Fit(a) => Some(a.seed),
            Command::Simulate(c) | Command::Sweep(c) => Some(c.rng_seed),
            Command::Agglomerate(a) => Some(a.seed),
            Command::Bifurcation(_) | Command::Meshgen(_) => None,
        };
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            command,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(PROVENANCE_FILE);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(path, e))
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Output location is given by the caller, so the recorded config does not
/// pin it.
fn record(command: Command, out: &Path) -> Result<()> {
    let command = match command {
        Command::Simulate(mut c) => {
            c.output.dir = PathBuf::from(".");
            Command::Simulate(c)
        }
        Command::Sweep(mut c) => {
            c.output.dir = PathBuf::from(".");
            Command::Sweep(c)
        }
        other => other,
    };
    Provenance::new(command).write(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub param: BifurcationAxis,
    pub dist: GammaDist,
    pub ecdf: EcdfReport,
}

/// Fitted `(a, b)` for the three concentrations of a preset, with an ECDF
/// check on `samples` draws.
pub fn cmd_fit(args: &FitArgs, out: &Path) -> Result<Vec<FitRow>> {
    if args.samples == 0 {
        return Err(Error::Config("fit: sample count must be positive".into()));
    }
    ensure_dir(out)?;
    let preset = args.protein.preset();
    let mut rows = Vec::with_capacity(3);
    for (i, axis) in AXES.into_iter().enumerate() {
        let dist = preset.stat(axis).fit()?;
        let samples = dist.sample(args.samples, args.seed.wrapping_add(i as u64));
        let ecdf = ecdf_compare(&samples, &dist)?;
        rows.push(FitRow { param: axis, dist, ecdf });
    }
    let csv_rows = rows.iter().map(|r| {
        vec![
            r.param.name().to_string(),
            fmt_f64(r.dist.a),
            fmt_f64(r.dist.b),
            fmt_f64(r.dist.mean()),
            fmt_f64(r.dist.variance()),
            fmt_f64(r.ecdf.ks),
            r.ecdf.pass.to_string(),
        ]
    });
    write_csv(&out.join("distribution.csv"), &DISTRIBUTION_HEADER, csv_rows)?;
    record(Command::Fit(args.clone()), out)?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationOutput {
    pub roots: Vec<(BifurcationAxis, f64)>,
    pub surface: Vec<crate::models::SurfacePoint>,
}

pub fn cmd_bifurcation(args: &BifurcationArgs, out: &Path) -> Result<BifurcationOutput> {
    let fixed = args.fixed();
    let axes: Vec<BifurcationAxis> = args.axis.map(|a| vec![a]).unwrap_or_else(|| AXES.to_vec());
    ensure_dir(out)?;
    let roots: Vec<(BifurcationAxis, f64)> = axes
        .iter()
        .flat_map(|&a| bifurcation_value(a, &fixed).into_iter().map(move |v| (a, v)))
        .collect();
    let rows = roots.iter().map(|(a, v)| vec![a.name().to_string(), fmt_f64(*v)]);
    write_csv(&out.join("roots.csv"), &ROOTS_HEADER, rows)?;
    let surface = match &args.surface {
        Some((pm, pd)) => {
            let s = bifurcation_surface(&pm.points(), &pd.points()).map_err(|e| Error::Config(e.to_string()))?;
            let path = out.join("surface.csv");
            fs::write(&path, surface_csv(&s)).map_err(|e| Error::io(path, e))?;
            s
        }
        None => Vec::new(),
    };
    record(Command::Bifurcation(args.clone()), out)?;
    Ok(BifurcationOutput { roots, surface })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RunSummary {
    model: ModelKind,
    params: ModelParams,
    rates: DerivedRates,
    kind: EquilibriumKind,
    final_time: f64,
    final_observables: Vec<f64>,
}

/// Cell averages (and optionally vertex samples) of each field at every
/// stored snapshot.
pub fn write_snapshots(dir: &Path, space: &DgSpace, run: &RunOutput, vertex_values: bool) -> Result<()> {
    ensure_dir(dir)?;
    let n = space.num_dofs();
    let names: &[&str] = match run.model {
        ModelKind::Heterodimer => &["p", "q"],
        ModelKind::Fk => &["c"],
    };
    for (i, snap) in run.trajectory.snapshots.iter().enumerate() {
        let fields: Vec<&[f64]> = snap.state.chunks(n).collect();
        let avgs = fields.iter().map(|f| space.cell_averages(f)).collect::<Result<Vec<_>>>()?;
        let verts = if vertex_values {
            fields.iter().map(|f| space.vertex_values(f)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let cells: Vec<CellField> = names
            .iter()
            .zip(&avgs)
            .map(|(name, v)| CellField { name, values: v })
            .collect();
        let vertex: Vec<VertexField> = names
            .iter()
            .zip(&verts)
            .map(|(name, v)| VertexField { name, values: v })
            .collect();
        let title = format!("{} t = {:?} year", run.model, snap.time);
        write_vtk(&dir.join(format!("snapshot_{i:03}.vtk")), space.mesh(), &title, &cells, &vertex)?;
    }
    Ok(())
}

fn write_run(dir: &Path, space: &DgSpace, run: &RunOutput, vertex_values: bool) -> Result<()> {
    ensure_dir(dir)?;
    write_trajectory(&dir.join("trajectory.csv"), &run.trajectory)?;
    write_snapshots(&dir.join("vtk"), space, run, vertex_values)?;
    let summary = RunSummary {
        model: run.model,
        params: run.params,
        rates: run.params.rates()?,
        kind: run.kind,
        final_time: run.trajectory.times.last().copied().unwrap_or(0.0),
        final_observables: run.trajectory.final_observables().to_vec(),
    };
    let path = dir.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::io(path, e))
}

/// Single seeded run: `trajectory.csv`, `summary.json` and VTK snapshots.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<RunOutput> {
    cfg.validate()?;
    let space = cfg.build_space()?;
    let params = cfg.params();
    let seed = cfg.seed_region(space.mesh());
    let run = simulate(cfg.model.kind, space.clone(), &params, &seed, &cfg.settings()?)?;
    write_run(out, &space, &run, cfg.output.vertex_values)?;
    record(Command::Simulate(cfg.clone()), out)?;
    Ok(run)
}

/// One-at-a-time sweep: a directory per value plus `manifest.csv`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<SweepResult> {
    cfg.validate()?;
    let space = cfg.build_space()?;
    let spec = cfg.sweep_spec(space.mesh())?;
    let result = run_sweep(&spec, space.clone())?;
    ensure_dir(out)?;
    let mut rows = Vec::with_capacity(result.points.len());
    for (i, pt) in result.points.iter().enumerate() {
        let name = format!("point_{i:03}");
        write_run(&out.join(&name), &space, &pt.run, cfg.output.vertex_values)?;
        rows.push(vec![
            result.axis.name().to_string(),
            fmt_f64(pt.value),
            pt.run.kind.to_string(),
            format!("{name}/trajectory.csv"),
            format!("{name}/vtk"),
        ]);
    }
    write_csv(&out.join("manifest.csv"), &MANIFEST_HEADER, rows)?;
    record(Command::Sweep(cfg.clone()), out)?;
    Ok(result)
}

fn write_mesh_outputs(mesh: &PolyMesh, out: &Path) -> Result<()> {
    ensure_dir(out)?;
    save_mesh(mesh, out.join("mesh.txt"))?;
    let areas: Vec<f64> = (0..mesh.num_elements()).map(|k| mesh.area(k)).collect();
    write_vtk(
        &out.join("mesh.vtk"),
        mesh,
        "mesh",
        &[CellField { name: "area", values: &areas }],
        &[],
    )
}

pub fn cmd_meshgen(args: &MeshgenArgs, out: &Path) -> Result<PolyMesh> {
    let mesh = args.mesh.build()?;
    write_mesh_outputs(&mesh, out)?;
    record(Command::Meshgen(args.clone()), out)?;
    Ok(mesh)
}

pub fn cmd_agglomerate(args: &AgglomerateArgs, out: &Path) -> Result<PolyMesh> {
    let tri = args.input.build()?;
    let mesh = agglomerate(&tri, args.target, args.seed)?;
    write_mesh_outputs(&mesh, out)?;
    record(Command::Agglomerate(args.clone()), out)?;
    Ok(mesh)
}

/// Runs `cmd` into `out` and returns a short human-readable report.
pub fn execute(cmd: &Command, out: &Path) -> Result<String> {
    let mut s = String::new();
    match cmd {
        Command::Fit(a) => {
            for r in cmd_fit(a, out)? {
                let _ = writeln!(
                    s,
                    "{:8} a = {:.4}  b = {:.4}  KS = {:.4} (band {:.4}) {}",
                    r.param.name(),
                    r.dist.a,
                    r.dist.b,
                    r.ecdf.ks,
                    r.ecdf.band,
                    if r.ecdf.pass { "pass" } else { "fail" }
                );
            }
        }
        Command::Bifurcation(a) => {
            let o = cmd_bifurcation(a, out)?;
            if o.roots.is_empty() {
                let _ = writeln!(s, "no bifurcation roots");
            }
            for (axis, v) in &o.roots {
                let _ = writeln!(s, "{:8} {v:.4}", axis.name());
            }
            if !o.surface.is_empty() {
                let _ = writeln!(s, "surface: {} points", o.surface.len());
            }
        }
        Command::Simulate(c) => {
            let r = cmd_simulate(c, out)?;
            let names = r.trajectory.names.join(", ");
            let last: Vec<String> = r.trajectory.final_observables().iter().map(|v| format!("{v:.4}")).collect();
            let _ = writeln!(s, "{} ({}): final ({names}) = ({})", r.model, r.kind, last.join(", "));
        }
        Command::Sweep(c) => {
            let r = cmd_sweep(c, out)?;
            for p in &r.points {
                let q = p.run.q_avg();
                let _ = writeln!(
                    s,
                    "{} = {:.4}: {} final q_avg {:.4}",
                    r.axis,
                    p.value,
                    p.run.kind,
                    q.last().copied().unwrap_or(f64::NAN)
                );
            }
        }
        Command::Meshgen(a) => {
            let m = cmd_meshgen(a, out)?;
            let _ = writeln!(s, "{} elements, {} faces", m.num_elements(), m.faces().len());
        }
        Command::Agglomerate(a) => {
            let m = cmd_agglomerate(a, out)?;
            let _ = writeln!(s, "{} elements, {} faces", m.num_elements(), m.faces().len());
        }
    }
    let _ = writeln!(s, "wrote {}", out.display());
    Ok(s)
}

/// Re-executes the command recorded at `record_path` into `out`.
pub fn replay(record_path: impl AsRef<Path>, out: &Path) -> Result<String> {
    let p = Provenance::load(record_path)?;
    execute(&p.command, out)
}
