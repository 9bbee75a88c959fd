use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prion_dg::io::{
    execute, replay, AgglomerateArgs, BifurcationArgs, Command, FitArgs, GridKind, GridRange, MeshSource,
    MeshgenArgs, RunConfig,
};
use prion_dg::mesh::RegionRule;
use prion_dg::models::BifurcationAxis;
use prion_dg::sensitivity::Protein;
use prion_dg::Error;

#[derive(Parser)]
#[command(name = "prion-dg", version, about = "Polygonal DG solver for protein-spreading models")]
#[command(args_conflicts_with_subcommands = true, arg_required_else_help = true)]
struct Cli {
    /// Re-run the command recorded in a run.json into --out.
    #[arg(long, value_name = "RUN_JSON", requires = "out")]
    replay: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit Gamma distributions to a protein preset and check them by ECDF.
    Fit {
        #[arg(long)]
        protein: Protein,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out/fit")]
        out: PathBuf,
    },
    /// Node/focus transition values, optionally over a surface grid.
    Bifurcation {
        #[arg(long)]
        protein: Option<Protein>,
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        p_delta: Option<f64>,
        #[arg(long)]
        q_max: Option<f64>,
        #[arg(long)]
        axis: Option<BifurcationAxis>,
        /// p_min grid as LO:HI:N (needs --surface-p-delta).
        #[arg(long, value_parser = parse_range, requires = "surface_p_delta")]
        surface_p_min: Option<GridRange>,
        #[arg(long, value_parser = parse_range, requires = "surface_p_min")]
        surface_p_delta: Option<GridRange>,
        #[arg(long, default_value = "out/bifurcation")]
        out: PathBuf,
    },
    /// Single run from a TOML or JSON config.
    Simulate {
        config: PathBuf,
        /// Overrides output.dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweep from a config with a [sweep] section.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic mesh.
    Meshgen {
        #[command(flatten)]
        mesh: MeshOpts,
        #[arg(long, default_value = "out/mesh")]
        out: PathBuf,
    },
    /// Merge a triangle mesh into polygons.
    Agglomerate {
        /// Mesh file; a triangulated disc (see --rings) when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        rings: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out/agglomerate")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Quads,
    Triangles,
    Disc,
}

#[derive(Args)]
struct MeshOpts {
    #[arg(long, value_enum, default_value = "quads")]
    shape: Shape,
    #[arg(long, default_value_t = 8)]
    nx: usize,
    #[arg(long, default_value_t = 8)]
    ny: usize,
    #[arg(long, default_value_t = 0.1)]
    width: f64,
    #[arg(long, default_value_t = 0.1)]
    height: f64,
    #[arg(long, default_value_t = 6)]
    rings: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// White matter below this height, fibres along x.
    #[arg(long)]
    white_below: Option<f64>,
}

impl MeshOpts {
    fn source(&self) -> MeshSource {
        let regions = match self.white_below {
            Some(y) => RegionRule::WhiteBelow {
                white_below: y,
                axonal: [1.0, 0.0],
            },
            None => RegionRule::AllGrey,
        };
        let structured = |cells| MeshSource::Structured {
            nx: self.nx,
            ny: self.ny,
            width: self.width,
            height: self.height,
            cells,
            regions,
        };
        match self.shape {
            Shape::Quads => structured(GridKind::Quads),
            Shape::Triangles => structured(GridKind::Triangles),
            Shape::Disc => MeshSource::Disc {
                rings: self.rings,
                radius: self.radius,
                center: [0.0, 0.0],
                regions,
            },
        }
    }
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected LO:HI:N, got '{s}'"));
    };
    Ok(GridRange {
        lo: lo.parse().map_err(|e| format!("{e}"))?,
        hi: hi.parse().map_err(|e| format!("{e}"))?,
        n: n.parse().map_err(|e| format!("{e}"))?,
    })
}

fn command(cmd: Cmd) -> Result<(Command, PathBuf), Error> {
    Ok(match cmd {
        Cmd::Fit {
            protein,
            samples,
            seed,
            out,
        } => (Command::Fit(FitArgs { protein, samples, seed }), out),
        Cmd::Bifurcation {
            protein,
            p_min,
            p_delta,
            q_max,
            axis,
            surface_p_min,
            surface_p_delta,
            out,
        } => (
            Command::Bifurcation(BifurcationArgs {
                protein,
                p_min,
                p_delta,
                q_max,
                axis,
                surface: surface_p_min.zip(surface_p_delta),
            }),
            out,
        ),
        Cmd::Simulate { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let out = out.unwrap_or_else(|| cfg.output.dir.clone());
            (Command::Simulate(cfg), out)
        }
        Cmd::Sweep { config, out } => {
            let cfg = RunConfig::load(&config)?;
            if cfg.sweep.is_none() {
                return Err(Error::Config(format!("{}: missing [sweep] section", config.display())));
            }
            let out = out.unwrap_or_else(|| cfg.output.dir.clone());
            (Command::Sweep(cfg), out)
        }
        Cmd::Meshgen { mesh, out } => (Command::Meshgen(MeshgenArgs { mesh: mesh.source() }), out),
        Cmd::Agglomerate {
            input,
            rings,
            radius,
            target,
            seed,
            out,
        } => {
            let input = match input {
                Some(path) => MeshSource::File { path },
                None => MeshSource::Disc {
                    rings,
                    radius,
                    center: [0.0, 0.0],
                    regions: RegionRule::AllGrey,
                },
            };
            (Command::Agglomerate(AgglomerateArgs { input, target, seed }), out)
        }
    })
}

fn run(cli: Cli) -> Result<String, Error> {
    if let Some(record) = cli.replay {
        let out = cli.out.expect("clap enforces --out with --replay");
        return replay(record, &out);
    }
    let cmd = cli.cmd.expect("clap requires a subcommand");
    let (cmd, out) = command(cmd)?;
    execute(&cmd, &out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
