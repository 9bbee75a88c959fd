//! Run configuration, CSV/VTK writers, provenance records and the command
//! implementations behind the binary.

mod commands;
mod config;
mod csv_out;
pub mod vtk;

pub use commands::{
    cmd_agglomerate, cmd_bifurcation, cmd_fit, cmd_meshgen, cmd_simulate, cmd_sweep, execute, replay,
    write_snapshots, AgglomerateArgs, BifurcationArgs, BifurcationOutput, Command, FitArgs, FitRow, GridRange,
    MeshgenArgs, Provenance, DISTRIBUTION_HEADER, MANIFEST_HEADER, PROVENANCE_FILE, ROOTS_HEADER,
};
pub use config::{
    DiscretizationSection, GridKind, MeshSource, ModelSection, OutputSection, RunConfig, SeedSection, SweepSection,
    TableauSpec, TimeSection,
};
pub use csv_out::{fmt_f64, observable_label, trajectory_header, write_csv, write_trajectory};
