//! Driving a run from a TOML config, as the `simulate` subcommand does, and
//! replaying it from its provenance record.

use prion_dg::io::{cmd_simulate, replay, RunConfig, PROVENANCE_FILE};

const CONFIG: &str = r#"
[mesh]
kind = "structured"
nx = 6
ny = 6
width = 0.1
height = 0.1
regions = { kind = "white_below", white_below = 0.05, axonal = [1.0, 0.0] }

[model]
kind = "fk"
protein = "tau"

[discretization]
degree = 2

[time]
t_end = 10.0
tableau = "ars222"
snapshots = [0.0, 5.0, 10.0]
"#;

fn main() -> prion_dg::Result<()> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let dir = std::env::temp_dir().join("prion-dg-run-config");
    let run = cmd_simulate(&cfg, &dir.join("a"))?;
    println!("final <c> = {:.6}", run.trajectory.final_observables()[0]);
    print!("{}", replay(dir.join("a").join(PROVENANCE_FILE), &dir.join("b"))?);
    for f in ["trajectory.csv", "vtk/snapshot_002.vtk", PROVENANCE_FILE] {
        let same = std::fs::read(dir.join("a").join(f)).ok() == std::fs::read(dir.join("b").join(f)).ok();
        println!("{f}: identical = {same}");
    }
    Ok(())
}
