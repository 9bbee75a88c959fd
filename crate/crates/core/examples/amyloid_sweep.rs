//! One-at-a-time sweep over p_min for the amyloid preset at the default
//! quantile grid; points run in parallel.

use std::sync::Arc;

use prion_dg::dg::DgSpace;
use prion_dg::mesh::{generate_structured, RegionRule};
use prion_dg::models::BifurcationAxis;
use prion_dg::sensitivity::{run_sweep, ModelKind, Protein, SimSettings, SweepSpec, SweepValues};

fn years(t: Option<f64>) -> String {
    t.map_or_else(|| "never".into(), |t| format!("{t:.3} y"))
}

fn main() -> prion_dg::Result<()> {
    let rule = RegionRule::WhiteBelow {
        white_below: 0.05,
        axonal: [1.0, 0.0],
    };
    let mesh = Arc::new(generate_structured(8, 8, 0.1, 0.1, &rule)?);
    let space = Arc::new(DgSpace::new(mesh, 2)?);
    let spec = SweepSpec {
        model: ModelKind::Heterodimer,
        protein: Protein::Amyloid,
        axis: BifurcationAxis::PMin,
        values: SweepValues::Default,
        base: None,
        seed_region: None,
        settings: SimSettings::default(),
    };
    let result = run_sweep(&spec, space)?;
    for pt in &result.points {
        let q = pt.run.q_avg();
        let q_max = pt.run.params.q_max;
        let t90 = pt
            .run
            .trajectory
            .times
            .iter()
            .zip(&q)
            .find(|(_, &v)| v >= 0.9 * q_max)
            .map(|(t, _)| *t);
        println!(
            "p_min = {:7.4}  {:12}  <q>(10) = {:.4}  <q>(40) = {:.4}  t90 = {}",
            pt.value,
            pt.run.kind.to_string(),
            q[400],
            q[q.len() - 1],
            years(t90)
        );
    }
    Ok(())
}
