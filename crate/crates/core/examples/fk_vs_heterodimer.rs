//! FK against the heterodimer model for tau across p_delta: time for <q>
//! to reach half of q_max.

use std::sync::Arc;

use prion_dg::dg::DgSpace;
use prion_dg::mesh::{generate_structured, RegionRule};
use prion_dg::models::bifurcation_value;
use prion_dg::models::BifurcationAxis;
use prion_dg::sensitivity::{simulate, ModelKind, Protein, RunOutput, SimSettings};

fn years(t: Option<f64>) -> String {
    t.map_or_else(|| "never".into(), |t| format!("{t:.3} y"))
}

fn t_half(run: &RunOutput) -> Option<f64> {
    let half = 0.5 * run.params.q_max;
    let q = run.q_avg();
    run.trajectory.times.iter().zip(&q).find(|(_, &v)| v >= half).map(|(t, _)| *t)
}

fn main() -> prion_dg::Result<()> {
    let rule = RegionRule::WhiteBelow {
        white_below: 0.05,
        axonal: [1.0, 0.0],
    };
    let mesh = Arc::new(generate_structured(8, 8, 0.1, 0.1, &rule)?);
    let space = Arc::new(DgSpace::new(mesh, 2)?);
    let preset = Protein::Tau.preset();
    let seed = preset.default_seed(space.mesh());
    let settings = SimSettings::default();
    let threshold = bifurcation_value(BifurcationAxis::PDelta, &preset.means());
    println!("node/focus threshold p_delta* = {threshold:.4?}");
    for p_delta in [0.9, 1.0, 1.1, 2.0, 3.5042] {
        let mut params = preset.means();
        params.p_delta = p_delta;
        let het = simulate(ModelKind::Heterodimer, space.clone(), &params, &seed, &settings)?;
        let fk = simulate(ModelKind::Fk, space.clone(), &params, &seed, &settings)?;
        println!(
            "p_delta = {p_delta:6.4} ({:11}) t_half heterodimer {}  fk {}",
            het.kind.to_string(),
            years(t_half(&het)),
            years(t_half(&fk))
        );
    }
    Ok(())
}
