//! Seeded heterodimer runs on a two-region square for both presets: tau
//! overshoots its equilibrium (focus), amyloid approaches it monotonically
//! (node).

use std::sync::Arc;

use prion_dg::dg::DgSpace;
use prion_dg::mesh::{generate_structured, RegionRule};
use prion_dg::sensitivity::{simulate, ModelKind, Protein, SimSettings};

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
    let settings = SimSettings::default();
    for protein in [Protein::Tau, Protein::Amyloid] {
        let preset = protein.preset();
        let params = preset.means();
        let seed = preset.default_seed(space.mesh());
        let run = simulate(ModelKind::Heterodimer, space.clone(), &params, &seed, &settings)?;
        let q = run.q_avg();
        let times = &run.trajectory.times;
        println!("{protein} ({}), q_max = {}", run.kind, params.q_max);
        for (t, v) in times.iter().zip(&q).step_by(200) {
            println!("  t = {t:4.1}  <q>/q_max = {:.4}", v / params.q_max);
        }
        let peak = q.iter().copied().fold(0.0, f64::max);
        let t90 = times.iter().zip(&q).find(|(_, &v)| v >= 0.9 * params.q_max).map(|(t, _)| *t);
        println!("  peak {:.4} q_max, first reaches 0.9 q_max at {}", peak / params.q_max, years(t90));
    }
    Ok(())
}
