//! Fisher–Kolmogorov with zero diffusion and a constant initial state
//! against the closed-form logistic curve, plus a time-step refinement
//! study for each shipped tableau.

use std::sync::Arc;

use prion_dg::dg::DgSpace;
use prion_dg::integrator::{solve, FkSystem, ImexTableau, SolveOptions};
use prion_dg::mesh::{generate_structured, RegionRule};

const C0: f64 = 0.1;
const ALPHA: f64 = 3.5042 * 0.2;

fn logistic(t: f64) -> f64 {
    let e = (ALPHA * t).exp();
    C0 * e / (1.0 + C0 * (e - 1.0))
}

fn max_error(space: &Arc<DgSpace>, tableau: &ImexTableau, dt: f64) -> prion_dg::Result<f64> {
    let ne = space.num_elements();
    let sys = FkSystem::with_rate(space.clone(), &vec![[[0.0; 2]; 2]; ne], ALPHA, 10.0)?;
    let opts = SolveOptions {
        dt,
        ..SolveOptions::default()
    };
    let traj = solve(&sys, &space.constant(C0), tableau, &opts)?;
    Ok(traj
        .times
        .iter()
        .zip(traj.series(0))
        .map(|(&t, c)| (c - logistic(t)).abs())
        .fold(0.0, f64::max))
}

fn main() -> prion_dg::Result<()> {
    let mesh = Arc::new(generate_structured(4, 4, 1.0, 1.0, &RegionRule::AllGrey)?);
    let space = Arc::new(DgSpace::new(mesh, 2)?);
    for tableau in [ImexTableau::imex_euler(), ImexTableau::ars222(), ImexTableau::ars343()] {
        println!("{} (design order {})", tableau.name, tableau.order);
        let mut prev: Option<f64> = None;
        for dt in [0.2, 0.1, 0.05, 0.025] {
            let e = max_error(&space, &tableau, dt)?;
            let rate = prev.map_or(f64::NAN, |p| (p / e).log2());
            println!("  dt = {dt:<6} max |c - logistic| = {e:.3e}  rate {rate:.2}");
            prev = Some(e);
        }
    }
    Ok(())
}
