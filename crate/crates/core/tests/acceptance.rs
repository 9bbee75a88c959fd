//! Acceptance criteria, one line each. Exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command as Process;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prion_dg::dg::{assemble_mass, assemble_stiffness, DgSpace};
use prion_dg::integrator::{solve, FkSystem, HeterodimerSystem, ImexTableau, SolveOptions};
use prion_dg::linalg::EnvelopeCholesky;
use prion_dg::mesh::{triangulated_rectangle, RegionRule};
use prion_dg::models::{
    bifurcation_value, classify_equilibrium, diffusion_field, BifurcationAxis, EquilibriumKind, ModelParams,
};
use prion_dg::sensitivity::{ecdf_compare, fit_gamma, simulate, ModelKind, Protein, SimSettings};

use common::*;

// tolerances as stated by each criterion
const THRESHOLD_TOL: f64 = 1e-3;
const THRESHOLD_TIME_MS: f64 = 1.0;
const TABLE_TOL: f64 = 5e-4;
const BAND_REL: f64 = 1e-12;
const DRAWS: usize = 10_000;
const ODE_TOL: f64 = 1e-6;
const ODE_TIME_S: f64 = 10.0;
const LOGISTIC_TOL: f64 = 1e-6;
const SLOPE_TOL: f64 = 0.2;
const CONVERGENCE_TIME_S: f64 = 120.0;
const CONSERVATION_TOL: f64 = 1e-10;
const CONSERVATION_STEPS: usize = 1600;
const OVERSHOOT: f64 = 0.01;
const T90_WINDOW: (f64, f64) = (13.0 - 3.0, 17.0 + 3.0);
const P_DELTA_STAR_TAU: f64 = 1.1177;
const ECDF_SAMPLES: usize = 500;
const ECDF_SEEDS: u64 = 200;
const ECDF_RATE: f64 = 0.93;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_bifurcation_thresholds() -> Outcome {
    let tau = Protein::Tau.preset().means();
    let amy = Protein::Amyloid.preset().means();
    let cases = [
        ("q_max* tau", BifurcationAxis::QMax, tau, 3.4541),
        ("q_max* amyloid", BifurcationAxis::QMax, amy, 2.7644),
        ("p_delta* tau", BifurcationAxis::PDelta, tau, 1.1177),
        ("p_delta* amyloid", BifurcationAxis::PDelta, amy, 17.6845),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, axis, p, expect) in cases {
        let reps = 1000;
        let start = Instant::now();
        let mut roots = Vec::new();
        for _ in 0..reps {
            roots = std::hint::black_box(bifurcation_value(axis, std::hint::black_box(&p)));
        }
        let ms = start.elapsed().as_secs_f64() * 1e3 / reps as f64;
        let got = roots.first().copied().unwrap_or(f64::NAN);
        let ok = roots.len() == 1 && (got - expect).abs() <= THRESHOLD_TOL && ms < THRESHOLD_TIME_MS;
        pass &= ok;
        parts.push(format!("{name} {got:.4} (expected {expect}, {ms:.1e} ms)"));
    }
    outcome(pass, parts.join("; "))
}

fn c2_distribution_calibration() -> Outcome {
    // (mean, variance, a, b) as printed
    let rows = [
        ("tau p_min", 4.4557, 3.0400, 5.5307, 1.4657),
        ("tau p_delta", 3.5042, 1.8217, 5.7406, 1.9236),
        ("tau q_max", 0.7168, 0.2737, 0.8772, 2.6189),
        ("amyloid p_min", 5.7400, 2.2464, 13.667, 2.5552),
        ("amyloid p_delta", 3.0500, 8.2143, 0.1325, 0.3713),
        ("amyloid q_max", 13.086, 101.33, 0.6884, 0.1291),
    ];
    let mut pass = true;
    let mut worst = Vec::new();
    for (name, mean, var, a, b) in rows {
        let d = fit_gamma(mean, var).unwrap();
        let (ea, eb) = ((d.a - a).abs(), (d.b - b).abs());
        if ea > TABLE_TOL || eb > TABLE_TOL {
            pass = false;
            worst.push(format!("{name}: a {:.5} vs {a} (|diff| {ea:.2e}), b {:.5} vs {b}", d.a, d.b));
        }
    }
    let detail = if pass {
        "all six (a, b) rows within 5e-4".to_string()
    } else {
        worst.join("; ")
    };
    outcome(pass, detail)
}

fn jacobian_at_e2(p: &ModelParams) -> Matrix2<f64> {
    let (pm, pd, qm, k12) = (p.p_min, p.p_delta, p.q_max, p.k12);
    let k1 = pm * qm * k12 / pd;
    let kt = pm * k12;
    Matrix2::new(-k1 - k12 * qm, -k12 * pm, k12 * qm, -kt + k12 * pm)
}

fn c3_classification() -> Outcome {
    let tau = classify_equilibrium(&Protein::Tau.preset().means()).unwrap().kind;
    let amy = classify_equilibrium(&Protein::Amyloid.preset().means()).unwrap().kind;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut disagree = 0;
    let mut banded = 0;
    let (mut foci, mut nodes) = (0, 0);
    for _ in 0..DRAWS {
        let draw = |rng: &mut ChaCha8Rng| 10f64.powf(rng.random_range(-2.0..2.0));
        let mut p = ModelParams::new(draw(&mut rng), draw(&mut rng), draw(&mut rng));
        p.k12 = rng.random_range(0.05..1.0);
        let g = (p.p_min + p.p_delta).powi(2) * p.q_max - 4.0 * p.p_min * p.p_delta.powi(2);
        let scale = ((p.p_min + p.p_delta).powi(2) * p.q_max).max(4.0 * p.p_min * p.p_delta.powi(2));
        if g.abs() < BAND_REL * scale {
            banded += 1;
            continue;
        }
        let j = jacobian_at_e2(&p);
        let disc = j.trace().powi(2) - 4.0 * j.determinant();
        let complex = j.complex_eigenvalues().iter().any(|z| z.im != 0.0);
        let kind = classify_equilibrium(&p).unwrap().kind;
        let expect = if disc < 0.0 {
            EquilibriumKind::StableFocus
        } else {
            EquilibriumKind::StableNode
        };
        if kind == EquilibriumKind::StableFocus {
            foci += 1;
        } else {
            nodes += 1;
        }
        if kind != expect || complex != (disc < 0.0) {
            disagree += 1;
        }
    }
    let pass = tau == EquilibriumKind::StableFocus && amy == EquilibriumKind::StableNode && disagree == 0;
    outcome(
        pass,
        format!(
            "tau {tau}, amyloid {amy}; {DRAWS} draws ({foci} foci, {nodes} nodes, {banded} in band): {disagree} disagreements"
        ),
    )
}

fn c4_ode_limit() -> Outcome {
    let space = unit_square_space(10, 2);
    let zero = zero_diffusion(&space);
    let opts = SolveOptions::default();
    let tableau = ImexTableau::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for protein in [Protein::Tau, Protein::Amyloid] {
        let p = protein.preset().means();
        let sys = HeterodimerSystem::with_diffusion(space.clone(), &p, &zero, 10.0).unwrap();
        let y0 = sys
            .stack(&space.constant(p.p_max()), &space.constant(0.1 * p.q_max))
            .unwrap();
        let start = Instant::now();
        let traj = solve(&sys, &y0, &tableau, &opts).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let oracle = rk4_adaptive(&heterodimer_kinetics(&p), &[p.p_max(), 0.1 * p.q_max], &traj.times, 1e-14);
        let err = traj
            .observables
            .iter()
            .zip(&oracle)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        pass &= err <= ODE_TOL && secs < ODE_TIME_S;
        parts.push(format!("heterodimer {protein} {err:.2e} ({secs:.2} s)"));
    }
    let p = Protein::Tau.preset().means();
    let alpha = p.p_delta * p.k12;
    let sys = FkSystem::with_rate(space.clone(), &zero, alpha, 10.0).unwrap();
    let start = Instant::now();
    let traj = solve(&sys, &space.constant(0.1), &tableau, &opts).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let oracle = rk4_adaptive(&logistic_kinetics(alpha), &[0.1], &traj.times, 1e-14);
    let err = traj
        .series(0)
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b[0]).abs())
        .fold(0.0, f64::max);
    pass &= err <= ODE_TOL && secs < ODE_TIME_S;
    parts.push(format!("fk {err:.2e} ({secs:.2} s)"));
    outcome(pass, format!("{} [{}, dt 0.025, 100 elements, l = 2]", parts.join("; "), tableau.name))
}

fn logistic_error(tableau: &ImexTableau, dt: f64) -> f64 {
    let space = unit_square_space(4, 2);
    let alpha = 3.5042 * 0.2;
    let c0 = 0.1;
    let sys = FkSystem::with_rate(space.clone(), &zero_diffusion(&space), alpha, 10.0).unwrap();
    let opts = SolveOptions {
        dt,
        ..SolveOptions::default()
    };
    let traj = solve(&sys, &space.constant(c0), tableau, &opts).unwrap();
    traj.times
        .iter()
        .zip(traj.series(0))
        .map(|(&t, c)| {
            let e = (alpha * t).exp();
            (c - c0 * e / (1.0 + c0 * (e - 1.0))).abs()
        })
        .fold(0.0, f64::max)
}

fn c5_logistic_and_order() -> Outcome {
    let default = ImexTableau::default();
    let err = logistic_error(&default, 0.025);
    let order2 = ImexTableau::ars222();
    let errs: Vec<f64> = [0.2, 0.1, 0.05, 0.025].iter().map(|&dt| logistic_error(&order2, dt)).collect();
    let slopes: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = err <= LOGISTIC_TOL && slopes.iter().all(|s| (s - 2.0).abs() <= SLOPE_TOL);
    outcome(
        pass,
        format!(
            "max |c - logistic| = {err:.2e} ({}, dt 0.025); {} slopes {:.2?} (error {:.2e} at dt 0.025)",
            default.name, order2.name, slopes, errs[3]
        ),
    )
}

fn c6_dg_convergence() -> Outcome {
    let exact = |p: [f64; 2]| (PI * p[0]).cos() * (PI * p[1]).cos();
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for degree in 1..=3usize {
        let mut errs = Vec::new();
        for n in [4, 8, 16, 32] {
            let mesh = Arc::new(triangulated_rectangle(n, n, 1.0, 1.0, &RegionRule::AllGrey).unwrap());
            let space = DgSpace::new(mesh, degree).unwrap();
            let ne = space.num_elements();
            let a = assemble_stiffness(&space, &vec![[[1.0, 0.0], [0.0, 1.0]]; ne], &vec![1.0; ne], 10.0).unwrap();
            let lhs = a.linear_combination(1.0, &assemble_mass(&space), 1.0).unwrap();
            let rhs = space.project(|p| (2.0 * PI * PI + 1.0) * exact(p));
            let u = EnvelopeCholesky::factor(&lhs).unwrap().solve(&rhs);
            errs.push(space.l2_error(&u, exact).unwrap());
        }
        let slopes: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        pass &= slopes.iter().all(|s| (s - (degree + 1) as f64).abs() <= SLOPE_TOL);
        parts.push(format!("l = {degree}: {slopes:.2?}"));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < CONVERGENCE_TIME_S;
    outcome(pass, format!("L2 slopes {} ({secs:.1} s)", parts.join(", ")))
}

fn c7_conservation() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let opts = SolveOptions {
        dt: 0.025,
        t_end: 0.025 * CONSERVATION_STEPS as f64,
        snapshot_times: vec![0.025 * CONSERVATION_STEPS as f64],
        ..SolveOptions::default()
    };
    // default diffusion on the two-region mesh, and a strong anisotropic one
    let brain = two_region_space(8, 2);
    let brain_d = diffusion_field(brain.mesh(), 8e-6, 8e-5);
    let square = unit_square_space(8, 2);
    let square_d = vec![[[2e-2, 5e-3], [5e-3, 1e-2]]; square.num_elements()];
    for (name, space, d) in [("two-region", brain, brain_d), ("anisotropic", square, square_d)] {
        let sys = FkSystem::with_rate(space.clone(), &d, 0.0, 10.0).unwrap();
        let y0 = space.project(|p| if p[0] + p[1] < 0.05 { 1.0 } else { 0.1 * p[0] });
        let m0 = space.integral(&y0).unwrap();
        let traj = solve(&sys, &y0, &ImexTableau::default(), &opts).unwrap();
        let area = space.mesh().total_area();
        let drift = traj
            .series(0)
            .iter()
            .map(|avg| (avg * area - m0).abs() / m0.abs())
            .fold(0.0, f64::max);
        let end = space.integral(&traj.snapshots[0].state).unwrap();
        let drift = drift.max((end - m0).abs() / m0.abs());
        pass &= drift <= CONSERVATION_TOL;
        parts.push(format!("{name} {drift:.1e}"));
    }
    outcome(pass, format!("relative drift of 1^T M y over {CONSERVATION_STEPS} steps: {}", parts.join(", ")))
}

fn c8_regimes() -> Outcome {
    let space = two_region_space(8, 2);
    let settings = SimSettings::default();
    let mut parts = Vec::new();

    let tau = Protein::Tau.preset();
    let p = tau.means();
    let run = simulate(ModelKind::Heterodimer, space.clone(), &p, &tau.default_seed(space.mesh()), &settings).unwrap();
    let q = run.q_avg();
    let (imax, qpeak) = q.iter().enumerate().fold((0, 0.0), |m, (i, &v)| if v > m.1 { (i, v) } else { m });
    let decays = q[imax..].iter().copied().fold(f64::INFINITY, f64::min) < qpeak && q[q.len() - 1] < qpeak;
    let tau_ok = qpeak >= (1.0 + OVERSHOOT) * p.q_max && decays;
    parts.push(format!(
        "tau peak {:.3} q_max at t = {:.2}, final {:.3} q_max",
        qpeak / p.q_max,
        run.trajectory.times[imax],
        q[q.len() - 1] / p.q_max
    ));

    let amy = Protein::Amyloid.preset();
    let p = amy.means();
    let run = simulate(ModelKind::Heterodimer, space.clone(), &p, &amy.default_seed(space.mesh()), &settings).unwrap();
    let q = run.q_avg();
    let monotone = q.windows(2).all(|w| w[1] >= w[0]);
    let t90 = first_reach(&run.trajectory.times, &q, 0.9 * p.q_max);
    let amy_ok = monotone && t90.is_some_and(|t| t >= T90_WINDOW.0 && t <= T90_WINDOW.1);
    parts.push(format!("amyloid monotone {monotone}, t90 {}", years(t90)));

    let seed = tau.default_seed(space.mesh());
    let mut fk_ok = true;
    let mut cmp = Vec::new();
    for p_delta in [0.9, 1.0, 1.1] {
        assert!(p_delta < P_DELTA_STAR_TAU);
        let mut p = tau.means();
        p.p_delta = p_delta;
        let half = 0.5 * p.q_max;
        let het = simulate(ModelKind::Heterodimer, space.clone(), &p, &seed, &settings).unwrap();
        let fk = simulate(ModelKind::Fk, space.clone(), &p, &seed, &settings).unwrap();
        let th = first_reach(&het.trajectory.times, &het.q_avg(), half);
        let tf = first_reach(&fk.trajectory.times, &fk.q_avg(), half);
        fk_ok &= matches!((tf, th), (Some(f), Some(h)) if f <= h);
        cmp.push(format!("p_delta {p_delta}: fk {} vs heterodimer {}", years(tf), years(th)));
    }
    parts.push(format!("t(0.5 q_max) {}", cmp.join(", ")));
    outcome(tau_ok && amy_ok && fk_ok, parts.join("; "))
}

fn years(t: Option<f64>) -> String {
    t.map_or_else(|| "never".into(), |t| format!("{t:.3} y"))
}

fn c9_ecdf() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for protein in [Protein::Tau, Protein::Amyloid] {
        let preset = protein.preset();
        for axis in [BifurcationAxis::PMin, BifurcationAxis::PDelta, BifurcationAxis::QMax] {
            let d = preset.stat(axis).fit().unwrap();
            let passed = (0..ECDF_SEEDS)
                .filter(|&s| ecdf_compare(&d.sample(ECDF_SAMPLES, s), &d).unwrap().pass)
                .count();
            let rate = passed as f64 / ECDF_SEEDS as f64;
            pass &= rate >= ECDF_RATE;
            parts.push(format!("{protein} {} {:.1}%", axis.name(), 100.0 * rate));
        }
    }
    outcome(pass, format!("DKW pass rates: {}", parts.join(", ")))
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn run_bin(args: &[&str]) -> bool {
    Process::new(env!("CARGO_BIN_EXE_prion-dg"))
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn c10_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let sim = root.join("sim.toml");
    std::fs::write(
        &sim,
        "[discretization]\ndegree = 2\n[mesh]\nkind = \"structured\"\nnx = 6\nny = 6\nwidth = 0.1\nheight = 0.1\n\
         regions = { kind = \"white_below\", white_below = 0.05, axonal = [1.0, 0.0] }\n\
         [time]\nt_end = 2.0\nsnapshots = [0.0, 1.0, 2.0]\n",
    )
    .unwrap();
    let sweep = root.join("sweep.toml");
    std::fs::write(
        &sweep,
        "[model]\nkind = \"fk\"\nprotein = \"amyloid\"\n[discretization]\ndegree = 1\n[time]\nt_end = 1.0\n\
         snapshots = [1.0]\n[sweep]\naxis = \"p_delta\"\nquantiles = [0.1, 0.5, 0.9]\n",
    )
    .unwrap();
    let sim_s = sim.to_str().unwrap();
    let sweep_s = sweep.to_str().unwrap();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("fit", vec!["fit", "--protein", "amyloid", "--samples", "200", "--seed", "3"]),
        (
            "bifurcation",
            vec!["bifurcation", "--protein", "tau", "--surface-p-min", "1:8:4", "--surface-p-delta", "0.5:6:5"],
        ),
        ("simulate", vec!["simulate", sim_s]),
        ("sweep", vec!["sweep", sweep_s]),
        ("meshgen", vec!["meshgen", "--shape", "triangles", "--nx", "5", "--ny", "4", "--white-below", "0.05"]),
        ("agglomerate", vec!["agglomerate", "--rings", "5", "--target", "15", "--seed", "11"]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, args) in commands {
        let first = root.join(format!("{name}_a"));
        let again = root.join(format!("{name}_b"));
        let replayed = root.join(format!("{name}_r"));
        let mut a = args.clone();
        a.extend(["--out", first.to_str().unwrap()]);
        let mut b = args.clone();
        b.extend(["--out", again.to_str().unwrap()]);
        let record = first.join("run.json");
        let ok = run_bin(&a)
            && run_bin(&b)
            && run_bin(&["--replay", record.to_str().unwrap(), "--out", replayed.to_str().unwrap()]);
        let t = if ok { tree(&first) } else { Vec::new() };
        let same = ok && !t.is_empty() && t == tree(&again) && t == tree(&replayed);
        pass &= same;
        parts.push(format!("{name} {}", if same { "identical" } else { "DIFFERS" }));
    }
    outcome(pass, format!("re-run and replay from run.json: {}", parts.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("bifurcation thresholds", c1_bifurcation_thresholds),
        ("distribution calibration", c2_distribution_calibration),
        ("equilibrium classification", c3_classification),
        ("ODE-limit oracle", c4_ode_limit),
        ("closed-form FK and order", c5_logistic_and_order),
        ("DG convergence", c6_dg_convergence),
        ("conservation", c7_conservation),
        ("qualitative regimes", c8_regimes),
        ("ECDF validation", c9_ecdf),
        ("determinism", c10_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|a| *a == id || name.contains(a.as_str())) {
            continue;
        }
        let o = match std::panic::catch_unwind(f) {
            Ok(o) => o,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            }
        };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {id:>2} {:4} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
