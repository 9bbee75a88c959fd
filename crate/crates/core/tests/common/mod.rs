#![allow(dead_code)]

use std::sync::Arc;

use prion_dg::dg::DgSpace;
use prion_dg::mesh::{generate_structured, RegionRule};
use prion_dg::models::ModelParams;

/// Heterodimer kinetics written out from the rate mapping.
pub fn heterodimer_kinetics(p: &ModelParams) -> impl Fn(f64, &[f64]) -> Vec<f64> {
    let (pm, pd, qm, k12) = (p.p_min, p.p_delta, p.q_max, p.k12);
    let k0 = pm * (pm + pd) * qm * k12 / pd;
    let k1 = pm * qm * k12 / pd;
    let kt = pm * k12;
    move |_, y| {
        let conv = k12 * y[0] * y[1];
        vec![k0 - k1 * y[0] - conv, -kt * y[1] + conv]
    }
}

pub fn logistic_kinetics(alpha: f64) -> impl Fn(f64, &[f64]) -> Vec<f64> {
    move |_, y| vec![alpha * y[0] * (1.0 - y[0])]
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

pub fn rk4_step<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, t: f64, y: &[f64], h: f64) -> Vec<f64> {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(t + h, &axpy(y, h, &k3));
    y.iter()
        .enumerate()
        .map(|(i, v)| v + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Classical RK4 with step doubling; the solution is reported at `t_out`
/// (ascending, starting at 0).
pub fn rk4_adaptive<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, y0: &[f64], t_out: &[f64], tol: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(t_out.len());
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h: f64 = 1e-3;
    for &target in t_out {
        while target - t > 1e-14 {
            let step = h.min(target - t);
            let full = rk4_step(f, t, &y, step);
            let half = rk4_step(f, t, &y, 0.5 * step);
            let two = rk4_step(f, t + 0.5 * step, &half, 0.5 * step);
            let err = full
                .iter()
                .zip(&two)
                .zip(&y)
                .map(|((a, b), c)| (a - b).abs() / (1.0 + c.abs()))
                .fold(0.0, f64::max)
                / 15.0;
            if err <= tol {
                t += step;
                // Richardson extrapolation of the two half steps
                y = two.iter().zip(&full).map(|(b, a)| b + (b - a) / 15.0).collect();
                if err < 0.1 * tol {
                    h = (2.0 * step).min(0.05);
                }
            } else {
                h = 0.5 * step;
            }
        }
        out.push(y.clone());
    }
    out
}

/// Fixed-step RK4 with step `h` (dividing every output interval).
pub fn rk4_fixed<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, y0: &[f64], t_out: &[f64], h: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(t_out.len());
    let mut y = y0.to_vec();
    let mut t = 0.0;
    for &target in t_out {
        let n = ((target - t) / h).round() as usize;
        let hh = if n > 0 { (target - t) / n as f64 } else { 0.0 };
        for _ in 0..n {
            y = rk4_step(f, t, &y, hh);
            t += hh;
        }
        t = target;
        out.push(y.clone());
    }
    out
}

/// Square of side 0.1 cm: white matter with fibres along x below
/// mid-height, grey above.
pub fn two_region_space(n: usize, degree: usize) -> Arc<DgSpace> {
    let rule = RegionRule::WhiteBelow {
        white_below: 0.05,
        axonal: [1.0, 0.0],
    };
    let mesh = Arc::new(generate_structured(n, n, 0.1, 0.1, &rule).unwrap());
    Arc::new(DgSpace::new(mesh, degree).unwrap())
}

pub fn unit_square_space(n: usize, degree: usize) -> Arc<DgSpace> {
    let mesh = Arc::new(generate_structured(n, n, 1.0, 1.0, &RegionRule::AllGrey).unwrap());
    Arc::new(DgSpace::new(mesh, degree).unwrap())
}

pub fn first_reach(times: &[f64], series: &[f64], level: f64) -> Option<f64> {
    times.iter().zip(series).find(|(_, &v)| v >= level).map(|(t, _)| *t)
}

pub fn zero_diffusion(space: &DgSpace) -> Vec<[[f64; 2]; 2]> {
    vec![[[0.0; 2]; 2]; space.num_elements()]
}
