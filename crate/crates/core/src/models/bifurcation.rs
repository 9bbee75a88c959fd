use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelParams;
use crate::error::{Error, Result};

pub const SURFACE_CSV_HEADER: &str = "p_min [ug/g],p_delta [ug/g],q_max_star [ug/g]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationAxis {
    QMax,
    PMin,
    PDelta,
}

impl BifurcationAxis {
    pub fn name(self) -> &'static str {
        match self {
            BifurcationAxis::QMax => "q_max",
            BifurcationAxis::PMin => "p_min",
            BifurcationAxis::PDelta => "p_delta",
        }
    }

    pub fn get(self, p: &ModelParams) -> f64 {
        match self {
            BifurcationAxis::QMax => p.q_max,
            BifurcationAxis::PMin => p.p_min,
            BifurcationAxis::PDelta => p.p_delta,
        }
    }

    pub fn set(self, p: &mut ModelParams, v: f64) {
        match self {
            BifurcationAxis::QMax => p.q_max = v,
            BifurcationAxis::PMin => p.p_min = v,
            BifurcationAxis::PDelta => p.p_delta = v,
        }
    }
}

impl std::fmt::Display for BifurcationAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BifurcationAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q_max" | "qmax" => Ok(BifurcationAxis::QMax),
            "p_min" | "pmin" => Ok(BifurcationAxis::PMin),
            "p_delta" | "pdelta" => Ok(BifurcationAxis::PDelta),
            other => Err(Error::invalid(format!("unknown axis '{other}' (expected q_max, p_min or p_delta)"))),
        }
    }
}

/// Real roots of `a x² + b x + c = 0`, ascending, cancellation-free.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-15 * scale {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

/// Positive roots along `axis` of `(p_Δ + p_min)² q_max = 4 p_min p_Δ²`,
/// with the other two concentrations taken from `fixed`.
pub fn bifurcation_value(axis: BifurcationAxis, fixed: &ModelParams) -> Vec<f64> {
    let (pm, pd, q) = (fixed.p_min, fixed.p_delta, fixed.q_max);
    let roots = match axis {
        BifurcationAxis::QMax => {
            let s = pm + pd;
            vec![4.0 * pm * pd * pd / (s * s)]
        }
        BifurcationAxis::PDelta => solve_quadratic(q - 4.0 * pm, 2.0 * q * pm, q * pm * pm),
        BifurcationAxis::PMin => solve_quadratic(q, 2.0 * q * pd - 4.0 * pd * pd, q * pd * pd),
    };
    roots.into_iter().filter(|&x| x > 0.0 && x.is_finite()).collect()
}

/// Relative residual of the bifurcation condition.
pub fn bifurcation_residual(p_min: f64, p_delta: f64, q_max: f64) -> f64 {
    let s = p_min + p_delta;
    let l = s * s * q_max;
    let r = 4.0 * p_min * p_delta * p_delta;
    (l - r).abs() / l.abs().max(r.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub p_min: f64,
    pub p_delta: f64,
    pub q_max_star: f64,
}

/// `q_max*` over the tensor grid `p_min × p_delta`.
pub fn bifurcation_surface(p_min: &[f64], p_delta: &[f64]) -> Result<Vec<SurfacePoint>> {
    if p_min.iter().chain(p_delta).any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("bifurcation surface grid must be positive"));
    }
    let mut out = Vec::with_capacity(p_min.len() * p_delta.len());
    for &pm in p_min {
        for &pd in p_delta {
            let s = pm + pd;
            out.push(SurfacePoint {
                p_min: pm,
                p_delta: pd,
                q_max_star: 4.0 * pm * pd * pd / (s * s),
            });
        }
    }
    Ok(out)
}

pub fn surface_csv(points: &[SurfacePoint]) -> String {
    let mut s = String::from(SURFACE_CSV_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(s, "{:?},{:?},{:?}", p.p_min, p.p_delta, p.q_max_star);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        assert_eq!(solve_quadratic(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert!(solve_quadratic(1.0, 0.0, 1.0).is_empty());
        assert_eq!(solve_quadratic(0.0, 2.0, -4.0), vec![2.0]);
        // tiny root without cancellation
        let r = solve_quadratic(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn tau_q_max_threshold() {
        let v = bifurcation_value(BifurcationAxis::QMax, &ModelParams::new(4.4557, 3.5042, 0.7168));
        assert!((v[0] - 3.4541).abs() < 1e-3);
    }

    #[test]
    fn surface_satisfies_condition() {
        let pts = bifurcation_surface(&[1.0, 4.0, 7.5], &[0.5, 3.0]).unwrap();
        assert_eq!(pts.len(), 6);
        for p in &pts {
            assert!(bifurcation_residual(p.p_min, p.p_delta, p.q_max_star) < 1e-10);
        }
        assert!(surface_csv(&pts).starts_with("p_min [ug/g],p_delta [ug/g],q_max_star [ug/g]\n"));
    }
}
