use serde::{Deserialize, Serialize};

use super::{derive_rates, DerivedRates, ModelParams};
use crate::error::Result;

pub type Matrix2 = [[f64; 2]; 2];

/// Relative width of the node/focus boundary band.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `(∂p, ∂q)` of the heterodimer kinetics.
pub fn heterodimer_rates(r: &DerivedRates, k12: f64, p: f64, q: f64) -> (f64, f64) {
    (r.k0 - r.k1 * p - k12 * p * q, -r.k1_tilde * q + k12 * p * q)
}

/// `α c (1 − c)`
pub fn fk_rate(alpha: f64, c: f64) -> f64 {
    alpha * c * (1.0 - c)
}

/// Jacobian of the heterodimer kinetics at `(p, q)`.
pub fn kinetics_jacobian(r: &DerivedRates, k12: f64, p: f64, q: f64) -> Matrix2 {
    [[-r.k1 - k12 * q, -k12 * p], [k12 * q, -r.k1_tilde + k12 * p]]
}

/// Closed-form Jacobian at `E2 = (p_min, q_max)`.
pub fn jacobian_e2(p: &ModelParams) -> Matrix2 {
    let k = p.k12;
    [
        [-k * p.q_max * (p.p_min + p.p_delta) / p.p_delta, -k * p.p_min],
        [k * p.q_max, 0.0],
    ]
}

/// Jacobian at `E1 = (p_max, 0)`.
pub fn jacobian_e1(p: &ModelParams) -> Result<Matrix2> {
    let r = derive_rates(p)?;
    Ok(kinetics_jacobian(&r, p.k12, p.p_max(), 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Eigenvalues {
    Real { l1: f64, l2: f64 },
    Complex { re: f64, im: f64 },
}

impl Eigenvalues {
    pub fn max_real(&self) -> f64 {
        match *self {
            Eigenvalues::Real { l1, l2 } => l1.max(l2),
            Eigenvalues::Complex { re, .. } => re,
        }
    }
}

/// Eigenvalues of a real 2×2 matrix, `l1 ≤ l2` in the real case.
pub fn eigenvalues(m: &Matrix2) -> Eigenvalues {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        // roots of λ² − tr λ + det, stable form
        let q = 0.5 * (tr + if tr >= 0.0 { disc.sqrt() } else { -disc.sqrt() });
        let (a, b) = if q == 0.0 { (0.0, 0.0) } else { (q, det / q) };
        Eigenvalues::Real {
            l1: a.min(b),
            l2: a.max(b),
        }
    } else {
        Eigenvalues::Complex {
            re: 0.5 * tr,
            im: 0.5 * (-disc).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    StableNode,
    StableFocus,
    Degenerate,
}

impl std::fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EquilibriumKind::StableNode => "stable_node",
            EquilibriumKind::StableFocus => "stable_focus",
            EquilibriumKind::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub e1: [f64; 2],
    pub e2: [f64; 2],
    pub jacobian: Matrix2,
    pub eigenvalues: Eigenvalues,
    /// `trace² − 4 det` of `J(E2)`, 1/year²
    pub discriminant: f64,
    pub kind: EquilibriumKind,
}

/// Node/focus classification of `E2` from the sign of
/// `(p_Δ + p_min)² q_max − 4 p_min p_Δ²`.
pub fn classify_equilibrium(p: &ModelParams) -> Result<EquilibriumReport> {
    p.validate()?;
    let j = jacobian_e2(p);
    let s = p.p_min + p.p_delta;
    let g = s * s * p.q_max - 4.0 * p.p_min * p.p_delta * p.p_delta;
    let scale = s * s * p.q_max + 4.0 * p.p_min * p.p_delta * p.p_delta;
    let kind = if g.abs() < BOUNDARY_TOL * scale {
        EquilibriumKind::Degenerate
    } else if g < 0.0 {
        EquilibriumKind::StableFocus
    } else {
        EquilibriumKind::StableNode
    };
    let discriminant = p.k12 * p.k12 * p.q_max / (p.p_delta * p.p_delta) * g;
    Ok(EquilibriumReport {
        e1: [p.p_max(), 0.0],
        e2: [p.p_min, p.q_max],
        jacobian: j,
        eigenvalues: eigenvalues(&j),
        discriminant,
        kind,
    })
}
