//! Reaction kinetics of the heterodimer and Fisher–Kolmogorov models.

mod bifurcation;
mod kinetics;

use serde::{Deserialize, Serialize};

pub use crate::dg::Tensor2;
pub use bifurcation::{
    bifurcation_residual, bifurcation_surface, bifurcation_value, solve_quadratic, surface_csv, BifurcationAxis,
    SurfacePoint, SURFACE_CSV_HEADER,
};
pub use kinetics::{
    classify_equilibrium, eigenvalues, fk_rate, heterodimer_rates, jacobian_e1, jacobian_e2, kinetics_jacobian,
    Eigenvalues, EquilibriumKind, EquilibriumReport, Matrix2,
};

use crate::error::{Error, Result};
use crate::mesh::{PolyMesh, Region};

pub const DEFAULT_K12: f64 = 0.2;
pub const DEFAULT_D_EXT: f64 = 8e-6;
pub const DEFAULT_D_AXN: f64 = 8e-5;

/// Stochastic concentrations plus the fixed conversion rate and diffusion
/// magnitudes. Concentrations in μg/g, rates per year, diffusion in cm²/year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p_min: f64,
    pub p_delta: f64,
    pub q_max: f64,
    pub k12: f64,
    pub d_ext: f64,
    pub d_axn: f64,
}

impl ModelParams {
    /// Concentrations with the default `k12`, `d_ext`, `d_axn`.
    pub fn new(p_min: f64, p_delta: f64, q_max: f64) -> Self {
        Self {
            p_min,
            p_delta,
            q_max,
            k12: DEFAULT_K12,
            d_ext: DEFAULT_D_EXT,
            d_axn: DEFAULT_D_AXN,
        }
    }

    pub fn p_max(&self) -> f64 {
        self.p_min + self.p_delta
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_delta == 0.0 {
            return Err(Error::DegenerateDrop(self.p_delta));
        }
        let checks = [
            ("p_min", self.p_min, self.p_min > 0.0),
            ("p_delta", self.p_delta, self.p_delta > 0.0),
            ("q_max", self.q_max, self.q_max > 0.0),
            ("k12", self.k12, self.k12 > 0.0),
            ("d_ext", self.d_ext, self.d_ext >= 0.0),
            ("d_axn", self.d_axn, self.d_axn >= 0.0),
        ];
        for (name, v, ok) in checks {
            if !ok || !v.is_finite() {
                return Err(Error::invalid(format!("{name} = {v} is out of range")));
            }
        }
        Ok(())
    }

    pub fn rates(&self) -> Result<DerivedRates> {
        derive_rates(self)
    }
}

/// Reaction rates per year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedRates {
    pub k0: f64,
    pub k1: f64,
    pub k1_tilde: f64,
    pub alpha: f64,
}

impl DerivedRates {
    /// Recovers `(p_min, p_delta, q_max)` given `k12`.
    pub fn invert(&self, k12: f64) -> (f64, f64, f64) {
        let p_min = self.k1_tilde / k12;
        let q_max = self.k0 / self.k1_tilde - self.k1 / k12;
        let p_max = self.k0 / self.k1;
        (p_min, p_max - p_min, q_max)
    }
}

/// Maps the equilibrium concentrations to reaction rates. `q_max = 0` is
/// accepted as a boundary case.
pub fn derive_rates(p: &ModelParams) -> Result<DerivedRates> {
    if p.p_delta == 0.0 {
        return Err(Error::DegenerateDrop(p.p_delta));
    }
    if !(p.p_min > 0.0 && p.p_delta > 0.0 && p.q_max >= 0.0 && p.k12 > 0.0) {
        return Err(Error::invalid(format!(
            "rates need p_min > 0, p_delta > 0, q_max >= 0, k12 > 0 (got {}, {}, {}, {})",
            p.p_min, p.p_delta, p.q_max, p.k12
        )));
    }
    Ok(DerivedRates {
        k0: p.p_min * (p.p_min + p.p_delta) * p.q_max * p.k12 / p.p_delta,
        k1: p.p_min * p.q_max * p.k12 / p.p_delta,
        k1_tilde: p.p_min * p.k12,
        alpha: p.p_delta * p.k12,
    })
}

/// `D = d_ext I + d_axn ā ⊗ ā`
pub fn diffusion_tensor(d_ext: f64, d_axn: f64, a: [f64; 2]) -> Tensor2 {
    [
        [d_ext + d_axn * a[0] * a[0], d_axn * a[0] * a[1]],
        [d_axn * a[1] * a[0], d_ext + d_axn * a[1] * a[1]],
    ]
}

/// Per-element tensors; the axonal part acts in white matter only.
pub fn diffusion_field(mesh: &PolyMesh, d_ext: f64, d_axn: f64) -> Vec<Tensor2> {
    mesh.regions()
        .iter()
        .zip(mesh.axonal())
        .map(|(&r, &a)| {
            let dx = if r == Region::White { d_axn } else { 0.0 };
            diffusion_tensor(d_ext, dx, a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_alpha() {
        let r = derive_rates(&ModelParams::new(4.4557, 3.5042, 0.7168)).unwrap();
        assert!((r.alpha - 0.70084).abs() < 1e-12);
        assert_eq!(r.alpha, 3.5042 * 0.2);
    }

    #[test]
    fn zero_drop_is_degenerate() {
        let e = derive_rates(&ModelParams::new(4.0, 0.0, 1.0)).unwrap_err();
        assert!(e.to_string().contains("degenerate: zero healthy-protein drop"));
    }

    #[test]
    fn zero_q_max_boundary() {
        let r = derive_rates(&ModelParams::new(4.0, 2.0, 0.0)).unwrap();
        assert_eq!((r.k0, r.k1), (0.0, 0.0));
        assert_eq!(r.k1_tilde, 0.8);
        assert_eq!(r.alpha, 0.4);
    }

    #[test]
    fn anisotropic_tensor() {
        let d = diffusion_tensor(8e-6, 8e-5, [1.0, 0.0]);
        assert!((d[0][0] - 8.8e-5).abs() < 1e-18);
        assert_eq!(d[1][1], 8e-6);
        assert_eq!(d[0][1], 0.0);
        assert_eq!(diffusion_tensor(2.0, 5.0, [0.0, 0.0]), [[2.0, 0.0], [0.0, 2.0]]);
    }
}
