use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linearly implicit IMEX Runge–Kutta pair.
///
/// The implicit part is `s`-stage with constant diagonal `γ`; the explicit
/// part has `s + 1` stages, `a_hat[r]` holding the coefficients of
/// `K̂_1..K̂_r` used to form stage `r` (row 0 is empty).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImexTableau {
    pub name: String,
    pub order: u32,
    pub gamma: f64,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub a_hat: Vec<Vec<f64>>,
    pub b_hat: Vec<f64>,
}

const TOL: f64 = 1e-12;

impl ImexTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// First-order IMEX Euler.
    pub fn imex_euler() -> Self {
        Self {
            name: "imex_euler".into(),
            order: 1,
            gamma: 1.0,
            a: vec![vec![1.0]],
            b: vec![1.0],
            c: vec![1.0],
            a_hat: vec![vec![], vec![1.0]],
            b_hat: vec![1.0, 0.0],
        }
    }

    /// Two-stage second-order pair, `γ = 1 − 1/√2`.
    pub fn ars222() -> Self {
        let g = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        let d = 1.0 - 1.0 / (2.0 * g);
        Self {
            name: "ars222".into(),
            order: 2,
            gamma: g,
            a: vec![vec![g, 0.0], vec![1.0 - g, g]],
            b: vec![1.0 - g, g],
            c: vec![g, 1.0],
            a_hat: vec![vec![], vec![g], vec![d, 1.0 - d]],
            b_hat: vec![d, 1.0 - d, 0.0],
        }
    }

    /// Three-stage third-order pair, `γ ≈ 0.4358665215`.
    pub fn ars343() -> Self {
        let g = 0.435_866_521_508_459;
        let b1 = -1.5 * g * g + 4.0 * g - 0.25;
        let b2 = 1.5 * g * g - 5.0 * g + 1.25;
        let a42 = 0.552_929_147_9;
        let a43 = a42;
        let a31 = (1.0 - 4.5 * g + 1.5 * g * g) * a42 + (2.75 - 10.5 * g + 3.75 * g * g) * a43 - 3.5 + 13.0 * g
            - 4.5 * g * g;
        let a32 = (-1.0 + 4.5 * g - 1.5 * g * g) * a42 + (-2.75 + 10.5 * g - 3.75 * g * g) * a43 + 4.0 - 12.5 * g
            + 4.5 * g * g;
        Self {
            name: "ars343".into(),
            order: 3,
            gamma: g,
            a: vec![
                vec![g, 0.0, 0.0],
                vec![(1.0 - g) / 2.0, g, 0.0],
                vec![b1, b2, g],
            ],
            b: vec![b1, b2, g],
            c: vec![g, (1.0 + g) / 2.0, 1.0],
            a_hat: vec![vec![], vec![g], vec![a31, a32], vec![1.0 - a42 - a43, a42, a43]],
            b_hat: vec![0.0, b1, b2, g],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "imex_euler" | "euler" => Ok(Self::imex_euler()),
            "ars222" => Ok(Self::ars222()),
            "ars343" => Ok(Self::ars343()),
            other => Err(Error::Tableau(format!(
                "unknown tableau '{other}' (expected imex_euler, ars222 or ars343)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.stages();
        let err = |m: String| Err(Error::Tableau(format!("{}: {m}", self.name)));
        if s == 0 {
            return err("no stages".into());
        }
        if !(self.gamma > 0.0) {
            return err(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.a.len() != s || self.c.len() != s || self.a_hat.len() != s + 1 || self.b_hat.len() != s + 1 {
            return err("inconsistent tableau dimensions".into());
        }
        for (i, row) in self.a.iter().enumerate() {
            if row.len() < i + 1 {
                return err(format!("implicit row {i} too short"));
            }
            if row[i + 1..].iter().any(|&v| v != 0.0) {
                return err(format!("implicit row {i} is not lower triangular"));
            }
            if (row[i] - self.gamma).abs() > TOL {
                return err(format!("implicit diagonal entry {i} differs from gamma"));
            }
            let rs: f64 = row.iter().sum();
            if (rs - self.c[i]).abs() > 1e-10 {
                return err(format!("node c[{i}] = {} differs from row sum {rs}", self.c[i]));
            }
        }
        for (r, row) in self.a_hat.iter().enumerate() {
            if row.len() > r {
                return err(format!("explicit row {r} is not strictly lower triangular"));
            }
        }
        let sb: f64 = self.b.iter().sum();
        let sbh: f64 = self.b_hat.iter().sum();
        if (sb - 1.0).abs() > 1e-10 || (sbh - 1.0).abs() > 1e-10 {
            return err(format!("weights must sum to 1 (got {sb} and {sbh})"));
        }
        Ok(())
    }
}

impl Default for ImexTableau {
    fn default() -> Self {
        Self::ars343()
    }
}
