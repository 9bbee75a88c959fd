use serde::{Deserialize, Serialize};

use super::GammaDist;
use crate::error::{Error, Result};

/// Significance level of the confidence band.
pub const DKW_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcdfReport {
    pub n: usize,
    /// `sup |F̂_n − F|`
    pub ks: f64,
    /// Dvoretzky–Kiefer–Wolfowitz half-width `√(ln(2/α) / 2n)`
    pub band: f64,
    pub pass: bool,
}

pub fn dkw_half_width(n: usize) -> f64 {
    ((2.0 / DKW_ALPHA).ln() / (2.0 * n as f64)).sqrt()
}

/// Kolmogorov–Smirnov distance to an arbitrary CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("empty sample set"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    Ok(s.iter().enumerate().fold(0.0f64, |m, (i, &x)| {
        let f = cdf(x);
        m.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    }))
}

pub fn ecdf_compare(samples: &[f64], dist: &GammaDist) -> Result<EcdfReport> {
    let ks = ks_statistic(samples, |x| dist.cdf(x))?;
    let band = dkw_half_width(samples.len());
    Ok(EcdfReport {
        n: samples.len(),
        ks,
        band,
        pass: ks <= band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_at_median() {
        let d = GammaDist::new(0.0, 1.0).unwrap();
        let r = ecdf_compare(&[2f64.ln()], &d).unwrap();
        assert!((r.ks - 0.5).abs() < 1e-15);
        assert!((r.band - 1.3581).abs() < 1e-4);
        assert!(r.pass);
    }

    #[test]
    fn shifted_samples_fail() {
        let d = GammaDist::new(2.0, 1.5).unwrap();
        let s: Vec<f64> = d.sample(500, 1).iter().map(|v| v + 10.0).collect();
        assert!(!ecdf_compare(&s, &d).unwrap().pass);
        assert!(ecdf_compare(&[], &d).is_err());
    }
}
