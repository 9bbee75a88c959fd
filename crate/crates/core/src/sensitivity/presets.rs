use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{fit_gamma, GammaDist};
use crate::error::{Error, Result};
use crate::mesh::geometry::Point;
use crate::mesh::PolyMesh;
use crate::models::{BifurcationAxis, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protein {
    Tau,
    Amyloid,
}

impl FromStr for Protein {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tau" => Ok(Protein::Tau),
            "amyloid" | "amyloid-beta" | "abeta" => Ok(Protein::Amyloid),
            other => Err(Error::Config(format!("unknown protein '{other}' (expected tau or amyloid)"))),
        }
    }
}

impl std::fmt::Display for Protein {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Protein::Tau => "tau",
            Protein::Amyloid => "amyloid",
        })
    }
}

/// Reference mean and variance of one concentration parameter, μg/g and μg²/g².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamStats {
    pub axis: BifurcationAxis,
    pub mean: f64,
    pub variance: f64,
}

impl ParamStats {
    pub fn fit(&self) -> Result<GammaDist> {
        fit_gamma(self.mean, self.variance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProteinPreset {
    pub protein: Protein,
    pub stats: [ParamStats; 3],
    /// Seed centre as a fraction of the mesh bounding box.
    pub seed_center: Point,
}

const fn stats(axis: BifurcationAxis, mean: f64, variance: f64) -> ParamStats {
    ParamStats { axis, mean, variance }
}

impl Protein {
    pub fn preset(self) -> ProteinPreset {
        use BifurcationAxis::*;
        match self {
            Protein::Tau => ProteinPreset {
                protein: self,
                stats: [
                    stats(PMin, 4.4557, 3.0400),
                    stats(PDelta, 3.5042, 1.8217),
                    stats(QMax, 0.7168, 0.2737),
                ],
                seed_center: [0.3, 0.3],
            },
            Protein::Amyloid => ProteinPreset {
                protein: self,
                stats: [
                    stats(PMin, 5.7400, 2.2464),
                    stats(PDelta, 3.0500, 8.2143),
                    stats(QMax, 13.086, 101.33),
                ],
                seed_center: [0.7, 0.7],
            },
        }
    }
}

impl ProteinPreset {
    pub fn stat(&self, axis: BifurcationAxis) -> ParamStats {
        *self.stats.iter().find(|s| s.axis == axis).expect("every axis present")
    }

    /// Distribution means with default `k12`, `d_ext`, `d_axn`.
    pub fn means(&self) -> ModelParams {
        ModelParams::new(
            self.stat(BifurcationAxis::PMin).mean,
            self.stat(BifurcationAxis::PDelta).mean,
            self.stat(BifurcationAxis::QMax).mean,
        )
    }

    pub fn distribution(&self, axis: BifurcationAxis) -> Result<GammaDist> {
        self.stat(axis).fit()
    }

    /// Default seed disc on `mesh`: radius `0.1 · width` of the bounding box.
    pub fn default_seed(&self, mesh: &PolyMesh) -> SeedRegion {
        let (lo, hi) = bounding_box(mesh);
        let w = hi[0] - lo[0];
        SeedRegion::Disc {
            center: [
                lo[0] + self.seed_center[0] * w,
                lo[1] + self.seed_center[1] * (hi[1] - lo[1]),
            ],
            radius: 0.1 * w,
        }
    }
}

pub fn bounding_box(mesh: &PolyMesh) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for v in mesh.vertices() {
        for d in 0..2 {
            lo[d] = lo[d].min(v[d]);
            hi[d] = hi[d].max(v[d]);
        }
    }
    (lo, hi)
}

/// Region where the misfolded protein is initially placed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedRegion {
    Disc { center: Point, radius: f64 },
    Polygon { vertices: Vec<Point> },
    Everywhere,
}

impl SeedRegion {
    pub fn contains(&self, p: Point) -> bool {
        match self {
            SeedRegion::Disc { center, radius } => (p[0] - center[0]).hypot(p[1] - center[1]) <= *radius,
            SeedRegion::Polygon { vertices } => {
                // even–odd rule
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            SeedRegion::Everywhere => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn means_and_polygon_seed() {
        let p = Protein::Tau.preset().means();
        assert_eq!((p.p_min, p.p_delta, p.q_max), (4.4557, 3.5042, 0.7168));
        let sq = SeedRegion::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        };
        assert!(sq.contains([0.5, 0.5]));
        assert!(!sq.contains([1.5, 0.5]));
        assert!("prion".parse::<Protein>().is_err());
    }
}
