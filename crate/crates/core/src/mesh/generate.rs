use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::geometry::{self, Point};
use super::{PolyMesh, Region};
use crate::error::{Error, Result};

/// Assigns a region tag and axonal direction from an element centroid.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionRule {
    /// Grey everywhere with zero axonal vectors.
    #[default]
    AllGrey,
    /// White matter where `y < white_below`, fibres along `axonal`
    /// (normalized); grey above.
    WhiteBelow { white_below: f64, axonal: Point },
    #[serde(skip)]
    Custom(fn(Point) -> (Region, Point)),
}

impl RegionRule {
    pub fn apply(&self, c: Point) -> (Region, Point) {
        match *self {
            RegionRule::AllGrey => (Region::Grey, [0.0, 0.0]),
            RegionRule::WhiteBelow { white_below, axonal } => {
                if c[1] < white_below {
                    let n = axonal[0].hypot(axonal[1]);
                    (Region::White, [axonal[0] / n, axonal[1] / n])
                } else {
                    (Region::Grey, [0.0, 0.0])
                }
            }
            RegionRule::Custom(f) => f(c),
        }
    }
}

fn fill_fields(vertices: &[Point], elements: &[Vec<usize>], rule: &RegionRule) -> (Vec<Region>, Vec<Point>) {
    elements
        .iter()
        .map(|e| {
            let pts: Vec<Point> = e.iter().map(|&v| vertices[v]).collect();
            rule.apply(geometry::centroid(&pts))
        })
        .unzip()
}

fn check_dims(nx: usize, ny: usize, width: f64, height: f64) -> Result<()> {
    if nx == 0 || ny == 0 {
        return Err(Error::invalid(format!("grid dimensions must be positive, got {nx} x {ny}")));
    }
    if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
        return Err(Error::invalid(format!("domain size must be positive, got {width} x {height}")));
    }
    Ok(())
}

fn grid_vertices(nx: usize, ny: usize, width: f64, height: f64) -> Vec<Point> {
    let mut v = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            v.push([width * i as f64 / nx as f64, height * j as f64 / ny as f64]);
        }
    }
    v
}

/// Axis-aligned `nx × ny` quadrilateral grid on `[0, width] × [0, height]`.
pub fn generate_structured(nx: usize, ny: usize, width: f64, height: f64, rule: &RegionRule) -> Result<PolyMesh> {
    check_dims(nx, ny, width, height)?;
    let vertices = grid_vertices(nx, ny, width, height);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let (regions, axonal) = fill_fields(&vertices, &elements, rule);
    PolyMesh::new(vertices, elements, regions, axonal)
}

/// Structured grid with every cell split into two triangles.
pub fn triangulated_rectangle(nx: usize, ny: usize, width: f64, height: f64, rule: &RegionRule) -> Result<PolyMesh> {
    check_dims(nx, ny, width, height)?;
    let vertices = grid_vertices(nx, ny, width, height);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                elements.push(vec![a, b, c]);
                elements.push(vec![a, c, d]);
            } else {
                elements.push(vec![a, b, d]);
                elements.push(vec![b, c, d]);
            }
        }
    }
    let (regions, axonal) = fill_fields(&vertices, &elements, rule);
    PolyMesh::new(vertices, elements, regions, axonal)
}

/// Triangulated polygonal disc of `6·rings²` triangles centred at `center`.
pub fn triangulated_disc(rings: usize, radius: f64, center: Point, rule: &RegionRule) -> Result<PolyMesh> {
    if rings == 0 || !(radius > 0.0) {
        return Err(Error::invalid("disc needs at least one ring and a positive radius"));
    }
    let mut vertices = vec![center];
    let mut ring_start = vec![0usize];
    for r in 1..=rings {
        ring_start.push(vertices.len());
        let m = 6 * r;
        let rad = radius * r as f64 / rings as f64;
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            vertices.push([center[0] + rad * t.cos(), center[1] + rad * t.sin()]);
        }
    }
    let mut elements = Vec::with_capacity(6 * rings * rings);
    for r in 1..=rings {
        let m_out = 6 * r;
        let outer = |j: usize| ring_start[r] + j % m_out;
        if r == 1 {
            for j in 0..m_out {
                elements.push(vec![0, outer(j), outer(j + 1)]);
            }
            continue;
        }
        let m_in = 6 * (r - 1);
        let inner = |i: usize| ring_start[r - 1] + i % m_in;
        let (mut i, mut j) = (0usize, 0usize);
        while i < m_in || j < m_out {
            // advance whichever ring has the smaller next angle; integer
            // comparison of (i+1)/m_in vs (j+1)/m_out avoids rounding ties
            let take_outer = j < m_out && (i == m_in || (j + 1) * m_in <= (i + 1) * m_out);
            if take_outer {
                elements.push(vec![inner(i), outer(j), outer(j + 1)]);
                j += 1;
            } else {
                elements.push(vec![inner(i), outer(j), inner(i + 1)]);
                i += 1;
            }
        }
    }
    let (regions, axonal) = fill_fields(&vertices, &elements, rule);
    PolyMesh::new(vertices, elements, regions, axonal)
}
