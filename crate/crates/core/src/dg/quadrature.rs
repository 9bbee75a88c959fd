use std::f64::consts::PI;

use crate::mesh::geometry::{self, Point};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, exact to degree `2n − 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Collapsed tensor Gauss rule on the reference triangle `(0,0),(1,0),(0,1)`
/// with `n` points per direction; exact to degree `2n − 2`. Returns
/// barycentric-free reference coordinates and weights summing to 1/2.
pub fn reference_triangle(n: usize) -> Vec<(Point, f64)> {
    let (x, w) = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let u = 0.5 * (x[i] + 1.0);
        for j in 0..n {
            let v = 0.5 * (x[j] + 1.0);
            // (u, v) ∈ [0,1]² ↦ (u(1−v), v), Jacobian (1−v)
            out.push(([u * (1.0 - v), v], 0.25 * w[i] * w[j] * (1.0 - v)));
        }
    }
    out
}

/// Volume rule on a polygon by sub-triangulation.
#[derive(Debug, Clone, Default)]
pub struct PolygonRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl PolygonRule {
    /// `n` points per direction on each sub-triangle.
    pub fn new(polygon: &[Point], n: usize) -> Self {
        let reference = reference_triangle(n);
        let tris = geometry::triangulate(polygon);
        let mut points = Vec::with_capacity(tris.len() * reference.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for [a, b, c] in tris {
            let e1 = [b[0] - a[0], b[1] - a[1]];
            let e2 = [c[0] - a[0], c[1] - a[1]];
            let jac = e1[0] * e2[1] - e1[1] * e2[0];
            for &([s, t], w) in &reference {
                points.push([a[0] + s * e1[0] + t * e2[0], a[1] + s * e1[1] + t * e2[1]]);
                weights.push(w * jac);
            }
        }
        Self { points, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss–Legendre points and weights on the segment `a → b`.
pub fn segment_rule(a: Point, b: Point, n: usize) -> Vec<(Point, f64)> {
    let (x, w) = gauss_legendre(n);
    let len = geometry::dist(a, b);
    x.iter()
        .zip(&w)
        .map(|(&t, &wt)| {
            let s = 0.5 * (t + 1.0);
            ([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])], 0.5 * wt * len)
        })
        .collect()
}
