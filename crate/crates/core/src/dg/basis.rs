use crate::error::{Error, Result};
use crate::mesh::geometry::Point;

/// Exponents `(a, b)` of `x^a y^b` with `a + b ≤ degree`, ordered by total
/// degree.
pub fn monomial_exponents(degree: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
    for d in 0..=degree {
        for b in 0..=d {
            e.push((d - b, b));
        }
    }
    e
}

pub fn local_dim(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

/// Monomials on the element bounding box scaled to `[-1, 1]²`, then
/// orthonormalized in `L²(K)`: `φ_i = Σ_j c_ij m_j`, `c` lower triangular.
#[derive(Debug, Clone)]
pub struct ElementBasis {
    center: Point,
    half: Point,
    exps: Vec<(usize, usize)>,
    coeffs: Vec<f64>,
}

impl ElementBasis {
    /// Orthonormalizes against the discrete inner product given by `points`
    /// and `weights` (modified Gram–Schmidt, applied twice).
    pub fn new(degree: usize, polygon: &[Point], points: &[Point], weights: &[f64]) -> Result<Self> {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in polygon {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let center = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        let half = [0.5 * (hi[0] - lo[0]), 0.5 * (hi[1] - lo[1])];
        let exps = monomial_exponents(degree);
        let n = exps.len();
        let nq = points.len();
        let mut basis = Self {
            center,
            half,
            exps,
            coeffs: identity(n),
        };
        // rows: √w · m_j(x_q)
        let mut v = vec![0.0; n * nq];
        let mut m = vec![0.0; n];
        for (q, (&p, &w)) in points.iter().zip(weights).enumerate() {
            basis.monomials(p, &mut m);
            let sw = w.sqrt();
            for j in 0..n {
                v[j * nq + q] = sw * m[j];
            }
        }
        let c = &mut basis.coeffs;
        for i in 0..n {
            for _pass in 0..2 {
                for k in 0..i {
                    let (head, tail) = v.split_at_mut(i * nq);
                    let vk = &head[k * nq..(k + 1) * nq];
                    let vi = &mut tail[..nq];
                    let r: f64 = vk.iter().zip(vi.iter()).map(|(a, b)| a * b).sum();
                    vi.iter_mut().zip(vk).for_each(|(b, a)| *b -= r * a);
                    for j in 0..=k {
                        c[i * n + j] -= r * c[k * n + j];
                    }
                }
            }
            let vi = &mut v[i * nq..(i + 1) * nq];
            let norm = vi.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !(norm > 1e-14) {
                return Err(Error::Mesh(format!("degenerate basis function {i} on element")));
            }
            vi.iter_mut().for_each(|a| *a /= norm);
            for j in 0..=i {
                c[i * n + j] /= norm;
            }
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    fn scaled(&self, p: Point) -> Point {
        [(p[0] - self.center[0]) / self.half[0], (p[1] - self.center[1]) / self.half[1]]
    }

    fn powers(t: f64, deg: usize) -> [f64; 16] {
        let mut pw = [1.0; 16];
        for k in 1..=deg.min(15) {
            pw[k] = pw[k - 1] * t;
        }
        pw
    }

    fn monomials(&self, p: Point, out: &mut [f64]) {
        let [x, y] = self.scaled(p);
        let deg = self.exps.last().map(|e| e.0 + e.1).unwrap_or(0);
        let (px, py) = (Self::powers(x, deg), Self::powers(y, deg));
        for (o, &(a, b)) in out.iter_mut().zip(&self.exps) {
            *o = px[a] * py[b];
        }
    }

    /// Values of all basis functions at `p`.
    pub fn eval(&self, p: Point, out: &mut [f64]) {
        let n = self.dim();
        let mut m = [0.0; 136];
        self.monomials(p, &mut m[..n]);
        for i in 0..n {
            let row = &self.coeffs[i * n..i * n + i + 1];
            out[i] = row.iter().zip(&m[..=i]).map(|(c, v)| c * v).sum();
        }
    }

    /// Gradients of all basis functions at `p`.
    pub fn eval_grad(&self, p: Point, out: &mut [[f64; 2]]) {
        let n = self.dim();
        let [x, y] = self.scaled(p);
        let deg = self.exps.last().map(|e| e.0 + e.1).unwrap_or(0);
        let (px, py) = (Self::powers(x, deg), Self::powers(y, deg));
        let mut g = [[0.0; 2]; 136];
        for (gj, &(a, b)) in g.iter_mut().zip(&self.exps) {
            let dx = if a > 0 { a as f64 * px[a - 1] * py[b] } else { 0.0 };
            let dy = if b > 0 { b as f64 * px[a] * py[b - 1] } else { 0.0 };
            *gj = [dx / self.half[0], dy / self.half[1]];
        }
        for i in 0..n {
            let mut s = [0.0; 2];
            for j in 0..=i {
                let c = self.coeffs[i * n + j];
                s[0] += c * g[j][0];
                s[1] += c * g[j][1];
            }
            out[i] = s;
        }
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        c[i * n + i] = 1.0;
    }
    c
}

/// Largest supported degree (`local_dim` must fit the fixed scratch buffers).
pub const MAX_DEGREE: usize = 15;
