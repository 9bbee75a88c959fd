//! Conjugate gradients with a block-Jacobi preconditioner.

use super::CsrMatrix;
use crate::error::{Error, Result};

/// Dense Cholesky factors of consecutive diagonal blocks.
#[derive(Debug, Clone)]
pub struct BlockJacobi {
    offsets: Vec<usize>,
    factors: Vec<Vec<f64>>,
}

/// In-place dense lower Cholesky of a row-major `n × n` matrix.
pub fn dense_cholesky(a: &mut [f64], n: usize) -> Result<()> {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { row: j, pivot: d });
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    Ok(())
}

pub fn dense_cholesky_solve(l: &[f64], n: usize, x: &mut [f64]) {
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= l[i * n + k] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
}

impl BlockJacobi {
    /// `offsets` are block boundaries `0 = o_0 < o_1 < … < o_m = n`.
    pub fn new(a: &CsrMatrix, offsets: &[usize]) -> Result<Self> {
        if offsets.first() != Some(&0) || offsets.last() != Some(&a.n_rows()) {
            return Err(Error::invalid("block offsets must span the matrix"));
        }
        let mut factors = Vec::with_capacity(offsets.len() - 1);
        for w in offsets.windows(2) {
            let n = w[1] - w[0];
            let mut blk = a.dense_block(w[0]..w[1]);
            dense_cholesky(&mut blk, n).map_err(|e| match e {
                Error::NotPositiveDefinite { row, pivot } => Error::NotPositiveDefinite { row: row + w[0], pivot },
                other => other,
            })?;
            factors.push(blk);
        }
        Ok(Self {
            offsets: offsets.to_vec(),
            factors,
        })
    }

    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
        for (w, l) in self.offsets.windows(2).zip(&self.factors) {
            dense_cholesky_solve(l, w[1] - w[0], &mut z[w[0]..w[1]]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for PcgOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_iter: 5000,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` starting from the contents of `x`. Returns the number of
/// iterations.
pub fn pcg(a: &CsrMatrix, pre: &BlockJacobi, b: &[f64], x: &mut [f64], opts: PcgOptions) -> Result<usize> {
    let n = b.len();
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    let mut r = b.to_vec();
    a.mul_vec_add(-1.0, x, &mut r);
    let mut z = vec![0.0; n];
    pre.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 0..opts.max_iter {
        let res = dot(&r, &r).sqrt();
        if res <= opts.rel_tol * bnorm {
            return Ok(it);
        }
        a.mul_vec_into(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        pre.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = dot(&r, &r).sqrt() / bnorm;
    if res <= opts.rel_tol {
        Ok(opts.max_iter)
    } else {
        Err(Error::NoConvergence {
            iterations: opts.max_iter,
            residual: res,
        })
    }
}
