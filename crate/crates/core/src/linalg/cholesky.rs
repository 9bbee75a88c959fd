//! Envelope (profile) Cholesky factorization under a reverse Cuthill–McKee
//! ordering. Suited to the banded block structure of DG operators.

use std::collections::VecDeque;

use super::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    n: usize,
    /// perm[new] = old
    perm: Vec<usize>,
    /// first stored column of each (permuted) row
    first: Vec<usize>,
    /// offset of row i in `data`; row i holds columns first[i]..=i
    start: Vec<usize>,
    data: Vec<f64>,
}

/// Reverse Cuthill–McKee ordering of the symmetrized sparsity graph.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n_rows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let (cols, _) = a.row(i);
        for &j in cols {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(|r| r.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let bfs_levels = |root: usize, visited: &[bool]| -> (usize, usize) {
        // (eccentricity, a min-degree node of the last level)
        let mut level = vec![usize::MAX; n];
        level[root] = 0;
        let mut q = VecDeque::from([root]);
        let mut last = root;
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if !visited[v] && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                    if level[v] > level[last] || (level[v] == level[last] && degree[v] < degree[last]) {
                        last = v;
                    }
                }
            }
        }
        (level[last], last)
    };

    for s in 0..n {
        if visited[s] {
            continue;
        }
        // pseudo-peripheral start node (George–Liu)
        let mut root = s;
        let (mut ecc, mut cand) = bfs_levels(root, &visited);
        for _ in 0..8 {
            let (e2, c2) = bfs_levels(cand, &visited);
            if e2 <= ecc {
                break;
            }
            root = cand;
            ecc = e2;
            cand = c2;
        }
        visited[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            let mut nbrs: Vec<usize> = adj[u].iter().copied().filter(|&v| !visited[v]).collect();
            nbrs.sort_by_key(|&v| (degree[v], v));
            for v in nbrs {
                visited[v] = true;
                q.push_back(v);
            }
        }
    }
    order.reverse();
    order
}

impl EnvelopeCholesky {
    /// Factors a symmetric positive definite matrix (only the lower triangle
    /// in the permuted ordering is read).
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.n_rows();
        if a.n_cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.n_cols(),
            });
        }
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for old_i in 0..n {
            let i = inv[old_i];
            let (cols, _) = a.row(old_i);
            for &old_j in cols {
                let j = inv[old_j];
                if j < i {
                    first[i] = first[i].min(j);
                } else if i < j {
                    first[j] = first[j].min(i);
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for old_i in 0..n {
            let i = inv[old_i];
            let (cols, vals) = a.row(old_i);
            for (&old_j, &v) in cols.iter().zip(vals) {
                let j = inv[old_j];
                if j <= i {
                    data[start[i] + (j - first[i])] = v;
                }
            }
        }
        // row-oriented envelope factorization
        for i in 0..n {
            let fi = first[i];
            let ri = start[i];
            for j in fi..i {
                let fj = first[j];
                let rj = start[j];
                let k0 = fi.max(fj);
                let mut s = data[ri + (j - fi)];
                for k in k0..j {
                    s -= data[ri + (k - fi)] * data[rj + (k - fj)];
                }
                data[ri + (j - fi)] = s / data[rj + (j - fj)];
            }
            let mut d = data[ri + (i - fi)];
            for k in fi..i {
                let l = data[ri + (k - fi)];
                d -= l * l;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { row: perm[i], pivot: d });
            }
            data[ri + (i - fi)] = d.sqrt();
        }
        Ok(Self {
            n,
            perm,
            first,
            start,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries of the factor (envelope size).
    pub fn envelope_len(&self) -> usize {
        self.data.len()
    }

    pub fn solve_into(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        // L y = b
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.start[i];
            let mut s = y[i];
            for k in fi..i {
                s -= self.data[ri + (k - fi)] * y[k];
            }
            y[i] = s / self.data[ri + (i - fi)];
        }
        // Lᵀ x = y, column sweep over rows of L
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.start[i];
            y[i] /= self.data[ri + (i - fi)];
            let yi = y[i];
            for k in fi..i {
                y[k] -= self.data[ri + (k - fi)] * yi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        self.solve_into(b, &mut x);
        x
    }
}
