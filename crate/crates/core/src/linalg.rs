//! Compressed sparse row storage and banded direct solvers.
//!
//! All matrices assembled in this crate come from a uniform grid with a
//! row-major numbering, so their bandwidth is `O(n)`. A banded Cholesky
//! (symmetric positive definite) or a banded LU with partial pivoting
//! (general) is therefore an exact sparse direct method with modest fill.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Relative residual demanded from [`solve_spd`].
pub const SPD_TOLERANCE: f64 = 1e-12;
/// Relative residual demanded from [`solve_general`].
pub const GENERAL_TOLERANCE: f64 = 1e-10;
/// A pivot below this fraction of its (original) row maximum is singular.
pub const PIVOT_THRESHOLD: f64 = 1e-14;

/// Square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; dim + 1];
        for &(r, c, _) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) out of range {dim}");
            counts[r + 1] += 1;
        }
        for i in 0..dim {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        for &(r, c, v) in triplets {
            let slot = next[r];
            cols[slot] = c;
            vals[slot] = v;
            next[r] += 1;
        }
        let mut row_offsets = Vec::with_capacity(dim + 1);
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_offsets.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for r in 0..dim {
            scratch.clear();
            scratch.extend((counts[r]..counts[r + 1]).map(|k| (cols[k], vals[k])));
            scratch.sort_unstable_by_key(|e| e.0);
            let mut k = 0;
            while k < scratch.len() {
                let c = scratch[k].0;
                let mut v = 0.0;
                while k < scratch.len() && scratch[k].0 == c {
                    v += scratch[k].1;
                    k += 1;
                }
                col_indices.push(c);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        SparseMatrix {
            dim,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let t: Vec<_> = (0..dim).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(dim, &t)
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "dense input must be square");
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(dim, &t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`, columns ascending.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[span.clone()].binary_search(&j) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A - A^T|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= 1e-12 * self.max_abs()
    }

    /// `(lower, upper)` bandwidths.
    pub fn bandwidth(&self) -> (usize, usize) {
        let mut lower = 0;
        let mut upper = 0;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                if v == 0.0 {
                    continue;
                }
                if j < i {
                    lower = lower.max(i - j);
                } else {
                    upper = upper.max(j - i);
                }
            }
        }
        (lower, upper)
    }

    /// Keeps rows/columns listed in `keep`, renumbered in that order.
    pub fn submatrix(&self, keep: &[usize]) -> SparseMatrix {
        let mut map = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut t = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            for (j, v) in self.row(old_i) {
                if map[j] != usize::MAX {
                    t.push((new_i, map[j], v));
                }
            }
        }
        SparseMatrix::from_triplets(keep.len(), &t)
    }
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn relative_residual(a: &SparseMatrix, x: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let bn = norm2(b);
    let rel = if bn == 0.0 { norm2(&r) } else { norm2(&r) / bn };
    (r, rel)
}

/// Banded Cholesky factor `A = L L^T`, lower band stored row-wise.
struct BandCholesky {
    n: usize,
    bw: usize,
    // row i holds columns i - bw ..= i at offsets 0 ..= bw
    data: Vec<f64>,
}

impl BandCholesky {
    fn factor(a: &SparseMatrix) -> Option<Self> {
        let n = a.dim();
        let (lo, up) = a.bandwidth();
        let bw = lo.max(up);
        let w = bw + 1;
        let mut data = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i && v != 0.0 {
                    data[i * w + (j + bw - i)] = v;
                }
            }
        }
        for i in 0..n {
            let start = i.saturating_sub(bw);
            for j in start..=i {
                let jstart = j.saturating_sub(bw).max(start);
                let mut s = data[i * w + (j + bw - i)];
                for k in jstart..j {
                    s -= data[i * w + (k + bw - i)] * data[j * w + (k + bw - j)];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return None;
                    }
                    data[i * w + bw] = libm::sqrt(s);
                } else {
                    data[i * w + (j + bw - i)] = s / data[j * w + bw];
                }
            }
        }
        Some(BandCholesky { n, bw, data })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.data[i * w + (k + bw - i)] * x[k];
            }
            x[i] = s / self.data[i * w + bw];
        }
        for i in (0..n).rev() {
            x[i] /= self.data[i * w + bw];
            let xi = x[i];
            for k in i.saturating_sub(bw)..i {
                x[k] -= self.data[i * w + (k + bw - i)] * xi;
            }
        }
        x
    }
}

/// Banded LU with partial pivoting. Row `r` stores columns
/// `r - kl ..= r + ku + kl`, which also covers the fill from row swaps.
struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandLu {
    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        r * self.width + (c + self.kl - r)
    }

    fn factor(a: &SparseMatrix) -> Result<Self> {
        let n = a.dim();
        let (kl, ku) = a.bandwidth();
        let width = 2 * kl + ku + 1;
        let mut lu = BandLu {
            n,
            kl,
            width,
            data: vec![0.0; n * width],
            pivots: vec![0; n],
        };
        let mut row_scale = vec![0.0f64; n];
        for i in 0..n {
            for (j, v) in a.row(i).filter(|e| e.1 != 0.0) {
                let k = lu.idx(i, j);
                lu.data[k] = v;
                row_scale[i] = row_scale[i].max(v.abs());
            }
        }
        let mut origin: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let last_col = (i + ku + kl).min(n - 1);
            let mut p = i;
            let mut best = lu.data[lu.idx(i, i)].abs();
            for r in i + 1..=last_row {
                let v = lu.data[lu.idx(r, i)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            let scale = row_scale[origin[p]];
            if scale == 0.0 || best < PIVOT_THRESHOLD * scale || !best.is_finite() {
                return Err(Error::SingularMatrix { row: origin[p] });
            }
            lu.pivots[i] = p;
            if p != i {
                origin.swap(i, p);
                for c in i..=last_col {
                    let (x, y) = (lu.idx(i, c), lu.idx(p, c));
                    lu.data.swap(x, y);
                }
            }
            let pivot = lu.data[lu.idx(i, i)];
            let span = last_col - i;
            for r in i + 1..=last_row {
                let ri = lu.idx(r, i);
                let l = lu.data[ri] / pivot;
                lu.data[ri] = l;
                if l == 0.0 {
                    continue;
                }
                let src = lu.idx(i, i + 1);
                let dst = lu.idx(r, i + 1);
                // rows are contiguous in memory, so split to borrow both
                let (head, tail) = lu.data.split_at_mut(dst);
                let pivot_row = &head[src..src + span];
                for (d, s) in tail[..span].iter_mut().zip(pivot_row) {
                    *d -= l * s;
                }
            }
        }
        Ok(lu)
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = b.to_vec();
        for i in 0..n {
            let p = self.pivots[i];
            if p != i {
                x.swap(i, p);
            }
            let xi = x[i];
            for r in i + 1..=(i + self.kl).min(n.saturating_sub(1)) {
                x[r] -= self.data[self.idx(r, i)] * xi;
            }
        }
        let ku_total = self.width - 1 - self.kl;
        for i in (0..n).rev() {
            let mut s = x[i];
            for c in i + 1..=(i + ku_total).min(n - 1) {
                s -= self.data[self.idx(i, c)] * x[c];
            }
            x[i] = s / self.data[self.idx(i, i)];
        }
        x
    }
}

fn check_rhs(a: &SparseMatrix, b: &[f64]) -> Result<()> {
    if b.len() != a.dim() {
        return Err(invalid("right-hand side length does not match matrix"));
    }
    Ok(())
}

/// Solves `A x = b` for symmetric positive definite `A` by banded Cholesky,
/// with one step of iterative refinement when needed.
pub fn solve_spd(a: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_rhs(a, b)?;
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    let chol = BandCholesky::factor(a).ok_or(Error::LinearSolverFailure {
        residual: f64::INFINITY,
    })?;
    let mut x = chol.solve(b);
    let (r, mut rel) = relative_residual(a, &x, b);
    if rel > SPD_TOLERANCE {
        let dx = chol.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
        rel = relative_residual(a, &x, b).1;
    }
    if !(rel <= SPD_TOLERANCE) {
        return Err(Error::LinearSolverFailure { residual: rel });
    }
    Ok(x)
}

/// Solves a general nonsingular system by banded LU with partial pivoting.
pub fn solve_general(a: &SparseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_rhs(a, b)?;
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    let lu = BandLu::factor(a)?;
    let mut x = lu.solve(b);
    let (r, mut rel) = relative_residual(a, &x, b);
    if rel > GENERAL_TOLERANCE * 1e-2 {
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
        rel = relative_residual(a, &x, b).1;
    }
    if !(rel <= GENERAL_TOLERANCE) {
        return Err(Error::LinearSolverFailure { residual: rel });
    }
    Ok(x)
}
