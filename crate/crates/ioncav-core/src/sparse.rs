//! Minimal complex CSR matrix with exactly the kernels the simulator needs:
//! mat-vec, sums, scalar multiples, adjoint, products, Kronecker products
//! and a few norms. Dimensions stay below a few thousand, so correctness
//! and determinism win over tuning.

use num_complex::Complex64 as C64;

#[derive(Clone, Debug, PartialEq)]
pub struct SpMat {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<C64>,
}

impl SpMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SpMat {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    /// Build from (row, col, value) triplets. Duplicates are summed,
    /// exact zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, C64)>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < nrows && c < ncols);
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        let mut m = SpMat { nrows, ncols, indptr, indices, data };
        m.drop_zeros();
        m
    }

    pub fn identity(n: usize) -> Self {
        SpMat::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let triplets = diag
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, v))
            .collect();
        SpMat::from_triplets(n, n, triplets)
    }

    fn drop_zeros(&mut self) {
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let v = self.data[k];
                if v != C64::new(0.0, 0.0) {
                    indices.push(self.indices[k]);
                    data.push(v);
                    indptr[r + 1] += 1;
                }
            }
        }
        for r in 0..self.nrows {
            indptr[r + 1] += indptr[r];
        }
        self.indptr = indptr;
        self.indices = indices;
        self.data = data;
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        for k in self.indptr[row]..self.indptr[row + 1] {
            if self.indices[k] == col {
                return self.data[k];
            }
        }
        C64::new(0.0, 0.0)
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.ncols, "matvec dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.nrows];
        for r in 0..self.nrows {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[k] * v[self.indices[k]];
            }
            out[r] = acc;
        }
        out
    }

    pub fn scaled(&self, s: C64) -> SpMat {
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols, other.ncols);
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut data = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            let (mut i, mut j) = (self.indptr[r], other.indptr[r]);
            let (iend, jend) = (self.indptr[r + 1], other.indptr[r + 1]);
            while i < iend || j < jend {
                let (col, v) = if j >= jend
                    || (i < iend && self.indices[i] < other.indices[j])
                {
                    let out = (self.indices[i], self.data[i]);
                    i += 1;
                    out
                } else if i >= iend || other.indices[j] < self.indices[i] {
                    let out = (other.indices[j], other.data[j]);
                    j += 1;
                    out
                } else {
                    let out = (self.indices[i], self.data[i] + other.data[j]);
                    i += 1;
                    j += 1;
                    out
                };
                indices.push(col);
                data.push(v);
                indptr[r + 1] += 1;
            }
        }
        for r in 0..self.nrows {
            indptr[r + 1] += indptr[r];
        }
        let mut m = SpMat { nrows: self.nrows, ncols: self.ncols, indptr, indices, data };
        m.drop_zeros();
        m
    }

    pub fn sub(&self, other: &SpMat) -> SpMat {
        self.add(&other.scaled(C64::new(-1.0, 0.0)))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SpMat {
        let mut triplets = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                triplets.push((self.indices[k], r, self.data[k].conj()));
            }
        }
        SpMat::from_triplets(self.ncols, self.nrows, triplets)
    }

    pub fn matmul(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.ncols, other.nrows);
        let mut triplets = Vec::new();
        let mut row_acc = vec![C64::new(0.0, 0.0); other.ncols];
        let mut touched = Vec::new();
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let mid = self.indices[k];
                let v = self.data[k];
                for k2 in other.indptr[mid]..other.indptr[mid + 1] {
                    let col = other.indices[k2];
                    if row_acc[col] == C64::new(0.0, 0.0) {
                        touched.push(col);
                    }
                    row_acc[col] += v * other.data[k2];
                }
            }
            for &col in &touched {
                triplets.push((r, col, row_acc[col]));
                row_acc[col] = C64::new(0.0, 0.0);
            }
            touched.clear();
        }
        SpMat::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// Kronecker product; the left factor varies slowest.
    pub fn kron(&self, other: &SpMat) -> SpMat {
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for r1 in 0..self.nrows {
            for k1 in self.indptr[r1]..self.indptr[r1 + 1] {
                let c1 = self.indices[k1];
                let v1 = self.data[k1];
                for r2 in 0..other.nrows {
                    for k2 in other.indptr[r2]..other.indptr[r2 + 1] {
                        triplets.push((
                            r1 * other.nrows + r2,
                            c1 * other.ncols + other.indices[k2],
                            v1 * other.data[k2],
                        ));
                    }
                }
            }
        }
        SpMat::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, triplets)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum; upper bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for r in 0..self.nrows {
            let s: f64 = (self.indptr[r]..self.indptr[r + 1])
                .map(|k| self.data[k].norm())
                .sum();
            best = best.max(s);
        }
        best
    }

    pub fn trace(&self) -> C64 {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// Max |[M, D]| entry for diagonal D; exact zeros when M connects only
    /// basis states with equal D eigenvalue.
    pub fn commutator_with_diagonal_max(&self, diag: &[C64]) -> f64 {
        assert_eq!(diag.len(), self.nrows);
        assert_eq!(diag.len(), self.ncols);
        let mut best = 0.0f64;
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[k];
                best = best.max((self.data[k] * (diag[c] - diag[r])).norm());
            }
        }
        best
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut out = vec![vec![C64::new(0.0, 0.0); self.ncols]; self.nrows];
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                out[r][self.indices[k]] = self.data[k];
            }
        }
        out
    }
}
