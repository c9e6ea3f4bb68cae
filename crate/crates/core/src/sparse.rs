//! Complex sparse matrices.
//!
//! Operators are assembled in coordinate (triplet) form and frozen to a
//! compressed-row representation before any evolution touches them. Frozen
//! operators are immutable; all mutating constructors return new values.
//! Values are stored as separate real/imaginary arrays so that the
//! sparse-dense kernels in [`crate::dense`] reduce to fused real multiply-add
//! streams.

use crate::dense::DenseMatrix;
use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use num_complex::Complex64;

/// Sparse operator on a single subsystem (one cavity or the qutrit),
/// without composite-layout bookkeeping. Embed it with
/// [`crate::operators::embed`] to act on the full space.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl LocalOperator {
    pub fn new(dim: usize, mut entries: Vec<(usize, usize, Complex64)>) -> Self {
        entries.retain(|&(_, _, v)| v != Complex64::ZERO);
        entries.sort_by_key(|&(r, c, _)| (r, c));
        // merge duplicates
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "local entry out of range");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        LocalOperator {
            dim,
            entries: merged,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        LocalOperator {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        LocalOperator {
            dim,
            entries: (0..dim).map(|i| (i, i, Complex64::ONE)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries
            .iter()
            .find(|&&(er, ec, _)| er == r && ec == c)
            .map(|&(_, _, v)| v)
            .unwrap_or(Complex64::ZERO)
    }

    /// Conjugate transpose. Applying it twice reproduces the original
    /// bitwise (transposition is an index swap, conjugation flips a sign).
    pub fn adjoint(&self) -> Self {
        LocalOperator::new(
            self.dim,
            self.entries
                .iter()
                .map(|&(r, c, v)| (c, r, v.conj()))
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        LocalOperator::new(
            self.dim,
            self.entries.iter().map(|&(r, c, v)| (r, c, s * v)).collect(),
        )
    }

    pub fn add(&self, other: &LocalOperator) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut e = self.entries.clone();
        e.extend_from_slice(&other.entries);
        LocalOperator::new(self.dim, e)
    }

    /// self * other.
    pub fn matmul(&self, other: &LocalOperator) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Vec::new();
        for &(r, k, a) in &self.entries {
            for &(k2, c, b) in &other.entries {
                if k2 == k {
                    out.push((r, c, a * b));
                }
            }
        }
        LocalOperator::new(self.dim, out)
    }
}

/// Compressed-row complex sparse matrix. Column indices are sorted within
/// each row and validated at construction, which lets the dense kernels use
/// unchecked indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    val_re: Vec<f64>,
    val_im: Vec<f64>,
}

impl Csr {
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Self {
        let mut t: Vec<(usize, usize, Complex64)> = triplets
            .iter()
            .copied()
            .filter(|&(_, _, v)| v != Complex64::ZERO)
            .collect();
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            assert!(r < nrows && c < ncols, "triplet out of range");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != Complex64::ZERO);
        let mut row_ptr = vec![0u32; nrows + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for k in 0..nrows {
            row_ptr[k + 1] += row_ptr[k];
        }
        let cols = merged.iter().map(|&(_, c, _)| c as u32).collect();
        let val_re = merged.iter().map(|&(_, _, v)| v.re).collect();
        let val_im = merged.iter().map(|&(_, _, v)| v.im).collect();
        Csr {
            nrows,
            ncols,
            row_ptr,
            cols,
            val_re,
            val_im,
        }
    }

    pub fn identity(n: usize) -> Self {
        Csr {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n as u32).collect(),
            cols: (0..n as u32).collect(),
            val_re: vec![1.0; n],
            val_im: vec![0.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn row_range(&self, r: usize) -> std::ops::Range<usize> {
        self.row_ptr[r] as usize..self.row_ptr[r + 1] as usize
    }

    #[inline]
    pub fn col_at(&self, k: usize) -> usize {
        self.cols[k] as usize
    }

    #[inline]
    pub fn val_at(&self, k: usize) -> (f64, f64) {
        (self.val_re[k], self.val_im[k])
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for k in self.row_range(r) {
                out.push((
                    r,
                    self.col_at(k),
                    Complex64::new(self.val_re[k], self.val_im[k]),
                ));
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let t: Vec<_> = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        Csr::from_triplets(self.ncols, self.nrows, &t)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let t: Vec<_> = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (r, c, s * v))
            .collect();
        Csr::from_triplets(self.nrows, self.ncols, &t)
    }

    pub fn add(&self, other: &Csr) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t = self.triplets();
        t.extend(other.triplets());
        Csr::from_triplets(self.nrows, self.ncols, &t)
    }

    /// self * other (sparse-sparse).
    pub fn matmul(&self, other: &Csr) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut t = Vec::new();
        for r in 0..self.nrows {
            for k in self.row_range(r) {
                let mid = self.col_at(k);
                let a = Complex64::new(self.val_re[k], self.val_im[k]);
                for k2 in other.row_range(mid) {
                    let c = other.col_at(k2);
                    let b = Complex64::new(other.val_re[k2], other.val_im[k2]);
                    t.push((r, c, a * b));
                }
            }
        }
        Csr::from_triplets(self.nrows, other.ncols, &t)
    }

    /// Dense matrix-vector product y += alpha * A x on split re/im slices.
    pub fn matvec_acc(
        &self,
        alpha: Complex64,
        xr: &[f64],
        xi: &[f64],
        yr: &mut [f64],
        yi: &mut [f64],
    ) {
        for r in 0..self.nrows {
            let mut ar = 0.0;
            let mut ai = 0.0;
            for k in self.row_range(r) {
                let c = self.col_at(k);
                let (vr, vi) = self.val_at(k);
                ar += vr * xr[c] - vi * xi[c];
                ai += vr * xi[c] + vi * xr[c];
            }
            yr[r] += alpha.re * ar - alpha.im * ai;
            yi[r] += alpha.re * ai + alpha.im * ar;
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros_rect(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            d.add(r, c, v.re, v.im);
        }
        d
    }

    /// Mutable access to the value arrays; the sparsity pattern stays fixed.
    pub(crate) fn values_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.val_re, &mut self.val_im)
    }

    pub fn max_abs_diff(&self, other: &Csr) -> f64 {
        self.to_dense().max_abs_diff(&other.to_dense())
    }
}

/// Sparse operator on the composite space of a [`HilbertLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    layout: HilbertLayout,
    csr: Csr,
}

impl SparseOperator {
    pub fn from_triplets(
        layout: HilbertLayout,
        triplets: &[(usize, usize, Complex64)],
    ) -> Self {
        let n = layout.total_dim();
        SparseOperator {
            layout,
            csr: Csr::from_triplets(n, n, triplets),
        }
    }

    pub fn identity(layout: HilbertLayout) -> Self {
        let n = layout.total_dim();
        SparseOperator {
            layout,
            csr: Csr::identity(n),
        }
    }

    pub fn zeros(layout: HilbertLayout) -> Self {
        SparseOperator::from_triplets(layout, &[])
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn csr(&self) -> &Csr {
        &self.csr
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn nnz(&self) -> usize {
        self.csr.nnz()
    }

    pub fn adjoint(&self) -> Self {
        SparseOperator {
            layout: self.layout.clone(),
            csr: self.csr.adjoint(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SparseOperator {
            layout: self.layout.clone(),
            csr: self.csr.scale(s),
        }
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self, CoreError> {
        self.check_layout(other)?;
        Ok(SparseOperator {
            layout: self.layout.clone(),
            csr: self.csr.add(&other.csr),
        })
    }

    pub fn matmul(&self, other: &SparseOperator) -> Result<Self, CoreError> {
        self.check_layout(other)?;
        Ok(SparseOperator {
            layout: self.layout.clone(),
            csr: self.csr.matmul(&other.csr),
        })
    }

    /// max_ij |A_ij - B_ij|.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> f64 {
        self.csr.max_abs_diff(&other.csr)
    }

    /// max-norm of the commutator [self, other].
    pub fn commutator_max_norm(&self, other: &SparseOperator) -> Result<f64, CoreError> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.csr.max_abs_diff(&ba.csr))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.csr.max_abs_diff(&self.csr.adjoint()) <= tol
    }

    pub fn to_dense(&self) -> DenseMatrix {
        self.csr.to_dense()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        for k in self.csr.row_range(r) {
            if self.csr.col_at(k) == c {
                let (re, im) = self.csr.val_at(k);
                return Complex64::new(re, im);
            }
        }
        Complex64::ZERO
    }

    /// <bra| A |ket> for basis indices.
    pub fn matrix_element(&self, bra: usize, ket: usize) -> Complex64 {
        self.get(bra, ket)
    }

    /// Real expectation <psi| A |psi> (returns the complex value).
    pub fn expectation(&self, psi: &crate::state::StateVector) -> Complex64 {
        let n = self.dim();
        let mut yr = vec![0.0; n];
        let mut yi = vec![0.0; n];
        self.csr
            .matvec_acc(Complex64::ONE, &psi.re, &psi.im, &mut yr, &mut yi);
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..n {
            re += psi.re[k] * yr[k] + psi.im[k] * yi[k];
            im += psi.re[k] * yi[k] - psi.im[k] * yr[k];
        }
        Complex64::new(re, im)
    }

    fn check_layout(&self, other: &SparseOperator) -> Result<(), CoreError> {
        if self.layout != other.layout {
            return Err(CoreError::LayoutMismatch("operator layouts differ"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_twice_is_bitwise_identity() {
        let m = Csr::from_triplets(
            3,
            3,
            &[(0, 1, c(1.5, -2.25)), (2, 0, c(-0.125, 3.0)), (1, 1, c(0.7, 0.1))],
        );
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn local_adjoint_twice_is_bitwise_identity() {
        let m = LocalOperator::new(4, vec![(0, 1, c(1.0, 2.0)), (3, 2, c(-0.5, 0.25))]);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn matmul_matches_dense() {
        let a = Csr::from_triplets(3, 3, &[(0, 1, c(2.0, 0.0)), (1, 2, c(0.0, 1.0))]);
        let b = Csr::from_triplets(3, 3, &[(1, 0, c(1.0, 1.0)), (2, 2, c(3.0, 0.0))]);
        let ab = a.matmul(&b);
        // dense oracle
        let (da, db) = (a.to_dense(), b.to_dense());
        let mut oracle = DenseMatrix::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                let mut sr = 0.0;
                let mut si = 0.0;
                for k in 0..3 {
                    let (ar, ai) = da.get(i, k);
                    let (br, bi) = db.get(k, j);
                    sr += ar * br - ai * bi;
                    si += ar * bi + ai * br;
                }
                oracle.set(i, j, sr, si);
            }
        }
        assert!(ab.to_dense().max_abs_diff(&oracle) < 1e-15);
    }

    #[test]
    fn duplicate_triplets_merge() {
        let m = Csr::from_triplets(2, 2, &[(0, 0, c(1.0, 0.0)), (0, 0, c(2.0, 0.0))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.val_at(0), (3.0, 0.0));
    }
}
