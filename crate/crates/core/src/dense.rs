//! Dense complex matrices with split real/imaginary storage.
//!
//! The master-equation right-hand side spends nearly all of its time in the
//! three accumulation kernels below (sparse*dense, dense*sparse and the
//! diagonal anticommutator). Split storage turns every complex axpy into
//! four independent real multiply-add streams, which the compiler
//! autovectorizes. All kernels are sequential and therefore bitwise
//! reproducible.

use crate::sparse::Csr;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    pub(crate) re: Vec<f64>,
    pub(crate) im: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self::zeros_rect(n, n)
    }

    pub fn zeros_rect(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            re: vec![0.0; nrows * ncols],
            im: vec![0.0; nrows * ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> (f64, f64) {
        let k = r * self.ncols + c;
        (self.re[k], self.im[k])
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, re: f64, im: f64) {
        let k = r * self.ncols + c;
        self.re[k] = re;
        self.im[k] = im;
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, re: f64, im: f64) {
        let k = r * self.ncols + c;
        self.re[k] += re;
        self.im[k] += im;
    }

    pub fn fill_zero(&mut self) {
        self.re.fill(0.0);
        self.im.fill(0.0);
    }

    pub fn copy_from(&mut self, other: &DenseMatrix) {
        debug_assert_eq!(self.re.len(), other.re.len());
        self.re.copy_from_slice(&other.re);
        self.im.copy_from_slice(&other.im);
    }

    /// self += a * other, real coefficient.
    pub fn acc_scaled(&mut self, a: f64, other: &DenseMatrix) {
        for (y, x) in self.re.iter_mut().zip(&other.re) {
            *y += a * x;
        }
        for (y, x) in self.im.iter_mut().zip(&other.im) {
            *y += a * x;
        }
    }

    /// self = base + a * k, real coefficient, single pass.
    pub fn assign_add_scaled(&mut self, base: &DenseMatrix, a: f64, k: &DenseMatrix) {
        for ((y, b), x) in self.re.iter_mut().zip(&base.re).zip(&k.re) {
            *y = b + a * x;
        }
        for ((y, b), x) in self.im.iter_mut().zip(&base.im).zip(&k.im) {
            *y = b + a * x;
        }
    }

    /// First-stage variant: acc = k and stage = base + c * k in one pass.
    pub fn rk_first(
        acc: &mut DenseMatrix,
        stage: &mut DenseMatrix,
        base: &DenseMatrix,
        k: &DenseMatrix,
        c: f64,
    ) {
        for (((a, s), b), x) in acc
            .re
            .iter_mut()
            .zip(stage.re.iter_mut())
            .zip(&base.re)
            .zip(&k.re)
        {
            *a = *x;
            *s = b + c * x;
        }
        for (((a, s), b), x) in acc
            .im
            .iter_mut()
            .zip(stage.im.iter_mut())
            .zip(&base.im)
            .zip(&k.im)
        {
            *a = *x;
            *s = b + c * x;
        }
    }

    /// Fused Runge-Kutta bookkeeping: acc += w * k and stage = base + c * k
    /// in one pass over k.
    pub fn rk_stage(
        acc: &mut DenseMatrix,
        stage: &mut DenseMatrix,
        base: &DenseMatrix,
        k: &DenseMatrix,
        w: f64,
        c: f64,
    ) {
        for (((a, s), b), x) in acc
            .re
            .iter_mut()
            .zip(stage.re.iter_mut())
            .zip(&base.re)
            .zip(&k.re)
        {
            *a += w * x;
            *s = b + c * x;
        }
        for (((a, s), b), x) in acc
            .im
            .iter_mut()
            .zip(stage.im.iter_mut())
            .zip(&base.im)
            .zip(&k.im)
        {
            *a += w * x;
            *s = b + c * x;
        }
    }

    /// Final Runge-Kutta update: self += w * (acc + k) in one pass.
    pub fn rk_finish(&mut self, acc: &DenseMatrix, k: &DenseMatrix, w: f64) {
        for ((y, a), x) in self.re.iter_mut().zip(&acc.re).zip(&k.re) {
            *y += w * (a + x);
        }
        for ((y, a), x) in self.im.iter_mut().zip(&acc.im).zip(&k.im) {
            *y += w * (a + x);
        }
    }

    pub fn scale_real(&mut self, a: f64) {
        self.re.iter_mut().for_each(|x| *x *= a);
        self.im.iter_mut().for_each(|x| *x *= a);
    }

    pub fn trace(&self) -> (f64, f64) {
        debug_assert_eq!(self.nrows, self.ncols);
        let mut tr = 0.0;
        let mut ti = 0.0;
        for k in 0..self.nrows {
            let idx = k * self.ncols + k;
            tr += self.re[idx];
            ti += self.im[idx];
        }
        (tr, ti)
    }

    pub fn max_abs(&self) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| (r * r + i * i).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .zip(other.re.iter().zip(&other.im))
            .map(|((ar, ai), (br, bi))| {
                let dr = ar - br;
                let di = ai - bi;
                (dr * dr + di * di).sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().all(|x| x.is_finite()) && self.im.iter().all(|x| x.is_finite())
    }

    /// self = (self + self^dagger) / 2. Returns the largest |self - self^dagger|
    /// entry seen before symmetrization.
    pub fn hermitize(&mut self) -> f64 {
        debug_assert_eq!(self.nrows, self.ncols);
        let n = self.nrows;
        let mut defect: f64 = 0.0;
        for r in 0..n {
            // diagonal: imaginary part must vanish
            let d = r * n + r;
            defect = defect.max(2.0 * self.im[d].abs());
            self.im[d] = 0.0;
            for c in (r + 1)..n {
                let a = r * n + c;
                let b = c * n + r;
                let dr = self.re[a] - self.re[b];
                let di = self.im[a] + self.im[b];
                defect = defect.max((dr * dr + di * di).sqrt());
                let sr = 0.5 * (self.re[a] + self.re[b]);
                let si = 0.5 * (self.im[a] - self.im[b]);
                self.re[a] = sr;
                self.im[a] = si;
                self.re[b] = sr;
                self.im[b] = -si;
            }
        }
        defect
    }

    /// Quadratic form <psi| M |psi> for split-storage amplitude slices.
    pub fn quadratic_form(&self, psi_re: &[f64], psi_im: &[f64]) -> (f64, f64) {
        let n = self.ncols;
        let mut qr = 0.0;
        let mut qi = 0.0;
        for r in 0..self.nrows {
            let row_re = &self.re[r * n..(r + 1) * n];
            let row_im = &self.im[r * n..(r + 1) * n];
            let mut vr = 0.0;
            let mut vi = 0.0;
            for ((mr, mi), (xr, xi)) in row_re
                .iter()
                .zip(row_im)
                .zip(psi_re.iter().zip(psi_im))
            {
                vr += mr * xr - mi * xi;
                vi += mr * xi + mi * xr;
            }
            // conj(psi_r) * v
            qr += psi_re[r] * vr + psi_im[r] * vi;
            qi += psi_re[r] * vi - psi_im[r] * vr;
        }
        (qr, qi)
    }
}

impl DenseMatrix {
    /// y += (ar + i*ai) * M x for split-storage vectors.
    pub fn matvec_acc(
        &self,
        ar: f64,
        ai: f64,
        xr: &[f64],
        xi: &[f64],
        yr: &mut [f64],
        yi: &mut [f64],
    ) {
        let n = self.ncols;
        for r in 0..self.nrows {
            let row_re = &self.re[r * n..(r + 1) * n];
            let row_im = &self.im[r * n..(r + 1) * n];
            let mut sr = 0.0;
            let mut si = 0.0;
            for ((mr, mi), (vr, vi)) in row_re.iter().zip(row_im).zip(xr.iter().zip(xi)) {
                sr += mr * vr - mi * vi;
                si += mr * vi + mi * vr;
            }
            yr[r] += ar * sr - ai * si;
            yi[r] += ar * si + ai * sr;
        }
    }
}

/// out += (ar + i*ai) * A * B for dense A, dense B.
pub fn dmm_acc(ar: f64, ai: f64, a: &DenseMatrix, b: &DenseMatrix, out: &mut DenseMatrix) {
    debug_assert_eq!(a.ncols, b.nrows);
    let n = b.ncols;
    let na = a.ncols;
    for r in 0..a.nrows {
        let a_re = &a.re[r * na..(r + 1) * na];
        let a_im = &a.im[r * na..(r + 1) * na];
        let out_re = &mut out.re[r * n..(r + 1) * n];
        let out_im = &mut out.im[r * n..(r + 1) * n];
        for k in 0..na {
            let (vr, vi) = (a_re[k], a_im[k]);
            if vr == 0.0 && vi == 0.0 {
                continue;
            }
            let wr = ar * vr - ai * vi;
            let wi = ar * vi + ai * vr;
            let b_re = &b.re[k * n..(k + 1) * n];
            let b_im = &b.im[k * n..(k + 1) * n];
            for ((or, oi), (br, bi)) in out_re
                .iter_mut()
                .zip(out_im.iter_mut())
                .zip(b_re.iter().zip(b_im))
            {
                *or += wr * br - wi * bi;
                *oi += wr * bi + wi * br;
            }
        }
    }
}

/// out += (ar + i*ai) * A * B for sparse A, dense B.
pub fn spmm_acc(ar: f64, ai: f64, a: &Csr, b: &DenseMatrix, out: &mut DenseMatrix) {
    debug_assert_eq!(a.ncols(), b.nrows);
    debug_assert_eq!(a.nrows(), out.nrows);
    let n = b.ncols;
    for r in 0..a.nrows() {
        let out_re = &mut out.re[r * n..(r + 1) * n];
        let out_im = &mut out.im[r * n..(r + 1) * n];
        for k in a.row_range(r) {
            let c = a.col_at(k);
            let (vr, vi) = a.val_at(k);
            let wr = ar * vr - ai * vi;
            let wi = ar * vi + ai * vr;
            let b_re = &b.re[c * n..(c + 1) * n];
            let b_im = &b.im[c * n..(c + 1) * n];
            for ((or, oi), (br, bi)) in out_re
                .iter_mut()
                .zip(out_im.iter_mut())
                .zip(b_re.iter().zip(b_im))
            {
                *or += wr * br - wi * bi;
                *oi += wr * bi + wi * br;
            }
        }
    }
}

/// out = A * B for sparse A, dense B (rows of `out` are overwritten).
/// Sources are consumed two per pass so the output row traffic is amortized.
pub fn spmm_write(a: &Csr, b: &DenseMatrix, out: &mut DenseMatrix) {
    debug_assert_eq!(a.ncols(), b.nrows);
    debug_assert_eq!(a.nrows(), out.nrows);
    let n = b.ncols;
    for r in 0..a.nrows() {
        let out_re = &mut out.re[r * n..(r + 1) * n];
        let out_im = &mut out.im[r * n..(r + 1) * n];
        let range = a.row_range(r);
        let mut k = range.start;
        let mut first = true;
        // pairs of sources
        while k + 1 < range.end {
            let c0 = a.col_at(k);
            let (w0r, w0i) = a.val_at(k);
            let c1 = a.col_at(k + 1);
            let (w1r, w1i) = a.val_at(k + 1);
            let b0_re = &b.re[c0 * n..(c0 + 1) * n];
            let b0_im = &b.im[c0 * n..(c0 + 1) * n];
            let b1_re = &b.re[c1 * n..(c1 + 1) * n];
            let b1_im = &b.im[c1 * n..(c1 + 1) * n];
            if first {
                for j in 0..n {
                    out_re[j] = w0r * b0_re[j] - w0i * b0_im[j] + w1r * b1_re[j] - w1i * b1_im[j];
                    out_im[j] = w0r * b0_im[j] + w0i * b0_re[j] + w1r * b1_im[j] + w1i * b1_re[j];
                }
                first = false;
            } else {
                for j in 0..n {
                    out_re[j] += w0r * b0_re[j] - w0i * b0_im[j] + w1r * b1_re[j] - w1i * b1_im[j];
                    out_im[j] += w0r * b0_im[j] + w0i * b0_re[j] + w1r * b1_im[j] + w1i * b1_re[j];
                }
            }
            k += 2;
        }
        if k < range.end {
            let c = a.col_at(k);
            let (wr, wi) = a.val_at(k);
            let b_re = &b.re[c * n..(c + 1) * n];
            let b_im = &b.im[c * n..(c + 1) * n];
            if first {
                for j in 0..n {
                    out_re[j] = wr * b_re[j] - wi * b_im[j];
                    out_im[j] = wr * b_im[j] + wi * b_re[j];
                }
                first = false;
            } else {
                for j in 0..n {
                    out_re[j] += wr * b_re[j] - wi * b_im[j];
                    out_im[j] += wr * b_im[j] + wi * b_re[j];
                }
            }
        }
        if first {
            out_re.fill(0.0);
            out_im.fill(0.0);
        }
    }
}

/// out += (ar + i*ai) * B * A for dense B, sparse A.
pub fn mmsp_acc(ar: f64, ai: f64, b: &DenseMatrix, a: &Csr, out: &mut DenseMatrix) {
    debug_assert_eq!(b.ncols, a.nrows());
    debug_assert_eq!(a.ncols(), out.ncols);
    let n = out.ncols;
    let nb = b.ncols;
    for r in 0..b.nrows {
        let b_re = &b.re[r * nb..(r + 1) * nb];
        let b_im = &b.im[r * nb..(r + 1) * nb];
        let out_re = &mut out.re[r * n..(r + 1) * n];
        let out_im = &mut out.im[r * n..(r + 1) * n];
        for k in 0..nb {
            let range = a.row_range(k);
            if range.is_empty() {
                continue;
            }
            let xr = b_re[k];
            let xi = b_im[k];
            // (ar + i ai) * (xr + i xi)
            let sr = ar * xr - ai * xi;
            let si = ar * xi + ai * xr;
            for idx in range {
                let c = a.col_at(idx);
                let (vr, vi) = a.val_at(idx);
                out_re[c] += sr * vr - si * vi;
                out_im[c] += sr * vi + si * vr;
            }
        }
    }
}

/// out[r][c] += coeff * (d[r] + d[c]) * b[r][c] for a real diagonal d.
pub fn diag_anticomm_acc(coeff: f64, d: &[f64], b: &DenseMatrix, out: &mut DenseMatrix) {
    let n = b.ncols;
    for r in 0..b.nrows {
        let dr = d[r];
        let b_re = &b.re[r * n..(r + 1) * n];
        let b_im = &b.im[r * n..(r + 1) * n];
        let out_re = &mut out.re[r * n..(r + 1) * n];
        let out_im = &mut out.im[r * n..(r + 1) * n];
        for (((or, oi), (br, bi)), dc) in out_re
            .iter_mut()
            .zip(out_im.iter_mut())
            .zip(b_re.iter().zip(b_im))
            .zip(d.iter())
        {
            let w = coeff * (dr + dc);
            *or += w * br;
            *oi += w * bi;
        }
    }
}
