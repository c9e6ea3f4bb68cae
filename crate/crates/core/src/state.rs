//! State vectors and density matrices on a composite layout.

use crate::dense::DenseMatrix;
use crate::hilbert::HilbertLayout;
use num_complex::Complex64;

/// Dense complex state vector with split re/im storage.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub layout: HilbertLayout,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateVector {
    pub fn zeros(layout: HilbertLayout) -> Self {
        let n = layout.total_dim();
        StateVector {
            layout,
            re: vec![0.0; n],
            im: vec![0.0; n],
        }
    }

    /// Basis state |occ[0]> (x) |occ[1]> (x) ...
    pub fn basis(layout: HilbertLayout, occupations: &[usize]) -> Self {
        let idx = layout.index_of(occupations);
        let mut s = StateVector::zeros(layout);
        s.re[idx] = 1.0;
        s
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    #[inline]
    pub fn amp(&self, i: usize) -> Complex64 {
        Complex64::new(self.re[i], self.im[i])
    }

    #[inline]
    pub fn set_amp(&mut self, i: usize, v: Complex64) {
        self.re[i] = v.re;
        self.im[i] = v.im;
    }

    pub fn norm(&self) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| r * r + i * i)
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            self.re.iter_mut().for_each(|x| *x *= inv);
            self.im.iter_mut().for_each(|x| *x *= inv);
        }
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..self.re.len() {
            let (ar, ai) = (self.re[k], self.im[k]);
            let (br, bi) = (other.re[k], other.im[k]);
            re += ar * br + ai * bi;
            im += ar * bi - ai * br;
        }
        Complex64::new(re, im)
    }

    /// |<self|other>|.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }
}

/// Dense Hermitian trace-one matrix evolved by the Lindblad engine.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub layout: HilbertLayout,
    pub mat: DenseMatrix,
}

impl DensityMatrix {
    pub fn zeros(layout: HilbertLayout) -> Self {
        let n = layout.total_dim();
        DensityMatrix {
            layout,
            mat: DenseMatrix::zeros(n),
        }
    }

    /// |psi><psi|.
    pub fn from_pure(psi: &StateVector) -> Self {
        let n = psi.dim();
        let mut mat = DenseMatrix::zeros(n);
        for i in 0..n {
            let (ar, ai) = (psi.re[i], psi.im[i]);
            for j in 0..n {
                let (br, bi) = (psi.re[j], psi.im[j]);
                // a_i * conj(a_j)
                mat.set(i, j, ar * br + ai * bi, ai * br - ar * bi);
            }
        }
        DensityMatrix {
            layout: psi.layout.clone(),
            mat,
        }
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn trace(&self) -> Complex64 {
        let (r, i) = self.mat.trace();
        Complex64::new(r, i)
    }

    /// max |rho - rho^dagger| without modifying rho.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect: f64 = 0.0;
        for r in 0..n {
            defect = defect.max(2.0 * self.mat.get(r, r).1.abs());
            for c in (r + 1)..n {
                let (ar, ai) = self.mat.get(r, c);
                let (br, bi) = self.mat.get(c, r);
                let dr = ar - br;
                let di = ai + bi;
                defect = defect.max((dr * dr + di * di).sqrt());
            }
        }
        defect
    }

    /// Expectation value tr(A rho) of a diagonal-free sparse operator is not
    /// special-cased; this is the general contraction.
    pub fn expectation(&self, op: &crate::sparse::SparseOperator) -> Complex64 {
        // tr(A rho) = sum_{r,c} A[r,c] rho[c,r]
        let mut s = Complex64::ZERO;
        for (r, c, v) in op.csr().triplets() {
            let (xr, xi) = self.mat.get(c, r);
            s += v * Complex64::new(xr, xi);
        }
        s
    }
}
