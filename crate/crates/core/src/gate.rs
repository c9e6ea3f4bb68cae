//! Exact, dissipation-free realization of the gate as a product of diagonal
//! unitaries: a Stark-shift phase on cavity 1 and one cross-Kerr phase per
//! control-target pair. At the operating point chi_1l * T = pi and
//! lambda_1 * T = 2*pi, so the Fock-diagonal phases realize the
//! controlled-phase truth table exactly, with no stray global phase.

use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use crate::params::DerivedParams;
use crate::state::{DensityMatrix, StateVector};
use crate::units::mhz_to_ang;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Unit-modulus phase per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitary {
    pub layout: HilbertLayout,
    phase_re: Vec<f64>,
    phase_im: Vec<f64>,
}

impl DiagonalUnitary {
    pub fn identity(layout: HilbertLayout) -> Self {
        let n = layout.total_dim();
        DiagonalUnitary {
            layout,
            phase_re: vec![1.0; n],
            phase_im: vec![0.0; n],
        }
    }

    /// From a real phase angle per basis state: U = diag(exp(i angle)).
    pub fn from_angles(layout: HilbertLayout, angles: impl Fn(usize) -> f64) -> Self {
        let n = layout.total_dim();
        let mut phase_re = Vec::with_capacity(n);
        let mut phase_im = Vec::with_capacity(n);
        for i in 0..n {
            let (s, c) = angles(i).sin_cos();
            phase_re.push(c);
            phase_im.push(s);
        }
        DiagonalUnitary {
            layout,
            phase_re,
            phase_im,
        }
    }

    pub fn phase(&self, i: usize) -> Complex64 {
        Complex64::new(self.phase_re[i], self.phase_im[i])
    }

    /// Elementwise product (diagonal unitaries commute).
    pub fn compose(&self, other: &DiagonalUnitary) -> Result<DiagonalUnitary, CoreError> {
        if self.layout != other.layout {
            return Err(CoreError::LayoutMismatch("diagonal unitary layouts differ"));
        }
        let mut out = self.clone();
        for i in 0..out.phase_re.len() {
            let r = self.phase_re[i] * other.phase_re[i] - self.phase_im[i] * other.phase_im[i];
            let im = self.phase_re[i] * other.phase_im[i] + self.phase_im[i] * other.phase_re[i];
            out.phase_re[i] = r;
            out.phase_im[i] = im;
        }
        Ok(out)
    }

    pub fn apply_state(&self, psi: &StateVector) -> Result<StateVector, CoreError> {
        if self.layout != psi.layout {
            return Err(CoreError::LayoutMismatch("unitary vs state layout"));
        }
        let mut out = psi.clone();
        for i in 0..psi.re.len() {
            let (pr, pi) = (self.phase_re[i], self.phase_im[i]);
            out.re[i] = pr * psi.re[i] - pi * psi.im[i];
            out.im[i] = pr * psi.im[i] + pi * psi.re[i];
        }
        Ok(out)
    }

    /// U rho U^dagger.
    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix, CoreError> {
        if self.layout != rho.layout {
            return Err(CoreError::LayoutMismatch("unitary vs density layout"));
        }
        let n = rho.dim();
        let mut out = rho.clone();
        for r in 0..n {
            let (pr, pi) = (self.phase_re[r], self.phase_im[r]);
            for c in 0..n {
                let (qr, qi) = (self.phase_re[c], -self.phase_im[c]);
                let (mr, mi) = rho.mat.get(r, c);
                // p * m * conj(q)
                let ar = pr * mr - pi * mi;
                let ai = pr * mi + pi * mr;
                out.mat.set(r, c, ar * qr - ai * qi, ar * qi + ai * qr);
            }
        }
        Ok(out)
    }

    /// Largest deviation of |phase| from 1.
    pub fn unitarity_defect(&self) -> f64 {
        self.phase_re
            .iter()
            .zip(&self.phase_im)
            .map(|(r, i)| ((r * r + i * i).sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Stark-shift unitary on cavity 1: phases exp(-i lambda_1 m_1 t).
pub fn u1(lambda1_ang: f64, t_ns: f64, layout: &HilbertLayout) -> DiagonalUnitary {
    DiagonalUnitary::from_angles(layout.clone(), |i| {
        -lambda1_ang * layout.photons(i, 1) as f64 * t_ns
    })
}

/// Cross-Kerr unitary on cavities (1, l): phases exp(+i chi m_1 m_l t).
pub fn u1l(
    chi_ang: f64,
    t_ns: f64,
    l: usize,
    layout: &HilbertLayout,
) -> Result<DiagonalUnitary, CoreError> {
    if l < 2 || l > layout.n_cavities() {
        return Err(CoreError::CavityIndex {
            index: l,
            n_cavities: layout.n_cavities(),
        });
    }
    Ok(DiagonalUnitary::from_angles(layout.clone(), |i| {
        chi_ang * (layout.photons(i, 1) * layout.photons(i, l)) as f64 * t_ns
    }))
}

/// Relative defect of the timing conditions chi_1l T = pi and
/// lambda_1 T = 2 pi at a resolved operating point.
pub fn timing_defect(d: &DerivedParams) -> f64 {
    let t = d.gate_time_ns();
    let mut defect = (mhz_to_ang(d.lambda1_mhz) * t - TAU).abs() / TAU;
    for &chi in &d.chi_1l_mhz {
        defect = defect.max((mhz_to_ang(chi) * t - PI).abs() / PI);
    }
    defect
}

/// The complete ideal gate at the operating point: product of the
/// Stark-shift unitary over the gate time and every pairwise cross-Kerr
/// unitary. Valid for any cavity count.
pub fn full_gate(d: &DerivedParams, layout: &HilbertLayout) -> Result<DiagonalUnitary, CoreError> {
    let t = d.gate_time_ns();
    let mut u = u1(mhz_to_ang(d.lambda1_mhz), t, layout);
    for l in 2..=layout.n_cavities() {
        u = u.compose(&u1l(mhz_to_ang(d.chi_1l_mhz[l - 2]), t, l, layout)?)?;
    }
    Ok(u)
}

/// Sign table of the gate on the logical basis: product of (-1)^{i_l} over
/// targets when the control bit is 1, else +1.
pub fn logical_truth_table(n: usize) -> Result<Vec<i8>, CoreError> {
    if n < 2 {
        return Err(CoreError::InvalidParameter(
            "truth table needs n >= 2 qubits".into(),
        ));
    }
    Ok((0..(1usize << n))
        .map(|k| {
            let control = (k >> (n - 1)) & 1;
            if control == 1 && (k & ((1 << (n - 1)) - 1)).count_ones() % 2 == 1 {
                -1
            } else {
                1
            }
        })
        .collect())
}

/// Max-norm of the commutator between the two pieces of the ground-sector
/// split (a diagnostic that the factorized gate form is exact).
pub fn verify_commutation(
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<f64, CoreError> {
    let (h0, hint) = crate::hamiltonians::reduced_split(d, layout)?;
    h0.commutator_max_norm(&hint)
}
