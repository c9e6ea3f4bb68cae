//! Cat-state encoding of logical qubits in truncated Fock space.
//!
//! The logical |0> / |1> of one mode are the even and odd coherent
//! superpositions N+-(|alpha> +- |-alpha>), which have disjoint photon-number
//! parity support and are therefore exactly orthogonal for any alpha > 0.
//! The amplitude alpha is real and non-negative here.
//!
//! Multi-qubit logical states live on |i_1 i_2 ... i_n> with qubit 1 (the
//! control, cavity 1) as the most significant bit.

use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use crate::state::{DensityMatrix, StateVector};
use num_complex::Complex64;

/// Truncated coherent-state coefficient vector (real for real alpha), with
/// the pre-renormalization truncation leak.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentVector {
    pub amps: Vec<f64>,
    /// 1 - sum of retained |c_n|^2 before renormalization.
    pub leak: f64,
}

/// Truncated coherent state |alpha>: coefficients e^{-a^2/2} a^n / sqrt(n!),
/// renormalized after the cut.
pub fn coherent_vector(alpha: f64, n_cut: usize) -> Result<CoherentVector, CoreError> {
    if n_cut < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "coherent_vector needs n_cut >= 2, got {n_cut}"
        )));
    }
    let mut amps = Vec::with_capacity(n_cut);
    let mut c = (-alpha * alpha / 2.0).exp();
    for n in 0..n_cut {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    let kept: f64 = amps.iter().map(|a| a * a).sum();
    let leak = 1.0 - kept;
    let inv = 1.0 / kept.sqrt();
    amps.iter_mut().for_each(|a| *a *= inv);
    Ok(CoherentVector { amps, leak })
}

/// Even/odd cat basis of one mode: the logical |0> and |1>.
#[derive(Debug, Clone, PartialEq)]
pub struct CatBasis {
    pub alpha: f64,
    pub n_cut: usize,
    /// Logical |0>: support on even Fock indices only.
    pub even: Vec<f64>,
    /// Logical |1>: support on odd Fock indices only.
    pub odd: Vec<f64>,
    pub even_leak: f64,
    pub odd_leak: f64,
}

impl CatBasis {
    /// The vector for logical bit value `bit`.
    pub fn logical(&self, bit: usize) -> &[f64] {
        if bit == 0 {
            &self.even
        } else {
            &self.odd
        }
    }
}

/// Build the cat basis from the parity-split coefficients
/// C_2m = 2 N+ e^{-a^2/2} a^{2m} / sqrt((2m)!) and
/// C_{2n+1} = 2 N- e^{-a^2/2} a^{2n+1} / sqrt((2n+1)!), truncated and
/// renormalized. Rejects alpha = 0, where the odd state is ill-defined.
pub fn cat_basis(alpha: f64, n_cut: usize) -> Result<CatBasis, CoreError> {
    if alpha <= 0.0 {
        return Err(CoreError::InvalidParameter(
            "cat_basis needs alpha > 0 (odd cat state is ill-defined at alpha = 0)".into(),
        ));
    }
    if n_cut < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "cat_basis needs n_cut >= 2, got {n_cut}"
        )));
    }
    let a2 = alpha * alpha;
    let n_plus = 1.0 / (2.0 * (1.0 + (-2.0 * a2).exp())).sqrt();
    let n_minus = 1.0 / (2.0 * (1.0 - (-2.0 * a2).exp())).sqrt();
    // c_n = e^{-a^2/2} a^n / sqrt(n!) by recurrence
    let mut coherent = Vec::with_capacity(n_cut);
    let mut c = (-a2 / 2.0).exp();
    for n in 0..n_cut {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        coherent.push(c);
    }
    let mut even = vec![0.0; n_cut];
    let mut odd = vec![0.0; n_cut];
    for n in 0..n_cut {
        if n % 2 == 0 {
            even[n] = 2.0 * n_plus * coherent[n];
        } else {
            odd[n] = 2.0 * n_minus * coherent[n];
        }
    }
    let even_kept: f64 = even.iter().map(|x| x * x).sum();
    let odd_kept: f64 = odd.iter().map(|x| x * x).sum();
    let even_leak = 1.0 - even_kept;
    let odd_leak = 1.0 - odd_kept;
    let ei = 1.0 / even_kept.sqrt();
    let oi = 1.0 / odd_kept.sqrt();
    even.iter_mut().for_each(|x| *x *= ei);
    odd.iter_mut().for_each(|x| *x *= oi);
    Ok(CatBasis {
        alpha,
        n_cut,
        even,
        odd,
        even_leak,
        odd_leak,
    })
}

/// Logical n-qubit state over |i_1 ... i_n>, most significant bit = qubit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalState {
    pub coeffs: Vec<Complex64>,
}

impl LogicalState {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, CoreError> {
        if !coeffs.len().is_power_of_two() || coeffs.len() < 2 {
            return Err(CoreError::InvalidParameter(format!(
                "logical state needs a power-of-two coefficient count, got {}",
                coeffs.len()
            )));
        }
        Ok(LogicalState { coeffs })
    }

    /// Single computational basis state |bits>.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; 1 << n_qubits];
        coeffs[index] = Complex64::ONE;
        LogicalState { coeffs }
    }

    pub fn n_qubits(&self) -> usize {
        self.coeffs.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.coeffs.iter_mut().for_each(|c| *c /= n);
        }
    }

    /// Bit of qubit `q` (1-based, qubit 1 = MSB) in basis index `k`.
    pub fn bit(&self, k: usize, q: usize) -> usize {
        (k >> (self.n_qubits() - q)) & 1
    }

    /// <self|other>.
    pub fn inner(&self, other: &LogicalState) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// The three-angle product family of 3-qubit input coefficients:
/// qubit 1 weights (cos g, sin g), qubit 2 (cos t, sin t), qubit 3
/// (cos p, sin p), so c_{i1 i2 i3} is the corresponding product.
pub fn input_coeffs(gamma: f64, theta: f64, phi: f64) -> LogicalState {
    let w = [
        [gamma.cos(), gamma.sin()],
        [theta.cos(), theta.sin()],
        [phi.cos(), phi.sin()],
    ];
    let mut coeffs = Vec::with_capacity(8);
    for k in 0..8usize {
        let i1 = (k >> 2) & 1;
        let i2 = (k >> 1) & 1;
        let i3 = k & 1;
        coeffs.push(Complex64::new(w[0][i1] * w[1][i2] * w[2][i3], 0.0));
    }
    LogicalState { coeffs }
}

/// Ideal gate action on the logical coefficients: when the control (qubit 1)
/// is |1>, each target in |1> flips the coefficient sign; the control-|0>
/// block is untouched.
pub fn ideal_output_coeffs(input: &LogicalState) -> LogicalState {
    let n = input.n_qubits();
    let coeffs = input
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let control = (k >> (n - 1)) & 1;
            if control == 1 {
                let target_ones = (k & ((1 << (n - 1)) - 1)).count_ones();
                if target_ones % 2 == 1 {
                    -c
                } else {
                    c
                }
            } else {
                c
            }
        })
        .collect();
    LogicalState { coeffs }
}

/// Encode a logical state into the composite space, qutrit in |g>.
pub fn logical_encode(
    state: &LogicalState,
    cat: &CatBasis,
    layout: &HilbertLayout,
) -> Result<StateVector, CoreError> {
    let n = state.n_qubits();
    if layout.n_cavities() != n {
        return Err(CoreError::DimensionMismatch {
            context: "logical_encode: qubit count vs cavity count",
            expected: layout.n_cavities(),
            got: n,
        });
    }
    for l in 1..=n {
        if layout.dim_of(l) != cat.n_cut {
            return Err(CoreError::DimensionMismatch {
                context: "logical_encode: cavity dimension vs cat truncation",
                expected: layout.dim_of(l),
                got: cat.n_cut,
            });
        }
    }
    let mut psi = StateVector::zeros(layout.clone());
    for (k, &c) in state.coeffs.iter().enumerate() {
        if c == Complex64::ZERO {
            continue;
        }
        // accumulate c * |g> (x) |cat_{i_1}> (x) ... over all Fock indices
        add_product_state(&mut psi, c, k, cat, layout, n);
    }
    psi.normalize();
    Ok(psi)
}

fn add_product_state(
    psi: &mut StateVector,
    c: Complex64,
    pattern: usize,
    cat: &CatBasis,
    layout: &HilbertLayout,
    n: usize,
) {
    let dim = layout.total_dim();
    for idx in 0..dim {
        if layout.qutrit_level(idx) != 0 {
            continue;
        }
        let mut amp = 1.0;
        for l in 1..=n {
            let bit = (pattern >> (n - l)) & 1;
            amp *= cat.logical(bit)[layout.photons(idx, l)];
            if amp == 0.0 {
                break;
            }
        }
        if amp != 0.0 {
            psi.re[idx] += c.re * amp;
            psi.im[idx] += c.im * amp;
        }
    }
}

/// Projection of a state onto the 2^n-dimensional cat code space (x) |g>.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    /// Raw projections <logical basis k | psi> (not renormalized).
    pub coeffs: Vec<Complex64>,
    /// Weight outside the code space: |psi|^2 - sum |coeffs|^2.
    pub leakage: f64,
}

impl Decoded {
    pub fn normalized(&self) -> LogicalState {
        let mut s = LogicalState {
            coeffs: self.coeffs.clone(),
        };
        s.normalize();
        s
    }
}

/// Decode a state vector against the encoded logical basis.
pub fn decode_logical(
    psi: &StateVector,
    cat: &CatBasis,
    layout: &HilbertLayout,
) -> Result<Decoded, CoreError> {
    let n = layout.n_cavities();
    let basis = encoded_basis(cat, layout)?;
    let mut coeffs = Vec::with_capacity(1 << n);
    for b in &basis {
        // basis vectors are real
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..psi.re.len() {
            re += b.re[i] * psi.re[i];
            im += b.re[i] * psi.im[i];
        }
        coeffs.push(Complex64::new(re, im));
    }
    let total = psi.norm().powi(2);
    let inside: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    Ok(Decoded {
        coeffs,
        leakage: total - inside,
    })
}

/// Decode a density matrix: the projected code-space block and the weight
/// outside it.
pub fn decode_density(
    rho: &DensityMatrix,
    cat: &CatBasis,
    layout: &HilbertLayout,
) -> Result<(Vec<Vec<Complex64>>, f64), CoreError> {
    let basis = encoded_basis(cat, layout)?;
    let m = basis.len();
    let dim = layout.total_dim();
    // v_k = rho * basis_k
    let mut block = vec![vec![Complex64::ZERO; m]; m];
    for (j, bj) in basis.iter().enumerate() {
        let mut vr = vec![0.0; dim];
        let mut vi = vec![0.0; dim];
        for r in 0..dim {
            let mut sr = 0.0;
            let mut si = 0.0;
            for c in 0..dim {
                let (mr, mi) = rho.mat.get(r, c);
                sr += mr * bj.re[c];
                si += mi * bj.re[c];
            }
            vr[r] = sr;
            vi[r] = si;
        }
        for (k, bk) in basis.iter().enumerate() {
            let mut sr = 0.0;
            let mut si = 0.0;
            for i in 0..dim {
                sr += bk.re[i] * vr[i];
                si += bk.re[i] * vi[i];
            }
            block[k][j] = Complex64::new(sr, si);
        }
    }
    let inside: f64 = (0..m).map(|k| block[k][k].re).sum();
    let trace = rho.trace().re;
    Ok((block, trace - inside))
}

/// All 2^n encoded logical basis vectors.
pub fn encoded_basis(
    cat: &CatBasis,
    layout: &HilbertLayout,
) -> Result<Vec<StateVector>, CoreError> {
    let n = layout.n_cavities();
    (0..(1usize << n))
        .map(|k| logical_encode(&LogicalState::basis(n, k), cat, layout))
        .collect()
}
