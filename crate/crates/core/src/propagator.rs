//! Brute-force reference propagator for small instances.
//!
//! The density matrix is flattened row-major and evolved by a time-ordered
//! product of exponentials of the vectorized Lindblad generator, held
//! piecewise-constant at each slice midpoint:
//!
//! ```text
//! rho(t1) = prod_k exp(L(t_mid,k) * dt) vec(rho(t0))
//! ```
//!
//! The dissipative part of the generator is materialized once as a dense
//! d^2 x d^2 matrix from the vectorization identities
//! vec(A rho B) = (A (x) B^T) vec(rho); the commutator part acts through the
//! reshaped matrix directly. Exponential actions use scaled Taylor series
//! driven to machine precision. None of this shares code with the
//! Runge-Kutta engine, which is the point: it is the independent witness the
//! engine is checked against.

use crate::dense::{dmm_acc, DenseMatrix};
use crate::error::CoreError;
use crate::modulated::ModulatedHamiltonian;
use crate::sparse::{Csr, SparseOperator};
use crate::state::DensityMatrix;
use num_complex::Complex64;

const MAX_ORACLE_DIM: usize = 64;

/// Evolve `rho0` from `t0` to `t1` with `slices` piecewise-constant steps.
/// `jumps` is the list of (rate, operator) dissipation channels.
pub fn piecewise_propagator(
    h: &ModulatedHamiltonian,
    jumps: &[(f64, SparseOperator)],
    rho0: &DensityMatrix,
    t0: f64,
    t1: f64,
    slices: usize,
) -> Result<DensityMatrix, CoreError> {
    let d = rho0.dim();
    if d > MAX_ORACLE_DIM {
        return Err(CoreError::OracleTooLarge {
            got: d,
            max: MAX_ORACLE_DIM,
        });
    }
    if slices == 0 || !(t1 > t0) {
        return Err(CoreError::InvalidParameter(
            "piecewise propagator needs t1 > t0 and at least one slice".into(),
        ));
    }
    if h.layout() != &rho0.layout {
        return Err(CoreError::LayoutMismatch("Hamiltonian vs state layout"));
    }
    for (_, op) in jumps {
        if op.layout() != &rho0.layout {
            return Err(CoreError::LayoutMismatch("jump operator vs state layout"));
        }
    }

    let diss = build_dissipative_superop(jumps, d);
    let diss_norm = csr_one_norm(&diss);

    // flatten rho row-major
    let mut xr = vec![0.0; d * d];
    let mut xi = vec![0.0; d * d];
    for r in 0..d {
        for c in 0..d {
            let (vr, vi) = rho0.mat.get(r, c);
            xr[r * d + c] = vr;
            xi[r * d + c] = vi;
        }
    }

    let dt = (t1 - t0) / slices as f64;
    for k in 0..slices {
        let t_mid = t0 + (k as f64 + 0.5) * dt;
        let h_mid = h.to_dense(t_mid);
        let h_norm = max_col_abs_sum(&h_mid);
        let l_norm = 2.0 * h_norm + diss_norm;
        exp_action(&h_mid, &diss, dt, l_norm, &mut xr, &mut xi, d);
    }

    let mut out = DensityMatrix::zeros(rho0.layout.clone());
    for r in 0..d {
        for c in 0..d {
            out.mat.set(r, c, xr[r * d + c], xi[r * d + c]);
        }
    }
    Ok(out)
}

/// sum_c rate_c [ (xi (x) conj(xi)) - 1/2 (xi+ xi (x) I) - 1/2 (I (x) (xi+ xi)^T) ]
/// as a sparse d^2 x d^2 matrix over row-major flattening.
fn build_dissipative_superop(jumps: &[(f64, SparseOperator)], d: usize) -> Csr {
    let mut triplets: Vec<(usize, usize, Complex64)> = Vec::new();
    for (rate, op) in jumps {
        let xi = op.csr().triplets();
        let xdx = op.adjoint().matmul(op).expect("layout").csr().triplets();
        // (xi (x) conj(xi))[(i,j),(k,m)] = xi[i,k] * conj(xi[j,m])
        for &(i, k, a) in &xi {
            for &(j, m, b) in &xi {
                let v = a * b.conj() * rate;
                triplets.push((i * d + j, k * d + m, v));
            }
        }
        // -1/2 (xdx (x) I): [(i,j),(k,j)] = xdx[i,k]
        for &(i, k, a) in &xdx {
            for j in 0..d {
                triplets.push((i * d + j, k * d + j, -0.5 * rate * a));
            }
        }
        // -1/2 (I (x) xdx^T): [(i,j),(i,m)] = xdx[m,j]
        for &(m, j, a) in &xdx {
            for i in 0..d {
                triplets.push((i * d + j, i * d + m, -0.5 * rate * a));
            }
        }
    }
    Csr::from_triplets(d * d, d * d, &triplets)
}

fn csr_one_norm(m: &Csr) -> f64 {
    let mut col_sums = vec![0.0f64; m.ncols()];
    for (_, c, v) in m.triplets() {
        col_sums[c] += v.norm();
    }
    col_sums.into_iter().fold(0.0, f64::max)
}

fn max_col_abs_sum(m: &DenseMatrix) -> f64 {
    let n = m.ncols();
    let mut best: f64 = 0.0;
    for c in 0..n {
        let mut s = 0.0;
        for r in 0..m.nrows() {
            let (vr, vi) = m.get(r, c);
            s += (vr * vr + vi * vi).sqrt();
        }
        best = best.max(s);
    }
    best
}

/// y <- exp(dt * L) y with L(v) = -i [H, V] + diss * v, via s equal substeps
/// of Taylor series.
#[allow(clippy::too_many_arguments)]
fn exp_action(
    h_mid: &DenseMatrix,
    diss: &Csr,
    dt: f64,
    l_norm: f64,
    xr: &mut Vec<f64>,
    xi: &mut Vec<f64>,
    d: usize,
) {
    let substeps = ((l_norm * dt) / 0.5).ceil().max(1.0) as usize;
    let h_sub = dt / substeps as f64;
    let n2 = d * d;
    let mut term_r = vec![0.0; n2];
    let mut term_i = vec![0.0; n2];
    let mut next_r = vec![0.0; n2];
    let mut next_i = vec![0.0; n2];

    for _ in 0..substeps {
        term_r.copy_from_slice(xr);
        term_i.copy_from_slice(xi);
        for k in 1..=80u32 {
            // next = (h_sub / k) * L(term)
            next_r.fill(0.0);
            next_i.fill(0.0);
            apply_generator(h_mid, diss, &term_r, &term_i, &mut next_r, &mut next_i, d);
            let w = h_sub / k as f64;
            for idx in 0..n2 {
                term_r[idx] = w * next_r[idx];
                term_i[idx] = w * next_i[idx];
            }
            let mut term_max: f64 = 0.0;
            for idx in 0..n2 {
                xr[idx] += term_r[idx];
                xi[idx] += term_i[idx];
                term_max = term_max.max(term_r[idx].abs() + term_i[idx].abs());
            }
            if term_max < 1e-18 {
                break;
            }
        }
    }
}

/// out += -i (H V - V H) + diss * v where V is v reshaped d x d.
fn apply_generator(
    h_mid: &DenseMatrix,
    diss: &Csr,
    vr: &[f64],
    vi: &[f64],
    out_r: &mut [f64],
    out_i: &mut [f64],
    d: usize,
) {
    // reshape v into a DenseMatrix view (copy; d <= 64 keeps this trivial)
    let mut v = DenseMatrix::zeros(d);
    for r in 0..d {
        for c in 0..d {
            v.set(r, c, vr[r * d + c], vi[r * d + c]);
        }
    }
    let mut comm = DenseMatrix::zeros(d);
    dmm_acc(0.0, -1.0, h_mid, &v, &mut comm);
    dmm_acc(0.0, 1.0, &v, h_mid, &mut comm);
    for r in 0..d {
        for c in 0..d {
            let (cr, ci) = comm.get(r, c);
            out_r[r * d + c] += cr;
            out_i[r * d + c] += ci;
        }
    }
    diss.matvec_acc(Complex64::ONE, vr, vi, out_r, out_i);
}
