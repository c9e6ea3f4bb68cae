//! Master-equation integrator for the lossy cavity-qutrit system.
//!
//! The generator is
//!
//! ```text
//! drho/dt = -i [H(t), rho]
//!         + sum_l kappa_l L[a_l]
//!         + gamma_eg L[sigma-_eg] + gamma_fe L[sigma-_fe] + gamma_fg L[sigma-_fg]
//!         + sum_{j=e,f} gamma_phi_j (sigma_jj rho sigma_jj - sigma_jj rho / 2 - rho sigma_jj / 2)
//! ```
//!
//! with L[xi] = xi rho xi+ - xi+ xi rho / 2 - rho xi+ xi / 2. The dephasing
//! channels are written exactly as printed; since sigma_jj is a projector
//! they coincide with L[sigma_jj].
//!
//! Integration is fixed-step classic Runge-Kutta with the Hamiltonian
//! evaluated at the stage times; every accepted step ends with Hermitian
//! symmetrization rho <- (rho + rho+)/2. Every xi+ xi here is diagonal, so
//! the anticommutator halves of all channels fuse into one diagonal pass.

use crate::dense::{diag_anticomm_acc, mmsp_acc, spmm_acc, spmm_write, DenseMatrix};
use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use crate::modulated::{FrozenHamiltonian, ModulatedHamiltonian};
use crate::operators::{annihilation, embed, qutrit_projector, qutrit_transition, Level};
use crate::params::PhysicalParams;
use crate::sparse::SparseOperator;
use crate::state::{DensityMatrix, StateVector};
use crate::units::lifetime_us_to_rate;

/// Dissipation rates in 1/ns. Zero disables a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationSpec {
    /// Per-cavity photon decay rates.
    pub kappa_per_ns: Vec<f64>,
    pub gamma_eg_per_ns: f64,
    pub gamma_fe_per_ns: f64,
    pub gamma_fg_per_ns: f64,
    pub gamma_phi_e_per_ns: f64,
    pub gamma_phi_f_per_ns: f64,
}

impl DissipationSpec {
    pub fn none(n_cavities: usize) -> Self {
        DissipationSpec {
            kappa_per_ns: vec![0.0; n_cavities],
            gamma_eg_per_ns: 0.0,
            gamma_fe_per_ns: 0.0,
            gamma_fg_per_ns: 0.0,
            gamma_phi_e_per_ns: 0.0,
            gamma_phi_f_per_ns: 0.0,
        }
    }

    pub fn from_params(p: &PhysicalParams) -> Self {
        DissipationSpec {
            kappa_per_ns: p
                .kappa_inv_us
                .iter()
                .map(|&k| lifetime_us_to_rate(k))
                .collect(),
            gamma_eg_per_ns: lifetime_us_to_rate(p.gamma_eg_inv_us),
            gamma_fe_per_ns: lifetime_us_to_rate(p.gamma_fe_inv_us),
            gamma_fg_per_ns: lifetime_us_to_rate(p.gamma_fg_inv_us),
            gamma_phi_e_per_ns: lifetime_us_to_rate(p.gamma_phi_e_inv_us),
            gamma_phi_f_per_ns: lifetime_us_to_rate(p.gamma_phi_f_inv_us),
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let all = self
            .kappa_per_ns
            .iter()
            .chain([
                &self.gamma_eg_per_ns,
                &self.gamma_fe_per_ns,
                &self.gamma_fg_per_ns,
                &self.gamma_phi_e_per_ns,
                &self.gamma_phi_f_per_ns,
            ]);
        if all.into_iter().any(|&r| r < 0.0 || !r.is_finite()) {
            return Err(CoreError::InvalidParameter(
                "dissipation rates must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.kappa_per_ns.iter().all(|&k| k == 0.0)
            && self.gamma_eg_per_ns == 0.0
            && self.gamma_fe_per_ns == 0.0
            && self.gamma_fg_per_ns == 0.0
            && self.gamma_phi_e_per_ns == 0.0
            && self.gamma_phi_f_per_ns == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Fixed-step classic Runge-Kutta (default).
    Rk4,
    /// Brute-force piecewise-exponential propagation (small systems only).
    PiecewiseExp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub dt_ns: f64,
    pub method: Method,
    /// Steps between trace-drift history records.
    pub record_stride: usize,
    /// Steps between spectral positivity samples; 0 disables them.
    pub positivity_check_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt_ns: 0.01,
            method: Method::Rk4,
            record_stride: 1000,
            positivity_check_stride: 0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.dt_ns > 0.0) {
            return Err(CoreError::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt_ns
            )));
        }
        Ok(())
    }
}

/// Evolution diagnostics gathered along the way.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub steps: usize,
    /// max |tr(rho) - 1| seen at step boundaries.
    pub max_trace_drift: f64,
    /// max pre-symmetrization Hermiticity defect per step.
    pub max_herm_defect: f64,
    /// (t_ns, |tr - 1|) samples at the record stride.
    pub trace_history: Vec<(f64, f64)>,
    /// (t_ns, lambda_min) samples when positivity checking is on.
    pub min_eigenvalue_samples: Vec<(f64, f64)>,
    pub wall_time_s: f64,
}

const TRACE_ABORT: f64 = 1e-4;

/// Lindblad dissipator L[xi](rho) = xi rho xi+ - xi+ xi rho/2 - rho xi+ xi/2,
/// evaluated exactly (xi+ xi formed sparsely).
pub fn dissipator(xi: &SparseOperator, rho: &DensityMatrix) -> Result<DenseMatrix, CoreError> {
    if xi.layout() != &rho.layout {
        return Err(CoreError::LayoutMismatch("dissipator operator vs state"));
    }
    let n = rho.dim();
    let adj = xi.adjoint();
    let xdx = adj.matmul(xi)?;
    let mut tmp = DenseMatrix::zeros(n);
    spmm_acc(1.0, 0.0, xi.csr(), &rho.mat, &mut tmp);
    let mut out = DenseMatrix::zeros(n);
    mmsp_acc(1.0, 0.0, &tmp, adj.csr(), &mut out);
    spmm_acc(-0.5, 0.0, xdx.csr(), &rho.mat, &mut out);
    mmsp_acc(-0.5, 0.0, &rho.mat, xdx.csr(), &mut out);
    Ok(out)
}

/// Cavity decay jump: (a_l rho a_l+)[i][j] = w[i] w[j] rho[i + s][j + s]
/// with w[i] = sqrt(m_l(i) + 1) where one more photon fits, else 0, and
/// s the index stride of mode l.
struct CavityChannel {
    rate: f64,
    stride: usize,
    weight: Vec<f64>,
}

/// Qutrit lowering |to><from|: a block copy shifted by the qutrit stride.
struct QutritLowering {
    rate: f64,
    to_block: usize,
    offset: usize,
}

/// Prepared right-hand-side evaluator for one evolution.
///
/// The commutator uses one sparse product: for Hermitian rho and H,
/// rho H = (H rho)+, so -i[H, rho] = -i T + i T+ with T = H rho. Stage
/// matrices inside the integrator stay Hermitian to rounding, which this
/// relies on; the brute-force propagator makes no such assumption and is
/// the independent check.
pub struct Generator {
    frozen: FrozenHamiltonian,
    cavities: Vec<CavityChannel>,
    lowerings: Vec<QutritLowering>,
    /// (rate, level) of pure-dephasing projector channels.
    dephasings: Vec<(f64, usize)>,
    /// Merged diagonal sum_c rate_c * (xi_c+ xi_c)_ii (all xi+ xi are diagonal).
    diag: Vec<f64>,
    /// Scratch for T = H rho.
    t_buf: DenseMatrix,
    dim: usize,
    qutrit_stride: usize,
}

impl Generator {
    pub fn new(
        h: &ModulatedHamiltonian,
        d: &DissipationSpec,
        layout: &HilbertLayout,
    ) -> Result<Self, CoreError> {
        d.validate()?;
        if h.layout() != layout {
            return Err(CoreError::LayoutMismatch("Hamiltonian vs evolution layout"));
        }
        if d.kappa_per_ns.len() != layout.n_cavities() {
            return Err(CoreError::DimensionMismatch {
                context: "kappa rates vs cavity count",
                expected: layout.n_cavities(),
                got: d.kappa_per_ns.len(),
            });
        }
        let n = layout.total_dim();
        let qutrit_stride = layout.stride(0);
        let mut diag = vec![0.0; n];

        let mut cavities = Vec::new();
        for (i, &kappa) in d.kappa_per_ns.iter().enumerate() {
            let l = i + 1;
            let n_cut = layout.dim_of(l);
            for (idx, dval) in diag.iter_mut().enumerate() {
                *dval += kappa * layout.photons(idx, l) as f64;
            }
            if kappa == 0.0 {
                continue;
            }
            let weight: Vec<f64> = (0..n)
                .map(|idx| {
                    let m = layout.photons(idx, l);
                    if m + 1 < n_cut {
                        ((m + 1) as f64).sqrt()
                    } else {
                        0.0
                    }
                })
                .collect();
            cavities.push(CavityChannel {
                rate: kappa,
                stride: layout.stride(l),
                weight,
            });
        }

        let mut lowerings = Vec::new();
        let qutrit_jumps = [
            (d.gamma_eg_per_ns, Level::E, Level::G),
            (d.gamma_fe_per_ns, Level::F, Level::E),
            (d.gamma_fg_per_ns, Level::F, Level::G),
        ];
        for (rate, from, to) in qutrit_jumps {
            for idx in 0..n {
                if layout.qutrit_level(idx) == from.index() {
                    diag[idx] += rate;
                }
            }
            if rate > 0.0 {
                lowerings.push(QutritLowering {
                    rate,
                    to_block: to.index(),
                    offset: (from.index() - to.index()) * qutrit_stride,
                });
            }
        }

        let mut dephasings = Vec::new();
        for (rate, level) in [
            (d.gamma_phi_e_per_ns, Level::E),
            (d.gamma_phi_f_per_ns, Level::F),
        ] {
            for idx in 0..n {
                if layout.qutrit_level(idx) == level.index() {
                    diag[idx] += rate;
                }
            }
            if rate > 0.0 {
                dephasings.push((rate, level.index()));
            }
        }

        Ok(Generator {
            frozen: h.freeze(),
            cavities,
            lowerings,
            dephasings,
            diag,
            t_buf: DenseMatrix::zeros(n),
            dim: n,
            qutrit_stride,
        })
    }

    /// out = full right-hand side at time t. `rho` must be Hermitian.
    pub fn rhs_into(&mut self, t: f64, rho: &DenseMatrix, out: &mut DenseMatrix) {
        let h = self.frozen.eval_at(t);
        // T = H rho, then -i[H, rho] = -i T + i T+
        spmm_write(h, rho, &mut self.t_buf);
        commutator_combine(&self.t_buf, out);

        let n = self.dim;
        for ch in &self.cavities {
            let s = ch.stride;
            let w = &ch.weight;
            for i in 0..n - s {
                let wi = ch.rate * w[i];
                if wi == 0.0 {
                    continue;
                }
                let src_re = &rho.re[(i + s) * n + s..(i + s) * n + n];
                let src_im = &rho.im[(i + s) * n + s..(i + s) * n + n];
                let out_re = &mut out.re[i * n..i * n + n - s];
                let out_im = &mut out.im[i * n..i * n + n - s];
                for (((or, oi), (sr, si)), wj) in out_re
                    .iter_mut()
                    .zip(out_im.iter_mut())
                    .zip(src_re.iter().zip(src_im))
                    .zip(w.iter())
                {
                    let f = wi * wj;
                    *or += f * sr;
                    *oi += f * si;
                }
            }
        }

        let s = self.qutrit_stride;
        for low in &self.lowerings {
            let base = low.to_block * s;
            for i in base..base + s {
                let src_row = i + low.offset;
                let src_re = &rho.re[src_row * n + base + low.offset..src_row * n + base + low.offset + s];
                let src_im = &rho.im[src_row * n + base + low.offset..src_row * n + base + low.offset + s];
                let out_re = &mut out.re[i * n + base..i * n + base + s];
                let out_im = &mut out.im[i * n + base..i * n + base + s];
                for ((or, oi), (sr, si)) in out_re
                    .iter_mut()
                    .zip(out_im.iter_mut())
                    .zip(src_re.iter().zip(src_im))
                {
                    *or += low.rate * sr;
                    *oi += low.rate * si;
                }
            }
        }

        for &(rate, level) in &self.dephasings {
            let base = level * s;
            for i in base..base + s {
                let src_re = &rho.re[i * n + base..i * n + base + s];
                let src_im = &rho.im[i * n + base..i * n + base + s];
                let out_re = &mut out.re[i * n + base..i * n + base + s];
                let out_im = &mut out.im[i * n + base..i * n + base + s];
                for ((or, oi), (sr, si)) in out_re
                    .iter_mut()
                    .zip(out_im.iter_mut())
                    .zip(src_re.iter().zip(src_im))
                {
                    *or += rate * sr;
                    *oi += rate * si;
                }
            }
        }

        // merged anticommutator halves
        diag_anticomm_acc(-0.5, &self.diag, rho, out);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// out = -i (T - T+). Symmetric tile pairs are processed together so each
/// strided read serves both output tiles.
fn commutator_combine(t: &DenseMatrix, out: &mut DenseMatrix) {
    let n = t.nrows();
    const TILE: usize = 64;
    let mut bi = 0;
    while bi < n {
        let ri_end = (bi + TILE).min(n);
        let mut bj = bi;
        while bj < n {
            let cj_end = (bj + TILE).min(n);
            for r in bi..ri_end {
                let c_start = if bj == bi { r } else { bj };
                for c in c_start..cj_end {
                    let (tr_rc, ti_rc) = (t.re[r * n + c], t.im[r * n + c]);
                    let (tr_cr, ti_cr) = (t.re[c * n + r], t.im[c * n + r]);
                    // -i (T[r][c] - conj(T[c][r])) and its mirror entry
                    let re = ti_rc + ti_cr;
                    let im = tr_cr - tr_rc;
                    out.re[r * n + c] = re;
                    out.im[r * n + c] = im;
                    out.re[c * n + r] = re;
                    out.im[c * n + r] = -im;
                }
            }
            bj = cj_end;
        }
        bi = ri_end;
    }
}

/// Full right-hand side as a standalone value (reference path for tests).
pub fn rhs(
    t: f64,
    rho: &DensityMatrix,
    h: &ModulatedHamiltonian,
    d: &DissipationSpec,
) -> Result<DenseMatrix, CoreError> {
    let mut gen = Generator::new(h, d, &rho.layout)?;
    let mut out = DenseMatrix::zeros(rho.dim());
    gen.rhs_into(t, &rho.mat, &mut out);
    Ok(out)
}

/// Integrate the master equation from t = 0 to `t_final_ns`.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &ModulatedHamiltonian,
    d: &DissipationSpec,
    t_final_ns: f64,
    cfg: &IntegratorConfig,
) -> Result<(DensityMatrix, Diagnostics), CoreError> {
    cfg.validate()?;
    if !(t_final_ns > 0.0) {
        return Err(CoreError::InvalidParameter(format!(
            "t_final must be positive, got {t_final_ns}"
        )));
    }
    match cfg.method {
        Method::Rk4 => evolve_rk4(rho0, h, d, t_final_ns, cfg),
        Method::PiecewiseExp => {
            let slices = (t_final_ns / cfg.dt_ns).ceil() as usize;
            let jumps = dissipation_jump_list(d, &rho0.layout)?;
            let started = std::time::Instant::now();
            let rho = crate::propagator::piecewise_propagator(h, &jumps, rho0, 0.0, t_final_ns, slices)?;
            let mut diag = Diagnostics {
                steps: slices,
                wall_time_s: started.elapsed().as_secs_f64(),
                ..Diagnostics::default()
            };
            let tr = rho.trace();
            diag.max_trace_drift = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
            diag.max_herm_defect = rho.hermiticity_defect();
            Ok((rho, diag))
        }
    }
}

/// (rate, operator) list of all active channels, for the brute-force path.
pub fn dissipation_jump_list(
    d: &DissipationSpec,
    layout: &HilbertLayout,
) -> Result<Vec<(f64, SparseOperator)>, CoreError> {
    d.validate()?;
    let mut out = Vec::new();
    for (i, &kappa) in d.kappa_per_ns.iter().enumerate() {
        if kappa > 0.0 {
            out.push((
                kappa,
                embed(i + 1, &annihilation(layout.dim_of(i + 1))?, layout)?,
            ));
        }
    }
    let qutrit_channels = [
        (d.gamma_eg_per_ns, Level::E, Level::G),
        (d.gamma_fe_per_ns, Level::F, Level::E),
        (d.gamma_fg_per_ns, Level::F, Level::G),
    ];
    for (rate, from, to) in qutrit_channels {
        if rate > 0.0 {
            out.push((rate, embed(0, &qutrit_transition(from, to), layout)?));
        }
    }
    if d.gamma_phi_e_per_ns > 0.0 {
        out.push((
            d.gamma_phi_e_per_ns,
            embed(0, &qutrit_projector(Level::E), layout)?,
        ));
    }
    if d.gamma_phi_f_per_ns > 0.0 {
        out.push((
            d.gamma_phi_f_per_ns,
            embed(0, &qutrit_projector(Level::F), layout)?,
        ));
    }
    Ok(out)
}

fn evolve_rk4(
    rho0: &DensityMatrix,
    h: &ModulatedHamiltonian,
    d: &DissipationSpec,
    t_final_ns: f64,
    cfg: &IntegratorConfig,
) -> Result<(DensityMatrix, Diagnostics), CoreError> {
    let started = std::time::Instant::now();
    let mut gen = Generator::new(h, d, &rho0.layout)?;
    let n = gen.dim();
    let mut rho = rho0.clone();
    let mut k = DenseMatrix::zeros(n);
    let mut y = DenseMatrix::zeros(n);
    let mut acc = DenseMatrix::zeros(n);

    let mut diag = Diagnostics::default();
    let mut t = 0.0_f64;
    let mut step_index = 0usize;
    // one drift sample at t = 0
    diag.trace_history.push((0.0, trace_drift(&rho)));

    while t < t_final_ns - 1e-12 {
        let dt = cfg.dt_ns.min(t_final_ns - t);
        // k1
        gen.rhs_into(t, &rho.mat, &mut k);
        DenseMatrix::rk_first(&mut acc, &mut y, &rho.mat, &k, dt / 2.0);
        // k2
        gen.rhs_into(t + dt / 2.0, &y, &mut k);
        DenseMatrix::rk_stage(&mut acc, &mut y, &rho.mat, &k, 2.0, dt / 2.0);
        // k3
        gen.rhs_into(t + dt / 2.0, &y, &mut k);
        DenseMatrix::rk_stage(&mut acc, &mut y, &rho.mat, &k, 2.0, dt);
        // k4
        gen.rhs_into(t + dt, &y, &mut k);
        rho.mat.rk_finish(&acc, &k, dt / 6.0);
        let defect = rho.mat.hermitize();
        diag.max_herm_defect = diag.max_herm_defect.max(defect);

        t += dt;
        step_index += 1;

        let drift = trace_drift(&rho);
        diag.max_trace_drift = diag.max_trace_drift.max(drift);
        // NaN drift must abort too, hence the negated comparison
        if !(drift <= TRACE_ABORT) {
            if !drift.is_finite() {
                return Err(CoreError::NonFinite { t_ns: t });
            }
            return Err(CoreError::TraceDrift {
                drift,
                limit: TRACE_ABORT,
                t_ns: t,
            });
        }
        if cfg.record_stride > 0 && step_index % cfg.record_stride == 0 {
            diag.trace_history.push((t, drift));
        }
        if step_index % 64 == 0 && !rho.mat.is_finite() {
            return Err(CoreError::NonFinite { t_ns: t });
        }
        if cfg.positivity_check_stride > 0 && step_index % cfg.positivity_check_stride == 0 {
            let min_eig = eig::min_eigenvalue_hermitian(&rho.mat);
            diag.min_eigenvalue_samples.push((t, min_eig));
        }
    }

    if !rho.mat.is_finite() {
        return Err(CoreError::NonFinite { t_ns: t });
    }
    diag.steps = step_index;
    diag.trace_history.push((t, trace_drift(&rho)));
    diag.wall_time_s = started.elapsed().as_secs_f64();
    Ok((rho, diag))
}

fn trace_drift(rho: &DensityMatrix) -> f64 {
    let tr = rho.trace();
    ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt()
}

/// Gate fidelity F = sqrt(<psi_id| rho |psi_id>), clamped to [0, 1] after
/// checking that the raw quadratic form is not meaningfully negative.
pub fn fidelity(rho: &DensityMatrix, psi_id: &StateVector) -> Result<f64, CoreError> {
    if rho.layout != psi_id.layout {
        return Err(CoreError::LayoutMismatch("fidelity state vs density layout"));
    }
    let (q, _) = rho.mat.quadratic_form(&psi_id.re, &psi_id.im);
    if q < -1e-10 {
        return Err(CoreError::BrokenDensity { value: q });
    }
    Ok(q.max(0.0).sqrt().min(1.0))
}

/// Closed-system state-vector integration d|psi>/dt = -i H(t) |psi| with the
/// same fixed-step scheme (used for ideal reference outputs).
pub fn evolve_state(
    psi0: &StateVector,
    h: &ModulatedHamiltonian,
    t_final_ns: f64,
    cfg: &IntegratorConfig,
) -> Result<StateVector, CoreError> {
    cfg.validate()?;
    if h.layout() != &psi0.layout {
        return Err(CoreError::LayoutMismatch("Hamiltonian vs state layout"));
    }
    let n = psi0.dim();
    let mut frozen = h.freeze();
    let mut psi = psi0.clone();
    let mut kr = vec![0.0; n];
    let mut ki = vec![0.0; n];
    let mut yr = vec![0.0; n];
    let mut yi = vec![0.0; n];
    let mut ar = vec![0.0; n];
    let mut ai = vec![0.0; n];

    let mut t = 0.0_f64;
    while t < t_final_ns - 1e-12 {
        let dt = cfg.dt_ns.min(t_final_ns - t);
        // k1 = -i H psi
        kr.fill(0.0);
        ki.fill(0.0);
        frozen
            .eval_at(t)
            .matvec_acc(num_complex::Complex64::new(0.0, -1.0), &psi.re, &psi.im, &mut kr, &mut ki);
        ar.copy_from_slice(&kr);
        ai.copy_from_slice(&ki);
        // k2
        stage(&psi.re, &psi.im, dt / 2.0, &kr, &ki, &mut yr, &mut yi);
        let (kr2, ki2) = {
            let mut r = vec![0.0; n];
            let mut i = vec![0.0; n];
            frozen.eval_at(t + dt / 2.0).matvec_acc(
                num_complex::Complex64::new(0.0, -1.0),
                &yr,
                &yi,
                &mut r,
                &mut i,
            );
            (r, i)
        };
        axpy(&mut ar, 2.0, &kr2);
        axpy(&mut ai, 2.0, &ki2);
        // k3
        stage(&psi.re, &psi.im, dt / 2.0, &kr2, &ki2, &mut yr, &mut yi);
        let (kr3, ki3) = {
            let mut r = vec![0.0; n];
            let mut i = vec![0.0; n];
            frozen.eval_at(t + dt / 2.0).matvec_acc(
                num_complex::Complex64::new(0.0, -1.0),
                &yr,
                &yi,
                &mut r,
                &mut i,
            );
            (r, i)
        };
        axpy(&mut ar, 2.0, &kr3);
        axpy(&mut ai, 2.0, &ki3);
        // k4
        stage(&psi.re, &psi.im, dt, &kr3, &ki3, &mut yr, &mut yi);
        kr.fill(0.0);
        ki.fill(0.0);
        frozen.eval_at(t + dt).matvec_acc(
            num_complex::Complex64::new(0.0, -1.0),
            &yr,
            &yi,
            &mut kr,
            &mut ki,
        );
        axpy(&mut ar, 1.0, &kr);
        axpy(&mut ai, 1.0, &ki);

        let w = dt / 6.0;
        for idx in 0..n {
            psi.re[idx] += w * ar[idx];
            psi.im[idx] += w * ai[idx];
        }
        t += dt;
    }
    if psi.re.iter().any(|x| !x.is_finite()) || psi.im.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::NonFinite { t_ns: t });
    }
    Ok(psi)
}

fn stage(xr: &[f64], xi: &[f64], a: f64, kr: &[f64], ki: &[f64], yr: &mut [f64], yi: &mut [f64]) {
    for idx in 0..xr.len() {
        yr[idx] = xr[idx] + a * kr[idx];
        yi[idx] = xi[idx] + a * ki[idx];
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yk, xk) in y.iter_mut().zip(x) {
        *yk += a * xk;
    }
}

pub mod eig {
    //! Minimal cyclic Jacobi eigensolver for Hermitian matrices, used for the
    //! sampled positivity diagnostic.

    use crate::dense::DenseMatrix;

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue_hermitian(m: &DenseMatrix) -> f64 {
        eigenvalues_hermitian(m)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// All eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
    pub fn eigenvalues_hermitian(m: &DenseMatrix) -> Vec<f64> {
        let n = m.nrows();
        let mut a = m.clone();
        let off = |a: &DenseMatrix| -> f64 {
            let mut s = 0.0;
            for r in 0..n {
                for c in (r + 1)..n {
                    let (vr, vi) = a.get(r, c);
                    s += vr * vr + vi * vi;
                }
            }
            s
        };
        for _sweep in 0..60 {
            if off(&a) < 1e-28 * n as f64 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let (xr, xj) = a.get(p, q);
                    let apq = (xr * xr + xj * xj).sqrt();
                    if apq < 1e-300 {
                        continue;
                    }
                    // phase of a_pq
                    let (er, ei) = (xr / apq, xj / apq);
                    let app = a.get(p, p).0;
                    let aqq = a.get(q, q).0;
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // unitary R = diag(1, e^{-i phi}) * [[c, s], [-s, c]];
                    // rows transform with R+, columns with R
                    for k in 0..n {
                        let (pkr, pki) = a.get(p, k);
                        let (qkr, qki) = a.get(q, k);
                        // e * row_q
                        let eqr = er * qkr - ei * qki;
                        let eqi = er * qki + ei * qkr;
                        // row p' = c * row_p - s * e * row_q
                        let npr = c * pkr - s * eqr;
                        let npi = c * pki - s * eqi;
                        // row q' = s * row_p + c * e * row_q
                        let nqr = s * pkr + c * eqr;
                        let nqi = s * pki + c * eqi;
                        a.set(p, k, npr, npi);
                        a.set(q, k, nqr, nqi);
                    }
                    for k in 0..n {
                        let (kpr, kpi) = a.get(k, p);
                        let (kqr, kqi) = a.get(k, q);
                        // conj(e) * col_q
                        let eqr = er * kqr + ei * kqi;
                        let eqi = er * kqi - ei * kqr;
                        // col p' = c * col_p - s * conj(e) * col_q
                        let npr = c * kpr - s * eqr;
                        let npi = c * kpi - s * eqi;
                        // col q' = s * col_p + c * conj(e) * col_q
                        let nqr = s * kpr + c * eqr;
                        let nqi = s * kpi + c * eqi;
                        a.set(k, p, npr, npi);
                        a.set(k, q, nqr, nqi);
                    }
                }
            }
        }
        (0..n).map(|k| a.get(k, k).0).collect()
    }
}
