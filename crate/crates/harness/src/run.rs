//! Scenario execution: build the model, evolve, score.

use crate::error::HarnessError;
use crate::scenario::{IntegrationMethod, Model, Reference, Scenario};
use catphase_core::cat::{
    cat_basis, decode_density, ideal_output_coeffs, input_coeffs, logical_encode,
};
use catphase_core::hamiltonians::{
    build_crosstalk, build_effective, build_interaction, build_unwanted,
    EffectiveForm,
};
use catphase_core::hilbert::HilbertLayout;
use catphase_core::lindblad::{
    evolve, evolve_state, fidelity, DissipationSpec, IntegratorConfig, Method,
};
use catphase_core::modulated::ModulatedHamiltonian;
use catphase_core::params::DerivedParams;
use catphase_core::state::{DensityMatrix, StateVector};
use rayon::prelude::*;

/// One line of the results table. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario_id: String,
    pub model: String,
    pub label: String,
    pub kappa_inv_us: f64,
    pub alpha: f64,
    pub n_cut: usize,
    pub dt_ns: f64,
    pub fidelity: f64,
    pub trace_error: f64,
    pub leakage: f64,
    pub wall_time_s: f64,
}

/// Build the scenario's Hamiltonian, honoring the crosstalk toggle.
pub fn build_model(
    s: &Scenario,
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<ModulatedHamiltonian, HarnessError> {
    let with_crosstalk = s.toggles.crosstalk && s.model != Model::EffectiveClean;
    let mut parts: Vec<ModulatedHamiltonian> = Vec::new();
    match s.model {
        Model::Full => {
            parts.push(build_interaction(d, layout)?);
            parts.push(build_unwanted(d, layout)?);
        }
        Model::Effective | Model::EffectiveClean => {
            parts.push(build_effective(d, layout, EffectiveForm::Reduced)?);
        }
    }
    if with_crosstalk {
        parts.push(build_crosstalk(d, layout)?);
    }
    let refs: Vec<&ModulatedHamiltonian> = parts.iter().collect();
    Ok(ModulatedHamiltonian::concat(&refs)?)
}

/// The crosstalk-free coherent part of the scenario's model (for the
/// `Reference::Coherent` comparison state).
fn build_coherent_reference_hamiltonian(
    s: &Scenario,
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<ModulatedHamiltonian, HarnessError> {
    let mut no_xt = s.clone();
    no_xt.toggles.crosstalk = false;
    build_model(&no_xt, d, layout)
}

fn wrap_engine<T>(
    id: &str,
    r: Result<T, catphase_core::CoreError>,
) -> Result<T, HarnessError> {
    r.map_err(|source| HarnessError::Engine {
        scenario: id.to_string(),
        source,
    })
}

/// Everything a single run produces: the result row plus engine diagnostics and
/// the fidelity under both reference conventions.
#[derive(Debug, Clone)]
pub struct RunDetail {
    pub row: ResultRow,
    pub diagnostics: catphase_core::lindblad::Diagnostics,
    /// Against the encoded phase-flipped logical ideal.
    pub fidelity_vs_logical: f64,
    /// Against the closed-system crosstalk-free evolution of the scenario's
    /// own Hamiltonian.
    pub fidelity_vs_coherent: f64,
}

/// Run one scenario: encode the input, evolve for the gate time, compare to
/// the ideal output, record diagnostics.
pub fn run_scenario(s: &Scenario) -> Result<ResultRow, HarnessError> {
    Ok(run_scenario_detailed(s)?.row)
}

/// [`run_scenario`] returning diagnostics and both fidelity conventions.
pub fn run_scenario_detailed(s: &Scenario) -> Result<RunDetail, HarnessError> {
    let id = s.id();
    let started = std::time::Instant::now();
    s.params.validate()?;
    let d = DerivedParams::from_params(&s.params)?;
    let n = s.params.n_cavities();
    let layout = HilbertLayout::new(n, s.n_cut)?;
    let cat = cat_basis(s.params.alpha, s.n_cut)?;
    if n != 3 {
        return Err(HarnessError::Config(format!(
            "scenario runs are defined for 3 cavities, got {n}"
        )));
    }
    let (g, th, ph) = s.angles_rad;
    let input = input_coeffs(g, th, ph);
    let psi0 = logical_encode(&input, &cat, &layout)?;
    let t_gate = d.gate_time_ns();
    let cfg = IntegratorConfig {
        dt_ns: s.integrator.dt_ns,
        method: match s.integrator.method {
            IntegrationMethod::Rk4 => Method::Rk4,
            IntegrationMethod::Expm => Method::PiecewiseExp,
        },
        ..Default::default()
    };

    let h = build_model(s, &d, &layout)?;
    let psi_logical: StateVector = logical_encode(&ideal_output_coeffs(&input), &cat, &layout)?;
    let psi_coherent: StateVector = {
        let h_ref = build_coherent_reference_hamiltonian(s, &d, &layout)?;
        let mut psi = wrap_engine(&id, evolve_state(&psi0, &h_ref, t_gate, &cfg))?;
        psi.normalize();
        psi
    };

    let spec = if s.toggles.decoherence {
        DissipationSpec::from_params(&s.params)
    } else {
        DissipationSpec::none(n)
    };
    let rho0 = DensityMatrix::from_pure(&psi0);
    let (rho, diagnostics) = wrap_engine(&id, evolve(&rho0, &h, &spec, t_gate, &cfg))?;
    let fidelity_vs_logical = wrap_engine(&id, fidelity(&rho, &psi_logical))?;
    let fidelity_vs_coherent = wrap_engine(&id, fidelity(&rho, &psi_coherent))?;
    let f = match s.reference {
        Reference::Logical => fidelity_vs_logical,
        Reference::Coherent => fidelity_vs_coherent,
    };
    let (_, leakage) = decode_density(&rho, &cat, &layout)?;

    let row = ResultRow {
        scenario_id: id,
        model: s.model.as_str().to_string(),
        label: s.label.clone(),
        kappa_inv_us: s.kappa_inv_us,
        alpha: s.params.alpha,
        n_cut: s.n_cut,
        dt_ns: s.integrator.dt_ns,
        fidelity: f,
        trace_error: diagnostics.max_trace_drift,
        leakage,
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok(RunDetail {
        row,
        diagnostics,
        fidelity_vs_logical,
        fidelity_vs_coherent,
    })
}

/// Run one scenario per kappa value. Rows execute in the rayon pool and come
/// back in deterministic scenario order; per-row failures are recorded
/// without aborting the sweep.
pub fn sweep_kappa(
    base: &Scenario,
    kappa_inv_us: &[f64],
) -> Vec<Result<ResultRow, HarnessError>> {
    let mut scenarios: Vec<Scenario> = kappa_inv_us
        .iter()
        .map(|&k| {
            let mut s = base.clone();
            s.kappa_inv_us = k;
            s.params.kappa_inv_us = vec![k; s.params.n_cavities()];
            s
        })
        .collect();
    scenarios.sort_by(|a, b| a.id().cmp(&b.id()));
    scenarios.par_iter().map(run_scenario).collect()
}

/// The default lifetime grid, 100..=900 us in 100 us steps.
pub fn default_kappa_grid() -> Vec<f64> {
    (1..=9).map(|k| 100.0 * k as f64).collect()
}

/// Fidelity over an n_cut x dt grid, with pairwise deltas along each axis.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub n_cuts: Vec<usize>,
    pub dts: Vec<f64>,
    /// fidelity[i][j] for n_cuts[i], dts[j].
    pub fidelity: Vec<Vec<f64>>,
}

impl ConvergenceReport {
    /// |F(n_cut_i) - F(n_cut_{i+1})| at fixed dt index.
    pub fn n_cut_delta(&self, i: usize, j: usize) -> f64 {
        (self.fidelity[i][j] - self.fidelity[i + 1][j]).abs()
    }

    /// |F(dt_j) - F(dt_{j+1})| at fixed n_cut index.
    pub fn dt_delta(&self, i: usize, j: usize) -> f64 {
        (self.fidelity[i][j] - self.fidelity[i][j + 1]).abs()
    }
}

/// Fidelity grid over truncations and step sizes for one scenario.
pub fn convergence_study(
    base: &Scenario,
    n_cuts: &[usize],
    dts: &[f64],
) -> Result<ConvergenceReport, HarnessError> {
    let mut grid: Vec<(usize, usize, Scenario)> = Vec::new();
    for (i, &nc) in n_cuts.iter().enumerate() {
        for (j, &dt) in dts.iter().enumerate() {
            let mut s = base.clone();
            s.n_cut = nc;
            s.integrator.dt_ns = dt;
            grid.push((i, j, s));
        }
    }
    let results: Vec<(usize, usize, Result<ResultRow, HarnessError>)> = grid
        .par_iter()
        .map(|(i, j, s)| (*i, *j, run_scenario(s)))
        .collect();
    let mut fidelity = vec![vec![f64::NAN; dts.len()]; n_cuts.len()];
    for (i, j, r) in results {
        fidelity[i][j] = r?.fidelity;
    }
    Ok(ConvergenceReport {
        n_cuts: n_cuts.to_vec(),
        dts: dts.to_vec(),
        fidelity,
    })
}
