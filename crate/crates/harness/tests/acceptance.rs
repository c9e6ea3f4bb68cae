//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`; a failing test prints its table either way).
//!
//! The heavy shared computations (the four full-model points, the four
//! effective-model points and the lifetime sweep) run once behind lazy
//! statics.
//!
//! Criterion 7 is expected to fail, by design rather than by accident: at
//! this operating point the unwanted-coupling ladder puts second-order
//! Stark phases of several radians on the target modes and generates a
//! near-resonant cavity-2/3 photon hop (~1.8 MHz at 10 MHz detuning,
//! 2.5x the direct crosstalk), so the full model cannot land inside the
//! target fidelity bands under any reference convention - the measured
//! table is part of the failure message. The effective model reproduces
//! the same target bands to ~1e-3, which is what the sweep and the other
//! criteria exercise.

use catphase_core::cat::{
    cat_basis, decode_logical, ideal_output_coeffs, input_coeffs, logical_encode, LogicalState,
};
use catphase_core::gate::{full_gate, logical_truth_table};
use catphase_core::hamiltonians::{build_effective, build_full, EffectiveForm};
use catphase_core::hilbert::HilbertLayout;
use catphase_core::lindblad::{
    dissipation_jump_list, evolve, evolve_state, DissipationSpec, IntegratorConfig,
};
use catphase_core::operators::{embed, number};
use catphase_core::params::DerivedParams;
use catphase_core::propagator::piecewise_propagator;
use catphase_core::state::{DensityMatrix, StateVector};
use catphase_core::units::{lifetime_us_to_rate, mhz_to_ang};
use catphase_harness::operating_point::{named_case, reference_operating_point};
use catphase_harness::run::{run_scenario_detailed, RunDetail};
use catphase_harness::scenario::{
    IntegratorSettings, IntegrationMethod, Model, Reference, Scenario, Toggles,
};
use num_complex::Complex64;
use std::sync::LazyLock;

const CASES: [&str; 4] = ["a", "b", "c", "d"];
const FULL_MODEL_THRESHOLDS: [f64; 4] = [0.9902, 0.9884, 0.9886, 0.9903];

fn scenario(label: &str, model: Model, kappa: f64, n_cut: usize, dt: f64) -> Scenario {
    let mut params = reference_operating_point();
    params.kappa_inv_us = vec![kappa; 3];
    Scenario {
        params,
        model,
        label: label.to_string(),
        angles_rad: named_case(label).expect("named case"),
        kappa_inv_us: kappa,
        n_cut,
        integrator: IntegratorSettings {
            dt_ns: dt,
            method: IntegrationMethod::Rk4,
        },
        toggles: Toggles::default(),
        reference: Reference::Logical,
    }
}

/// Full-model points at the acceptance resolution (n_cut 6, dt 0.01 ns).
static FULL_POINTS: LazyLock<Vec<RunDetail>> = LazyLock::new(|| {
    CASES
        .iter()
        .map(|label| {
            run_scenario_detailed(&scenario(label, Model::Full, 300.0, 6, 0.01))
                .expect("full point")
        })
        .collect()
});

/// Effective-model points at matching truncation (dt 0.02 ns; the step has
/// converged far below the band widths, see criterion 9).
static EFF_POINTS: LazyLock<Vec<RunDetail>> = LazyLock::new(|| {
    CASES
        .iter()
        .map(|label| {
            run_scenario_detailed(&scenario(label, Model::Effective, 300.0, 6, 0.02))
                .expect("effective point")
        })
        .collect()
});

/// Lifetime sweep of the effective model, 9 points per case.
static SWEEP: LazyLock<Vec<(String, Vec<RunDetail>)>> = LazyLock::new(|| {
    CASES
        .iter()
        .map(|label| {
            let rows = (1..=9)
                .map(|k| {
                    let kappa = 100.0 * k as f64;
                    run_scenario_detailed(&scenario(label, Model::Effective, kappa, 4, 0.04))
                        .expect("sweep point")
                })
                .collect();
            (label.to_string(), rows)
        })
        .collect()
});

#[test]
fn criterion_1_matching_condition() {
    let d = DerivedParams::from_params(&reference_operating_point()).unwrap();
    let checks = [
        ("g_2", d.g_mhz[1], 50.5),
        ("g_3", d.g_mhz[2], 72.1),
        ("g~_1", d.g_tilde_mhz[0], 49.5),
        ("g~_2", d.g_tilde_mhz[1], 35.7),
        ("g~_3", d.g_tilde_mhz[2], 41.6),
    ];
    let mut ok = true;
    for (name, got, want) in checks {
        let pass = (got - want).abs() <= 0.1;
        ok &= pass;
        if !pass {
            println!("  {name} = {got:.4} MHz, want {want} +- 0.1");
        }
    }
    println!(
        "ACCEPTANCE 1 {}: matching condition couplings (g = {:?} MHz, g~ = {:?} MHz)",
        if ok { "PASS" } else { "FAIL" },
        d.g_mhz,
        d.g_tilde_mhz
    );
    assert!(ok, "criterion 1: coupling values out of band");
}

#[test]
fn criterion_2_timing() {
    let d = DerivedParams::from_params(&reference_operating_point()).unwrap();
    let t_ok = (d.gate_time_us - 0.408).abs() / 0.408 <= 0.01;
    let t_ns = d.gate_time_ns();
    let mut chi_ok = true;
    for l in 2..=3 {
        let rel = (mhz_to_ang(d.chi(l)) * t_ns - std::f64::consts::PI).abs()
            / std::f64::consts::PI;
        chi_ok &= rel <= 1e-9;
    }
    println!(
        "ACCEPTANCE 2 {}: gate time {:.6} us, chi*T = pi to 1e-9",
        if t_ok && chi_ok { "PASS" } else { "FAIL" },
        d.gate_time_us
    );
    assert!(t_ok, "criterion 2: gate time {} us", d.gate_time_us);
    assert!(chi_ok, "criterion 2: chi*T deviates from pi");
}

#[test]
fn criterion_3_quality_factors() {
    let d = DerivedParams::from_params(&reference_operating_point()).unwrap();
    let want = [1.31e7, 1.07e7, 1.07e7];
    let mut ok = true;
    for (q, w) in d.q_factors.iter().zip(want) {
        ok &= (q - w).abs() / w <= 0.01;
    }
    println!(
        "ACCEPTANCE 3 {}: quality factors {:?}",
        if ok { "PASS" } else { "FAIL" },
        d.q_factors
    );
    assert!(ok, "criterion 3: quality factors {:?}", d.q_factors);
}

#[test]
fn criterion_4_ideal_gate_exactness() {
    let params = reference_operating_point();
    let d = DerivedParams::from_params(&params).unwrap();
    let layout = HilbertLayout::new(3, 8).unwrap();
    let cat = cat_basis(0.5, 8).unwrap();
    let gate = full_gate(&d, &layout).unwrap();
    let mut worst: f64 = 0.0;

    // basis-state truth table
    let table = logical_truth_table(3).unwrap();
    for k in 0..8usize {
        let psi = logical_encode(&LogicalState::basis(3, k), &cat, &layout).unwrap();
        let out = gate.apply_state(&psi).unwrap();
        let dot = psi.inner(&out);
        worst = worst.max((dot - Complex64::new(table[k] as f64, 0.0)).norm());
    }

    // 50 random logical inputs
    let mut seed = 0x5EED_CAFE_0123_4567u64;
    let mut rnd = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for _ in 0..50 {
        let mut s = LogicalState::new((0..8).map(|_| Complex64::new(rnd(), rnd())).collect())
            .unwrap();
        s.normalize();
        let psi = logical_encode(&s, &cat, &layout).unwrap();
        let out = gate.apply_state(&psi).unwrap();
        let dec = decode_logical(&out, &cat, &layout).unwrap();
        let ideal = ideal_output_coeffs(&s);
        for k in 0..8 {
            worst = worst.max((dec.coeffs[k] - ideal.coeffs[k]).norm());
        }
    }

    // n = 2 controlled-Z on encoded cats
    {
        let mut p2 = params.clone();
        p2.omega_c_ghz.truncate(2);
        p2.kappa_inv_us.truncate(2);
        let d2 = DerivedParams::from_params(&p2).unwrap();
        let layout2 = HilbertLayout::new(2, 8).unwrap();
        let gate2 = full_gate(&d2, &layout2).unwrap();
        let t2 = logical_truth_table(2).unwrap();
        for k in 0..4usize {
            let psi = logical_encode(&LogicalState::basis(2, k), &cat, &layout2).unwrap();
            let out = gate2.apply_state(&psi).unwrap();
            let dot = psi.inner(&out);
            worst = worst.max((dot - Complex64::new(t2[k] as f64, 0.0)).norm());
        }
    }

    // n = 4 extension: |1111> -> -|1111>, |1000> unchanged
    {
        let mut p4 = params.clone();
        p4.omega_c_ghz = vec![7.0, 5.69, 5.68, 5.67];
        p4.kappa_inv_us = vec![300.0; 4];
        let d4 = DerivedParams::from_params(&p4).unwrap();
        let layout4 = HilbertLayout::new(4, 8).unwrap();
        let gate4 = full_gate(&d4, &layout4).unwrap();
        let t4 = logical_truth_table(4).unwrap();
        for k in [0b1111usize, 0b1000, 0b0101, 0b1110] {
            let psi = logical_encode(&LogicalState::basis(4, k), &cat, &layout4).unwrap();
            let out = gate4.apply_state(&psi).unwrap();
            let dot = psi.inner(&out);
            worst = worst.max((dot - Complex64::new(t4[k] as f64, 0.0)).norm());
        }
    }

    let pass = worst <= 1e-8;
    println!(
        "ACCEPTANCE 4 {}: ideal-gate truth tables, max deviation {worst:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion 4: max deviation {worst:.3e}");
}

#[test]
fn criterion_5_closed_system_equivalence() {
    let params = reference_operating_point();
    let d = DerivedParams::from_params(&params).unwrap();
    let layout = HilbertLayout::new(3, 8).unwrap();
    let cat = cat_basis(0.5, 8).unwrap();
    let h = build_effective(&d, &layout, EffectiveForm::Reduced).unwrap();
    let gate = full_gate(&d, &layout).unwrap();
    let cfg = IntegratorConfig {
        dt_ns: 0.01,
        ..Default::default()
    };
    let t = d.gate_time_ns();

    let mut inputs: Vec<LogicalState> = vec![
        input_coeffs(
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_4,
        ),
        LogicalState::basis(3, 0b101),
        LogicalState::basis(3, 0b111),
    ];
    let mut mixed = LogicalState::new(
        (0..8)
            .map(|k| Complex64::new(1.0 / (k as f64 + 1.0), 0.2 * k as f64))
            .collect(),
    )
    .unwrap();
    mixed.normalize();
    inputs.push(mixed);

    let mut worst: f64 = 1.0;
    for input in &inputs {
        let psi0 = logical_encode(input, &cat, &layout).unwrap();
        let evolved = evolve_state(&psi0, &h, t, &cfg).unwrap();
        let expect = gate.apply_state(&psi0).unwrap();
        worst = worst.min(evolved.overlap(&expect));
    }
    let pass = worst >= 1.0 - 1e-6;
    println!(
        "ACCEPTANCE 5 {}: closed ground-sector evolution vs diagonal gate, min overlap {:.9}",
        if pass { "PASS" } else { "FAIL" },
        worst
    );
    assert!(pass, "criterion 5: min overlap {worst}");
}

#[test]
fn criterion_6_oracle_equivalence() {
    // reduced instance: 2 cavities, n_cut = 3, total_dim = 27
    let mut p2 = reference_operating_point();
    p2.omega_c_ghz.truncate(2);
    p2.kappa_inv_us.truncate(2);
    let d2 = DerivedParams::from_params(&p2).unwrap();
    let layout = HilbertLayout::new(2, 3).unwrap();
    assert_eq!(layout.total_dim(), 27);
    let h = build_full(&d2, &layout).unwrap();
    let spec = DissipationSpec::from_params(&p2);
    let cat = cat_basis(0.5, 3).unwrap();
    let mut s = LogicalState::new(vec![
        Complex64::new(0.5, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(-0.5, 0.0),
    ])
    .unwrap();
    s.normalize();
    let psi0 = logical_encode(&s, &cat, &layout).unwrap();
    let rho0 = DensityMatrix::from_pure(&psi0);
    let t_gate = d2.gate_time_ns();

    let cfg = IntegratorConfig {
        dt_ns: 0.0025,
        ..Default::default()
    };
    let (rho_rk4, _) = evolve(&rho0, &h, &spec, t_gate, &cfg).unwrap();

    // the piecewise-constant slicing error is quadratic in the slice width
    // and linear in time (measured 3.4e-6 at 1 ps slices over the gate
    // time); 0.33 ps slices leave ~3x headroom under the 1e-6 band
    let jumps = dissipation_jump_list(&spec, &layout).unwrap();
    let slices = (t_gate / 0.00033).ceil() as usize;
    let rho_oracle = piecewise_propagator(&h, &jumps, &rho0, 0.0, t_gate, slices).unwrap();

    let diff = rho_rk4.mat.max_abs_diff(&rho_oracle.mat);
    let pass = diff <= 1e-6;
    println!(
        "ACCEPTANCE 6 {}: RK4 vs brute-force propagator over the gate time, max-norm {diff:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion 6: max-norm difference {diff:.3e}");
}

#[test]
fn criterion_7_fig5_point_reproduction() {
    let full = &*FULL_POINTS;
    let eff = &*EFF_POINTS;
    let mut table = String::new();
    table.push_str(
        "case | F_full(logical) | F_full(coherent) | F_eff(logical) | target threshold\n",
    );
    let mut band_ok = true;
    let mut gap_ok = true;
    for (i, label) in CASES.iter().enumerate() {
        let f_full = full[i].row.fidelity;
        let f_eff = eff[i].row.fidelity;
        let want = FULL_MODEL_THRESHOLDS[i];
        table.push_str(&format!(
            "  {label}  |    {:.6}     |     {:.6}     |    {:.6}    | {want}\n",
            f_full, full[i].fidelity_vs_coherent, f_eff
        ));
        band_ok &= (f_full - want).abs() <= 0.01;
        let gap = f_eff - f_full;
        gap_ok &= (0.001..=0.006).contains(&gap);
    }
    // context: how the effective model compares against the same thresholds
    let eff_vs_thresholds: Vec<f64> = eff
        .iter()
        .zip(FULL_MODEL_THRESHOLDS)
        .map(|(r, w)| r.row.fidelity - w)
        .collect();
    let pass = band_ok && gap_ok;
    println!(
        "ACCEPTANCE 7 {}: full-model fidelity points\n{table}  effective-model deviation from the target thresholds: {:?}\n  (full-model clauses fail by design at this operating point: the unwanted-coupling ladder puts ~4-5 rad Stark phases and a near-resonant cavity-2/3 hop on the targets; the effective model reproduces the target thresholds to ~1e-3)",
        if pass { "PASS" } else { "FAIL" },
        eff_vs_thresholds
    );
    assert!(
        band_ok,
        "criterion 7 (fails by design at this operating point, see the suite header): full-model fidelities {:?} vs thresholds {FULL_MODEL_THRESHOLDS:?} +- 0.01\n{table}",
        full.iter().map(|r| r.row.fidelity).collect::<Vec<_>>()
    );
    assert!(
        gap_ok,
        "criterion 7 (fails by design at this operating point, see the suite header): effective-full gaps {:?} outside [0.001, 0.006]\n{table}",
        full.iter()
            .zip(eff.iter())
            .map(|(f, e)| e.row.fidelity - f.row.fidelity)
            .collect::<Vec<_>>()
    );
}

#[test]
fn criterion_8_sweep_monotonicity() {
    let sweep = &*SWEEP;
    let mut ok = true;
    let mut summary = String::new();
    for (label, rows) in sweep {
        let fs: Vec<f64> = rows.iter().map(|r| r.row.fidelity).collect();
        for w in fs.windows(2) {
            if w[1] < w[0] - 1e-12 {
                ok = false;
            }
        }
        summary.push_str(&format!("  case ({label}): {fs:?}\n"));
    }
    println!(
        "ACCEPTANCE 8 {}: effective-model fidelity nondecreasing over the lifetime grid\n{summary}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion 8: fidelity not monotone\n{summary}");
}

#[test]
fn criterion_9_conservation_and_convergence() {
    // trace drift and Hermiticity defect across every shared acceptance run
    let mut max_drift: f64 = 0.0;
    let mut max_defect: f64 = 0.0;
    for detail in FULL_POINTS.iter().chain(EFF_POINTS.iter()) {
        max_drift = max_drift.max(detail.diagnostics.max_trace_drift);
        max_defect = max_defect.max(detail.diagnostics.max_herm_defect);
    }
    for (_, rows) in SWEEP.iter() {
        for detail in rows {
            max_drift = max_drift.max(detail.diagnostics.max_trace_drift);
            max_defect = max_defect.max(detail.diagnostics.max_herm_defect);
        }
    }
    let drift_ok = max_drift <= 1e-6;
    let defect_ok = max_defect <= 1e-8;

    // single-mode decay against the analytic law
    let layout = HilbertLayout::new(1, 4).unwrap();
    let h = catphase_core::modulated::ModulatedHamiltonian::new(layout.clone());
    let kappa = lifetime_us_to_rate(300.0);
    let mut spec = DissipationSpec::none(1);
    spec.kappa_per_ns = vec![kappa];
    let rho0 = DensityMatrix::from_pure(&StateVector::basis(layout.clone(), &[0, 1]));
    let t_final = 410.0;
    let cfg = IntegratorConfig {
        dt_ns: 0.01,
        ..Default::default()
    };
    let (rho, _) = evolve(&rho0, &h, &spec, t_final, &cfg).unwrap();
    let n_op = embed(1, &number(4).unwrap(), &layout).unwrap();
    let mean = rho.expectation(&n_op).re;
    let expect = (-kappa * t_final).exp();
    let decay_rel = ((mean - expect) / expect).abs();
    let decay_ok = decay_rel <= 1e-6;

    // step halving on the full model (same dynamics, reduced truncation)
    let f1 = run_scenario_detailed(&scenario("a", Model::Full, 300.0, 4, 0.01))
        .unwrap()
        .row
        .fidelity;
    let f2 = run_scenario_detailed(&scenario("a", Model::Full, 300.0, 4, 0.005))
        .unwrap()
        .row
        .fidelity;
    let halving = (f1 - f2).abs();
    let halving_ok = halving <= 1e-5;

    let pass = drift_ok && defect_ok && decay_ok && halving_ok;
    println!(
        "ACCEPTANCE 9 {}: trace drift {max_drift:.3e} (<= 1e-6), Hermiticity defect {max_defect:.3e} (<= 1e-8), decay law rel err {decay_rel:.3e} (<= 1e-6), step-halving delta {halving:.3e} (<= 1e-5)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(drift_ok, "criterion 9: trace drift {max_drift:.3e}");
    assert!(defect_ok, "criterion 9: Hermiticity defect {max_defect:.3e}");
    assert!(decay_ok, "criterion 9: decay law error {decay_rel:.3e}");
    assert!(halving_ok, "criterion 9: step-halving delta {halving:.3e}");
}
