//! Interaction-picture Hamiltonians of the gate scheme.
//!
//! All builders work for any number of cavities n >= 2; couplings and
//! detunings come from a resolved [`DerivedParams`]. Conventions:
//!
//! - cavity 1 couples to g<->e with strength g_1 and phase exp(-i delta_1 t),
//! - cavity l >= 2 couples to e<->f with strength g_l and phase exp(+i delta_l t),
//! - the unwanted channels swap the transitions: cavity 1 on e<->f at
//!   exp(-i delta~_1 t), cavity l on g<->e at exp(+i delta~_l t),
//! - inter-cavity crosstalk hops photons between cavity pairs at
//!   exp(-i Delta~_kl t), one term per unordered pair,
//! - the dispersive effective forms are photon-number diagonal apart from
//!   the pair-hopping terms, and reduce on the ground-level sector to
//!   lambda_1 n_1 - sum_l chi_1l n_1 n_l.

use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use crate::modulated::ModulatedHamiltonian;
use crate::operators::{annihilation, embed, number, qutrit_projector, qutrit_transition, Level};
use crate::params::DerivedParams;
use crate::sparse::SparseOperator;
use crate::units::{ghz_to_ang, mhz_to_ang};
use num_complex::Complex64;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// a_l embedded on the composite space (l is the 1-based cavity label).
fn cavity_annihilation(l: usize, layout: &HilbertLayout) -> Result<SparseOperator, CoreError> {
    embed(l, &annihilation(layout.dim_of(l))?, layout)
}

fn cavity_number(l: usize, layout: &HilbertLayout) -> Result<SparseOperator, CoreError> {
    embed(l, &number(layout.dim_of(l))?, layout)
}

fn qutrit_raise(from: Level, to: Level, layout: &HilbertLayout) -> Result<SparseOperator, CoreError> {
    embed(0, &qutrit_transition(from, to), layout)
}

fn projector(level: Level, layout: &HilbertLayout) -> Result<SparseOperator, CoreError> {
    embed(0, &qutrit_projector(level), layout)
}

/// Wanted couplings: g_1 a_1 sigma+_eg at exp(-i delta_1 t) plus
/// g_l a_l sigma+_fe at exp(+i delta_l t) for l = 2..n, each with its
/// Hermitian conjugate.
pub fn build_interaction(
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<ModulatedHamiltonian, CoreError> {
    check_arity(d, layout)?;
    let mut h = ModulatedHamiltonian::new(layout.clone());
    let n = layout.n_cavities();

    let a1 = cavity_annihilation(1, layout)?;
    let sp_eg = qutrit_raise(Level::G, Level::E, layout)?;
    let op1 = a1.matmul(&sp_eg)?.scale(real(mhz_to_ang(d.g_mhz[0])));
    h.push_term(op1, -ghz_to_ang(d.detunings.delta1_ghz), true)?;

    let sp_fe = qutrit_raise(Level::E, Level::F, layout)?;
    for l in 2..=n {
        let al = cavity_annihilation(l, layout)?;
        let op = al
            .matmul(&sp_fe)?
            .scale(real(mhz_to_ang(d.g_mhz[l - 1])));
        h.push_term(op, ghz_to_ang(d.detunings.delta_l_ghz[l - 2]), true)?;
    }
    Ok(h)
}

/// Unwanted couplings: g~_1 a_1 sigma+_fe at exp(-i delta~_1 t) plus
/// g~_l a_l sigma+_eg at exp(+i delta~_l t) for l = 2..n.
pub fn build_unwanted(
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<ModulatedHamiltonian, CoreError> {
    check_arity(d, layout)?;
    let mut h = ModulatedHamiltonian::new(layout.clone());
    let n = layout.n_cavities();

    let a1 = cavity_annihilation(1, layout)?;
    let sp_fe = qutrit_raise(Level::E, Level::F, layout)?;
    let op1 = a1
        .matmul(&sp_fe)?
        .scale(real(mhz_to_ang(d.g_tilde_mhz[0])));
    h.push_term(op1, -ghz_to_ang(d.detunings.delta1_tilde_ghz), true)?;

    let sp_eg = qutrit_raise(Level::G, Level::E, layout)?;
    for l in 2..=n {
        let al = cavity_annihilation(l, layout)?;
        let op = al
            .matmul(&sp_eg)?
            .scale(real(mhz_to_ang(d.g_tilde_mhz[l - 1])));
        h.push_term(op, ghz_to_ang(d.detunings.delta_l_tilde_ghz[l - 2]), true)?;
    }
    Ok(h)
}

/// Inter-cavity crosstalk: g_kl a_k a_l^dagger at exp(-i Delta~_kl t) with
/// Hermitian conjugate, one term per unordered pair {k, l}.
pub fn build_crosstalk(
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<ModulatedHamiltonian, CoreError> {
    check_arity(d, layout)?;
    let mut h = ModulatedHamiltonian::new(layout.clone());
    let g = mhz_to_ang(d.g_crosstalk_mhz);
    for &((k, l), diff_ghz) in &d.detunings.cavity_diff_ghz {
        let ak = cavity_annihilation(k, layout)?;
        let al_dag = cavity_annihilation(l, layout)?.adjoint();
        let op = ak.matmul(&al_dag)?.scale(real(g));
        h.push_term(op, -ghz_to_ang(diff_ghz), true)?;
    }
    Ok(h)
}

/// Full model: wanted + unwanted + crosstalk.
pub fn build_full(
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<ModulatedHamiltonian, CoreError> {
    let hi = build_interaction(d, layout)?;
    let dh = build_unwanted(d, layout)?;
    let eps = build_crosstalk(d, layout)?;
    ModulatedHamiltonian::concat(&[&hi, &dh, &eps])
}

/// Which dispersive effective form to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveForm {
    /// Ground-sector form: lambda_1 n_1 |g><g| - sum_l chi_1l n_1 n_l |g><g|.
    Reduced,
    /// All dispersive terms including the excited-sector Stark shifts,
    /// the anti-normal-ordered cross-Kerr on |f>, and the modulated
    /// lambda_kl pair-hopping terms.
    Dispersive,
}

/// Dispersive effective Hamiltonian.
pub fn build_effective(
    d: &DerivedParams,
    layout: &HilbertLayout,
    form: EffectiveForm,
) -> Result<ModulatedHamiltonian, CoreError> {
    check_arity(d, layout)?;
    let mut h = ModulatedHamiltonian::new(layout.clone());
    let n = layout.n_cavities();
    let pg = projector(Level::G, layout)?;
    let lambda1 = mhz_to_ang(d.lambda1_mhz);
    let n1 = cavity_number(1, layout)?;

    match form {
        EffectiveForm::Reduced => {
            // single static diagonal term
            let mut op = n1.matmul(&pg)?.scale(real(lambda1));
            for l in 2..=n {
                let nl = cavity_number(l, layout)?;
                let chi = mhz_to_ang(d.chi_1l_mhz[l - 2]);
                let kerr = n1.matmul(&nl)?.matmul(&pg)?.scale(real(-chi));
                op = op.add(&kerr)?;
            }
            h.push_term(op, 0.0, false)?;
        }
        EffectiveForm::Dispersive => {
            let pe = projector(Level::E, layout)?;
            let pf = projector(Level::F, layout)?;
            let ident = SparseOperator::identity(layout.clone());

            // lambda_1 (n_1 |g><g| - (n_1 + 1) |e><e|)
            let n1p1 = n1.add(&ident)?;
            let line1 = n1
                .matmul(&pg)?
                .add(&n1p1.matmul(&pe)?.scale(real(-1.0)))?
                .scale(real(lambda1));
            h.push_term(line1, 0.0, false)?;

            // -sum_l lambda_l (n_l |e><e| - (n_l + 1) |f><f|)
            for l in 2..=n {
                let lam = mhz_to_ang(d.lambda_l_mhz[l - 2]);
                let nl = cavity_number(l, layout)?;
                let nlp1 = nl.add(&ident)?;
                let op = nl
                    .matmul(&pe)?
                    .add(&nlp1.matmul(&pf)?.scale(real(-1.0)))?
                    .scale(real(-lam));
                h.push_term(op, 0.0, false)?;
            }

            // +sum_l chi_1l ((n_1 + 1)(n_l + 1) |f><f| - n_1 n_l |g><g|),
            // anti-normal ordering on the |f> branch kept as printed
            for l in 2..=n {
                let chi = mhz_to_ang(d.chi_1l_mhz[l - 2]);
                let nl = cavity_number(l, layout)?;
                let nlp1 = nl.add(&ident)?;
                let f_branch = n1p1.matmul(&nlp1)?.matmul(&pf)?;
                let g_branch = n1.matmul(&nl)?.matmul(&pg)?;
                let op = f_branch.add(&g_branch.scale(real(-1.0)))?.scale(real(chi));
                h.push_term(op, 0.0, false)?;
            }

            // +sum_{k<l} lambda_kl (exp(i Delta_kl t) a_k^dagger a_l + h.c.)(|f><f| - |e><e|),
            // Delta_kl = |delta_l| - |delta_k| = omega_ck - omega_cl
            let pf_minus_pe = pf.add(&pe.scale(real(-1.0)))?;
            for &((k, l), lam_mhz) in &d.lambda_kl_mhz {
                let mod_ghz = d.detunings.abs_delta_l(l) - d.detunings.abs_delta_l(k);
                let ak_dag = cavity_annihilation(k, layout)?.adjoint();
                let al = cavity_annihilation(l, layout)?;
                let op = ak_dag
                    .matmul(&al)?
                    .matmul(&pf_minus_pe)?
                    .scale(real(mhz_to_ang(lam_mhz)));
                h.push_term(op, ghz_to_ang(mod_ghz), true)?;
            }
        }
    }
    Ok(h)
}

/// The commuting split of the ground-sector Hamiltonian:
/// H_0 = lambda_1 n_1 |g><g| and H_int = -sum_l chi_1l n_1 n_l |g><g|.
pub fn reduced_split(
    d: &DerivedParams,
    layout: &HilbertLayout,
) -> Result<(SparseOperator, SparseOperator), CoreError> {
    check_arity(d, layout)?;
    let pg = projector(Level::G, layout)?;
    let n1 = cavity_number(1, layout)?;
    let h0 = n1.matmul(&pg)?.scale(real(mhz_to_ang(d.lambda1_mhz)));
    let mut h_int = SparseOperator::zeros(layout.clone());
    for l in 2..=layout.n_cavities() {
        let nl = cavity_number(l, layout)?;
        let chi = mhz_to_ang(d.chi_1l_mhz[l - 2]);
        h_int = h_int.add(&n1.matmul(&nl)?.matmul(&pg)?.scale(real(-chi)))?;
    }
    Ok((h0, h_int))
}

/// Total excitation number sum_l n_l + (0, 1, 2 for g, e, f), which the
/// wanted couplings conserve.
pub fn excitation_number(layout: &HilbertLayout) -> Result<SparseOperator, CoreError> {
    let mut op = embed(
        0,
        &crate::sparse::LocalOperator::new(
            3,
            vec![
                (1, 1, Complex64::ONE),
                (2, 2, Complex64::new(2.0, 0.0)),
            ],
        ),
        layout,
    )?;
    for l in 1..=layout.n_cavities() {
        op = op.add(&cavity_number(l, layout)?)?;
    }
    Ok(op)
}

fn check_arity(d: &DerivedParams, layout: &HilbertLayout) -> Result<(), CoreError> {
    if d.g_mhz.len() != layout.n_cavities() {
        return Err(CoreError::DimensionMismatch {
            context: "derived parameters vs layout cavity count",
            expected: layout.n_cavities(),
            got: d.g_mhz.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DerivedParams;
    use crate::testutil::{test_point, TestRng};
    use std::f64::consts::TAU;

    fn derived() -> DerivedParams {
        DerivedParams::from_params(&test_point()).unwrap()
    }

    fn layout() -> HilbertLayout {
        HilbertLayout::new(3, 4).unwrap()
    }

    #[test]
    fn interaction_term_counts() {
        let h = build_interaction(&derived(), &layout()).unwrap();
        assert_eq!(h.num_terms(), 3);
        assert_eq!(h.num_summands(), 6);
    }

    #[test]
    fn interaction_zero_couplings_vanish() {
        let mut d = derived();
        d.g_mhz = vec![0.0, 0.0, 0.0];
        let h = build_interaction(&d, &layout()).unwrap();
        for &t in &[0.0, 0.3, 11.0] {
            assert_eq!(h.evaluate(t).nnz(), 0);
        }
    }

    #[test]
    fn interaction_matrix_element() {
        // <e, 0_1 | H(0) | g, 1_1> = g_1 in angular units
        let lay = layout();
        let d = derived();
        let h = build_interaction(&d, &lay).unwrap();
        let h0 = h.evaluate(0.0);
        let bra = lay.index_of(&[1, 0, 0, 0]);
        let ket = lay.index_of(&[0, 1, 0, 0]);
        let v = h0.matrix_element(bra, ket);
        let g1_ang = mhz_to_ang(d.g_mhz[0]);
        assert!((v.re - g1_ang).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn unwanted_modulation_frequencies() {
        let d = derived();
        let h = build_unwanted(&d, &layout()).unwrap();
        let omegas: Vec<f64> = h.terms().iter().map(|t| t.omega).collect();
        assert!((omegas[0] - (-TAU * 0.8)).abs() < 1e-12);
        assert!((omegas[1] - TAU * 0.81).abs() < 1e-12);
        assert!((omegas[2] - TAU * 0.82).abs() < 1e-12);
    }

    #[test]
    fn unwanted_hermitian_at_odd_time() {
        let h = build_unwanted(&derived(), &layout()).unwrap();
        assert!(h.hermiticity_defect_at(0.137) < 1e-12);
    }

    #[test]
    fn unwanted_zero_couplings_vanish() {
        let mut d = derived();
        d.g_tilde_mhz = vec![0.0, 0.0, 0.0];
        let h = build_unwanted(&d, &layout()).unwrap();
        assert_eq!(h.evaluate(0.5).nnz(), 0);
    }

    #[test]
    fn crosstalk_pair_terms() {
        let h = build_crosstalk(&derived(), &layout()).unwrap();
        assert_eq!(h.num_terms(), 3);
    }

    #[test]
    fn crosstalk_zero_vanishes() {
        let mut d = derived();
        d.g_crosstalk_mhz = 0.0;
        let h = build_crosstalk(&d, &layout()).unwrap();
        assert_eq!(h.evaluate(1.0).nnz(), 0);
    }

    #[test]
    fn crosstalk_conserves_total_photons() {
        let lay = layout();
        let d = derived();
        let h = build_crosstalk(&d, &lay).unwrap();
        // photon number only (qutrit part irrelevant for hopping terms)
        let mut ntot = crate::sparse::SparseOperator::zeros(lay.clone());
        for l in 1..=3 {
            ntot = ntot.add(&cavity_number(l, &lay).unwrap()).unwrap();
        }
        for &t in &[0.0, 0.42] {
            let ht = h.evaluate(t);
            assert!(ntot.commutator_max_norm(&ht).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn full_is_component_sum() {
        let lay = layout();
        let d = derived();
        let full = build_full(&d, &lay).unwrap();
        let hi = build_interaction(&d, &lay).unwrap();
        let dh = build_unwanted(&d, &lay).unwrap();
        let eps = build_crosstalk(&d, &lay).unwrap();
        assert_eq!(
            full.num_terms(),
            hi.num_terms() + dh.num_terms() + eps.num_terms()
        );
        let t = 0.0;
        let sum = hi
            .evaluate(t)
            .add(&dh.evaluate(t))
            .unwrap()
            .add(&eps.evaluate(t))
            .unwrap();
        assert!(full.evaluate(t).max_abs_diff(&sum) < 1e-14);
    }

    #[test]
    fn full_reduces_to_interaction() {
        let lay = layout();
        let mut d = derived();
        d.g_tilde_mhz = vec![0.0; 3];
        d.g_crosstalk_mhz = 0.0;
        let full = build_full(&d, &lay).unwrap();
        let hi = build_interaction(&d, &lay).unwrap();
        for &t in &[0.0, 0.9] {
            assert!(full.evaluate(t).max_abs_diff(&hi.evaluate(t)) < 1e-15);
        }
    }

    #[test]
    fn reduced_eigenvalue_on_fock_state() {
        // |g, 1, 1, 1>: eigenvalue lambda_1 - chi_12 - chi_13
        let lay = layout();
        let d = derived();
        let h = build_effective(&d, &lay, EffectiveForm::Reduced).unwrap();
        let hs = h.evaluate(0.0);
        let idx = lay.index_of(&[0, 1, 1, 1]);
        let v = hs.matrix_element(idx, idx);
        let expect = mhz_to_ang(d.lambda1_mhz) - mhz_to_ang(d.chi_1l_mhz[0]) - mhz_to_ang(d.chi_1l_mhz[1]);
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-16);
    }

    #[test]
    fn reduced_annihilates_excited_sectors() {
        let lay = layout();
        let h = build_effective(&derived(), &lay, EffectiveForm::Reduced).unwrap();
        let hs = h.evaluate(0.0);
        for (r, c, v) in hs.csr().triplets() {
            assert_eq!(r, c, "reduced form must be diagonal");
            assert_eq!(lay.qutrit_level(r), 0, "support only on |g>");
            assert!(v.im == 0.0);
        }
    }

    #[test]
    fn dispersive_ground_sector_matches_reduced() {
        let lay = layout();
        let d = derived();
        let full = build_effective(&d, &lay, EffectiveForm::Dispersive).unwrap();
        let red = build_effective(&d, &lay, EffectiveForm::Reduced).unwrap();
        // project onto the |g> sector and compare elementwise
        for &t in &[0.0, 0.37] {
            let hf = full.evaluate(t).to_dense();
            let hr = red.evaluate(t).to_dense();
            let mut max_diff: f64 = 0.0;
            for r in 0..lay.total_dim() {
                for c in 0..lay.total_dim() {
                    if lay.qutrit_level(r) == 0 && lay.qutrit_level(c) == 0 {
                        let (ar, ai) = hf.get(r, c);
                        let (br, bi) = hr.get(r, c);
                        max_diff = max_diff.max(((ar - br).powi(2) + (ai - bi).powi(2)).sqrt());
                    }
                }
            }
            assert!(max_diff < 1e-14, "sector mismatch {max_diff}");
        }
    }

    #[test]
    fn all_builders_hermitian_at_random_times() {
        let lay = layout();
        let d = derived();
        let hams = [
            build_interaction(&d, &lay).unwrap(),
            build_unwanted(&d, &lay).unwrap(),
            build_crosstalk(&d, &lay).unwrap(),
            build_full(&d, &lay).unwrap(),
            build_effective(&d, &lay, EffectiveForm::Reduced).unwrap(),
            build_effective(&d, &lay, EffectiveForm::Dispersive).unwrap(),
        ];
        let mut rng = TestRng::new(7);
        for h in &hams {
            for _ in 0..3 {
                let t = 500.0 * rng.next_f64();
                assert!(h.hermiticity_defect_at(t) < 1e-12);
            }
        }
    }

    #[test]
    fn interaction_conserves_excitation_number() {
        let lay = layout();
        let d = derived();
        let h = build_interaction(&d, &lay).unwrap();
        let nexc = excitation_number(&lay).unwrap();
        for &t in &[0.0, 1.7] {
            let ht = h.evaluate(t);
            assert!(nexc.commutator_max_norm(&ht).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn reduced_split_commutes() {
        let lay = layout();
        let (h0, hint) = reduced_split(&derived(), &lay).unwrap();
        assert!(h0.commutator_max_norm(&hint).unwrap() <= 1e-14);
    }

    #[test]
    fn two_cavity_layouts_supported() {
        let p = crate::testutil::test_point_two_cavities();
        let d = DerivedParams::from_params(&p).unwrap();
        let lay = HilbertLayout::new(2, 3).unwrap();
        let h = build_full(&d, &lay).unwrap();
        assert!(h.hermiticity_defect_at(0.21) < 1e-12);
        // 2 wanted + 2 unwanted + 1 pair
        assert_eq!(h.num_terms(), 5);
    }
}
