//! The reference three-cavity operating point.

use catphase_core::params::PhysicalParams;

/// Raw parameter record of the reference operating point: qutrit transitions
/// at 6.5 / 6.2 GHz, cavities at 7.0 / 5.69 / 5.68 GHz, g_1/2pi = 35 MHz with
/// the target couplings solved from the matching condition and the unwanted
/// couplings from the matrix-element ladder, crosstalk at 1% of the largest
/// coupling, conservative qutrit coherence times, equal cavity lifetimes
/// (300 us unless swept) and cat amplitude alpha = 0.5.
pub fn reference_operating_point() -> PhysicalParams {
    PhysicalParams {
        omega_eg_ghz: 6.5,
        omega_fe_ghz: 6.2,
        omega_c_ghz: vec![7.0, 5.69, 5.68],
        g1_mhz: 35.0,
        g_l_mhz: None,
        g_tilde_mhz: None,
        g_crosstalk_fraction: 0.01,
        kappa_inv_us: vec![300.0, 300.0, 300.0],
        gamma_eg_inv_us: 60.0,
        gamma_fe_inv_us: 30.0,
        gamma_fg_inv_us: 150.0,
        gamma_phi_e_inv_us: 20.0,
        gamma_phi_f_inv_us: 20.0,
        alpha: 0.5,
    }
}

/// The four named initial-state angle triples (gamma, theta, phi), radians.
pub fn named_case(label: &str) -> Option<(f64, f64, f64)> {
    use std::f64::consts::PI;
    match label {
        "a" => Some((PI / 4.0, PI / 4.0, PI / 4.0)),
        "b" => Some((PI / 3.0, PI / 3.0, PI / 3.0)),
        "c" => Some((PI / 2.0, PI / 4.0, PI / 3.0)),
        "d" => Some((PI, PI / 3.0, PI / 4.0)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use catphase_core::params::DerivedParams;

    #[test]
    fn resolved_couplings() {
        let d = DerivedParams::from_params(&reference_operating_point()).unwrap();
        assert!((d.g_mhz[1] - 50.5).abs() < 0.1, "g_2 = {}", d.g_mhz[1]);
        assert!((d.g_mhz[2] - 72.1).abs() < 0.1, "g_3 = {}", d.g_mhz[2]);
        assert!((d.g_tilde_mhz[2] - 41.6).abs() < 0.1, "g~_3 = {}", d.g_tilde_mhz[2]);
    }

    #[test]
    fn gate_time_band() {
        let d = DerivedParams::from_params(&reference_operating_point()).unwrap();
        assert!((d.gate_time_us - 0.408).abs() / 0.408 < 0.01, "T = {}", d.gate_time_us);
    }
}
