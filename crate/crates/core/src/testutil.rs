//! Shared fixtures for unit tests.

use crate::params::PhysicalParams;

/// Three-cavity operating point used throughout the unit tests.
pub fn test_point() -> PhysicalParams {
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

/// Two-cavity reduction of the same point (cavities 1 and 2 only).
pub fn test_point_two_cavities() -> PhysicalParams {
    let mut p = test_point();
    p.omega_c_ghz.truncate(2);
    p.kappa_inv_us.truncate(2);
    p
}

/// Tiny deterministic xorshift generator for reproducible pseudo-random tests.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [-0.5, 0.5).
    pub fn next_centered(&mut self) -> f64 {
        self.next_f64() - 0.5
    }
}
