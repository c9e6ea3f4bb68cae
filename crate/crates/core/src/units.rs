//! Unit conventions.
//!
//! Configs and reports quote ordinary frequencies (GHz, MHz) and times
//! (us, ns), the way operating points are usually stated. Internally every
//! Hamiltonian rate and modulation frequency is angular, in rad/ns, and time
//! is in ns. Decay rates are inverse lifetimes in 1/ns (no 2*pi).
//!
//! 1 GHz ordinary = 2*pi rad/ns; 1 MHz ordinary = 2*pi * 1e-3 rad/ns.

use std::f64::consts::TAU;

/// Ordinary frequency in GHz -> angular rad/ns.
#[inline]
pub fn ghz_to_ang(f_ghz: f64) -> f64 {
    TAU * f_ghz
}

/// Angular rad/ns -> ordinary frequency in GHz.
#[inline]
pub fn ang_to_ghz(w: f64) -> f64 {
    w / TAU
}

/// Ordinary frequency in MHz -> angular rad/ns.
#[inline]
pub fn mhz_to_ang(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e-3
}

/// Angular rad/ns -> ordinary frequency in MHz.
#[inline]
pub fn ang_to_mhz(w: f64) -> f64 {
    w / TAU * 1e3
}

#[inline]
pub fn us_to_ns(t_us: f64) -> f64 {
    t_us * 1e3
}

#[inline]
pub fn ns_to_us(t_ns: f64) -> f64 {
    t_ns * 1e-3
}

/// Lifetime in us -> decay rate in 1/ns.
#[inline]
pub fn lifetime_us_to_rate(t_us: f64) -> f64 {
    1.0 / us_to_ns(t_us)
}
