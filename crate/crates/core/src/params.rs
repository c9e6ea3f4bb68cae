//! Raw and derived physical quantities of the gate's operating point:
//! detunings, unwanted-coupling detunings, two-photon detunings, the
//! coupling matching condition, Stark-shift and cross-Kerr rates, gate time,
//! regime-validity ratios and cavity quality factors.
//!
//! All raw inputs are ordinary frequencies (GHz / MHz) and lifetimes (us),
//! exactly as operating points are quoted. The derived table stays in those
//! units; conversion to angular rad/ns happens in the Hamiltonian builders.

use crate::error::CoreError;
use serde::{Deserialize, Serialize};

/// Raw device and drive parameters.
///
/// Cavity 1 couples to the g<->e transition, cavities l = 2..n couple to
/// e<->f. `g_l_mhz = None` solves the target couplings from the matching
/// condition; `g_tilde_mhz = None` fills the unwanted couplings from the
/// transmon matrix-element ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub omega_eg_ghz: f64,
    pub omega_fe_ghz: f64,
    /// Cavity frequencies, cavity 1 first. Length fixes the number of cavities.
    pub omega_c_ghz: Vec<f64>,
    pub g1_mhz: f64,
    /// Couplings of cavities 2..n (e<->f); None = solve from the matching condition.
    #[serde(default)]
    pub g_l_mhz: Option<Vec<f64>>,
    /// Unwanted-transition couplings for all cavities; None = ratio ladder.
    #[serde(default)]
    pub g_tilde_mhz: Option<Vec<f64>>,
    /// Inter-cavity crosstalk strength as a fraction of the largest coupling.
    pub g_crosstalk_fraction: f64,
    /// Per-cavity photon lifetimes in us.
    pub kappa_inv_us: Vec<f64>,
    pub gamma_eg_inv_us: f64,
    pub gamma_fe_inv_us: f64,
    pub gamma_fg_inv_us: f64,
    pub gamma_phi_e_inv_us: f64,
    pub gamma_phi_f_inv_us: f64,
    /// Cat amplitude (real, >= 0).
    pub alpha: f64,
}

impl PhysicalParams {
    /// g<->f transition frequency from the level ladder.
    pub fn omega_fg_ghz(&self) -> f64 {
        self.omega_eg_ghz + self.omega_fe_ghz
    }

    pub fn n_cavities(&self) -> usize {
        self.omega_c_ghz.len()
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.n_cavities() < 2 {
            return Err(CoreError::InvalidParameter(format!(
                "need at least 2 cavities, got {}",
                self.n_cavities()
            )));
        }
        if self.kappa_inv_us.len() != self.n_cavities() {
            return Err(CoreError::InvalidParameter(format!(
                "kappa_inv_us has {} entries for {} cavities",
                self.kappa_inv_us.len(),
                self.n_cavities()
            )));
        }
        let lifetimes = [
            self.gamma_eg_inv_us,
            self.gamma_fe_inv_us,
            self.gamma_fg_inv_us,
            self.gamma_phi_e_inv_us,
            self.gamma_phi_f_inv_us,
        ];
        if lifetimes.iter().chain(&self.kappa_inv_us).any(|&t| t <= 0.0) {
            return Err(CoreError::InvalidParameter(
                "all lifetimes must be positive".into(),
            ));
        }
        if self.alpha < 0.0 {
            return Err(CoreError::InvalidParameter("alpha must be >= 0".into()));
        }
        if let Some(g) = &self.g_l_mhz {
            if g.len() != self.n_cavities() - 1 {
                return Err(CoreError::InvalidParameter(format!(
                    "g_l_mhz has {} entries for {} target cavities",
                    g.len(),
                    self.n_cavities() - 1
                )));
            }
        }
        if let Some(gt) = &self.g_tilde_mhz {
            if gt.len() != self.n_cavities() {
                return Err(CoreError::InvalidParameter(format!(
                    "g_tilde_mhz has {} entries for {} cavities",
                    gt.len(),
                    self.n_cavities()
                )));
            }
        }
        if self.g_crosstalk_fraction < 0.0 {
            return Err(CoreError::InvalidParameter(
                "g_crosstalk_fraction must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Signed detunings, in GHz.
#[derive(Debug, Clone, PartialEq)]
pub struct Detunings {
    /// delta_1 = omega_c1 - omega_eg.
    pub delta1_ghz: f64,
    /// delta_l = omega_fe - omega_cl, l = 2..n.
    pub delta_l_ghz: Vec<f64>,
    /// delta~_1 = omega_c1 - omega_fe.
    pub delta1_tilde_ghz: f64,
    /// delta~_l = omega_eg - omega_cl, l = 2..n.
    pub delta_l_tilde_ghz: Vec<f64>,
    /// Two-photon detunings Delta_1l = omega_fg - omega_c1 - omega_cl, l = 2..n.
    pub big_delta_1l_ghz: Vec<f64>,
    /// Cavity frequency differences Delta~_kl = omega_ck - omega_cl for
    /// unordered pairs k < l (1-based cavity labels).
    pub cavity_diff_ghz: Vec<((usize, usize), f64)>,
}

impl Detunings {
    pub fn abs_delta_l(&self, l: usize) -> f64 {
        self.delta_l_ghz[l - 2].abs()
    }

    pub fn big_delta(&self, l: usize) -> f64 {
        self.big_delta_1l_ghz[l - 2]
    }

    pub fn cavity_diff(&self, k: usize, l: usize) -> f64 {
        debug_assert!(k < l);
        self.cavity_diff_ghz
            .iter()
            .find(|&&((a, b), _)| a == k && b == l)
            .map(|&(_, v)| v)
            .expect("pair present")
    }
}

/// Full derived-parameter table at a resolved operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    pub detunings: Detunings,
    /// Resolved couplings g_1..g_n in MHz (g_1 is the raw input).
    pub g_mhz: Vec<f64>,
    /// Resolved unwanted couplings g~_1..g~_n in MHz.
    pub g_tilde_mhz: Vec<f64>,
    /// Crosstalk coupling g_kl = fraction * max(g), in MHz (equal for all pairs).
    pub g_crosstalk_mhz: f64,
    /// Stark-shift rate of cavity 1 on the ground level, MHz.
    pub lambda1_mhz: f64,
    /// Stark-shift rates of cavities 2..n, MHz.
    pub lambda_l_mhz: Vec<f64>,
    /// Second-order two-photon couplings lambda_1l, MHz, l = 2..n.
    pub lambda_1l_mhz: Vec<f64>,
    /// Second-order hopping rates lambda_kl for pairs 2 <= k < l, MHz.
    pub lambda_kl_mhz: Vec<((usize, usize), f64)>,
    /// Cross-Kerr gate rates chi_1l = lambda_1l^2 / Delta_1l, MHz, l = 2..n.
    pub chi_1l_mhz: Vec<f64>,
    /// Gate time 2*pi/lambda_1, in us.
    pub gate_time_us: f64,
    /// Cavity quality factors omega_c * kappa^-1.
    pub q_factors: Vec<f64>,
}

impl DerivedParams {
    pub fn chi(&self, l: usize) -> f64 {
        self.chi_1l_mhz[l - 2]
    }

    pub fn gate_time_ns(&self) -> f64 {
        crate::units::us_to_ns(self.gate_time_us)
    }

    /// Resolve everything from raw parameters: detunings, couplings (from the
    /// matching condition where unspecified), unwanted couplings, crosstalk,
    /// second-order rates, gate time and quality factors.
    pub fn from_params(p: &PhysicalParams) -> Result<Self, CoreError> {
        p.validate()?;
        let det = derive_detunings(p)?;
        let mut g_mhz = Vec::with_capacity(p.n_cavities());
        g_mhz.push(p.g1_mhz);
        match &p.g_l_mhz {
            Some(explicit) => g_mhz.extend_from_slice(explicit),
            None => g_mhz.extend_from_slice(&solve_gate_couplings(p, &det)?),
        }
        let g_tilde_mhz = match &p.g_tilde_mhz {
            Some(explicit) => explicit.clone(),
            None => unwanted_coupling_ladder(&g_mhz),
        };
        let g_max = g_mhz.iter().cloned().fold(0.0, f64::max);
        let g_crosstalk_mhz = p.g_crosstalk_fraction * g_max;
        let rates = effective_rates(&g_mhz, &det)?;
        let gate_time_us = gate_time(rates.lambda1_mhz);
        let q_factors = quality_factors(p);
        Ok(DerivedParams {
            detunings: det,
            g_mhz,
            g_tilde_mhz,
            g_crosstalk_mhz,
            lambda1_mhz: rates.lambda1_mhz,
            lambda_l_mhz: rates.lambda_l_mhz,
            lambda_1l_mhz: rates.lambda_1l_mhz,
            lambda_kl_mhz: rates.lambda_kl_mhz,
            chi_1l_mhz: rates.chi_1l_mhz,
            gate_time_us,
            q_factors,
        })
    }
}

/// Signed detunings from the level structure and cavity frequencies.
/// Rejects non-positive two-photon detunings.
pub fn derive_detunings(p: &PhysicalParams) -> Result<Detunings, CoreError> {
    let n = p.n_cavities();
    let wc = &p.omega_c_ghz;
    let delta1_ghz = wc[0] - p.omega_eg_ghz;
    let delta_l_ghz: Vec<f64> = (1..n).map(|i| p.omega_fe_ghz - wc[i]).collect();
    let delta1_tilde_ghz = wc[0] - p.omega_fe_ghz;
    let delta_l_tilde_ghz: Vec<f64> = (1..n).map(|i| p.omega_eg_ghz - wc[i]).collect();
    let big_delta_1l_ghz: Vec<f64> = (1..n)
        .map(|i| p.omega_fg_ghz() - wc[0] - wc[i])
        .collect();
    for (i, &d) in big_delta_1l_ghz.iter().enumerate() {
        if d <= 0.0 {
            return Err(CoreError::InvalidParameter(format!(
                "two-photon detuning Delta_1{} = {d} GHz must be positive",
                i + 2
            )));
        }
    }
    let mut cavity_diff_ghz = Vec::new();
    for k in 0..n {
        for l in (k + 1)..n {
            cavity_diff_ghz.push(((k + 1, l + 1), wc[k] - wc[l]));
        }
    }
    Ok(Detunings {
        delta1_ghz,
        delta_l_ghz,
        delta1_tilde_ghz,
        delta_l_tilde_ghz,
        big_delta_1l_ghz,
        cavity_diff_ghz,
    })
}

/// Matching-condition formula as a pure function of the detuning magnitudes
/// (any common frequency unit):
///
/// ```text
/// g_l = |delta_l| / (|delta_1| + |delta_l|) * sqrt(2 Delta_1l |delta_1|)
/// ```
pub fn matched_coupling(abs_delta1: f64, abs_delta_l: f64, big_delta_1l: f64) -> f64 {
    abs_delta_l / (abs_delta1 + abs_delta_l) * (2.0 * big_delta_1l * abs_delta1).sqrt()
}

/// Target couplings from the matching condition, which enforces
/// chi_1l = lambda_1/2 identically so a single gate time satisfies every
/// pairwise phase condition at once. Returns MHz.
pub fn solve_gate_couplings(p: &PhysicalParams, det: &Detunings) -> Result<Vec<f64>, CoreError> {
    let d1 = det.delta1_ghz.abs();
    let mut out = Vec::with_capacity(p.n_cavities() - 1);
    for l in 2..=p.n_cavities() {
        let big = det.big_delta(l);
        if big <= 0.0 {
            return Err(CoreError::InvalidParameter(format!(
                "Delta_1{l} must be positive"
            )));
        }
        out.push(matched_coupling(d1, det.abs_delta_l(l), big) * 1e3);
    }
    Ok(out)
}

/// Unwanted-transition couplings from the fixed matrix-element ladder of the
/// operating point: g~_1 = sqrt(2) g_1 for cavity 1 (its unwanted channel is
/// the stronger e<->f transition), g~_l = g_l / sqrt(l) for l >= 2.
pub fn unwanted_coupling_ladder(g_mhz: &[f64]) -> Vec<f64> {
    g_mhz
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            if i == 0 {
                2.0_f64.sqrt() * g
            } else {
                g / ((i + 1) as f64).sqrt()
            }
        })
        .collect()
}

/// Second-order rates bundle (all MHz).
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveRates {
    pub lambda1_mhz: f64,
    pub lambda_l_mhz: Vec<f64>,
    pub lambda_1l_mhz: Vec<f64>,
    pub lambda_kl_mhz: Vec<((usize, usize), f64)>,
    pub chi_1l_mhz: Vec<f64>,
}

/// Stark shifts, two-photon couplings and cross-Kerr rates from resolved
/// couplings (MHz) and detunings.
pub fn effective_rates(g_mhz: &[f64], det: &Detunings) -> Result<EffectiveRates, CoreError> {
    let n = g_mhz.len();
    let d1 = det.delta1_ghz.abs() * 1e3; // MHz
    if d1 == 0.0 {
        return Err(CoreError::InvalidParameter("delta_1 is zero".into()));
    }
    let abs_dl_mhz: Vec<f64> = (2..=n).map(|l| det.abs_delta_l(l) * 1e3).collect();
    if abs_dl_mhz.iter().any(|&d| d == 0.0) {
        return Err(CoreError::InvalidParameter("a target detuning is zero".into()));
    }
    let lambda1_mhz = g_mhz[0] * g_mhz[0] / d1;
    let lambda_l_mhz: Vec<f64> = (2..=n)
        .map(|l| {
            let g = g_mhz[l - 1];
            g * g / abs_dl_mhz[l - 2]
        })
        .collect();
    let lambda_1l_mhz: Vec<f64> = (2..=n)
        .map(|l| {
            let g = g_mhz[l - 1];
            0.5 * g_mhz[0] * g * (1.0 / d1 + 1.0 / abs_dl_mhz[l - 2])
        })
        .collect();
    let mut lambda_kl_mhz = Vec::new();
    for k in 2..=n {
        for l in (k + 1)..=n {
            let v = 0.5
                * g_mhz[k - 1]
                * g_mhz[l - 1]
                * (1.0 / abs_dl_mhz[k - 2] + 1.0 / abs_dl_mhz[l - 2]);
            lambda_kl_mhz.push(((k, l), v));
        }
    }
    let chi_1l_mhz: Vec<f64> = (2..=n)
        .map(|l| {
            let lam = lambda_1l_mhz[l - 2];
            lam * lam / (det.big_delta(l) * 1e3)
        })
        .collect();
    Ok(EffectiveRates {
        lambda1_mhz,
        lambda_l_mhz,
        lambda_1l_mhz,
        lambda_kl_mhz,
        chi_1l_mhz,
    })
}

/// Gate time T = 2*pi / lambda_1 (angular), i.e. one full Stark-shift cycle
/// of cavity 1, in us.
pub fn gate_time(lambda1_mhz: f64) -> f64 {
    // 1 / (lambda_1 in MHz ordinary) us
    1.0 / lambda1_mhz
}

/// Quality factors Q_l = omega_cl * kappa_l^-1 (angular frequency times lifetime).
pub fn quality_factors(p: &PhysicalParams) -> Vec<f64> {
    p.omega_c_ghz
        .iter()
        .zip(&p.kappa_inv_us)
        .map(|(&f_ghz, &k_us)| crate::units::ghz_to_ang(f_ghz) * crate::units::us_to_ns(k_us))
        .collect()
}

/// One regime-validity ratio with its label.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeRatio {
    pub label: String,
    pub value: f64,
    pub flagged: bool,
}

/// Dispersive-regime report: ratios that the second-order treatment assumes
/// to be large, flagged (not rejected) when below `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub threshold: f64,
    pub ratios: Vec<RegimeRatio>,
}

impl RegimeReport {
    pub fn any_flagged(&self) -> bool {
        self.ratios.iter().any(|r| r.flagged)
    }

    pub fn ratio(&self, label: &str) -> Option<f64> {
        self.ratios
            .iter()
            .find(|r| r.label == label)
            .map(|r| r.value)
    }
}

pub const DEFAULT_REGIME_THRESHOLD: f64 = 5.0;

pub fn validate_regime(d: &DerivedParams, threshold: f64) -> RegimeReport {
    let mut ratios = Vec::new();
    let mut push = |label: String, value: f64| {
        ratios.push(RegimeRatio {
            label,
            value,
            flagged: value < threshold,
        });
    };
    let d1_mhz = d.detunings.delta1_ghz.abs() * 1e3;
    push("|delta_1|/g_1".into(), d1_mhz / d.g_mhz[0]);
    let n = d.g_mhz.len();
    for l in 2..=n {
        let dl_mhz = d.detunings.abs_delta_l(l) * 1e3;
        push(format!("|delta_{l}|/g_{l}"), dl_mhz / d.g_mhz[l - 1]);
    }
    for l in 2..=n {
        let big_mhz = d.detunings.big_delta(l) * 1e3;
        push(format!("Delta_1{l}/lambda_1"), big_mhz / d.lambda1_mhz);
        push(
            format!("Delta_1{l}/lambda_{l}"),
            big_mhz / d.lambda_l_mhz[l - 2],
        );
        push(
            format!("Delta_1{l}/lambda_1{l}"),
            big_mhz / d.lambda_1l_mhz[l - 2],
        );
    }
    RegimeReport { threshold, ratios }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::test_point;

    #[test]
    fn detunings_at_test_point() {
        let d = derive_detunings(&test_point()).unwrap();
        assert!((d.delta1_ghz.abs() - 0.5).abs() < 1e-12);
        assert!((d.abs_delta_l(2) - 0.51).abs() < 1e-12);
        assert!((d.abs_delta_l(3) - 0.52).abs() < 1e-12);
        assert!((d.big_delta(2) - 0.01).abs() < 1e-12);
        assert!((d.big_delta(3) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn unwanted_detunings_at_test_point() {
        let d = derive_detunings(&test_point()).unwrap();
        assert!((d.delta1_tilde_ghz.abs() - 0.8).abs() < 1e-12);
        assert!((d.delta_l_tilde_ghz[0].abs() - 0.81).abs() < 1e-12);
        assert!((d.delta_l_tilde_ghz[1].abs() - 0.82).abs() < 1e-12);
    }

    #[test]
    fn cavity_differences_at_test_point() {
        let d = derive_detunings(&test_point()).unwrap();
        assert!((d.cavity_diff(1, 2) - 1.31).abs() < 1e-12);
        assert!((d.cavity_diff(2, 3) - 0.01).abs() < 1e-12);
        assert!((d.cavity_diff(1, 3) - 1.32).abs() < 1e-12);
    }

    #[test]
    fn detuning_identity_abs_delta_l() {
        // |delta_l| = |delta_1| + Delta_1l
        let d = derive_detunings(&test_point()).unwrap();
        for l in 2..=3 {
            let lhs = d.abs_delta_l(l);
            let rhs = d.delta1_ghz.abs() + d.big_delta(l);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_two_photon_detuning() {
        let mut p = test_point();
        p.omega_c_ghz = vec![7.0, 6.2, 5.68]; // Delta_12 = 12.7 - 7.0 - 6.2 < 0
        assert!(derive_detunings(&p).is_err());
    }

    #[test]
    fn matched_couplings() {
        let p = test_point();
        let det = derive_detunings(&p).unwrap();
        let g = solve_gate_couplings(&p, &det).unwrap();
        assert!((g[0] - 50.5).abs() < 0.05, "g_2 = {}", g[0]);
        assert!((g[1] - 72.1).abs() < 0.05, "g_3 = {}", g[1]);
    }

    #[test]
    fn symmetric_detunings_collapse() {
        // |delta_l| = |delta_1| = delta and Delta_1l = delta/2 collapse the
        // formula to g_l = delta/2
        for &delta in &[0.1, 0.4, 1.7] {
            let g = matched_coupling(delta, delta, delta / 2.0);
            assert!((g - delta / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn matching_forces_half_lambda1() {
        // chi_1l / lambda_1 = 1/2 for random valid draws
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let omega_eg = 5.0 + 3.0 * next();
            let omega_fe = omega_eg - 0.1 - 0.4 * next();
            let d1 = 0.3 + 0.5 * next();
            let wc1 = omega_eg + d1;
            let big2 = 0.005 + 0.05 * next();
            let big3 = big2 + 0.005 + 0.05 * next();
            let omega_fg = omega_eg + omega_fe;
            let wc2 = omega_fg - wc1 - big2;
            let wc3 = omega_fg - wc1 - big3;
            if wc2 <= 0.0 || wc3 <= 0.0 || omega_fe - wc2 <= 0.0 || omega_fe - wc3 <= 0.0 {
                continue;
            }
            let p = PhysicalParams {
                omega_eg_ghz: omega_eg,
                omega_fe_ghz: omega_fe,
                omega_c_ghz: vec![wc1, wc2, wc3],
                g1_mhz: 20.0 + 40.0 * next(),
                ..test_point()
            };
            let det = derive_detunings(&p).unwrap();
            let gl = solve_gate_couplings(&p, &det).unwrap();
            let mut g = vec![p.g1_mhz];
            g.extend(gl);
            let rates = effective_rates(&g, &det).unwrap();
            for l in 2..=3 {
                let ratio = rates.chi_1l_mhz[l - 2] / rates.lambda1_mhz;
                assert!(
                    (ratio - 0.5).abs() < 1e-12,
                    "chi_1{l}/lambda_1 = {ratio}"
                );
            }
        }
    }

    #[test]
    fn unwanted_ladder_values() {
        let g = vec![35.0, 50.5, 72.1];
        let gt = unwanted_coupling_ladder(&g);
        assert!((gt[0] - 49.497).abs() < 0.05, "g~_1 = {}", gt[0]);
        assert!((gt[1] - 35.7).abs() < 0.05, "g~_2 = {}", gt[1]);
        assert!((gt[2] - 41.6).abs() < 0.05, "g~_3 = {}", gt[2]);
    }

    #[test]
    fn stark_shift_rate() {
        // lambda_1 = g_1^2 / |delta_1| = 35^2/500 MHz = 2.45 MHz
        let p = test_point();
        let det = derive_detunings(&p).unwrap();
        let g = {
            let mut g = vec![p.g1_mhz];
            g.extend(solve_gate_couplings(&p, &det).unwrap());
            g
        };
        let rates = effective_rates(&g, &det).unwrap();
        assert!((rates.lambda1_mhz - 2.45).abs() < 1e-12);
        // chi_12 = chi_13 = lambda_1 / 2 = 1.225 MHz by matching
        assert!((rates.chi_1l_mhz[0] - 1.225).abs() < 1e-9);
        assert!((rates.chi_1l_mhz[1] - 1.225).abs() < 1e-9);
    }

    #[test]
    fn lambda_scales_quadratically() {
        let p = test_point();
        let det = derive_detunings(&p).unwrap();
        let r1 = effective_rates(&[35.0, 50.0, 70.0], &det).unwrap();
        let r2 = effective_rates(&[70.0, 50.0, 70.0], &det).unwrap();
        assert!((r2.lambda1_mhz - 4.0 * r1.lambda1_mhz).abs() < 1e-12);
    }

    #[test]
    fn gate_time_value() {
        // lambda_1 = 2.45 MHz -> T = 0.40816 us
        let t = gate_time(2.45);
        assert!((t - 0.408163265306).abs() < 1e-9);
        // doubling lambda halves T
        assert!((gate_time(4.9) - t / 2.0).abs() < 1e-12);
    }

    #[test]
    fn chi_times_gate_time_is_pi() {
        let d = DerivedParams::from_params(&test_point()).unwrap();
        let t_ns = d.gate_time_ns();
        for l in 2..=3 {
            let chi_ang = crate::units::mhz_to_ang(d.chi(l));
            let rel = (chi_ang * t_ns - std::f64::consts::PI) / std::f64::consts::PI;
            assert!(rel.abs() < 1e-12, "chi_1{l} T / pi - 1 = {rel}");
        }
    }

    #[test]
    fn quality_factor_values() {
        let q = quality_factors(&test_point());
        assert!((q[0] - 1.3195e7).abs() / 1.3195e7 < 1e-3, "Q_1 = {}", q[0]);
        assert!((q[1] - 1.0726e7).abs() / 1.0726e7 < 1e-3, "Q_2 = {}", q[1]);
        assert!((q[2] - 1.0707e7).abs() / 1.0707e7 < 1e-3, "Q_3 = {}", q[2]);
        // doubling the lifetime doubles Q
        let mut p = test_point();
        p.kappa_inv_us = vec![600.0, 600.0, 600.0];
        let q2 = quality_factors(&p);
        assert!((q2[0] - 2.0 * q[0]).abs() < 1e-3);
    }

    #[test]
    fn regime_ratios() {
        let d = DerivedParams::from_params(&test_point()).unwrap();
        let rep = validate_regime(&d, DEFAULT_REGIME_THRESHOLD);
        let r1 = rep.ratio("|delta_1|/g_1").unwrap();
        assert!((r1 - 500.0 / 35.0).abs() < 1e-9);
        let r2 = rep.ratio("|delta_2|/g_2").unwrap();
        assert!((r2 - 10.1).abs() < 0.02, "|delta_2|/g_2 = {r2}");
    }

    #[test]
    fn regime_flags_strong_coupling() {
        let mut p = test_point();
        p.g1_mhz = 500.0; // g_1 = |delta_1|
        let d = DerivedParams::from_params(&p).unwrap();
        let rep = validate_regime(&d, DEFAULT_REGIME_THRESHOLD);
        assert!(rep.any_flagged());
        let r = rep
            .ratios
            .iter()
            .find(|r| r.label == "|delta_1|/g_1")
            .unwrap();
        assert!(r.flagged && (r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detuning_identity_random_draws() {
        let mut seed = 42u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let p = PhysicalParams {
                omega_eg_ghz: 5.0 + 3.0 * next(),
                omega_fe_ghz: 4.5 + 3.0 * next(),
                omega_c_ghz: vec![7.0 + next(), 5.0 + next(), 4.5 + next()],
                ..test_point()
            };
            if let Ok(d) = derive_detunings(&p) {
                for l in 2..=3 {
                    // the identity holds only when delta_l > 0 (as drawn here it may
                    // flip sign); compare signed forms instead
                    let lhs = d.delta_l_ghz[l - 2];
                    let rhs = p.omega_fe_ghz - p.omega_c_ghz[l - 1];
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }
}
