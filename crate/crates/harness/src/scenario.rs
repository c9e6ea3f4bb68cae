//! Scenario description and its JSON config schema.
//!
//! A config document looks like
//!
//! ```json
//! {
//!   "model": "full",
//!   "case": "a",
//!   "kappa_inv_us": [100, 300, 900],
//!   "n_cut": 8,
//!   "integrator": { "dt_ns": 0.01, "method": "rk4" },
//!   "toggles": { "decoherence": true, "crosstalk": true },
//!   "params": { "g1_mhz": 35.0, "alpha": 0.5 }
//! }
//! ```
//!
//! Every key is optional; omitted parameters fall back to the reference
//! operating point. `kappa_inv_us` may be a scalar or a list (one scenario
//! per value, applied to all cavities equally). Angles come either from a
//! named `case` (a-d) or an explicit `angles_deg` triple.

use crate::error::HarnessError;
use crate::operating_point::{named_case, reference_operating_point};
use catphase_core::params::PhysicalParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Wanted + unwanted couplings + crosstalk, explicitly modulated.
    Full,
    /// Ground-sector dispersive Hamiltonian plus crosstalk.
    Effective,
    /// Ground-sector dispersive Hamiltonian only.
    EffectiveClean,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Full => "full",
            Model::Effective => "effective",
            Model::EffectiveClean => "effective_clean",
        }
    }

    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "full" => Ok(Model::Full),
            "effective" => Ok(Model::Effective),
            "effective_clean" => Ok(Model::EffectiveClean),
            other => Err(HarnessError::Config(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    Rk4,
    /// Brute-force piecewise-exponential propagation (small systems only).
    Expm,
}

/// Which state the fidelity is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// The encoded phase-flipped logical ideal output.
    Logical,
    /// Closed-system, crosstalk-free evolution under the scenario's own
    /// Hamiltonian (coincides with `Logical` for the effective models).
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Toggles {
    #[serde(default = "default_true")]
    pub decoherence: bool,
    #[serde(default = "default_true")]
    pub crosstalk: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Toggles {
            decoherence: true,
            crosstalk: true,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    #[serde(default = "default_dt")]
    pub dt_ns: f64,
    #[serde(default = "default_method")]
    pub method: IntegrationMethod,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        IntegratorSettings {
            dt_ns: default_dt(),
            method: default_method(),
        }
    }
}

fn default_dt() -> f64 {
    0.01
}

fn default_method() -> IntegrationMethod {
    IntegrationMethod::Rk4
}

/// Partial parameter override; anything omitted comes from the reference
/// operating point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsPatch {
    pub omega_eg_ghz: Option<f64>,
    pub omega_fe_ghz: Option<f64>,
    pub omega_c_ghz: Option<Vec<f64>>,
    pub g1_mhz: Option<f64>,
    pub g_l_mhz: Option<Vec<f64>>,
    pub g_tilde_mhz: Option<Vec<f64>>,
    pub g_crosstalk_fraction: Option<f64>,
    pub kappa_inv_us: Option<Vec<f64>>,
    pub gamma_eg_inv_us: Option<f64>,
    pub gamma_fe_inv_us: Option<f64>,
    pub gamma_fg_inv_us: Option<f64>,
    pub gamma_phi_e_inv_us: Option<f64>,
    pub gamma_phi_f_inv_us: Option<f64>,
    pub alpha: Option<f64>,
}

impl ParamsPatch {
    pub fn apply(&self, base: &PhysicalParams) -> PhysicalParams {
        let mut p = base.clone();
        if let Some(v) = self.omega_eg_ghz {
            p.omega_eg_ghz = v;
        }
        if let Some(v) = self.omega_fe_ghz {
            p.omega_fe_ghz = v;
        }
        if let Some(v) = &self.omega_c_ghz {
            p.omega_c_ghz = v.clone();
            // keep per-cavity lists in step with the cavity count
            if p.kappa_inv_us.len() != v.len() {
                let fill = p.kappa_inv_us.first().copied().unwrap_or(300.0);
                p.kappa_inv_us = vec![fill; v.len()];
            }
        }
        if let Some(v) = self.g1_mhz {
            p.g1_mhz = v;
        }
        if self.g_l_mhz.is_some() {
            p.g_l_mhz = self.g_l_mhz.clone();
        }
        if self.g_tilde_mhz.is_some() {
            p.g_tilde_mhz = self.g_tilde_mhz.clone();
        }
        if let Some(v) = self.g_crosstalk_fraction {
            p.g_crosstalk_fraction = v;
        }
        if let Some(v) = &self.kappa_inv_us {
            p.kappa_inv_us = v.clone();
        }
        if let Some(v) = self.gamma_eg_inv_us {
            p.gamma_eg_inv_us = v;
        }
        if let Some(v) = self.gamma_fe_inv_us {
            p.gamma_fe_inv_us = v;
        }
        if let Some(v) = self.gamma_fg_inv_us {
            p.gamma_fg_inv_us = v;
        }
        if let Some(v) = self.gamma_phi_e_inv_us {
            p.gamma_phi_e_inv_us = v;
        }
        if let Some(v) = self.gamma_phi_f_inv_us {
            p.gamma_phi_f_inv_us = v;
        }
        if let Some(v) = self.alpha {
            p.alpha = v;
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

impl ScalarOrList {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ScalarOrList::Scalar(v) => vec![*v],
            ScalarOrList::List(v) => v.clone(),
        }
    }
}

/// Top-level JSON config document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub params: ParamsPatch,
    pub model: Option<Model>,
    /// Named angle case a-d.
    pub case: Option<String>,
    /// Explicit (gamma, theta, phi) in degrees; exclusive with `case`.
    pub angles_deg: Option<[f64; 3]>,
    /// Cavity photon lifetime(s), us; applied to all cavities.
    pub kappa_inv_us: Option<ScalarOrList>,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    pub n_cut: Option<usize>,
    #[serde(default)]
    pub toggles: Toggles,
    #[serde(default)]
    pub reference: Option<Reference>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Expand into one scenario per kappa value.
    pub fn scenarios(&self) -> Result<Vec<Scenario>, HarnessError> {
        let base = self.params.apply(&reference_operating_point());
        base.validate()?;
        let (label, angles) = self.resolve_angles()?;
        let model = self.model.unwrap_or(Model::Full);
        let n_cut = self.n_cut.unwrap_or(8);
        if n_cut < 2 {
            return Err(HarnessError::Config(format!("n_cut must be >= 2, got {n_cut}")));
        }
        if !(self.integrator.dt_ns > 0.0) {
            return Err(HarnessError::Config(format!(
                "dt_ns must be positive, got {}",
                self.integrator.dt_ns
            )));
        }
        let kappas = match &self.kappa_inv_us {
            Some(k) => {
                let v = k.values();
                if v.is_empty() {
                    return Err(HarnessError::Config("kappa_inv_us list is empty".into()));
                }
                if v.iter().any(|&x| !(x > 0.0)) {
                    return Err(HarnessError::Config(
                        "kappa_inv_us values must be positive".into(),
                    ));
                }
                v
            }
            None => vec![base.kappa_inv_us[0]],
        };
        Ok(kappas
            .into_iter()
            .map(|kappa| {
                let mut params = base.clone();
                params.kappa_inv_us = vec![kappa; params.n_cavities()];
                Scenario {
                    params,
                    model,
                    label: label.clone(),
                    angles_rad: angles,
                    kappa_inv_us: kappa,
                    n_cut,
                    integrator: self.integrator,
                    toggles: self.toggles,
                    reference: self.reference.unwrap_or(Reference::Logical),
                }
            })
            .collect())
    }

    fn resolve_angles(&self) -> Result<(String, (f64, f64, f64)), HarnessError> {
        match (&self.case, &self.angles_deg) {
            (Some(_), Some(_)) => Err(HarnessError::Config(
                "give either `case` or `angles_deg`, not both".into(),
            )),
            (Some(c), None) => named_case(c)
                .map(|a| (c.clone(), a))
                .ok_or_else(|| HarnessError::Config(format!("unknown case `{c}` (expected a-d)"))),
            (None, Some(deg)) => {
                if deg.iter().any(|d| !d.is_finite()) {
                    return Err(HarnessError::Config("angles_deg must be finite".into()));
                }
                let rad = |d: f64| d.to_radians();
                Ok((
                    "custom".to_string(),
                    (rad(deg[0]), rad(deg[1]), rad(deg[2])),
                ))
            }
            (None, None) => {
                let a = named_case("a").expect("case a exists");
                Ok(("a".to_string(), a))
            }
        }
    }
}

/// Fully resolved single run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: PhysicalParams,
    pub model: Model,
    pub label: String,
    pub angles_rad: (f64, f64, f64),
    pub kappa_inv_us: f64,
    pub n_cut: usize,
    pub integrator: IntegratorSettings,
    pub toggles: Toggles,
    pub reference: Reference,
}

impl Scenario {
    pub fn id(&self) -> String {
        format!(
            "{}-{}-k{}-n{}-dt{}{}{}",
            self.label,
            self.model.as_str(),
            self.kappa_inv_us,
            self.n_cut,
            self.integrator.dt_ns,
            if self.toggles.decoherence { "" } else { "-nodeco" },
            if self.toggles.crosstalk { "" } else { "-noxt" },
        )
    }
}
