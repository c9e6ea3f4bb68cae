//! Elementary Fock and qutrit operators and their embedding into the
//! composite space.

use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use crate::sparse::{LocalOperator, SparseOperator};
use num_complex::Complex64;

/// Qutrit levels, ordered g = 0, e = 1, f = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    G,
    E,
    F,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::G => 0,
            Level::E => 1,
            Level::F => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Self, CoreError> {
        match s {
            "g" | "G" => Ok(Level::G),
            "e" | "E" => Ok(Level::E),
            "f" | "F" => Ok(Level::F),
            other => Err(CoreError::InvalidLevel(other.to_string())),
        }
    }
}

/// Photon annihilation operator on a single mode truncated to `n_cut` Fock
/// states: a|m> = sqrt(m) |m-1>.
pub fn annihilation(n_cut: usize) -> Result<LocalOperator, CoreError> {
    if n_cut < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "annihilation needs n_cut >= 2, got {n_cut}"
        )));
    }
    let entries = (1..n_cut)
        .map(|m| (m - 1, m, Complex64::new((m as f64).sqrt(), 0.0)))
        .collect();
    Ok(LocalOperator::new(n_cut, entries))
}

/// Photon number operator n = a^dagger a.
pub fn number(n_cut: usize) -> Result<LocalOperator, CoreError> {
    if n_cut < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "number needs n_cut >= 2, got {n_cut}"
        )));
    }
    let entries = (0..n_cut)
        .map(|m| (m, m, Complex64::new(m as f64, 0.0)))
        .collect();
    Ok(LocalOperator::new(n_cut, entries))
}

/// Qutrit transition operator |to><from| on the 3-level subsystem.
pub fn qutrit_transition(from: Level, to: Level) -> LocalOperator {
    LocalOperator::new(3, vec![(to.index(), from.index(), Complex64::ONE)])
}

/// Projector |level><level|.
pub fn qutrit_projector(level: Level) -> LocalOperator {
    qutrit_transition(level, level)
}

/// Lift a single-subsystem operator into the composite space:
/// identity (x) ... (x) op (x) ... (x) identity, with `site` = 0 for the
/// qutrit and `site` = l for cavity l.
pub fn embed(
    site: usize,
    local: &LocalOperator,
    layout: &HilbertLayout,
) -> Result<SparseOperator, CoreError> {
    if site >= layout.dims().len() {
        return Err(CoreError::CavityIndex {
            index: site,
            n_cavities: layout.n_cavities(),
        });
    }
    if local.dim() != layout.dim_of(site) {
        return Err(CoreError::DimensionMismatch {
            context: "embed: local operator vs subsystem dimension",
            expected: layout.dim_of(site),
            got: local.dim(),
        });
    }
    let stride = layout.stride(site);
    let d_site = layout.dim_of(site);
    let block = stride * d_site;
    let n_blocks = layout.total_dim() / block;
    let mut triplets = Vec::with_capacity(local.nnz() * n_blocks * stride);
    for outer in 0..n_blocks {
        let base = outer * block;
        for &(r, c, v) in local.entries() {
            let row0 = base + r * stride;
            let col0 = base + c * stride;
            for inner in 0..stride {
                triplets.push((row0 + inner, col0 + inner, v));
            }
        }
    }
    Ok(SparseOperator::from_triplets(layout.clone(), &triplets))
}

/// Product of two embedded local operators on distinct or equal sites.
pub fn embed_product(
    site_a: usize,
    a: &LocalOperator,
    site_b: usize,
    b: &LocalOperator,
    layout: &HilbertLayout,
) -> Result<SparseOperator, CoreError> {
    let ea = embed(site_a, a, layout)?;
    let eb = embed(site_b, b, layout)?;
    ea.matmul(&eb)
}
