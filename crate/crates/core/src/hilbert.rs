//! Composite Hilbert-space layout: one transmon qutrit followed by `n`
//! truncated cavity modes.
//!
//! The subsystem ordering is fixed once and for all: position 0 is the
//! qutrit (dimension 3, levels g = 0, e = 1, f = 2), positions 1..=n are
//! cavities 1..=n in physical numbering, each truncated to `n_cut` Fock
//! states. A basis index `i` enumerates |q> (x) |m_1> (x) ... (x) |m_n> in
//! row-major order over the dimension list, so the qutrit is the
//! slowest-varying factor.

use crate::error::CoreError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertLayout {
    dims: Vec<usize>,
    /// strides[k] = product of dims[k+1..]; index = sum_k occ[k] * strides[k].
    strides: Vec<usize>,
    total: usize,
}

impl HilbertLayout {
    /// Layout with `n_cavities` modes, all truncated to `n_cut`.
    pub fn new(n_cavities: usize, n_cut: usize) -> Result<Self, CoreError> {
        Self::with_cavity_dims(&vec![n_cut; n_cavities])
    }

    /// Layout with per-cavity truncations. The qutrit factor is implicit.
    pub fn with_cavity_dims(cavity_dims: &[usize]) -> Result<Self, CoreError> {
        if cavity_dims.is_empty() {
            return Err(CoreError::InvalidParameter(
                "layout needs at least one cavity".into(),
            ));
        }
        for &d in cavity_dims {
            if d < 2 {
                return Err(CoreError::InvalidParameter(format!(
                    "cavity dimension {d} < 2"
                )));
            }
        }
        let mut dims = Vec::with_capacity(cavity_dims.len() + 1);
        dims.push(3);
        dims.extend_from_slice(cavity_dims);
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len() - 1).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let total = strides[0] * dims[0];
        Ok(HilbertLayout {
            dims,
            strides,
            total,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Number of cavity modes (excludes the qutrit).
    pub fn n_cavities(&self) -> usize {
        self.dims.len() - 1
    }

    /// Dimension of subsystem `site` (0 = qutrit).
    pub fn dim_of(&self, site: usize) -> usize {
        self.dims[site]
    }

    /// Basis index of |occ[0]> (x) |occ[1]> (x) ...
    pub fn index_of(&self, occupations: &[usize]) -> usize {
        assert_eq!(occupations.len(), self.dims.len(), "occupation arity");
        occupations
            .iter()
            .zip(&self.strides)
            .map(|(&o, &s)| o * s)
            .sum()
    }

    /// Occupation of subsystem `site` in basis state `index`.
    #[inline]
    pub fn occupation(&self, index: usize, site: usize) -> usize {
        (index / self.strides[site]) % self.dims[site]
    }

    /// Qutrit level (0 = g, 1 = e, 2 = f) of basis state `index`.
    #[inline]
    pub fn qutrit_level(&self, index: usize) -> usize {
        index / self.strides[0]
    }

    /// Photon number of cavity `l` (1-based physical numbering).
    #[inline]
    pub fn photons(&self, index: usize, cavity: usize) -> usize {
        self.occupation(index, cavity)
    }

    pub fn stride(&self, site: usize) -> usize {
        self.strides[site]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qutrit_is_slowest() {
        let l = HilbertLayout::new(2, 4).unwrap();
        assert_eq!(l.dims(), &[3, 4, 4]);
        assert_eq!(l.total_dim(), 48);
        // |e> (x) |2> (x) |3>
        let i = l.index_of(&[1, 2, 3]);
        assert_eq!(i, 1 * 16 + 2 * 4 + 3);
        assert_eq!(l.qutrit_level(i), 1);
        assert_eq!(l.photons(i, 1), 2);
        assert_eq!(l.photons(i, 2), 3);
    }

    #[test]
    fn total_dim_is_product() {
        let l = HilbertLayout::with_cavity_dims(&[5, 2, 7]).unwrap();
        assert_eq!(l.total_dim(), 3 * 5 * 2 * 7);
    }

    #[test]
    fn rejects_small_cavities() {
        assert!(HilbertLayout::with_cavity_dims(&[1]).is_err());
        assert!(HilbertLayout::with_cavity_dims(&[]).is_err());
    }

    #[test]
    fn round_trip_all_indices() {
        let l = HilbertLayout::with_cavity_dims(&[4, 3]).unwrap();
        for i in 0..l.total_dim() {
            let occ = vec![l.occupation(i, 0), l.occupation(i, 1), l.occupation(i, 2)];
            assert_eq!(l.index_of(&occ), i);
        }
    }
}
