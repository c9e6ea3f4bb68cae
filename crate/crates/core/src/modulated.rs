//! Time-dependent Hamiltonians as sums of harmonically modulated sparse
//! terms:
//!
//! ```text
//! H(t) = sum_j [ exp(i w_j t) * op_j  (+ exp(-i w_j t) * op_j^dagger  if add_hc) ]
//! ```
//!
//! Terms store the exact exponent sign printed in the model, with the
//! Hermitian conjugate generated mechanically. Static terms have w = 0 and
//! either a Hermitian `op` with `add_hc = false`, or contribute
//! `op + op^dagger`.
//!
//! For evolution the term list is frozen into a single compressed-row matrix
//! over the union sparsity pattern; evaluating H(t) then only rewrites the
//! value arrays.

use crate::error::CoreError;
use crate::hilbert::HilbertLayout;
use crate::sparse::{Csr, SparseOperator};
use num_complex::Complex64;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct ModTerm {
    pub op: SparseOperator,
    /// Angular modulation frequency in rad/ns; the term enters as exp(i*omega*t) * op.
    pub omega: f64,
    pub add_hc: bool,
}

#[derive(Debug, Clone)]
pub struct ModulatedHamiltonian {
    layout: HilbertLayout,
    terms: Vec<ModTerm>,
}

impl ModulatedHamiltonian {
    pub fn new(layout: HilbertLayout) -> Self {
        ModulatedHamiltonian {
            layout,
            terms: Vec::new(),
        }
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn push_term(
        &mut self,
        op: SparseOperator,
        omega: f64,
        add_hc: bool,
    ) -> Result<(), CoreError> {
        if op.layout() != &self.layout {
            return Err(CoreError::LayoutMismatch(
                "modulated term layout differs from Hamiltonian layout",
            ));
        }
        self.terms.push(ModTerm { op, omega, add_hc });
        Ok(())
    }

    pub fn terms(&self) -> &[ModTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Operator summands after expanding Hermitian conjugates.
    pub fn num_summands(&self) -> usize {
        self.terms
            .iter()
            .map(|t| if t.add_hc { 2 } else { 1 })
            .sum()
    }

    /// Concatenate the term lists of several Hamiltonians on one layout.
    pub fn concat(parts: &[&ModulatedHamiltonian]) -> Result<Self, CoreError> {
        let layout = parts
            .first()
            .ok_or(CoreError::LayoutMismatch("concat of no Hamiltonians"))?
            .layout
            .clone();
        let mut out = ModulatedHamiltonian::new(layout);
        for p in parts {
            for t in &p.terms {
                out.push_term(t.op.clone(), t.omega, t.add_hc)?;
            }
        }
        Ok(out)
    }

    /// Evaluate H(t) as a sparse operator (reference path; allocates).
    pub fn evaluate(&self, t: f64) -> SparseOperator {
        let mut triplets = Vec::new();
        for term in &self.terms {
            let (s, c) = (term.omega * t).sin_cos();
            let phase = Complex64::new(c, s);
            for (r, col, v) in term.op.csr().triplets() {
                triplets.push((r, col, phase * v));
                if term.add_hc {
                    triplets.push((col, r, (phase * v).conj()));
                }
            }
        }
        SparseOperator::from_triplets(self.layout.clone(), &triplets)
    }

    /// Evaluate into a dense matrix (used by the brute-force propagator,
    /// which deliberately avoids the frozen fast path).
    pub fn to_dense(&self, t: f64) -> crate::dense::DenseMatrix {
        let n = self.layout.total_dim();
        let mut d = crate::dense::DenseMatrix::zeros(n);
        for term in &self.terms {
            let (s, c) = (term.omega * t).sin_cos();
            for (r, col, v) in term.op.csr().triplets() {
                let w = Complex64::new(c, s) * v;
                d.add(r, col, w.re, w.im);
                if term.add_hc {
                    d.add(col, r, w.re, -w.im);
                }
            }
        }
        d
    }

    /// Hermiticity defect max|H(t) - H(t)^dagger| at time t.
    pub fn hermiticity_defect_at(&self, t: f64) -> f64 {
        let h = self.evaluate(t);
        h.max_abs_diff(&h.adjoint())
    }

    /// Freeze into the union-pattern fast evaluator.
    pub fn freeze(&self) -> FrozenHamiltonian {
        FrozenHamiltonian::new(self)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

struct PhaseGroup {
    omega: f64,
    slots: Vec<u32>,
    vre: Vec<f64>,
    vim: Vec<f64>,
}

/// Frozen evaluator over the union sparsity pattern of all term summands.
pub struct FrozenHamiltonian {
    csr: Csr,
    groups: Vec<PhaseGroup>,
    any_time_dependence: bool,
    evaluated_once: bool,
    last_t: f64,
}

impl FrozenHamiltonian {
    fn new(h: &ModulatedHamiltonian) -> Self {
        let n = h.layout.total_dim();
        // union pattern
        let mut positions: Vec<(usize, usize)> = Vec::new();
        for term in &h.terms {
            for (r, c, _) in term.op.csr().triplets() {
                positions.push((r, c));
                if term.add_hc {
                    positions.push((c, r));
                }
            }
        }
        positions.sort_unstable();
        positions.dedup();
        let pattern_triplets: Vec<(usize, usize, Complex64)> = positions
            .iter()
            .map(|&(r, c)| (r, c, Complex64::ONE))
            .collect();
        let mut csr = Csr::from_triplets(n, n, &pattern_triplets);
        let slot_of: HashMap<(usize, usize), u32> = {
            let mut m = HashMap::with_capacity(positions.len());
            let mut k = 0u32;
            for r in 0..n {
                for idx in csr.row_range(r) {
                    m.insert((r, csr.col_at(idx)), k);
                    debug_assert_eq!(idx as u32, k);
                    k += 1;
                }
            }
            m
        };
        let (vr, vi) = csr.values_mut();
        vr.fill(0.0);
        vi.fill(0.0);

        let mut groups = Vec::new();
        let mut any_time_dependence = false;
        for term in &h.terms {
            let mut slots = Vec::new();
            let mut vre = Vec::new();
            let mut vim = Vec::new();
            let mut hc_slots = Vec::new();
            let mut hc_vre = Vec::new();
            let mut hc_vim = Vec::new();
            for (r, c, v) in term.op.csr().triplets() {
                slots.push(slot_of[&(r, c)]);
                vre.push(v.re);
                vim.push(v.im);
                if term.add_hc {
                    hc_slots.push(slot_of[&(c, r)]);
                    hc_vre.push(v.re);
                    hc_vim.push(-v.im);
                }
            }
            if term.omega != 0.0 {
                any_time_dependence = true;
            }
            groups.push(PhaseGroup {
                omega: term.omega,
                slots,
                vre,
                vim,
            });
            if term.add_hc {
                groups.push(PhaseGroup {
                    omega: -term.omega,
                    slots: hc_slots,
                    vre: hc_vre,
                    vim: hc_vim,
                });
            }
        }
        FrozenHamiltonian {
            csr,
            groups,
            any_time_dependence,
            evaluated_once: false,
            last_t: f64::NAN,
        }
    }

    /// Rewrite the value arrays for time `t` and return the matrix.
    pub fn eval_at(&mut self, t: f64) -> &Csr {
        if self.evaluated_once && (!self.any_time_dependence || t == self.last_t) {
            return &self.csr;
        }
        self.last_t = t;
        let groups = &self.groups;
        let (vr, vi) = self.csr.values_mut();
        vr.fill(0.0);
        vi.fill(0.0);
        for g in groups {
            let (s, c) = (g.omega * t).sin_cos();
            for (&slot, (&ar, &ai)) in g.slots.iter().zip(g.vre.iter().zip(g.vim.iter())) {
                let k = slot as usize;
                vr[k] += c * ar - s * ai;
                vi[k] += c * ai + s * ar;
            }
        }
        self.evaluated_once = true;
        &self.csr
    }

    pub fn pattern_nnz(&self) -> usize {
        self.csr.nnz()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{annihilation, embed, qutrit_transition, Level};

    fn small_h() -> ModulatedHamiltonian {
        let layout = HilbertLayout::new(1, 3).unwrap();
        let a1 = embed(1, &annihilation(3).unwrap(), &layout).unwrap();
        let sp = embed(0, &qutrit_transition(Level::G, Level::E), &layout).unwrap();
        let op = a1.matmul(&sp).unwrap().scale(Complex64::new(0.22, 0.0));
        let mut h = ModulatedHamiltonian::new(layout);
        h.push_term(op, -3.14, true).unwrap();
        h
    }

    #[test]
    fn hermitian_at_all_times() {
        let h = small_h();
        for &t in &[0.0, 0.137, 5.0, -2.0] {
            assert!(h.hermiticity_defect_at(t) < 1e-12);
        }
    }

    #[test]
    fn frozen_matches_reference() {
        let h = small_h();
        let mut f = h.freeze();
        for &t in &[0.0, 0.01, 0.77, 13.5] {
            let fast = f.eval_at(t).to_dense();
            let slow = h.evaluate(t).to_dense();
            assert!(fast.max_abs_diff(&slow) < 1e-14);
        }
    }

    #[test]
    fn static_term_evaluates_once() {
        let layout = HilbertLayout::new(1, 2).unwrap();
        let n1 = embed(1, &crate::operators::number(2).unwrap(), &layout).unwrap();
        let mut h = ModulatedHamiltonian::new(layout);
        h.push_term(n1.scale(Complex64::new(0.5, 0.0)), 0.0, false)
            .unwrap();
        let mut f = h.freeze();
        let d0 = f.eval_at(0.0).to_dense();
        let d1 = f.eval_at(123.0).to_dense();
        assert_eq!(d0.max_abs_diff(&d1), 0.0);
    }

    #[test]
    fn summand_count() {
        let h = small_h();
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.num_summands(), 2);
    }

    use num_complex::Complex64;
}
