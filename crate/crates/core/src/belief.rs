//! Belief, plausibility, commonality, implicability and full-causality
//! functions, and their inversions back to mass.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::frame::{FocalSet, Frame};
use crate::mass::{BeliefInterval, MassFunction, Verdict, NORMALIZATION_TOLERANCE};
use crate::mobius;

/// Recovered masses with magnitude below this are treated as round-off.
const ROUNDOFF: f64 = 1e-12;

/// Largest frame for which the full-causality system is assembled.
const MAX_FC_SYSTEM: usize = 12;

impl MassFunction {
    /// `Bel(F) = Σ_{∅ ≠ G ⊆ F} m(G)`.
    pub fn bel(&self, set: FocalSet) -> f64 {
        debug_assert!(self.frame().contains_subset(set));
        self.focal_elements()
            .filter(|(g, _)| !g.is_empty() && g.is_subset_of(set))
            .map(|(_, v)| v)
            .sum()
    }

    /// `Pl(F) = Σ_{G ∩ F ≠ ∅} m(G)`.
    pub fn pl(&self, set: FocalSet) -> f64 {
        debug_assert!(self.frame().contains_subset(set));
        self.focal_elements()
            .filter(|(g, _)| g.intersects(set))
            .map(|(_, v)| v)
            .sum()
    }

    /// Commonality `Q(F) = Σ_{F ⊆ G} m(G)`.
    pub fn q(&self, set: FocalSet) -> f64 {
        debug_assert!(self.frame().contains_subset(set));
        self.focal_elements()
            .filter(|(g, _)| set.is_subset_of(*g))
            .map(|(_, v)| v)
            .sum()
    }

    /// Implicability `b(F) = m(∅) + Bel(F)`.
    pub fn b(&self, set: FocalSet) -> f64 {
        self.empty_mass() + self.bel(set)
    }

    /// Full causality: total mass on subsets comparable with `F` under
    /// inclusion, i.e. `b(F) + Q(F) − m(F)`.
    pub fn fc(&self, set: FocalSet) -> f64 {
        debug_assert!(self.frame().contains_subset(set));
        self.focal_elements()
            .filter(|(g, _)| g.is_comparable(set))
            .map(|(_, v)| v)
            .sum()
    }

    pub fn belief_interval(&self, set: FocalSet) -> BeliefInterval {
        BeliefInterval {
            lower: self.bel(set),
            upper: self.pl(set),
        }
    }

    /// Dense `Q` over the power set.
    pub fn q_vector(&self) -> Vec<f64> {
        let mut v = self.to_dense();
        mobius::superset_zeta(&mut v);
        v
    }

    /// Dense `b` over the power set.
    pub fn b_vector(&self) -> Vec<f64> {
        let mut v = self.to_dense();
        mobius::subset_zeta(&mut v);
        v
    }

    /// Dense full-causality vector over the power set.
    pub fn fc_vector(&self) -> Vec<f64> {
        full_causality_dense(&self.to_dense())
    }
}

/// `fc = b + q − m` on a dense mass vector.
pub(crate) fn full_causality_dense(masses: &[f64]) -> Vec<f64> {
    let mut b = masses.to_vec();
    mobius::subset_zeta(&mut b);
    let mut q = masses.to_vec();
    mobius::superset_zeta(&mut q);
    b.iter().zip(&q).zip(masses).map(|((b, q), m)| b + q - m).collect()
}

/// Inverts a dense commonality vector.
pub fn mass_from_q(frame: &Frame, q: &[f64]) -> Result<MassFunction> {
    check_len(frame, q)?;
    let mut m = q.to_vec();
    mobius::superset_mobius(&mut m);
    finish_inversion(frame, m)
}

/// Inverts a dense implicability vector.
pub fn mass_from_b(frame: &Frame, b: &[f64]) -> Result<MassFunction> {
    check_len(frame, b)?;
    let mut m = b.to_vec();
    mobius::subset_mobius(&mut m);
    finish_inversion(frame, m)
}

/// Inverts a dense full-causality vector by solving `FC = M·m` over the
/// non-empty subsets, where `M(F, G) = 1` iff `F ⊆ G` or `G ⊆ F`.
///
/// Returns [`Error::UnsupportedDimension`] when `M` is singular for the
/// frame size; the entry at index 0 (`FC(∅)`) is not used.
pub fn mass_from_fc(frame: &Frame, fc: &[f64]) -> Result<MassFunction> {
    check_len(frame, fc)?;
    let n = frame.size();
    if n > MAX_FC_SYSTEM {
        return Err(Error::UnsupportedDimension(n));
    }
    let dim = frame.power_set_size() - 1;
    let matrix = DMatrix::from_fn(dim, dim, |r, c| {
        let row = FocalSet::from_bits(r as u32 + 1);
        let col = FocalSet::from_bits(c as u32 + 1);
        if row.is_comparable(col) {
            1.0
        } else {
            0.0
        }
    });
    let lu = matrix.lu();
    let u = lu.u();
    let largest = u.diagonal().iter().fold(0.0f64, |a, x: &f64| a.max(x.abs()));
    if u.diagonal().iter().any(|p: &f64| p.abs() <= 1e-9 * largest.max(1.0)) {
        return Err(Error::UnsupportedDimension(n));
    }
    let rhs = DVector::from_iterator(dim, fc[1..].iter().copied());
    let solution = lu.solve(&rhs).ok_or(Error::UnsupportedDimension(n))?;
    let mut dense = vec![0.0; dim + 1];
    dense[1..].copy_from_slice(solution.as_slice());
    finish_inversion(frame, dense)
}

fn check_len(frame: &Frame, v: &[f64]) -> Result<()> {
    if v.len() != frame.power_set_size() {
        return Err(Error::InvalidParameter(format!(
            "expected a vector of {} entries for a frame of {} elements, got {}",
            frame.power_set_size(),
            frame.size(),
            v.len()
        )));
    }
    Ok(())
}

fn finish_inversion(frame: &Frame, mut dense: Vec<f64>) -> Result<MassFunction> {
    for (bits, v) in dense.iter_mut().enumerate() {
        if *v < -NORMALIZATION_TOLERANCE {
            return Err(Error::Inversion {
                bits: bits as u32,
                value: *v,
            });
        }
        if v.abs() < ROUNDOFF {
            *v = 0.0;
        }
    }
    let m = MassFunction::from_dense(frame.clone(), &dense);
    match m.validate() {
        Verdict::Invalid(v) => Err(Error::InvalidMass(v.to_string())),
        _ => Ok(m),
    }
}
