//! Mass functions (basic probability assignments).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::frame::{FocalSet, Frame};
use crate::pmf::ProbabilityMassFunction;

/// Tolerance on `Σ m = 1` and on the `[0, 1]` range of stored masses.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Why a mass assignment is not a valid BPA.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { subset: FocalSet },
    Negative { subset: FocalSet, value: f64 },
    AboveOne { subset: FocalSet, value: f64 },
    NotNormalized { sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { subset } => write!(f, "non-finite mass on {:#b}", subset.bits()),
            Violation::Negative { subset, value } => {
                write!(f, "negative mass {value} on {:#b}", subset.bits())
            }
            Violation::AboveOne { subset, value } => {
                write!(f, "mass {value} above 1 on {:#b}", subset.bits())
            }
            Violation::NotNormalized { sum } => write!(f, "masses sum to {sum}, not 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Normal,
    /// Valid, but some mass rests on the empty set.
    Subnormal {
        empty_mass: f64,
    },
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        !matches!(self, Verdict::Invalid(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    Vacuous,
    Bayesian,
    Consonant,
    General,
}

/// `[Bel(F), Pl(F)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefInterval {
    pub lower: f64,
    pub upper: f64,
}

/// A sparse map from focal sets to masses over one frame.
///
/// Only non-zero masses are stored; iteration is in ascending bitmask order.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    masses: BTreeMap<FocalSet, f64>,
}

impl MassFunction {
    /// Builds a mass function and rejects it unless it is a valid (normal or
    /// subnormal) BPA.
    pub fn new(frame: Frame, entries: impl IntoIterator<Item = (FocalSet, f64)>) -> Result<Self> {
        let m = Self::from_raw(frame, entries)?;
        match m.validate() {
            Verdict::Invalid(v) => Err(Error::InvalidMass(v.to_string())),
            _ => Ok(m),
        }
    }

    /// Stores the entries without checking normalization or range.
    ///
    /// Duplicated subsets are summed and exact zeros dropped. Subsets must lie
    /// inside the frame. Use [`MassFunction::validate`] to inspect the result.
    pub fn from_raw(frame: Frame, entries: impl IntoIterator<Item = (FocalSet, f64)>) -> Result<Self> {
        let mut masses = BTreeMap::new();
        for (set, value) in entries {
            frame.check_subset(set)?;
            *masses.entry(set).or_insert(0.0) += value;
        }
        masses.retain(|_, v| *v != 0.0);
        Ok(MassFunction { frame, masses })
    }

    /// Builds from `(labels, mass)` pairs in the `A+B` notation.
    pub fn from_labels(frame: Frame, entries: &[(&str, f64)]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|(labels, v)| Ok((frame.parse_subset(labels)?, *v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, parsed)
    }

    /// `m(Θ) = 1`: total ignorance.
    pub fn vacuous(frame: Frame) -> Self {
        let full = frame.full();
        MassFunction {
            frame,
            masses: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// Lifts a PMF to a Bayesian mass function (singleton focal sets only).
    pub fn bayesian(pmf: &ProbabilityMassFunction) -> Self {
        let masses = pmf
            .probs()
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != 0.0)
            .map(|(i, p)| (FocalSet::singleton(i), *p))
            .collect();
        MassFunction {
            frame: pmf.frame().clone(),
            masses,
        }
    }

    /// Reads a dense vector indexed by subset bitmask.
    pub(crate) fn from_dense(frame: Frame, dense: &[f64]) -> Self {
        debug_assert_eq!(dense.len(), frame.power_set_size());
        let masses = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(bits, v)| (FocalSet::from_bits(bits as u32), *v))
            .collect();
        MassFunction { frame, masses }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self, set: FocalSet) -> f64 {
        self.masses.get(&set).copied().unwrap_or(0.0)
    }

    pub fn empty_mass(&self) -> f64 {
        self.mass(FocalSet::EMPTY)
    }

    /// Focal sets and their masses in ascending bitmask order.
    pub fn focal_elements(&self) -> impl Iterator<Item = (FocalSet, f64)> + '_ {
        self.masses.iter().map(|(s, v)| (*s, *v))
    }

    pub fn focal_count(&self) -> usize {
        self.masses.len()
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Dense vector of length `2^n` indexed by subset bitmask.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.frame.power_set_size()];
        for (set, v) in &self.masses {
            dense[set.bits() as usize] = *v;
        }
        dense
    }

    pub fn validate(&self) -> Verdict {
        let mut sum = 0.0;
        for (set, &v) in &self.masses {
            if !v.is_finite() {
                return Verdict::Invalid(Violation::NonFinite { subset: *set });
            }
            if v < -NORMALIZATION_TOLERANCE {
                return Verdict::Invalid(Violation::Negative { subset: *set, value: v });
            }
            if v > 1.0 + NORMALIZATION_TOLERANCE {
                return Verdict::Invalid(Violation::AboveOne { subset: *set, value: v });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Verdict::Invalid(Violation::NotNormalized { sum });
        }
        let empty = self.empty_mass();
        if empty != 0.0 {
            Verdict::Subnormal { empty_mass: empty }
        } else {
            Verdict::Normal
        }
    }

    /// Fails unless the mass function is valid and normal.
    pub fn require_normal(&self) -> Result<()> {
        match self.validate() {
            Verdict::Normal => Ok(()),
            Verdict::Subnormal { empty_mass } => Err(Error::Subnormal(empty_mass)),
            Verdict::Invalid(v) => Err(Error::InvalidMass(v.to_string())),
        }
    }

    /// Fails unless the mass function is valid (normal or subnormal).
    pub fn require_valid(&self) -> Result<()> {
        match self.validate() {
            Verdict::Invalid(v) => Err(Error::InvalidMass(v.to_string())),
            _ => Ok(()),
        }
    }

    pub fn classify_special(&self) -> Result<SpecialKind> {
        self.require_normal()?;
        let full = self.frame.full();
        let focal: Vec<FocalSet> = self.masses.keys().copied().collect();
        if focal == [full] {
            return Ok(SpecialKind::Vacuous);
        }
        if focal.iter().all(|s| s.is_singleton()) {
            return Ok(SpecialKind::Bayesian);
        }
        let mut chain = focal;
        chain.sort_by_key(|s| s.len());
        if chain.windows(2).all(|w| w[0].is_subset_of(w[1])) {
            Ok(SpecialKind::Consonant)
        } else {
            Ok(SpecialKind::General)
        }
    }

    pub fn is_bayesian(&self) -> bool {
        self.masses.keys().all(|s| s.is_singleton())
    }

    /// Singleton masses as a per-element vector.
    pub fn singleton_masses(&self) -> Vec<f64> {
        (0..self.frame.size())
            .map(|i| self.mass(FocalSet::singleton(i)))
            .collect()
    }

    pub(crate) fn check_same_frame(&self, other: &MassFunction) -> Result<()> {
        self.frame.check_same(&other.frame)
    }
}

impl fmt::Display for MassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (set, v)) in self.masses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", self.frame.format_subset(*set), v)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Frame {
        Frame::letters(3).unwrap()
    }

    fn raw(entries: &[(&str, f64)]) -> MassFunction {
        let frame = abc();
        let parsed: Vec<_> = entries
            .iter()
            .map(|(l, v)| (frame.parse_subset(l).unwrap(), *v))
            .collect();
        MassFunction::from_raw(frame, parsed).unwrap()
    }

    #[test]
    fn validate_verdicts() {
        assert_eq!(MassFunction::vacuous(abc()).validate(), Verdict::Normal);
        assert!(matches!(
            raw(&[("A", 0.6), ("B", 0.5)]).validate(),
            Verdict::Invalid(Violation::NotNormalized { .. })
        ));
        assert_eq!(
            raw(&[("_", 0.1), ("A", 0.9)]).validate(),
            Verdict::Subnormal { empty_mass: 0.1 }
        );
        assert!(matches!(
            raw(&[("A", -0.1), ("B", 1.1)]).validate(),
            Verdict::Invalid(Violation::Negative { .. })
        ));
        assert!(matches!(
            raw(&[("A", f64::NAN)]).validate(),
            Verdict::Invalid(Violation::NonFinite { .. })
        ));
    }

    #[test]
    fn new_rejects_invalid() {
        assert!(matches!(
            MassFunction::from_labels(abc(), &[("A", 0.6), ("B", 0.5)]),
            Err(Error::InvalidMass(_))
        ));
        let out_of_frame = MassFunction::new(abc(), [(FocalSet::from_bits(0b1000), 1.0)]);
        assert!(matches!(out_of_frame, Err(Error::SubsetOutOfFrame { .. })));
    }

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let m = raw(&[("A", 0.25), ("A", 0.25), ("B", 0.5), ("C", 0.0)]);
        assert_eq!(m.focal_count(), 2);
        assert_eq!(m.mass(FocalSet::singleton(0)), 0.5);
    }

    #[test]
    fn special_kinds() {
        assert_eq!(
            MassFunction::vacuous(abc()).classify_special().unwrap(),
            SpecialKind::Vacuous
        );
        assert_eq!(
            raw(&[("A", 0.3), ("B", 0.7)]).classify_special().unwrap(),
            SpecialKind::Bayesian
        );
        assert_eq!(
            raw(&[("A", 0.2), ("A+B", 0.3), ("A+B+C", 0.5)])
                .classify_special()
                .unwrap(),
            SpecialKind::Consonant
        );
        assert_eq!(
            raw(&[("A", 0.2), ("B+C", 0.3), ("A+B+C", 0.5)])
                .classify_special()
                .unwrap(),
            SpecialKind::General
        );
        assert!(raw(&[("_", 0.1), ("A", 0.9)]).classify_special().is_err());
    }

    #[test]
    fn lifted_pmf_is_bayesian() {
        let pmf = ProbabilityMassFunction::new(abc(), vec![0.2, 0.0, 0.8]).unwrap();
        let m = MassFunction::bayesian(&pmf);
        assert_eq!(m.classify_special().unwrap(), SpecialKind::Bayesian);
        assert_eq!(m.focal_count(), 2);
    }
}
