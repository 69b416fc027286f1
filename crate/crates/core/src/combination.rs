//! Evidence combination rules.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frame::FocalSet;
use crate::mass::MassFunction;
use crate::transform::LayerDistribution;

/// Below this, the non-conflicting mass is treated as zero.
const CONFLICT_EPS: f64 = 1e-12;

/// Source reliability `r` and importance weight `w`, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityWeight {
    reliability: f64,
    weight: f64,
}

impl ReliabilityWeight {
    pub fn new(reliability: f64, weight: f64) -> Result<Self> {
        for (name, v) in [("reliability", reliability), ("weight", weight)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} {v} outside [0, 1]")));
            }
        }
        Ok(ReliabilityWeight { reliability, weight })
    }

    /// A fully reliable source of full weight.
    pub fn full() -> Self {
        ReliabilityWeight {
            reliability: 1.0,
            weight: 1.0,
        }
    }

    pub fn reliability(&self) -> f64 {
        self.reliability
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `c = 1 / (1 + w − r)`.
    pub fn discount_factor(&self) -> Result<f64> {
        let denom = 1.0 + self.weight - self.reliability;
        if denom == 0.0 {
            return Err(Error::InvalidParameter(
                "1 + w − r = 0: discount factor undefined".into(),
            ));
        }
        Ok(1.0 / denom)
    }
}

fn pairwise(m1: &MassFunction, m2: &MassFunction, op: impl Fn(FocalSet, FocalSet) -> FocalSet) -> Result<MassFunction> {
    m1.check_same_frame(m2)?;
    let mut out: BTreeMap<FocalSet, f64> = BTreeMap::new();
    for (g, a) in m1.focal_elements() {
        for (h, b) in m2.focal_elements() {
            *out.entry(op(g, h)).or_insert(0.0) += a * b;
        }
    }
    MassFunction::from_raw(m1.frame().clone(), out)
}

/// Conjunctive rule: `m(F) = Σ_{G∩H=F} m1(G)·m2(H)`. The result keeps any
/// conflict on `∅`.
pub fn ccr(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    pairwise(m1, m2, FocalSet::intersection)
}

/// `K = Σ_{G∩H=∅} m1(G)·m2(H)`.
pub fn conflict_coefficient(m1: &MassFunction, m2: &MassFunction) -> Result<f64> {
    m1.check_same_frame(m2)?;
    let mut k = 0.0;
    for (g, a) in m1.focal_elements() {
        for (h, b) in m2.focal_elements() {
            if !g.intersects(h) {
                k += a * b;
            }
        }
    }
    Ok(k)
}

/// Dempster's rule: the conjunctive result renormalized over non-empty sets.
pub fn drc(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    let conj = ccr(m1, m2)?;
    normalize_nonempty(&conj)
}

/// Drops `∅` and rescales the rest to sum to one.
fn normalize_nonempty(m: &MassFunction) -> Result<MassFunction> {
    let kept: f64 = m.focal_elements().filter(|(s, _)| !s.is_empty()).map(|(_, v)| v).sum();
    if kept <= CONFLICT_EPS {
        return Err(Error::TotalConflict);
    }
    MassFunction::from_raw(
        m.frame().clone(),
        m.focal_elements()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, v)| (s, v / kept)),
    )
}

/// Disjunctive rule: `m(F) = Σ_{G∪H=F} m1(G)·m2(H)`.
pub fn dcr(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    pairwise(m1, m2, FocalSet::union)
}

/// Evidential reasoning rule with reliability and weight.
///
/// Each source is discounted to `m̃_i = c_i·m_i` with the residual
/// `c_i·(1 − r_i)` added on `Θ`, where `c_i = 1/(1 + w_i − r_i)`. The
/// combination `(1−r2)·m̃1 + (1−r1)·m̃2 + m̃1 ∩ m̃2` is renormalized over the
/// non-empty subsets, so `r = w = 1` reproduces [`drc`].
pub fn ecr(
    m1: &MassFunction,
    m2: &MassFunction,
    rw1: ReliabilityWeight,
    rw2: ReliabilityWeight,
) -> Result<MassFunction> {
    m1.check_same_frame(m2)?;
    let d1 = discount(m1, rw1)?;
    let d2 = discount(m2, rw2)?;
    let mut raw: BTreeMap<FocalSet, f64> = BTreeMap::new();
    for (s, v) in d1.focal_elements() {
        *raw.entry(s).or_insert(0.0) += (1.0 - rw2.reliability) * v;
    }
    for (s, v) in d2.focal_elements() {
        *raw.entry(s).or_insert(0.0) += (1.0 - rw1.reliability) * v;
    }
    for (s, v) in ccr(&d1, &d2)?.focal_elements() {
        *raw.entry(s).or_insert(0.0) += v;
    }
    normalize_nonempty(&MassFunction::from_raw(m1.frame().clone(), raw)?)
}

fn discount(m: &MassFunction, rw: ReliabilityWeight) -> Result<MassFunction> {
    let c = rw.discount_factor()?;
    let full = m.frame().full();
    let entries = m
        .focal_elements()
        .filter(|(s, _)| !s.is_empty())
        .map(|(s, v)| (s, c * v))
        .chain(std::iter::once((full, c * (1.0 - rw.reliability))));
    MassFunction::from_raw(m.frame().clone(), entries)
}

/// Ordered partial combination of a layer distribution into `m`.
///
/// Every focal set `H` of `m` larger than the layer's cardinality passes its
/// mass to the layer's strict subsets `G ⊂ H` in proportion to the layer
/// weights: `m(H)·w(G) / Σ_{I⊂H} w(I)`. Focal sets at or below the layer
/// cardinality are kept in place.
pub fn partial_drc(layer: &LayerDistribution, m: &MassFunction) -> Result<MassFunction> {
    let mut out: BTreeMap<FocalSet, f64> = BTreeMap::new();
    for (h, mass) in m.focal_elements() {
        if h.len() <= layer.cardinality() {
            *out.entry(h).or_insert(0.0) += mass;
            continue;
        }
        let below: Vec<(FocalSet, f64)> = layer.weights().filter(|(g, _)| g.is_strict_subset_of(h)).collect();
        let denom: f64 = below.iter().map(|(_, w)| w).sum();
        if denom <= 0.0 {
            return Err(Error::Redistribution { bits: h.bits() });
        }
        for (g, w) in below {
            *out.entry(g).or_insert(0.0) += mass * w / denom;
        }
    }
    MassFunction::from_raw(m.frame().clone(), out)
}

/// Murphy's averaging: the focal-wise mean combined with itself by Dempster's
/// rule `count − 1` times.
pub fn murphy_combine(masses: &[MassFunction]) -> Result<MassFunction> {
    let first = masses
        .first()
        .ok_or_else(|| Error::InvalidParameter("no mass functions to combine".into()))?;
    let mut sum: BTreeMap<FocalSet, f64> = BTreeMap::new();
    for m in masses {
        first.check_same_frame(m)?;
        for (s, v) in m.focal_elements() {
            *sum.entry(s).or_insert(0.0) += v;
        }
    }
    let count = masses.len() as f64;
    let mean = MassFunction::from_raw(first.frame().clone(), sum.into_iter().map(|(s, v)| (s, v / count)))?;
    murphy_fuse_mean(&mean, masses.len())
}

/// `mean ⊕ mean ⊕ … ⊕ mean` with `count − 1` applications of Dempster's rule.
pub fn murphy_fuse_mean(mean: &MassFunction, count: usize) -> Result<MassFunction> {
    let mut acc = mean.clone();
    for _ in 1..count {
        acc = drc(&acc, mean)?;
    }
    Ok(acc)
}
