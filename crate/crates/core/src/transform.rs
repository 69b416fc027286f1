//! Probability transformations: mass function → probability distribution.
//!
//! Besides the classical closed-form rules this module hosts the layered
//! model in which a transformation is a top-down sequence of partial
//! combinations over the belief evolution network, and the full-causality
//! transformation built on it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::belief::full_causality_dense;
use crate::combination::partial_drc;
use crate::error::{Error, Result};
use crate::frame::{FocalSet, Frame};
use crate::mass::{MassFunction, NORMALIZATION_TOLERANCE};
use crate::pmf::ProbabilityMassFunction;
use crate::text::{format_snapshots, Precision};

/// A distribution over the subsets of one cardinality, used as the fused
/// operand of a partial combination.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerDistribution {
    cardinality: usize,
    weights: BTreeMap<FocalSet, f64>,
}

impl LayerDistribution {
    pub fn new(frame: &Frame, entries: impl IntoIterator<Item = (FocalSet, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        let mut cardinality = None;
        for (set, w) in entries {
            frame.check_subset(set)?;
            if set.is_empty() {
                return Err(Error::InvalidParameter("layer weight on the empty set".into()));
            }
            if *cardinality.get_or_insert(set.len()) != set.len() {
                return Err(Error::InvalidParameter(
                    "layer weights must share one cardinality".into(),
                ));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!("layer weight {w} is not non-negative")));
            }
            *weights.entry(set).or_insert(0.0) += w;
        }
        let cardinality = cardinality.ok_or_else(|| Error::InvalidParameter("empty layer distribution".into()))?;
        let sum: f64 = weights.values().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidParameter(format!("layer weights sum to {sum}")));
        }
        Ok(LayerDistribution { cardinality, weights })
    }

    /// Equal weight on every subset of the given cardinality.
    pub fn uniform(frame: &Frame, cardinality: usize) -> Result<Self> {
        if cardinality == 0 || cardinality > frame.size() {
            return Err(Error::InvalidParameter(format!(
                "no subsets of cardinality {cardinality} in a frame of {}",
                frame.size()
            )));
        }
        let sets: Vec<FocalSet> = frame.subsets_of_size(cardinality).collect();
        let w = 1.0 / sets.len() as f64;
        Ok(LayerDistribution {
            cardinality,
            weights: sets.into_iter().map(|s| (s, w)).collect(),
        })
    }

    /// Weights proportional to the full-causality function of `current` on the
    /// subsets of the given cardinality. Falls back to uniform when every FC
    /// value on the layer is zero.
    pub fn full_causality(current: &MassFunction, cardinality: usize) -> Result<Self> {
        let frame = current.frame();
        let fc = current.fc_vector();
        let sets: Vec<FocalSet> = frame.subsets_of_size(cardinality).collect();
        let total: f64 = sets.iter().map(|s| fc[s.bits() as usize]).sum();
        if total <= 0.0 {
            return Self::uniform(frame, cardinality);
        }
        Ok(LayerDistribution {
            cardinality,
            weights: sets.into_iter().map(|s| (s, fc[s.bits() as usize] / total)).collect(),
        })
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn weights(&self) -> impl Iterator<Item = (FocalSet, f64)> + '_ {
        self.weights.iter().map(|(s, w)| (*s, *w))
    }
}

/// Supplies the layer distribution for each evolution step.
///
/// `step` runs `1..n`, targeting subsets of cardinality `n − step`; `current`
/// is the evolving mass before the step.
pub trait LayerProvider {
    fn layer(&mut self, step: usize, cardinality: usize, current: &MassFunction) -> Result<LayerDistribution>;
}

impl<F> LayerProvider for F
where
    F: FnMut(usize, usize, &MassFunction) -> Result<LayerDistribution>,
{
    fn layer(&mut self, step: usize, cardinality: usize, current: &MassFunction) -> Result<LayerDistribution> {
        self(step, cardinality, current)
    }
}

/// Even split at every step; yields the pignistic transformation.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformLayers;

impl LayerProvider for UniformLayers {
    fn layer(&mut self, _: usize, cardinality: usize, current: &MassFunction) -> Result<LayerDistribution> {
        LayerDistribution::uniform(current.frame(), cardinality)
    }
}

/// FC-proportional split recomputed from the evolving mass; yields FCPT.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullCausalityLayers;

impl LayerProvider for FullCausalityLayers {
    fn layer(&mut self, _: usize, cardinality: usize, current: &MassFunction) -> Result<LayerDistribution> {
        LayerDistribution::full_causality(current, cardinality)
    }
}

/// A transformed distribution together with the evolution that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformResult {
    pub pmf: ProbabilityMassFunction,
    pub method: String,
    /// Mass before the first step followed by the mass after each step.
    /// Empty for closed-form methods.
    pub trace: Vec<MassFunction>,
}

impl TransformResult {
    /// One snapshot per line in the mass-function record format.
    pub fn format_trace(&self, precision: Precision) -> String {
        format_snapshots(self.pmf.frame(), &self.trace, precision)
    }
}

/// Generalized layered transformation: `n − 1` ordered partial combinations,
/// top-down, with layer distributions supplied by `provider`.
pub fn gptm(m: &MassFunction, provider: &mut impl LayerProvider) -> Result<TransformResult> {
    m.require_normal()?;
    let n = m.frame().size();
    let mut current = m.clone();
    let mut trace = vec![current.clone()];
    for step in 1..n {
        let layer = provider.layer(step, n - step, &current)?;
        current = partial_drc(&layer, &current)?;
        trace.push(current.clone());
    }
    Ok(TransformResult {
        pmf: ProbabilityMassFunction::from_singletons(&current),
        method: "GPTM".into(),
        trace,
    })
}

/// Full causality probability transformation.
///
/// Walks the network top-down; at each layer the FC function of the next
/// layer's subsets is recomputed from the current evolving mass, and every
/// node's mass is split among its children in proportion to their FC values.
pub fn fcpt(m: &MassFunction) -> Result<TransformResult> {
    m.require_normal()?;
    let frame = m.frame().clone();
    let n = frame.size();
    let mut dense = m.to_dense();
    let mut trace = vec![m.clone()];
    for step in 1..n {
        let parent_card = n + 1 - step;
        let fc = full_causality_dense(&dense);
        let mut next = dense.clone();
        for parent in frame.subsets_of_size(parent_card) {
            let mass = dense[parent.bits() as usize];
            if mass == 0.0 {
                continue;
            }
            next[parent.bits() as usize] = 0.0;
            let total: f64 = parent.children().map(|c| fc[c.bits() as usize]).sum();
            for child in parent.children() {
                let share = if total > 0.0 {
                    fc[child.bits() as usize] / total
                } else {
                    1.0 / parent_card as f64
                };
                next[child.bits() as usize] += mass * share;
            }
        }
        dense = next;
        trace.push(MassFunction::from_dense(frame.clone(), &dense));
    }
    let probs = (0..n).map(|i| dense[1 << i]).collect();
    Ok(TransformResult {
        pmf: ProbabilityMassFunction::from_vec_unchecked(frame, probs),
        method: "FCP".into(),
        trace,
    })
}

/// Pignistic transformation. Accepts subnormal input and renormalizes by
/// `1 − m(∅)`.
pub fn betp(m: &MassFunction) -> Result<ProbabilityMassFunction> {
    m.require_valid()?;
    let conflict = m.empty_mass();
    if conflict >= 1.0 - NORMALIZATION_TOLERANCE {
        return Err(Error::TotalConflict);
    }
    let mut probs = vec![0.0; m.frame().size()];
    for (set, v) in m.focal_elements().filter(|(s, _)| !s.is_empty()) {
        let share = v / set.len() as f64;
        for i in set.elements() {
            probs[i] += share;
        }
    }
    let scale = 1.0 - conflict;
    Ok(ProbabilityMassFunction::from_vec_unchecked(
        m.frame().clone(),
        probs.into_iter().map(|p| p / scale).collect(),
    ))
}

fn singleton_plausibilities(m: &MassFunction) -> Vec<f64> {
    let mut pl = vec![0.0; m.frame().size()];
    for (set, v) in m.focal_elements() {
        for i in set.elements() {
            pl[i] += v;
        }
    }
    pl
}

/// Normalized plausibility of singletons.
pub fn pnpl(m: &MassFunction) -> Result<ProbabilityMassFunction> {
    m.require_normal()?;
    let pl = singleton_plausibilities(m);
    let total: f64 = pl.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("all singleton plausibilities are zero".into()));
    }
    Ok(ProbabilityMassFunction::from_vec_unchecked(
        m.frame().clone(),
        pl.into_iter().map(|p| p / total).collect(),
    ))
}

/// `Bel(θ) + Pl(θ)·(1 − ΣBel)/ΣPl`.
pub fn prapl(m: &MassFunction) -> Result<ProbabilityMassFunction> {
    m.require_normal()?;
    let bel = m.singleton_masses();
    let pl = singleton_plausibilities(m);
    let pl_total: f64 = pl.iter().sum();
    if pl_total <= 0.0 {
        return Err(Error::InvalidParameter("all singleton plausibilities are zero".into()));
    }
    let factor = (1.0 - bel.iter().sum::<f64>()) / pl_total;
    Ok(ProbabilityMassFunction::from_vec_unchecked(
        m.frame().clone(),
        bel.iter().zip(&pl).map(|(b, p)| b + p * factor).collect(),
    ))
}

/// DSmP with tuning parameter `ε ≥ 0`.
///
/// Each multi-element focal set `F` gives `θ ∈ F` the share
/// `(m(θ) + ε) / (Σ_{θ'∈F} m(θ') + |F|·ε)`. When that denominator is zero
/// (only possible with `ε = 0`) the mass of `F` is split evenly.
pub fn dsmp(m: &MassFunction, epsilon: f64) -> Result<ProbabilityMassFunction> {
    m.require_normal()?;
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidParameter(format!("DSmP epsilon {epsilon} must be ≥ 0")));
    }
    let singles = m.singleton_masses();
    let mut probs = singles.clone();
    for (set, v) in m.focal_elements().filter(|(s, _)| s.len() > 1) {
        let denom: f64 = set.elements().map(|i| singles[i]).sum::<f64>() + set.len() as f64 * epsilon;
        for i in set.elements() {
            probs[i] += if denom > 0.0 {
                v * (singles[i] + epsilon) / denom
            } else {
                v / set.len() as f64
            };
        }
    }
    Ok(ProbabilityMassFunction::from_vec_unchecked(m.frame().clone(), probs))
}

/// `m(θ) + Σ_{|F|>1} m(F) · (Pl(θ) − m(θ)) / Σ_θ' (Pl(θ') − m(θ'))`.
pub fn cuzzp(m: &MassFunction) -> Result<ProbabilityMassFunction> {
    m.require_normal()?;
    let singles = m.singleton_masses();
    let pl = singleton_plausibilities(m);
    let gaps: Vec<f64> = pl.iter().zip(&singles).map(|(p, s)| p - s).collect();
    let gap_total: f64 = gaps.iter().sum();
    let multi: f64 = m.focal_elements().filter(|(s, _)| s.len() > 1).map(|(_, v)| v).sum();
    let probs = if gap_total > 0.0 {
        singles
            .iter()
            .zip(&gaps)
            .map(|(s, g)| s + multi * g / gap_total)
            .collect()
    } else {
        // no multi-element mass: nothing to redistribute
        singles
    };
    Ok(ProbabilityMassFunction::from_vec_unchecked(m.frame().clone(), probs))
}

/// A transformation selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    BetP,
    PnPl,
    PraPl,
    CuzzP,
    DSmP(f64),
    Fcp,
}

impl Method {
    pub fn apply(&self, m: &MassFunction) -> Result<ProbabilityMassFunction> {
        match self {
            Method::BetP => betp(m),
            Method::PnPl => pnpl(m),
            Method::PraPl => prapl(m),
            Method::CuzzP => cuzzp(m),
            Method::DSmP(eps) => dsmp(m, *eps),
            Method::Fcp => fcpt(m).map(|r| r.pmf),
        }
    }

    /// The methods compared in the reference evaluations, in table order.
    pub fn classical_with_fcp() -> Vec<Method> {
        vec![
            Method::PnPl,
            Method::CuzzP,
            Method::BetP,
            Method::PraPl,
            Method::DSmP(0.0),
            Method::DSmP(0.001),
            Method::Fcp,
        ]
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::BetP => write!(f, "BetP"),
            Method::PnPl => write!(f, "PnPl"),
            Method::PraPl => write!(f, "PraPl"),
            Method::CuzzP => write!(f, "CuzzP"),
            Method::DSmP(eps) => write!(f, "DSmP_{eps}"),
            Method::Fcp => write!(f, "FCP"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts `betp`, `pnpl`, `prapl`, `cuzzp`, `fcp`/`fcpt`, and
    /// `dsmp_<eps>` or `dsmp:<eps>` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "betp" | "ppt" => return Ok(Method::BetP),
            "pnpl" | "ptm" => return Ok(Method::PnPl),
            "prapl" => return Ok(Method::PraPl),
            "cuzzp" => return Ok(Method::CuzzP),
            "fcp" | "fcpt" => return Ok(Method::Fcp),
            _ => {}
        }
        if let Some(eps) = lower
            .strip_prefix("dsmp_")
            .or_else(|| lower.strip_prefix("dsmp:"))
            .or_else(|| lower.strip_prefix("dsmp"))
        {
            let eps = if eps.is_empty() { "0" } else { eps };
            let eps: f64 = eps
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad DSmP epsilon in {s:?}")))?;
            if eps < 0.0 {
                return Err(Error::InvalidParameter(format!("negative DSmP epsilon in {s:?}")));
            }
            return Ok(Method::DSmP(eps));
        }
        Err(Error::InvalidParameter(format!("unknown transformation {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Vacuously true when `m` is not Bayesian.
    pub p_consistent: bool,
    /// `Bel(θ) ≤ P(θ) ≤ Pl(θ)` for every element.
    pub ulb_consistent: bool,
}

pub fn consistency_checks(m: &MassFunction, pmf: &ProbabilityMassFunction) -> Result<ConsistencyReport> {
    m.frame().check_same(pmf.frame())?;
    const TOL: f64 = 1e-9;
    let p_consistent =
        !m.is_bayesian() || (0..pmf.len()).all(|i| (pmf.prob(i) - m.mass(FocalSet::singleton(i))).abs() <= TOL);
    let ulb_consistent = (0..pmf.len()).all(|i| {
        let s = FocalSet::singleton(i);
        let p = pmf.prob(i);
        m.bel(s) - TOL <= p && p <= m.pl(s) + TOL
    });
    Ok(ConsistencyReport {
        p_consistent,
        ulb_consistent,
    })
}
