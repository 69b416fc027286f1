//! Fusion of probability distributions: the FCPT-PCR rule (disjunctive
//! combination followed by the full-causality transformation), its
//! multi-source form, self-fusion trajectories and ablation variants.

use std::fmt;
use std::str::FromStr;

use crate::combination::{dcr, drc};
use crate::error::{Error, Result};
use crate::mass::MassFunction;
use crate::pmf::ProbabilityMassFunction;
use crate::text::Precision;
use crate::transform::{betp, cuzzp, dsmp, fcpt, pnpl};

/// `fcpt(dcr(P1, P2))` with each distribution lifted to a Bayesian mass.
///
/// Commutative but not associative.
pub fn fcpt_pcr_pair(p1: &ProbabilityMassFunction, p2: &ProbabilityMassFunction) -> Result<ProbabilityMassFunction> {
    ablation_pair(p1, p2, AblationTransform::Fcp)
}

/// Algorithm-style multi-source fusion: average the sources, then fuse the
/// running result with the fixed mean `count − 1` times.
pub fn fcpt_pcr_multi(sources: &[ProbabilityMassFunction]) -> Result<ProbabilityMassFunction> {
    let mean = ProbabilityMassFunction::mean(sources)?;
    fcpt_pcr_fuse_mean(&mean, sources.len())
}

/// `mean ⊎ mean ⊎ … ⊎ mean`, `count − 1` fusions, accumulating on the left.
pub fn fcpt_pcr_fuse_mean(mean: &ProbabilityMassFunction, count: usize) -> Result<ProbabilityMassFunction> {
    let mut acc = mean.clone();
    for _ in 1..count {
        acc = fcpt_pcr_pair(&acc, mean)?;
    }
    Ok(acc)
}

/// Left-to-right pairwise fusion `((P1 ⊎ P2) ⊎ P3) ⊎ …`. Order matters.
pub fn fcpt_pcr_sequential(sources: &[ProbabilityMassFunction]) -> Result<ProbabilityMassFunction> {
    let (first, rest) = sources
        .split_first()
        .ok_or_else(|| Error::InvalidPmf("no distributions to fuse".into()))?;
    rest.iter().try_fold(first.clone(), |acc, p| fcpt_pcr_pair(&acc, p))
}

/// Murphy's rule on distributions: mean combined with itself by Dempster's
/// rule `count − 1` times.
pub fn murphy_pmf(sources: &[ProbabilityMassFunction]) -> Result<ProbabilityMassFunction> {
    let mean = ProbabilityMassFunction::mean(sources)?;
    murphy_pmf_fuse_mean(&mean, sources.len())
}

pub fn murphy_pmf_fuse_mean(mean: &ProbabilityMassFunction, count: usize) -> Result<ProbabilityMassFunction> {
    let lifted = mean.to_mass();
    let fused = crate::combination::murphy_fuse_mean(&lifted, count)?;
    Ok(ProbabilityMassFunction::from_singletons(&fused))
}

/// Dempster's rule on distributions, left to right.
pub fn drc_pmf(sources: &[ProbabilityMassFunction]) -> Result<ProbabilityMassFunction> {
    let (first, rest) = sources
        .split_first()
        .ok_or_else(|| Error::InvalidPmf("no distributions to fuse".into()))?;
    let mut acc = first.to_mass();
    for p in rest {
        first.frame().check_same(p.frame())?;
        acc = drc(&acc, &p.to_mass())?;
    }
    Ok(ProbabilityMassFunction::from_singletons(&acc))
}

/// Distributions produced by repeatedly fusing with a fixed distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionTrajectory {
    /// The starting distribution followed by one entry per step.
    pub points: Vec<ProbabilityMassFunction>,
}

impl FusionTrajectory {
    pub fn initial(&self) -> &ProbabilityMassFunction {
        &self.points[0]
    }

    pub fn last(&self) -> &ProbabilityMassFunction {
        self.points.last().expect("a trajectory starts with its initial point")
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    /// Probability of element `index` along the trajectory.
    pub fn series(&self, index: usize) -> Vec<f64> {
        self.points.iter().map(|p| p.prob(index)).collect()
    }

    /// `step,<label>...` with step 0 the initial distribution.
    pub fn to_csv(&self, precision: Precision) -> String {
        let frame = self.initial().frame();
        let mut out = format!("step,{}\n", frame.labels().join(","));
        for (step, p) in self.points.iter().enumerate() {
            let cells: Vec<String> = p.probs().iter().map(|v| precision.format(*v)).collect();
            out.push_str(&format!("{step},{}\n", cells.join(",")));
        }
        out
    }
}

fn trajectory(
    p: &ProbabilityMassFunction,
    steps: usize,
    mut step: impl FnMut(&ProbabilityMassFunction) -> Result<ProbabilityMassFunction>,
) -> Result<FusionTrajectory> {
    if steps == 0 {
        return Err(Error::InvalidParameter("a trajectory needs at least one step".into()));
    }
    let mut points = Vec::with_capacity(steps + 1);
    points.push(p.clone());
    for _ in 0..steps {
        let next = step(points.last().unwrap())?;
        points.push(next);
    }
    Ok(FusionTrajectory { points })
}

/// `P_{k+1} = P_k ⊎ P` starting from `P`.
pub fn iterate_self_fusion(p: &ProbabilityMassFunction, steps: usize) -> Result<FusionTrajectory> {
    trajectory(p, steps, |cur| fcpt_pcr_pair(cur, p))
}

/// `P_{k+1} = P_k ⊕ P` starting from `P`.
pub fn iterate_self_drc(p: &ProbabilityMassFunction, steps: usize) -> Result<FusionTrajectory> {
    let lifted = p.to_mass();
    trajectory(p, steps, |cur| {
        drc(&cur.to_mass(), &lifted).map(|m| ProbabilityMassFunction::from_singletons(&m))
    })
}

/// The transformation applied after the disjunctive step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AblationTransform {
    Fcp,
    BetP,
    PnPl,
    DSmP0,
    CuzzP,
}

impl AblationTransform {
    pub const ALL: [AblationTransform; 5] = [
        AblationTransform::Fcp,
        AblationTransform::BetP,
        AblationTransform::PnPl,
        AblationTransform::DSmP0,
        AblationTransform::CuzzP,
    ];

    fn apply(self, m: &MassFunction) -> Result<ProbabilityMassFunction> {
        match self {
            AblationTransform::Fcp => fcpt(m).map(|r| r.pmf),
            AblationTransform::BetP => betp(m),
            AblationTransform::PnPl => pnpl(m),
            AblationTransform::DSmP0 => dsmp(m, 0.0),
            AblationTransform::CuzzP => cuzzp(m),
        }
    }
}

impl fmt::Display for AblationTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AblationTransform::Fcp => "FCP",
            AblationTransform::BetP => "BetP",
            AblationTransform::PnPl => "PnPl",
            AblationTransform::DSmP0 => "DSmP_0",
            AblationTransform::CuzzP => "CuzzP",
        })
    }
}

impl FromStr for AblationTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fcp" | "fcpt" => Ok(AblationTransform::Fcp),
            "betp" => Ok(AblationTransform::BetP),
            "pnpl" => Ok(AblationTransform::PnPl),
            "dsmp_0" | "dsmp0" | "dsmp" => Ok(AblationTransform::DSmP0),
            "cuzzp" => Ok(AblationTransform::CuzzP),
            _ => Err(Error::InvalidParameter(format!("unknown ablation transform {s:?}"))),
        }
    }
}

/// Disjunctive combination of the two lifted distributions followed by the
/// named transformation.
pub fn ablation_pair(
    p1: &ProbabilityMassFunction,
    p2: &ProbabilityMassFunction,
    transform: AblationTransform,
) -> Result<ProbabilityMassFunction> {
    p1.frame().check_same(p2.frame())?;
    let combined = dcr(&p1.to_mass(), &p2.to_mass())?;
    transform.apply(&combined)
}
