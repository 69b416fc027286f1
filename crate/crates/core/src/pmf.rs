use std::fmt;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mass::{MassFunction, NORMALIZATION_TOLERANCE};

/// A normalized probability distribution over the elements of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMassFunction {
    frame: Frame,
    probs: Vec<f64>,
}

impl ProbabilityMassFunction {
    pub fn new(frame: Frame, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != frame.size() {
            return Err(Error::InvalidPmf(format!(
                "{} probabilities for a frame of {} elements",
                probs.len(),
                frame.size()
            )));
        }
        for (i, p) in probs.iter().enumerate() {
            if !p.is_finite() || *p < -NORMALIZATION_TOLERANCE || *p > 1.0 + NORMALIZATION_TOLERANCE {
                return Err(Error::InvalidPmf(format!("p({}) = {p} outside [0, 1]", frame.label(i))));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidPmf(format!("probabilities sum to {sum}")));
        }
        Ok(ProbabilityMassFunction { frame, probs })
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(frame: Frame, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != frame.size() {
            return Err(Error::InvalidPmf(format!(
                "{} weights for a frame of {} elements",
                weights.len(),
                frame.size()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidPmf("weights must be finite and non-negative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidPmf("weights sum to zero".into()));
        }
        let probs = weights.into_iter().map(|w| w / sum).collect();
        Ok(ProbabilityMassFunction { frame, probs })
    }

    /// Element-wise average of weight rows, normalized afterwards.
    ///
    /// Rows need not be normalized individually; each contributes its raw values.
    pub fn mean_of_weights(frame: Frame, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidPmf("no rows to average".into()));
        }
        let mut sum = vec![0.0; frame.size()];
        for row in rows {
            if row.len() != frame.size() {
                return Err(Error::InvalidPmf(format!(
                    "row of {} values for a frame of {} elements",
                    row.len(),
                    frame.size()
                )));
            }
            for (acc, v) in sum.iter_mut().zip(row) {
                *acc += v;
            }
        }
        let count = rows.len() as f64;
        Self::from_weights(frame, sum.into_iter().map(|s| s / count).collect())
    }

    pub fn uniform(frame: Frame) -> Self {
        let n = frame.size();
        ProbabilityMassFunction {
            frame,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Arithmetic mean of distributions on one frame.
    pub fn mean(pmfs: &[ProbabilityMassFunction]) -> Result<Self> {
        let first = pmfs
            .first()
            .ok_or_else(|| Error::InvalidPmf("no distributions to average".into()))?;
        let mut sum = vec![0.0; first.len()];
        for p in pmfs {
            first.frame.check_same(&p.frame)?;
            for (acc, v) in sum.iter_mut().zip(&p.probs) {
                *acc += v;
            }
        }
        let count = pmfs.len() as f64;
        Ok(ProbabilityMassFunction {
            frame: first.frame.clone(),
            probs: sum.into_iter().map(|s| s / count).collect(),
        })
    }

    /// Parses comma-separated decimals, e.g. `0.5,0.25,0.25`.
    pub fn parse(frame: Frame, text: &str) -> Result<Self> {
        let probs = text
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: 1,
                    message: format!("{s:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, probs)
    }

    /// Reads singleton masses of a Bayesian mass function.
    pub(crate) fn from_singletons(m: &MassFunction) -> Self {
        ProbabilityMassFunction {
            frame: m.frame().clone(),
            probs: m.singleton_masses(),
        }
    }

    pub(crate) fn from_vec_unchecked(frame: Frame, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), frame.size());
        ProbabilityMassFunction { frame, probs }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Index of the largest probability; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if *p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    pub fn to_mass(&self) -> MassFunction {
        MassFunction::bayesian(self)
    }

    pub fn max_abs_diff(&self, other: &ProbabilityMassFunction) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for ProbabilityMassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
