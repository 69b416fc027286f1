//! Evaluation metrics for transformed distributions and the Bi-Criteria
//! comparison of transformation methods.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frame::FocalSet;
use crate::mass::MassFunction;
use crate::pmf::ProbabilityMassFunction;
use crate::text::Precision;

/// Normalized Shannon entropy `−Σ p ln p / ln n`, with `0·ln 0 = 0`.
pub fn normalized_entropy(pmf: &ProbabilityMassFunction) -> Result<f64> {
    let n = pmf.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "entropy normalization needs at least two elements".into(),
        ));
    }
    let h: f64 = pmf.probs().iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    Ok(h / (n as f64).ln())
}

/// Probabilistic information content, `1 − E_N`.
pub fn pic(pmf: &ProbabilityMassFunction) -> Result<f64> {
    Ok(1.0 - normalized_entropy(pmf)?)
}

fn jaccard(f: FocalSet, g: FocalSet) -> f64 {
    f.intersection(g).len() as f64 / f.union(g).len() as f64
}

/// Jousselme distance `sqrt(½ (m1−m2)ᵀ D (m1−m2))` with `D(F,G) = |F∩G|/|F∪G|`
/// over non-empty subsets. Mass on `∅` is ignored.
pub fn jousselme_distance(m1: &MassFunction, m2: &MassFunction) -> Result<f64> {
    m1.frame().check_same(m2.frame())?;
    let support: BTreeSet<FocalSet> = m1
        .focal_elements()
        .chain(m2.focal_elements())
        .map(|(s, _)| s)
        .filter(|s| !s.is_empty())
        .collect();
    let diff: Vec<(FocalSet, f64)> = support.into_iter().map(|s| (s, m1.mass(s) - m2.mass(s))).collect();
    let mut quad = 0.0;
    for &(f, a) in &diff {
        for &(g, b) in &diff {
            quad += a * b * jaccard(f, g);
        }
    }
    // round-off can leave a tiny negative value for identical inputs
    Ok((0.5 * quad).max(0.0).sqrt())
}

fn cross_correlation(m1: &MassFunction, m2: &MassFunction) -> f64 {
    let mut c = 0.0;
    for (f, a) in m1.focal_elements().filter(|(s, _)| !s.is_empty()) {
        for (g, b) in m2.focal_elements().filter(|(s, _)| !s.is_empty()) {
            c += a * b * jaccard(f, g);
        }
    }
    c
}

/// Belief correlation coefficient `c(m1,m2) / sqrt(c(m1,m1)·c(m2,m2))`.
pub fn correlation_coefficient(m1: &MassFunction, m2: &MassFunction) -> Result<f64> {
    m1.frame().check_same(m2.frame())?;
    let c11 = cross_correlation(m1, m1);
    let c22 = cross_correlation(m2, m2);
    if c11 <= 0.0 || c22 <= 0.0 {
        return Err(Error::InvalidParameter(
            "correlation undefined for a mass function with no non-empty focal sets".into(),
        ));
    }
    Ok(cross_correlation(m1, m2) / (c11 * c22).sqrt())
}

/// Min-max normalization; a set of equal values maps to all zeros.
pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_nan() || min.is_nan() || max <= min {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - min) / (max - min)).collect()
}

/// `n` evenly spaced weights from 0 to 1 inclusive.
pub fn alpha_grid(samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect(),
    }
}

pub const DEFAULT_ALPHA_SAMPLES: usize = 11;

/// Which pair of indices the joint score weighs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Criterion {
    /// `α·d' + (1−α)·PIC'`.
    #[default]
    Pic,
    /// `α·E_N' + (1−α)·d'`.
    Entropy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodScore {
    pub method: String,
    pub pmf: ProbabilityMassFunction,
    pub pic: f64,
    pub entropy: f64,
    pub distance: f64,
    pub correlation: f64,
    pub pic_index: f64,
    pub entropy_index: f64,
    pub distance_index: f64,
    /// Joint score at each α of the report's grid.
    pub joint: Vec<f64>,
    pub mean_joint: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub criterion: Criterion,
    pub alphas: Vec<f64>,
    pub scores: Vec<MethodScore>,
}

/// Scores each transformed distribution against the original mass function
/// and ranks them with the Bi-Criteria joint score.
pub fn evaluate(
    original: &MassFunction,
    methods: &[(String, ProbabilityMassFunction)],
    alphas: &[f64],
    criterion: Criterion,
) -> Result<EvaluationReport> {
    if methods.len() < 2 {
        return Err(Error::InvalidParameter(
            "Bi-Criteria evaluation compares at least two methods".into(),
        ));
    }
    if let Some(a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::InvalidParameter(format!("alpha {a} outside [0, 1]")));
    }
    let mut pics = Vec::with_capacity(methods.len());
    let mut entropies = Vec::with_capacity(methods.len());
    let mut distances = Vec::with_capacity(methods.len());
    let mut correlations = Vec::with_capacity(methods.len());
    for (_, pmf) in methods {
        original.frame().check_same(pmf.frame())?;
        let lifted = pmf.to_mass();
        let e = normalized_entropy(pmf)?;
        entropies.push(e);
        pics.push(1.0 - e);
        distances.push(jousselme_distance(original, &lifted)?);
        correlations.push(correlation_coefficient(original, &lifted)?);
    }
    let d_index = min_max_normalize(&distances);
    let e_index = min_max_normalize(&entropies);
    // PIC' = (max PIC − PIC) / (max − min): larger PIC scores lower
    let neg: Vec<f64> = pics.iter().map(|p| -p).collect();
    let pic_index = min_max_normalize(&neg);

    let scores = methods
        .iter()
        .enumerate()
        .map(|(i, (name, pmf))| {
            let joint: Vec<f64> = alphas
                .iter()
                .map(|a| match criterion {
                    Criterion::Pic => a * d_index[i] + (1.0 - a) * pic_index[i],
                    Criterion::Entropy => a * e_index[i] + (1.0 - a) * d_index[i],
                })
                .collect();
            let mean_joint = if joint.is_empty() {
                0.0
            } else {
                joint.iter().sum::<f64>() / joint.len() as f64
            };
            MethodScore {
                method: name.clone(),
                pmf: pmf.clone(),
                pic: pics[i],
                entropy: entropies[i],
                distance: distances[i],
                correlation: correlations[i],
                pic_index: pic_index[i],
                entropy_index: e_index[i],
                distance_index: d_index[i],
                joint,
                mean_joint,
            }
        })
        .collect();
    Ok(EvaluationReport {
        criterion,
        alphas: alphas.to_vec(),
        scores,
    })
}

impl EvaluationReport {
    pub fn score(&self, method: &str) -> Option<&MethodScore> {
        self.scores.iter().find(|s| s.method == method)
    }

    /// Method with the smallest mean joint score (first on ties).
    pub fn best(&self) -> &MethodScore {
        self.scores
            .iter()
            .reduce(|best, s| if s.mean_joint < best.mean_joint { s } else { best })
            .expect("a report holds at least two methods")
    }

    /// `method,PIC,d,r,PIC',d',C@<α>...,mean` with one row per method.
    pub fn to_csv(&self, precision: Precision) -> String {
        let mut out = String::from("method,PIC,d,r");
        match self.criterion {
            Criterion::Pic => out.push_str(",PIC',d'"),
            Criterion::Entropy => out.push_str(",E_N',d'"),
        }
        for a in &self.alphas {
            write!(out, ",C@{}", Precision::Decimals(1).format(*a)).unwrap();
        }
        out.push_str(",mean\n");
        for s in &self.scores {
            let first_index = match self.criterion {
                Criterion::Pic => s.pic_index,
                Criterion::Entropy => s.entropy_index,
            };
            let mut cells = vec![
                s.method.clone(),
                precision.format(s.pic),
                precision.format(s.distance),
                precision.format(s.correlation),
                precision.format(first_index),
                precision.format(s.distance_index),
            ];
            cells.extend(s.joint.iter().map(|v| precision.format(*v)));
            cells.push(precision.format(s.mean_joint));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::testing::random_mass;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pmf(p: &[f64]) -> ProbabilityMassFunction {
        ProbabilityMassFunction::new(Frame::letters(p.len()).unwrap(), p.to_vec()).unwrap()
    }

    #[test]
    fn pic_endpoints() {
        assert!(pic(&pmf(&[1.0 / 3.0; 3])).unwrap().abs() < 1e-12);
        assert_eq!(pic(&pmf(&[1.0, 0.0, 0.0])).unwrap(), 1.0);
        assert!(pic(&pmf(&[1.0])).is_err());
        let p = pmf(&[0.2, 0.3, 0.5]);
        assert_eq!(pic(&p).unwrap() + normalized_entropy(&p).unwrap(), 1.0);
    }

    #[test]
    fn distance_between_singletons_and_whole_frame() {
        let frame = Frame::letters(2).unwrap();
        let a = MassFunction::from_labels(frame.clone(), &[("A", 1.0)]).unwrap();
        let b = MassFunction::from_labels(frame.clone(), &[("B", 1.0)]).unwrap();
        let ab = MassFunction::vacuous(frame);
        assert!((jousselme_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        // ½(1 + 1 − 2·½) = ½
        assert!((jousselme_distance(&a, &ab).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(jousselme_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn distance_is_a_metric_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            let frame = Frame::letters(n).unwrap();
            for _ in 0..40 {
                let (x, y, z) = (
                    random_mass(&mut rng, &frame),
                    random_mass(&mut rng, &frame),
                    random_mass(&mut rng, &frame),
                );
                let dxy = jousselme_distance(&x, &y).unwrap();
                assert!((dxy - jousselme_distance(&y, &x).unwrap()).abs() < 1e-12);
                assert!(jousselme_distance(&x, &x).unwrap() < 1e-7);
                let via = jousselme_distance(&x, &z).unwrap() + jousselme_distance(&z, &y).unwrap();
                assert!(dxy <= via + 1e-9);
                assert!((0.0..=1.0 + 1e-12).contains(&dxy));
            }
        }
    }

    #[test]
    fn correlation_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let frame = Frame::letters(4).unwrap();
        for _ in 0..50 {
            let x = random_mass(&mut rng, &frame);
            let y = random_mass(&mut rng, &frame);
            assert!((correlation_coefficient(&x, &x).unwrap() - 1.0).abs() < 1e-12);
            let r = correlation_coefficient(&x, &y).unwrap();
            assert!((r - correlation_coefficient(&y, &x).unwrap()).abs() < 1e-12);
            assert!(r > 0.0 && r <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn normalization_ties_map_to_zero() {
        assert_eq!(min_max_normalize(&[0.3, 0.3]), vec![0.0, 0.0]);
        assert_eq!(min_max_normalize(&[1.0, 2.0, 3.0]), vec![0.0, 0.5, 1.0]);
        assert_eq!(alpha_grid(DEFAULT_ALPHA_SAMPLES).len(), 11);
        assert_eq!(alpha_grid(11)[10], 1.0);
    }

    #[test]
    fn joint_score_endpoints_and_duplicates() {
        let frame = Frame::letters(3).unwrap();
        let m = MassFunction::from_labels(frame.clone(), &[("A", 0.1), ("A+B", 0.2), ("B+C", 0.3), ("A+B+C", 0.4)])
            .unwrap();
        let methods: Vec<(String, ProbabilityMassFunction)> = ["betp", "pnpl", "fcp"]
            .iter()
            .map(|name| {
                let method: crate::transform::Method = name.parse().unwrap();
                (name.to_string(), method.apply(&m).unwrap())
            })
            .collect();
        let alphas = alpha_grid(11);
        let report = evaluate(&m, &methods, &alphas, Criterion::Pic).unwrap();
        for s in &report.scores {
            assert_eq!(s.joint[0], s.pic_index);
            assert_eq!(s.joint[10], s.distance_index);
        }
        // a duplicate leaves the extremes, and so every index, unchanged
        let mut doubled = methods.clone();
        doubled.push(("copy".into(), methods[0].1.clone()));
        let again = evaluate(&m, &doubled, &alphas, Criterion::Pic).unwrap();
        for (a, b) in report.scores.iter().zip(&again.scores) {
            assert_eq!(a.pic_index, b.pic_index);
            assert_eq!(a.distance_index, b.distance_index);
        }
        let entropy = evaluate(&m, &methods, &[0.0], Criterion::Entropy).unwrap();
        for s in &entropy.scores {
            assert_eq!(s.joint[0], s.distance_index);
            assert!((s.entropy_index - s.pic_index).abs() < 1e-12);
        }
        assert!(evaluate(&m, &methods[..1], &alphas, Criterion::Pic).is_err());
        assert!(evaluate(&m, &methods, &[1.5], Criterion::Pic).is_err());
        let csv = report.to_csv(Precision::Decimals(4));
        assert!(csv.starts_with("method,PIC,d,r,PIC',d',C@0.0,"));
        assert_eq!(csv.lines().count(), 4);
    }
}
