//! Fusion-based classification: per-feature Gaussian class likelihoods turned
//! into distributions over classes, fused across features, and scored with
//! repeated stratified k-fold cross-validation.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::fusion::{drc_pmf, fcpt_pcr_fuse_mean, fcpt_pcr_sequential, murphy_pmf_fuse_mean};
use crate::pmf::ProbabilityMassFunction;
use crate::text::Precision;

/// Labelled feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

/// Where the class label sits in each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
    Last,
}

impl FromStr for LabelColumn {
    type Err = Error;

    /// `last`, a zero-based column index, or a header name.
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("last") {
            Ok(LabelColumn::Last)
        } else if let Ok(i) = s.parse() {
            Ok(LabelColumn::Index(i))
        } else if s.is_empty() {
            Err(Error::InvalidParameter("empty label column".into()))
        } else {
            Ok(LabelColumn::Name(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// A header is present iff a feature cell of the first row is not numeric.
    #[default]
    Auto,
    Present,
    Absent,
}

impl Dataset {
    pub fn new(
        feature_names: Vec<String>,
        class_names: Vec<String>,
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Dataset("no samples".into()));
        }
        if features.len() != labels.len() {
            return Err(Error::Dataset("feature and label counts differ".into()));
        }
        let t = feature_names.len();
        if t == 0 {
            return Err(Error::Dataset("no feature columns".into()));
        }
        if let Some(row) = features.iter().position(|r| r.len() != t) {
            return Err(Error::Dataset(format!(
                "sample {row} has {} features, expected {t}",
                features[row].len()
            )));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Dataset("non-finite feature value".into()));
        }
        if class_names.len() < 2 {
            return Err(Error::Dataset("need at least two classes".into()));
        }
        if labels.iter().any(|&l| l >= class_names.len()) {
            return Err(Error::Dataset("label index out of range".into()));
        }
        Ok(Dataset {
            feature_names,
            class_names,
            features,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_frame(&self) -> Result<Frame> {
        Frame::new(self.class_names.iter().map(|c| sanitize_label(c)))
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Reads a comma- or whitespace-separated table. Class names are kept in
    /// order of first appearance.
    pub fn from_reader(reader: impl Read, label: &LabelColumn, header: HeaderMode) -> Result<Self> {
        let mut text = String::new();
        let mut reader = reader;
        reader.read_to_string(&mut text)?;
        let whitespace = !text.contains(',');
        let rows: Vec<(usize, Vec<String>)> = if whitespace {
            text.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| (i + 1, l.split_whitespace().map(str::to_string).collect()))
                .collect()
        } else {
            let mut csv = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .trim(csv::Trim::All)
                .from_reader(text.as_bytes());
            let mut rows = Vec::new();
            for record in csv.records() {
                let record = record.map_err(|e| Error::Parse {
                    line: e.position().map_or(0, |p| p.line() as usize),
                    message: e.to_string(),
                })?;
                let line = record.position().map_or(0, |p| p.line() as usize);
                if record.iter().all(str::is_empty) {
                    continue;
                }
                rows.push((line, record.iter().map(str::to_string).collect()));
            }
            rows
        };
        let (first_line, first) = rows.first().ok_or_else(|| Error::Dataset("empty file".into()))?;
        let width = first.len();
        if width < 2 {
            return Err(Error::Parse {
                line: *first_line,
                message: "need at least one feature column and a label column".into(),
            });
        }
        let has_header = match header {
            HeaderMode::Present => true,
            HeaderMode::Absent => false,
            HeaderMode::Auto => {
                let label_idx = match label {
                    LabelColumn::Index(i) => Some(*i),
                    LabelColumn::Last => Some(width - 1),
                    LabelColumn::Name(_) => None,
                };
                label_idx.is_none()
                    || first
                        .iter()
                        .enumerate()
                        .any(|(i, c)| Some(i) != label_idx && c.parse::<f64>().is_err())
            }
        };
        let label_idx = match label {
            LabelColumn::Index(i) if *i < width => *i,
            LabelColumn::Index(i) => return Err(Error::Dataset(format!("label column {i} beyond {width} columns"))),
            LabelColumn::Last => width - 1,
            LabelColumn::Name(name) => {
                if !has_header {
                    return Err(Error::Dataset(format!(
                        "label column {name:?} named but the file has no header"
                    )));
                }
                first
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| Error::Dataset(format!("no column named {name:?}")))?
            }
        };
        let feature_names: Vec<String> = if has_header {
            first
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != label_idx)
                .map(|(_, c)| c.clone())
                .collect()
        } else {
            (1..width).map(|i| format!("x{i}")).collect()
        };
        let mut class_index: HashMap<String, usize> = HashMap::new();
        let mut class_names = Vec::new();
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (line, row) in rows.iter().skip(usize::from(has_header)) {
            if row.len() != width {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("expected {width} columns, found {}", row.len()),
                });
            }
            let mut values = Vec::with_capacity(width - 1);
            for (col, cell) in row.iter().enumerate() {
                if col == label_idx {
                    continue;
                }
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    line: *line,
                    message: format!("column {}: non-numeric feature {cell:?}", col + 1),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("column {}: non-finite feature {cell:?}", col + 1),
                    });
                }
                values.push(v);
            }
            let name = row[label_idx].clone();
            if name.is_empty() {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("column {}: missing label", label_idx + 1),
                });
            }
            let next = class_names.len();
            let idx = *class_index.entry(name.clone()).or_insert_with(|| {
                class_names.push(name);
                next
            });
            features.push(values);
            labels.push(idx);
        }
        Dataset::new(feature_names, class_names, features, labels)
    }

    pub fn load_csv(path: impl AsRef<Path>, label: &LabelColumn, header: HeaderMode) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_reader(std::io::BufReader::new(file), label, header)
    }

    fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            features: rows.iter().map(|&i| self.features[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

fn sanitize_label(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '-'
            }
        })
        .collect();
    if cleaned.is_empty() {
        "class".into()
    } else {
        cleaned
    }
}

/// Per-class, per-feature normal densities.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianFeatureModel {
    frame: Frame,
    /// `means[class][feature]`
    means: Vec<Vec<f64>>,
    sds: Vec<Vec<f64>>,
}

/// Relative floor on class standard deviations, scaled by each feature's
/// spread over the training data.
pub const SD_FLOOR_FACTOR: f64 = 1e-6;

impl GaussianFeatureModel {
    pub fn fit(train: &Dataset) -> Result<Self> {
        let classes = train.class_count();
        let t = train.feature_count();
        let sizes = train.class_sizes();
        if let Some(c) = sizes.iter().position(|&s| s < 2) {
            return Err(Error::Dataset(format!(
                "class {:?} has {} training samples; at least 2 are needed",
                train.class_names[c], sizes[c]
            )));
        }
        let mut floors = Vec::with_capacity(t);
        for j in 0..t {
            let column: Vec<f64> = train.features.iter().map(|r| r[j]).collect();
            let (_, sd) = mean_sd(&column);
            // a constant feature still needs a positive floor
            floors.push(if sd > 0.0 {
                SD_FLOOR_FACTOR * sd
            } else {
                SD_FLOOR_FACTOR
            });
        }
        let mut means = vec![vec![0.0; t]; classes];
        let mut sds = vec![vec![0.0; t]; classes];
        for c in 0..classes {
            for j in 0..t {
                let values: Vec<f64> = train
                    .features
                    .iter()
                    .zip(&train.labels)
                    .filter(|(_, &l)| l == c)
                    .map(|(r, _)| r[j])
                    .collect();
                let (mu, sd) = mean_sd(&values);
                means[c][j] = mu;
                sds[c][j] = sd.max(floors[j]);
            }
        }
        Ok(GaussianFeatureModel {
            frame: train.class_frame()?,
            means,
            sds,
        })
    }

    pub fn class_frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mean(&self, class: usize, feature: usize) -> f64 {
        self.means[class][feature]
    }

    pub fn sd(&self, class: usize, feature: usize) -> f64 {
        self.sds[class][feature]
    }

    pub fn feature_count(&self) -> usize {
        self.means[0].len()
    }

    /// Class distribution from the normalized densities of one feature value.
    /// Falls back to uniform when every density underflows to zero.
    pub fn feature_pmf(&self, feature: usize, x: f64) -> ProbabilityMassFunction {
        let densities: Vec<f64> = (0..self.means.len())
            .map(|c| {
                let z = (x - self.means[c][feature]) / self.sds[c][feature];
                (-0.5 * z * z).exp() / self.sds[c][feature]
            })
            .collect();
        let total: f64 = densities.iter().sum();
        if total > 0.0 && total.is_finite() {
            ProbabilityMassFunction::from_vec_unchecked(
                self.frame.clone(),
                densities.into_iter().map(|d| d / total).collect(),
            )
        } else {
            ProbabilityMassFunction::uniform(self.frame.clone())
        }
    }

    pub fn sample_pmfs(&self, sample: &[f64]) -> Vec<ProbabilityMassFunction> {
        sample
            .iter()
            .enumerate()
            .map(|(j, &x)| self.feature_pmf(j, x))
            .collect()
    }
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// How the per-feature distributions are fused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fusion {
    /// Dempster's rule, left to right over features.
    Drc,
    /// Feature mean combined with itself by Dempster's rule.
    Murphy,
    /// Pairwise FCPT-PCR, left to right over features.
    FcptPcr,
    /// Feature mean fused with itself by FCPT-PCR.
    FcptPcrMean,
}

impl Fusion {
    pub const ALL: [Fusion; 4] = [Fusion::Drc, Fusion::Murphy, Fusion::FcptPcr, Fusion::FcptPcrMean];

    /// Fused class distribution. Total conflict under Dempster's rule yields
    /// the uniform distribution.
    pub fn fuse(self, pmfs: &[ProbabilityMassFunction]) -> Result<ProbabilityMassFunction> {
        match self {
            Fusion::Drc => match drc_pmf(pmfs) {
                Err(Error::TotalConflict) => Ok(ProbabilityMassFunction::uniform(pmfs[0].frame().clone())),
                other => other,
            },
            Fusion::Murphy => {
                let mean = ProbabilityMassFunction::mean(pmfs)?;
                murphy_pmf_fuse_mean(&mean, pmfs.len())
            }
            Fusion::FcptPcr => fcpt_pcr_sequential(pmfs),
            Fusion::FcptPcrMean => {
                let mean = ProbabilityMassFunction::mean(pmfs)?;
                fcpt_pcr_fuse_mean(&mean, pmfs.len())
            }
        }
    }
}

impl fmt::Display for Fusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fusion::Drc => "DRC",
            Fusion::Murphy => "Murphy",
            Fusion::FcptPcr => "FCPT-PCR",
            Fusion::FcptPcrMean => "FCPT-PCR-mean",
        })
    }
}

impl FromStr for Fusion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "drc" | "dempster" => Ok(Fusion::Drc),
            "murphy" => Ok(Fusion::Murphy),
            "fcpt-pcr" | "fcptpcr" | "pcr" => Ok(Fusion::FcptPcr),
            "fcpt-pcr-mean" | "pcr-mean" => Ok(Fusion::FcptPcrMean),
            _ => Err(Error::InvalidParameter(format!("unknown fusion method {s:?}"))),
        }
    }
}

/// Most probable class of a sample; lowest index wins ties.
pub fn classify(sample: &[f64], model: &GaussianFeatureModel, fusion: Fusion) -> Result<usize> {
    if sample.len() != model.feature_count() {
        return Err(Error::Dataset(format!(
            "sample has {} features, model expects {}",
            sample.len(),
            model.feature_count()
        )));
    }
    Ok(fusion.fuse(&model.sample_pmfs(sample))?.argmax())
}

/// Stratified assignment of samples to `k` folds: each class is shuffled and
/// dealt round-robin, continuing where the previous class stopped.
pub fn stratified_folds(labels: &[usize], classes: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > labels.len() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must lie in 2..={}",
            labels.len()
        )));
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for c in 0..classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        // every training split must keep two samples of each class
        if members.len() < k || members.len() - members.len().div_ceil(k) < 2 {
            return Err(Error::Dataset(format!(
                "class {c} has {} samples, too few for {k}-fold stratification",
                members.len()
            )));
        }
        members.shuffle(rng);
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Seed for repeat `r`, derived from the run seed so that repeats are
/// independent of scheduling.
pub fn repeat_seed(seed: u64, repeat: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repeat as u64);
    rand::RngCore::next_u64(&mut rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValReport {
    pub method: Fusion,
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    pub accuracies: Vec<f64>,
    pub mean: f64,
    pub std_dev: f64,
}

impl CrossValReport {
    fn new(method: Fusion, k: usize, seed: u64, accuracies: Vec<f64>) -> Self {
        let (mean, std_dev) = mean_sd(&accuracies);
        CrossValReport {
            method,
            k,
            repeats: accuracies.len(),
            seed,
            accuracies,
            mean,
            std_dev,
        }
    }

    pub fn csv_header() -> &'static str {
        "method,k,repeats,seed,mean_accuracy_pct,std_pct"
    }

    pub fn csv_row(&self, precision: Precision) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.method,
            self.k,
            self.repeats,
            self.seed,
            precision.format(self.mean * 100.0),
            precision.format(self.std_dev * 100.0)
        )
    }
}

/// Accuracy of each method on one set of folds.
fn evaluate_folds(data: &Dataset, folds: &[Vec<usize>], methods: &[Fusion]) -> Result<Vec<f64>> {
    let mut correct = vec![0usize; methods.len()];
    for (f, test) in folds.iter().enumerate() {
        let train: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != f)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        let model = GaussianFeatureModel::fit(&data.subset(&train))?;
        for &i in test {
            let pmfs = model.sample_pmfs(&data.features[i]);
            for (slot, method) in correct.iter_mut().zip(methods) {
                if method.fuse(&pmfs)?.argmax() == data.labels[i] {
                    *slot += 1;
                }
            }
        }
    }
    Ok(correct.into_iter().map(|c| c as f64 / data.len() as f64).collect())
}

/// Repeated stratified k-fold cross-validation of several fusion methods on
/// the same folds. Repeats run in parallel; results are ordered by repeat.
pub fn cross_validate_many(
    data: &Dataset,
    k: usize,
    repeats: usize,
    methods: &[Fusion],
    seed: u64,
) -> Result<Vec<CrossValReport>> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    if methods.is_empty() {
        return Err(Error::InvalidParameter("no fusion methods selected".into()));
    }
    let per_repeat: Vec<Vec<f64>> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(repeat_seed(seed, r));
            let folds = stratified_folds(&data.labels, data.class_count(), k, &mut rng)?;
            evaluate_folds(data, &folds, methods)
        })
        .collect::<Result<_>>()?;
    Ok(methods
        .iter()
        .enumerate()
        .map(|(m, &method)| CrossValReport::new(method, k, seed, per_repeat.iter().map(|acc| acc[m]).collect()))
        .collect())
}

pub fn cross_validate(data: &Dataset, k: usize, repeats: usize, fusion: Fusion, seed: u64) -> Result<CrossValReport> {
    Ok(cross_validate_many(data, k, repeats, &[fusion], seed)?.remove(0))
}

/// Accuracy when the model is trained and evaluated on the whole dataset.
pub fn resubstitution_accuracy(data: &Dataset, fusion: Fusion) -> Result<f64> {
    let model = GaussianFeatureModel::fit(data)?;
    let mut correct = 0;
    for (sample, &label) in data.features.iter().zip(&data.labels) {
        if classify(sample, &model, fusion)? == label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}
