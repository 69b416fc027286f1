//! Regenerates every worked table and figure series as CSV artifacts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use ben_core::classifier::{cross_validate_many, Dataset, Fusion, HeaderMode, LabelColumn};
use ben_core::evaluation::{
    alpha_grid, correlation_coefficient, evaluate, pic, Criterion, EvaluationReport, DEFAULT_ALPHA_SAMPLES,
};
use ben_core::fusion::{
    ablation_pair, drc_pmf, fcpt_pcr_fuse_mean, iterate_self_drc, iterate_self_fusion, murphy_pmf_fuse_mean,
    AblationTransform,
};
use ben_core::scenarios;
use ben_core::text::Precision;
use ben_core::{MassFunction, Method, ProbabilityMassFunction};

use crate::output::write_bundle;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Table2,
    Table3,
    Table4,
    Table5,
    Table6,
    Table7,
    Table8,
    Fig7,
    Fig8,
    Fig9,
}

impl Target {
    pub const ALL: [Target; 10] = [
        Target::Table2,
        Target::Table3,
        Target::Table4,
        Target::Table5,
        Target::Table6,
        Target::Table7,
        Target::Table8,
        Target::Fig7,
        Target::Fig8,
        Target::Fig9,
    ];

    pub fn file_name(self) -> String {
        format!("{self}.csv")
    }

    pub fn needs_datasets(self) -> bool {
        self == Target::Table8
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Table2 => "table2",
            Target::Table3 => "table3",
            Target::Table4 => "table4",
            Target::Table5 => "table5",
            Target::Table6 => "table6",
            Target::Table7 => "table7",
            Target::Table8 => "table8",
            Target::Fig7 => "fig7",
            Target::Fig8 => "fig8",
            Target::Fig9 => "fig9",
        })
    }
}

impl FromStr for Target {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Target::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .with_context(|| format!("unknown target {s:?}; expected one of table2..table8, fig7..fig9 or all"))
    }
}

/// Inputs for the classification table.
#[derive(Debug, Clone)]
pub struct DatasetOptions {
    pub iris: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        DatasetOptions {
            iris: None,
            seeds: None,
            repeats: 1000,
            seed: 1,
        }
    }
}

pub const TABLE8_FOLDS: [usize; 3] = [2, 5, 10];

const DATASET_HELP: &str = "table8 needs at least one dataset file. Download the UCI \"Iris\" and \"seeds\" \
datasets yourself (https://archive.ics.uci.edu/dataset/53/iris, https://archive.ics.uci.edu/dataset/236/seeds) \
and pass them with --iris <csv> and/or --seeds <txt>; the label is read from the last column.";

pub fn generate(target: Target, precision: Precision, datasets: &DatasetOptions) -> Result<Table> {
    let fmt = |v: f64| precision.format(v);
    match target {
        Target::Table2 => table2(&fmt),
        Target::Table3 => Ok(table3(&fmt)?),
        Target::Table4 => sweep(&fmt, |m, p| correlation_coefficient(m, &p.to_mass())),
        Target::Table5 => sweep(&fmt, |_, p| pic(p)),
        Target::Table6 => table6(&fmt),
        Target::Table7 => table7(&fmt),
        Target::Table8 => table8(&fmt, datasets),
        Target::Fig7 => fig7(&fmt),
        Target::Fig8 => trajectories(&fmt, |p| iterate_self_drc(p, TRAJECTORY_STEPS)),
        Target::Fig9 => trajectories(&fmt, |p| iterate_self_fusion(p, TRAJECTORY_STEPS)),
    }
}

/// Generates every requested target. `table8` is skipped (with a note) when
/// it was only implied by `all` and no dataset was supplied.
pub fn generate_bundle(
    targets: &[Target],
    explicit: bool,
    precision: Precision,
    datasets: &DatasetOptions,
    csv: bool,
) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    for &target in targets {
        if target.needs_datasets() && !explicit && datasets.iris.is_none() && datasets.seeds.is_none() {
            eprintln!("note: skipping table8 (no --iris/--seeds dataset supplied)");
            continue;
        }
        let table = generate(target, precision, datasets).with_context(|| format!("generating {target}"))?;
        let (name, body) = if csv {
            (target.file_name(), table.to_csv())
        } else {
            (format!("{target}.json"), table.to_json())
        };
        files.push((name, body));
    }
    Ok(files)
}

fn label_of(pmf: &ProbabilityMassFunction) -> String {
    pmf.frame().label(pmf.argmax()).to_string()
}

fn table2(fmt: &dyn Fn(f64) -> String) -> Result<Table> {
    let m = scenarios::three_element_bpa();
    // the row printed as DSmP_0.1 is the ε = 0.5 result
    let methods = [
        Method::CuzzP,
        Method::PnPl,
        Method::BetP,
        Method::DSmP(0.5),
        Method::PraPl,
        Method::Fcp,
    ];
    let mut table = Table::new(["method", "A", "B", "C", "result", "PIC"]);
    for method in methods {
        let p = method.apply(&m)?;
        let mut row = vec![method.to_string()];
        row.extend(p.probs().iter().map(|v| fmt(*v)));
        row.push(label_of(&p));
        row.push(fmt(pic(&p)?));
        table.push(row);
    }
    Ok(table)
}

pub fn table3_report() -> Result<EvaluationReport> {
    let m = scenarios::four_element_bpa();
    let methods = Method::classical_with_fcp()
        .into_iter()
        .map(|method| Ok((method.to_string(), method.apply(&m)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(evaluate(
        &m,
        &methods,
        &alpha_grid(DEFAULT_ALPHA_SAMPLES),
        Criterion::Pic,
    )?)
}

fn table3(fmt: &dyn Fn(f64) -> String) -> Result<Table> {
    let report = table3_report()?;
    let mut table = Table::new(["method", "A", "B", "C", "D", "PIC", "PIC'", "d", "d'", "mean_C_joint"]);
    for s in &report.scores {
        let mut row = vec![s.method.clone()];
        row.extend(s.pmf.probs().iter().map(|v| fmt(*v)));
        for v in [s.pic, s.pic_index, s.distance, s.distance_index, s.mean_joint] {
            row.push(fmt(v));
        }
        table.push(row);
    }
    Ok(table)
}

fn fig7(fmt: &dyn Fn(f64) -> String) -> Result<Table> {
    let report = table3_report()?;
    let mut header = vec!["alpha".to_string()];
    header.extend(report.scores.iter().map(|s| s.method.clone()));
    let mut table = Table::new(header);
    for (i, a) in report.alphas.iter().enumerate() {
        let mut row = vec![Precision::Decimals(1).format(*a)];
        row.extend(report.scores.iter().map(|s| fmt(s.joint[i])));
        table.push(row);
    }
    let mut row = vec!["mean".to_string()];
    row.extend(report.scores.iter().map(|s| fmt(s.mean_joint)));
    table.push(row);
    Ok(table)
}

pub const SWEEP_METHODS: [Method; 4] = [Method::Fcp, Method::BetP, Method::CuzzP, Method::PnPl];

fn sweep(
    fmt: &dyn Fn(f64) -> String,
    metric: impl Fn(&MassFunction, &ProbabilityMassFunction) -> ben_core::Result<f64>,
) -> Result<Table> {
    let sizes = 1..=scenarios::SWEEP_FRAME_SIZE;
    let mut header = vec!["method".to_string()];
    header.extend(sizes.clone().map(|k| format!("|A|={k}")));
    let mut table = Table::new(header);
    let bpas = sizes.map(scenarios::sweep_bpa).collect::<ben_core::Result<Vec<_>>>()?;
    for method in SWEEP_METHODS {
        let mut row = vec![method.to_string()];
        for m in &bpas {
            row.push(fmt(metric(m, &method.apply(m)?)?));
        }
        table.push(row);
    }
    Ok(table)
}

/// Column order of the printed ablation table.
pub const ABLATION_COLUMNS: [AblationTransform; 5] = [
    AblationTransform::Fcp,
    AblationTransform::DSmP0,
    AblationTransform::BetP,
    AblationTransform::PnPl,
    AblationTransform::CuzzP,
];

fn table6(fmt: &dyn Fn(f64) -> String) -> Result<Table> {
    let (p1, p2) = scenarios::conflicting_pair();
    let same = scenarios::self_fusion_pmf();
    let mut header = vec!["case".to_string(), "element".to_string()];
    header.extend(ABLATION_COLUMNS.iter().map(|t| t.to_string()));
    header.push("DRC".into());
    let mut table = Table::new(header);
    for (case, a, b) in [("P1", &p1, &p2), ("P2", &same, &same)] {
        let mut columns = ABLATION_COLUMNS
            .iter()
            .map(|&t| ablation_pair(a, b, t))
            .collect::<ben_core::Result<Vec<_>>>()?;
        columns.push(drc_pmf(&[a.clone(), b.clone()])?);
        for (i, label) in a.frame().labels().iter().enumerate() {
            let mut row = vec![case.to_string(), label.clone()];
            row.extend(columns.iter().map(|p| fmt(p.prob(i))));
            table.push(row);
        }
    }
    Ok(table)
}

fn table7(fmt: &dyn Fn(f64) -> String) -> Result<Table> {
    let rows = scenarios::multi_source_rows();
    let mean = scenarios::multi_source_mean();
    let mut table = Table::new(["source", "A", "B", "C", "D"]);
    for (i, r) in rows.iter().enumerate() {
        let mut row = vec![format!("P{}", i + 1)];
        row.extend(r.iter().map(|v| fmt(*v)));
        table.push(row);
    }
    for (name, fused) in [
        ("Murphy", murphy_pmf_fuse_mean(&mean, rows.len())?),
        ("FCPT-PCR", fcpt_pcr_fuse_mean(&mean, rows.len())?),
    ] {
        let mut row = vec![name.to_string()];
        row.extend(fused.probs().iter().map(|v| fmt(*v)));
        table.push(row);
    }
    Ok(table)
}

pub const TRAJECTORY_STEPS: usize = 15;

/// `p(A)` after each fusion step for `P = {p, (1−p)/2, (1−p)/2}`,
/// `p = 0.34, 0.35, …, 1.00`.
pub fn trajectory_grid() -> Vec<f64> {
    (34..=100).map(|i| i as f64 / 100.0).collect()
}

fn trajectories(
    fmt: &dyn Fn(f64) -> String,
    run: impl Fn(&ProbabilityMassFunction) -> ben_core::Result<ben_core::fusion::FusionTrajectory>,
) -> Result<Table> {
    let mut header = vec!["p".to_string()];
    header.extend((0..=TRAJECTORY_STEPS).map(|s| format!("step{s}")));
    let mut table = Table::new(header);
    for p in trajectory_grid() {
        let traj = run(&scenarios::favoured_pmf(p)?)?;
        let mut row = vec![Precision::Decimals(2).format(p)];
        row.extend(traj.series(0).into_iter().map(fmt));
        table.push(row);
    }
    Ok(table)
}

/// Loads a dataset whose label sits in the last column, whatever the delimiter.
pub fn load_dataset(path: &std::path::Path) -> Result<Dataset> {
    if !path.exists() {
        bail!("dataset file {} not found. {DATASET_HELP}", path.display());
    }
    Dataset::load_csv(path, &LabelColumn::Last, HeaderMode::Auto).with_context(|| format!("loading {}", path.display()))
}

pub const TABLE8_METHODS: [Fusion; 4] = [Fusion::Murphy, Fusion::Drc, Fusion::FcptPcr, Fusion::FcptPcrMean];

fn table8(fmt: &dyn Fn(f64) -> String, opts: &DatasetOptions) -> Result<Table> {
    let named: Vec<(&str, &PathBuf)> = [("iris", opts.iris.as_ref()), ("seeds", opts.seeds.as_ref())]
        .into_iter()
        .filter_map(|(n, p)| p.map(|p| (n, p)))
        .collect();
    if named.is_empty() {
        bail!("{DATASET_HELP}");
    }
    let mut header = vec!["dataset".to_string(), "method".to_string()];
    header.extend(TABLE8_FOLDS.iter().map(|k| format!("k={k}")));
    let mut table = Table::new(header);
    for (name, path) in named {
        let data = load_dataset(path)?;
        let mut by_k = Vec::new();
        for k in TABLE8_FOLDS {
            by_k.push(cross_validate_many(&data, k, opts.repeats, &TABLE8_METHODS, opts.seed)?);
        }
        for (m, method) in TABLE8_METHODS.iter().enumerate() {
            let mut row = vec![name.to_string(), method.to_string()];
            row.extend(by_k.iter().map(|reports| fmt(reports[m].mean * 100.0)));
            table.push(row);
        }
    }
    Ok(table)
}

/// Resolves target names (`all` selects every target), generates the bundle
/// and moves it into `out_dir`. Returns the written paths.
pub fn run(
    names: &[String],
    out_dir: &Path,
    precision: Precision,
    datasets: &DatasetOptions,
    csv: bool,
) -> Result<Vec<PathBuf>> {
    let (targets, explicit) = if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        (Target::ALL.to_vec(), false)
    } else {
        (names.iter().map(|n| n.parse()).collect::<Result<Vec<Target>>>()?, true)
    };
    let files = generate_bundle(&targets, explicit, precision, datasets, csv)?;
    write_bundle(out_dir, &files)?;
    Ok(files.iter().map(|(name, _)| out_dir.join(name)).collect())
}
