use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use ben_cli::output::emit;
use ben_cli::reproduce::{self, DatasetOptions};
use ben_cli::table::Table;
use ben_core::classifier::{cross_validate_many, Dataset, Fusion, HeaderMode, LabelColumn};
use ben_core::combination::{ccr, dcr, drc, ecr, murphy_combine, partial_drc, ReliabilityWeight};
use ben_core::evaluation::{
    alpha_grid, correlation_coefficient, evaluate, jousselme_distance, pic, Criterion, DEFAULT_ALPHA_SAMPLES,
};
use ben_core::fusion::{
    ablation_pair, drc_pmf, fcpt_pcr_fuse_mean, fcpt_pcr_multi, fcpt_pcr_sequential, iterate_self_drc,
    iterate_self_fusion, murphy_pmf, murphy_pmf_fuse_mean, AblationTransform, FusionTrajectory,
};
use ben_core::text::{format_mass, format_snapshots, parse_mass, Precision};
use ben_core::transform::fcpt;
use ben_core::{
    export_dot, BeliefEvolutionNetwork, Frame, LayerDistribution, MassFunction, Method, ProbabilityMassFunction,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Exit status for invalid input and other failures.
const EXIT_FAILURE: u8 = 1;
/// Exit status when Dempster's rule meets totally conflicting sources.
const EXIT_TOTAL_CONFLICT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ben",
    version,
    about = "Belief functions, probability transformations and evidence fusion"
)]
struct Cli {
    /// Write the result here instead of stdout (written atomically).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Decimal places in numeric output.
    #[arg(long, global = true, default_value_t = 4)]
    precision: usize,

    /// Print numbers at full precision (shortest round-trip form).
    #[arg(long, global = true)]
    full: bool,

    /// Seed for the randomized commands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transform a mass function into probability distributions.
    Transform {
        mass_file: PathBuf,
        /// Comma-separated methods: betp, pnpl, prapl, cuzzp, dsmp_<eps>, fcp. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// Emit the layer-by-layer FCPT evolution instead of the table.
        #[arg(long)]
        trace: bool,
    },
    /// Combine mass functions.
    Combine {
        #[arg(required = true, num_args = 1..)]
        mass_files: Vec<PathBuf>,
        #[arg(long, value_enum)]
        rule: Rule,
        /// Per-source reliabilities for ECR (comma-separated).
        #[arg(long, value_delimiter = ',')]
        reliability: Vec<f64>,
        /// Per-source weights for ECR (comma-separated).
        #[arg(long, value_delimiter = ',')]
        weight: Vec<f64>,
    },
    /// Fuse probability distributions.
    FusePmf {
        /// A distribution as comma-separated decimals; repeat for several sources.
        #[arg(long = "pmf", allow_hyphen_values = true)]
        pmfs: Vec<String>,
        /// File with one distribution per line (`#` starts a comment).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Element labels (comma-separated); letters by default.
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        #[arg(long, value_enum, default_value_t = FuseMode::Pair)]
        mode: FuseMode,
        /// Fusion steps for the trajectory modes.
        #[arg(long, default_value_t = 15)]
        steps: usize,
        /// Transformation applied after the disjunctive step in pair mode.
        #[arg(long, default_value = "fcp")]
        transform: String,
        /// Treat rows as nonnegative weights: multi and murphy modes average
        /// them and normalize the mean, so rows need not sum to one.
        #[arg(long)]
        raw: bool,
    },
    /// Cross-validate the fusion classifier on a dataset.
    Classify {
        dataset: PathBuf,
        /// Label column: `last`, a 0-based index or a header name.
        #[arg(long, default_value = "last")]
        label: String,
        #[arg(long, value_enum, default_value_t = HeaderArg::Auto)]
        header: HeaderArg,
        /// Fold counts (comma-separated).
        #[arg(long, value_delimiter = ',', default_value = "5")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        repeats: usize,
        /// Comma-separated fusion methods: drc, murphy, fcpt-pcr, fcpt-pcr-mean. Defaults to all.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
    },
    /// Export the belief evolution network of a mass function as Graphviz DOT.
    BenExport {
        mass_file: PathBuf,
        /// Annotate each node with its full-causality value.
        #[arg(long)]
        fc: bool,
    },
    /// Score transformations with PIC, distance, correlation and the Bi-Criteria joint score.
    Evaluate {
        mass_file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// Number of evenly spaced α samples in [0, 1].
        #[arg(long, default_value_t = DEFAULT_ALPHA_SAMPLES)]
        alphas: usize,
        #[arg(long, value_enum, default_value_t = CriterionArg::Pic)]
        criterion: CriterionArg,
    },
    /// Regenerate the reference tables and figure series into a directory.
    Reproduce {
        /// table2..table8, fig7..fig9, or `all`.
        #[arg(required = true, num_args = 1..)]
        targets: Vec<String>,
        #[arg(long, default_value = "artifacts")]
        out_dir: PathBuf,
        /// Iris dataset (label in the last column) for table8.
        #[arg(long)]
        iris: Option<PathBuf>,
        /// Seeds dataset (label in the last column) for table8.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        repeats: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule {
    Ccr,
    Drc,
    Dcr,
    Ecr,
    Murphy,
    /// First file is the layer distribution, the second the mass function.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FuseMode {
    /// FCPT-PCR of exactly two sources.
    Pair,
    /// Average of all sources fused with itself once per source.
    Multi,
    /// Left-to-right pairwise FCPT-PCR.
    Sequential,
    Murphy,
    Drc,
    /// Repeated FCPT-PCR self-fusion of one source.
    Trajectory,
    /// Repeated Dempster self-fusion of one source.
    DrcTrajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeaderArg {
    Auto,
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Pic,
    Entropy,
}

struct Ctx {
    output: Option<PathBuf>,
    format: Format,
    precision: Precision,
    seed: u64,
}

impl Ctx {
    fn num(&self, v: f64) -> String {
        self.precision.format(v)
    }

    fn emit_table(&self, table: &Table) -> Result<()> {
        let text = match self.format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(),
        };
        emit(self.output.as_deref(), &text)
    }

    fn emit_mass(&self, m: &MassFunction) -> Result<()> {
        let text = match self.format {
            Format::Csv => format_mass(m, self.precision),
            Format::Json => {
                let masses: serde_json::Map<String, serde_json::Value> = m
                    .focal_elements()
                    .map(|(s, v)| (m.frame().format_subset(s), json!(v)))
                    .collect();
                let mut text = serde_json::to_string_pretty(&json!({
                    "frame": m.frame().labels(),
                    "masses": masses,
                }))?;
                text.push('\n');
                text
            }
        };
        emit(self.output.as_deref(), &text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err
                .chain()
                .any(|e| matches!(e.downcast_ref(), Some(ben_core::Error::TotalConflict)))
            {
                eprintln!("error: total conflict: Dempster's rule is undefined for these sources");
                return ExitCode::from(EXIT_TOTAL_CONFLICT);
            }
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        output: cli.output,
        format: cli.format,
        precision: if cli.full {
            Precision::Shortest
        } else {
            Precision::Decimals(cli.precision)
        },
        seed: cli.seed,
    };
    match cli.command {
        Command::Transform {
            mass_file,
            methods,
            trace,
        } => cmd_transform(&ctx, &mass_file, &methods, trace),
        Command::Combine {
            mass_files,
            rule,
            reliability,
            weight,
        } => cmd_combine(&ctx, &mass_files, rule, &reliability, &weight),
        Command::FusePmf {
            pmfs,
            file,
            labels,
            mode,
            steps,
            transform,
            raw,
        } => cmd_fuse_pmf(&ctx, &pmfs, file.as_deref(), &labels, mode, steps, &transform, raw),
        Command::Classify {
            dataset,
            label,
            header,
            k,
            repeats,
            methods,
        } => cmd_classify(&ctx, &dataset, &label, header, &k, repeats, &methods),
        Command::BenExport { mass_file, fc } => cmd_ben_export(&ctx, &mass_file, fc),
        Command::Evaluate {
            mass_file,
            methods,
            alphas,
            criterion,
        } => cmd_evaluate(&ctx, &mass_file, &methods, alphas, criterion),
        Command::Reproduce {
            targets,
            out_dir,
            iris,
            seeds,
            repeats,
        } => cmd_reproduce(&ctx, &targets, &out_dir, iris, seeds, repeats),
    }
}

fn read_mass(path: &Path) -> Result<MassFunction> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_mass(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>> {
    if names.is_empty() {
        return Ok(Method::classical_with_fcp());
    }
    names.iter().map(|n| Ok(n.parse::<Method>()?)).collect()
}

fn cmd_transform(ctx: &Ctx, path: &Path, methods: &[String], trace: bool) -> Result<()> {
    let m = read_mass(path)?;
    if trace {
        let result = fcpt(&m)?;
        return emit(
            ctx.output.as_deref(),
            &format_snapshots(m.frame(), &result.trace, ctx.precision),
        );
    }
    let mut header = vec!["method".to_string()];
    header.extend(m.frame().labels().iter().cloned());
    header.extend(["PIC", "d", "r"].map(String::from));
    let mut table = Table::new(header);
    for method in parse_methods(methods)? {
        let p = method.apply(&m)?;
        let lifted = p.to_mass();
        let mut row = vec![method.to_string()];
        row.extend(p.probs().iter().map(|v| ctx.num(*v)));
        row.push(ctx.num(pic(&p)?));
        row.push(ctx.num(jousselme_distance(&m, &lifted)?));
        row.push(ctx.num(correlation_coefficient(&m, &lifted)?));
        table.push(row);
    }
    ctx.emit_table(&table)
}

fn cmd_combine(ctx: &Ctx, paths: &[PathBuf], rule: Rule, reliability: &[f64], weight: &[f64]) -> Result<()> {
    let masses = paths.iter().map(|p| read_mass(p)).collect::<Result<Vec<_>>>()?;
    ensure!(masses.len() >= 2, "combination needs at least two mass files");
    let fold = |f: fn(&MassFunction, &MassFunction) -> ben_core::Result<MassFunction>| -> Result<MassFunction> {
        let mut acc = masses[0].clone();
        for m in &masses[1..] {
            acc = f(&acc, m)?;
        }
        Ok(acc)
    };
    let result = match rule {
        Rule::Ccr => fold(ccr)?,
        Rule::Drc => fold(drc)?,
        Rule::Dcr => fold(dcr)?,
        Rule::Murphy => murphy_combine(&masses)?,
        Rule::Ecr => {
            ensure!(masses.len() == 2, "ECR combines exactly two sources");
            let pick = |values: &[f64], i: usize| values.get(i).copied().unwrap_or(1.0);
            let rw1 = ReliabilityWeight::new(pick(reliability, 0), pick(weight, 0))?;
            let rw2 = ReliabilityWeight::new(pick(reliability, 1), pick(weight, 1))?;
            ecr(&masses[0], &masses[1], rw1, rw2)?
        }
        Rule::Partial => {
            ensure!(
                masses.len() == 2,
                "partial combination takes a layer file and a mass file"
            );
            let layer_mass = &masses[0];
            let layer = LayerDistribution::new(layer_mass.frame(), layer_mass.focal_elements())
                .context("the first file must hold one layer: focal sets of a single cardinality")?;
            partial_drc(&layer, &masses[1])?
        }
    };
    ctx.emit_mass(&result)
}

fn read_pmf_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuse_pmf(
    ctx: &Ctx,
    args: &[String],
    file: Option<&Path>,
    labels: &[String],
    mode: FuseMode,
    steps: usize,
    transform: &str,
    raw: bool,
) -> Result<()> {
    let mut lines = args.to_vec();
    if let Some(path) = file {
        lines.extend(read_pmf_lines(path)?);
    }
    ensure!(!lines.is_empty(), "no distributions given; use --pmf or --file");
    let width = lines[0].split(',').count();
    let frame = if labels.is_empty() {
        Frame::letters(width)?
    } else {
        Frame::new(labels)?
    };
    for (i, l) in lines.iter().enumerate() {
        let count = l.split(',').count();
        ensure!(
            count == frame.size(),
            "distribution {} has {count} entries but the frame has {} elements",
            i + 1,
            frame.size()
        );
    }
    if raw {
        ensure!(
            matches!(mode, FuseMode::Multi | FuseMode::Murphy),
            "--raw applies to the multi and murphy modes only"
        );
        let rows = lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .with_context(|| format!("distribution {}", i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = ProbabilityMassFunction::mean_of_weights(frame.clone(), &rows)?;
        let (name, fused) = if mode == FuseMode::Multi {
            ("FCPT-PCR", fcpt_pcr_fuse_mean(&mean, rows.len())?)
        } else {
            ("Murphy", murphy_pmf_fuse_mean(&mean, rows.len())?)
        };
        return ctx.emit_table(&pmf_table(&frame, name, &fused, ctx));
    }
    let pmfs = lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            ProbabilityMassFunction::parse(frame.clone(), l).with_context(|| format!("distribution {}", i + 1))
        })
        .collect::<Result<Vec<_>>>()?;

    let single = |name: &str| -> Result<&ProbabilityMassFunction> {
        ensure!(pmfs.len() == 1, "{name} mode takes exactly one distribution");
        Ok(&pmfs[0])
    };
    let trajectory = |t: FusionTrajectory| -> Result<()> {
        let text = match ctx.format {
            Format::Csv => t.to_csv(ctx.precision),
            Format::Json => {
                let mut header = vec!["step".to_string()];
                header.extend(frame.labels().iter().cloned());
                let mut table = Table::new(header);
                for (step, p) in t.points.iter().enumerate() {
                    let mut row = vec![step.to_string()];
                    row.extend(p.probs().iter().map(|v| ctx.num(*v)));
                    table.push(row);
                }
                table.to_json()
            }
        };
        emit(ctx.output.as_deref(), &text)
    };

    let (name, fused) = match mode {
        FuseMode::Pair => {
            ensure!(pmfs.len() == 2, "pair mode takes exactly two distributions");
            let t: AblationTransform = transform.parse()?;
            let name = if t == AblationTransform::Fcp {
                "FCPT-PCR".to_string()
            } else {
                format!("DCR+{t}")
            };
            (name, ablation_pair(&pmfs[0], &pmfs[1], t)?)
        }
        FuseMode::Multi => ("FCPT-PCR".into(), fcpt_pcr_multi(&pmfs)?),
        FuseMode::Sequential => ("FCPT-PCR-sequential".into(), fcpt_pcr_sequential(&pmfs)?),
        FuseMode::Murphy => ("Murphy".into(), murphy_pmf(&pmfs)?),
        FuseMode::Drc => ("DRC".into(), drc_pmf(&pmfs)?),
        FuseMode::Trajectory => return trajectory(iterate_self_fusion(single("trajectory")?, steps)?),
        FuseMode::DrcTrajectory => return trajectory(iterate_self_drc(single("drc-trajectory")?, steps)?),
    };
    ctx.emit_table(&pmf_table(&frame, &name, &fused, ctx))
}

fn pmf_table(frame: &Frame, name: &str, p: &ProbabilityMassFunction, ctx: &Ctx) -> Table {
    let mut header = vec!["method".to_string()];
    header.extend(frame.labels().iter().cloned());
    let mut table = Table::new(header);
    let mut row = vec![name.to_string()];
    row.extend(p.probs().iter().map(|v| ctx.num(*v)));
    table.push(row);
    table
}

fn cmd_classify(
    ctx: &Ctx,
    path: &Path,
    label: &str,
    header: HeaderArg,
    ks: &[usize],
    repeats: usize,
    methods: &[String],
) -> Result<()> {
    let label: LabelColumn = label.parse()?;
    let header = match header {
        HeaderArg::Auto => HeaderMode::Auto,
        HeaderArg::Yes => HeaderMode::Present,
        HeaderArg::No => HeaderMode::Absent,
    };
    ensure!(path.exists(), "dataset file {} not found", path.display());
    let data = Dataset::load_csv(path, &label, header).with_context(|| format!("loading {}", path.display()))?;
    let fusions = if methods.is_empty() {
        Fusion::ALL.to_vec()
    } else {
        methods
            .iter()
            .map(|m| Ok(m.parse::<Fusion>()?))
            .collect::<Result<Vec<_>>>()?
    };
    let mut table = Table::new(["method", "k", "repeats", "seed", "mean_accuracy_pct", "std_pct"]);
    for &k in ks {
        for report in cross_validate_many(&data, k, repeats, &fusions, ctx.seed)? {
            table.push([
                report.method.to_string(),
                report.k.to_string(),
                report.repeats.to_string(),
                report.seed.to_string(),
                ctx.num(report.mean * 100.0),
                ctx.num(report.std_dev * 100.0),
            ]);
        }
    }
    ctx.emit_table(&table)
}

fn cmd_ben_export(ctx: &Ctx, path: &Path, with_fc: bool) -> Result<()> {
    let m = read_mass(path)?;
    let ben = BeliefEvolutionNetwork::build(m.frame())?;
    let annotate = |s| format!("FC={}", ctx.num(m.fc(s)));
    let dot = export_dot(&ben, &m, if with_fc { Some(&annotate) } else { None })?;
    let text = match ctx.format {
        Format::Csv => dot,
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&json!({ "dot": dot }))?;
            t.push('\n');
            t
        }
    };
    emit(ctx.output.as_deref(), &text)
}

fn cmd_evaluate(ctx: &Ctx, path: &Path, methods: &[String], alphas: usize, criterion: CriterionArg) -> Result<()> {
    let m = read_mass(path)?;
    ensure!(alphas >= 1, "at least one α sample is required");
    let pmfs = parse_methods(methods)?
        .into_iter()
        .map(|method| Ok((method.to_string(), method.apply(&m)?)))
        .collect::<Result<Vec<_>>>()?;
    let criterion = match criterion {
        CriterionArg::Pic => Criterion::Pic,
        CriterionArg::Entropy => Criterion::Entropy,
    };
    let report = evaluate(&m, &pmfs, &alpha_grid(alphas), criterion)?;
    let index_name = match criterion {
        Criterion::Pic => "PIC'",
        Criterion::Entropy => "E_N'",
    };
    let mut header: Vec<String> = ["method", "PIC", "d", "r", index_name, "d'"].map(String::from).to_vec();
    header.extend(
        report
            .alphas
            .iter()
            .map(|a| format!("C@{}", Precision::Decimals(1).format(*a))),
    );
    header.push("mean".into());
    let mut table = Table::new(header);
    for s in &report.scores {
        let first = match criterion {
            Criterion::Pic => s.pic_index,
            Criterion::Entropy => s.entropy_index,
        };
        let mut row = vec![s.method.clone()];
        for v in [s.pic, s.distance, s.correlation, first, s.distance_index] {
            row.push(ctx.num(v));
        }
        row.extend(s.joint.iter().map(|v| ctx.num(*v)));
        row.push(ctx.num(s.mean_joint));
        table.push(row);
    }
    ctx.emit_table(&table)
}

fn cmd_reproduce(
    ctx: &Ctx,
    names: &[String],
    out_dir: &Path,
    iris: Option<PathBuf>,
    seeds: Option<PathBuf>,
    repeats: usize,
) -> Result<()> {
    if ctx.output.is_some() {
        bail!("reproduce writes a bundle; use --out-dir instead of --output");
    }
    let datasets = DatasetOptions {
        iris,
        seeds,
        repeats,
        seed: ctx.seed,
    };
    for path in reproduce::run(names, out_dir, ctx.precision, &datasets, ctx.format == Format::Csv)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
