//! Command-line front end: every computation of the library as a
//! subcommand, with CSV or JSON output.
//!
//! Exit codes: 0 success, 2 input error, 3 count overflow (unless
//! `--allow-overflow`), 4 analytic precondition failure (divergent series,
//! missing trace class, degenerate problem).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spectract::moments::{cube_moment, lp_block_size, MomentEstimate, MomentMode};
use spectract::rkhs::{
    linfty_tail_bound, ordered_basis_sq_norms, qmc_worst_case_error, CubatureRule, KernelKind,
    KernelSpec,
};
use spectract::weights::{EmbeddingConstants, GeneratorWeights};
use spectract::{
    avg_tail_error, classify_antisymmetric, classify_scaled, classify_symmetric,
    classify_unscaled, enumerate_top, info_complexity_capped, initial_error, minimal_error,
    optimal_algorithm_plan, ComplexityError, EnumError, ErrorCriterion, GroupKind, ProblemSpec,
    ScalingFamily, Spectrum, SymmetryGrowth, SymmetrySpec, Verdict,
};

// -- error / exit-code plumbing ----------------------------------------------

enum CliError {
    /// Malformed input: bad JSON, bad flag combinations, bad files.
    Input(String),
    /// A count exceeded the visited-node cap.
    Overflow,
    /// An analytic precondition failed (divergence, trace class, ...).
    Precondition(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Overflow => 3,
            CliError::Precondition(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Input(m) => format!("input error: {m}"),
            CliError::Overflow => "count overflow: pass --allow-overflow to keep going".into(),
            CliError::Precondition(m) => format!("precondition failed: {m}"),
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn complexity_err(e: ComplexityError) -> CliError {
    match e {
        ComplexityError::Overflow(EnumError::Overflow) => CliError::Overflow,
        ComplexityError::InvalidThreshold(_) | ComplexityError::Overflow(_) => {
            CliError::Input(e.to_string())
        }
        ComplexityError::DegenerateProblem | ComplexityError::NotTraceClass => {
            CliError::Precondition(e.to_string())
        }
    }
}

// -- output formatting ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Floats get 12 significant digits; integers print plain.
fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

struct Output {
    format: Format,
    out: Option<std::path::PathBuf>,
}

impl Output {
    fn write_csv_or_json<T: Serialize>(
        &self,
        header: &str,
        csv_rows: Vec<String>,
        json_rows: &[T],
    ) -> Result<(), CliError> {
        let mut text = String::new();
        match self.format {
            Format::Csv => {
                writeln!(text, "{header}").unwrap();
                for row in csv_rows {
                    writeln!(text, "{row}").unwrap();
                }
            }
            Format::Json => {
                text = serde_json::to_string_pretty(json_rows).map_err(input_err)?;
                text.push('\n');
            }
        }
        match &self.out {
            Some(path) => fs::write(path, text).map_err(input_err),
            None => {
                std::io::stdout().write_all(text.as_bytes()).map_err(input_err)?;
                Ok(())
            }
        }
    }
}

// -- shared argument groups ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Abs,
    Norm,
}

impl From<CriterionArg> for ErrorCriterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Abs => ErrorCriterion::Absolute,
            CriterionArg::Norm => ErrorCriterion::Normalized,
        }
    }
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Problem JSON file: {"spectrum": .., "d": .., "scaling": ..,
    /// "symmetry": .., "criterion": ..}
    #[arg(long, value_name = "FILE")]
    spec: Option<std::path::PathBuf>,
    /// Inline spectrum JSON, e.g. '{"family":"geometric","params":{"c":0.5,"q":0.5}}'
    #[arg(long, value_name = "JSON")]
    spectrum: Option<String>,
    /// Symmetry mode: entire, full-sym, full-antisym, or groups:FILE with a
    /// symmetry JSON
    #[arg(long, default_value = "entire")]
    symmetry: String,
    /// Error criterion (defaults to the spec file's, else absolute)
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    /// Scaling: a number for a constant factor, or a scaling-family JSON
    /// such as '{"family":"geometric-scale","params":{"r":0.25}}'
    #[arg(long, value_name = "JSON")]
    scaling: Option<String>,
}

enum ScalingArg {
    Fixed(f64),
    Family(ScalingFamily),
}

struct ProblemInput {
    spectrum: Spectrum,
    criterion: ErrorCriterion,
    scaling: ScalingArg,
    symmetry_mode: SymmetryMode,
    /// Dimension from the spec file, if one was given.
    file_d: Option<usize>,
}

enum SymmetryMode {
    Entire,
    FullSym,
    FullAntisym,
    Fixed(SymmetrySpec),
}

impl SymmetryMode {
    fn at_dimension(&self, d: usize) -> Result<SymmetrySpec, CliError> {
        match self {
            SymmetryMode::Entire => SymmetrySpec::entire(d).map_err(input_err),
            SymmetryMode::FullSym => SymmetrySpec::full_sym(d).map_err(input_err),
            SymmetryMode::FullAntisym => SymmetrySpec::full_antisym(d).map_err(input_err),
            SymmetryMode::Fixed(s) => {
                if s.d() != d {
                    Err(CliError::Input(format!(
                        "symmetry file is for dimension {}, requested {d}",
                        s.d()
                    )))
                } else {
                    Ok(s.clone())
                }
            }
        }
    }
}

impl ProblemArgs {
    fn load(&self) -> Result<ProblemInput, CliError> {
        let mut file_problem: Option<ProblemSpec> = None;
        if let Some(path) = &self.spec {
            let text = fs::read_to_string(path).map_err(input_err)?;
            file_problem = Some(serde_json::from_str(&text).map_err(input_err)?);
        }
        let spectrum = match (&self.spectrum, &file_problem) {
            (Some(json), _) => serde_json::from_str(json).map_err(input_err)?,
            (None, Some(p)) => p.spectrum().clone(),
            (None, None) => {
                return Err(CliError::Input("need --spectrum or --spec".into()));
            }
        };
        let symmetry_mode = match self.symmetry.as_str() {
            "entire" => match &file_problem {
                Some(p) if !p.symmetry().groups().is_empty() => {
                    SymmetryMode::Fixed(p.symmetry().clone())
                }
                _ => SymmetryMode::Entire,
            },
            "full-sym" => SymmetryMode::FullSym,
            "full-antisym" => SymmetryMode::FullAntisym,
            other => {
                let path = other
                    .strip_prefix("groups:")
                    .ok_or_else(|| CliError::Input(format!("unknown symmetry mode '{other}'")))?;
                let text = fs::read_to_string(path).map_err(input_err)?;
                SymmetryMode::Fixed(serde_json::from_str(&text).map_err(input_err)?)
            }
        };
        let scaling = match &self.scaling {
            None => match &file_problem {
                Some(p) => ScalingArg::Fixed(p.scaling()),
                None => ScalingArg::Fixed(1.0),
            },
            Some(text) => {
                if let Ok(v) = text.parse::<f64>() {
                    ScalingArg::Fixed(v)
                } else {
                    ScalingArg::Family(serde_json::from_str(text).map_err(input_err)?)
                }
            }
        };
        // an explicit --criterion flag wins; otherwise the file's
        let criterion = match (self.criterion, &file_problem) {
            (Some(c), _) => c.into(),
            (None, Some(p)) => p.criterion(),
            (None, None) => ErrorCriterion::Absolute,
        };
        Ok(ProblemInput {
            spectrum,
            criterion,
            scaling,
            symmetry_mode,
            file_d: file_problem.as_ref().map(|p| p.d()),
        })
    }
}

impl ProblemInput {
    fn problem_at(&self, d: usize) -> Result<ProblemSpec, CliError> {
        let scaling = match &self.scaling {
            ScalingArg::Fixed(s) => *s,
            ScalingArg::Family(f) => f.scaling_at(self.spectrum.lambda1(), d),
        };
        ProblemSpec::new(
            self.spectrum.clone(),
            d,
            scaling,
            self.symmetry_mode.at_dimension(d)?,
            self.criterion,
        )
        .map_err(input_err)
    }
}

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(input_err)?;
        let b: usize = b.trim().parse().map_err(input_err)?;
        if a == 0 || b < a {
            return Err(CliError::Input(format!("bad dimension range '{text}'")));
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![text.trim().parse().map_err(input_err)?])
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(input_err))
        .collect()
}

/// Run `task` over `cells` on up to `jobs` threads, returning results in
/// cell order.
fn run_grid<T: Send>(
    cells: &[(usize, f64)],
    jobs: usize,
    task: impl Fn(usize, f64) -> T + Sync,
) -> Vec<T> {
    let jobs = jobs.max(1).min(cells.len().max(1));
    if jobs <= 1 {
        return cells.iter().map(|&(d, eps)| task(d, eps)).collect();
    }
    let mut slots: Vec<Option<T>> = Vec::new();
    slots.resize_with(cells.len(), || None);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots_mutex = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let (d, eps) = cells[i];
                let value = task(d, eps);
                slots_mutex.lock().unwrap()[i] = Some(value);
            });
        }
    });
    slots.into_iter().map(|v| v.expect("every cell filled")).collect()
}

// -- subcommands -----------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "spectract",
    version,
    about = "Worst-case errors, information complexity, and tractability of tensor-product problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Output file (defaults to standard output)
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Information complexity n(eps, d) over a (dims × epsilons) grid
    Complexity(ComplexityCmd),
    /// Minimal worst-case errors, initial error, average-case tails, plans
    Error(ErrorCmd),
    /// Tractability classification of a problem family
    Classify(ClassifyCmd),
    /// Reproducing-kernel computations: cubature errors, tail bounds,
    /// moments, block sizes
    Rkhs(RkhsCmd),
    /// Product-weight bounds: partitions, lower/upper complexity bounds,
    /// weak-tractability criterion
    Bounds(BoundsCmd),
    /// Preset tables for the toy spectra
    Toy(ToyCmd),
}

#[derive(Args, Debug)]
struct ComplexityCmd {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Dimension or range, e.g. 3 or 1..12
    #[arg(long, default_value = "1..8")]
    dims: String,
    /// Comma-separated error thresholds
    #[arg(long, default_value = "0.5")]
    epsilons: String,
    /// Report overflowed cells instead of aborting
    #[arg(long)]
    allow_overflow: bool,
    /// Worker threads for grid evaluation
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Visited-node cap before a count reports overflow
    #[arg(long, default_value_t = 1_000_000_000)]
    node_cap: u64,
}

#[derive(Serialize)]
struct ComplexityRow {
    d: usize,
    eps: f64,
    criterion: ErrorCriterion,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    overflow: bool,
}

fn criterion_name(c: ErrorCriterion) -> &'static str {
    match c {
        ErrorCriterion::Absolute => "absolute",
        ErrorCriterion::Normalized => "normalized",
    }
}

fn cmd_complexity(cmd: &ComplexityCmd, output: &Output) -> Result<(), CliError> {
    let input = cmd.problem.load()?;
    let dims = parse_dims(&cmd.dims)?;
    let epsilons = parse_list(&cmd.epsilons)?;
    let mut cells = Vec::new();
    for &d in &dims {
        for &eps in &epsilons {
            cells.push((d, eps));
        }
    }
    let results = run_grid(&cells, cmd.jobs, |d, eps| {
        let problem = input.problem_at(d)?;
        info_complexity_capped(&problem, eps, cmd.node_cap).map_err(complexity_err)
    });
    let mut rows = Vec::new();
    for ((d, eps), result) in cells.into_iter().zip(results) {
        let row = match result {
            Ok(n) => {
                ComplexityRow { d, eps, criterion: input.criterion, n: Some(n), overflow: false }
            }
            Err(CliError::Overflow) if cmd.allow_overflow => {
                ComplexityRow { d, eps, criterion: input.criterion, n: None, overflow: true }
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let csv: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.d,
                fmt_float(r.eps),
                criterion_name(r.criterion),
                r.n.map(|n| n.to_string()).unwrap_or_default(),
                r.overflow
            )
        })
        .collect();
    output.write_csv_or_json("d,eps,criterion,n,overflow", csv, &rows)
}

#[derive(Args, Debug)]
struct ErrorCmd {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Dimension (defaults to the spec file's, else 2)
    #[arg(long)]
    d: Option<usize>,
    /// Number of information operations
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Also print the average-case tail error after the top n eigenvalues
    #[arg(long)]
    avg: bool,
    /// Tolerance for the average-case tail sum
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Dump the optimal algorithm's index plan instead of error values
    #[arg(long)]
    plan: bool,
    /// Dump the top-k eigenvalue enumeration instead of error values
    #[arg(long, value_name = "K")]
    top: Option<usize>,
}

#[derive(Serialize)]
struct ErrorRow {
    quantity: &'static str,
    d: usize,
    n: usize,
    criterion: ErrorCriterion,
    value: f64,
    exact: bool,
}

fn cmd_error(cmd: &ErrorCmd, output: &Output) -> Result<(), CliError> {
    let input = cmd.problem.load()?;
    let d = cmd.d.or(input.file_d).unwrap_or(2);
    let problem = input.problem_at(d)?;

    if let Some(k) = cmd.top {
        let rows = enumerate_top(&problem, k);
        let csv = rows.iter().map(|r| r.to_csv_row()).collect();
        #[derive(Serialize)]
        struct ItemRow {
            value: f64,
            logvalue: f64,
            index: Vec<u32>,
        }
        let json: Vec<ItemRow> = rows
            .iter()
            .map(|r| ItemRow { value: r.value, logvalue: r.logvalue, index: r.index.clone() })
            .collect();
        return output.write_csv_or_json("value,logvalue,index", csv, &json);
    }

    if cmd.plan {
        let plan = optimal_algorithm_plan(&problem, cmd.n);
        #[derive(Serialize)]
        struct PlanRow {
            rank: usize,
            index: Vec<u32>,
            normalization: f64,
        }
        let rows: Vec<PlanRow> = plan
            .into_iter()
            .enumerate()
            .map(|(i, (index, normalization))| PlanRow { rank: i + 1, index, normalization })
            .collect();
        let csv = rows
            .iter()
            .map(|r| {
                let idx: Vec<String> = r.index.iter().map(|i| i.to_string()).collect();
                format!("{},{},{}", r.rank, idx.join(" "), fmt_float(r.normalization))
            })
            .collect();
        return output.write_csv_or_json("rank,index,normalization", csv, &rows);
    }

    let mut rows = vec![
        ErrorRow {
            quantity: "minimal_error",
            d,
            n: cmd.n,
            criterion: problem.criterion(),
            value: minimal_error(&problem, cmd.n).map_err(complexity_err)?,
            exact: true,
        },
        ErrorRow {
            quantity: "initial_error",
            d,
            n: 0,
            criterion: problem.criterion(),
            value: initial_error(&problem),
            exact: true,
        },
    ];
    if cmd.avg {
        rows.push(ErrorRow {
            quantity: "avg_tail_error",
            d,
            n: cmd.n,
            criterion: problem.criterion(),
            value: avg_tail_error(&problem, cmd.n, cmd.tol).map_err(complexity_err)?,
            exact: true,
        });
    }
    let csv = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.quantity,
                r.d,
                r.n,
                criterion_name(r.criterion),
                fmt_float(r.value),
                r.exact
            )
        })
        .collect();
    output.write_csv_or_json("quantity,d,n,criterion,value,exact", csv, &rows)
}

#[derive(Args, Debug)]
struct ClassifyCmd {
    /// Inline spectrum JSON
    #[arg(long, value_name = "JSON")]
    spectrum: String,
    /// Error criterion
    #[arg(long, value_enum, default_value = "abs")]
    criterion: CriterionArg,
    /// Scaling-family JSON: classify the scaled family
    #[arg(long, value_name = "JSON", conflicts_with = "growth")]
    scaling: Option<String>,
    /// Symmetry-growth JSON, e.g. '{"family":"full-antisym"}': classify the
    /// (anti)symmetric family
    #[arg(long, value_name = "JSON")]
    growth: Option<String>,
}

fn class_name(v: &Verdict) -> String {
    serde_json::to_value(v.class).unwrap().as_str().unwrap().to_string()
}

fn cmd_classify(cmd: &ClassifyCmd, output: &Output) -> Result<(), CliError> {
    let spectrum: Spectrum = serde_json::from_str(&cmd.spectrum).map_err(input_err)?;
    let criterion: ErrorCriterion = cmd.criterion.into();
    let verdict: Verdict = if let Some(text) = &cmd.scaling {
        let family: ScalingFamily = serde_json::from_str(text).map_err(input_err)?;
        classify_scaled(&spectrum, &family, criterion)
    } else if let Some(text) = &cmd.growth {
        let growth: SymmetryGrowth = serde_json::from_str(text).map_err(input_err)?;
        match growth.kind() {
            GroupKind::Sym => classify_symmetric(&spectrum, &growth, criterion),
            GroupKind::Antisym => classify_antisymmetric(&spectrum, &growth, criterion),
        }
    } else {
        classify_unscaled(&spectrum, criterion)
    }
    .map_err(|e| CliError::Precondition(e.to_string()))?;

    let implied: Vec<String> = verdict
        .implied
        .iter()
        .map(|c| serde_json::to_value(c).unwrap().as_str().unwrap().to_string())
        .collect();
    let csv = vec![format!(
        "{},\"{}\",{},{}",
        class_name(&verdict),
        verdict.rule,
        implied.join("|"),
        verdict.spt_exponent.map(fmt_float).unwrap_or_default()
    )];
    output.write_csv_or_json("class,rule,implied,spt_exponent", csv, &[verdict])
}

#[derive(Args, Debug)]
struct RkhsCmd {
    /// Kernel kind for cubature errors
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// Comma-separated coordinate weights
    #[arg(long)]
    gammas: Option<String>,
    /// Cubature rule CSV (one point per row, weight in the last column);
    /// omitted = the empty rule
    #[arg(long)]
    rule: Option<std::path::PathBuf>,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Compute the moment of a sum of k uniforms instead
    #[arg(long)]
    moment: bool,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Exact (even p) moment evaluation
    #[arg(long)]
    exact: bool,
    /// Monte Carlo sample count when not exact
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report the sufficient block size for the L_p lower bound instead
    #[arg(long)]
    block_size: bool,
    /// Box side length for --block-size
    #[arg(long, default_value_t = 1.0)]
    l: f64,
    /// Report the uniform-approximation tail bound instead
    #[arg(long)]
    tail_bound: bool,
    #[arg(long, default_value_t = 16)]
    n: u64,
    #[arg(long, default_value_t = 0.75)]
    tau: f64,
    /// Report the top-k ordered basis sup-norm squares instead
    #[arg(long)]
    basis_norms: bool,
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    AnchoredMin,
    Unanchored,
}

#[derive(Serialize)]
struct ValueRow {
    quantity: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
    exact: bool,
}

fn write_value_rows(output: &Output, rows: Vec<ValueRow>) -> Result<(), CliError> {
    let csv = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{}",
                r.quantity,
                fmt_float(r.value),
                r.std_error.map(fmt_float).unwrap_or_default(),
                r.exact
            )
        })
        .collect();
    output.write_csv_or_json("quantity,value,std_error,exact", csv, &rows)
}

fn gammas_of(cmd: &RkhsCmd) -> Result<Vec<f64>, CliError> {
    parse_list(cmd.gammas.as_deref().ok_or_else(|| CliError::Input("--gammas required".into()))?)
}

fn cmd_rkhs(cmd: &RkhsCmd, output: &Output) -> Result<(), CliError> {
    if cmd.moment {
        let mode = if cmd.exact {
            MomentMode::ExactEven
        } else {
            MomentMode::MonteCarlo { samples: cmd.samples, seed: cmd.seed }
        };
        let est =
            cube_moment(cmd.k, cmd.p, mode).map_err(|e| CliError::Precondition(e.to_string()))?;
        let row = match est {
            MomentEstimate::Exact(value) => ValueRow {
                quantity: format!("cube_moment(k={},p={})", cmd.k, cmd.p),
                value,
                std_error: None,
                exact: true,
            },
            MomentEstimate::Estimate { value, std_error } => ValueRow {
                quantity: format!("cube_moment(k={},p={})", cmd.k, cmd.p),
                value,
                std_error: Some(std_error),
                exact: false,
            },
        };
        return write_value_rows(output, vec![row]);
    }
    if cmd.block_size {
        let k = lp_block_size(cmd.p, cmd.l).map_err(|e| CliError::Input(e.to_string()))?;
        #[derive(Serialize)]
        struct BlockRow {
            p: f64,
            l: f64,
            k: u64,
        }
        let rows = vec![BlockRow { p: cmd.p, l: cmd.l, k }];
        let csv = rows
            .iter()
            .map(|r| format!("{},{},{}", fmt_float(r.p), fmt_float(r.l), r.k))
            .collect();
        return output.write_csv_or_json("p,l,k", csv, &rows);
    }
    if cmd.tail_bound {
        let gammas = gammas_of(cmd)?;
        let bound = linfty_tail_bound(&gammas, cmd.n, cmd.tau)
            .map_err(|e| CliError::Input(e.to_string()))?;
        let row = ValueRow {
            quantity: format!("linfty_tail_bound(n={},tau={})", cmd.n, cmd.tau),
            value: bound,
            std_error: None,
            exact: true,
        };
        return write_value_rows(output, vec![row]);
    }
    if cmd.basis_norms {
        let gammas = gammas_of(cmd)?;
        let top = ordered_basis_sq_norms(&gammas, cmd.top);
        #[derive(Serialize)]
        struct NormRow {
            rank: usize,
            index: Vec<u32>,
            sq_norm: f64,
        }
        let rows: Vec<NormRow> = top
            .into_iter()
            .enumerate()
            .map(|(i, (index, sq_norm))| NormRow { rank: i + 1, index, sq_norm })
            .collect();
        let csv = rows
            .iter()
            .map(|r| {
                let idx: Vec<String> = r.index.iter().map(|i| i.to_string()).collect();
                format!("{},{},{}", r.rank, idx.join(" "), fmt_float(r.sq_norm))
            })
            .collect();
        return output.write_csv_or_json("rank,index,sq_norm", csv, &rows);
    }

    // default action: cubature worst-case error
    let kind = match cmd.kernel {
        Some(KernelArg::AnchoredMin) => KernelKind::AnchoredMin,
        Some(KernelArg::Unanchored) => KernelKind::UnanchoredCoshSinh,
        None => return Err(CliError::Input("pick --kernel or one of the action flags".into())),
    };
    let kernel =
        KernelSpec::new(kind, gammas_of(cmd)?).map_err(|e| CliError::Input(e.to_string()))?;
    let rule = match &cmd.rule {
        None => CubatureRule::empty(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(input_err)?;
            CubatureRule::from_csv(&text).map_err(CliError::Input)?
        }
    };
    let err = qmc_worst_case_error(&kernel, &rule, cmd.quad_tol)
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let row = ValueRow {
        quantity: format!("qmc_worst_case_error(points={})", rule.points.len()),
        value: err,
        std_error: None,
        exact: kind == KernelKind::AnchoredMin,
    };
    write_value_rows(output, vec![row])
}

#[derive(Args, Debug)]
struct BoundsCmd {
    /// Generator-weight JSON, e.g.
    /// '{"family":"power-gen","params":{"beta":2.0},"c_gamma":1.0}'
    #[arg(long, value_name = "JSON")]
    weights: String,
    /// Dimension or range
    #[arg(long, default_value = "1..10")]
    dims: String,
    /// Report the partition lower bound (default action)
    #[arg(long)]
    lower: bool,
    /// Report the tau-grid minimum of the upper complexity bound at --eps
    #[arg(long, conflicts_with = "lower")]
    upper: bool,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Embedding preset for --upper
    #[arg(long, value_enum, default_value = "smooth")]
    preset: PresetArg,
    /// Report the weak-tractability criterion at --kappa
    #[arg(long, conflicts_with_all = ["lower", "upper"])]
    wt: bool,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Export the generator weights of the largest dimension as (j, gamma)
    #[arg(long, conflicts_with_all = ["lower", "upper", "wt"])]
    expand: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Smooth,
    Sobolev,
}

fn cmd_bounds(cmd: &BoundsCmd, output: &Output) -> Result<(), CliError> {
    let weights: GeneratorWeights = serde_json::from_str(&cmd.weights).map_err(input_err)?;
    let dims = parse_dims(&cmd.dims)?;

    if cmd.expand {
        let d = dims.last().copied().unwrap_or(1);
        let gammas = weights.weights_at(d).map_err(|e| CliError::Input(e.to_string()))?;
        #[derive(Serialize)]
        struct WeightRow {
            j: usize,
            gamma: f64,
        }
        let rows: Vec<WeightRow> = gammas
            .into_iter()
            .enumerate()
            .map(|(i, gamma)| WeightRow { j: i + 1, gamma })
            .collect();
        let csv = rows.iter().map(|r| format!("{},{}", r.j, fmt_float(r.gamma))).collect();
        return output.write_csv_or_json("j,gamma", csv, &rows);
    }

    if cmd.wt {
        let verdict = weights
            .wt_criterion(cmd.kappa)
            .map_err(|e| CliError::Precondition(e.to_string()))?;
        #[derive(Serialize)]
        struct WtRow {
            kappa: f64,
            weakly_tractable: bool,
        }
        let rows = vec![WtRow { kappa: cmd.kappa, weakly_tractable: verdict }];
        let csv = rows
            .iter()
            .map(|r| format!("{},{}", fmt_float(r.kappa), r.weakly_tractable))
            .collect();
        return output.write_csv_or_json("kappa,weakly_tractable", csv, &rows);
    }

    if cmd.upper {
        let constants = match cmd.preset {
            PresetArg::Smooth => EmbeddingConstants::SMOOTH,
            PresetArg::Sobolev => EmbeddingConstants::SOBOLEV,
        };
        #[derive(Serialize)]
        struct UpperRow {
            d: usize,
            eps: f64,
            tau: f64,
            bound: f64,
        }
        let mut rows = Vec::new();
        for &d in &dims {
            // 15-point tau grid, uniform in (0.55, 0.95); report the minimum
            let mut best: Option<(f64, f64)> = None;
            for i in 0..15 {
                let tau = 0.55 + (i as f64 + 0.5) * (0.95 - 0.55) / 15.0;
                let bound = weights
                    .upper_bound_complexity(d, cmd.eps, tau, constants.t, constants.a, constants.b)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                if best.is_none_or(|(_, b)| bound < b) {
                    best = Some((tau, bound));
                }
            }
            let (tau, bound) = best.expect("grid is nonempty");
            rows.push(UpperRow { d, eps: cmd.eps, tau, bound });
        }
        let csv = rows
            .iter()
            .map(|r| {
                format!("{},{},{},{}", r.d, fmt_float(r.eps), fmt_float(r.tau), fmt_float(r.bound))
            })
            .collect();
        return output.write_csv_or_json("d,eps,tau,bound", csv, &rows);
    }

    // default: the partition lower bound per dimension
    #[derive(Serialize)]
    struct LowerRow {
        d: usize,
        s: usize,
        bound: u128,
        smooth: f64,
    }
    let mut rows = Vec::new();
    for &d in &dims {
        let partition =
            weights.partition_blocks(d).map_err(|e| CliError::Input(e.to_string()))?;
        let bound =
            weights.lower_bound_complexity(d).map_err(|e| CliError::Input(e.to_string()))?;
        rows.push(LowerRow { d, s: partition.s, bound: bound.n, smooth: bound.smooth });
    }
    let csv = rows
        .iter()
        .map(|r| format!("{},{},{},{}", r.d, r.s, r.bound, fmt_float(r.smooth)))
        .collect();
    output.write_csv_or_json("d,s,bound,smooth", csv, &rows)
}

#[derive(Args, Debug)]
struct ToyCmd {
    /// Which preset: 1 (two unit eigenvalues), 2 (m unit eigenvalues),
    /// 3 (unit leading pair with polynomial/log tails, classified)
    #[arg(long)]
    example: u8,
    #[arg(long, default_value = "1..8")]
    dims: String,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Number of unit eigenvalues for example 2
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Tail decay exponent for example 3
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Report overflowed cells instead of aborting
    #[arg(long)]
    allow_overflow: bool,
}

#[derive(Serialize)]
struct ToyRow {
    d: usize,
    n_entire: Option<u64>,
    n_sym: Option<u64>,
    n_antisym: Option<u64>,
}

fn toy_count(
    spectrum: &Spectrum,
    d: usize,
    symmetry: SymmetrySpec,
    eps: f64,
    allow_overflow: bool,
) -> Result<Option<u64>, CliError> {
    let problem = ProblemSpec::with_symmetry(spectrum.clone(), d, symmetry).map_err(input_err)?;
    match info_complexity_capped(&problem, eps, 1_000_000_000).map_err(complexity_err) {
        Ok(n) => Ok(Some(n)),
        Err(CliError::Overflow) if allow_overflow => Ok(None),
        Err(e) => Err(e),
    }
}

fn cmd_toy(cmd: &ToyCmd, output: &Output) -> Result<(), CliError> {
    let dims = parse_dims(&cmd.dims)?;
    match cmd.example {
        1 | 2 => {
            let m = if cmd.example == 1 { 2 } else { cmd.m };
            let spectrum = Spectrum::finite(vec![1.0; m]).map_err(input_err)?;
            let mut rows = Vec::new();
            for &d in &dims {
                rows.push(ToyRow {
                    d,
                    n_entire: toy_count(
                        &spectrum,
                        d,
                        SymmetrySpec::entire(d).map_err(input_err)?,
                        cmd.epsilon,
                        cmd.allow_overflow,
                    )?,
                    n_sym: toy_count(
                        &spectrum,
                        d,
                        SymmetrySpec::full_sym(d).map_err(input_err)?,
                        cmd.epsilon,
                        cmd.allow_overflow,
                    )?,
                    n_antisym: toy_count(
                        &spectrum,
                        d,
                        SymmetrySpec::full_antisym(d).map_err(input_err)?,
                        cmd.epsilon,
                        cmd.allow_overflow,
                    )?,
                });
            }
            let csv = rows
                .iter()
                .map(|r| {
                    let cell = |v: Option<u64>| v.map(|n| n.to_string()).unwrap_or_default();
                    format!("{},{},{},{}", r.d, cell(r.n_entire), cell(r.n_sym), cell(r.n_antisym))
                })
                .collect();
            output.write_csv_or_json("d,n_entire,n_sym,n_antisym", csv, &rows)
        }
        3 => {
            #[derive(Serialize)]
            struct ClassRow {
                spectrum: &'static str,
                setting: &'static str,
                class: String,
            }
            let power = Spectrum::power_law(1.0, cmd.beta).map_err(input_err)?;
            let log = Spectrum::log_decay(1.0).map_err(input_err)?;
            let criterion = ErrorCriterion::Absolute;
            let mut rows = Vec::new();
            for (name, spectrum) in [("polynomial-tail", &power), ("log-tail", &log)] {
                let entire = classify_unscaled(spectrum, criterion)
                    .map_err(|e| CliError::Precondition(e.to_string()))?;
                let sym = classify_symmetric(spectrum, &SymmetryGrowth::FullSym, criterion)
                    .map_err(|e| CliError::Precondition(e.to_string()))?;
                let asy = classify_antisymmetric(spectrum, &SymmetryGrowth::FullAntisym, criterion)
                    .map_err(|e| CliError::Precondition(e.to_string()))?;
                for (setting, verdict) in
                    [("entire", entire), ("full-sym", sym), ("full-antisym", asy)]
                {
                    rows.push(ClassRow { spectrum: name, setting, class: class_name(&verdict) });
                }
            }
            let csv = rows
                .iter()
                .map(|r| format!("{},{},{}", r.spectrum, r.setting, r.class))
                .collect();
            output.write_csv_or_json("spectrum,setting,class", csv, &rows)
        }
        other => Err(CliError::Input(format!("unknown toy example {other}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = Output { format: cli.format, out: cli.out.clone() };
    let result = match &cli.command {
        Command::Complexity(cmd) => cmd_complexity(cmd, &output),
        Command::Error(cmd) => cmd_error(cmd, &output),
        Command::Classify(cmd) => cmd_classify(cmd, &output),
        Command::Rkhs(cmd) => cmd_rkhs(cmd, &output),
        Command::Bounds(cmd) => cmd_bounds(cmd, &output),
        Command::Toy(cmd) => cmd_toy(cmd, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.code())
        }
    }
}
