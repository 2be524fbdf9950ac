//! The `polarcap` command line.
//!
//! Subcommands: `gen-codebook`, `analyze`, `simulate`, `verify-packing`.
//! Exit codes: 0 on success, 2 for bad arguments or configuration, 3 when a
//! numerical invariant is violated during the run.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{db_to_linear, validity_expectations, CondStats};
use crate::channel::{sample_channel, ChannelParams, RngStream};
use crate::codebooks::{
    adaptive_pcc, dft_codebook, fmt_f64, grassmannian_pack_with, pcc_construct, read_codebook,
    rvq_codebook, write_codebook, Codebook, CodebookKind, PackingCache, PackingOptions,
    PackingReport,
};
use crate::linalg::{normalized_array_response, TOLERANCES};
use crate::sim::{parse_key_values, run_figure, ExperimentConfig, Figure, ThetaMode};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "polarcap",
    version,
    about = "Codebook generation, closed-form radius statistics and seeded beamforming experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a codebook and write it in the text codebook format.
    GenCodebook(GenArgs),
    /// Print the closed-form radius statistics as CSV.
    Analyze(AnalyzeArgs),
    /// Run one of the Monte-Carlo experiments.
    Simulate(SimArgs),
    /// Check a packing against the Welch/Rankin bound.
    VerifyPacking(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Grassmannian,
    Rvq,
    Dft,
    FixedPcc,
    AdaptivePcc,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 4)]
    nt: usize,
    #[arg(long, default_value_t = 4)]
    bits: u32,
    /// Packing dimension (default: nt − 1).
    #[arg(long)]
    dim: Option<usize>,
    /// Packing size (default: 2^bits − 1).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = PackingOptions::default().max_iters)]
    iters: usize,
    #[arg(long, default_value_t = PackingOptions::default().restarts)]
    restarts: usize,
    /// Radius of a fixed-radius polar cap.
    #[arg(long)]
    radius: Option<f64>,
    /// LOS angle in radians for polar-cap kinds.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    theta: f64,
    #[arg(long, default_value_t = 0.5)]
    d_over_lambda: f64,
    /// K-factor in dB of the channel drawn for `adaptive-pcc`.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    k_db: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        required = true,
        allow_hyphen_values = true
    )]
    k_db: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    nt: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    gsq: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, value_parser = ["2", "3", "4"])]
    figure: Option<String>,
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    k_db: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    gsq: Option<Vec<f64>>,
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long)]
    bits: Option<u32>,
    /// Pin the LOS angle (radians) instead of drawing it per trial.
    #[arg(long)]
    fixed_theta: Option<f64>,
    /// Quantize the fed-back radius to this many bits.
    #[arg(long)]
    radius_bits: Option<u32>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory of cached Grassmannian packings.
    #[arg(long)]
    packing_cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Codebook file to audit instead of packing afresh.
    #[arg(long, conflicts_with_all = ["dim", "count"])]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 15)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = PackingOptions::default().max_iters)]
    iters: usize,
    #[arg(long, default_value_t = PackingOptions::default().restarts)]
    restarts: usize,
}

/// Resolved `simulate` settings: the experiment config plus output options.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub figure: Figure,
    pub experiment: ExperimentConfig,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl CliConfig {
    /// Applies a config file, where `figure`, `format` and `output` are
    /// accepted next to the experiment keys. The figure must be known first
    /// because it selects the defaults; pass `figure_flag` if given.
    pub fn from_file_text(text: &str, figure_flag: Option<Figure>) -> Result<Self> {
        let pairs = parse_key_values(text)?;
        let figure = match figure_flag {
            Some(f) => f,
            None => pairs
                .iter()
                .find(|(_, k, _)| k == "figure")
                .map(|(_, _, v)| v.parse())
                .transpose()?
                .ok_or_else(|| Error::invalid("figure", "no figure given by flag or config"))?,
        };
        let mut cfg = Self::defaults(figure);
        for (_, k, v) in pairs {
            match k.as_str() {
                "figure" => {}
                "format" => {
                    cfg.format = match v.as_str() {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        _ => {
                            return Err(Error::invalid(
                                "format",
                                format!("expected csv or json, got `{v}`"),
                            ))
                        }
                    }
                }
                "output" => cfg.output = Some(PathBuf::from(v)),
                _ => cfg.experiment.apply(&k, &v)?,
            }
        }
        Ok(cfg)
    }

    pub fn defaults(figure: Figure) -> Self {
        Self {
            figure,
            experiment: figure.default_config(),
            format: OutputFormat::Csv,
            output: None,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_BAD_ARGS,
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_BAD_ARGS
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::GenCodebook(a) => gen_codebook(a, out),
        Command::Analyze(a) => analyze(a, out),
        Command::Simulate(a) => simulate(a, out, err),
        Command::VerifyPacking(a) => verify_packing(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => out
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn report_lines(report: &PackingReport) -> String {
    format!(
        "# min_distance = {}\n# welch_rankin_bound = {}\n# iterations = {}\n# seed = {}\n",
        fmt_f64(report.min_distance),
        fmt_f64(report.welch_rankin_bound),
        report.iterations,
        report.seed
    )
}

fn gen_codebook(a: GenArgs, out: &mut dyn Write) -> Result<i32> {
    let opts = PackingOptions {
        restarts: a.restarts,
        max_iters: a.iters,
    };
    let ingredient = |nt: usize| -> Result<Codebook> {
        if nt < 2 {
            return Err(Error::invalid("nt", "polar-cap codebooks need nt ≥ 2"));
        }
        let count = crate::codebooks::codebook_size(a.bits)? - 1;
        Ok(grassmannian_pack_with(nt - 1, count.max(1), a.seed, &opts)?.0)
    };
    let mut notes = String::new();
    let cb = match a.kind {
        KindArg::Grassmannian => {
            let dim = a.dim.unwrap_or(a.nt.saturating_sub(1));
            let count = match a.count {
                Some(c) => c,
                None => crate::codebooks::codebook_size(a.bits)? - 1,
            };
            let (cb, report) = grassmannian_pack_with(dim, count, a.seed, &opts)?;
            notes = report_lines(&report);
            if report.min_distance > report.welch_rankin_bound + 1e-9 {
                return Err(Error::Invariant(
                    "packing exceeds the Welch/Rankin bound".into(),
                ));
            }
            cb
        }
        KindArg::Rvq => rvq_codebook(a.nt, a.bits, &mut RngStream::new(a.seed, 0).generator())?,
        KindArg::Dft => dft_codebook(a.nt, a.bits)?,
        KindArg::FixedPcc => {
            let radius = a
                .radius
                .ok_or_else(|| Error::invalid("radius", "fixed-pcc needs --radius"))?;
            let basis = normalized_array_response(a.theta, a.nt, a.d_over_lambda)?;
            pcc_construct(&basis, radius, &ingredient(a.nt)?)?
        }
        KindArg::AdaptivePcc => {
            let params = ChannelParams::new(db_to_linear(a.k_db), a.nt, a.theta, a.d_over_lambda)?;
            let draw = sample_channel(&params, &mut RngStream::new(a.seed, 0).generator());
            let (cb, radius) = adaptive_pcc(&draw.h, &params, &ingredient(a.nt)?)?;
            notes = format!("# radius = {}\n", fmt_f64(radius));
            cb
        }
    };
    let text = write_codebook(&cb);
    match &a.out {
        Some(p) => {
            emit(&text, Some(p), out)?;
            emit(&notes, None, out)?;
        }
        None => emit(&format!("{notes}{text}"), None, out)?,
    }
    Ok(EXIT_OK)
}

pub const ANALYZE_HEADER: &str =
    "k_db,n_t,g_sq,mean_num,mean_den,cv_num,cv_den,delta_mean_approx,validity_nt_sq,validity_mixed";

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(k) = a.k_db.iter().find(|k| !k.is_finite()) {
        return Err(Error::invalid("k_db", format!("{k} is not finite")));
    }
    if a.nt.contains(&0) {
        return Err(Error::invalid("nt", "must be positive"));
    }
    if let Some(g) = a.gsq.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
        return Err(Error::invalid("gsq", format!("{g} must be finite and ≥ 0")));
    }
    let mut text = format!("{ANALYZE_HEADER}\n");
    for &k_db in &a.k_db {
        let k = db_to_linear(k_db);
        for &n_t in &a.nt {
            let (v1, v2) = validity_expectations(k, n_t);
            for &g_sq in &a.gsq {
                let s = CondStats::at(k, n_t, g_sq);
                let cols = [
                    fmt_f64(k_db),
                    n_t.to_string(),
                    fmt_f64(g_sq),
                    fmt_f64(s.mean_num),
                    fmt_f64(s.mean_den),
                    fmt_f64(s.cv_num),
                    fmt_f64(s.cv_den),
                    fmt_f64(s.delta_mean_approx),
                    fmt_f64(v1),
                    fmt_f64(v2),
                ];
                text.push_str(&cols.join(","));
                text.push('\n');
            }
        }
    }
    emit(&text, None, out)?;
    Ok(EXIT_OK)
}

fn resolve_sim(a: &SimArgs) -> Result<CliConfig> {
    let figure_flag = a.figure.as_deref().map(str::parse).transpose()?;
    let mut cfg = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            CliConfig::from_file_text(&text, figure_flag)?
        }
        None => CliConfig::defaults(
            figure_flag.ok_or_else(|| Error::invalid("figure", "pass --figure or --config"))?,
        ),
    };
    let e = &mut cfg.experiment;
    if let Some(s) = a.seed {
        e.master_seed = s;
    }
    if let Some(t) = a.trials {
        e.trials = t;
    }
    if let Some(k) = &a.k_db {
        e.k_grid_db = k.clone();
    }
    if let Some(g) = &a.gsq {
        e.g_sq_values = Some(g.clone());
    }
    if let Some(n) = a.nt {
        e.n_t = n;
        if cfg.figure == Figure::RadiusApprox {
            e.n_t_grid = None;
        }
    }
    if let Some(b) = a.bits {
        e.b_bits = b;
    }
    if let Some(t) = a.fixed_theta {
        e.theta_mode = t.to_string().parse::<ThetaMode>()?;
    }
    if let Some(b) = a.radius_bits {
        e.radius_bits = Some(b);
    }
    if let Some(f) = a.format {
        cfg.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if let Some(o) = &a.out {
        cfg.output = Some(o.clone());
    }
    cfg.experiment.validate()?;
    Ok(cfg)
}

fn simulate(a: SimArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = resolve_sim(&a)?;
    let cache = a.packing_cache.as_ref().map(PackingCache::new);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.threads {
        if n == 0 {
            return Err(Error::invalid("threads", "must be at least 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))?;
    let result = pool.install(|| run_figure(cfg.figure, &cfg.experiment, cache.as_ref()))?;

    let text = match cfg.format {
        OutputFormat::Csv => result.to_csv(),
        OutputFormat::Json => result.to_json(),
    };
    emit(&text, cfg.output.as_deref(), out)?;
    // The summary goes wherever the results do not.
    let summary = result.summary();
    if cfg.output.is_some() {
        emit(&summary, None, out)?;
    } else {
        err.write_all(summary.as_bytes())
            .map_err(io_err(Path::new("<stderr>")))?;
    }
    Ok(EXIT_OK)
}

fn verify_packing(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (cb, report) = match &a.file {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            let cb = read_codebook(&text)?;
            let min_distance = if cb.len() < 2 {
                1.0
            } else {
                crate::codebooks::min_pairwise_distance(&cb, false)?
            };
            let report = PackingReport {
                min_distance,
                welch_rankin_bound: crate::codebooks::welch_rankin_bound(cb.dim(), cb.len()),
                iterations: 0,
                seed: a.seed,
            };
            (cb, report)
        }
        None => grassmannian_pack_with(
            a.dim,
            a.count,
            a.seed,
            &PackingOptions {
                restarts: a.restarts,
                max_iters: a.iters,
            },
        )?,
    };
    let worst_norm = cb
        .codewords()
        .iter()
        .map(|c| (c.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let within = report.min_distance <= report.welch_rankin_bound + 1e-9;
    let unit = worst_norm <= TOLERANCES.unit_norm;
    let kind_ok = cb.kind() == CodebookKind::Grassmannian || a.file.is_some();
    write!(
        out,
        "dim = {}\ncount = {}\n{}max_norm_deviation = {}\nwithin_bound = {}\n",
        cb.dim(),
        cb.len(),
        report_lines(&report).replace("# ", ""),
        fmt_f64(worst_norm),
        within
    )
    .map_err(io_err(Path::new("<stdout>")))?;
    if within && unit && kind_ok {
        Ok(EXIT_OK)
    } else {
        Err(Error::Invariant("packing failed verification".into()))
    }
}
