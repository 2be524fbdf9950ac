//! Seeded Monte-Carlo experiments.
//!
//! Trial `i` of grid point `p` draws everything from the stream
//! `(master_seed, p·2³² + i)`. Per-trial outputs are collected in trial order
//! and reduced with pairwise summation, so results are bit-identical for any
//! number of worker threads.

mod config;
mod estimators;
mod output;

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::analysis::{db_to_linear, delta_mean_approx};
use crate::channel::{
    sample_channel, sample_channel_given_glos_sq, ChannelParams, ChannelRealization, RngStream,
};
use crate::codebooks::{
    adaptive_radius, dft_codebook, grassmannian_pack_with, pcc_construct, rvq_codebook, Codebook,
    PackingCache, PackingReport,
};
use crate::feedback::{raw_gain, rx_feedback, select_codeword, tx_reconstruct};
use crate::linalg::normalized_array_response;
use crate::{Error, Result};

pub use config::{
    parse_key_values, CodebookSpec, ExperimentConfig, PackingConfig, ThetaMode, DEFAULT_SEED,
    DEFAULT_TRIALS,
};
pub use estimators::{
    default_quantile_grid, empirical_cdf, mc_mean, pairwise_sum, pooled_se, MeanEstimate,
};
pub use output::{ExperimentResult, Figure, ResultRow};

/// Slack allowed on a raw gain before it counts as an invariant violation.
const GAIN_SLACK: f64 = 1e-9;

pub fn stream_for(master_seed: u64, point: usize, trial: usize) -> RngStream {
    RngStream::new(master_seed, ((point as u64) << 32) | trial as u64)
}

/// The Grassmannian ingredient shared by every polar-cap codebook of a run:
/// `2^B − 1` lines in `C^(n_t − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingredient {
    pub codebook: Codebook,
    pub report: PackingReport,
}

impl Ingredient {
    pub fn prepare(config: &ExperimentConfig, cache: Option<&PackingCache>) -> Result<Self> {
        let dim = config.n_t - 1;
        let count = (1usize << config.b_bits) - 1;
        let opts = config.packing.options();
        let (codebook, report) = match cache {
            Some(c) => c.get_or_pack(dim, count, config.packing.seed, &opts)?,
            None => grassmannian_pack_with(dim, count, config.packing.seed, &opts)?,
        };
        if report.min_distance > report.welch_rankin_bound + 1e-9 {
            return Err(Error::Invariant(format!(
                "packing exceeds the Welch/Rankin bound: {report:?}"
            )));
        }
        Ok(Self { codebook, report })
    }
}

fn draw_theta<R: Rng + ?Sized>(mode: ThetaMode, rng: &mut R) -> f64 {
    match mode {
        ThetaMode::Uniform => rng.random::<f64>() * PI,
        ThetaMode::Fixed(t) => t,
    }
}

fn checked_gain(h: &crate::linalg::ComplexVector, f: &crate::linalg::UnitVector) -> Result<f64> {
    let g = raw_gain(h, f)?;
    if !(-GAIN_SLACK..=1.0 + GAIN_SLACK).contains(&g) {
        return Err(Error::Invariant(format!(
            "beamforming gain {g} outside [0, 1]"
        )));
    }
    Ok(g.clamp(0.0, 1.0))
}

/// Gains of every configured codebook on one channel draw, in config order.
fn trial_gains<R: Rng + ?Sized>(
    config: &ExperimentConfig,
    params: &ChannelParams,
    draw: &ChannelRealization,
    ingredient: &Ingredient,
    dft: &Codebook,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let h = &draw.h;
    let g = &ingredient.codebook;
    let basis = normalized_array_response(params.theta, params.n_t, params.d_over_lambda)?;
    config
        .codebooks
        .iter()
        .map(|spec| match *spec {
            CodebookSpec::AdaptivePcc => {
                let (_, report) = rx_feedback(h, params, g, config.radius_bits)?;
                let f = tx_reconstruct(params, report.radius_at_tx(), report.best_index, g)?;
                checked_gain(h, &f)
            }
            CodebookSpec::Rvq => {
                let cb = rvq_codebook(params.n_t, config.b_bits, rng)?;
                let j = select_codeword(h, &cb)?;
                checked_gain(h, &cb.codewords()[j])
            }
            CodebookSpec::Dft => {
                let j = select_codeword(h, dft)?;
                checked_gain(h, &dft.codewords()[j])
            }
            CodebookSpec::FixedPcc { radius } => {
                let cb = pcc_construct(&basis, radius, g)?;
                let j = select_codeword(h, &cb)?;
                checked_gain(h, &cb.codewords()[j])
            }
        })
        .collect()
}

/// LOS conditioning of a gain experiment.
#[derive(Debug, Clone, Copy)]
enum LosDraw {
    Unconditioned,
    Given(f64),
}

fn run_gain_point(
    config: &ExperimentConfig,
    ingredient: &Ingredient,
    dft: &Codebook,
    k_db: f64,
    los: LosDraw,
    point: usize,
) -> Result<Vec<Vec<f64>>> {
    let base = ChannelParams::new(
        db_to_linear(k_db),
        config.n_t,
        PI / 2.0,
        config.d_over_lambda,
    )?;
    let per_trial: Vec<Vec<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_for(config.master_seed, point, i).generator();
            let params = base.with_theta(draw_theta(config.theta_mode, &mut rng))?;
            let draw = match los {
                LosDraw::Unconditioned => sample_channel(&params, &mut rng),
                LosDraw::Given(g) => sample_channel_given_glos_sq(&params, g, &mut rng)?,
            };
            trial_gains(config, &params, &draw, ingredient, dft, &mut rng)
        })
        .collect::<Result<_>>()?;
    // Transpose to one column of gains per codebook.
    Ok((0..config.codebooks.len())
        .map(|c| per_trial.iter().map(|t| t[c]).collect())
        .collect())
}

fn validate_gain_config(config: &ExperimentConfig) -> Result<()> {
    config.validate()?;
    if config.codebooks.is_empty() {
        return Err(Error::invalid("codebooks", "need at least one codebook"));
    }
    Ok(())
}

fn dft_for(config: &ExperimentConfig) -> Result<Codebook> {
    dft_codebook(config.n_t, config.b_bits)
}

/// Mean of the adaptive radius given `|G_LOS|²`, next to its closed-form
/// approximation, over `n_t_values() × g_sq_values × k_grid_db`.
pub fn run_radius_approx_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let g_values = config
        .g_sq_values
        .as_ref()
        .filter(|g| !g.is_empty())
        .ok_or_else(|| {
            Error::invalid(
                "g_sq_values",
                "the radius experiment needs conditioning values",
            )
        })?;

    let mut rows = Vec::new();
    let mut point = 0;
    for n_t in config.n_t_values() {
        for &g_sq in g_values {
            for &k_db in &config.k_grid_db {
                let k = db_to_linear(k_db);
                let base = ChannelParams::new(k, n_t, PI / 2.0, config.d_over_lambda)?;
                let radii: Vec<f64> = (0..config.trials)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = stream_for(config.master_seed, point, i).generator();
                        let params = base.with_theta(draw_theta(config.theta_mode, &mut rng))?;
                        let draw = sample_channel_given_glos_sq(&params, g_sq, &mut rng)?;
                        let basis =
                            normalized_array_response(params.theta, n_t, params.d_over_lambda)?;
                        adaptive_radius(&draw.h, &basis)
                    })
                    .collect::<Result<_>>()?;
                let est = mc_mean(&radii)?;
                let mut row = ResultRow {
                    k_db,
                    n_t,
                    g_sq: Some(g_sq),
                    quantile: None,
                    codebook: CodebookSpec::AdaptivePcc.label(),
                    statistic: "delta_mean_mc".into(),
                    value: est.mean,
                    std_error: est.std_error,
                    trials: config.trials,
                    master_seed: config.master_seed,
                };
                rows.push(row.clone());
                row.statistic = "delta_mean_approx".into();
                row.value = delta_mean_approx(k, n_t, g_sq);
                row.std_error = None;
                rows.push(row);
                point += 1;
            }
        }
    }
    Ok(ExperimentResult {
        figure: Figure::RadiusApprox,
        config: config.clone(),
        packing: None,
        rows,
    })
}

/// Mean beamforming gain per codebook at each K, with `G_LOS ~ CN(0, 1)`.
pub fn run_gain_vs_k_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    validate_gain_config(config)?;
    let ingredient = Ingredient::prepare(config, None)?;
    run_gain_vs_k_with(config, &ingredient)
}

pub fn run_gain_vs_k_with(
    config: &ExperimentConfig,
    ingredient: &Ingredient,
) -> Result<ExperimentResult> {
    validate_gain_config(config)?;
    let dft = dft_for(config)?;
    let mut rows = Vec::new();
    for (point, &k_db) in config.k_grid_db.iter().enumerate() {
        let columns = run_gain_point(
            config,
            ingredient,
            &dft,
            k_db,
            LosDraw::Unconditioned,
            point,
        )?;
        for (spec, gains) in config.codebooks.iter().zip(&columns) {
            let est = mc_mean(gains)?;
            rows.push(ResultRow {
                k_db,
                n_t: config.n_t,
                g_sq: None,
                quantile: None,
                codebook: spec.label(),
                statistic: "mean_gain".into(),
                value: est.mean,
                std_error: est.std_error,
                trials: config.trials,
                master_seed: config.master_seed,
            });
        }
    }
    Ok(ExperimentResult {
        figure: Figure::GainVsK,
        config: config.clone(),
        packing: Some(ingredient.report),
        rows,
    })
}

/// Empirical gain quantiles (0.01..0.99) per codebook at each `(K, |G_LOS|²)`.
pub fn run_gain_cdf_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    validate_gain_config(config)?;
    let ingredient = Ingredient::prepare(config, None)?;
    run_gain_cdf_with(config, &ingredient)
}

pub fn run_gain_cdf_with(
    config: &ExperimentConfig,
    ingredient: &Ingredient,
) -> Result<ExperimentResult> {
    validate_gain_config(config)?;
    let g_values = config
        .g_sq_values
        .as_ref()
        .filter(|g| !g.is_empty())
        .ok_or_else(|| {
            Error::invalid(
                "g_sq_values",
                "the CDF experiment needs conditioning values",
            )
        })?;
    let dft = dft_for(config)?;
    let grid = default_quantile_grid();
    let mut rows = Vec::new();
    let mut point = 0;
    for &k_db in &config.k_grid_db {
        for &g_sq in g_values {
            let columns =
                run_gain_point(config, ingredient, &dft, k_db, LosDraw::Given(g_sq), point)?;
            for (spec, gains) in config.codebooks.iter().zip(&columns) {
                let q = empirical_cdf(gains, &grid)?;
                for (&p, &v) in grid.iter().zip(&q) {
                    rows.push(ResultRow {
                        k_db,
                        n_t: config.n_t,
                        g_sq: Some(g_sq),
                        quantile: Some(p),
                        codebook: spec.label(),
                        statistic: "gain_quantile".into(),
                        value: v,
                        std_error: None,
                        trials: config.trials,
                        master_seed: config.master_seed,
                    });
                }
            }
            point += 1;
        }
    }
    Ok(ExperimentResult {
        figure: Figure::GainCdf,
        config: config.clone(),
        packing: Some(ingredient.report),
        rows,
    })
}

/// Dispatches on `figure`, reusing `cache` for the Grassmannian ingredient.
pub fn run_figure(
    figure: Figure,
    config: &ExperimentConfig,
    cache: Option<&PackingCache>,
) -> Result<ExperimentResult> {
    match figure {
        Figure::RadiusApprox => run_radius_approx_experiment(config),
        Figure::GainVsK => {
            validate_gain_config(config)?;
            run_gain_vs_k_with(config, &Ingredient::prepare(config, cache)?)
        }
        Figure::GainCdf => {
            validate_gain_config(config)?;
            run_gain_cdf_with(config, &Ingredient::prepare(config, cache)?)
        }
    }
}
