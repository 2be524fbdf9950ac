//! Experiment configuration and its flat `key = value` text form.
//!
//! ```text
//! # comment
//! n_t = 4
//! k_grid_db = -10,-5,0,3,5,10,15,20
//! codebooks = adaptive-pcc,rvq,dft,fixed-pcc:0.9
//! theta = uniform            # or a fixed angle in radians
//! radius_bits = none         # or an integer ≥ 1
//! ```
//!
//! Lists are comma separated. Unknown keys are rejected.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::codebooks::PackingOptions;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaMode {
    /// Fresh `θ ~ U[0, π)` per trial.
    Uniform,
    Fixed(f64),
}

impl fmt::Display for ThetaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaMode::Uniform => f.write_str("uniform"),
            ThetaMode::Fixed(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for ThetaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(ThetaMode::Uniform);
        }
        let t: f64 = s.parse().map_err(|_| {
            Error::invalid("theta", format!("expected `uniform` or radians, got `{s}`"))
        })?;
        if !(0.0..=std::f64::consts::PI).contains(&t) {
            return Err(Error::invalid("theta", format!("{t} is outside [0, π]")));
        }
        Ok(ThetaMode::Fixed(t))
    }
}

/// A codebook under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodebookSpec {
    AdaptivePcc,
    /// Fresh random codebook per trial.
    Rvq,
    Dft,
    FixedPcc {
        radius: f64,
    },
}

impl CodebookSpec {
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CodebookSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodebookSpec::AdaptivePcc => f.write_str("adaptive-pcc"),
            CodebookSpec::Rvq => f.write_str("rvq"),
            CodebookSpec::Dft => f.write_str("dft"),
            CodebookSpec::FixedPcc { radius } => write!(f, "fixed-pcc:{radius}"),
        }
    }
}

impl FromStr for CodebookSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "adaptive-pcc" => CodebookSpec::AdaptivePcc,
            "rvq" => CodebookSpec::Rvq,
            "dft" => CodebookSpec::Dft,
            _ => {
                let r = s
                    .strip_prefix("fixed-pcc:")
                    .and_then(|r| r.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::invalid("codebooks", format!("unknown codebook `{s}`"))
                    })?;
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::invalid(
                        "codebooks",
                        format!("fixed radius {r} is outside [0, 1]"),
                    ));
                }
                CodebookSpec::FixedPcc { radius: r }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PackingConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for PackingConfig {
    fn default() -> Self {
        let o = PackingOptions::default();
        Self {
            seed: 1,
            restarts: o.restarts,
            max_iters: o.max_iters,
        }
    }
}

impl PackingConfig {
    pub fn options(&self) -> PackingOptions {
        PackingOptions {
            restarts: self.restarts,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_t: usize,
    /// Antenna counts swept by the radius experiment; `None` means `[n_t]`.
    pub n_t_grid: Option<Vec<usize>>,
    pub b_bits: u32,
    pub d_over_lambda: f64,
    pub k_grid_db: Vec<f64>,
    pub g_sq_values: Option<Vec<f64>>,
    pub codebooks: Vec<CodebookSpec>,
    pub trials: usize,
    pub master_seed: u64,
    pub theta_mode: ThetaMode,
    pub radius_bits: Option<u32>,
    pub packing: PackingConfig,
}

pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;

fn comparison_codebooks() -> Vec<CodebookSpec> {
    vec![
        CodebookSpec::AdaptivePcc,
        CodebookSpec::Rvq,
        CodebookSpec::Dft,
        CodebookSpec::FixedPcc { radius: 0.9 },
        CodebookSpec::FixedPcc { radius: 0.6 },
        CodebookSpec::FixedPcc { radius: 0.3 },
    ]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_t: 4,
            n_t_grid: None,
            b_bits: 4,
            d_over_lambda: 0.5,
            k_grid_db: vec![-10.0, -5.0, 0.0, 3.0, 5.0, 10.0, 15.0, 20.0],
            g_sq_values: None,
            codebooks: comparison_codebooks(),
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            theta_mode: ThetaMode::Uniform,
            radius_bits: None,
            packing: PackingConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Radius mean vs. its approximation, `n_t ∈ {4, 6}`, 5th/10th percentile
    /// LOS power.
    pub fn radius_approx_default() -> Self {
        Self {
            n_t_grid: Some(vec![4, 6]),
            k_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            g_sq_values: Some(vec![0.0513, 0.1054]),
            codebooks: vec![CodebookSpec::AdaptivePcc],
            ..Self::default()
        }
    }

    /// Mean beamforming gain over a K sweep.
    pub fn gain_vs_k_default() -> Self {
        Self::default()
    }

    /// Gain CDF at `K = 5 dB`, median and 10th percentile LOS power.
    // Grid values stay literal to 4 digits; 0.6931 is not meant as ln 2.
    #[allow(clippy::approx_constant)]
    pub fn gain_cdf_default() -> Self {
        Self {
            k_grid_db: vec![5.0],
            g_sq_values: Some(vec![0.6931, 0.1054]),
            ..Self::default()
        }
    }

    pub fn n_t_values(&self) -> Vec<usize> {
        self.n_t_grid.clone().unwrap_or_else(|| vec![self.n_t])
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::invalid("trials", "need at least one trial"));
        }
        if trial_bits_exceeded(self.trials) {
            return Err(Error::invalid(
                "trials",
                "at most 2^32 trials per grid point",
            ));
        }
        for &n in std::iter::once(&self.n_t).chain(self.n_t_grid.iter().flatten()) {
            if n < 2 {
                return Err(Error::invalid("n_t", "need at least 2 transmit antennas"));
            }
        }
        if matches!(&self.n_t_grid, Some(g) if g.is_empty()) {
            return Err(Error::invalid("n_t_grid", "must not be empty"));
        }
        if self.b_bits < 1 || self.b_bits > 20 {
            return Err(Error::invalid("b_bits", "must be between 1 and 20"));
        }
        if !(self.d_over_lambda > 0.0 && self.d_over_lambda.is_finite()) {
            return Err(Error::invalid("d_over_lambda", "must be a positive real"));
        }
        if self.k_grid_db.is_empty() {
            return Err(Error::invalid("k_grid_db", "must not be empty"));
        }
        if self.k_grid_db.iter().any(|k| !k.is_finite()) {
            return Err(Error::invalid("k_grid_db", "values must be finite"));
        }
        if let Some(g) = &self.g_sq_values {
            if g.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
                return Err(Error::invalid(
                    "g_sq_values",
                    "values must be finite and ≥ 0",
                ));
            }
        }
        if self.radius_bits == Some(0) {
            return Err(Error::invalid("radius_bits", "must be at least 1"));
        }
        if self.packing.restarts < 1 {
            return Err(Error::invalid("packing_restarts", "must be at least 1"));
        }
        Ok(())
    }

    /// The config as ordered `key = value` pairs; parsing them back with
    /// [`ExperimentConfig::apply`] reproduces `self` exactly.
    pub fn to_key_values(&self) -> Vec<(&'static str, String)> {
        fn list<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        vec![
            ("n_t", self.n_t.to_string()),
            (
                "n_t_grid",
                self.n_t_grid.as_deref().map_or("none".into(), list),
            ),
            ("b_bits", self.b_bits.to_string()),
            ("d_over_lambda", self.d_over_lambda.to_string()),
            ("k_grid_db", list(&self.k_grid_db)),
            (
                "g_sq_values",
                self.g_sq_values.as_deref().map_or("none".into(), list),
            ),
            ("codebooks", list(&self.codebooks)),
            ("trials", self.trials.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("theta", self.theta_mode.to_string()),
            (
                "radius_bits",
                self.radius_bits.map_or("none".into(), |b| b.to_string()),
            ),
            ("packing_seed", self.packing.seed.to_string()),
            ("packing_restarts", self.packing.restarts.to_string()),
            ("packing_iters", self.packing.max_iters.to_string()),
        ]
    }

    /// Sets one key. Errors name the key.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "n_t" => self.n_t = parse_scalar("n_t", value)?,
            "n_t_grid" => self.n_t_grid = parse_optional("n_t_grid", value, parse_list)?,
            "b_bits" => self.b_bits = parse_scalar("b_bits", value)?,
            "d_over_lambda" => self.d_over_lambda = parse_scalar("d_over_lambda", value)?,
            "k_grid_db" => self.k_grid_db = parse_list("k_grid_db", value)?,
            "g_sq_values" => self.g_sq_values = parse_optional("g_sq_values", value, parse_list)?,
            "codebooks" => self.codebooks = parse_list("codebooks", value)?,
            "trials" => self.trials = parse_scalar("trials", value)?,
            "master_seed" => self.master_seed = parse_scalar("master_seed", value)?,
            "theta" => self.theta_mode = value.parse()?,
            "radius_bits" => self.radius_bits = parse_optional("radius_bits", value, parse_scalar)?,
            "packing_seed" => self.packing.seed = parse_scalar("packing_seed", value)?,
            "packing_restarts" => self.packing.restarts = parse_scalar("packing_restarts", value)?,
            "packing_iters" => self.packing.max_iters = parse_scalar("packing_iters", value)?,
            other => return Err(Error::UnknownKey(other.to_string())),
        }
        Ok(())
    }
}

fn trial_bits_exceeded(trials: usize) -> bool {
    (trials as u64) > (1u64 << 32)
}

fn parse_scalar<T: FromStr>(name: &'static str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(name, format!("cannot parse `{value}`")))
}

fn parse_list<T: FromStr>(name: &'static str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_scalar(name, s))
        .collect()
}

fn parse_optional<T>(
    name: &'static str,
    value: &str,
    f: impl Fn(&'static str, &str) -> Result<T>,
) -> Result<Option<T>> {
    if value == "none" {
        Ok(None)
    } else {
        f(name, value).map(Some)
    }
}

/// Splits flat config text into `(line, key, value)` triples.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values_round_trip() {
        let mut cfg = ExperimentConfig::radius_approx_default();
        cfg.theta_mode = ThetaMode::Fixed(0.123456789012345);
        cfg.radius_bits = Some(5);
        cfg.k_grid_db = vec![-3.3, 0.1, 1e-7];
        let mut back = ExperimentConfig::default();
        for (k, v) in cfg.to_key_values() {
            back.apply(k, &v).unwrap();
        }
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_and_bad_values() {
        let mut cfg = ExperimentConfig::default();
        assert!(matches!(cfg.apply("nt", "4"), Err(Error::UnknownKey(k)) if k == "nt"));
        assert!(matches!(
            cfg.apply("trials", "many"),
            Err(Error::InvalidArgument { name: "trials", .. })
        ));
        assert!(cfg.apply("codebooks", "rvq,fixed-pcc:1.5").is_err());
        assert!(cfg.apply("theta", "4.0").is_err());
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.trials = 0));
        assert!(bad(|c| c.n_t = 1));
        assert!(bad(|c| c.k_grid_db.clear()));
        assert!(bad(|c| c.g_sq_values = Some(vec![-1.0])));
        assert!(bad(|c| c.radius_bits = Some(0)));
        assert!(bad(|c| c.n_t_grid = Some(vec![])));
    }

    #[test]
    fn parses_text() {
        let kv = parse_key_values("# header\n\ntrials = 10  # few\nk_grid_db=0, 5\n").unwrap();
        assert_eq!(kv[0], (3, "trials".to_string(), "10".to_string()));
        assert_eq!(kv[1].2, "0, 5");
        assert!(parse_key_values("trials 10").is_err());
    }
}
