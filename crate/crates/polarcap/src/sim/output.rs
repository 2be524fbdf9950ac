//! CSV and JSON renderings of experiment results.
//!
//! Both carry the figure and the resolved config. The CSV puts the config in
//! leading `# key = value` lines (the config-file grammar), followed by a
//! header row and one row per result; floats use 17 significant digits.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::codebooks::PackingReport;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    /// `--figure 2`: radius mean vs. its approximation.
    #[serde(rename = "2")]
    RadiusApprox,
    /// `--figure 3`: mean gain vs. K.
    #[serde(rename = "3")]
    GainVsK,
    /// `--figure 4`: gain CDF.
    #[serde(rename = "4")]
    GainCdf,
}

impl Figure {
    pub fn number(self) -> u8 {
        match self {
            Figure::RadiusApprox => 2,
            Figure::GainVsK => 3,
            Figure::GainCdf => 4,
        }
    }

    pub fn default_config(self) -> ExperimentConfig {
        match self {
            Figure::RadiusApprox => ExperimentConfig::radius_approx_default(),
            Figure::GainVsK => ExperimentConfig::gain_vs_k_default(),
            Figure::GainCdf => ExperimentConfig::gain_cdf_default(),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(Figure::RadiusApprox),
            "3" => Ok(Figure::GainVsK),
            "4" => Ok(Figure::GainCdf),
            _ => Err(Error::invalid(
                "figure",
                format!("expected 2, 3 or 4, got `{s}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub k_db: f64,
    pub n_t: usize,
    pub g_sq: Option<f64>,
    pub quantile: Option<f64>,
    pub codebook: String,
    pub statistic: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub trials: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub figure: Figure,
    pub config: ExperimentConfig,
    /// Audit of the shared Grassmannian ingredient, for gain experiments.
    pub packing: Option<PackingReport>,
    pub rows: Vec<ResultRow>,
}

pub const CSV_HEADER: &str =
    "k_db,n_t,g_sq,quantile,codebook,statistic,value,std_error,trials,master_seed";

fn f17(x: f64) -> String {
    crate::codebooks::fmt_f64(x)
}

fn opt17(x: Option<f64>) -> String {
    x.map(f17).unwrap_or_default()
}

#[derive(Serialize)]
struct JsonPacking {
    min_distance: f64,
    welch_rankin_bound: f64,
    iterations: usize,
    seed: u64,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    figure: Figure,
    master_seed: u64,
    config: &'a ExperimentConfig,
    packing: Option<JsonPacking>,
    rows: &'a [ResultRow],
}

impl ExperimentResult {
    /// `figure` followed by the config pairs.
    pub fn config_echo(&self) -> Vec<(&'static str, String)> {
        let mut kv = vec![("figure", self.figure.to_string())];
        kv.extend(self.config.to_key_values());
        kv
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.config_echo() {
            writeln!(out, "# {k} = {v}").unwrap();
        }
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                f17(r.k_db),
                r.n_t,
                opt17(r.g_sq),
                opt17(r.quantile),
                r.codebook,
                r.statistic,
                f17(r.value),
                opt17(r.std_error),
                r.trials,
                r.master_seed
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonDoc {
            figure: self.figure,
            master_seed: self.config.master_seed,
            config: &self.config,
            packing: self.packing.map(|p| JsonPacking {
                min_distance: p.min_distance,
                welch_rankin_bound: p.welch_rankin_bound,
                iterations: p.iterations,
                seed: p.seed,
            }),
            rows: &self.rows,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Short human-readable digest.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "figure {} | trials {} | seed {}\n",
            self.figure, self.config.trials, self.config.master_seed
        );
        if let Some(p) = &self.packing {
            writeln!(
                out,
                "grassmannian ingredient: min distance {:.5} (bound {:.5})",
                p.min_distance, p.welch_rankin_bound
            )
            .unwrap();
        }
        for r in &self.rows {
            if r.statistic == "gain_quantile" && r.quantile != Some(0.5) {
                continue;
            }
            let g = r.g_sq.map(|g| format!(" |g|²={g}")).unwrap_or_default();
            let se = r
                .std_error
                .map(|s| format!(" ± {s:.2e}"))
                .unwrap_or_default();
            let stat = if r.statistic == "gain_quantile" {
                "median_gain"
            } else {
                &r.statistic
            };
            writeln!(
                out,
                "K={:>6} dB n_t={}{} {:<16} {:<18} {:.6}{}",
                r.k_db, r.n_t, g, r.codebook, stat, r.value, se
            )
            .unwrap();
        }
        out
    }
}
