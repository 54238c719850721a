//! Flat `key = value` run settings.
//!
//! Precedence, lowest first: built-in defaults for the command, the config
//! file, `--set` overrides in order, then the dedicated `--samples`, `--seed`
//! and `--workers` flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::Ratio;

use crate::dof_bounds::BSearch;
use crate::error::{Error, Result};
use crate::irs_solvers::LambdaStrategy;
use crate::network_topology::NetworkMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Estimate,
    IaCheck,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Fig1,
        Command::Fig2,
        Command::Fig3,
        Command::Fig4,
        Command::Estimate,
        Command::IaCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Estimate => "estimate",
            Command::IaCheck => "ia-check",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    Active,
    Passive,
    Eps,
    Rho,
    Sinr,
}

impl EstimateMode {
    fn name(self) -> &'static str {
        match self {
            EstimateMode::Active => "active",
            EstimateMode::Passive => "passive",
            EstimateMode::Eps => "eps",
            EstimateMode::Rho => "rho",
            EstimateMode::Sinr => "sinr",
        }
    }
}

impl FromStr for EstimateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "active" => EstimateMode::Active,
            "passive" => EstimateMode::Passive,
            "eps" => EstimateMode::Eps,
            "rho" => EstimateMode::Rho,
            "sinr" => EstimateMode::Sinr,
            _ => return Err(Error::Config(format!("unknown mode {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IaPreset {
    Example1,
    Generic,
}

/// What to run, the raw overrides and where to write.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub command: Command,
    /// Applied in order on top of the command defaults.
    pub overrides: Vec<(String, String)>,
    pub out_path: PathBuf,
}

impl RunRequest {
    pub fn new(command: Command, out_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            overrides: Vec::new(),
            out_path: out_path.into(),
        }
    }

    pub fn set(mut self, key: &str, value: impl ToString) -> Self {
        self.overrides.push((key.to_string(), value.to_string()));
        self
    }

    pub fn resolve(&self) -> Result<Settings> {
        let mut s = Settings::defaults(self.command);
        for (k, v) in &self.overrides {
            s.set(k, v)?;
        }
        s.check()?;
        Ok(s)
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Splits a `key=value` command-line override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {s:?} is not key=value")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub command: Command,
    pub k: usize,
    pub q: usize,
    pub wavelength_m: f64,
    pub dist_irs_m: f64,
    pub dist_direct_m: f64,
    pub hhat: f64,
    pub snr_rho: f64,
    pub noise_n0: f64,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub q_grid: Vec<usize>,
    pub k_grid: Vec<usize>,
    pub eps_list: Vec<f64>,
    pub hhat_passive: f64,
    pub hhat_eps: f64,
    pub b_search: BSearch,
    pub lambda_strategy: LambdaStrategy,
    pub mode: EstimateMode,
    pub epsilon: f64,
    pub margin: f64,
    pub preset: IaPreset,
    pub n: usize,
    pub network: Option<NetworkMatrix>,
    pub t: Vec<Ratio<u64>>,
}

const KEYS: &[&str] = &[
    "k",
    "q",
    "wavelength_m",
    "dist_irs_m",
    "dist_direct_m",
    "hhat",
    "snr_rho",
    "noise_n0",
    "samples",
    "seed",
    "workers",
    "q_grid",
    "k_grid",
    "eps_list",
    "hhat_passive",
    "hhat_eps",
    "b_search",
    "lambda_strategy",
    "mode",
    "epsilon",
    "margin",
    "preset",
    "n",
    "network",
    "t",
];

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse(key, x))
        .collect()
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// fig2 grid: steps of 10 up to 200 with the knee region filled in.
pub fn default_fig2_grid() -> Vec<usize> {
    let mut g: Vec<usize> = (0..=200).step_by(10).collect();
    g.extend([2, 4, 5, 6, 8, 12, 14, 16, 18, 25, 35, 45]);
    g.sort_unstable();
    g.dedup();
    g
}

/// fig3 grid: multiples of 9 spaced roughly logarithmically up to 900.
pub fn default_fig3_grid() -> Vec<usize> {
    [1, 2, 3, 5, 8, 12, 20, 30, 50, 80, 100].iter().map(|m| 9 * m).collect()
}

impl Settings {
    pub fn defaults(command: Command) -> Self {
        let mut s = Self {
            command,
            k: 3,
            q: 0,
            wavelength_m: crate::channel_model::REFERENCE_WAVELENGTH_M,
            dist_irs_m: crate::channel_model::REFERENCE_DISTANCE_M,
            dist_direct_m: crate::channel_model::REFERENCE_DISTANCE_M,
            hhat: 2.5e-7,
            snr_rho: 1.0,
            noise_n0: 1.0,
            samples: crate::mc_engine::DEFAULT_FEASIBILITY_SAMPLES,
            seed: 1,
            workers: 0,
            q_grid: Vec::new(),
            k_grid: Vec::new(),
            eps_list: Vec::new(),
            hhat_passive: 5e-7,
            hhat_eps: 5e-10,
            b_search: BSearch::AllSubsets,
            lambda_strategy: LambdaStrategy::DisjointBlocks,
            mode: EstimateMode::Passive,
            epsilon: 0.9,
            margin: 0.1,
            preset: IaPreset::Example1,
            n: 2,
            network: None,
            t: Vec::new(),
        };
        match command {
            Command::Fig1 => s.q_grid = (0..=8).collect(),
            Command::Fig2 => s.q_grid = default_fig2_grid(),
            Command::Fig3 => {
                s.hhat = 5e-10;
                s.q_grid = default_fig3_grid();
                s.eps_list = vec![0.9, 0.8, 0.7];
            }
            Command::Fig4 => {
                s.q = 200;
                s.k_grid = vec![2, 3, 4, 6, 8, 10, 12, 14, 16, 18, 20];
                s.samples = 1000;
                s.b_search = BSearch::Canonical;
            }
            Command::Estimate => s.q = 10,
            Command::IaCheck => s.seed = 0,
        }
        s
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "k" => self.k = parse(key, v)?,
            "q" => self.q = parse(key, v)?,
            "wavelength_m" => self.wavelength_m = parse(key, v)?,
            "dist_irs_m" => self.dist_irs_m = parse(key, v)?,
            "dist_direct_m" => self.dist_direct_m = parse(key, v)?,
            "hhat" => self.hhat = parse(key, v)?,
            "snr_rho" => self.snr_rho = parse(key, v)?,
            "noise_n0" => self.noise_n0 = parse(key, v)?,
            "samples" => self.samples = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "workers" => self.workers = parse(key, v)?,
            "q_grid" => self.q_grid = parse_list(key, v)?,
            "k_grid" => self.k_grid = parse_list(key, v)?,
            "eps_list" => self.eps_list = parse_list(key, v)?,
            "hhat_passive" => self.hhat_passive = parse(key, v)?,
            "hhat_eps" => self.hhat_eps = parse(key, v)?,
            "b_search" => {
                self.b_search = match v {
                    "all" => BSearch::AllSubsets,
                    "canonical" => BSearch::Canonical,
                    _ => return Err(Error::Config(format!("b_search: expected all or canonical, got {v:?}"))),
                }
            }
            "lambda_strategy" => {
                self.lambda_strategy = match v {
                    "disjoint" => LambdaStrategy::DisjointBlocks,
                    "all-subsets" => LambdaStrategy::AllSubsets,
                    _ => {
                        return Err(Error::Config(format!(
                            "lambda_strategy: expected disjoint or all-subsets, got {v:?}"
                        )))
                    }
                }
            }
            "mode" => self.mode = v.parse()?,
            "epsilon" => self.epsilon = parse(key, v)?,
            "margin" => self.margin = parse(key, v)?,
            "preset" => {
                self.preset = match v {
                    "example1" => IaPreset::Example1,
                    "generic" => IaPreset::Generic,
                    _ => return Err(Error::Config(format!("preset: expected example1 or generic, got {v:?}"))),
                }
            }
            "n" => self.n = parse(key, v)?,
            "network" => self.network = Some(v.parse()?),
            "t" => self.t = parse_list(key, v)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        let positive = [
            ("wavelength_m", self.wavelength_m),
            ("dist_irs_m", self.dist_irs_m),
            ("dist_direct_m", self.dist_direct_m),
            ("snr_rho", self.snr_rho),
            ("noise_n0", self.noise_n0),
        ];
        for (name, x) in positive {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {x}")));
            }
        }
        for (name, x) in [("hhat", self.hhat), ("hhat_passive", self.hhat_passive), ("hhat_eps", self.hhat_eps)] {
            if !(x > 0.0 && x <= 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1], got {x}")));
            }
        }
        Ok(())
    }

    /// Every key with its resolved value, sorted by key.
    pub fn entries(&self) -> BTreeMap<&'static str, String> {
        let b_search = match self.b_search {
            BSearch::AllSubsets => "all",
            BSearch::Canonical => "canonical",
        };
        let lambda = match self.lambda_strategy {
            LambdaStrategy::DisjointBlocks => "disjoint",
            LambdaStrategy::AllSubsets => "all-subsets",
        };
        let preset = match self.preset {
            IaPreset::Example1 => "example1",
            IaPreset::Generic => "generic",
        };
        let network = self
            .network
            .as_ref()
            .map(|n| n.to_string().replace('\n', "/"))
            .unwrap_or_default();
        let values = [
            self.k.to_string(),
            self.q.to_string(),
            self.wavelength_m.to_string(),
            self.dist_irs_m.to_string(),
            self.dist_direct_m.to_string(),
            self.hhat.to_string(),
            self.snr_rho.to_string(),
            self.noise_n0.to_string(),
            self.samples.to_string(),
            self.seed.to_string(),
            self.workers.to_string(),
            join(&self.q_grid),
            join(&self.k_grid),
            join(&self.eps_list),
            self.hhat_passive.to_string(),
            self.hhat_eps.to_string(),
            b_search.to_string(),
            lambda.to_string(),
            self.mode.name().to_string(),
            self.epsilon.to_string(),
            self.margin.to_string(),
            preset.to_string(),
            self.n.to_string(),
            network,
            join(&self.t),
        ];
        KEYS.iter().copied().zip(values).collect()
    }

    /// Text accepted back by [`parse_config_text`], headed by the command.
    pub fn metadata(&self) -> String {
        let mut out = format!("# command = {}\n", self.command.name());
        for (k, v) in self.entries() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
