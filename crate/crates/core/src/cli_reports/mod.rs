//! Figure reproduction and ad-hoc estimates behind the `irsdof` binary.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{parse_config_text, parse_override, Command, EstimateMode, IaPreset, RunRequest, Settings};
pub use output::{csv_string, render_svg, write_csv, Curve, CSV_HEADER};

use crate::channel_model::SystemConfig;
use crate::dof_bounds::{
    active_lower_sum, active_upper_sum, eps_relaxed_lower_sum_mc, passive_lower_sum_mc, passive_upper_sum_mc,
    rho_limited_lower_sum_mc, sinr_outage_mc, BoundCurvePoint, EstimatorOptions,
};
use crate::error::{Error, Result};
use crate::ia_verifier::{achieved_dof, run_check, IaConfig};
use crate::mc_engine::McEngine;

/// Files written by a run and the lines printed for the user.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

pub const METADATA_FILE: &str = "run_config.txt";

impl Settings {
    pub fn system(&self, k: usize, q: usize, blockage: f64) -> SystemConfig {
        SystemConfig {
            k,
            q,
            wavelength_m: self.wavelength_m,
            dist_irs_m: self.dist_irs_m,
            dist_direct_m: self.dist_direct_m,
            blockage,
            snr_rho: self.snr_rho,
            noise_n0: self.noise_n0,
        }
    }

    pub fn options(&self) -> EstimatorOptions {
        EstimatorOptions {
            engine: McEngine::new(self.workers),
            b_search: self.b_search,
            lambda_strategy: self.lambda_strategy,
            ..EstimatorOptions::new(self.samples, self.seed)
        }
    }
}

fn constant_curve(name: &str, label: &str, qs: &[usize], value: f64, tag: &str) -> Curve {
    Curve::over_q(
        name,
        label,
        qs.iter().map(|&q| BoundCurvePoint::closed_form(q, value, tag)).collect(),
    )
}

/// Active surface: closed-form lower and upper bounds and the K/2 baseline.
pub fn fig1_curves(s: &Settings) -> Vec<Curve> {
    let k = s.k;
    let lower = s
        .q_grid
        .iter()
        .map(|&q| BoundCurvePoint::closed_form(q, active_lower_sum(k, q), "active-lower"))
        .collect();
    let upper = s
        .q_grid
        .iter()
        .map(|&q| BoundCurvePoint::closed_form(q, active_upper_sum(k, q), "active-upper"))
        .collect();
    vec![
        Curve::over_q("fig1_active_lower", "lower bound", lower),
        Curve::over_q("fig1_active_upper", "upper bound", upper),
        constant_curve("fig1_no_irs", "no IRS", &s.q_grid, k as f64 / 2.0, "no-irs"),
    ]
}

/// Passive surface: Monte Carlo lower and upper bounds against Q.
pub fn fig2_curves(s: &Settings) -> Result<Vec<Curve>> {
    let opts = s.options();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &q in &s.q_grid {
        let cfg = s.system(s.k, q, s.hhat);
        lower.push(passive_lower_sum_mc(&cfg, &opts)?);
        upper.push(passive_upper_sum_mc(&cfg, &opts)?);
    }
    Ok(vec![
        Curve::over_q("fig2_passive_lower", "lower bound", lower),
        Curve::over_q("fig2_passive_upper", "upper bound", upper),
        constant_curve("fig2_no_irs", "no IRS", &s.q_grid, s.k as f64 / 2.0, "no-irs"),
    ])
}

/// ε-relaxed lossless surface: one lower-bound curve per ε.
pub fn fig3_curves(s: &Settings) -> Result<Vec<Curve>> {
    let block = s.k * s.k;
    for &q in &s.q_grid {
        if q < block {
            return Err(Error::TooFewElements {
                required: block,
                available: q,
            });
        }
        if q % block != 0 {
            return Err(Error::Config(format!("Q = {q} is not a multiple of K² = {block}")));
        }
    }
    let opts = s.options();
    let mut curves = Vec::new();
    for &eps in &s.eps_list {
        let pts = s
            .q_grid
            .iter()
            .map(|&q| eps_relaxed_lower_sum_mc(&s.system(s.k, q, s.hhat), eps, &opts))
            .collect::<Result<Vec<_>>>()?;
        curves.push(Curve::over_q(&format!("fig3_eps_{eps}"), &format!("ε = {eps}"), pts));
    }
    Ok(curves)
}

fn over_k(name: &str, label: &str, ks: &[usize], points: Vec<BoundCurvePoint>) -> Curve {
    Curve {
        name: name.into(),
        label: label.into(),
        x: ks.iter().map(|&k| k as f64).collect(),
        points,
    }
}

fn tag_k(mut p: BoundCurvePoint, k: usize) -> BoundCurvePoint {
    p.method_tag = format!("{}/k={k}", p.method_tag);
    p
}

/// Fixed Q, varying K. The `q` column holds the fixed Q and the user count is
/// appended to each method tag as `/k=K`.
pub fn fig4_curves(s: &Settings) -> Result<Vec<Curve>> {
    let opts = s.options();
    let q = s.q;
    let mut passive = Vec::new();
    let mut eps = Vec::new();
    let mut half = Vec::new();
    let mut full = Vec::new();
    for &k in &s.k_grid {
        passive.push(tag_k(passive_lower_sum_mc(&s.system(k, q, s.hhat_passive), &opts)?, k));
        // with fewer than K² elements no block exists and Λ = 0 surely
        let e = if q < k * k {
            BoundCurvePoint::closed_form(q, k as f64 / 2.0, format!("eps-lower/eps={}/no-block", s.epsilon))
        } else {
            eps_relaxed_lower_sum_mc(&s.system(k, q, s.hhat_eps), s.epsilon, &opts)?
        };
        eps.push(tag_k(e, k));
        half.push(tag_k(BoundCurvePoint::closed_form(q, k as f64 / 2.0, "no-irs"), k));
        full.push(tag_k(BoundCurvePoint::closed_form(q, k as f64, "users"), k));
    }
    let ks = &s.k_grid;
    Ok(vec![
        over_k("fig4_passive_lower", "passive lower", ks, passive),
        over_k("fig4_eps_lower", &format!("ε = {} lower", s.epsilon), ks, eps),
        over_k("fig4_no_irs", "K/2", ks, half),
        over_k("fig4_users", "K", ks, full),
    ])
}

pub fn estimate_points(s: &Settings) -> Result<Vec<BoundCurvePoint>> {
    let cfg = s.system(s.k, s.q, s.hhat);
    let opts = s.options();
    Ok(match s.mode {
        EstimateMode::Active => {
            if s.k < 2 {
                return Err(Error::Config("active bounds need at least two users".into()));
            }
            vec![
                BoundCurvePoint::closed_form(s.q, active_lower_sum(s.k, s.q), "active-lower"),
                BoundCurvePoint::closed_form(s.q, active_upper_sum(s.k, s.q), "active-upper"),
            ]
        }
        EstimateMode::Passive => vec![passive_lower_sum_mc(&cfg, &opts)?, passive_upper_sum_mc(&cfg, &opts)?],
        EstimateMode::Eps => vec![eps_relaxed_lower_sum_mc(&cfg, s.epsilon, &opts)?],
        EstimateMode::Rho => vec![rho_limited_lower_sum_mc(&cfg, s.epsilon, &opts)?],
        EstimateMode::Sinr => vec![BoundCurvePoint::from_estimate(s.q, sinr_outage_mc(&cfg, s.margin, &opts)?)],
    })
}

pub fn ia_config(s: &Settings) -> Result<IaConfig> {
    match s.preset {
        IaPreset::Example1 => IaConfig::example1(s.n),
        IaPreset::Generic => {
            let network = s
                .network
                .clone()
                .ok_or_else(|| Error::Config("generic preset needs network".into()))?;
            IaConfig::generic(network, s.n, s.t.clone())
        }
    }
}

/// Structured text summary of an alignment check.
pub fn ia_check_text(s: &Settings) -> Result<String> {
    let cfg = ia_config(s)?;
    let report = run_check(&cfg, s.seed)?;
    let mut text = format!("n = {}\nseed = {}\n{report}", cfg.n, s.seed);
    match achieved_dof(&report, cfg.slots) {
        Ok(d) => {
            let exact: Vec<String> = d.exact.iter().map(ToString::to_string).collect();
            let approx: Vec<String> = d.point.d.iter().map(|x| format!("{x:.6}")).collect();
            text += &format!("achieved_dof = {}\nachieved_dof_approx = {}\n", exact.join(","), approx.join(","));
        }
        Err(Error::NotDecodable { receiver }) => {
            text += &format!("achieved_dof = none (receiver {} not decodable)\n", receiver + 1);
        }
        Err(e) => return Err(e),
    }
    Ok(text)
}

fn write_curves(dir: &Path, stem: &str, title: &str, x_label: &str, curves: &[Curve], out: &mut RunOutput) -> Result<()> {
    for c in curves {
        let path = dir.join(format!("{}.csv", c.name));
        write_csv(&path, &c.points)?;
        out.files.push(path);
        for (x, p) in c.x.iter().zip(&c.points) {
            out.summary.push(format!(
                "{:<20} x={x:<5} value={:.6} ci=[{:.6}, {:.6}] {}",
                c.name, p.value, p.ci_low, p.ci_high, p.method_tag
            ));
        }
    }
    let svg = dir.join(format!("{stem}.svg"));
    fs::write(&svg, render_svg(title, x_label, "sum DoF", curves))?;
    out.files.push(svg);
    Ok(())
}

/// Resolves the request, runs the command and writes its outputs together with
/// the resolved settings under `request.out_path`.
pub fn run(request: &RunRequest) -> Result<RunOutput> {
    let s = request.resolve()?;
    let dir = request.out_path.as_path();
    fs::create_dir_all(dir)?;
    let mut out = RunOutput::default();
    match s.command {
        Command::Fig1 => write_curves(dir, "fig1", "Active IRS", "Q", &fig1_curves(&s), &mut out)?,
        Command::Fig2 => write_curves(dir, "fig2", "Passive IRS", "Q", &fig2_curves(&s)?, &mut out)?,
        Command::Fig3 => write_curves(dir, "fig3", "ε-relaxed lossless IRS", "Q", &fig3_curves(&s)?, &mut out)?,
        Command::Fig4 => write_curves(dir, "fig4", &format!("Q = {}", s.q), "K", &fig4_curves(&s)?, &mut out)?,
        Command::Estimate => {
            let pts = estimate_points(&s)?;
            let path = dir.join("estimate.csv");
            write_csv(&path, &pts)?;
            out.files.push(path);
            for p in &pts {
                out.summary.push(format!(
                    "{} value={:.6} ci=[{:.6}, {:.6}] samples={} seed={}",
                    p.method_tag, p.value, p.ci_low, p.ci_high, p.samples, p.seed
                ));
            }
        }
        Command::IaCheck => {
            let text = ia_check_text(&s)?;
            let path = dir.join("ia_check.txt");
            fs::write(&path, &text)?;
            out.files.push(path);
            out.summary.extend(text.lines().map(str::to_string));
        }
    }
    let meta = dir.join(METADATA_FILE);
    fs::write(&meta, s.metadata())?;
    out.files.push(meta);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_landmarks() {
        let c = fig1_curves(&Settings::defaults(Command::Fig1));
        let lower: Vec<f64> = c[0].points.iter().map(|p| p.value).collect();
        let upper: Vec<f64> = c[1].points.iter().map(|p| p.value).collect();
        assert_eq!(lower, vec![1.5, 1.5, 1.5, 1.5, 2.0, 2.0, 3.0, 3.0, 3.0]);
        assert_eq!(upper[0], 1.5);
        assert_eq!(upper[6], 3.0);
        assert!(c[2].points.iter().all(|p| p.value == 1.5));
    }

    #[test]
    fn fig3_rejects_short_grid() {
        let mut s = Settings::defaults(Command::Fig3);
        s.q_grid = vec![8];
        assert!(matches!(fig3_curves(&s), Err(Error::TooFewElements { .. })));
        s.q_grid = vec![10];
        assert!(matches!(fig3_curves(&s), Err(Error::Config(_))));
        s.q_grid = vec![9];
        s.samples = 20;
        assert_eq!(fig3_curves(&s).unwrap()[0].points[0].q, 9);
    }

    #[test]
    fn fig4_tags_carry_k() {
        let mut s = Settings::defaults(Command::Fig4);
        s.k_grid = vec![2, 3];
        s.samples = 10;
        let c = fig4_curves(&s).unwrap();
        assert_eq!(c[0].points[1].method_tag, "passive-lower/pinv/canonical-b/k=3");
        assert_eq!(c[0].points[1].q, 200);
        assert_eq!(c[3].points.iter().map(|p| p.value).collect::<Vec<_>>(), vec![2.0, 3.0]);
        assert_eq!(c[2].points[1].value, 1.5);
        s.k_grid = vec![15];
        let c = fig4_curves(&s).unwrap();
        assert_eq!(c[1].points[0].value, 7.5);
        assert_eq!(c[1].points[0].method_tag, "eps-lower/eps=0.9/no-block/k=15");
    }

    #[test]
    fn run_writes_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let request = RunRequest::new(Command::Estimate, dir.path()).set("mode", "active").set("q", 4);
        let out = run(&request).unwrap();
        let meta = fs::read_to_string(dir.path().join(METADATA_FILE)).unwrap();
        assert!(meta.contains("mode = active") && meta.contains("q = 4"));
        assert_eq!(out.files.len(), 2);
        let csv = fs::read_to_string(dir.path().join("estimate.csv")).unwrap();
        assert!(csv.contains("4,2,2,2,closed-form,active-lower,0,0"));
    }
}
