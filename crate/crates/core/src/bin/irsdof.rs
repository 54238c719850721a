use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use irsdof::cli_reports::{parse_config_text, parse_override, run, Command, RunRequest};
use irsdof::Error;

#[derive(Parser)]
#[command(name = "irsdof", version, about = "Sum-DoF bounds for interference channels with an IRS")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Monte Carlo samples per point.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Flat `key = value` file applied before `--set`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one setting, e.g. `--set hhat=1e-7`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Sub {
    /// Active IRS closed-form bounds against Q.
    Fig1(Common),
    /// Passive IRS Monte Carlo bounds against Q.
    Fig2(Common),
    /// ε-relaxed lossless lower bounds against Q.
    Fig3(Common),
    /// Lower bounds against K at fixed Q.
    Fig4(Common),
    /// One bound at a single (K, Q).
    Estimate {
        #[command(flatten)]
        common: Common,
        /// active, passive, eps, rho or sinr.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Interference alignment decodability check.
    IaCheck {
        #[command(flatten)]
        common: Common,
        /// example1 or generic.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
}

fn build_request(cli: Cli) -> Result<RunRequest, Error> {
    let mut extra = Vec::new();
    let (command, common) = match cli.command {
        Sub::Fig1(c) => (Command::Fig1, c),
        Sub::Fig2(c) => (Command::Fig2, c),
        Sub::Fig3(c) => (Command::Fig3, c),
        Sub::Fig4(c) => (Command::Fig4, c),
        Sub::Estimate { common, mode } => {
            extra.extend(mode.map(|m| ("mode".to_string(), m)));
            (Command::Estimate, common)
        }
        Sub::IaCheck { common, preset, n } => {
            extra.extend(preset.map(|p| ("preset".to_string(), p)));
            extra.extend(n.map(|n| ("n".to_string(), n.to_string())));
            (Command::IaCheck, common)
        }
    };
    let mut request = RunRequest::new(command, common.out);
    if let Some(path) = common.config {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        request.overrides.extend(parse_config_text(&text)?);
    }
    for s in &common.set {
        request.overrides.push(parse_override(s)?);
    }
    request.overrides.extend(extra);
    let flags = [
        ("samples", common.samples.map(|v| v.to_string())),
        ("seed", common.seed.map(|v| v.to_string())),
        ("workers", common.workers.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            request.overrides.push((k.to_string(), v));
        }
    }
    Ok(request)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_request(cli).and_then(|request| run(&request));
    match result {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("irsdof: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
