use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use gevrey_core::experiment::{parse_config, run, Kind};
use gevrey_core::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    VerifyLemmas,
    Simulate,
    TrackRadius,
    FitDecay,
    Convergence,
}

impl From<Command> for Kind {
    fn from(c: Command) -> Kind {
        match c {
            Command::VerifyLemmas => Kind::VerifyLemmas,
            Command::Simulate => Kind::Simulate,
            Command::TrackRadius => Kind::TrackRadius,
            Command::FitDecay => Kind::FitDecay,
            Command::Convergence => Kind::Convergence,
        }
    }
}

/// Gevrey-class NLW experiments: lemma checks, simulation, radius tracking.
#[derive(Debug, Parser)]
#[command(name = "gevrey", version)]
struct Cli {
    /// Experiment kind; must agree with `kind` in the config if present.
    #[arg(value_enum)]
    command: Command,
    /// `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Added to every seed in the config.
    #[arg(long, default_value_t = 0)]
    seed_offset: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gevrey: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let text = std::fs::read_to_string(&cli.config).map_err(|source| Error::Io {
        path: cli.config.clone(),
        source,
    })?;
    let kind = Kind::from(cli.command);
    // the subcommand supplies the kind when the file leaves it out
    let has_kind = text
        .lines()
        .any(|l| l.split('#').next().unwrap_or("").trim_start().starts_with("kind"));
    let text = if has_kind {
        text
    } else {
        format!("kind = {kind}\n{text}")
    };
    let config = parse_config(&text)?;
    if config.kind != kind {
        return Err(Error::invalid(format!(
            "subcommand {kind} does not match config kind {}",
            config.kind
        )));
    }
    let out = cli
        .out
        .clone()
        .or_else(|| config.out())
        .ok_or_else(|| Error::invalid("no output directory: pass --out or set `out`"))?;
    let manifest = run(&config, &out, cli.seed_offset)?;
    println!("{kind}: {} file(s) in {}", manifest.outputs.len(), out.display());
    for (k, v) in &manifest.summary {
        println!("  {k} = {v:.6e}");
    }
    for flag in &manifest.flags {
        println!("  flag: {flag}");
    }
    Ok(())
}
