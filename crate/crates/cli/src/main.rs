use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modular_analog::report::{
    canonical_json, render_text, run_blocks, run_obstructions, run_sequence, verify_certificate, Family, RunConfig,
};
use modular_analog::Error;

#[derive(Parser)]
#[command(name = "modan", version, about = "Integral block, lattice and cohomology certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Block partition, integrality, defect and nilpotency of the block of π_θ.
    Blocks(RunArgs),
    /// Hypothesis checks, the certified short exact sequence and the dimension shift.
    Sequence(RunArgs),
    /// Minimal and twisted obstruction dimensions for every character of the torus.
    Obstructions(RunArgs),
    /// Recheck a certificate from its recorded data.
    Verify { certificate: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = ["gl2", "heisenberg"])]
    family: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    /// Exponent of θ: a power of the torus generator, or of ζ_ℓ on Z.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<i64>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON certificate here; the text table then goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with the same fields as the flags. Flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self, default_p: Option<u64>) -> Result<RunConfig, Error> {
        let base: Option<RunConfig> = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                Some(serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?)
            }
            None => None,
        };
        let family = match self.family.as_deref() {
            Some("heisenberg") => Family::Heisenberg,
            Some(_) => Family::Gl2,
            None => base.as_ref().map_or(Family::Gl2, |c| c.family),
        };
        let p = self
            .p
            .or(base.as_ref().map(|c| c.p))
            .or(default_p)
            .ok_or_else(|| Error::InvalidInput("--p is required".into()))?;
        let l = self
            .l
            .or(base.as_ref().map(|c| c.l))
            .ok_or_else(|| Error::InvalidInput("--l is required".into()))?;
        Ok(RunConfig {
            family,
            p,
            l,
            theta: self.theta.or(base.as_ref().and_then(|c| c.theta)),
            precision: self.precision.or(base.as_ref().and_then(|c| c.precision)),
            seed: self.seed.or(base.as_ref().map(|c| c.seed)).unwrap_or(0),
            out: self
                .out
                .as_ref()
                .map(|p| p.display().to_string())
                .or(base.and_then(|c| c.out)),
        })
    }
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::InvalidInput(_) | Error::Malformed(_) | Error::Json(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn emit(cfg: &RunConfig, cert: &serde_json::Value) -> Result<(), Error> {
    let text = canonical_json(cert);
    match &cfg.out {
        Some(path) => {
            fs::write(path, text)?;
            print!("{}", render_text(cert));
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Blocks(a) => {
            let cfg = a.resolve(None)?;
            emit(&cfg, &run_blocks(&cfg)?)?;
        }
        Cmd::Sequence(a) => {
            let cfg = a.resolve(None)?;
            emit(&cfg, &run_sequence(&cfg)?)?;
        }
        Cmd::Obstructions(a) => {
            let cfg = a.resolve(Some(3))?;
            emit(&cfg, &run_obstructions(&cfg)?)?;
        }
        Cmd::Verify { certificate } => {
            let text = fs::read_to_string(&certificate)?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("not JSON: {e}")))?;
            let report = verify_certificate(&v)?;
            for (name, ok) in &report.checks {
                println!("{:<28} {}", name, if *ok { "ok" } else { "FAIL" });
            }
            if report.passed() {
                println!("verify: pass");
            } else {
                println!("verify: fail");
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
