use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rsp_cli::{run, CliError, Command, Config};

#[derive(Parser, Debug)]
#[command(name = "rsp", version, about = "Remote state preparation runs: synth, fidelity, sweep, correlator, propagate")]
struct Args {
    /// synth | fidelity | sweep | correlator | propagate
    command: String,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides [output] dir.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "RSP_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let cmd = Command::parse(&args.command)
        .ok_or_else(|| CliError::config("command", format!("unknown command '{}'", args.command)))?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::config("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config("threads", e.to_string()))?;
    }
    let bytes = std::fs::read(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::config("config", "not valid UTF-8"))?;
    let cfg = Config::parse(&text)?;
    let out = match &args.out {
        Some(p) => p.clone(),
        None => PathBuf::from(cfg.raw("output", "dir").unwrap_or("out")),
    };
    let result = run(cmd, &cfg, &bytes, &out)?;
    for f in &result.files {
        println!("{}", f.display());
    }
    Ok(())
}
