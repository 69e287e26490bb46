use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use photostat_cli::{parse_config, render, run, CliError, Format, WORKERS_ENV};

/// Run one photostat job described by a JSON config.
#[derive(Parser, Debug)]
#[command(name = "photostat", version)]
struct Args {
    /// Job config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides output.path. Standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides output.format.
    #[arg(long)]
    format: Option<Format>,
    /// Worker threads for grid sampling; overrides the config field.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = parse_config(&text).map_err(CliError::Config)?;

    // flag and env beat the config field
    let workers = args.workers.or(cfg.workers);
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Config(vec![photostat_cli::ConfigIssue {
                pointer: "/workers".into(),
                message: "worker count must be at least 1".into(),
            }]));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    }

    let artifact = run(&cfg)?;
    let format = args.format.or(cfg.output.format).unwrap_or(Format::Csv);
    let out = render(&artifact, &cfg, format);
    let path = args.out.clone().or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    match path {
        Some(path) => {
            let write = |p: &PathBuf, body: &str| {
                fs::write(p, body).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))
            };
            write(&path, &out.body)?;
            if let Some(sidecar) = &out.sidecar {
                let mut side = path.clone().into_os_string();
                side.push(".sidecar.json");
                write(&PathBuf::from(side), sidecar)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.body.as_bytes()).and_then(|_| stdout.flush()) {
                // a closed reader (`| head`) is not a failure of the job
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(CliError::Io(format!("cannot write standard output: {e}")));
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
