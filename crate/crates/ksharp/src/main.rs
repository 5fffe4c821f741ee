use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ksharp::commands::{self, resolve_out_dir};
use ksharp::formats;
use ksharp::manifest::{FileFormat, SchemeName};
use ksharp::{exit, CliError, CliResult, RunManifest};
use ksharp_core::simulate::RunStatus;

#[derive(Parser)]
#[command(name = "ksharp", version, about = "Traveling waves and simulations of u_t + uⁿu_x + [(u_x)^m]_xx = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for FileFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => FileFormat::Csv,
            Format::Json => FileFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Fourier,
    Fd4,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the peaked compact traveling wave; prints a JSON header.
    Profile {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        /// Output file (default: profile.<format> in the output directory).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a simulation described by a manifest.
    Simulate {
        /// JSON or key = value manifest.
        #[arg(long)]
        manifest: PathBuf,
        /// Extra `key = value` assignments applied after the manifest.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Characteristic scales that map the dimensional form to unit coefficients.
    Scale {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long = "vee", visible_alias = "V", default_value_t = 1.0, allow_negative_numbers = true)]
        vee: f64,
    },
    /// Evaluate M, P, H and I_k on every time of a snapshot file.
    Invariants {
        snapshot: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Orders k of I_k (comma separated or repeated).
        #[arg(long = "k", value_delimiter = ',', default_values_t = [1, 2, 3])]
        k: Vec<u32>,
        /// Derivative used in H.
        #[arg(long, value_enum, default_value_t = SchemeArg::Fourier)]
        scheme: SchemeArg,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn execute(cmd: Command) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    match cmd {
        Command::Profile {
            n,
            m,
            c,
            samples,
            out,
            format,
        } => {
            let data = commands::profile(n, m, c, samples)?;
            let format: FileFormat = format.into();
            let path = out.unwrap_or_else(|| resolve_out_dir(".").join(format!("profile.{}", format.extension())));
            commands::write_profile(&data, &path, format)?;
            let header = serde_json::to_string(&data.header).expect("header serializes");
            writeln!(stdout, "{header}").map_err(stdout_error)?;
        }
        Command::Simulate { manifest, overrides } => {
            let m = RunManifest::load(&manifest)?.with_overrides(&overrides)?;
            let report = commands::simulate(&m)?;
            write!(stdout, "{}", report.summary()).map_err(stdout_error)?;
            if let RunStatus::BlowUp { time, .. } = report.outcome.status {
                return Err(CliError::BlowUp { time });
            }
        }
        Command::Scale {
            epsilon,
            delta,
            n,
            m,
            vee,
        } => {
            let report = commands::scale(epsilon, delta, n, m, vee)?;
            write!(stdout, "{}", report.render()).map_err(stdout_error)?;
        }
        Command::Invariants {
            snapshot,
            n,
            m,
            k,
            scheme,
            out,
        } => {
            let scheme = match scheme {
                SchemeArg::Fourier => SchemeName::Fourier,
                SchemeArg::Fd4 => SchemeName::Fd4,
            };
            let rows = commands::invariants(&snapshot, n, m, &k, scheme.into())?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    formats::invariants_csv(file, &k, &rows).map_err(|e| CliError::io(&path, e.into()))?;
                }
                None => formats::invariants_csv(&mut stdout, &k, &rows).map_err(|e| stdout_error(e.into()))?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INVALID_ARGUMENTS as u8 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ksharp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
