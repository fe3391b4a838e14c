//! `virtlab` command line: list, show, build, sweep, serve.
//!
//! Exit status is 0 on success, 1 on a usage error (bad flags, unknown
//! scenario, invalid config) and 2 when a computation or write fails.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use virtlab::export::{characteristics_json, data_json};
use virtlab::patterns::characteristics_sweep;
use virtlab::scenarios::{build_to_dir, catalog, find, parse_config, parse_formats, Format, ScenarioSpec, DEFAULT_FORMATS};
use virtlab::Error;
use virtlab_service::{ServiceConfig, DEFAULT_PORT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "virtlab", version, about = "Virtual antenna laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print catalog ids and titles.
    List,
    /// Print a scenario spec as JSON.
    Show {
        /// Catalog id or path to a JSON config.
        scenario: String,
    },
    /// Build a scenario and write its artifacts.
    Build {
        /// Catalog id or path to a JSON config.
        scenario: String,
        /// Output directory.
        #[arg(long, env = "VIRTLAB_OUT", default_value = "out")]
        out: PathBuf,
        /// Comma-separated: vrml, svg, json, frames.
        #[arg(long, default_value = "vrml,json")]
        formats: String,
        /// Frame count; also writes the frame sequence.
        #[arg(long)]
        frames: Option<usize>,
        /// Evaluation grid as NxM (n_theta x n_phi).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Dipole characteristics over a length range, as JSON.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        l_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        l_max: f64,
        #[arg(long)]
        steps: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Bind address.
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Permit cross-origin requests.
        #[arg(long)]
        cors: bool,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::InvalidParameter { .. } => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_COMPUTE,
        message: format!("{}: {e}", path.display()),
    }
}

/// Catalog id, or a path when the argument names a `.json` file.
pub fn resolve_scenario(arg: &str) -> Result<ScenarioSpec, Failure> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{arg}: {e}")))?;
        return parse_config(&text).map_err(|e| Failure::usage(format!("{arg}: {e}")));
    }
    find(arg).ok_or_else(|| Failure::usage(format!("unknown scenario `{arg}` (see `virtlab list`)")))
}

/// `NxM` → `(N, M)`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(format!("invalid --grid `{s}`: expected NxM, e.g. 181x360"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    let out = |stdout: &mut dyn Write, s: &str| {
        stdout
            .write_all(s.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e))
    };
    match cmd {
        Command::List => {
            let specs = catalog();
            let width = specs.iter().map(|s| s.id.len()).max().unwrap_or(0);
            let mut text = String::new();
            for s in specs {
                text.push_str(&format!("{:<width$}  {}\n", s.id, s.title));
            }
            out(stdout, &text)
        }
        Command::Show { scenario } => {
            let spec = resolve_scenario(&scenario)?;
            out(stdout, &format!("{}\n", spec.to_json()))
        }
        Command::Build {
            scenario,
            out: dir,
            formats,
            frames,
            grid,
        } => {
            let mut spec = resolve_scenario(&scenario)?;
            let mut formats: BTreeSet<Format> = if formats.trim().is_empty() {
                DEFAULT_FORMATS.into_iter().collect()
            } else {
                parse_formats(&formats)?
            };
            if let Some(n) = frames {
                spec = spec.with_frames(n)?;
                formats.insert(Format::Frames);
            }
            if let Some(g) = grid {
                let (a, b) = parse_grid(&g)?;
                spec = spec.with_grid(a, b)?;
            }
            let written = build_to_dir(&spec, &formats, &dir)?;
            let mut text = String::new();
            for p in written {
                text.push_str(&format!("{}\n", p.display()));
            }
            out(stdout, &text)
        }
        Command::Sweep {
            l_min,
            l_max,
            steps,
            out: file,
        } => {
            let rows = characteristics_sweep(l_min, l_max, steps)?;
            let table: Vec<_> = rows.iter().map(characteristics_json).collect();
            let mut json = data_json(&table)?;
            json.push('\n');
            match file {
                Some(path) => {
                    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                        fs::create_dir_all(parent).map_err(|e| io_failure(parent, e))?;
                    }
                    fs::write(&path, json).map_err(|e| io_failure(&path, e))
                }
                None => out(stdout, &json),
            }
        }
        Command::Serve { port, host, cors } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure {
                code: EXIT_COMPUTE,
                message: e.to_string(),
            })?;
            rt.block_on(virtlab_service::serve(SocketAddr::new(host, port), ServiceConfig { cors }))
                .map_err(|e| Failure {
                    code: EXIT_COMPUTE,
                    message: format!("serve on {host}:{port}: {e}"),
                })
        }
    }
}

/// Runs one invocation; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version are not errors
            if !e.use_stderr() {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = write!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

// book chapters that need the CLI or the service
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/service.md")]
    mod service {}
}
