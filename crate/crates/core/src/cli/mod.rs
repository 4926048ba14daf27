//! Command drivers behind the `gfcohom` binary.
//!
//! [`run`] parses arguments, executes one command and returns the rendered
//! output with its exit code, so the binary is a thin wrapper and tests can
//! drive commands in-process.

mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};

pub use report::Report;

use crate::ce::DEFAULT_MAX_SLICE_DIM;

/// Exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const RESOURCE_CAP: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const USAGE: i32 = 64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "gfcohom", version, about = "Exact Gelfand-Fuks cohomology, descent and local cocycles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Number of formal variables.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,

    /// Highest cochain degree.
    #[arg(long = "q-max", global = true, default_value_t = 4)]
    pub q_max: usize,

    /// Extra jet orders checked past the completeness bound.
    #[arg(long, global = true, default_value_t = 1)]
    pub margin: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cap on the dimension of a single weight-zero slice.
    #[arg(long = "max-slice-dim", global = true, default_value_t = DEFAULT_MAX_SLICE_DIM)]
    pub max_slice_dim: usize,

    /// Cap on the polynomial degree of test inputs; defaults to the jet order plus one.
    #[arg(long = "max-degree", global = true)]
    pub max_degree: Option<u32>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Run the three-dimensional local cocycle check.
    #[arg(long = "enable-3d", global = true)]
    pub enable_3d: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced Betti numbers of vect(n) from weight-zero slices.
    Betti,
    /// Cocycle certificate and exactness verdict for a generator product.
    Verify {
        /// Class such as `a1*t1^2`.
        class: String,
    },
    /// Descent of a class to C^n and its local cocycle.
    Descend {
        class: String,
    },
    /// Chevalley-Eilenberg Betti numbers against the finite model.
    Compare {
        /// Zero the model differential out of this degree.
        #[arg(long = "inject-fault", hide = true)]
        inject_fault: Option<usize>,
    },
}

/// The parsed configuration echoed in every report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: String,
    pub n: usize,
    pub q_max: usize,
    pub margin: u32,
    pub max_slice_dim: usize,
    pub max_degree: Option<u32>,
    pub format: Format,
    pub seed: u64,
    pub enable_3d: bool,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Self {
        let command = match &cli.command {
            Command::Betti => "betti",
            Command::Verify { .. } => "verify",
            Command::Descend { .. } => "descend",
            Command::Compare { .. } => "compare",
        };
        RunConfig {
            command: command.into(),
            n: cli.n,
            q_max: cli.q_max,
            margin: cli.margin,
            max_slice_dim: cli.max_slice_dim,
            max_degree: cli.max_degree,
            format: cli.format,
            seed: cli.seed,
            enable_3d: cli.enable_3d,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("--n must be at least 1".into());
        }
        if self.max_slice_dim == 0 {
            return Err("--max-slice-dim must be positive".into());
        }
        if self.max_degree == Some(0) {
            return Err("--max-degree must be positive".into());
        }
        if self.format == Format::Csv && !matches!(self.command.as_str(), "betti" | "compare") {
            return Err("csv output is only available for betti and compare".into());
        }
        Ok(())
    }
}

/// Rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome {
            code: exit::USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Sizes the global thread pool from `GF_ENGINE_THREADS` when set.
pub fn configure_threads() {
    if let Some(k) = std::env::var("GF_ENGINE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if the pool already exists, which keeps the earlier size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
            let text = e.render().to_string();
            return if code == exit::SUCCESS {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    let config = RunConfig::from_cli(&cli);
    if let Err(m) = config.validate() {
        return Outcome::usage(format!("error: {m}\n"));
    }
    let started = std::time::Instant::now();
    let result = match &cli.command {
        Command::Betti => commands::betti(&config),
        Command::Verify { class } => commands::verify(&config, class),
        Command::Descend { class } => commands::descend(&config, class),
        Command::Compare { inject_fault } => commands::compare(&config, *inject_fault),
    };
    let elapsed = started.elapsed();
    match result {
        Ok(report) => {
            let stdout = match config.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv().unwrap_or_default(),
            };
            let mut stderr = report.diagnostics.join("\n");
            if !stderr.is_empty() {
                stderr.push('\n');
            }
            stderr.push_str(&format!("elapsed: {:.3}s\n", elapsed.as_secs_f64()));
            Outcome {
                code: report.exit_code,
                stdout,
                stderr,
            }
        }
        Err(commands::Failure { code, message }) => Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
    }
}
