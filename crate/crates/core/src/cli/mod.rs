//! The `sheafdual` command line: reads an instance document, runs one
//! subcommand and prints a text or structured report.
//!
//! Exit codes: `0` when every check passes, `1` when a check fails (the
//! report carries a witness), `2` for input errors.

mod commands;
mod document;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

pub use document::{
    parse_instance, parse_instance_str, ActionDef, ChainDef, DocumentError, ElementaryMap,
    GroupDef, Instance, InstanceDocument, Kind, MatrixDef, ModuleDef, NamedMatrix, RingDef,
    SystemInstance, TableInstance, TreeDocument, TreeInstance,
};
pub use report::{CheckRecord, Report};

/// Environment variable overriding the default degree cap.
pub const DEGREE_CAP_ENV: &str = "SHEAFDUAL_DEGREE_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the defining conditions of the instance.
    Validate,
    /// Character duals, with the double-dual and condition checks.
    Dualize,
    /// Global sections of an étale system or sheaf.
    Sections,
    /// Profinite direct sum of a profinite system or cosheaf.
    Directsum,
    /// Round trips between tables and fibre systems.
    Roundtrip,
    /// Sum/product duality and the square of duality functors.
    DualitySquare,
    /// Group cohomology from the bar complex against a free resolution.
    Cohomology,
    /// Shapiro's lemma for every subgroup.
    Shapiro,
    /// Mayer–Vietoris sequence of a group acting on a tree.
    MvCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Dualize => "dualize",
            Command::Sections => "sections",
            Command::Directsum => "directsum",
            Command::Roundtrip => "roundtrip",
            Command::DualitySquare => "duality-square",
            Command::Cohomology => "cohomology",
            Command::Shapiro => "shapiro",
            Command::MvCheck => "mv-check",
        }
    }

    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::Dualize,
        Command::Sections,
        Command::Directsum,
        Command::Roundtrip,
        Command::DualitySquare,
        Command::Cohomology,
        Command::Shapiro,
        Command::MvCheck,
    ];
}

#[derive(Debug, Parser)]
#[command(
    name = "sheafdual",
    version,
    about = "Exact checks for finite sheaves, cosheaves and their duals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Instance document (JSON).
    #[arg(global = true)]
    file: Option<PathBuf>,
    /// Seed for randomized naturality checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Highest cohomological degree computed.
    #[arg(long, global = true, env = DEGREE_CAP_ENV, default_value_t = 2)]
    degree_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub seed: u64,
    pub degree_cap: usize,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            degree_cap: 2,
            timing: false,
        }
    }
}

/// Runs a subcommand on a parsed document.
pub fn run_command(
    cmd: Command,
    doc: &InstanceDocument,
    inst: &Instance,
    opts: Options,
) -> Result<Report, DocumentError> {
    let start = Instant::now();
    let mut r = commands::run(cmd, doc.kind, inst, opts.seed, opts.degree_cap)?;
    if opts.timing {
        r.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(r)
}

/// Exit code and printed output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let fail = |msg: String| Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("input error: {msg}\n"),
    };
    let Some(file) = cli.file else {
        return fail("missing instance file".into());
    };
    let (doc, inst) = match parse_instance(&file) {
        Ok(x) => x,
        Err(e) => return fail(e.to_string()),
    };
    let opts = Options {
        seed: cli.seed,
        degree_cap: cli.degree_cap,
        timing: cli.timing,
    };
    match run_command(cli.command, &doc, &inst, opts) {
        Ok(r) => Outcome {
            code: if r.holds { 0 } else { 1 },
            stdout: match cli.format {
                Format::Text => r.to_text(),
                Format::Structured => r.to_structured(),
            },
            stderr: String::new(),
        },
        Err(e) => fail(e.to_string()),
    }
}
