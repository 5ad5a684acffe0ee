use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use deltatower::commands::{self, Certify, Mode, SeriesInput, Tower, TowerBuild, TowerLimits};
use deltatower::random::DEFAULT_SEED;
use deltatower::{CliError, RunReport};
use deltatower_core::grid::DEFAULT_CELL_BUDGET;

/// Differential towers, operator checks and grid experiments.
#[derive(Parser)]
#[command(name = "deltatower", version)]
struct Cli {
    /// Print every elapsed time as 0 so reports compare byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Tower(TowerCmd),
    #[command(subcommand)]
    Grid(GridCmd),
    /// Truncated power series of a prolonged system or a tower element.
    #[command(group(ArgGroup::new("input").required(true).args(["logd_system", "system", "element"])))]
    Series {
        #[arg(long, value_name = "N")]
        logd_system: Option<usize>,
        /// ProlongedSystem JSON file.
        #[arg(long, value_name = "FILE")]
        system: Option<String>,
        #[arg(long, value_name = "EXPR")]
        element: Option<String>,
        #[arg(long)]
        order: usize,
        /// Last equation `δx_n = h x_n`.
        #[arg(long, default_value = "0", requires = "logd_system")]
        h: String,
        #[arg(long, value_name = "LIST", requires = "logd_system")]
        initial: Option<String>,
        #[command(flatten)]
        tower: TowerArgs,
    },
    #[command(subcommand)]
    Relations(RelationsCmd),
}

#[derive(clap::Args)]
struct TowerArgs {
    /// Tower ranks, e.g. 2,1 (default: the smallest tower holding the input's symbols).
    #[arg(long, conflicts_with = "spec")]
    utype: Option<String>,
    /// TowerSpec JSON file.
    #[arg(long, value_name = "FILE")]
    spec: Option<String>,
}

#[derive(clap::Args)]
struct LimitArgs {
    #[arg(long, default_value_t = TowerLimits::default().max_levels)]
    max_levels: u32,
    #[arg(long, default_value_t = TowerLimits::default().max_rank)]
    max_rank: u32,
}

impl LimitArgs {
    fn limits(&self) -> TowerLimits {
        TowerLimits { max_levels: self.max_levels, max_rank: self.max_rank }
    }
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Build the tower of a U-type and print its equations.
    Build {
        #[arg(long)]
        utype: String,
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the TowerSpec JSON here.
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run the verification suite on a serialized TowerSpec.
    Check {
        #[arg(long, value_name = "FILE")]
        spec: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Subcommand)]
enum GridCmd {
    /// Exhaustively check every grid property up to a cell count.
    Verify {
        #[arg(long)]
        max_cells: u32,
    },
    /// Build a seqred grid and compare its analysis with the sequence.
    Seqred {
        #[arg(long, value_name = "LIST")]
        s: String,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Analyze the target of a scenario file over its base.
    Analyze {
        #[arg(long, value_name = "FILE")]
        scenario: String,
    },
}

#[derive(Subcommand)]
enum RelationsCmd {
    /// Certify that the generators of a level satisfy no relation of bounded degree.
    Certify {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        degree: u32,
        /// Write the ReductionTrace JSON here.
        #[arg(long, value_name = "FILE")]
        trace: Option<String>,
        /// Also compare with the numeric rank of truncated series.
        #[arg(long, value_name = "N")]
        series_order: Option<usize>,
    },
}

fn cell_budget() -> Result<u32, CliError> {
    match std::env::var("DELTATOWER_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("DELTATOWER_BUDGET={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_CELL_BUDGET),
    }
}

fn run(cli: Cli, command: Vec<String>) -> Result<RunReport, CliError> {
    let timing = !cli.no_timing;
    match cli.command {
        Command::Tower(TowerCmd::Build { utype, check, seed, out, limits }) => {
            let args = TowerBuild { utype: &utype, check, seed, out: out.as_deref(), limits: limits.limits() };
            commands::tower_build(command, timing, &args)
        }
        Command::Tower(TowerCmd::Check { spec, seed, limits }) => {
            commands::tower_check(command, timing, &spec, seed, limits.limits())
        }
        Command::Grid(GridCmd::Verify { max_cells }) => commands::grid_verify(command, timing, max_cells, cell_budget()?),
        Command::Grid(GridCmd::Seqred { s, mode }) => commands::grid_seqred(command, timing, &s, mode, cell_budget()?),
        Command::Grid(GridCmd::Analyze { scenario }) => {
            commands::grid_analyze(command, timing, &scenario, cell_budget()?)
        }
        Command::Series { logd_system, system, element, order, h, initial, tower } => {
            let input = match (logd_system, &system, &element) {
                (Some(n), _, _) => SeriesInput::LogdSystem { n, h: &h, initial: initial.as_deref() },
                (_, Some(path), _) => SeriesInput::System(path),
                (_, _, Some(e)) => SeriesInput::Element(e),
                _ => unreachable!("clap requires one input"),
            };
            let texts: Vec<&str> = element.iter().map(String::as_str).chain([h.as_str()]).collect();
            let tower = Tower::load(tower.utype.as_deref(), tower.spec.as_deref(), &texts)?;
            commands::series(command, timing, input, order, &tower)
        }
        Command::Relations(RelationsCmd::Certify { tower, level, degree, trace, series_order }) => {
            let tower = Tower::load(tower.utype.as_deref(), tower.spec.as_deref(), &[])?;
            let args = Certify { level, degree, trace: trace.as_deref(), series_order };
            commands::relations_certify(command, timing, &tower, &args)
        }
    }
}

fn main() -> ExitCode {
    let command: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, command) {
        Ok(report) => {
            print!("{report}");
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("deltatower: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
