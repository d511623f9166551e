use clap::{Args, Parser, Subcommand, ValueEnum};
use friedlab_cli::commands::{self, default_rep, ModeChoice, PathChoice};
use friedlab_cli::{CliError, RunReport, Settings, DEFAULT_TOL, EXIT_IO};
use friedlab_core::group_model::Corruption;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "friedlab", version, about = "Exact checks for Dirac operators, eta families and zeta factorizations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Group model preset.
    #[arg(long, global = true, default_value = "sl2c")]
    preset: String,
    /// Representation spec, e.g. `1,0+0,1` or `1,0+theta` (default depends on the preset).
    #[arg(long, global = true)]
    rep: Option<String>,
    /// Tolerance for floating point checks.
    #[arg(long, global = true, env = "FRIEDLAB_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Require exact identities to hold with residual 0 (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Accept exact identities within the tolerance instead.
    #[arg(long, global = true)]
    float: bool,
    /// Seed for sample points and synthetic data.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random torus samples for pointwise checks.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Allow independent series computations to run on separate threads.
    #[arg(long, global = true)]
    parallel: bool,
    /// Report zero elapsed times so output is repeatable byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathArg {
    P,
    Uperp,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Auto,
    Dirac,
    Direct,
}

impl From<ModeArg> for ModeChoice {
    fn from(m: ModeArg) -> ModeChoice {
        match m {
            ModeArg::Auto => ModeChoice::Auto,
            ModeArg::Dirac => ModeChoice::Dirac,
            ModeArg::Direct => ModeChoice::Direct,
        }
    }
}

fn parse_corruption(s: &str) -> Result<Corruption, String> {
    Corruption::from_name(s)
        .ok_or_else(|| format!("known corruptions: {}", Corruption::ALL.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a group model preset.
    Model {
        /// Apply a single deliberate fault before validating.
        #[arg(long, value_parser = parse_corruption)]
        corrupt: Option<Corruption>,
    },
    /// Summarize a representation: Casimir, metric, weights.
    Rep,
    /// Build Dirac operators and check the quadratic identity.
    Dirac {
        #[arg(long, value_enum, default_value = "both")]
        path: PathArg,
    },
    /// Compute the eta family and check its identities.
    Eta {
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
    /// Build zeta series from a class file and check the factorization.
    Zeta {
        #[arg(long)]
        classes: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
    /// Generate or enumerate conjugacy class files.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Run every applicable check for a preset and rep spec.
    VerifyAll {
        #[arg(long, value_parser = parse_corruption)]
        corrupt: Option<Corruption>,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeAction {
    /// Seeded synthetic class file.
    Synth {
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Output path; the file goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Loxodromic word classes of explicit SL(2,C) generators.
    Enumerate {
        /// Generator `a,b;c,d` with Gaussian rational entries such as `1/2` or `2-i`; repeatable.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(RunReport, Option<String>), CliError> {
    let g = &cli.global;
    let settings = Settings {
        tol: g.tol,
        exact: !g.float,
        seed: g.seed,
        samples: g.samples,
        parallel: g.parallel,
        timing: !g.no_timing,
    };
    let rep = g.rep.clone().unwrap_or_else(|| default_rep(&g.preset).to_string());
    let p = g.preset.as_str();
    Ok(match cli.command {
        Command::Model { corrupt } => (commands::cmd_model(argv, &settings, p, corrupt)?, None),
        Command::Rep => (commands::cmd_rep(argv, &settings, p, &rep)?, None),
        Command::Dirac { path } => {
            let which = match path {
                PathArg::P => PathChoice::P,
                PathArg::Uperp => PathChoice::UPerp,
                PathArg::Both => PathChoice::Both,
            };
            (commands::cmd_dirac(argv, &settings, p, &rep, which)?, None)
        }
        Command::Eta { mode } => (commands::cmd_eta(argv, &settings, p, &rep, mode.into())?, None),
        Command::Zeta { classes, mode } => (commands::cmd_zeta(argv, &settings, p, &rep, &classes, mode.into())?, None),
        Command::Lattice { action: LatticeAction::Synth { count, out } } => {
            commands::cmd_lattice_synth(argv, &settings, p, count, out.as_deref())?
        }
        Command::Lattice { action: LatticeAction::Enumerate { gens, max_len, out } } => {
            commands::cmd_lattice_enumerate(argv, &settings, &gens, max_len, out.as_deref())?
        }
        Command::VerifyAll { corrupt } => (commands::cmd_verify_all(argv, &settings, p, &rep, corrupt)?, None),
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let json = cli.global.json;
    match run(cli, argv) {
        Ok((report, payload)) => {
            // a class file on stdout must stay machine readable, so the report moves to stderr
            match payload {
                Some(text) => {
                    print!("{text}");
                    eprint!("{}", if json { report.to_json() + "\n" } else { report.to_text() });
                }
                None if json => println!("{}", report.to_json()),
                None => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("friedlab: {e}");
            let code = e.exit_code();
            debug_assert!(code == EXIT_IO || code == friedlab_cli::EXIT_USAGE);
            ExitCode::from(code as u8)
        }
    }
}
