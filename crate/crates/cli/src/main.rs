mod commands;
mod config;
mod error;

use clap::{Args, Parser, Subcommand};
use config::{CombinerArg, CommandKind, RunConfig, StackingArg};
use error::{Failure, Outcome};
use std::path::PathBuf;
use std::process::ExitCode;

/// Commensurate twisted bilayer honeycomb potentials: angles, potentials,
/// bands, Dirac cones and the velocity flattening study.
#[derive(Debug, Parser)]
#[command(name = "tbg", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// JSON run configuration; flags on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "TBG_THREADS")]
    threads: Option<usize>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every commensurate angle with a ≤ a-max.
    Angles {
        #[arg(long)]
        a_max: Option<i64>,
    },
    /// Twist a single-layer potential and write its Fourier modes.
    Potential {
        #[command(flatten)]
        twist: TwistArgs,
        #[arg(long, value_enum)]
        combiner: Option<CombinerArg>,
    },
    /// Lowest bands along a path of high-symmetry points.
    Bands {
        #[command(flatten)]
        twist: TwistArgs,
        #[command(flatten)]
        solve: SolveArgs,
        /// Comma-separated points from G, K, Kp, M.
        #[arg(long)]
        path: Option<String>,
        /// Samples per path segment.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        n_bands: Option<usize>,
    },
    /// Sufficient conditions, Dirac point and cone fit at K.
    Dirac {
        #[command(flatten)]
        twist: TwistArgs,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        ring_radius: Option<f64>,
        #[arg(long)]
        n_angles: Option<usize>,
    },
    /// N·|v_d| at λ = δ/N² over a list of angles.
    Scaling {
        /// Angles as `a,b;a,b;…`.
        #[arg(long, value_parser = parse_angles)]
        angles: Option<AngleList>,
        #[arg(long)]
        delta: Option<f64>,
        /// Basis radius in units of the shortest unit-lattice dual vector.
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long, value_enum)]
        stacking: Option<StackingArg>,
        #[arg(long)]
        potential: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TwistArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<i64>,
    #[arg(long, value_enum)]
    stacking: Option<StackingArg>,
    /// Single-layer potential or twisted dump (JSON); the reference cosine when omitted.
    #[arg(long)]
    potential: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Basis radius in units of the shortest superlattice dual vector.
    #[arg(long)]
    cutoff_shells: Option<f64>,
}

#[derive(Debug, Clone)]
struct AngleList(Vec<[i64; 2]>);

fn parse_angles(s: &str) -> Result<AngleList, String> {
    s.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [a, b] => Ok([a.parse().map_err(|e| format!("{a}: {e}"))?, b.parse().map_err(|e| format!("{b}: {e}"))?]),
                _ => Err(format!("expected a,b but found {pair:?}")),
            }
        })
        .collect::<Result<_, _>>()
        .map(AngleList)
}

impl TwistArgs {
    fn fill(self, c: &mut RunConfig) {
        c.a = self.a;
        c.b = self.b;
        c.stacking = self.stacking;
        c.potential_path = self.potential;
    }
}

impl SolveArgs {
    fn fill(self, c: &mut RunConfig) {
        c.lambda = self.lambda;
        c.shell_cutoff = self.cutoff_shells;
    }
}

impl Cli {
    fn into_config(self) -> Outcome<RunConfig> {
        let mut c = RunConfig { threads: self.threads, output_path: self.out, ..Default::default() };
        match self.command {
            None => {}
            Some(Command::Angles { a_max }) => {
                c.command = Some(CommandKind::Angles);
                c.a_max = a_max;
            }
            Some(Command::Potential { twist, combiner }) => {
                c.command = Some(CommandKind::Potential);
                twist.fill(&mut c);
                c.combiner = combiner;
            }
            Some(Command::Bands { twist, solve, path, samples, n_bands }) => {
                c.command = Some(CommandKind::Bands);
                twist.fill(&mut c);
                solve.fill(&mut c);
                c.path = path;
                c.samples = samples;
                c.n_bands = n_bands;
            }
            Some(Command::Dirac { twist, solve, ring_radius, n_angles }) => {
                c.command = Some(CommandKind::Dirac);
                twist.fill(&mut c);
                solve.fill(&mut c);
                c.ring_radius = ring_radius;
                c.n_angles = n_angles;
            }
            Some(Command::Scaling { angles, delta, cutoff, stacking, potential }) => {
                c.command = Some(CommandKind::Scaling);
                c.angles = angles.map(|l| l.0);
                c.delta = delta;
                c.scaling_cutoff = cutoff;
                c.stacking = stacking;
                c.potential_path = potential;
            }
        }
        match self.config {
            Some(path) => Ok(c.or(RunConfig::load(&path)?)),
            None => Ok(c),
        }
    }
}

fn execute(cli: Cli) -> Outcome<()> {
    let cfg = cli.into_config()?;
    cfg.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    let text = pool.install(|| commands::run(&cfg))?;
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text).map_err(Failure::io(path)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tbg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
