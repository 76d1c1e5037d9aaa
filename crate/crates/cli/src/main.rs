use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hpot_cli::{
    cmd_constant, cmd_expand, cmd_oracle, cmd_oracle_compare, cmd_selftest_lemmas, cmd_value, cmd_verify, read_points,
    CliError, Format, Method, Report, RunConfig, Status,
};

/// Asymptotic expansions of the discrete potential of planar lattice walks.
#[derive(Parser)]
#[command(name = "hpot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Bundled walk name or path to a walk file.
    #[arg(long, default_value = "z2-simple")]
    walk: String,
    #[arg(long, default_value_t = 9)]
    order: u32,
    /// Working precision in bits.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct FitArgs {
    /// Order solved to before fitting and truncating.
    #[arg(long, default_value_t = 22)]
    fit_order: u32,
    /// Largest denominator tried in rational reconstruction.
    #[arg(long, default_value_t = 10_000)]
    max_denominator: u64,
    /// Fit radii, comma separated.
    #[arg(long, value_delimiter = ',')]
    fit_radii: Option<Vec<f64>>,
    /// Fit residual treated as a pass.
    #[arg(long, default_value_t = 1e-10)]
    fit_tolerance: f64,
}

#[derive(Args)]
struct Point {
    /// Lattice coordinates.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, required = true)]
    at: Vec<i64>,
}

impl Point {
    fn get(&self) -> (i64, i64) {
        (self.at[0], self.at[1])
    }
}

#[derive(Subcommand)]
enum Command {
    /// Real-form coefficient table of the expansion.
    Expand {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Largest scaled remainder after the constant term, simple walk.
    Constant {
        #[arg(long, default_value_t = 400.0)]
        r_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Decay of the expansion error against an oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        fit: FitArgs,
        /// Rays spread over the symmetry sector; 0 checks the diagonal only.
        #[arg(long, default_value_t = 0)]
        rays: usize,
        #[arg(long, default_value_t = 20.0)]
        r_min: f64,
        #[arg(long, default_value_t = 200.0)]
        r_max: f64,
        /// Radii per ray.
        #[arg(long, default_value_t = 8)]
        points: usize,
        /// Allowed excess of the slope over -order.
        #[arg(long, default_value_t = 0.3)]
        slope_tolerance: f64,
    },
    /// The potential at one point.
    Value {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
        /// Print the exact n + q/pi form (simple walk).
        #[arg(long)]
        exact: bool,
    },
    /// A single numeric oracle, or all of them over a point list.
    Oracle(OracleArgs),
    /// Internal consistency checks.
    Selftest {
        #[command(subcommand)]
        what: Selftest,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct OracleArgs {
    #[command(subcommand)]
    compare: Option<OracleCompare>,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Method::Fourier)]
    method: Method,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    at: Option<Vec<i64>>,
}

#[derive(Subcommand)]
enum OracleCompare {
    /// Run every applicable oracle at the listed points.
    Compare {
        #[command(flatten)]
        common: Common,
        /// File with one `x y` pair per line.
        #[arg(long)]
        points: String,
        /// Slack allowed beyond the stated error bounds.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

#[derive(Subcommand)]
enum Selftest {
    /// Validators for the estimates used by the direct sum.
    Lemmas,
}

fn config(common: &Common) -> RunConfig {
    RunConfig {
        walk: common.walk.clone(),
        order: common.order,
        precision: common.precision,
        format: common.format,
        ..RunConfig::default()
    }
}

fn with_fit(mut cfg: RunConfig, fit: &FitArgs) -> RunConfig {
    cfg.fit_order = fit.fit_order;
    cfg.fit.max_denominator = fit.max_denominator;
    cfg.fit_tolerance = fit.fit_tolerance;
    if let Some(r) = &fit.fit_radii {
        cfg.fit.radii = r.clone();
    }
    cfg
}

fn run(cli: Cli) -> Result<(Report, Format), CliError> {
    match cli.command {
        Command::Expand { common, fit } => {
            let cfg = with_fit(config(&common), &fit);
            Ok((cmd_expand(&cfg)?, cfg.format))
        }
        Command::Constant { r_max, format } => {
            let cfg = RunConfig { r_max, format, ..RunConfig::default() };
            Ok((cmd_constant(&cfg)?, format))
        }
        Command::Verify { common, fit, rays, r_min, r_max, points, slope_tolerance } => {
            let mut cfg = with_fit(config(&common), &fit);
            cfg.rays = rays;
            cfg.verify_radii = (r_min, r_max, points);
            cfg.slope_tolerance = slope_tolerance;
            Ok((cmd_verify(&cfg)?, cfg.format))
        }
        Command::Value { common, point, exact } => {
            let cfg = config(&common);
            Ok((cmd_value(&cfg, point.get(), exact)?, cfg.format))
        }
        Command::Oracle(args) => match args.compare {
            Some(OracleCompare::Compare { common, points, tolerance }) => {
                let cfg = config(&common);
                let pts = read_points(&points)?;
                Ok((cmd_oracle_compare(&cfg, &pts, tolerance)?, cfg.format))
            }
            None => {
                let cfg = config(&args.common);
                let at = args.at.ok_or_else(|| CliError::Usage("oracle needs --at X Y".into()))?;
                Ok((cmd_oracle(&cfg, args.method, (at[0], at[1]))?, cfg.format))
            }
        },
        Command::Selftest { what: Selftest::Lemmas, format } => Ok((cmd_selftest_lemmas()?, format)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { Status::Error.code() } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok((report, format)) => {
            print!("{}", report.render(format));
            ExitCode::from(report.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
