use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ladderlab::functionals::{AlgebraMode, FermatTriple, FunctionalKind};
use ladderlab::harness::{self, Command, OutputFormat, RunConfig};
use ladderlab::ladder::ReverseMethod;
use ladderlab::quadrature::HL_TOL;
use ladderlab::DEFAULT_T_CAP;

#[derive(Parser)]
#[command(
    name = "ladderlab",
    version,
    about = "Jacob's ladder verification campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Clone)]
struct Common {
    /// Hardy–Littlewood quadrature tolerance.
    #[arg(long, default_value_t = HL_TOL)]
    tol: f64,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Sample cache directory (LADDERLAB_CACHE takes precedence).
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,
    #[arg(long = "t-cap", default_value_t = DEFAULT_T_CAP)]
    t_cap: f64,
    /// Ladder cutoff T0.
    #[arg(long = "t0")]
    t0: Option<f64>,
    /// Record wall time in the provenance block (makes reports differ).
    #[arg(long = "wall-time")]
    wall_time: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    IncrementSolve,
    MaintermInvert,
}

impl From<Method> for ReverseMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::IncrementSolve => ReverseMethod::IncrementSolve,
            Method::MaintermInvert => ReverseMethod::MaintermInvert,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    F1,
    F2,
    F3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sum,
    Product,
    Quotient,
}

#[derive(Subcommand)]
enum Sub {
    /// θ, Z and |ζ|² at the given heights.
    ZetaEval {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// J(T) against the Ingham main term.
    HlIntegral {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Reverse ladder chains T < T¹ < … < Tᵏ.
    Ladder {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::MaintermInvert)]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// Selberg moment estimate and S₁ identities along a chain.
    Selberg {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, default_value_t = 10.0)]
        kappa: f64,
        /// Z-evaluation budget of the phase track.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::MaintermInvert)]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// ζ-functional estimates over a τ-grid, or F₁ algebra checks.
    Functional {
        #[arg(long, value_enum, default_value_t = Kind::F1)]
        kind: Kind,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long = "tau-grid", value_delimiter = ',', required = true)]
        tau_grid: Vec<f64>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Method::MaintermInvert)]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// Fermat-rational discriminator.
    Fermat {
        /// x,y,z,n
        #[arg(long, value_delimiter = ',', required = true)]
        triple: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        variant: u8,
        #[arg(long = "tau-grid", value_delimiter = ',')]
        tau_grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Method::MaintermInvert)]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// Gram matrix of a ladder-generated Legendre system.
    Ortho {
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long = "p-list", value_delimiter = ',', default_value = "1")]
        p_list: Vec<usize>,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Persist Z samples for a range into the cache directory.
    CacheWarm {
        #[arg(long = "t-start")]
        t_start: f64,
        #[arg(long = "t-end")]
        t_end: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn base(command: Command, common: Common) -> RunConfig {
    RunConfig {
        tol: common.tol,
        out: common.out,
        format: match common.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        cache_dir: common.cache_dir,
        t_cap: common.t_cap,
        t0: common.t0,
        wall_time: common.wall_time,
        ..RunConfig::new(command)
    }
}

fn to_config(sub: Sub) -> Result<RunConfig, ladderlab::Error> {
    Ok(match sub {
        Sub::ZetaEval { t, common } => RunConfig {
            t,
            ..base(Command::ZetaEval, common)
        },
        Sub::HlIntegral { t, common } => RunConfig {
            t,
            ..base(Command::HlIntegral, common)
        },
        Sub::Ladder {
            t,
            k,
            method,
            common,
        } => RunConfig {
            t,
            k,
            method: method.into(),
            ..base(Command::Ladder, common)
        },
        Sub::Selberg {
            t,
            k,
            l,
            r,
            s,
            kappa,
            budget,
            method,
            common,
        } => RunConfig {
            t,
            k,
            l,
            r,
            s,
            kappa,
            budget,
            method: method.into(),
            ..base(Command::Selberg, common)
        },
        Sub::Functional {
            kind,
            x,
            tau_grid,
            mode,
            method,
            common,
        } => RunConfig {
            kind: match kind {
                Kind::F1 => FunctionalKind::F1,
                Kind::F2 => FunctionalKind::F2,
                Kind::F3 => FunctionalKind::F3,
            },
            x,
            tau_grid,
            mode: mode.map(|m| match m {
                Mode::Sum => AlgebraMode::Sum,
                Mode::Product => AlgebraMode::Product,
                Mode::Quotient => AlgebraMode::Quotient,
            }),
            method: method.into(),
            ..base(Command::Functional, common)
        },
        Sub::Fermat {
            triple,
            variant,
            tau_grid,
            method,
            common,
        } => {
            if triple.len() != 4 {
                return Err(ladderlab::Error::Config {
                    field: "triple",
                    reason: format!("expected x,y,z,n, got {} values", triple.len()),
                });
            }
            let n = u32::try_from(triple[3]).map_err(|_| ladderlab::Error::Config {
                field: "triple",
                reason: "exponent n is too large".into(),
            })?;
            RunConfig {
                triple: Some(FermatTriple::new(triple[0], triple[1], triple[2], n)?),
                variant,
                tau_grid,
                method: method.into(),
                ..base(Command::Fermat, common)
            }
        }
        Sub::Ortho {
            t,
            p_list,
            n_max,
            common,
        } => RunConfig {
            t,
            p_list,
            n_max,
            ..base(Command::Ortho, common)
        },
        Sub::CacheWarm {
            t_start,
            t_end,
            common,
        } => RunConfig {
            t_start: Some(t_start),
            t_end: Some(t_end),
            ..base(Command::CacheWarm, common)
        },
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = match to_config(cli.command) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    match harness::run(&cfg) {
        Ok(report) => {
            if cfg.out.is_none() {
                print!("{}", report.render(cfg.format));
            }
            eprintln!("{}", harness::describe(&report));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
