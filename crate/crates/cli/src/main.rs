use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxops::diffop::CertifyMethod;
use coxops::Kind;

mod commands;

/// Exact computations with differential operators on Coxeter arrangements.
#[derive(Parser, Debug)]
#[command(name = "coxops", version, about)]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "COXOPS_THREADS", default_value_t = 0)]
    threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,

    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    A,
    B,
    D,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::A => Kind::A,
            KindArg::B => Kind::B,
            KindArg::D => Kind::D,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Expanded,
    Saito,
}

impl From<MethodArg> for CertifyMethod {
    fn from(m: MethodArg) -> CertifyMethod {
        match m {
            MethodArg::Auto => CertifyMethod::Auto,
            MethodArg::Expanded => CertifyMethod::Expanded,
            MethodArg::Saito => CertifyMethod::Saito,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct KindL {
    #[arg(long, value_enum, ignore_case = true)]
    pub kind: KindArg,
    #[arg(long)]
    pub l: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the order-two basis and certify it.
    Basis {
        #[command(flatten)]
        kl: KindL,
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Certify (the default).
        #[arg(long, conflicts_with = "no_certify")]
        certify: bool,
        #[arg(long)]
        no_certify: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Also write the full result as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Allow certification beyond l = 8.
        #[arg(long)]
        force: bool,
    },
    /// Certify a family of operators read from JSON.
    Certify {
        #[arg(long)]
        ops: PathBuf,
        #[command(flatten)]
        kl: KindL,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        force: bool,
    },
    /// Test whether an operator lies in the module of an arrangement.
    Membership {
        #[arg(long)]
        op: PathBuf,
        #[command(flatten)]
        kl: KindL,
    },
    /// Print a Schur-type function.
    Schur {
        #[arg(long, value_enum, ignore_case = true)]
        kind: KindArg,
        /// Comma-separated weakly decreasing parts.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<u32>,
        #[arg(long)]
        m: usize,
        /// Ambient dimension bounding λ_1 ≤ l − m (default λ_1 + m).
        #[arg(long)]
        l: Option<usize>,
    },
    /// Compound matrix of a matrix read from JSON.
    Compound {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        m: usize,
        /// Print only the determinant of the compound matrix.
        #[arg(long)]
        det: bool,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Same as `verify schur-identity`.
    #[command(name = "verify-identity", hide = true)]
    VerifyIdentity {
        #[command(flatten)]
        kl: KindL,
        #[arg(long)]
        m: usize,
    },
    /// Apply a signed permutation to an operator.
    Act {
        /// Word such as `s12`, `t3` or `s34*t3*t4`; the rightmost factor acts first.
        #[arg(long)]
        w: String,
        #[arg(long)]
        op: PathBuf,
    },
    /// Group invariance suite for a basis.
    Invariance {
        #[command(flatten)]
        kl: KindL,
    },
    /// Hyperplanes of an arrangement.
    Arrangement {
        #[command(flatten)]
        kl: KindL,
        /// Also print the defining polynomial Q.
        #[arg(long)]
        show_q: bool,
    },
}

#[derive(Subcommand, Debug)]
enum VerifySuite {
    /// det of the m-th compound equals det^C(l-1, m-1) on random matrices.
    CauchySylvester {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Variables in the random entries (0 = integer matrices).
        #[arg(long, default_value_t = 0)]
        nvars: usize,
    },
    /// det(s_λ(x_μ)) against its product formula.
    SchurIdentity {
        #[command(flatten)]
        kl: KindL,
        #[arg(long)]
        m: usize,
    },
    /// Same as the `invariance` command.
    Invariance {
        #[command(flatten)]
        kl: KindL,
    },
    /// Every basis operator lies in the module; ∂1² does not.
    Membership {
        #[command(flatten)]
        kl: KindL,
    },
}

pub struct Ctx {
    pub format: Format,
    pub seed: u64,
}

/// Outcome of a command: `Ok(true)` exits 0, `Ok(false)` exits 1, errors exit 2.
type Outcome = anyhow::Result<bool>;

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { format: cli.format, seed: cli.seed };
    match cli.command {
        Command::Basis { kl, m, certify: _, no_certify, method, json, force } => {
            commands::basis(&ctx, kl, m, !no_certify, method.into(), json, force)
        }
        Command::Certify { ops, kl, method, force } => commands::certify(&ctx, &ops, kl, method.into(), force),
        Command::Membership { op, kl } => commands::membership(&ctx, &op, kl),
        Command::Schur { kind, lambda, m, l } => commands::schur(&ctx, kind.into(), lambda, m, l),
        Command::Compound { matrix, m, det } => commands::compound(&ctx, &matrix, m, det),
        Command::Verify { suite } => match suite {
            VerifySuite::CauchySylvester { l, m, trials, nvars } => commands::cauchy_sylvester(&ctx, l, m, trials, nvars),
            VerifySuite::SchurIdentity { kl, m } => commands::schur_identity(&ctx, kl, m),
            VerifySuite::Invariance { kl } => commands::invariance(&ctx, kl),
            VerifySuite::Membership { kl } => commands::verify_membership(&ctx, kl),
        },
        Command::VerifyIdentity { kl, m } => commands::schur_identity(&ctx, kl, m),
        Command::Act { w, op } => commands::act(&ctx, &w, &op),
        Command::Invariance { kl } => commands::invariance(&ctx, kl),
        Command::Arrangement { kl, show_q } => commands::arrangement(&ctx, kl, show_q),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if cli.threads > 0 {
        if let Err(e) = coxops::par::set_global_threads(cli.threads) {
            log::warn!("ignoring --threads: {e}");
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
