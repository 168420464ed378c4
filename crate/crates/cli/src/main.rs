//! `qca`: seeds, basis elements and verification suites from the shell.

mod basis_cmd;
mod output;
mod seed_cmd;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qca", version, about = "Quantum cluster algebras and their triangular bases")]
struct Cli {
    /// Worker threads for independent basis computations (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 2024)]
    random_seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cache directory for computed triangular-basis rows.
    #[arg(long, global = true, env = "QCA_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate, mutate and construct seed files.
    #[command(subcommand)]
    Seed(SeedCmd),
    /// Compute a standard or triangular basis element.
    Basis(BasisArgs),
    /// Run a verification suite; exit status 0 iff every check passes.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum SeedCmd {
    /// Validate a seed file and list its compatible orders.
    Check { file: PathBuf },
    /// Mutate at exchange index `k` (1-based).
    Mutate {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Principal quantization of an exchange matrix.
    Principal {
        /// JSON file holding the n x n matrix B, row-major.
        #[arg(long = "B", value_name = "FILE")]
        b: PathBuf,
        /// Symmetrizers, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<i64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The double seed, used by the bullet embedding.
    Double {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    E,
    C,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    kind: BasisKind,
    seed: PathBuf,
    /// Index vector such as `-1,-1`; repeat for several elements.
    #[arg(long, required = true, allow_hyphen_values = true)]
    a: Vec<String>,
    /// Write the element file here (single index only).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Skip the row cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Chebyshev family, cluster monomial labels and case tables of the Kronecker seed.
    Kronecker {
        #[arg(long, default_value_t = 4)]
        rmax: u32,
        /// Half-width of the case-table and closed-form windows.
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Crystal monomial identities and mutated-monomial conditions of the rank-2 principal seed.
    Rank2Principal {
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long = "box", default_value_t = 2)]
        bound: i64,
    },
    /// Generator relations and principal identities, on a seed file or on random principal seeds.
    Identities {
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 2)]
        max_entry: i64,
    },
    /// The double/bullet embedding on random indices.
    Psi {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        width: i64,
    },
    /// `C'_a = C_phi(a)` for the mutation at the last index of the order.
    CompareBases {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
}

pub struct Context {
    pub format: Format,
    pub random_seed: u64,
    pub cache_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("qca: cannot start {} workers: {e}", cli.jobs);
        return ExitCode::from(2);
    }
    let ctx = Context { format: cli.format, random_seed: cli.random_seed, cache_dir: cli.cache_dir };
    let outcome = match cli.command {
        Command::Seed(cmd) => seed_cmd::run(&ctx, cmd),
        Command::Basis(args) => basis_cmd::run(&ctx, args),
        Command::Verify(cmd) => verify_cmd::run(&ctx, cmd),
    };
    match outcome {
        Ok(outcome) => outcome.emit(ctx.format),
        Err(e) => output::emit_error(ctx.format, &e),
    }
}
