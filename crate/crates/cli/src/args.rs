//! Command-line definitions.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "intdiff",
    version,
    about = "Exact computations with polynomial integro-differential operators",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Q,
    Qi,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Base field [env: INTDIFF_FIELD; default: q]
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldArg>,
    /// Number of variables
    #[arg(long, global = true)]
    pub arity: Option<usize>,
    /// Window `a..b` per slot, comma separated; one interval is repeated
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Degree bound for action matrices
    #[arg(long, global = true, default_value_t = 4)]
    pub deg: u32,
    /// Emit JSON
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized steps
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Read input from a file
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<String>,
    /// Write the report to a file
    #[arg(long = "out", global = true, value_name = "PATH")]
    pub output: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical form of expressions (stdin, one per line, when none given)
    Normalize {
        #[arg(allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Product of two expressions
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Commutator [a, b]
    Commutator {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Action matrix on divided powers of degree at most --deg
    Act {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Graded components
    Grade {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Membership in a sum of primes or a principal left ideal
    IdealTest(IdealTestArgs),
    /// Image under the involution
    Involve {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Build a module on a window
    ModuleBuild(ModuleArgs),
    /// Support points of a module
    Support(ModuleArgs),
    /// Weight space dimensions of a module
    Dims(ModuleArgs),
    /// Multiplicities of simple summands of a weight module
    Decompose(ModuleArgs),
    /// Decomposition into absolutely prime blocks
    BlockSplit(ModuleArgs),
    /// Representation type verdicts
    RepType(RepTypeArgs),
    /// Kronecker decomposition of a pair of matrices
    Kronecker(KroneckerArgs),
    /// String modules, or the indecomposable modules of the local algebra A
    String(StringArgs),
    /// Band modules
    Band(BandArgs),
    /// Fiber of a module, or the fiber of a local ideal
    Fiber(FiberArgs),
    /// Module induced from a fiber
    Induce(InduceArgs),
    /// Seeded self-checks
    Report {
        /// Random samples per check
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
pub struct IdealTestArgs {
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    /// Slots of the primes, e.g. `1,2`
    #[arg(long, conflicts_with = "left")]
    pub prime: Option<String>,
    /// Generator `d` or `H - λ` of a left ideal (arity 1)
    #[arg(long, allow_hyphen_values = true)]
    pub left: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleKind {
    /// The polynomial module
    #[value(name = "P")]
    P,
    /// M(s, λ)
    #[value(name = "Ms")]
    Ms,
    /// Simple modules M(D); repeated --dset gives a direct sum
    #[value(name = "simple")]
    Simple,
    /// Module of a local ideal
    #[value(name = "V")]
    V,
}

#[derive(Args, Debug, Clone)]
pub struct ModuleArgs {
    #[arg(long, value_enum)]
    pub module: Option<ModuleKind>,
    /// Length of M(s, λ)
    #[arg(long)]
    pub s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Orbit, e.g. `Z,1/2`
    #[arg(long, allow_hyphen_values = true)]
    pub orbit: Option<String>,
    /// Degenerate slots, e.g. `1,2` (`none` for the empty set)
    #[arg(long)]
    pub dset: Vec<String>,
    /// Generators of a local ideal in H_1..H_k, separated by `;`
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: Option<String>,
    /// Nilpotency order of the local ideal
    #[arg(long)]
    pub order: Option<i64>,
    /// Apply a seeded random base change at every point
    #[arg(long)]
    pub scramble: bool,
}

#[derive(Args, Debug)]
pub struct RepTypeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub orbit: Option<String>,
    #[arg(long)]
    pub dset: Option<String>,
    /// Local ideal of K[H_1, H_2] for the tame/wild test, generators separated by `;`
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: Option<String>,
    #[arg(long)]
    pub order: Option<i64>,
    /// Center of the local ideal, e.g. `0,1/2`
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
}

#[derive(Args, Debug)]
pub struct KroneckerArgs {
    /// JSON matrix of A (d2 rows, d1 columns)
    #[arg(long)]
    pub a: Option<String>,
    /// JSON matrix of B
    #[arg(long)]
    pub b: Option<String>,
    /// Block label such as `S4(2,1/2)`; repeat for a direct sum
    #[arg(long)]
    pub label: Vec<String>,
    #[arg(long)]
    pub scramble: bool,
}

#[derive(Args, Debug)]
pub struct StringArgs {
    /// Word in the letters 1 and 2 (`e` for the simple module)
    #[arg(long, required_unless_present = "a_members")]
    pub word: Option<String>,
    /// List the indecomposable modules of A up to this dimension
    #[arg(long, value_name = "BOUND")]
    pub a_members: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BandArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub lambda: String,
}

#[derive(Args, Debug)]
pub struct FiberArgs {
    #[command(flatten)]
    pub module: ModuleArgs,
    /// Center of the local ideal when no module is given
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
}

#[derive(Args, Debug)]
pub struct InduceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub orbit: Option<String>,
    #[arg(long)]
    pub dset: Option<String>,
    /// JSON list of the H matrices of the fiber, one per non-degenerate slot
    #[arg(long)]
    pub fiber: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: Option<String>,
    #[arg(long)]
    pub order: Option<i64>,
}
