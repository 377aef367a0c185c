use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum WittCmd {
    /// x + y
    Add(WittBinary),
    /// x · y
    Mul(WittBinary),
    /// Ghost components of x
    Ghost(WittUnary),
    /// F(x), V(x) and R(x)
    Fvr(WittUnary),
}

#[derive(Debug, Args, Serialize)]
pub struct WittBinary {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub n: Option<usize>,
    /// F<p>, Z/<m>, Z/<p>^<k> or Z
    #[arg(long, default_value = "Fp")]
    pub ring: String,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
}

#[derive(Debug, Args, Serialize)]
pub struct WittUnary {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "Fp")]
    pub ring: String,
    #[arg(long)]
    pub x: String,
}

#[derive(Debug, Subcommand)]
pub enum PrismCmd {
    /// r_n of one Witt vector over A/d
    Rn(PrismRn),
    /// Product embedding of one input, or the V^j([q]) generator check
    Embed(PrismEmbed),
    /// λ_{r+1}∘V = u·φ^r(d)·λ_r with one unit u on random samples
    CheckSquare(PrismSquare),
    /// d distinguished, φ(d) distinguished, p ∈ (d, φ(d))
    Validate(PrismValidate),
}

#[derive(Debug, Args, Serialize)]
pub struct PrismRn {
    #[arg(long, default_value = "crystalline")]
    pub preset: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub n: Option<usize>,
    /// Witt coordinates as integers, e.g. [1,1]
    #[arg(long)]
    pub input: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PrismEmbed {
    #[arg(long, default_value = "q-deRham")]
    pub preset: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub input: Option<String>,
    /// Only this j in the generator check
    #[arg(long)]
    pub j: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct PrismSquare {
    #[arg(long, default_value = "crystalline")]
    pub preset: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PrismValidate {
    #[arg(long, default_value = "crystalline")]
    pub preset: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 3)]
    pub m: u32,
    #[arg(long, default_value_t = 8)]
    pub precision: u32,
}

#[derive(Debug, Subcommand)]
pub enum TiltCmd {
    /// The six θ_r, θ̃_r squares with R, F and V
    CheckCommut(TiltCommut),
    /// ξ_r ∈ ker θ_r and generates it
    Xi(TiltXi),
    /// p-th power and F-surjectivity conditions on samples
    Perfectoid(TiltPerfectoid),
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct TiltCommut {
    #[arg(long, default_value = "charp")]
    pub model: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Sampled exponents lie in p^{-depth} Z
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    #[arg(long, default_value_t = 4)]
    pub deg_cap: i64,
    /// Random sums of monomials added to the monomial sample
    #[arg(long, default_value_t = 8)]
    pub random: usize,
    #[arg(long, default_value_t = 4)]
    pub precision: u32,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct TiltXi {
    #[arg(long, default_value = "charp")]
    pub model: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Coefficient precision p^N
    #[arg(long = "N", default_value_t = 4)]
    pub precision: u32,
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    #[arg(long, default_value_t = 2)]
    pub deg_cap: i64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct TiltPerfectoid {
    #[arg(long, default_value = "charp")]
    pub model: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub precision: u32,
    /// Run on F_p[t], which is not perfectoid
    #[arg(long)]
    pub control: bool,
}

#[derive(Debug, Subcommand)]
pub enum DrwCmd {
    /// Basis of W_rΩ^i by weight and partition
    Basis(DrwBasis),
    /// Normal form of a word such as "F d V [T1]"
    Normalize(DrwNormalize),
    /// Run one of the de Rham-Witt suites
    Verify {
        #[command(subcommand)]
        suite: DrwSuite,
    },
}

#[derive(Debug, Subcommand)]
pub enum DrwSuite {
    Axioms(AxiomsArgs),
    Cartier(LevelArgs),
    Filtration(LevelArgs),
    Poly(PolyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DrwBasis {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long, default_value_t = 2)]
    pub deg_cap: i64,
    #[arg(long, default_value_t = 0)]
    pub i: usize,
    #[arg(long, default_value = "polynomial")]
    pub base: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DrwNormalize {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Subcommand)]
pub enum CompareCmd {
    /// Per-weight W_nΩ^i vs de Rham cohomology of (Z/p^n)[T]
    Crystalline(LevelArgs),
    /// Twisted r_n into ⊕ A/d_{n-u}
    Target(CompareTarget),
    /// Base change of cohomology along Z/p^N → Z/p^M
    BaseChange(BaseChangeArgs),
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct CompareTarget {
    #[arg(long, default_value = "crystalline")]
    pub preset: String,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[arg(long, default_value_t = 2)]
    pub deg_cap: i64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct BaseChangeArgs {
    #[arg(long, default_value_t = 20)]
    pub count: usize,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Six tilting diagrams
    Commut(TiltCommut),
    /// r_n generator formula, homomorphism and crystalline bijectivity
    Rn(RnArgs),
    /// λ square with one unit
    Square(SquareArgs),
    /// ξ_r generates ker θ_r
    Xi(TiltXi),
    Axioms(AxiomsArgs),
    Cartier(LevelArgs),
    Filtration(LevelArgs),
    /// Basis ranks vs integral-forms ranks, and the one-variable decomposition
    Poly(PolyArgs),
    /// Crystalline comparison, target map and base change
    Comparison(ComparisonArgs),
    /// Every suite at the chosen budget
    All(AllArgs),
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct RnArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct SquareArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct AxiomsArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 3)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long, default_value_t = 1)]
    pub deg_cap: i64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct LevelArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long, default_value_t = 4)]
    pub deg_cap: i64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct PolyArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long, default_value_t = 4)]
    pub deg_cap: i64,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct ComparisonArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub vars: usize,
    #[arg(long, default_value_t = 4)]
    pub deg_cap: i64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct AllArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, value_enum, default_value_t = Budget::Small)]
    pub budget: Budget,
}

#[derive(Debug, Subcommand)]
pub enum ReportCmd {
    /// Union of several report files keyed by anchor, weight and config
    Merge {
        paths: Vec<std::path::PathBuf>,
    },
}
