use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "qbe",
    version,
    about = "Exact experiments on EHE quantum block encryption"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Print an aligned text summary on stdout.
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Attack(Attack),
    #[command(subcommand)]
    Analyze(Analyze),
    #[command(subcommand)]
    Prf(Prf),
    /// Encrypt a classical message into BB84 labels and decrypt it again.
    EncryptClassical(EncryptClassicalArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Block size in bits (qubits).
    #[arg(long)]
    pub n: u32,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    /// Family descriptor files, first for F and second for G.
    #[arg(long, value_delimiter = ',')]
    pub families: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Pauli conjugation rules against dense matrix products.
    Identities(IdentitiesArgs),
    /// Decrypt-after-encrypt on seeded plaintexts.
    Roundtrip(RoundtripArgs),
    /// Exact key average of EHE against the maximally mixed state.
    PerfectSecurity(PerfectSecurityArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct RoundtripArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    /// Scheme descriptor file; every variant is checked when absent.
    #[arg(long)]
    pub scheme: Option<PathBuf>,

    /// Plaintexts per scheme.
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PerfectSecurityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,

    /// Random plaintexts.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
}

#[derive(Debug, Subcommand)]
pub enum Attack {
    /// Circular-basis distinguisher against the X^cZ^c scheme.
    Prop1(Prop1Args),
    /// Plus-basis distinguisher against single-layer encryption.
    Thm4(Thm4Args),
    /// Re-encryption under reused public randomness.
    Reuse(ReuseArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct Prop1Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct Thm4Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    /// Families to attack; every built-in family when absent.
    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ReuseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Joint key average of several blocks against the product of averages.
    MultiMessage(MultiMessageArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyModeArg {
    Shared,
    Independent,
}

#[derive(Debug, Args, Serialize)]
pub struct MultiMessageArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,

    #[arg(long, default_value_t = 2)]
    pub blocks: u32,

    #[arg(long, value_enum, default_value_t = KeyModeArg::Shared)]
    pub key_mode: KeyModeArg,

    /// Seeded random pure blocks instead of |0…0⟩.
    #[arg(long)]
    pub random_blocks: bool,
}

#[derive(Debug, Subcommand)]
pub enum Prf {
    /// Distinguishing advantage of an oracle adversary.
    Advantage(AdvantageArgs),
    /// Whether k ↦ F(k, x) is a bijection for every input x.
    PermutationCheck(PermutationCheckArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryArg {
    /// Outputs 1 iff f(x1) ⊕ x1 = f(x2) ⊕ x2 for two distinct queries.
    XorShift,
    /// Always outputs 1.
    Constant,
}

#[derive(Debug, Args, Serialize)]
pub struct AdvantageArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,

    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    #[arg(long, value_enum, default_value_t = AdversaryArg::XorShift)]
    pub adversary: AdversaryArg,
}

#[derive(Debug, Args, Serialize)]
pub struct PermutationCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct EncryptClassicalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,

    #[command(flatten)]
    #[serde(flatten)]
    pub families: FamilyArgs,

    /// Message bits, qubit 0 first; drawn from the seed when absent.
    #[arg(long)]
    pub message: Option<String>,
}
