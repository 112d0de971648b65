use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsrmamba::hsio::{SampleType, SynthProfile};
use hsrmamba::model::{Ablation, ModelConfig};

#[derive(Debug, Parser)]
#[command(name = "hsrmamba", version, about = "Hyperspectral super-resolution toolchain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic HR cube.
    Synth(SynthArgs),
    /// Import a headerless band-sequential float dump, min-max normalised.
    Import(ImportArgs),
    /// Bicubic downsampling of an HR cube.
    Degrade(DegradeArgs),
    /// Write freshly initialised weights.
    InitWeights(InitWeightsArgs),
    /// Super-resolve an LR cube.
    Sr(SrArgs),
    /// Compare an SR cube against its reference.
    Eval(EvalArgs),
    /// Time the selective scan at doubling lengths.
    Bench(BenchArgs),
    /// Run the built-in consistency suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Precision {
    F32,
    F64,
}

impl From<Precision> for SampleType {
    fn from(p: Precision) -> Self {
        match p {
            Precision::F32 => SampleType::F32,
            Precision::F64 => SampleType::F64,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Smooth,
    Mixtures,
    Checker,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub h: usize,
    #[arg(long)]
    pub w: usize,
    #[arg(long)]
    pub b: usize,
    #[arg(long, value_enum, default_value = "smooth")]
    pub profile: ProfileArg,
    /// Material count for the mixtures profile.
    #[arg(long, default_value_t = 3)]
    pub materials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "f32")]
    pub precision: Precision,
}

impl SynthArgs {
    pub fn profile(&self) -> SynthProfile {
        match self.profile {
            ProfileArg::Smooth => SynthProfile::Smooth,
            ProfileArg::Mixtures => SynthProfile::Mixtures {
                materials: self.materials,
            },
            ProfileArg::Checker => SynthProfile::Checker,
        }
    }
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long)]
    pub h: usize,
    #[arg(long)]
    pub w: usize,
    #[arg(long)]
    pub b: usize,
    /// Sample type of the raw dump.
    #[arg(long, value_enum, default_value = "f32")]
    pub sample: Precision,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "f32")]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct DegradeArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "f32")]
    pub precision: Precision,
}

/// Architecture overrides shared by `init-weights` and `sr`.
#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
    #[arg(long, default_value_t = 64)]
    pub channels: usize,
    #[arg(long, default_value_t = 4)]
    pub groups: usize,
    /// CSSMs per group.
    #[arg(long, default_value_t = 2)]
    pub cssm: usize,
    /// Window extents as HxWxC.
    #[arg(long, default_value = "4x4x8", value_parser = parse_window)]
    pub window: (usize, usize, usize),
    #[arg(long, default_value_t = 16)]
    pub state: usize,
    /// Channel attention reduction (default: 16 for ≥ 32 channels, else 4).
    #[arg(long)]
    pub ca_reduction: Option<usize>,
    #[arg(long, value_enum, default_value = "none")]
    pub ablate: AblateArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AblateArg {
    None,
    NoLssp,
    NoGsrm,
    NoBoth,
}

impl From<AblateArg> for Ablation {
    fn from(a: AblateArg) -> Self {
        match a {
            AblateArg::None => Ablation::None,
            AblateArg::NoLssp => Ablation::NoLssp,
            AblateArg::NoGsrm => Ablation::NoGsrm,
            AblateArg::NoBoth => Ablation::NoBoth,
        }
    }
}

impl ModelArgs {
    pub fn config(&self, bands: usize) -> ModelConfig {
        let (window_h, window_w, window_c) = self.window;
        ModelConfig {
            bands,
            channels: self.channels,
            groups: self.groups,
            cssm_per_group: self.cssm,
            window_h,
            window_w,
            window_c,
            scale: self.scale,
            state_size: self.state,
            ca_reduction: self
                .ca_reduction
                .unwrap_or_else(|| hsrmamba::model::default_ca_reduction(self.channels)),
            seed: self.seed,
            ..ModelConfig::new(bands, self.scale)
        }
        .with_ablation(self.ablate.into())
    }
}

fn parse_window(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split('x')
        .map(|p| p.parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [h, w, c] if h > 0 && w > 0 && c > 0 => Ok((h, w, c)),
        _ => Err(format!("expected three positive extents HxWxC, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct InitWeightsArgs {
    #[arg(long)]
    pub bands: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SrArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Weight file; its embedded config must match the flags.
    #[arg(long, conflicts_with = "random_weights", required_unless_present = "random_weights")]
    pub weights: Option<PathBuf>,
    /// Initialise weights from --seed instead of loading a file.
    #[arg(long)]
    pub random_weights: bool,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "f32")]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Super-resolved cube.
    #[arg(long)]
    pub sr: PathBuf,
    /// Reference cube.
    #[arg(long)]
    pub hr: PathBuf,
    /// Scale factor used by ERGAS.
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    pub json: bool,
    /// Write the per-pixel mean absolute error as an H×W×1 cube.
    #[arg(long)]
    pub error_map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Ascending sequence lengths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "16384,32768")]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 16)]
    pub state: usize,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Skip the quadratic reference.
    #[arg(long)]
    pub no_quadratic: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Reduced case counts.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Make the named suite's tolerance unsatisfiable.
    #[arg(long, hide = true)]
    pub perturb_tolerance: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("2x3x4").unwrap(), (2, 3, 4));
        assert!(parse_window("2x3").is_err());
        assert!(parse_window("0x3x4").is_err());
        assert!(parse_window("axbxc").is_err());
    }

    #[test]
    fn weights_flags_are_exclusive() {
        let parse = |args: &[&str]| Cli::try_parse_from(args);
        assert!(parse(&["hsrmamba", "sr", "-i", "a", "-o", "b"]).is_err());
        assert!(parse(&["hsrmamba", "sr", "-i", "a", "-o", "b", "--random-weights"]).is_ok());
        assert!(parse(&[
            "hsrmamba", "sr", "-i", "a", "-o", "b", "--random-weights", "--weights", "w"
        ])
        .is_err());
    }
}
