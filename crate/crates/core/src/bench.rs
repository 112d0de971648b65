//! Doubling-ratio timing of the linear selective scan against a quadratic
//! all-pairs reference.
//!
//! Repetitions are interleaved across lengths so that slow drifts in machine
//! load affect every length alike; each length reports the median.

use std::time::{Duration, Instant};

use crate::numerics::Rng;
use crate::ssm::{
    discretize, scan_convolutional, selective_scan, ScanSystem, SelectiveParams, SsmParams,
};
use crate::{Error, Result};

/// Acceptable doubling ratio for a linear-time kernel.
pub const LINEAR_BAND: (f64, f64) = (1.6, 2.6);
/// Acceptable doubling ratio for the quadratic reference.
pub const QUADRATIC_BAND: (f64, f64) = (3.0, 5.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Input-dependent recurrence, O(L·N).
    Selective,
    /// Causal convolution with the materialised kernel, O(L²).
    Quadratic,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Selective => "selective_scan",
            Self::Quadratic => "quadratic_reference",
        }
    }

    pub fn band(self) -> (f64, f64) {
        match self {
            Self::Selective => LINEAR_BAND,
            Self::Quadratic => QUADRATIC_BAND,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Sequence lengths, ascending.
    pub lengths: Vec<usize>,
    pub state: usize,
    pub reps: usize,
    pub quadratic: bool,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            lengths: vec![1 << 14, 1 << 15],
            state: 16,
            reps: 5,
            quadratic: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Timing {
    pub kernel: Kernel,
    pub len: usize,
    pub median: Duration,
    pub samples: Vec<Duration>,
}

/// Median time at `2L` over median time at `L`.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    pub kernel: Kernel,
    pub len: usize,
    pub ratio: f64,
    pub within_band: bool,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub timings: Vec<Timing>,
    pub ratios: Vec<Ratio>,
    pub warnings: Vec<String>,
}

impl BenchReport {
    /// Tab-separated table: timings, then ratios, then `# `-prefixed
    /// warnings.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("kernel\tlength\tmedian_ms\treps\n");
        for t in &self.timings {
            out += &format!(
                "{}\t{}\t{:.4}\t{}\n",
                t.kernel.name(),
                t.len,
                t.median.as_secs_f64() * 1e3,
                t.samples.len()
            );
        }
        out += "kernel\tlength\tdoubling_ratio\tband\tstatus\n";
        for r in &self.ratios {
            let (lo, hi) = r.kernel.band();
            out += &format!(
                "{}\t{}\t{:.3}\t[{lo}, {hi}]\t{}\n",
                r.kernel.name(),
                r.len,
                r.ratio,
                if r.within_band { "ok" } else { "OUT_OF_BAND" }
            );
        }
        for w in &self.warnings {
            out += &format!("# warning: {w}\n");
        }
        out
    }

    pub fn ratio(&self, kernel: Kernel) -> Option<&Ratio> {
        self.ratios.iter().find(|r| r.kernel == kernel)
    }
}

fn median(samples: &[Duration]) -> Duration {
    let mut s = samples.to_vec();
    s.sort();
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.lengths.is_empty() || cfg.lengths.contains(&0) || cfg.reps == 0 || cfg.state == 0 {
        return Err(Error::InvalidArgument(
            "bench needs positive lengths, state size and repetitions".into(),
        ));
    }
    if cfg.lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("bench lengths must be ascending".into()));
    }
    let mut rng = Rng::new(cfg.seed);
    let selective = SelectiveParams::init(&mut rng, 1, cfg.state)?;
    let a: Vec<f64> = (0..cfg.state).map(|_| -rng.uniform(0.1, 4.0)).collect();
    let b = rng.uniform_vec(cfg.state, -1.0, 1.0);
    let c = rng.uniform_vec(cfg.state, -1.0, 1.0);
    let lti = ScanSystem::Invariant(discretize(&SsmParams::new(a, b, c, 1.0)?, 0.1)?);
    let longest = *cfg.lengths.last().unwrap();
    let input = rng.uniform_vec(longest, -1.0, 1.0);

    let mut kernels = vec![Kernel::Selective];
    if cfg.quadratic {
        kernels.push(Kernel::Quadratic);
    }
    let mut samples = vec![vec![Vec::with_capacity(cfg.reps); cfg.lengths.len()]; kernels.len()];
    for _ in 0..cfg.reps {
        for (ki, &kernel) in kernels.iter().enumerate() {
            for (li, &len) in cfg.lengths.iter().enumerate() {
                let x = &input[..len];
                let start = Instant::now();
                let y = match kernel {
                    Kernel::Selective => selective_scan(&selective, x)?,
                    Kernel::Quadratic => scan_convolutional(&lti, x)?,
                };
                let elapsed = start.elapsed();
                std::hint::black_box(y);
                samples[ki][li].push(elapsed);
            }
        }
    }

    let mut timings = Vec::new();
    let mut ratios = Vec::new();
    for (ki, &kernel) in kernels.iter().enumerate() {
        let medians: Vec<Duration> = samples[ki].iter().map(|s| median(s)).collect();
        for (li, &len) in cfg.lengths.iter().enumerate() {
            timings.push(Timing {
                kernel,
                len,
                median: medians[li],
                samples: samples[ki][li].clone(),
            });
            if li + 1 < cfg.lengths.len() && cfg.lengths[li + 1] == 2 * len {
                let ratio = medians[li + 1].as_secs_f64() / medians[li].as_secs_f64().max(1e-12);
                let (lo, hi) = kernel.band();
                ratios.push(Ratio {
                    kernel,
                    len,
                    ratio,
                    within_band: (lo..=hi).contains(&ratio),
                });
            }
        }
    }

    let mut warnings = Vec::new();
    if cfg.reps == 1 {
        warnings.push("one repetition per length: timings are noisy".into());
    }
    if ratios.is_empty() {
        warnings.push("no length is followed by its double: no ratio computed".into());
    }
    for r in ratios.iter().filter(|r| !r.within_band) {
        warnings.push(format!(
            "{} ratio {:.3} at L={} is outside [{}, {}]",
            r.kernel.name(),
            r.ratio,
            r.len,
            r.kernel.band().0,
            r.kernel.band().1
        ));
    }
    Ok(BenchReport {
        timings,
        ratios,
        warnings,
    })
}
