use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blocks::BlockConfig;
use crate::layout::LayoutConfig;
use crate::{Error, Result};

/// Channel attention reduction used when none is given: 16 for wide
/// feature maps, 4 for narrow ones.
pub fn default_ca_reduction(channels: usize) -> usize {
    if channels >= 32 {
        16
    } else {
        4.min(channels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub bands: usize,
    pub channels: usize,
    pub groups: usize,
    pub cssm_per_group: usize,
    pub window_h: usize,
    pub window_w: usize,
    pub window_c: usize,
    pub scale: usize,
    pub state_size: usize,
    pub ca_reduction: usize,
    /// MLP hidden width is `mlp_ratio · channels`.
    pub mlp_ratio: usize,
    pub lssp_enabled: bool,
    pub gsrm_enabled: bool,
    pub seed: u64,
}

impl ModelConfig {
    /// Default architecture (C = 64, 4 groups of 2 CSSMs, 4×4×8 windows).
    pub fn new(bands: usize, scale: usize) -> Self {
        Self {
            bands,
            channels: 64,
            groups: 4,
            cssm_per_group: 2,
            window_h: 4,
            window_w: 4,
            window_c: 8,
            scale,
            state_size: 16,
            ca_reduction: default_ca_reduction(64),
            mlp_ratio: 2,
            lssp_enabled: true,
            gsrm_enabled: true,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("bands", self.bands),
            ("channels", self.channels),
            ("groups", self.groups),
            ("cssm_per_group", self.cssm_per_group),
            ("state_size", self.state_size),
            ("mlp_ratio", self.mlp_ratio),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if self.scale < 2 || !self.scale.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "scale must be a power of two ≥ 2, got {}",
                self.scale
            )));
        }
        if self.ca_reduction == 0
            || self.ca_reduction > self.channels
            || self.channels % self.ca_reduction != 0
        {
            return Err(Error::InvalidArgument(format!(
                "ca_reduction {} must divide channels {}",
                self.ca_reduction, self.channels
            )));
        }
        self.layout().map(|_| ())
    }

    pub fn layout(&self) -> Result<LayoutConfig> {
        LayoutConfig::new(self.window_h, self.window_w, self.window_c)
    }

    pub fn block_config(&self) -> Result<BlockConfig> {
        Ok(BlockConfig {
            layout: self.layout()?,
            lssp_enabled: self.lssp_enabled,
            gsrm_enabled: self.gsrm_enabled,
        })
    }

    pub fn upsample_stages(&self) -> usize {
        self.scale.trailing_zeros() as usize
    }

    pub fn mlp_hidden(&self) -> usize {
        self.mlp_ratio * self.channels
    }

    pub fn with_ablation(mut self, ablation: Ablation) -> Self {
        (self.lssp_enabled, self.gsrm_enabled) = ablation.toggles();
        self
    }

    /// Equality on everything that shapes or routes the weights; the seed
    /// is ignored.
    pub fn same_architecture(&self, other: &Self) -> bool {
        Self { seed: 0, ..*self } == Self { seed: 0, ..*other }
    }
}

impl fmt::Display for ModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bands={} channels={} groups={} cssm={} window={}x{}x{} scale={} state={} \
             ca_reduction={} mlp_ratio={} lssp={} gsrm={}",
            self.bands,
            self.channels,
            self.groups,
            self.cssm_per_group,
            self.window_h,
            self.window_w,
            self.window_c,
            self.scale,
            self.state_size,
            self.ca_reduction,
            self.mlp_ratio,
            self.lssp_enabled,
            self.gsrm_enabled
        )
    }
}

/// The four (LSSP, GSRM) toggle combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ablation {
    #[default]
    None,
    NoLssp,
    NoGsrm,
    NoBoth,
}

impl Ablation {
    pub const ALL: [Ablation; 4] = [Self::None, Self::NoLssp, Self::NoGsrm, Self::NoBoth];

    /// `(lssp_enabled, gsrm_enabled)`
    pub fn toggles(self) -> (bool, bool) {
        match self {
            Self::None => (true, true),
            Self::NoLssp => (false, true),
            Self::NoGsrm => (true, false),
            Self::NoBoth => (false, false),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::NoLssp => "no-lssp",
            Self::NoGsrm => "no-gsrm",
            Self::NoBoth => "no-both",
        }
    }
}

impl FromStr for Ablation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown ablation {s:?}")))
    }
}
