//! TOML scenario files.
//!
//! ```toml
//! schema_version = 1
//! targets = [0, 5, 10, 20]
//!
//! [flow]
//! r_a = 10
//! unit = "bytes"        # "bits" (default) or "bytes"
//!
//! [defaults]
//! k_a_bits = 1016
//! slot_ms = 10.0
//!
//! [model]
//! kind = "ieee802154"   # or "shannon", with symbols_per_slot
//!
//! [[path]]
//! avg_snr_db = 8.0
//!
//! [[path]]
//! avg_snr_db = 6.0
//! k_a_bits = 512        # optional per-link override
//!
//! [sim]
//! num_superframes = 1000000
//! seed = 1
//! warmup = 0
//! forwarding = "cut-through"   # or "store-and-forward"
//! ```
//!
//! Unknown keys are rejected. An optional `[power_split]` table configures
//! the `power-split` command.

use std::path::Path;

use serde::{Deserialize, Serialize};

use tsch_delay::phy154::{FrameSpec, LinkModel, ServiceModelKind, Snr, DEFAULT_SHANNON_SYMBOLS};
use tsch_delay::sim::{Forwarding, SimConfig};
use tsch_delay::snc::{FlowSpec, PathModel};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub targets: Vec<u64>,
    pub flow: FlowSection,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub model: ModelSection,
    pub path: Vec<LinkSection>,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_split: Option<PowerSplitSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadUnit {
    #[default]
    Bits,
    Bytes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSection {
    /// Payload generated per superframe, in `unit`.
    pub r_a: u64,
    #[serde(default)]
    pub unit: PayloadUnit,
}

impl FlowSection {
    pub fn bits(&self) -> Result<u64, CliError> {
        match self.unit {
            PayloadUnit::Bits => Ok(self.r_a),
            PayloadUnit::Bytes => self
                .r_a
                .checked_mul(8)
                .ok_or_else(|| CliError::Input(format!("flow.r_a = {} bytes overflows", self.r_a))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(default = "default_k_a")]
    pub k_a_bits: u32,
    #[serde(default = "default_slot_ms")]
    pub slot_ms: f64,
}

fn default_k_a() -> u32 {
    1016
}

fn default_slot_ms() -> f64 {
    10.0
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            k_a_bits: default_k_a(),
            slot_ms: default_slot_ms(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSection {
    #[default]
    Ieee802154,
    Shannon {
        #[serde(default = "default_symbols")]
        symbols_per_slot: u32,
    },
}

fn default_symbols() -> u32 {
    DEFAULT_SHANNON_SYMBOLS
}

impl ModelSection {
    pub fn kind(&self) -> ServiceModelKind {
        match *self {
            ModelSection::Ieee802154 => ServiceModelKind::Ieee802154,
            ModelSection::Shannon { symbols_per_slot } => ServiceModelKind::Shannon { symbols_per_slot },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub avg_snr_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_a_bits: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForwardingMode {
    #[default]
    CutThrough,
    StoreAndForward,
}

impl From<ForwardingMode> for Forwarding {
    fn from(mode: ForwardingMode) -> Self {
        match mode {
            ForwardingMode::CutThrough => Forwarding::CutThrough,
            ForwardingMode::StoreAndForward => Forwarding::StoreAndForward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_superframes")]
    pub num_superframes: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub warmup: u64,
    #[serde(default)]
    pub forwarding: ForwardingMode,
}

fn default_superframes() -> u64 {
    1_000_000
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            num_superframes: default_superframes(),
            seed: 0,
            warmup: 0,
            forwarding: ForwardingMode::default(),
        }
    }
}

/// Equal transmit-power split over equally spaced relays. The propagation
/// defaults are placeholders, not measured values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSplitSpec {
    #[serde(default = "default_distance")]
    pub total_distance_m: f64,
    #[serde(default = "default_hops")]
    pub num_hops: u32,
    #[serde(default = "default_power")]
    pub total_power_dbm: f64,
    #[serde(default)]
    pub pathloss: Pathloss,
    #[serde(default = "default_noise")]
    pub noise_floor_dbm: f64,
}

fn default_distance() -> f64 {
    30.0
}

fn default_hops() -> u32 {
    5
}

fn default_power() -> f64 {
    4.0
}

fn default_noise() -> f64 {
    -95.0
}

impl Default for PowerSplitSpec {
    fn default() -> Self {
        Self {
            total_distance_m: default_distance(),
            num_hops: default_hops(),
            total_power_dbm: default_power(),
            pathloss: Pathloss::default(),
            noise_floor_dbm: default_noise(),
        }
    }
}

/// Log-distance model: `reference_loss_db + 10·exponent·log10(d / reference_distance_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pathloss {
    #[serde(default = "default_exponent")]
    pub exponent: f64,
    #[serde(default = "default_reference_loss")]
    pub reference_loss_db: f64,
    #[serde(default = "default_reference_distance")]
    pub reference_distance_m: f64,
}

fn default_exponent() -> f64 {
    3.0
}

fn default_reference_loss() -> f64 {
    40.0
}

fn default_reference_distance() -> f64 {
    1.0
}

impl Default for Pathloss {
    fn default() -> Self {
        Self {
            exponent: default_exponent(),
            reference_loss_db: default_reference_loss(),
            reference_distance_m: default_reference_distance(),
        }
    }
}

impl Pathloss {
    pub fn loss_db(&self, distance_m: f64) -> f64 {
        self.reference_loss_db + 10.0 * self.exponent * (distance_m / self.reference_distance_m).log10()
    }
}

impl PowerSplitSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CliError::Input(format!("power_split.{name} must be positive, got {v}")))
            }
        };
        positive("total_distance_m", self.total_distance_m)?;
        positive("pathloss.reference_distance_m", self.pathloss.reference_distance_m)?;
        if self.num_hops < 1 {
            return Err(CliError::Input("power_split.num_hops must be at least 1".into()));
        }
        for (name, v) in [
            ("total_power_dbm", self.total_power_dbm),
            ("noise_floor_dbm", self.noise_floor_dbm),
            ("pathloss.exponent", self.pathloss.exponent),
            ("pathloss.reference_loss_db", self.pathloss.reference_loss_db),
        ] {
            if !v.is_finite() {
                return Err(CliError::Input(format!("power_split.{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Per-link SNR in dB for `hops` equal hops sharing the power budget.
    pub fn link_snr_db(&self, hops: u32) -> HopBudget {
        let distance = self.total_distance_m / f64::from(hops);
        let power = self.total_power_dbm - 10.0 * f64::from(hops).log10();
        let loss = self.pathloss.loss_db(distance);
        HopBudget {
            hops,
            distance_m: distance,
            node_power_dbm: power,
            pathloss_db: loss,
            snr_db: power - loss - self.noise_floor_dbm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopBudget {
    pub hops: u32,
    pub distance_m: f64,
    pub node_power_dbm: f64,
    pub pathloss_db: f64,
    pub snr_db: f64,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scenario: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !(self.defaults.slot_ms > 0.0 && self.defaults.slot_ms.is_finite()) {
            return Err(CliError::Input(format!(
                "defaults.slot_ms must be positive, got {}",
                self.defaults.slot_ms
            )));
        }
        self.flow.bits()?;
        self.path_model()?;
        if let Some(p) = &self.power_split {
            p.validate()?;
        }
        Ok(())
    }

    pub fn flow_spec(&self) -> Result<FlowSpec, CliError> {
        Ok(FlowSpec::new(self.flow.bits()?))
    }

    pub fn frame_for(&self, link: &LinkSection) -> Result<FrameSpec, CliError> {
        Ok(FrameSpec::new(
            link.k_a_bits.unwrap_or(self.defaults.k_a_bits),
            self.defaults.slot_ms / 1000.0,
        )?)
    }

    pub fn link_model(&self, link: &LinkSection) -> Result<LinkModel, CliError> {
        let snr = Snr::from_db(link.avg_snr_db)?;
        Ok(LinkModel::new(snr, self.frame_for(link)?, self.model.kind())?)
    }

    pub fn path_model(&self) -> Result<PathModel, CliError> {
        if self.path.is_empty() {
            return Err(CliError::Input("path needs at least one [[path]] entry".into()));
        }
        let links = self
            .path
            .iter()
            .map(|l| self.link_model(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PathModel::new(links)?)
    }

    /// Superframe length in milliseconds: one slot per link.
    pub fn superframe_ms(&self, hops: usize) -> f64 {
        hops as f64 * self.defaults.slot_ms
    }

    pub fn sim_config(&self, seed_override: Option<u64>) -> Result<SimConfig, CliError> {
        let mut config = SimConfig::new(
            self.path_model()?,
            self.flow_spec()?,
            self.sim.num_superframes,
            seed_override.unwrap_or(self.sim.seed),
        );
        config.warmup_superframes = self.sim.warmup;
        config.forwarding = self.sim.forwarding.into();
        config.target_delays = self.targets.clone();
        config.validate()?;
        Ok(config)
    }
}
