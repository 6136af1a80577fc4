//! IEEE 802.15.4 (2.4 GHz O-QPSK) link model under Rayleigh block fading.
//!
//! A frame of `k_a` bits is delivered whole or not at all, so the per-slot
//! service is Bernoulli on `{0, k_a}` bits. Averaging the frame success
//! probability over an exponentially distributed SNR gives Q(γ̄), from which
//! the per-slot Mellin transform of the SNR-domain service follows.
//! A Shannon-capacity service model is provided for comparison.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::ModelError;
use crate::numerics::{integrate_exp_weighted, ln_upper_incomplete_gamma, QuadratureSpec};

pub const DEFAULT_FRAME_BITS: u32 = 1016;
pub const DEFAULT_SLOT_SECONDS: f64 = 0.010;
/// 62 500 symbols/s over a 10 ms slot.
pub const DEFAULT_SHANNON_SYMBOLS: u32 = 625;

/// Linear signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Snr(f64);

impl Snr {
    pub fn from_linear(value: f64) -> Result<Self, ModelError> {
        if value >= 0.0 && !value.is_nan() {
            Ok(Self(value))
        } else {
            Err(ModelError::Invalid(format!("SNR must be non-negative, got {value}")))
        }
    }

    pub fn from_db(db: f64) -> Result<Self, ModelError> {
        if db.is_nan() {
            return Err(ModelError::Invalid("SNR in dB is NaN".into()));
        }
        Self::from_linear(db_to_linear(db))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        linear_to_db(self.0)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec {
    /// Payload capacity of one frame, in bits.
    pub k_a: u32,
    /// Slot length in seconds.
    pub slot_duration: f64,
}

impl Default for FrameSpec {
    fn default() -> Self {
        Self {
            k_a: DEFAULT_FRAME_BITS,
            slot_duration: DEFAULT_SLOT_SECONDS,
        }
    }
}

impl FrameSpec {
    pub fn new(k_a: u32, slot_duration: f64) -> Result<Self, ModelError> {
        let frame = Self { k_a, slot_duration };
        frame.validate()?;
        Ok(frame)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.k_a < 1 {
            return Err(ModelError::Invalid("frame capacity k_a must be at least 1 bit".into()));
        }
        if !(self.slot_duration > 0.0 && self.slot_duration.is_finite()) {
            return Err(ModelError::Invalid(format!(
                "slot duration must be positive, got {}",
                self.slot_duration
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServiceModelKind {
    /// Bernoulli frame service driven by the 802.15.4 BER curve.
    Ieee802154,
    /// Shannon-capacity service `C·log2(1 + γ)` bits per slot.
    Shannon { symbols_per_slot: u32 },
}

impl ServiceModelKind {
    pub fn shannon_default() -> Self {
        ServiceModelKind::Shannon {
            symbols_per_slot: DEFAULT_SHANNON_SYMBOLS,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ServiceModelKind::Ieee802154 => "ieee802154",
            ServiceModelKind::Shannon { .. } => "shannon",
        }
    }
}

impl fmt::Display for ServiceModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServiceModelKind::Ieee802154 => write!(f, "ieee802154"),
            ServiceModelKind::Shannon { symbols_per_slot } => {
                write!(f, "shannon(C={symbols_per_slot})")
            }
        }
    }
}

/// One wireless hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    /// Mean of the exponentially distributed instantaneous SNR.
    pub avg_snr: Snr,
    pub frame: FrameSpec,
    pub kind: ServiceModelKind,
}

impl LinkModel {
    pub fn new(avg_snr: Snr, frame: FrameSpec, kind: ServiceModelKind) -> Result<Self, ModelError> {
        let link = Self {
            avg_snr,
            frame,
            kind,
        };
        link.validate()?;
        Ok(link)
    }

    /// 802.15.4 link with default frame parameters.
    pub fn ieee802154_db(avg_snr_db: f64) -> Result<Self, ModelError> {
        Self::new(Snr::from_db(avg_snr_db)?, FrameSpec::default(), ServiceModelKind::Ieee802154)
    }

    /// Shannon link with default frame parameters and C = 625.
    pub fn shannon_db(avg_snr_db: f64) -> Result<Self, ModelError> {
        Self::new(
            Snr::from_db(avg_snr_db)?,
            FrameSpec::default(),
            ServiceModelKind::shannon_default(),
        )
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.avg_snr.linear().is_finite() && self.avg_snr.linear() > 0.0) {
            return Err(ModelError::Invalid(format!(
                "average SNR must be positive and finite, got {}",
                self.avg_snr.linear()
            )));
        }
        self.frame.validate()?;
        if let ServiceModelKind::Shannon { symbols_per_slot } = self.kind {
            if symbols_per_slot == 0 {
                return Err(ModelError::Invalid("symbols_per_slot must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn with_avg_snr(mut self, avg_snr: Snr) -> Self {
        self.avg_snr = avg_snr;
        self
    }

    pub fn with_kind(mut self, kind: ServiceModelKind) -> Self {
        self.kind = kind;
        self
    }
}

/// (−1)^u·C(16, u) for u = 2..=16.
const BER_COEFFS: [f64; 15] = [
    120.0, -560.0, 1820.0, -4368.0, 8008.0, -11440.0, 12870.0, -11440.0, 8008.0, -4368.0, 1820.0,
    -560.0, 120.0, -16.0, 1.0,
];

/// Bit error probability of 802.15.4 O-QPSK at instantaneous SNR γ.
pub fn ber(gamma: Snr) -> f64 {
    ber_linear(gamma.linear())
}

pub(crate) fn ber_linear(gamma: f64) -> f64 {
    let sum: f64 = BER_COEFFS
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let u = (i + 2) as f64;
            c * (-20.0 * gamma * (1.0 - 1.0 / u)).exp()
        })
        .sum();
    (sum / 30.0).clamp(0.0, 1.0)
}

/// Probability that all `k_a` bits of a frame survive at SNR γ: (1 − p)^k_a.
pub fn frame_success(gamma: Snr, frame: &FrameSpec) -> f64 {
    frame_success_linear(gamma.linear(), frame.k_a)
}

pub(crate) fn frame_success_linear(gamma: f64, k_a: u32) -> f64 {
    (f64::from(k_a) * (-ber_linear(gamma)).ln_1p()).exp()
}

/// Frame error rate 1 − (1 − p(γ))^k_a.
pub fn fer(gamma: Snr, frame: &FrameSpec) -> f64 {
    -(f64::from(frame.k_a) * (-ber(gamma)).ln_1p()).exp_m1()
}

fn require_ieee(link: &LinkModel) -> Result<(), ModelError> {
    match link.kind {
        ServiceModelKind::Ieee802154 => Ok(()),
        other => Err(ModelError::WrongServiceModel {
            expected: "ieee802154",
            got: other.name(),
        }),
    }
}

fn require_shannon(link: &LinkModel) -> Result<u32, ModelError> {
    match link.kind {
        ServiceModelKind::Shannon { symbols_per_slot } => Ok(symbols_per_slot),
        other => Err(ModelError::WrongServiceModel {
            expected: "shannon",
            got: other.name(),
        }),
    }
}

type QKey = (u64, u32, u64, u32);

fn q_cache() -> &'static RwLock<HashMap<QKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<QKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Rayleigh-averaged frame success probability Q(γ̄), memoized per
/// (γ̄, k_a, quadrature settings) for the life of the process.
pub fn q_success(link: &LinkModel) -> Result<f64, ModelError> {
    q_success_with(link, &QuadratureSpec::default())
}

pub fn q_success_with(link: &LinkModel, spec: &QuadratureSpec) -> Result<f64, ModelError> {
    require_ieee(link)?;
    link.validate()?;
    let key = (
        link.avg_snr.linear().to_bits(),
        link.frame.k_a,
        spec.relative_tolerance.to_bits(),
        spec.max_refinements,
    );
    if let Some(&q) = q_cache().read().expect("Q cache poisoned").get(&key) {
        return Ok(q);
    }
    let q = q_success_uncached(link, spec)?;
    q_cache().write().expect("Q cache poisoned").insert(key, q);
    Ok(q)
}

/// Q(γ̄) computed afresh by quadrature.
pub fn q_success_uncached(link: &LinkModel, spec: &QuadratureSpec) -> Result<f64, ModelError> {
    require_ieee(link)?;
    let k_a = link.frame.k_a;
    let q = integrate_exp_weighted(
        |y| frame_success_linear(y, k_a),
        link.avg_snr.linear(),
        spec,
    )?;
    Ok(q.clamp(0.0, 1.0))
}

/// Per-slot Mellin transform M_β(s) = 1 + (e^(k_a(s−1)) − 1)·Q(γ̄).
///
/// Overflow for large `s > 1` is returned as `+∞`.
pub fn mellin_slot_service(s: f64, link: &LinkModel) -> Result<f64, ModelError> {
    require_ieee(link)?;
    let q = q_success(link)?;
    Ok(bernoulli_mellin(s, q, link.frame.k_a))
}

pub(crate) fn bernoulli_mellin(s: f64, q: f64, k_a: u32) -> f64 {
    let x = f64::from(k_a) * (s - 1.0);
    if x == 0.0 {
        return 1.0;
    }
    (1.0 - q) + q * x.exp()
}

/// Per-slot Mellin transform of the Shannon service at argument `arg`:
/// e^(1/γ̄)·γ̄^((arg−1)𝒞)·Γ(1 + (arg−1)𝒞, 1/γ̄), with 𝒞 = C / ln 2.
pub fn mellin_slot_service_shannon(arg: f64, link: &LinkModel) -> Result<f64, ModelError> {
    let symbols = require_shannon(link)?;
    link.validate()?;
    Ok(ln_shannon_mellin(arg, link.avg_snr.linear(), symbols)?.exp())
}

/// 𝒞 = C / ln 2: Shannon service in bits is 𝒞·ln(1 + γ).
pub fn shannon_nat_capacity(symbols_per_slot: u32) -> f64 {
    f64::from(symbols_per_slot) / std::f64::consts::LN_2
}

pub(crate) fn ln_shannon_mellin(arg: f64, avg_snr: f64, symbols: u32) -> Result<f64, ModelError> {
    if arg == 1.0 {
        return Ok(0.0);
    }
    let exponent = (arg - 1.0) * shannon_nat_capacity(symbols);
    let x = 1.0 / avg_snr;
    let ln_gamma = ln_upper_incomplete_gamma(1.0 + exponent, x)?;
    Ok(x + exponent * avg_snr.ln() + ln_gamma)
}

/// Per-link transform with everything that does not depend on the Mellin
/// argument already evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlotTransform {
    Bernoulli { q: f64, k_a: u32 },
    Shannon { avg_snr: f64, symbols: u32 },
}

impl SlotTransform {
    pub fn for_link(link: &LinkModel) -> Result<Self, ModelError> {
        link.validate()?;
        Ok(match link.kind {
            ServiceModelKind::Ieee802154 => SlotTransform::Bernoulli {
                q: q_success(link)?,
                k_a: link.frame.k_a,
            },
            ServiceModelKind::Shannon { symbols_per_slot } => SlotTransform::Shannon {
                avg_snr: link.avg_snr.linear(),
                symbols: symbols_per_slot,
            },
        })
    }

    /// ln M(arg); `+∞` where the transform diverges.
    pub fn ln_mellin(&self, arg: f64) -> f64 {
        match *self {
            SlotTransform::Bernoulli { q, k_a } => bernoulli_mellin(arg, q, k_a).ln(),
            SlotTransform::Shannon { avg_snr, symbols } => {
                ln_shannon_mellin(arg, avg_snr, symbols).unwrap_or(f64::INFINITY)
            }
        }
    }
}
