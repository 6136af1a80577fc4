//! Statistical end-to-end delay bounds for multi-hop TDMA/channel-hopping
//! IEEE 802.15.4 networks (WirelessHART, ISA100.11a, TSCH), together with a
//! superframe-level Monte Carlo simulator for validating them.
//!
//! * [`phy154`]: BER/FER of 802.15.4 O-QPSK, Rayleigh-averaged frame success
//!   and per-slot Mellin transforms (plus a Shannon-capacity comparison model).
//! * [`snc`]: single- and multi-hop delay kernels, stability, and the
//!   violation bound minimized over the Mellin parameter.
//! * [`sim`]: seeded round-robin superframe simulator.
//! * [`numerics`]: quadrature, incomplete gamma and scalar minimization.

pub mod error;
pub mod exec;
pub mod numerics;
pub mod phy154;
pub mod sim;
pub mod snc;

pub use error::{ModelError, NumericsError, SimError};
pub use exec::Execution;
pub use phy154::{FrameSpec, LinkModel, ServiceModelKind, Snr};
pub use sim::{Forwarding, SimConfig, SimReport};
pub use snc::{BoundResult, FlowSpec, MinDelay, PathModel, QosTarget};
