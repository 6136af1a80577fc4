//! Monte Carlo simulation of one flow over a round-robin superframe.
//!
//! Each superframe: `r_a` bits enter the first node's queue, then link `j`
//! transmits in slot `j`. The link draws an exponential SNR, turns it into
//! a frame success probability through the 802.15.4 BER curve, and on
//! success moves up to `k_a` head-of-line bits to the next queue (or out
//! of the network after the last link). Queues are unbounded and FIFO.
//!
//! Every link has its own ChaCha8 stream (stream id = link index), and each
//! link consumes exactly two uniforms per superframe whatever happens, so a
//! change to one link never shifts another link's draws.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;
use crate::exec::Execution;
use crate::phy154::{frame_success_linear, ServiceModelKind, Snr};
use crate::snc::{FlowSpec, PathModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Forwarding {
    /// Bits forwarded in slot `j` may be sent on by link `j+1` in the same superframe.
    #[default]
    CutThrough,
    /// Bits received in a superframe are forwarded no earlier than the next one.
    StoreAndForward,
}

impl Forwarding {
    pub fn name(&self) -> &'static str {
        match self {
            Forwarding::CutThrough => "cut-through",
            Forwarding::StoreAndForward => "store-and-forward",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub path: PathModel,
    pub flow: FlowSpec,
    pub num_superframes: u64,
    pub seed: u64,
    pub warmup_superframes: u64,
    /// Delays `w` (superframes) at which Pr[delay > w] is estimated.
    pub target_delays: Vec<u64>,
    pub forwarding: Forwarding,
}

impl SimConfig {
    pub fn new(path: PathModel, flow: FlowSpec, num_superframes: u64, seed: u64) -> Self {
        Self {
            path,
            flow,
            num_superframes,
            seed,
            warmup_superframes: 0,
            target_delays: Vec::new(),
            forwarding: Forwarding::CutThrough,
        }
    }

    pub fn with_targets(mut self, targets: impl IntoIterator<Item = u64>) -> Self {
        self.target_delays = targets.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.num_superframes < 1 {
            return Err(SimError::InvalidConfig("num_superframes must be at least 1".into()));
        }
        if self.warmup_superframes >= self.num_superframes {
            return Err(SimError::InvalidConfig(format!(
                "warmup ({}) must be shorter than the run ({})",
                self.warmup_superframes, self.num_superframes
            )));
        }
        if self.flow.whole_bits().is_none() {
            return Err(SimError::InvalidConfig(format!(
                "the simulator needs a whole number of bits per superframe, got {}",
                self.flow.rate()
            )));
        }
        for link in self.path.links() {
            if link.kind != ServiceModelKind::Ieee802154 {
                return Err(SimError::InvalidConfig(format!(
                    "the simulator models 802.15.4 frame service only, got a {} link",
                    link.kind.name()
                )));
            }
        }
        Ok(())
    }
}

/// Pr[delay > w] estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationEstimate {
    pub probability: f64,
    pub violations: u64,
    pub sample_count: u64,
}

impl ViolationEstimate {
    /// Wilson score interval at 95 % confidence.
    pub fn wilson_95(&self) -> (f64, f64) {
        wilson_interval(self.violations, self.sample_count, 1.959_963_984_540_054)
    }
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Delays in superframes of the counted blocks, in arrival order.
    pub block_delays: Vec<u64>,
    pub violation_estimates: BTreeMap<u64, ViolationEstimate>,
    pub per_link_success_rate: Vec<f64>,
    pub per_link_successes: Vec<u64>,
    pub superframes: u64,
    /// Post-warmup blocks still in the network when the run ended.
    pub unfinished_blocks: u64,
    pub bits_arrived: u64,
    pub bits_departed: u64,
    pub bits_queued: u64,
    pub forwarding: Forwarding,
}

/// Exponential SNR draw by inverse transform, so a larger mean maps the
/// same uniform to a larger SNR.
pub fn sample_snr<R: Rng + ?Sized>(rng: &mut R, avg_snr: Snr) -> Snr {
    let u: f64 = rng.random();
    Snr::from_linear(exponential_from_uniform(u, avg_snr.linear())).expect("non-negative draw")
}

fn exponential_from_uniform(u: f64, mean: f64) -> f64 {
    -mean * (-u).ln_1p()
}

/// Generator for link `link_index` under `seed`.
pub fn link_stream(seed: u64, link_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(link_index as u64);
    rng
}

/// Stepwise simulator state; [`run`] drives it to completion.
#[derive(Debug, Clone)]
pub struct Simulator {
    avg_snr: Vec<f64>,
    frame_bits: Vec<u64>,
    rngs: Vec<ChaCha8Rng>,
    r_a: u64,
    forwarding: Forwarding,
    warmup: u64,
    queues: Vec<u64>,
    successes: Vec<u64>,
    superframe: u64,
    arrived: u64,
    departed: u64,
    next_block: u64,
    delays: Vec<u64>,
    departure_order: Vec<u64>,
    record_order: bool,
}

impl Simulator {
    pub fn new(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let links = config.path.links();
        Ok(Self {
            avg_snr: links.iter().map(|l| l.avg_snr.linear()).collect(),
            frame_bits: links.iter().map(|l| u64::from(l.frame.k_a)).collect(),
            rngs: (0..links.len()).map(|j| link_stream(config.seed, j)).collect(),
            r_a: config.flow.whole_bits().expect("validated"),
            forwarding: config.forwarding,
            warmup: config.warmup_superframes,
            queues: vec![0; links.len()],
            successes: vec![0; links.len()],
            superframe: 0,
            arrived: 0,
            departed: 0,
            next_block: 0,
            delays: Vec::with_capacity(config.num_superframes as usize),
            departure_order: Vec::new(),
            record_order: false,
        })
    }

    /// Also keep the arrival index of every departed block, in departure order.
    pub fn record_departure_order(&mut self) {
        self.record_order = true;
    }

    pub fn departure_order(&self) -> &[u64] {
        &self.departure_order
    }

    pub fn step(&mut self) {
        let n = self.queues.len();
        self.queues[0] += self.r_a;
        self.arrived += self.r_a;
        for idx in 0..n {
            let j = match self.forwarding {
                Forwarding::CutThrough => idx,
                Forwarding::StoreAndForward => n - 1 - idx,
            };
            let rng = &mut self.rngs[j];
            let u_snr: f64 = rng.random();
            let u_frame: f64 = rng.random();
            let gamma = exponential_from_uniform(u_snr, self.avg_snr[j]);
            let k_a = self.frame_bits[j];
            if u_frame < frame_success_linear(gamma, k_a as u32) {
                self.successes[j] += 1;
                let moved = k_a.min(self.queues[j]);
                self.queues[j] -= moved;
                if j + 1 < n {
                    self.queues[j + 1] += moved;
                } else {
                    self.departed += moved;
                }
            }
        }
        let now = self.superframe;
        while self.next_block <= now && self.r_a * (self.next_block + 1) <= self.departed {
            if self.next_block >= self.warmup {
                self.delays.push(now - self.next_block);
            }
            if self.record_order {
                self.departure_order.push(self.next_block);
            }
            self.next_block += 1;
        }
        self.superframe += 1;
    }

    pub fn superframe(&self) -> u64 {
        self.superframe
    }

    pub fn queues(&self) -> &[u64] {
        &self.queues
    }

    pub fn bits_arrived(&self) -> u64 {
        self.arrived
    }

    pub fn bits_departed(&self) -> u64 {
        self.departed
    }

    pub fn bits_queued(&self) -> u64 {
        self.queues.iter().sum()
    }

    pub fn finish(self, targets: &[u64]) -> SimReport {
        let counted_blocks = self.superframe.saturating_sub(self.warmup);
        let unfinished = counted_blocks - self.delays.len() as u64;
        let violation_estimates = if self.delays.is_empty() {
            BTreeMap::new()
        } else {
            violation_table(&self.delays, targets)
        };
        let superframes = self.superframe;
        SimReport {
            per_link_success_rate: self
                .successes
                .iter()
                .map(|&s| s as f64 / superframes.max(1) as f64)
                .collect(),
            per_link_successes: self.successes.clone(),
            block_delays: self.delays,
            violation_estimates,
            superframes,
            unfinished_blocks: unfinished,
            bits_arrived: self.arrived,
            bits_departed: self.departed,
            bits_queued: self.queues.iter().sum(),
            forwarding: self.forwarding,
        }
    }
}

/// Runs a full simulation.
pub fn run(config: &SimConfig) -> Result<SimReport, SimError> {
    let mut sim = Simulator::new(config)?;
    for _ in 0..config.num_superframes {
        sim.step();
    }
    Ok(sim.finish(&config.target_delays))
}

/// Runs independent configurations, possibly in parallel; results keep input order.
pub fn run_batch(configs: &[SimConfig], execution: Execution) -> Vec<Result<SimReport, SimError>> {
    execution.map(configs.iter().collect(), run)
}

/// Fraction of delays strictly greater than `w`, with the sample size.
pub fn empirical_violation(delays: &[u64], w: u64) -> Result<(f64, usize), SimError> {
    if delays.is_empty() {
        return Err(SimError::NoSamples);
    }
    let above = delays.iter().filter(|&&d| d > w).count();
    Ok((above as f64 / delays.len() as f64, delays.len()))
}

fn violation_table(delays: &[u64], targets: &[u64]) -> BTreeMap<u64, ViolationEstimate> {
    let max_delay = delays.iter().copied().max().unwrap_or(0) as usize;
    let mut histogram = vec![0u64; max_delay + 1];
    for &d in delays {
        histogram[d as usize] += 1;
    }
    // above[w] = #{d > w}
    let mut above = vec![0u64; max_delay + 1];
    let mut running = 0;
    for w in (0..=max_delay).rev() {
        above[w] = running;
        running += histogram[w];
    }
    let n = delays.len() as u64;
    targets
        .iter()
        .map(|&w| {
            let violations = above.get(w as usize).copied().unwrap_or(0);
            (
                w,
                ViolationEstimate {
                    probability: violations as f64 / n as f64,
                    violations,
                    sample_count: n,
                },
            )
        })
        .collect()
}
