//! Stochastic network calculus in the SNR domain.
//!
//! Arrivals of a constant `r_a` bits per superframe and per-slot link
//! services are handled through their Mellin transforms. For one hop with
//! per-slot transform `m = M(1−s)` the steady-state delay kernel is
//!
//! ```text
//! K(s, −w) = m^w / (1 − e^(r_a s)·m),   valid while e^(r_a s)·m < 1,
//! ```
//!
//! and a multi-hop path is handled by the two-term recursion over
//! sub-paths. The violation bound is the infimum of the kernel over `s > 0`.

use std::collections::HashMap;

use crate::error::ModelError;
use crate::numerics::{minimize_scalar_with_grid, NumericsError};
use crate::phy154::{LinkModel, ServiceModelKind, SlotTransform};

/// Search domain and grid for the free parameter `s`.
pub const S_MIN: f64 = 1e-7;
pub const S_MAX: f64 = 5.0;
pub const S_GRID_POINTS: usize = 128;
/// Golden-section stopping width in `ln s`.
pub const S_LOG_TOL: f64 = 1e-10;
/// Relative gap below which two per-link transforms are treated as equal.
pub const DEGENERATE_GAP: f64 = 1e-9;
/// Largest tolerated cancellation factor in the recursion before the exact
/// geometric-tail evaluation is used instead.
pub const MAX_RECURSION_CONDITION: f64 = 1e6;
/// Search cap for [`min_delay_for_epsilon`].
pub const MAX_DELAY_SEARCH: u64 = 1 << 40;

/// Constant-rate arrivals: `r_a` bits at the start of every superframe.
///
/// The analysis accepts any non-negative rate; the simulator needs whole bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSpec {
    r_a: f64,
}

impl FlowSpec {
    pub fn new(bits_per_superframe: u64) -> Self {
        Self {
            r_a: bits_per_superframe as f64,
        }
    }

    pub fn from_rate(bits_per_superframe: f64) -> Result<Self, ModelError> {
        if !(bits_per_superframe.is_finite() && bits_per_superframe >= 0.0) {
            return Err(ModelError::Invalid(format!(
                "arrival rate must be non-negative and finite, got {bits_per_superframe}"
            )));
        }
        Ok(Self {
            r_a: bits_per_superframe,
        })
    }

    pub fn rate(&self) -> f64 {
        self.r_a
    }

    /// The rate as whole bits, if it is one.
    pub fn whole_bits(&self) -> Option<u64> {
        (self.r_a.fract() == 0.0 && self.r_a < u64::MAX as f64).then_some(self.r_a as u64)
    }
}

/// Links in path order; link `j` owns slot `j` of every superframe.
#[derive(Debug, Clone, PartialEq)]
pub struct PathModel {
    links: Vec<LinkModel>,
}

impl PathModel {
    pub fn new(links: Vec<LinkModel>) -> Result<Self, ModelError> {
        if links.is_empty() {
            return Err(ModelError::Invalid("a path needs at least one link".into()));
        }
        for link in &links {
            link.validate()?;
        }
        Ok(Self { links })
    }

    pub fn single(link: LinkModel) -> Result<Self, ModelError> {
        Self::new(vec![link])
    }

    /// 802.15.4 path with default frames from per-link average SNRs in dB.
    pub fn ieee802154_db(snrs_db: &[f64]) -> Result<Self, ModelError> {
        Self::new(
            snrs_db
                .iter()
                .map(|&db| LinkModel::ieee802154_db(db))
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn links(&self) -> &[LinkModel] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn with_link(&self, link: LinkModel) -> Result<Self, ModelError> {
        let mut links = self.links.clone();
        links.push(link);
        Self::new(links)
    }

    pub fn prefix(&self, hops: usize) -> Result<Self, ModelError> {
        Self::new(self.links.iter().take(hops).cloned().collect())
    }

    pub fn with_kind(&self, kind: ServiceModelKind) -> Self {
        Self {
            links: self.links.iter().map(|l| l.with_kind(kind)).collect(),
        }
    }
}

/// A delay target `w` (superframes) with a tolerated violation probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosTarget {
    pub w: u64,
    pub epsilon: f64,
}

/// How the multi-hop kernel was evaluated at the optimizing `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRoute {
    SingleHop,
    Recursion,
    /// Equal or nearly equal per-link transforms (or a badly conditioned
    /// recursion) were evaluated by the exact geometric-tail sum.
    GeometricTail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// Bound on Pr[delay > w], clamped to [0, 1].
    pub violation_probability: f64,
    /// Natural log of the unclamped kernel at the optimum (`+∞` if unstable).
    pub ln_kernel: f64,
    pub optimizing_s: Option<f64>,
    pub stable: bool,
    /// M(1−s) of each link at the optimizing `s`.
    pub per_link_mellin: Vec<f64>,
    pub route: Option<KernelRoute>,
}

impl BoundResult {
    fn unstable(links: usize) -> Self {
        Self {
            violation_probability: 1.0,
            ln_kernel: f64::INFINITY,
            optimizing_s: None,
            stable: false,
            per_link_mellin: vec![f64::NAN; links],
            route: None,
        }
    }
}

/// Mellin transform of the SNR-domain arrivals over `interval_length` superframes.
pub fn mellin_arrival(s: f64, flow: &FlowSpec, interval_length: u64) -> f64 {
    if flow.r_a == 0.0 || interval_length == 0 || s == 1.0 {
        return 1.0;
    }
    (flow.rate() * interval_length as f64 * (s - 1.0)).exp()
}

/// ln(1 − e^z) for z < 0.
fn ln_one_minus_exp(z: f64) -> f64 {
    if z > -std::f64::consts::LN_2 {
        (-z.exp_m1()).ln()
    } else {
        (-z.exp()).ln_1p()
    }
}

/// ln of the single-hop kernel from ln M(1−s); `+∞` when unstable at `s`.
fn ln_single_kernel(ln_m: f64, ln_rho: f64, w: u64) -> f64 {
    let z = ln_rho + ln_m;
    if z.is_nan() || z >= 0.0 {
        return f64::INFINITY;
    }
    let numerator = if w == 0 { 0.0 } else { w as f64 * ln_m };
    numerator - ln_one_minus_exp(z)
}

/// Single-hop delay kernel `M(1−s)^w / (1 − e^(r_a s)·M(1−s))`, or `+∞`
/// when the stability condition fails at `s`.
pub fn single_hop_kernel(s: f64, w: u64, flow: &FlowSpec, link: &LinkModel) -> Result<f64, ModelError> {
    check_s(s)?;
    let t = SlotTransform::for_link(link)?;
    Ok(ln_single_kernel(t.ln_mellin(1.0 - s), s * flow.rate(), w).exp())
}

/// Largest arrival rate (bits/superframe) for which the kernel converges at `s`.
pub fn stability_max_rate(s: f64, link: &LinkModel) -> Result<f64, ModelError> {
    check_s(s)?;
    let t = SlotTransform::for_link(link)?;
    let ln_m = t.ln_mellin(1.0 - s);
    let rate = -ln_m / s;
    Ok(if rate == 0.0 { 0.0 } else { rate })
}

fn check_s(s: f64) -> Result<(), ModelError> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Invalid(format!("Mellin parameter s must be positive, got {s}")))
    }
}

/// Which sub-path the recursion removes besides the last link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalChoice {
    /// First link of the current sub-path.
    First,
    /// The link just before the last one.
    Penultimate,
    /// The middle link (rounded down).
    Middle,
    /// A pseudo-random admissible link per sub-path, derived from the seed.
    Hashed(u64),
}

impl RemovalChoice {
    fn pick(&self, members: &[usize]) -> usize {
        let admissible = members.len() - 1;
        match *self {
            RemovalChoice::First => members[0],
            RemovalChoice::Penultimate => members[admissible - 1],
            RemovalChoice::Middle => members[(admissible - 1) / 2],
            RemovalChoice::Hashed(seed) => {
                let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
                for &m in members {
                    h = (h ^ m as u64).wrapping_mul(0x1000_0000_01b3);
                    h ^= h >> 29;
                }
                members[(h % admissible as u64) as usize]
            }
        }
    }
}

/// Outcome of the two-term recursion at one `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionValue {
    pub ln_kernel: f64,
    /// Sum of absolute contributions over the result; large values mean cancellation.
    pub condition: f64,
}

/// Multi-hop kernel by the two-term recursion over sub-paths, from per-link
/// ln M(1−s) values. Returns `None` when two transforms are (nearly) equal
/// or the result is not positive; returns `+∞` when any link is unstable.
pub fn recursive_kernel(
    ln_mellin: &[f64],
    ln_rho: f64,
    w: u64,
    removal: RemovalChoice,
) -> Option<RecursionValue> {
    assert!(!ln_mellin.is_empty());
    assert!(ln_mellin.len() <= 64, "recursion supports at most 64 links");
    if ln_mellin.iter().any(|&lm| (ln_rho + lm).is_nan() || ln_rho + lm >= 0.0) {
        return Some(RecursionValue {
            ln_kernel: f64::INFINITY,
            condition: 1.0,
        });
    }
    let ln_max = ln_mellin.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let m: Vec<f64> = ln_mellin.iter().map(|&l| l.exp()).collect();
    // Single-hop kernels scaled by m_max^(−w).
    let base: Vec<f64> = ln_mellin
        .iter()
        .map(|&l| {
            let scaled_num = if w == 0 { 0.0 } else { w as f64 * (l - ln_max) };
            (scaled_num - ln_one_minus_exp(ln_rho + l)).exp()
        })
        .collect();

    let mut memo: HashMap<u64, (f64, f64)> = HashMap::new();
    let full = if ln_mellin.len() == 64 {
        u64::MAX
    } else {
        (1u64 << ln_mellin.len()) - 1
    };
    let (value, abs) = recurse(full, &m, &base, removal, &mut memo)?;
    if !(value.is_finite() && value > 0.0) {
        return None;
    }
    let w_term = if w == 0 { 0.0 } else { w as f64 * ln_max };
    Some(RecursionValue {
        ln_kernel: w_term + value.ln(),
        condition: abs / value,
    })
}

fn recurse(
    mask: u64,
    m: &[f64],
    base: &[f64],
    removal: RemovalChoice,
    memo: &mut HashMap<u64, (f64, f64)>,
) -> Option<(f64, f64)> {
    if let Some(&v) = memo.get(&mask) {
        return Some(v);
    }
    let members: Vec<usize> = (0..m.len()).filter(|&i| mask & (1 << i) != 0).collect();
    if members.len() == 1 {
        let k = base[members[0]];
        return Some((k, k.abs()));
    }
    let last = *members.last().expect("non-empty");
    let pick = removal.pick(&members);
    let (mn, mm) = (m[last], m[pick]);
    let gap = mn - mm;
    if gap.abs() < DEGENERATE_GAP * mn.max(mm) {
        return None;
    }
    let (k_without_pick, a1) = recurse(mask & !(1 << pick), m, base, removal, memo)?;
    let (k_without_last, a2) = recurse(mask & !(1 << last), m, base, removal, memo)?;
    let c1 = mn / gap;
    let c2 = -mm / gap;
    let value = c1 * k_without_pick + c2 * k_without_last;
    let abs = c1.abs() * a1 + c2.abs() * a2;
    memo.insert(mask, (value, abs));
    Some((value, abs))
}

/// Multi-hop kernel as ρ^(−w)·Π 1/(1−a_j)·Pr[ΣU_j ≥ w] with independent
/// geometric U_j of ratio a_j = ρ·m_j. Every term is non-negative, so equal
/// transforms need no special handling. Cost O(n·w).
pub fn geometric_tail_kernel(ln_mellin: &[f64], ln_rho: f64, w: u64) -> f64 {
    assert!(!ln_mellin.is_empty());
    if ln_mellin.iter().any(|&lm| (ln_rho + lm).is_nan() || ln_rho + lm >= 0.0) {
        return f64::INFINITY;
    }
    let ln_a: Vec<f64> = ln_mellin.iter().map(|&l| l + ln_rho).collect();
    let ln_a_max = ln_a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let normalizer: f64 = ln_a.iter().map(|&la| ln_one_minus_exp(la)).sum();
    let w_us = w as usize;
    // tail[t] = Pr[U_1 + … + U_j ≥ t] / a_max^t
    let mut tail = vec![0.0; w_us + 1];
    tail[0] = 1.0;
    for &la in &ln_a {
        let one_minus_a = -(la.exp_m1());
        let ratio = (la - ln_a_max).exp();
        let mut prev = 1.0;
        for slot in tail.iter_mut().skip(1) {
            let v = one_minus_a * *slot + ratio * prev;
            *slot = v;
            prev = v;
        }
    }
    let ln_max_m = ln_a_max - ln_rho;
    let w_term = if w == 0 { 0.0 } else { w as f64 * ln_max_m };
    w_term - normalizer + tail[w_us].ln()
}

/// Per-link slot transforms of a path, evaluated once.
#[derive(Debug, Clone)]
pub struct PreparedPath {
    transforms: Vec<SlotTransform>,
}

impl PreparedPath {
    pub fn new(path: &PathModel) -> Result<Self, ModelError> {
        Ok(Self {
            transforms: path
                .links()
                .iter()
                .map(SlotTransform::for_link)
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn ln_mellin_at(&self, s: f64) -> Vec<f64> {
        self.transforms.iter().map(|t| t.ln_mellin(1.0 - s)).collect()
    }

    /// ln K(s, −w) and the route used; `+∞` when unstable at `s`.
    pub fn ln_kernel(&self, s: f64, w: u64, flow: &FlowSpec) -> (f64, KernelRoute) {
        let ln_m = self.ln_mellin_at(s);
        let ln_rho = s * flow.rate();
        if ln_m.len() == 1 {
            return (ln_single_kernel(ln_m[0], ln_rho, w), KernelRoute::SingleHop);
        }
        if ln_m.iter().any(|&l| (l + ln_rho).is_nan() || l + ln_rho >= 0.0) {
            return (f64::INFINITY, KernelRoute::Recursion);
        }
        if ln_m.len() <= 64 {
            if let Some(r) = recursive_kernel(&ln_m, ln_rho, w, RemovalChoice::First) {
                if r.condition <= MAX_RECURSION_CONDITION {
                    return (r.ln_kernel, KernelRoute::Recursion);
                }
            }
        }
        (geometric_tail_kernel(&ln_m, ln_rho, w), KernelRoute::GeometricTail)
    }

    /// Minimizes the kernel over `s` and clamps the result at 1.
    pub fn bound(&self, flow: &FlowSpec, w: u64) -> BoundResult {
        let objective = |s: f64| self.ln_kernel(s, w, flow).0;
        match minimize_scalar_with_grid(objective, S_MIN, S_MAX, S_LOG_TOL, S_GRID_POINTS) {
            Ok(min) => {
                let s = min.argmin;
                let (ln_k, route) = self.ln_kernel(s, w, flow);
                BoundResult {
                    violation_probability: ln_k.exp().min(1.0),
                    ln_kernel: ln_k,
                    optimizing_s: Some(s),
                    stable: true,
                    per_link_mellin: self.ln_mellin_at(s).into_iter().map(f64::exp).collect(),
                    route: Some(route),
                }
            }
            Err(NumericsError::NoFeasiblePoint) => BoundResult::unstable(self.transforms.len()),
            Err(other) => unreachable!("minimizer arguments are constants: {other}"),
        }
    }
}

/// End-to-end kernel `K^L(s, −w)` of a path; `+∞` when any link is unstable at `s`.
pub fn multi_hop_kernel(s: f64, w: u64, flow: &FlowSpec, path: &PathModel) -> Result<f64, ModelError> {
    check_s(s)?;
    Ok(PreparedPath::new(path)?.ln_kernel(s, w, flow).0.exp())
}

/// Bound on Pr[end-to-end delay > w superframes], minimized over `s`.
pub fn delay_bound(flow: &FlowSpec, path: &PathModel, w: u64) -> Result<BoundResult, ModelError> {
    Ok(PreparedPath::new(path)?.bound(flow, w))
}

/// Single-hop bound under the Shannon-capacity service model.
pub fn delay_bound_shannon(flow: &FlowSpec, link: &LinkModel, w: u64) -> Result<BoundResult, ModelError> {
    if !matches!(link.kind, ServiceModelKind::Shannon { .. }) {
        return Err(ModelError::WrongServiceModel {
            expected: "shannon",
            got: link.kind.name(),
        });
    }
    delay_bound(flow, &PathModel::single(*link)?, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinDelay {
    Superframes(u64),
    /// The flow is unstable, or no delay below the search cap meets epsilon.
    Unbounded,
}

/// Smallest `w` whose bound is at most `epsilon`.
pub fn min_delay_for_epsilon(flow: &FlowSpec, path: &PathModel, epsilon: f64) -> Result<MinDelay, ModelError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ModelError::Invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let prepared = PreparedPath::new(path)?;
    let meets = |w: u64| {
        let b = prepared.bound(flow, w);
        (b.stable, b.stable && b.violation_probability <= epsilon)
    };
    let (stable, ok) = meets(0);
    if !stable {
        return Ok(MinDelay::Unbounded);
    }
    if ok {
        return Ok(MinDelay::Superframes(0));
    }
    let mut lo = 0u64; // fails
    let mut hi = 1u64;
    loop {
        if meets(hi).1 {
            break;
        }
        lo = hi;
        if hi >= MAX_DELAY_SEARCH {
            return Ok(MinDelay::Unbounded);
        }
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid).1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(MinDelay::Superframes(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy154::{q_success, FrameSpec, Snr};

    fn perfect_link() -> LinkModel {
        LinkModel::new(
            Snr::from_linear(1e12).unwrap(),
            FrameSpec::default(),
            ServiceModelKind::Ieee802154,
        )
        .unwrap()
    }

    #[test]
    fn arrival_transform() {
        let flow = FlowSpec::new(80);
        assert_eq!(mellin_arrival(1.0, &flow, 17), 1.0);
        assert_eq!(mellin_arrival(0.3, &FlowSpec::new(0), 17), 1.0);
        let v = mellin_arrival(1.001, &flow, 10);
        assert!((v - 0.8f64.exp()).abs() < 1e-12);
        assert!((v - 2.2255).abs() < 1e-4);
    }

    #[test]
    fn perfect_channel_kernel_closed_form() {
        let link = perfect_link();
        let flow = FlowSpec::new(0);
        for &s in &[1e-4, 1e-3, 3e-3] {
            for w in [0u64, 1, 5] {
                let k = single_hop_kernel(s, w, &flow, &link).unwrap();
                let expect = (-1016.0 * s * w as f64).exp() / (1.0 - (-1016.0 * s).exp());
                assert!(((k - expect) / expect).abs() < 1e-9, "s={s} w={w}");
            }
        }
    }

    #[test]
    fn zero_delay_kernel_at_least_one() {
        let link = LinkModel::ieee802154_db(8.0).unwrap();
        let k = single_hop_kernel(0.01, 0, &FlowSpec::new(80), &link).unwrap();
        assert!(k >= 1.0);
    }

    #[test]
    fn stability_rate_extremes() {
        let link = perfect_link();
        let q = q_success(&link).unwrap();
        assert!(1.0 - q < 1e-11);
        let expected: f64 = -((1.0 - q) + q * (-10.16f64).exp()).ln() / 0.01;
        let rate = stability_max_rate(0.01, &link).unwrap();
        assert!((rate - expected).abs() < 1e-9 * expected);
        assert!((rate - 1016.0).abs() < 1e-4);
        let dead = LinkModel::new(
            Snr::from_linear(1e-12).unwrap(),
            FrameSpec::default(),
            ServiceModelKind::Ieee802154,
        )
        .unwrap();
        assert!(stability_max_rate(0.01, &dead).unwrap().abs() < 1e-300);
    }

    #[test]
    fn multi_hop_reduces_to_single_hop() {
        let link = LinkModel::ieee802154_db(6.0).unwrap();
        let path = PathModel::single(link).unwrap();
        let flow = FlowSpec::new(80);
        for &s in &[0.001, 0.01, 0.05] {
            for w in [0, 3, 10] {
                assert_eq!(
                    multi_hop_kernel(s, w, &flow, &path).unwrap(),
                    single_hop_kernel(s, w, &flow, &link).unwrap()
                );
            }
        }
    }

    #[test]
    fn two_hop_partial_fractions() {
        let l5 = LinkModel::ieee802154_db(5.0).unwrap();
        let l8 = LinkModel::ieee802154_db(8.0).unwrap();
        let path = PathModel::new(vec![l5, l8]).unwrap();
        let flow = FlowSpec::new(80);
        let (s, w) = (0.008, 7);
        let m5 = crate::phy154::mellin_slot_service(1.0 - s, &l5).unwrap();
        let m8 = crate::phy154::mellin_slot_service(1.0 - s, &l8).unwrap();
        let k5 = single_hop_kernel(s, w, &flow, &l5).unwrap();
        let k8 = single_hop_kernel(s, w, &flow, &l8).unwrap();
        // n = link 8 dB, m = link 5 dB
        let expect = m8 / (m8 - m5) * k8 + m5 / (m5 - m8) * k5;
        let got = multi_hop_kernel(s, w, &flow, &path).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn equal_links_use_geometric_tail() {
        let path = PathModel::ieee802154_db(&[6.0, 6.0, 6.0]).unwrap();
        let prepared = PreparedPath::new(&path).unwrap();
        let (lnk, route) = prepared.ln_kernel(0.01, 5, &FlowSpec::new(80));
        assert_eq!(route, KernelRoute::GeometricTail);
        assert!(lnk.is_finite());
    }

    #[test]
    fn geometric_tail_single_hop_matches_closed_form() {
        for &(lm, lr, w) in &[(-0.5, 0.1, 0u64), (-2.0, 0.8, 10), (-0.01, 0.005, 40)] {
            let a = geometric_tail_kernel(&[lm], lr, w);
            let b = ln_single_kernel(lm, lr, w);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn unstable_flow() {
        let path = PathModel::ieee802154_db(&[8.0]).unwrap();
        let b = delay_bound(&FlowSpec::new(1100), &path, 5).unwrap();
        assert!(!b.stable);
        assert_eq!(b.violation_probability, 1.0);
        assert_eq!(
            min_delay_for_epsilon(&FlowSpec::new(1100), &path, 1e-3).unwrap(),
            MinDelay::Unbounded
        );
    }

    #[test]
    fn empty_flow_bound() {
        let path = PathModel::new(vec![perfect_link()]).unwrap();
        let b = delay_bound(&FlowSpec::new(0), &path, 0).unwrap();
        assert!(b.stable);
        assert!(b.violation_probability <= 1.0);
        let b = delay_bound(&FlowSpec::new(0), &path, 5).unwrap();
        assert!(b.violation_probability < 1e-20, "{b:?}");
    }

    #[test]
    fn near_one_epsilon_gives_zero_delay() {
        let path = PathModel::ieee802154_db(&[8.0]).unwrap();
        let flow = FlowSpec::new(80);
        let b0 = delay_bound(&flow, &path, 0).unwrap();
        let eps = 1.0 - 1e-12;
        let md = min_delay_for_epsilon(&flow, &path, eps).unwrap();
        if b0.violation_probability <= eps {
            assert_eq!(md, MinDelay::Superframes(0));
        }
    }

    #[test]
    fn shannon_requires_shannon_link() {
        let link = LinkModel::ieee802154_db(5.0).unwrap();
        assert!(delay_bound_shannon(&FlowSpec::new(80), &link, 3).is_err());
    }

    #[test]
    fn invalid_arguments() {
        let link = LinkModel::ieee802154_db(5.0).unwrap();
        assert!(single_hop_kernel(0.0, 1, &FlowSpec::new(1), &link).is_err());
        assert!(stability_max_rate(-1.0, &link).is_err());
        assert!(PathModel::new(vec![]).is_err());
        let path = PathModel::single(link).unwrap();
        assert!(min_delay_for_epsilon(&FlowSpec::new(1), &path, 0.0).is_err());
        assert!(min_delay_for_epsilon(&FlowSpec::new(1), &path, 1.0).is_err());
    }
}
