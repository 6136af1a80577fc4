//! Library results against independent reference computations.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::function::erf::erfc;

use tsch_delay::numerics::upper_incomplete_gamma;
use tsch_delay::phy154::{
    ber, mellin_slot_service, mellin_slot_service_shannon, q_success, shannon_nat_capacity, LinkModel, Snr,
};
use tsch_delay::sim::{empirical_violation, sample_snr};
use tsch_delay::snc::{
    delay_bound, min_delay_for_epsilon, multi_hop_kernel, single_hop_kernel, stability_max_rate, FlowSpec,
    MinDelay, PathModel, S_MAX, S_MIN,
};

#[test]
fn ber_matches_reference_sum() {
    for i in 0..=2000 {
        let g = i as f64 * 0.05;
        let lib = ber(Snr::from_linear(g).unwrap());
        let reference = common::ber(g);
        assert!((lib - reference).abs() < 1e-12, "γ = {g}: {lib} vs {reference}");
        // Past γ ≈ 1 the leading term dominates and there is no cancellation.
        if g >= 1.0 && reference > 1e-290 {
            assert!((lib - reference).abs() <= 1e-12 * reference, "γ = {g}");
        }
    }
}

#[test]
fn q_matches_fixed_grid_reference() {
    for db in [-5.0, 0.0, 3.0, 5.0, 8.0, 12.0, 15.5, 20.0, 30.0] {
        let g = common::db_to_linear(db);
        let lib = q_success(&LinkModel::ieee802154_db(db).unwrap()).unwrap();
        let reference = common::q_success(g, 1016);
        assert!((lib - reference).abs() < 1e-9 * reference, "{db} dB: {lib} vs {reference}");
    }
}

#[test]
fn q_matches_monte_carlo() {
    let n = 1_000_000;
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    for db in [3.0, 5.0, 8.0] {
        let g = common::db_to_linear(db);
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..n {
            let u: f64 = rng.random();
            let y = -g * (1.0 - u).ln();
            let v = common::frame_success(y, 1016);
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let se = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
        let q = q_success(&LinkModel::ieee802154_db(db).unwrap()).unwrap();
        assert!((q - mean).abs() <= 3.0 * se, "{db} dB: Q = {q}, MC = {mean} ± {se}");
    }
}

#[test]
fn incomplete_gamma_negative_order() {
    let (a, x) = (-1.5f64, 0.4f64);
    // Substituting t = x·e^z gives a smooth integrand on z ∈ [0, ln(80/x)].
    let quad = common::simpson(
        |z| {
            let t = x * z.exp();
            t.powf(a) * (-t).exp()
        },
        0.0,
        (80.0 / x).ln(),
        400_000,
    );
    // Downward recurrence from Γ(1/2, x) = √π·erfc(√x).
    let g_half = std::f64::consts::PI.sqrt() * erfc(x.sqrt());
    let g_mhalf = (g_half - x.powf(-0.5) * (-x).exp()) / -0.5;
    let closed = (g_mhalf - x.powf(-1.5) * (-x).exp()) / -1.5;
    let lib = upper_incomplete_gamma(a, x).unwrap();
    assert!(((lib - quad) / quad).abs() < 1e-8, "{lib} vs {quad}");
    // erfc carries about 1e-10 relative error here.
    assert!(((lib - closed) / closed).abs() < 1e-9, "{lib} vs {closed}");
    // 30-digit reference value.
    let exact = 1.230_284_180_264_935_4;
    assert!(((lib - exact) / exact).abs() < 1e-14);
}

#[test]
fn shannon_transform_matches_direct_integration() {
    let (db, arg) = (5.0, 0.999);
    let g = common::db_to_linear(db);
    let exponent = (arg - 1.0) * shannon_nat_capacity(625);
    assert!((exponent + 0.9017).abs() < 1e-4);
    // E[(1 + Y)^exponent], Y ~ Exp(γ̄), with u = y/γ̄ on [0, 60].
    let direct = common::simpson(
        |u| (1.0 + g * u).powf(exponent) * (-u).exp(),
        0.0,
        60.0,
        200_000,
    );
    let lib = mellin_slot_service_shannon(arg, &LinkModel::shannon_db(db).unwrap()).unwrap();
    assert!((lib - direct).abs() < 1e-6, "{lib} vs {direct}");
}

#[test]
fn single_hop_kernel_matches_truncated_sum() {
    let mut rng = ChaCha20Rng::seed_from_u64(20);
    let mut checked = 0;
    while checked < 20 {
        let db = rng.random_range(2.0..14.0);
        let r_a = rng.random_range(10..400u64);
        let w = rng.random_range(0..30usize);
        let s = 10f64.powf(rng.random_range(-4.0..-1.0));
        let link = LinkModel::ieee802154_db(db).unwrap();
        let flow = FlowSpec::new(r_a);
        let q = common::q_success(common::db_to_linear(db), 1016);
        let m = common::slot_mellin(1.0 - s, q, 1016);
        let rho = (r_a as f64 * s).exp();
        if rho * m >= 0.995 {
            continue;
        }
        let (reference, tail) = common::truncated_kernel(&[m], rho, w, 1e-13);
        assert!(tail < 1e-12);
        let lib = single_hop_kernel(s, w as u64, &flow, &link).unwrap();
        assert!(
            ((lib - reference) / reference).abs() < 1e-9,
            "{db} dB, r_a {r_a}, w {w}, s {s}: {lib} vs {reference}"
        );
        checked += 1;
    }
}

#[test]
fn multi_hop_kernel_matches_truncated_sum() {
    let mut rng = ChaCha20Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 20 {
        let hops = rng.random_range(2..=5usize);
        let dbs: Vec<f64> = (0..hops).map(|_| rng.random_range(3.0..12.0)).collect();
        let r_a = rng.random_range(10..200u64);
        let w = rng.random_range(0..25usize);
        let s = 10f64.powf(rng.random_range(-3.5..-1.5));
        let ms: Vec<f64> = dbs
            .iter()
            .map(|&db| common::slot_mellin(1.0 - s, common::q_success(common::db_to_linear(db), 1016), 1016))
            .collect();
        let rho = (r_a as f64 * s).exp();
        if ms.iter().any(|&m| rho * m >= 0.98) {
            continue;
        }
        let (reference, tail) = common::truncated_kernel(&ms, rho, w, 1e-13);
        assert!(tail < 1e-12);
        let path = PathModel::ieee802154_db(&dbs).unwrap();
        let lib = multi_hop_kernel(s, w as u64, &FlowSpec::new(r_a), &path).unwrap();
        assert!(
            ((lib - reference) / reference).abs() < 1e-9,
            "{dbs:?}, r_a {r_a}, w {w}, s {s}: {lib} vs {reference}"
        );
        checked += 1;
    }
}

fn dense_grid_min(path: &PathModel, flow: &FlowSpec, w: u64, points: usize) -> f64 {
    let (lo, hi) = (S_MIN.ln(), S_MAX.ln());
    (1..=points)
        .map(|i| {
            let s = (lo + (hi - lo) * i as f64 / (points + 1) as f64).exp();
            multi_hop_kernel(s, w, flow, path).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn minimizer_matches_dense_grid() {
    let flow = FlowSpec::new(80);
    for (dbs, w) in [(vec![8.0], 20u64), (vec![8.0], 10), (vec![6.0, 8.0], 15)] {
        let path = PathModel::ieee802154_db(&dbs).unwrap();
        let dense = dense_grid_min(&path, &flow, w, 100_000);
        let b = delay_bound(&flow, &path, w).unwrap();
        assert!(b.stable);
        let rel = (b.violation_probability - dense) / dense;
        assert!(rel.abs() < 1e-6, "{dbs:?} w {w}: {} vs {dense}", b.violation_probability);
    }
}

#[test]
fn stability_rate_matches_bisection() {
    let (db, s) = (5.0, 0.005);
    let link = LinkModel::ieee802154_db(db).unwrap();
    let rate = stability_max_rate(s, &link).unwrap();
    let q = common::q_success(common::db_to_linear(db), 1016);
    let reference = -common::slot_mellin(1.0 - s, q, 1016).ln() / s;
    assert!(((rate - reference) / reference).abs() < 1e-9, "{rate} vs {reference}");
    // Integer bisection on the kernel's finiteness.
    let finite = |r: u64| single_hop_kernel(s, 0, &FlowSpec::new(r), &link).unwrap().is_finite();
    let (mut lo, mut hi) = (0u64, 10_000u64);
    assert!(finite(lo) && !finite(hi));
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if finite(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert_eq!(lo, rate.floor() as u64);
}

#[test]
fn min_delay_matches_linear_scan() {
    let eps = 1e-3;
    for (dbs, r_a) in [
        (vec![8.0], 80u64),
        (vec![5.0], 80),
        (vec![5.0, 6.0, 7.0], 80),
        (vec![6.0, 6.0], 200),
    ] {
        let path = PathModel::ieee802154_db(&dbs).unwrap();
        let flow = FlowSpec::new(r_a);
        let scan = (0..10_000u64)
            .find(|&w| delay_bound(&flow, &path, w).unwrap().violation_probability <= eps)
            .expect("scan found a delay");
        assert_eq!(
            min_delay_for_epsilon(&flow, &path, eps).unwrap(),
            MinDelay::Superframes(scan),
            "{dbs:?} r_a {r_a}"
        );
    }
}

#[test]
fn snr_sampler_is_exponential() {
    let n = 1_000_000;
    let avg = Snr::from_db(5.0).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut draws: Vec<f64> = (0..n).map(|_| sample_snr(&mut rng, avg).linear()).collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    assert!((mean / avg.linear() - 1.0).abs() < 0.01, "mean {mean}");
    draws.sort_by(f64::total_cmp);
    let ks = draws
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let cdf = 1.0 - (-y / avg.linear()).exp();
            (cdf - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - cdf).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.002, "KS statistic {ks}");
}

#[test]
fn violation_estimator_on_censored_geometric_delays() {
    // Delay = number of failed Bernoulli(p) attempts before the first success,
    // so Pr[delay > w] = (1 − p)^(w + 1).
    let n = 1_000_000;
    let p = 0.3;
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let delays: Vec<u64> = (0..n)
        .map(|_| {
            let mut d = 0;
            while !rng.random_bool(p) {
                d += 1;
            }
            d
        })
        .collect();
    for w in [0u64, 1, 3, 7, 15] {
        let truth = (1.0 - p).powi(w as i32 + 1);
        let (est, count) = empirical_violation(&delays, w).unwrap();
        assert_eq!(count, n);
        let se = (truth * (1.0 - truth) / n as f64).sqrt();
        assert!((est - truth).abs() <= 3.0 * se, "w {w}: {est} vs {truth}");
    }
}

#[test]
fn slot_transform_is_consistent_with_reference_q() {
    for db in [1.0, 3.0, 5.0, 8.0, 12.0] {
        let link = LinkModel::ieee802154_db(db).unwrap();
        let q = common::q_success(common::db_to_linear(db), 1016);
        for s in [1e-4, 1e-2, 0.5, 0.999] {
            let lib = mellin_slot_service(1.0 - s, &link).unwrap();
            let reference = common::slot_mellin(1.0 - s, q, 1016);
            assert!(((lib - reference) / reference).abs() < 1e-9);
        }
    }
}
