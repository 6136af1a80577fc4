//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

/// BER with binomials built by the multiplicative formula and a
/// compensated (Neumaier) sum.
pub fn ber(gamma: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut binom = 1.0f64; // C(16, 0)
    for u in 1..=16u32 {
        binom = binom * f64::from(17 - u) / f64::from(u);
        if u < 2 {
            continue;
        }
        let sign = if u % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * binom * (-20.0 * gamma * (1.0 - 1.0 / f64::from(u))).exp();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    ((sum + comp) / 30.0).clamp(0.0, 1.0)
}

pub fn frame_success(gamma: f64, k_a: u32) -> f64 {
    (1.0 - ber(gamma)).powi(k_a as i32)
}

/// Composite Simpson on `[a, b]` with `panels` (even) sub-intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Q(γ̄) with a fixed fine grid on the transition region `y ∈ [0, 8]` and
/// the remaining exponential tail in closed form (f = 1 there to 1e-40).
pub fn q_success(avg_snr: f64, k_a: u32) -> f64 {
    let cut = 8.0;
    let body = simpson(
        |y| frame_success(y, k_a) * (-y / avg_snr).exp() / avg_snr,
        0.0,
        cut,
        200_000,
    );
    body + (-cut / avg_snr).exp()
}

/// Per-slot service transform from a Q value.
pub fn slot_mellin(arg: f64, q: f64, k_a: u32) -> f64 {
    1.0 + ((f64::from(k_a) * (arg - 1.0)).exp() - 1.0) * q
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Σ_{v ≥ 0} ρ^v·h_{v+w}(m), with h_t the complete homogeneous symmetric
/// polynomial, truncated once a rigorous bound on the rest falls below
/// `tail_tol` relative to the partial sum. Returns the sum and that bound.
pub fn truncated_kernel(m: &[f64], rho: f64, w: usize, tail_tol: f64) -> (f64, f64) {
    let n = m.len();
    let m_max = m.iter().cloned().fold(0.0, f64::max);
    let a_max = m_max * rho;
    assert!(a_max < 1.0);
    // partial[j] = h_t(m_1..m_j) for the current degree t.
    let mut partial = vec![1.0f64; n + 1];
    let advance = |partial: &mut Vec<f64>| {
        // degree t → t+1: H_j(t+1) = H_{j−1}(t+1) + m_j·H_j(t)
        let mut prev_new = 0.0;
        for j in 1..=n {
            let new = prev_new + m[j - 1] * partial[j];
            partial[j] = new;
            prev_new = new;
        }
        partial[0] = 0.0;
    };
    for _ in 0..w {
        advance(&mut partial);
    }
    let ln_binom = |t: usize| -> f64 {
        // ln C(t + n − 1, n − 1)
        (1..n).map(|i| ((t + i) as f64 / i as f64).ln()).sum()
    };
    let mut sum = 0.0;
    let mut v = 0usize;
    loop {
        sum += rho.powi(v as i32) * partial[n];
        v += 1;
        advance(&mut partial);
        let t = v + w;
        let ratio = a_max * (t + n) as f64 / (t + 1) as f64;
        if ratio < 1.0 {
            let ln_term = w as f64 * m_max.ln() + v as f64 * a_max.ln() + ln_binom(t);
            let tail = ln_term.exp() / (1.0 - ratio);
            if tail <= tail_tol * sum {
                return (sum, tail / sum);
            }
        }
        assert!(v < 50_000_000, "truncated sum did not converge");
    }
}
