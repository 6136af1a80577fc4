//! One function per subcommand. Each returns a table, summary lines and an
//! exit code; nothing here touches the terminal or the filesystem.

use tsch_delay::phy154::{db_to_linear, q_success, LinkModel, ServiceModelKind, Snr};
use tsch_delay::numerics::QuadratureSpec;
use tsch_delay::sim::{self, SimReport};
use tsch_delay::snc::{
    min_delay_for_epsilon, BoundResult, FlowSpec, KernelRoute, MinDelay, PathModel, PreparedPath,
};
use tsch_delay::Execution;

use crate::error::{exit, CliError};
use crate::scenario::{PayloadUnit, PowerSplitSpec, ScenarioFile};
use crate::table::{num, Table};

pub const BOUND_COLUMNS: [&str; 5] = ["w_superframes", "w_ms", "violation_bound", "optimizing_s", "stable"];

/// Violation probabilities listed in the `bound` summary.
const SUMMARY_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-6];

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: Vec<String>,
    pub exit_code: i32,
}

/// Shared inputs after scenario resolution.
#[derive(Debug, Clone)]
pub struct Context {
    pub scenario: ScenarioFile,
    pub targets: Vec<u64>,
    pub seed: Option<u64>,
    pub execution: Execution,
}

fn bound_cells(b: &BoundResult) -> [String; 3] {
    [
        num(b.violation_probability),
        b.optimizing_s.map(num).unwrap_or_default(),
        b.stable.to_string(),
    ]
}

fn bounds_for(path: &PathModel, flow: &FlowSpec, targets: &[u64], exec: Execution) -> Result<Vec<BoundResult>, CliError> {
    let prepared = PreparedPath::new(path)?;
    Ok(exec.map(targets.to_vec(), |w| prepared.bound(flow, w)))
}

/// Numerical settings behind a set of bounds, for the summary.
fn numerics_note<'a>(results: impl IntoIterator<Item = &'a BoundResult>) -> String {
    let tail = results
        .into_iter()
        .filter(|b| b.route == Some(KernelRoute::GeometricTail))
        .count();
    format!(
        "quadrature relative tolerance {:e}; {tail} bound(s) evaluated by the geometric-tail kernel (equal or near-equal links)",
        QuadratureSpec::default().relative_tolerance
    )
}

fn describe_delay(d: MinDelay, superframe_ms: f64) -> String {
    match d {
        MinDelay::Superframes(w) => format!("{w} superframes ({} ms)", num(w as f64 * superframe_ms)),
        MinDelay::Unbounded => "unbounded".into(),
    }
}

fn path_description(path: &PathModel) -> String {
    let snrs: Vec<String> = path.links().iter().map(|l| num(l.avg_snr.db())).collect();
    format!("{} hop(s), mean SNR [{}] dB", path.len(), snrs.join(", "))
}

pub fn bound(ctx: &Context) -> Result<Report, CliError> {
    let s = &ctx.scenario;
    let path = s.path_model()?;
    let flow = s.flow_spec()?;
    let frame_ms = s.superframe_ms(path.len());
    let results = bounds_for(&path, &flow, &ctx.targets, ctx.execution)?;

    let mut table = Table::new(&BOUND_COLUMNS);
    for (&w, b) in ctx.targets.iter().zip(&results) {
        let [bound, opt_s, stable] = bound_cells(b);
        table.push(vec![w.to_string(), num(w as f64 * frame_ms), bound, opt_s, stable]);
    }
    let stable = results.iter().all(|b| b.stable);
    let mut summary = vec![
        format!("{}, model {}", path_description(&path), s.model.kind()),
        format!("r_a = {} bits per superframe, superframe = {} ms", num(flow.rate()), num(frame_ms)),
        numerics_note(&results),
    ];
    if stable {
        for eps in SUMMARY_EPSILONS {
            let d = min_delay_for_epsilon(&flow, &path, eps)?;
            summary.push(format!("smallest delay with violation ≤ {eps:e}: {}", describe_delay(d, frame_ms)));
        }
    } else {
        summary.push("unstable: the arrival rate exceeds what the path can serve at every s".into());
    }
    Ok(Report {
        table,
        summary,
        exit_code: if stable { exit::SUCCESS } else { exit::UNSTABLE },
    })
}

fn simulate_report(ctx: &Context) -> Result<(SimReport, PathModel), CliError> {
    let mut config = ctx.scenario.sim_config(ctx.seed)?;
    config.target_delays = ctx.targets.clone();
    let report = sim::run(&config)?;
    Ok((report, config.path))
}

fn sim_summary(report: &SimReport, path: &PathModel) -> Result<Vec<String>, CliError> {
    let mut lines = vec![
        format!("{}, forwarding {}", path_description(path), report.forwarding.name()),
        format!(
            "{} superframes, {} blocks counted, {} unfinished",
            report.superframes,
            report.block_delays.len(),
            report.unfinished_blocks
        ),
    ];
    for (j, (link, rate)) in path.links().iter().zip(&report.per_link_success_rate).enumerate() {
        lines.push(format!(
            "link {}: frame success {} (analytical {})",
            j + 1,
            num(*rate),
            num(q_success(link)?)
        ));
    }
    if !report.block_delays.is_empty() {
        let mean = report.block_delays.iter().sum::<u64>() as f64 / report.block_delays.len() as f64;
        let max = report.block_delays.iter().max().copied().unwrap_or(0);
        lines.push(format!("delay mean {} superframes, max {max}", num(mean)));
    }
    Ok(lines)
}

pub fn simulate(ctx: &Context) -> Result<Report, CliError> {
    let (report, path) = simulate_report(ctx)?;
    let frame_ms = ctx.scenario.superframe_ms(path.len());
    let mut table = Table::new(&[
        "w_superframes",
        "w_ms",
        "empirical",
        "violations",
        "samples",
        "ci_low",
        "ci_high",
    ]);
    for (&w, est) in &report.violation_estimates {
        let (lo, hi) = est.wilson_95();
        table.push(vec![
            w.to_string(),
            num(w as f64 * frame_ms),
            num(est.probability),
            est.violations.to_string(),
            est.sample_count.to_string(),
            num(lo),
            num(hi),
        ]);
    }
    Ok(Report {
        table,
        summary: sim_summary(&report, &path)?,
        exit_code: exit::SUCCESS,
    })
}

pub fn validate(ctx: &Context) -> Result<Report, CliError> {
    let (report, path) = simulate_report(ctx)?;
    let flow = ctx.scenario.flow_spec()?;
    let targets: Vec<u64> = report.violation_estimates.keys().copied().collect();
    let bounds = bounds_for(&path, &flow, &targets, ctx.execution)?;
    let mut table = Table::new(&[
        "w_superframes",
        "analytical_bound",
        "empirical",
        "ci_low",
        "ci_high",
        "dominates",
    ]);
    let mut failures = Vec::new();
    let mut point_misses = 0;
    for (b, (&w, est)) in bounds.iter().zip(&report.violation_estimates) {
        let (lo, hi) = est.wilson_95();
        // Fail only when the whole 95 % interval lies above the bound.
        let dominates = b.violation_probability >= lo;
        if !dominates {
            failures.push(w);
        }
        if b.violation_probability < est.probability {
            point_misses += 1;
        }
        table.push(vec![
            w.to_string(),
            num(b.violation_probability),
            num(est.probability),
            num(lo),
            num(hi),
            dominates.to_string(),
        ]);
    }
    let mut summary = sim_summary(&report, &path)?;
    summary.push(format!(
        "point estimates above the bound: {point_misses} of {}",
        targets.len()
    ));
    let pass = failures.is_empty();
    summary.push(if pass {
        "verdict: PASS (analytical bound covers the simulated estimate at every w)".into()
    } else {
        format!("verdict: FAIL at w = {failures:?}")
    });
    Ok(Report {
        table,
        summary,
        exit_code: if pass { exit::SUCCESS } else { exit::VALIDATION_FAILED },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Payload per superframe, in the scenario's flow unit.
    RA,
    /// Mean SNR of every link, in dB.
    SnrDb,
    /// Number of leading links of the scenario path.
    Hops,
    /// Offset added to every link's mean SNR, in dB (3.0103 doubles it).
    SnrGainDb,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::RA => "r_a",
            SweepVariable::SnrDb => "snr_db",
            SweepVariable::Hops => "hops",
            SweepVariable::SnrGainDb => "snr_gain_db",
        }
    }
}

fn sweep_point(ctx: &Context, variable: SweepVariable, value: f64) -> Result<(PathModel, FlowSpec), CliError> {
    let s = &ctx.scenario;
    let base_path = s.path_model()?;
    let base_flow = s.flow_spec()?;
    let shifted = |f: &dyn Fn(&LinkModel) -> f64| -> Result<PathModel, CliError> {
        let links = base_path
            .links()
            .iter()
            .map(|l| Ok(l.with_avg_snr(Snr::from_db(f(l))?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(PathModel::new(links)?)
    };
    Ok(match variable {
        SweepVariable::RA => {
            let factor = match s.flow.unit {
                PayloadUnit::Bits => 1.0,
                PayloadUnit::Bytes => 8.0,
            };
            (base_path, FlowSpec::from_rate(value * factor)?)
        }
        SweepVariable::SnrDb => (shifted(&|_| value)?, base_flow),
        SweepVariable::SnrGainDb => (shifted(&|l| l.avg_snr.db() + value)?, base_flow),
        SweepVariable::Hops => {
            if value.fract() != 0.0 || value < 1.0 || value > base_path.len() as f64 {
                return Err(CliError::Input(format!(
                    "hops must be a whole number in 1..={}, got {value}",
                    base_path.len()
                )));
            }
            (base_path.prefix(value as usize)?, base_flow)
        }
    })
}

pub fn sweep(ctx: &Context, variable: SweepVariable, values: &[f64]) -> Result<Report, CliError> {
    if values.is_empty() {
        return Err(CliError::Input("the sweep has no values".into()));
    }
    let points = values
        .iter()
        .map(|&v| sweep_point(ctx, variable, v))
        .collect::<Result<Vec<_>, _>>()?;
    let prepared = points
        .iter()
        .map(|(p, _)| PreparedPath::new(p))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|i| ctx.targets.iter().map(move |&w| (i, w)))
        .collect();
    let results = ctx
        .execution
        .map(jobs.clone(), |(i, w)| prepared[i].bound(&points[i].1, w));

    let mut table = Table::new(&[
        "variable",
        "value",
        "w_superframes",
        "w_ms",
        "violation_bound",
        "optimizing_s",
        "stable",
    ]);
    for ((i, w), b) in jobs.iter().zip(&results) {
        let frame_ms = ctx.scenario.superframe_ms(points[*i].0.len());
        let [bound, opt_s, stable] = bound_cells(b);
        table.push(vec![
            variable.name().into(),
            num(values[*i]),
            w.to_string(),
            num(*w as f64 * frame_ms),
            bound,
            opt_s,
            stable,
        ]);
    }
    let summary = vec![
        format!(
            "swept {} over {} value(s) × {} target(s)",
            variable.name(),
            values.len(),
            ctx.targets.len()
        ),
        numerics_note(&results),
    ];
    Ok(Report {
        table,
        summary,
        exit_code: exit::SUCCESS,
    })
}

pub fn power_split(ctx: &Context, spec: &PowerSplitSpec) -> Result<Report, CliError> {
    spec.validate()?;
    let s = &ctx.scenario;
    let flow = s.flow_spec()?;
    let template = s.link_model(&s.path[0])?;
    let mut table = Table::new(&[
        "hops",
        "link_distance_m",
        "node_power_dbm",
        "pathloss_db",
        "link_snr_db",
        "feasible",
        "w_superframes",
        "w_ms",
        "violation_bound",
        "optimizing_s",
        "stable",
    ]);
    let budgets: Vec<_> = (1..=spec.num_hops).map(|h| spec.link_snr_db(h)).collect();
    let mut best: Vec<Option<(u32, f64)>> = vec![None; ctx.targets.len()];
    let mut all_results = Vec::new();
    for budget in &budgets {
        let frame_ms = s.superframe_ms(budget.hops as usize);
        let head = vec![
            budget.hops.to_string(),
            num(budget.distance_m),
            num(budget.node_power_dbm),
            num(budget.pathloss_db),
            num(budget.snr_db),
        ];
        let snr = db_to_linear(budget.snr_db);
        if !(snr > 0.0 && snr.is_finite()) {
            for &w in &ctx.targets {
                let mut row = head.clone();
                row.extend([
                    "false".into(),
                    w.to_string(),
                    num(w as f64 * frame_ms),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
                table.push(row);
            }
            continue;
        }
        let link = template.with_avg_snr(Snr::from_linear(snr)?);
        let path = PathModel::new(vec![link; budget.hops as usize])?;
        let results = bounds_for(&path, &flow, &ctx.targets, ctx.execution)?;
        for (k, (&w, b)) in ctx.targets.iter().zip(&results).enumerate() {
            let [bound, opt_s, stable] = bound_cells(b);
            let mut row = head.clone();
            row.extend(["true".into(), w.to_string(), num(w as f64 * frame_ms), bound, opt_s, stable]);
            table.push(row);
            if best[k].is_none_or(|(_, v)| b.violation_probability < v) {
                best[k] = Some((budget.hops, b.violation_probability));
            }
        }
        all_results.extend(results);
    }
    let mut summary = vec![format!(
        "{} m, {} dBm total, pathloss exponent {} with {} dB at {} m, noise {} dBm (placeholder propagation values)",
        num(spec.total_distance_m),
        num(spec.total_power_dbm),
        num(spec.pathloss.exponent),
        num(spec.pathloss.reference_loss_db),
        num(spec.pathloss.reference_distance_m),
        num(spec.noise_floor_dbm)
    )];
    summary.push(numerics_note(&all_results));
    for (w, b) in ctx.targets.iter().zip(&best) {
        if let Some((h, v)) = b {
            summary.push(format!("w = {w}: lowest bound {} with {h} hop(s)", num(*v)));
        }
    }
    Ok(Report {
        table,
        summary,
        exit_code: exit::SUCCESS,
    })
}

pub fn compare_shannon(ctx: &Context, symbols_per_slot: u32) -> Result<Report, CliError> {
    let s = &ctx.scenario;
    let flow = s.flow_spec()?;
    let base = s.path_model()?;
    let ieee = base.with_kind(ServiceModelKind::Ieee802154);
    let shannon = base.with_kind(ServiceModelKind::Shannon { symbols_per_slot });
    let b_ieee = bounds_for(&ieee, &flow, &ctx.targets, ctx.execution)?;
    let b_shannon = bounds_for(&shannon, &flow, &ctx.targets, ctx.execution)?;

    let mut sim_ctx = ctx.clone();
    sim_ctx.scenario.model = crate::scenario::ModelSection::Ieee802154;
    let (report, _) = simulate_report(&sim_ctx)?;

    let frame_ms = s.superframe_ms(base.len());
    let mut table = Table::new(&["w_superframes", "w_ms", "bound_802154", "bound_shannon", "empirical"]);
    let mut ordering_failures = Vec::new();
    let mut above_shannon = Vec::new();
    for ((&w, bi), bs) in ctx.targets.iter().zip(&b_ieee).zip(&b_shannon) {
        let emp = report.violation_estimates[&w].probability;
        if bs.violation_probability > bi.violation_probability {
            ordering_failures.push(w);
        }
        if emp > bs.violation_probability {
            above_shannon.push(w);
        }
        table.push(vec![
            w.to_string(),
            num(w as f64 * frame_ms),
            num(bi.violation_probability),
            num(bs.violation_probability),
            num(emp),
        ]);
    }
    let mut summary = vec![
        format!("{}, {} symbols per slot for the Shannon model", path_description(&base), symbols_per_slot),
        format!("empirical estimate above the Shannon bound at w = {above_shannon:?}"),
        numerics_note(b_ieee.iter().chain(&b_shannon)),
    ];
    if !ordering_failures.is_empty() {
        summary.push(format!("Shannon bound above the 802.15.4 bound at w = {ordering_failures:?}"));
    }
    Ok(Report {
        table,
        summary,
        exit_code: if ordering_failures.is_empty() {
            exit::SUCCESS
        } else {
            exit::VALIDATION_FAILED
        },
    })
}

