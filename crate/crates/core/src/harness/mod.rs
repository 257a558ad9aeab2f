//! Seeded Monte-Carlo experiments.
//!
//! Trial `t` draws everything from `RngStream::new(seed, t)`, at every
//! sweep value, so results do not depend on scheduling or thread count and
//! sweep points share common random numbers. Per-trial metrics are reduced
//! in trial order.

mod scenario;
mod stats;

pub use scenario::{generate_scenario, rsi_model, DuplexLink, Scenario};
pub use stats::RunningStats;

use crate::channel::{rate, ser, sinr_from_powers, RngStream};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::Result;
use crate::mimo::{bidirectional_sinrs, select_max_sr, select_min_ser, MimoScenario};
use crate::ofdma::{
    centralized_exhaustive, default_price_step, price_matching, random_matching, split_bs_power, sum_rate,
    OfdmaScenario,
};
use crate::power::{fd_mimo_sum_rate, fd_mimo_waterfill, AntennaSplit};
use crate::relay::{
    end_to_end_sinr, mode_switch, optimal_relay_power, select_relay_antenna, with_direct_link, DuplexMode,
    RelayScenario,
};

/// Aggregate of one metric at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub sweep_param: String,
    pub sweep_value: f64,
    pub metric: String,
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// How trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// One thread, trials in order.
    Sequential,
    /// Rayon pool over every available core. Runs sequentially without
    /// the `parallel` feature.
    #[default]
    Parallel,
    /// Rayon pool capped at the given number of threads.
    Threads(usize),
}

/// Metric columns produced by each trial of `cfg`, in output order.
pub fn metric_names(cfg: &ExperimentConfig) -> Vec<&'static str> {
    match cfg.kind {
        ExperimentKind::MimoSelection => vec!["max_sr_sum_rate", "max_sr_sum_ser", "min_ser_sum_rate", "min_ser_sum_ser"],
        ExperimentKind::OfdmaMatching => {
            let mut names = vec!["matching_sum_rate", "random_sum_rate", "matching_rounds"];
            if cfg.ofdma.centralized {
                names.extend(["centralized_sum_rate", "centralized_candidates"]);
            }
            names
        }
        ExperimentKind::RelaySelection => {
            vec!["selection_rate", "optimal_power_rate", "fixed_relay_rate", "optimal_power_fraction"]
        }
        ExperimentKind::ModeSwitch => vec!["fd_rate", "hd_rate", "adaptive_rate", "fd_chosen"],
        ExperimentKind::PowerSweep => vec!["waterfill_sum_rate", "uniform_sum_rate", "converged", "iterations"],
    }
}

/// Metrics of trial `t` for a configuration already fixed at one sweep point.
pub fn trial_metrics(cfg: &ExperimentConfig, t: u64) -> Result<Vec<f64>> {
    let mut rng = RngStream::new(cfg.seed, t).generator();
    match generate_scenario(cfg.kind, cfg, &mut rng)? {
        Scenario::Mimo(scn) if cfg.kind == ExperimentKind::MimoSelection => mimo_trial(cfg, &scn),
        Scenario::Mimo(scn) => power_trial(cfg, &scn),
        Scenario::Ofdma(scn) => ofdma_trial(cfg, &scn, &mut rng),
        Scenario::Relay(scn) => relay_trial(cfg, &scn),
        Scenario::Duplex(link) => duplex_trial(&link),
    }
}

fn mimo_trial(cfg: &ExperimentConfig, scn: &MimoScenario) -> Result<Vec<f64>> {
    let modulation = cfg.mimo.modulation;
    let totals = |sel| -> Result<(f64, f64)> {
        let (b, a) = bidirectional_sinrs(scn, sel)?;
        Ok((rate(b)? + rate(a)?, ser(b, modulation)? + ser(a, modulation)?))
    };
    let (sr_sel, _) = select_max_sr(scn)?;
    let (ser_sel, _) = select_min_ser(scn, modulation)?;
    let (sr_rate, sr_ser) = totals(&sr_sel)?;
    let (ser_rate, ser_ser) = totals(&ser_sel)?;
    Ok(vec![sr_rate, sr_ser, ser_rate, ser_ser])
}

fn ofdma_trial(cfg: &ExperimentConfig, scn: &OfdmaScenario, rng: &mut crate::channel::SimRng) -> Result<Vec<f64>> {
    let rule = cfg.ofdma.split_rule;
    let eps = match cfg.ofdma.epsilon {
        Some(eps) => eps,
        None => default_price_step(scn)?,
    };
    let matched = price_matching(scn, eps)?;
    let matching_rate = sum_rate(scn, &matched.assignment, &split_bs_power(scn, &matched.assignment, rule)?)?;
    let random = random_matching(scn, rng);
    let random_rate = sum_rate(scn, &random, &split_bs_power(scn, &random, rule)?)?;
    let mut out = vec![matching_rate, random_rate, matched.rounds as f64];
    if cfg.ofdma.centralized {
        let best = centralized_exhaustive(scn, rule)?;
        out.extend([best.sum_rate, best.candidates as f64]);
    }
    Ok(out)
}

fn relay_trial(cfg: &ExperimentConfig, scn: &RelayScenario) -> Result<Vec<f64>> {
    let protocol = cfg.relay.protocol;
    let p_max = scn.p_r_max;
    let delivered = |sinr: f64| -> Result<f64> { rate(with_direct_link(scn, sinr)?) };

    let choice = select_relay_antenna(scn, p_max, protocol)?;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (relay, r) in scn.relays.iter().enumerate() {
        for config in 0..r.configs().len() {
            let (p, sinr) = optimal_relay_power(scn, relay, config, protocol)?;
            if sinr > best.0 {
                best = (sinr, p);
            }
        }
    }
    let fixed = end_to_end_sinr(scn, 0, 0, p_max, protocol)?;
    Ok(vec![
        delivered(choice.sinr)?,
        delivered(best.0)?,
        delivered(fixed)?,
        best.1 / p_max,
    ])
}

fn duplex_trial(link: &DuplexLink) -> Result<Vec<f64>> {
    let fd_at_b = sinr_from_powers(link.g_ab * link.p, link.rsi_b * link.p, link.noise)?;
    let fd_at_a = sinr_from_powers(link.g_ba * link.p, link.rsi_a * link.p, link.noise)?;
    let hd_at_b = sinr_from_powers(link.g_ab * link.p, 0.0, link.noise)?;
    let hd_at_a = sinr_from_powers(link.g_ba * link.p, 0.0, link.noise)?;
    let d = mode_switch(fd_at_b, fd_at_a, hd_at_b, hd_at_a)?;
    let fd = d.chosen == DuplexMode::Full;
    Ok(vec![
        d.fd_rate,
        d.hd_rate,
        if fd { d.fd_rate } else { d.hd_rate },
        if fd { 1.0 } else { 0.0 },
    ])
}

fn power_trial(cfg: &ExperimentConfig, scn: &MimoScenario) -> Result<Vec<f64>> {
    let split_a = AntennaSplit::halves(scn.n_a());
    let split_b = AntennaSplit::halves(scn.n_b());
    let gains = |h: &crate::mimo::Matrix<crate::channel::ChannelGain>, tx: &AntennaSplit, rx: &AntennaSplit| {
        let n = tx.tx.len().min(rx.rx.len());
        (0..n).map(|s| h.get(tx.tx[s], rx.rx[s]).power_gain()).collect::<Vec<_>>()
    };
    let ga = gains(&scn.h_ab, &split_a, &split_b);
    let gb = gains(&scn.h_ba, &split_b, &split_a);
    let fd = fd_mimo_waterfill(scn, &ga, &gb, cfg.power.tol, cfg.power.max_iters)?;
    let wf_rate = fd_mimo_sum_rate(scn, &ga, &gb, &fd.at_a.p, &fd.at_b.p)?;
    let ua = vec![scn.p_a / ga.len() as f64; ga.len()];
    let ub = vec![scn.p_b / gb.len() as f64; gb.len()];
    let uniform_rate = fd_mimo_sum_rate(scn, &ga, &gb, &ua, &ub)?;
    Ok(vec![
        wf_rate,
        uniform_rate,
        if fd.converged { 1.0 } else { 0.0 },
        fd.iterations as f64,
    ])
}

/// Runs every sweep point with the default (parallel) scheduler.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    run_experiment_with(cfg, Exec::default())
}

/// Runs every sweep point; one record per `(sweep value, metric)`.
pub fn run_experiment_with(cfg: &ExperimentConfig, exec: Exec) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let names = metric_names(cfg);
    let mut records = Vec::with_capacity(cfg.sweep.values.len() * names.len());
    for &value in &cfg.sweep.values {
        let point = cfg.at_sweep_value(value);
        let rows = run_trials(&point, exec)?;
        let mut stats = vec![RunningStats::new(); names.len()];
        for row in &rows {
            for (s, &x) in stats.iter_mut().zip(row) {
                s.push(x);
            }
        }
        for (name, s) in names.iter().zip(&stats) {
            records.push(ResultRecord {
                sweep_param: cfg.sweep.param.name().to_string(),
                sweep_value: value,
                metric: name.to_string(),
                mean: s.mean(),
                stderr: s.stderr(),
                trials: s.count(),
            });
        }
    }
    Ok(records)
}

/// Per-trial metric rows of one sweep point, in trial order.
pub fn run_trials(point: &ExperimentConfig, exec: Exec) -> Result<Vec<Vec<f64>>> {
    let results = schedule(point.trials, exec, |t| trial_metrics(point, t))?;
    // report the lowest failing trial regardless of scheduling
    results.into_iter().collect()
}

#[cfg(feature = "parallel")]
fn schedule<T: Send>(trials: u64, exec: Exec, f: impl Fn(u64) -> T + Sync + Send) -> Result<Vec<T>> {
    use rayon::prelude::*;
    let threads = match exec {
        Exec::Sequential => 1,
        Exec::Parallel => 0,
        Exec::Threads(n) => n.max(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::error::Error::Domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        if threads == 1 {
            (0..trials).map(&f).collect()
        } else {
            (0..trials).into_par_iter().map(&f).collect()
        }
    }))
}

#[cfg(not(feature = "parallel"))]
fn schedule<T>(trials: u64, _exec: Exec, f: impl Fn(u64) -> T) -> Result<Vec<T>> {
    Ok((0..trials).map(f).collect())
}
