//! Water-filling over parallel channels and its full-duplex MIMO variant.
//!
//! For effective gains `g_i` (gain over noise) and budget `P`, the
//! capacity-maximizing allocation is `p_i = max(0, mu - 1/g_i)` with the
//! water level `mu` fixed by `sum p_i = P`. The level is found exactly by
//! sorting inverse gains and testing each candidate active set.

use crate::error::{check_nonneg, Error, Result};
use crate::mimo::MimoScenario;

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelChannels {
    /// Effective power gain over effective noise per channel, in 1/W.
    pub eff_gain: Vec<f64>,
    pub p_total: f64,
}

impl ParallelChannels {
    pub fn new(eff_gain: Vec<f64>, p_total: f64) -> Self {
        Self { eff_gain, p_total }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaterfillStatus {
    Ok,
    /// Every gain is zero but power was available; nothing was poured.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub p: Vec<f64>,
    pub water_level: f64,
    pub status: WaterfillStatus,
}

impl Allocation {
    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}

pub fn waterfill(ch: &ParallelChannels) -> Result<Allocation> {
    check_nonneg("p_total", ch.p_total)?;
    for &g in &ch.eff_gain {
        check_nonneg("effective gain", g)?;
    }

    let mut inv: Vec<(f64, usize)> = ch
        .eff_gain
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0.0)
        .map(|(i, &g)| (1.0 / g, i))
        .collect();
    let mut p = vec![0.0; ch.eff_gain.len()];

    if inv.is_empty() {
        let status = if ch.p_total > 0.0 {
            WaterfillStatus::Degenerate
        } else {
            WaterfillStatus::Ok
        };
        return Ok(Allocation {
            p,
            water_level: 0.0,
            status,
        });
    }

    inv.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // The active set is a prefix of the sorted inverse gains; take the
    // longest prefix whose level still clears its weakest member.
    let mut level = inv[0].0;
    let mut active = 0;
    let mut prefix = 0.0;
    for (n, &(floor, _)) in inv.iter().enumerate() {
        prefix += floor;
        let mu = (ch.p_total + prefix) / (n + 1) as f64;
        if mu > floor {
            level = mu;
            active = n + 1;
        } else {
            break;
        }
    }
    for &(floor, i) in &inv[..active] {
        p[i] = level - floor;
    }
    Ok(Allocation {
        p,
        water_level: level,
        status: WaterfillStatus::Ok,
    })
}

/// Antenna roles at one FD-MIMO node: the first `N/2` antennas transmit,
/// the remaining ones receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntennaSplit {
    pub tx: Vec<usize>,
    pub rx: Vec<usize>,
}

impl AntennaSplit {
    pub fn halves(n: usize) -> Self {
        let n_tx = n / 2;
        Self {
            tx: (0..n_tx).collect(),
            rx: (n_tx..n).collect(),
        }
    }
}

/// Number of parallel streams from A to B and from B to A under
/// [`AntennaSplit::halves`].
pub fn stream_counts(scn: &MimoScenario) -> (usize, usize) {
    let (a, b) = (AntennaSplit::halves(scn.n_a()), AntennaSplit::halves(scn.n_b()));
    (a.tx.len().min(b.rx.len()), b.tx.len().min(a.rx.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdWaterfill {
    pub at_a: Allocation,
    pub at_b: Allocation,
    pub converged: bool,
    pub iterations: usize,
}

/// Per-stream RSI power at the receiver of the stream set whose receive
/// antennas are `rx`, given the node's own transmit allocation `p_tx`.
fn rsi_per_stream(rsi: &crate::mimo::Matrix<f64>, split: &AntennaSplit, p_tx: &[f64], streams: usize) -> Vec<f64> {
    (0..streams)
        .map(|s| {
            let r = split.rx[s];
            p_tx.iter()
                .enumerate()
                .map(|(t, &p)| rsi.get(split.tx[t], r) * p)
                .sum()
        })
        .collect()
}

fn effective(gains: &[f64], noise: f64, rsi: &[f64]) -> Vec<f64> {
    gains
        .iter()
        .zip(rsi)
        .map(|(&g, &i)| {
            let floor = noise + i;
            if floor > 0.0 {
                g / floor
            } else if g > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect()
}

/// Alternating (A then B) water-filling where each node's receive streams
/// are degraded by leakage from its own current transmit allocation.
///
/// `stream_gains_a[s]` is the power gain of A's stream `s` towards B and is
/// received on B's `s`-th receive antenna; likewise for B. Iteration stops
/// once neither node's allocation moves by more than `tol` relative to its
/// budget.
pub fn fd_mimo_waterfill(
    scn: &MimoScenario,
    stream_gains_a: &[f64],
    stream_gains_b: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<FdWaterfill> {
    scn.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tol must be > 0, got {tol}")));
    }
    if scn.noise <= 0.0 {
        return Err(Error::domain("noise must be > 0 for water-filling"));
    }
    let (n_ab, n_ba) = stream_counts(scn);
    if stream_gains_a.len() != n_ab || stream_gains_b.len() != n_ba {
        return Err(Error::domain(format!(
            "expected {n_ab} A->B and {n_ba} B->A stream gains, got {} and {}",
            stream_gains_a.len(),
            stream_gains_b.len()
        )));
    }
    let split_a = AntennaSplit::halves(scn.n_a());
    let split_b = AntennaSplit::halves(scn.n_b());

    let zeros_ab = vec![0.0; n_ab];
    let zeros_ba = vec![0.0; n_ba];
    let fill = |gains: &[f64], rsi: &[f64], budget: f64| {
        waterfill(&ParallelChannels::new(effective(gains, scn.noise, rsi), budget))
    };

    let mut at_a = fill(stream_gains_a, &zeros_ab, scn.p_a)?;
    let mut at_b = fill(stream_gains_b, &zeros_ba, scn.p_b)?;
    let scale = |budget: f64| if budget > 0.0 { budget } else { 1.0 };

    for iter in 1..=max_iters {
        let rsi_b = rsi_per_stream(&scn.rsi_b, &split_b, &at_b.p, n_ab);
        let next_a = fill(stream_gains_a, &rsi_b, scn.p_a)?;
        let rsi_a = rsi_per_stream(&scn.rsi_a, &split_a, &next_a.p, n_ba);
        let next_b = fill(stream_gains_b, &rsi_a, scn.p_b)?;

        let moved = |old: &Allocation, new: &Allocation, budget: f64| {
            old.p
                .iter()
                .zip(&new.p)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
                / scale(budget)
        };
        let change = moved(&at_a, &next_a, scn.p_a).max(moved(&at_b, &next_b, scn.p_b));
        at_a = next_a;
        at_b = next_b;
        if change < tol {
            return Ok(FdWaterfill {
                at_a,
                at_b,
                converged: true,
                iterations: iter,
            });
        }
    }
    Ok(FdWaterfill {
        at_a,
        at_b,
        converged: false,
        iterations: max_iters,
    })
}

/// Sum of both directions' Shannon rates under the given per-stream
/// transmit allocations, including each receiver's self-interference.
pub fn fd_mimo_sum_rate(
    scn: &MimoScenario,
    stream_gains_a: &[f64],
    stream_gains_b: &[f64],
    p_a: &[f64],
    p_b: &[f64],
) -> Result<f64> {
    let split_a = AntennaSplit::halves(scn.n_a());
    let split_b = AntennaSplit::halves(scn.n_b());
    let rsi_b = rsi_per_stream(&scn.rsi_b, &split_b, p_b, stream_gains_a.len());
    let rsi_a = rsi_per_stream(&scn.rsi_a, &split_a, p_a, stream_gains_b.len());
    let mut total = 0.0;
    for (gains, p, rsi) in [(stream_gains_a, p_a, &rsi_b), (stream_gains_b, p_b, &rsi_a)] {
        for s in 0..gains.len() {
            let g = crate::channel::sinr_from_powers(gains[s] * p[s], rsi[s], scn.noise)?;
            total += crate::channel::rate(g)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelGain;
    use crate::mimo::Matrix;

    fn wf(g: &[f64], p: f64) -> Allocation {
        waterfill(&ParallelChannels::new(g.to_vec(), p)).unwrap()
    }

    #[test]
    fn symmetric_split() {
        let a = wf(&[1.0, 1.0], 2.0);
        assert_eq!(a.p, vec![1.0, 1.0]);
        assert_eq!(a.water_level, 2.0);
    }

    #[test]
    fn negligible_channel_gets_nothing() {
        let a = wf(&[1.0, 1e-9], 0.5);
        assert_eq!(a.p, vec![0.5, 0.0]);
    }

    #[test]
    fn activation_boundary() {
        let a = wf(&[1.0, 0.5], 1.0);
        assert_eq!(a.p, vec![1.0, 0.0]);
        assert_eq!(a.water_level, 2.0);
    }

    #[test]
    fn all_zero_gains_flagged() {
        let a = wf(&[0.0, 0.0], 3.0);
        assert_eq!(a.p, vec![0.0, 0.0]);
        assert_eq!(a.status, WaterfillStatus::Degenerate);
        assert_eq!(wf(&[0.0], 0.0).status, WaterfillStatus::Ok);
    }

    #[test]
    fn zero_budget() {
        let a = wf(&[2.0, 1.0], 0.0);
        assert_eq!(a.p, vec![0.0, 0.0]);
        assert_eq!(a.water_level, 0.5);
    }

    #[test]
    fn invalid_inputs() {
        assert!(waterfill(&ParallelChannels::new(vec![-1.0], 1.0)).is_err());
        assert!(waterfill(&ParallelChannels::new(vec![1.0], -1.0)).is_err());
        assert!(waterfill(&ParallelChannels::new(vec![f64::NAN], 1.0)).is_err());
    }

    fn scenario(n: usize, rsi_a: f64, rsi_b: f64) -> MimoScenario {
        MimoScenario {
            h_ab: Matrix::filled(n, n, ChannelGain::UNIT),
            h_ba: Matrix::filled(n, n, ChannelGain::UNIT),
            rsi_a: Matrix::filled(n, n, rsi_a),
            rsi_b: Matrix::filled(n, n, rsi_b),
            p_a: 4.0,
            p_b: 4.0,
            noise: 1.0,
        }
    }

    #[test]
    fn decoupled_when_rsi_free() {
        let scn = scenario(4, 0.0, 0.0);
        let ga = [2.0, 0.5];
        let gb = [1.0, 0.25];
        let out = fd_mimo_waterfill(&scn, &ga, &gb, 1e-6, 100).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.at_a, wf(&ga, 4.0));
        assert_eq!(out.at_b, wf(&gb, 4.0));
    }

    #[test]
    fn symmetric_nodes_match() {
        let scn = scenario(4, 0.1, 0.1);
        let g = [2.0, 0.5];
        let out = fd_mimo_waterfill(&scn, &g, &g, 1e-9, 100).unwrap();
        assert!(out.converged);
        assert_eq!(out.at_a.p, out.at_b.p);
    }

    #[test]
    fn stream_gain_length_checked() {
        let scn = scenario(4, 0.0, 0.0);
        assert!(fd_mimo_waterfill(&scn, &[1.0], &[1.0, 1.0], 1e-6, 10).is_err());
        assert!(fd_mimo_waterfill(&scn, &[1.0, 1.0], &[1.0, 1.0], 0.0, 10).is_err());
    }
}
