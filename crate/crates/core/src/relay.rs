//! Full-duplex relaying: two-hop SINR with relay self-interference, joint
//! relay and antenna selection, relay transmit-power optimization, and
//! adaptive switching between full- and half-duplex operation.

use serde::{Deserialize, Serialize};

use crate::channel::{rate, sinr_from_powers, ChannelGain};
use crate::error::{check_nonneg, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    DecodeForward,
    AmplifyForward,
}

impl Protocol {
    /// Combines the two hop SINRs into an end-to-end SINR.
    pub fn combine(self, first_hop: f64, second_hop: f64) -> f64 {
        match self {
            Protocol::DecodeForward => first_hop.min(second_hop),
            Protocol::AmplifyForward => {
                let denom = first_hop + second_hop + 1.0;
                first_hop * second_hop / denom
            }
        }
    }
}

/// One relay: per-antenna channels towards the source and destination plus
/// the relay's self-interference power gain.
///
/// Every ordered pair of distinct antennas `(tx, rx)` is a configuration;
/// a relay with a single antenna offers one configuration using it for
/// both roles (circulator front end).
#[derive(Debug, Clone, PartialEq)]
pub struct Relay {
    /// Source to relay antenna `r`.
    pub h_sr: Vec<ChannelGain>,
    /// Relay antenna `t` to destination.
    pub h_rd: Vec<ChannelGain>,
    pub rsi: f64,
}

impl Relay {
    pub fn antennas(&self) -> usize {
        self.h_sr.len()
    }

    /// `(tx, rx)` antenna pairs, 0-based, in lexicographic order.
    pub fn configs(&self) -> Vec<(usize, usize)> {
        let n = self.antennas();
        if n == 1 {
            return vec![(0, 0)];
        }
        (0..n)
            .flat_map(|t| (0..n).filter(move |&r| r != t).map(move |r| (t, r)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelayScenario {
    pub relays: Vec<Relay>,
    /// Optional direct source to destination link.
    pub h_sd: Option<ChannelGain>,
    pub p_s: f64,
    pub p_r_max: f64,
    pub noise: f64,
}

impl RelayScenario {
    pub fn validate(&self) -> Result<()> {
        if self.relays.is_empty() {
            return Err(Error::domain("at least one relay is required"));
        }
        for (i, r) in self.relays.iter().enumerate() {
            if r.h_sr.is_empty() || r.h_sr.len() != r.h_rd.len() {
                return Err(Error::domain(format!(
                    "relay {i} needs matching, non-empty per-antenna channel lists"
                )));
            }
            check_nonneg("relay RSI gain", r.rsi)?;
        }
        check_nonneg("p_s", self.p_s)?;
        check_nonneg("p_r_max", self.p_r_max)?;
        check_nonneg("noise", self.noise)
    }

    fn hop_gains(&self, relay: usize, config: usize) -> Result<(f64, f64, f64)> {
        let r = self
            .relays
            .get(relay)
            .ok_or_else(|| Error::domain(format!("relay index {relay} out of range")))?;
        let &(tx, rx) = r
            .configs()
            .get(config)
            .ok_or_else(|| Error::domain(format!("config index {config} out of range for relay {relay}")))?;
        Ok((r.h_sr[rx].power_gain(), r.h_rd[tx].power_gain(), r.rsi))
    }

    /// SINR of the direct link at the destination, zero when absent.
    pub fn direct_sinr(&self) -> Result<f64> {
        match self.h_sd {
            Some(h) => sinr_from_powers(h.power_gain() * self.p_s, 0.0, self.noise),
            None => Ok(0.0),
        }
    }
}

/// End-to-end SINR through `relay` using antenna configuration `config`
/// (index into [`Relay::configs`]) at relay power `p_r`.
pub fn end_to_end_sinr(
    scn: &RelayScenario,
    relay: usize,
    config: usize,
    p_r: f64,
    protocol: Protocol,
) -> Result<f64> {
    if !(0.0..=scn.p_r_max).contains(&p_r) {
        return Err(Error::domain(format!(
            "relay power {p_r} outside [0, {}]",
            scn.p_r_max
        )));
    }
    let (g_sr, g_rd, rsi) = scn.hop_gains(relay, config)?;
    let first = sinr_from_powers(g_sr * scn.p_s, rsi * p_r, scn.noise)?;
    let second = sinr_from_powers(g_rd * p_r, 0.0, scn.noise)?;
    Ok(protocol.combine(first, second))
}

/// With a direct link present the destination keeps the stronger of the
/// relayed and direct signals.
pub fn with_direct_link(scn: &RelayScenario, relayed: f64) -> Result<f64> {
    Ok(relayed.max(scn.direct_sinr()?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayChoice {
    pub relay: usize,
    pub config: usize,
    pub sinr: f64,
}

/// Exhaustive argmax over every `(relay, config)` pair at fixed relay power.
pub fn select_relay_antenna(scn: &RelayScenario, p_r: f64, protocol: Protocol) -> Result<RelayChoice> {
    scn.validate()?;
    let mut best: Option<RelayChoice> = None;
    for (relay, r) in scn.relays.iter().enumerate() {
        for config in 0..r.configs().len() {
            let sinr = end_to_end_sinr(scn, relay, config, p_r, protocol)?;
            if best.is_none_or(|b| sinr > b.sinr) {
                best = Some(RelayChoice { relay, config, sinr });
            }
        }
    }
    Ok(best.expect("validated scenario has a relay"))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
/// Returns `(argmax, max)`; the endpoints are compared against the
/// interior optimum so monotone objectives land exactly on a corner.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, x_tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > x_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Relay power in `[0, p_r_max]` maximizing the end-to-end SINR.
///
/// A stronger relay raises the second-hop SINR but also its own
/// self-interference on the first hop; both protocols give a unimodal
/// objective, solved by golden-section search to `1e-12 p_r_max`.
pub fn optimal_relay_power(
    scn: &RelayScenario,
    relay: usize,
    config: usize,
    protocol: Protocol,
) -> Result<(f64, f64)> {
    if scn.p_r_max.is_nan() || scn.p_r_max <= 0.0 {
        return Err(Error::domain("p_r_max must be > 0"));
    }
    let (_, g_rd, rsi) = scn.hop_gains(relay, config)?;
    if g_rd == 0.0 {
        return Ok((0.0, 0.0));
    }
    let objective = |p: f64| end_to_end_sinr(scn, relay, config, p, protocol).unwrap_or(f64::NEG_INFINITY);
    if rsi == 0.0 {
        // first hop is constant, second hop increasing
        return Ok((scn.p_r_max, objective(scn.p_r_max)));
    }
    Ok(golden_section_max(objective, 0.0, scn.p_r_max, 1e-12 * scn.p_r_max))
}

/// SINRs `(at destination 2, at destination 1)` of a two-way full-duplex
/// relay, built from two one-way evaluations. Both end nodes transmit at
/// `p_s` and suffer their own self-interference `rsi_end` while receiving.
pub fn two_way_sinrs(
    scn: &RelayScenario,
    relay: usize,
    config: usize,
    p_r: f64,
    rsi_end: f64,
    protocol: Protocol,
) -> Result<(f64, f64)> {
    check_nonneg("end-node RSI gain", rsi_end)?;
    if !(0.0..=scn.p_r_max).contains(&p_r) {
        return Err(Error::domain(format!("relay power {p_r} outside [0, {}]", scn.p_r_max)));
    }
    let (g_sr, g_rd, rsi) = scn.hop_gains(relay, config)?;
    // first hops see the relay's own leakage, second hops the receiving end node's
    let up_1 = sinr_from_powers(g_sr * scn.p_s, rsi * p_r, scn.noise)?;
    let up_2 = sinr_from_powers(g_rd * scn.p_s, rsi * p_r, scn.noise)?;
    let down_to_2 = sinr_from_powers(g_rd * p_r, rsi_end * scn.p_s, scn.noise)?;
    let down_to_1 = sinr_from_powers(g_sr * p_r, rsi_end * scn.p_s, scn.noise)?;
    Ok((protocol.combine(up_1, down_to_2), protocol.combine(up_2, down_to_1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DuplexMode {
    Full,
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDecision {
    pub chosen: DuplexMode,
    pub fd_rate: f64,
    pub hd_rate: f64,
}

/// Picks full duplex when its sum rate is at least the half-duplex one.
///
/// Half duplex gives each direction half of the resource with no
/// self-interference, so its rate is `(rate(a) + rate(b)) / 2`.
pub fn mode_switch(gamma_fd_a: f64, gamma_fd_b: f64, gamma_hd_a: f64, gamma_hd_b: f64) -> Result<ModeDecision> {
    let fd_rate = rate(gamma_fd_a)? + rate(gamma_fd_b)?;
    let hd_rate = 0.5 * rate(gamma_hd_a)? + 0.5 * rate(gamma_hd_b)?;
    let chosen = if fd_rate >= hd_rate {
        DuplexMode::Full
    } else {
        DuplexMode::Half
    };
    Ok(ModeDecision {
        chosen,
        fd_rate,
        hd_rate,
    })
}
