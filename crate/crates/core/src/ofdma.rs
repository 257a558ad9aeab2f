//! Full-duplex OFDMA: a two-antenna base station receives from uplink
//! user TX_i and transmits to downlink user RX_j on the same subcarrier k,
//! forming a transceiver unit. The uplink suffers the BS's residual
//! self-interference, the downlink suffers co-channel interference from
//! TX_i at RX_j.
//!
//! This module assigns units to subcarriers with a price-raising matching,
//! and provides exhaustive and random baselines plus BS power splitting.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{rate, sinr_from_powers};
use crate::error::{check_nonneg, Error, Result};
use crate::power::{waterfill, ParallelChannels};

/// Largest `M` and `K` accepted by [`centralized_exhaustive`].
pub const CENTRALIZED_MAX_USERS: usize = 6;
pub const CENTRALIZED_MAX_SUBCARRIERS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OfdmaScenario {
    m: usize,
    k: usize,
    /// `[i * k + s]`: TX_i to BS on subcarrier `s`.
    g_up: Vec<f64>,
    /// `[j * k + s]`: BS to RX_j on subcarrier `s`.
    g_down: Vec<f64>,
    /// `[(i * m + j) * k + s]`: TX_i to RX_j on subcarrier `s`.
    g_cross: Vec<f64>,
    rsi_bs: Vec<f64>,
    pub p_user: f64,
    pub p_bs_total: f64,
    pub noise: f64,
}

impl OfdmaScenario {
    /// Builds a scenario from gain tables laid out as `g_up[i][k]`,
    /// `g_down[j][k]`, `g_cross[i][j][k]` and `rsi_bs[k]`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: usize,
        k: usize,
        g_up: Vec<f64>,
        g_down: Vec<f64>,
        g_cross: Vec<f64>,
        rsi_bs: Vec<f64>,
        p_user: f64,
        p_bs_total: f64,
        noise: f64,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("at least one user pair is required"));
        }
        if k < m {
            return Err(Error::domain(format!(
                "need at least as many subcarriers as user pairs, got K={k} < M={m}"
            )));
        }
        if g_up.len() != m * k || g_down.len() != m * k || g_cross.len() != m * m * k || rsi_bs.len() != k {
            return Err(Error::domain("gain table dimensions do not match M and K"));
        }
        for &g in g_up.iter().chain(&g_down).chain(&g_cross).chain(&rsi_bs) {
            check_nonneg("gain", g)?;
        }
        check_nonneg("p_user", p_user)?;
        check_nonneg("p_bs_total", p_bs_total)?;
        check_nonneg("noise", noise)?;
        Ok(Self {
            m,
            k,
            g_up,
            g_down,
            g_cross,
            rsi_bs,
            p_user,
            p_bs_total,
            noise,
        })
    }

    /// User pairs `M`.
    pub fn users(&self) -> usize {
        self.m
    }

    /// Subcarriers `K`.
    pub fn subcarriers(&self) -> usize {
        self.k
    }

    pub fn g_up(&self, i: usize, k: usize) -> f64 {
        self.g_up[i * self.k + k]
    }

    pub fn g_down(&self, j: usize, k: usize) -> f64 {
        self.g_down[j * self.k + k]
    }

    pub fn g_cross(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g_cross[(i * self.m + j) * self.k + k]
    }

    pub fn rsi_bs(&self, k: usize) -> f64 {
        self.rsi_bs[k]
    }

    fn check_unit(&self, i: usize, j: usize, k: usize) -> Result<()> {
        if i >= self.m || j >= self.m || k >= self.k {
            return Err(Error::domain(format!(
                "unit (tx {i}, rx {j}, subcarrier {k}) out of range for M={}, K={}",
                self.m, self.k
            )));
        }
        Ok(())
    }

    fn uplink_rate(&self, i: usize, k: usize) -> Result<f64> {
        rate(sinr_from_powers(self.p_user * self.g_up(i, k), self.rsi_bs(k), self.noise)?)
    }

    /// Downlink SINR per watt of BS power for unit `(i, j, k)`.
    fn downlink_gain(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        sinr_from_powers(self.g_down(j, k), self.p_user * self.g_cross(i, j, k), self.noise)
    }
}

/// Rate of one transceiver unit: uplink TX_i to BS plus downlink BS to RX_j,
/// both on subcarrier `k`, with `p_down` watts of BS power.
pub fn unit_rate(scn: &OfdmaScenario, i: usize, j: usize, k: usize, p_down: f64) -> Result<f64> {
    scn.check_unit(i, j, k)?;
    check_nonneg("p_down", p_down)?;
    Ok(scn.uplink_rate(i, k)? + rate(p_down * scn.downlink_gain(i, j, k)?)?)
}

/// `x[k][i][j] = 1`: TX `tx` and RX `rx` share subcarrier `subcarrier`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subcarrier: usize,
    pub tx: usize,
    pub rx: usize,
}

impl Triple {
    pub fn new(subcarrier: usize, tx: usize, rx: usize) -> Self {
        Self { subcarrier, tx, rx }
    }
}

/// Support of the binary pairing tensor, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairingAssignment {
    entries: Vec<Triple>,
}

impl PairingAssignment {
    /// Validates that no TX, RX or subcarrier is used twice and that every
    /// index fits an `m`-pair, `k`-subcarrier system.
    pub fn new(m: usize, k: usize, mut entries: Vec<Triple>) -> Result<Self> {
        let mut tx = vec![false; m];
        let mut rx = vec![false; m];
        let mut sc = vec![false; k];
        for t in &entries {
            if t.tx >= m || t.rx >= m || t.subcarrier >= k {
                return Err(Error::domain(format!("{t:?} out of range for M={m}, K={k}")));
            }
            for (used, idx, what) in [(&mut tx, t.tx, "TX"), (&mut rx, t.rx, "RX"), (&mut sc, t.subcarrier, "subcarrier")] {
                if std::mem::replace(&mut used[idx], true) {
                    return Err(Error::domain(format!("{what} {idx} assigned more than once")));
                }
            }
        }
        entries.sort_unstable();
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[Triple] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether every one of the `m` TX users is matched.
    pub fn is_perfect(&self, m: usize) -> bool {
        self.entries.len() == m
    }
}

/// BS downlink power per matched unit, aligned with the assignment entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSplit {
    pub p_down: Vec<(Triple, f64)>,
}

impl PowerSplit {
    pub fn total(&self) -> f64 {
        self.p_down.iter().map(|(_, p)| p).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRule {
    #[default]
    Uniform,
    WaterFilling,
}

pub fn split_bs_power(scn: &OfdmaScenario, asg: &PairingAssignment, rule: SplitRule) -> Result<PowerSplit> {
    if asg.is_empty() {
        return Err(Error::domain("cannot split power over an empty assignment"));
    }
    let powers = match rule {
        SplitRule::Uniform => vec![scn.p_bs_total / asg.len() as f64; asg.len()],
        SplitRule::WaterFilling => {
            let gains = asg
                .entries()
                .iter()
                .map(|t| scn.downlink_gain(t.tx, t.rx, t.subcarrier))
                .collect::<Result<Vec<_>>>()?;
            waterfill(&ParallelChannels::new(gains, scn.p_bs_total))?.p
        }
    };
    Ok(PowerSplit {
        p_down: asg.entries().iter().copied().zip(powers).collect(),
    })
}

/// Sum of unit rates over the matched triples.
pub fn sum_rate(scn: &OfdmaScenario, asg: &PairingAssignment, split: &PowerSplit) -> Result<f64> {
    let same_support = split.p_down.len() == asg.len()
        && split.p_down.iter().zip(asg.entries()).all(|((a, _), b)| a == b);
    if !same_support {
        return Err(Error::domain("power split does not cover exactly the matched triples"));
    }
    split
        .p_down
        .iter()
        .map(|&(t, p)| unit_rate(scn, t.tx, t.rx, t.subcarrier, p))
        .sum()
}

/// Prices of the RX users and subcarriers; an SR unit `(k, j)` costs
/// `rx_price[j] + subcarrier_price[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceState {
    pub rx_price: Vec<f64>,
    pub subcarrier_price: Vec<f64>,
    pub step: f64,
}

impl PriceState {
    fn zero(m: usize, k: usize, step: f64) -> Self {
        Self {
            rx_price: vec![0.0; m],
            subcarrier_price: vec![0.0; k],
            step,
        }
    }

    pub fn unit_price(&self, subcarrier: usize, rx: usize) -> f64 {
        self.rx_price[rx] + self.subcarrier_price[subcarrier]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingOutcome {
    pub assignment: PairingAssignment,
    pub prices: PriceState,
    /// Proposal rounds until equilibrium.
    pub rounds: usize,
}

/// Rounds during which a TX displaced from its subcarrier also gives up
/// its RX and re-bids freely. Afterwards a displaced TX keeps its RX and
/// only bids for a new subcarrier, which bounds the remaining rounds.
pub const FREE_BIDDING_ROUNDS: usize = 50;

/// Default price step: `1e-3` of the largest unit rate under a uniform split.
pub fn default_price_step(scn: &OfdmaScenario) -> Result<f64> {
    let table = UnitTable::uniform(scn)?;
    let max = table.values.iter().copied().fold(0.0, f64::max);
    Ok(if max > 0.0 { 1e-3 * max } else { 1e-3 })
}

/// Unit rates under the uniform split `P_s / M`, flat `[(i * m + j) * k + s]`.
struct UnitTable {
    m: usize,
    k: usize,
    values: Vec<f64>,
}

impl UnitTable {
    fn uniform(scn: &OfdmaScenario) -> Result<Self> {
        let (m, k) = (scn.users(), scn.subcarriers());
        let p_down = scn.p_bs_total / m as f64;
        let mut values = Vec::with_capacity(m * m * k);
        for i in 0..m {
            for j in 0..m {
                for s in 0..k {
                    values.push(unit_rate(scn, i, j, s, p_down)?);
                }
            }
        }
        Ok(Self { m, k, values })
    }

    #[inline]
    fn get(&self, i: usize, j: usize, s: usize) -> f64 {
        self.values[(i * self.m + j) * self.k + s]
    }
}

/// Price-raising matching of TX users to SR units `(RX, subcarrier)`.
///
/// Each round every unmatched TX, in index order, offers for the unit with
/// the largest rate-minus-price (ties to the smallest `(rx, subcarrier)`).
/// If the RX or the subcarrier is already held, the contested resource
/// raises its price by the offer's margin over the TX's best alternative
/// that avoids it, plus `eps`, and the previous holder is released. The
/// run ends at the equilibrium where every TX is matched. Preferences use
/// the uniform BS power split.
pub fn price_matching(scn: &OfdmaScenario, eps: f64) -> Result<MatchingOutcome> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("price step must be > 0, got {eps}")));
    }
    let table = UnitTable::uniform(scn)?;
    let (m, k) = (table.m, table.k);
    let vmax = table.values.iter().copied().fold(0.0, f64::max);
    let cap = round_cap(m, k, vmax, eps);

    let mut prices = PriceState::zero(m, k, eps);
    let mut rx_of: Vec<Option<usize>> = vec![None; m];
    let mut sc_of: Vec<Option<usize>> = vec![None; m];
    let mut rx_holder: Vec<Option<usize>> = vec![None; m];
    let mut sc_holder: Vec<Option<usize>> = vec![None; k];
    let mut rounds = 0;

    let raise = |best: f64, alternative: f64| {
        if alternative.is_finite() {
            best - alternative + eps
        } else {
            eps
        }
    };

    loop {
        let bidders: Vec<usize> = (0..m).filter(|&i| sc_of[i].is_none()).collect();
        if bidders.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > cap {
            return Err(Error::IterationCap { cap });
        }
        let locked = rounds > FREE_BIDDING_ROUNDS;

        for i in bidders {
            match rx_of[i] {
                None => {
                    let offer = best_unit(&table, &prices, i);
                    let (j, s) = (offer.rx, offer.subcarrier);
                    let rx_rival = rx_holder[j];
                    let sc_rival = sc_holder[s].filter(|&h| Some(h) != rx_rival);

                    if rx_rival.is_some() {
                        prices.rx_price[j] += raise(offer.value, offer.best_other_rx);
                    } else if sc_rival.is_some() {
                        prices.subcarrier_price[s] += raise(offer.value, offer.best_other_subcarrier);
                    }

                    if let Some(g) = rx_rival {
                        if let Some(old) = sc_of[g].take() {
                            sc_holder[old] = None;
                        }
                        rx_of[g] = None;
                    }
                    if let Some(h) = sc_rival {
                        sc_of[h] = None;
                        if !locked {
                            if let Some(old) = rx_of[h].take() {
                                rx_holder[old] = None;
                            }
                        }
                    }
                    rx_of[i] = Some(j);
                    sc_of[i] = Some(s);
                    rx_holder[j] = Some(i);
                    sc_holder[s] = Some(i);
                }
                Some(j) => {
                    // keeps RX j, competes for a subcarrier only
                    let mut best = (0, f64::NEG_INFINITY);
                    let mut second = f64::NEG_INFINITY;
                    for s in 0..k {
                        let w = table.get(i, j, s) - prices.subcarrier_price[s];
                        if w > best.1 {
                            second = best.1;
                            best = (s, w);
                        } else if w > second {
                            second = w;
                        }
                    }
                    let s = best.0;
                    if let Some(h) = sc_holder[s] {
                        prices.subcarrier_price[s] += raise(best.1, second);
                        sc_of[h] = None;
                    }
                    sc_of[i] = Some(s);
                    sc_holder[s] = Some(i);
                }
            }
        }
    }

    let entries = (0..m)
        .map(|i| Triple::new(sc_of[i].expect("matched"), i, rx_of[i].expect("matched")))
        .collect();
    Ok(MatchingOutcome {
        assignment: PairingAssignment::new(m, k, entries)?,
        prices,
        rounds,
    })
}

fn round_cap(m: usize, k: usize, vmax: f64, eps: f64) -> usize {
    let steps = (vmax / eps).ceil().min(1e9) as usize;
    FREE_BIDDING_ROUNDS + m + (m * k).saturating_mul(steps.max(1))
}

struct Offer {
    rx: usize,
    subcarrier: usize,
    value: f64,
    best_other_rx: f64,
    best_other_subcarrier: f64,
}

fn best_unit(table: &UnitTable, prices: &PriceState, i: usize) -> Offer {
    let (m, k) = (table.m, table.k);
    let net = |j: usize, s: usize| table.get(i, j, s) - prices.unit_price(s, j);
    let mut best = (0, 0, f64::NEG_INFINITY);
    for j in 0..m {
        for s in 0..k {
            let w = net(j, s);
            if w > best.2 {
                best = (j, s, w);
            }
        }
    }
    let (bj, bs, value) = best;
    let mut best_other_rx = f64::NEG_INFINITY;
    let mut best_other_subcarrier = f64::NEG_INFINITY;
    for j in 0..m {
        for s in 0..k {
            let w = net(j, s);
            if j != bj {
                best_other_rx = best_other_rx.max(w);
            }
            if s != bs {
                best_other_subcarrier = best_other_subcarrier.max(w);
            }
        }
    }
    Offer {
        rx: bj,
        subcarrier: bs,
        value,
        best_other_rx,
        best_other_subcarrier,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralizedOutcome {
    pub assignment: PairingAssignment,
    pub sum_rate: f64,
    /// Complete assignments evaluated: `M! K! / (K - M)!`.
    pub candidates: u64,
}

/// Number of perfect feasible assignments, `M! K! / (K - M)!`.
pub fn assignment_count(m: usize, k: usize) -> u64 {
    let perms: u64 = (1..=m as u64).product();
    let injections: u64 = ((k - m + 1) as u64..=k as u64).product();
    perms * injections
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Ordered selections of `m` distinct values from `0..k`, lexicographic.
pub(crate) fn injections(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for s in 0..k {
            if !used[s] {
                used[s] = true;
                cur.push(s);
                rec(m, k, used, cur, out);
                cur.pop();
                used[s] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(m, k, &mut vec![false; k], &mut Vec::with_capacity(m), &mut out);
    out
}

struct Best {
    value: f64,
    triples: Vec<Triple>,
    count: u64,
}

impl Best {
    fn offer(&mut self, value: f64, rx_perm: &[usize], subcarriers: &[usize]) {
        self.count += 1;
        if value < self.value {
            return;
        }
        let mut triples: Vec<Triple> = (0..rx_perm.len())
            .map(|i| Triple::new(subcarriers[i], i, rx_perm[i]))
            .collect();
        triples.sort_unstable();
        if value > self.value || triples < self.triples {
            self.value = value;
            self.triples = triples;
        }
    }

    fn merge(mut self, other: Best) -> Best {
        let count = self.count + other.count;
        if other.value > self.value || (other.value == self.value && other.triples < self.triples) {
            self = other;
        }
        self.count = count;
        self
    }

    fn none() -> Best {
        Best {
            value: f64::NEG_INFINITY,
            triples: Vec::new(),
            count: 0,
        }
    }
}

/// Exhaustive search over every perfect assignment for the largest sum
/// rate under `rule`. Equal sums resolve to the lexicographically smallest
/// sorted triple list.
pub fn centralized_exhaustive(scn: &OfdmaScenario, rule: SplitRule) -> Result<CentralizedOutcome> {
    let (m, k) = (scn.users(), scn.subcarriers());
    if m > CENTRALIZED_MAX_USERS {
        return Err(Error::Capacity {
            what: "M",
            value: m,
            limit: CENTRALIZED_MAX_USERS,
        });
    }
    if k > CENTRALIZED_MAX_SUBCARRIERS {
        return Err(Error::Capacity {
            what: "K",
            value: k,
            limit: CENTRALIZED_MAX_SUBCARRIERS,
        });
    }

    let table = UnitTable::uniform(scn)?;
    let mut up = vec![0.0; m * k];
    let mut down = vec![0.0; m * m * k];
    for i in 0..m {
        for s in 0..k {
            up[i * k + s] = scn.uplink_rate(i, s)?;
            for j in 0..m {
                down[(i * m + j) * k + s] = scn.downlink_gain(i, j, s)?;
            }
        }
    }
    let subcarrier_sets = injections(m, k);

    let search = |perm: &Vec<usize>| -> Result<Best> {
        let mut best = Best::none();
        let mut gains = vec![0.0; m];
        for subs in &subcarrier_sets {
            let value = match rule {
                SplitRule::Uniform => (0..m).map(|i| table.get(i, perm[i], subs[i])).sum(),
                SplitRule::WaterFilling => {
                    for i in 0..m {
                        gains[i] = down[(i * m + perm[i]) * k + subs[i]];
                    }
                    let alloc = waterfill(&ParallelChannels::new(gains.clone(), scn.p_bs_total))?;
                    let mut total = 0.0;
                    for i in 0..m {
                        total += up[i * k + subs[i]] + rate(alloc.p[i] * gains[i])?;
                    }
                    total
                }
            };
            best.offer(value, perm, subs);
        }
        Ok(best)
    };

    let perms = permutations(m);
    #[cfg(feature = "parallel")]
    let partial: Vec<Best> = {
        use rayon::prelude::*;
        perms.par_iter().map(search).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let partial: Vec<Best> = perms.iter().map(search).collect::<Result<_>>()?;

    let best = partial.into_iter().fold(Best::none(), Best::merge);
    Ok(CentralizedOutcome {
        assignment: PairingAssignment::new(m, k, best.triples)?,
        sum_rate: best.value,
        candidates: best.count,
    })
}

/// Uniformly random perfect assignment: a random RX permutation and a
/// random ordered choice of `M` distinct subcarriers.
pub fn random_matching<R: Rng + ?Sized>(scn: &OfdmaScenario, rng: &mut R) -> PairingAssignment {
    let (m, k) = (scn.users(), scn.subcarriers());
    let mut rx: Vec<usize> = (0..m).collect();
    rx.shuffle(rng);
    let mut sc: Vec<usize> = (0..k).collect();
    sc.shuffle(rng);
    let entries = (0..m).map(|i| Triple::new(sc[i], i, rx[i])).collect();
    PairingAssignment::new(m, k, entries).expect("random assignment is feasible by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn flat(m: usize, k: usize, up: f64, down: f64, cross: f64, rsi: f64) -> OfdmaScenario {
        OfdmaScenario::new(
            m,
            k,
            vec![up; m * k],
            vec![down; m * k],
            vec![cross; m * m * k],
            vec![rsi; k],
            1.0,
            2.0 * m as f64,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn scenario_shape_checks() {
        assert!(OfdmaScenario::new(2, 1, vec![1.0; 2], vec![1.0; 2], vec![1.0; 4], vec![0.0], 1.0, 1.0, 1.0).is_err());
        assert!(OfdmaScenario::new(1, 1, vec![1.0; 2], vec![1.0], vec![1.0], vec![0.0], 1.0, 1.0, 1.0).is_err());
        assert!(OfdmaScenario::new(1, 1, vec![-1.0], vec![1.0], vec![1.0], vec![0.0], 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn silent_unit_has_zero_rate() {
        let mut scn = flat(1, 1, 1.0, 1.0, 0.5, 0.1);
        scn.p_user = 0.0;
        assert_eq!(unit_rate(&scn, 0, 0, 0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn interference_free_unit_rate() {
        let scn = flat(2, 2, 3.0, 1.0, 0.0, 0.0);
        // uplink 1 W * 3 / 1 -> log2(4) = 2, downlink 7 W * 1 -> log2(8) = 3
        assert_abs_diff_eq!(unit_rate(&scn, 0, 1, 1, 7.0).unwrap(), 5.0, epsilon = 1e-12);
        assert!(unit_rate(&scn, 2, 0, 0, 1.0).is_err());
        assert!(unit_rate(&scn, 0, 0, 0, -1.0).is_err());
    }

    #[test]
    fn assignment_feasibility() {
        let t = Triple::new;
        assert!(PairingAssignment::new(2, 3, vec![t(0, 0, 0), t(2, 1, 1)]).is_ok());
        assert!(PairingAssignment::new(2, 3, vec![t(0, 0, 0), t(0, 1, 1)]).is_err());
        assert!(PairingAssignment::new(2, 3, vec![t(0, 0, 0), t(1, 0, 1)]).is_err());
        assert!(PairingAssignment::new(2, 3, vec![t(0, 0, 1), t(1, 1, 1)]).is_err());
        assert!(PairingAssignment::new(2, 3, vec![t(3, 0, 0)]).is_err());
    }

    #[test]
    fn single_pair_matches_without_competition() {
        let scn = flat(1, 1, 1.0, 1.0, 0.1, 0.1);
        let out = price_matching(&scn, 1e-3).unwrap();
        assert_eq!(out.assignment.entries(), &[Triple::new(0, 0, 0)]);
        assert_eq!(out.prices.rx_price, vec![0.0]);
        assert_eq!(out.prices.subcarrier_price, vec![0.0]);
        assert_eq!(out.rounds, 1);
    }

    #[test]
    fn identical_rates_give_a_perfect_matching() {
        let scn = flat(2, 2, 1.0, 1.0, 0.2, 0.0);
        let out = price_matching(&scn, 1e-3).unwrap();
        assert!(out.assignment.is_perfect(2));
        let split = split_bs_power(&scn, &out.assignment, SplitRule::Uniform).unwrap();
        let total = sum_rate(&scn, &out.assignment, &split).unwrap();
        let rand = random_matching(&scn, &mut crate::channel::RngStream::new(1, 1).generator());
        let rsplit = split_bs_power(&scn, &rand, SplitRule::Uniform).unwrap();
        assert_abs_diff_eq!(total, sum_rate(&scn, &rand, &rsplit).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn bad_price_step() {
        let scn = flat(1, 1, 1.0, 1.0, 0.0, 0.0);
        assert!(price_matching(&scn, 0.0).is_err());
        assert!(price_matching(&scn, f64::NAN).is_err());
    }

    #[test]
    fn counting() {
        assert_eq!(assignment_count(1, 1), 1);
        assert_eq!(assignment_count(2, 2), 4);
        assert_eq!(assignment_count(5, 7), 302_400);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(injections(2, 3), vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 2], vec![2, 0], vec![2, 1]]);
    }

    #[test]
    fn centralized_counts_candidates() {
        for (m, k) in [(1, 1), (2, 2), (2, 3), (3, 4)] {
            let out = centralized_exhaustive(&flat(m, k, 1.0, 1.0, 0.1, 0.1), SplitRule::Uniform).unwrap();
            assert_eq!(out.candidates, assignment_count(m, k));
        }
    }

    #[test]
    fn centralized_symmetric_tie_break() {
        let out = centralized_exhaustive(&flat(2, 3, 1.0, 1.0, 0.1, 0.1), SplitRule::Uniform).unwrap();
        assert_eq!(out.assignment.entries(), &[Triple::new(0, 0, 0), Triple::new(1, 1, 1)]);
    }

    #[test]
    fn centralized_size_guard() {
        let scn = flat(7, 7, 1.0, 1.0, 0.1, 0.1);
        assert!(matches!(
            centralized_exhaustive(&scn, SplitRule::Uniform),
            Err(Error::Capacity { what: "M", .. })
        ));
        let scn = flat(2, 9, 1.0, 1.0, 0.1, 0.1);
        assert!(matches!(
            centralized_exhaustive(&scn, SplitRule::Uniform),
            Err(Error::Capacity { what: "K", .. })
        ));
    }

    #[test]
    fn uniform_split() {
        let scn = OfdmaScenario::new(2, 2, vec![1.0; 4], vec![1.0; 4], vec![0.0; 8], vec![0.0; 2], 1.0, 4.0, 1.0).unwrap();
        let asg = PairingAssignment::new(2, 2, vec![Triple::new(0, 0, 1), Triple::new(1, 1, 0)]).unwrap();
        let split = split_bs_power(&scn, &asg, SplitRule::Uniform).unwrap();
        assert!(split.p_down.iter().all(|&(_, p)| p == 2.0));
        let wf = split_bs_power(&scn, &asg, SplitRule::WaterFilling).unwrap();
        assert!(wf.p_down.iter().all(|&(_, p)| (p - 2.0).abs() < 1e-12));
        assert!(split_bs_power(&scn, &PairingAssignment::empty(), SplitRule::Uniform).is_err());
    }

    #[test]
    fn water_filling_concentrates_on_dominant_unit() {
        // effective gains 10 and 0.1: with P_s = 0.5 only the first is active
        let scn = OfdmaScenario::new(2, 2, vec![1.0; 4], vec![10.0, 10.0, 0.1, 0.1], vec![0.0; 8], vec![0.0; 2], 1.0, 0.5, 1.0)
            .unwrap();
        let asg = PairingAssignment::new(2, 2, vec![Triple::new(0, 0, 0), Triple::new(1, 1, 1)]).unwrap();
        let split = split_bs_power(&scn, &asg, SplitRule::WaterFilling).unwrap();
        assert_eq!(split.p_down[0].1, 0.5);
        assert_eq!(split.p_down[1].1, 0.0);
    }

    #[test]
    fn sum_rate_support_checks() {
        let scn = flat(2, 2, 1.0, 1.0, 0.0, 0.0);
        assert_eq!(
            sum_rate(&scn, &PairingAssignment::empty(), &PowerSplit { p_down: vec![] }).unwrap(),
            0.0
        );
        let asg = PairingAssignment::new(2, 2, vec![Triple::new(0, 0, 0)]).unwrap();
        let split = split_bs_power(&scn, &asg, SplitRule::Uniform).unwrap();
        assert_abs_diff_eq!(
            sum_rate(&scn, &asg, &split).unwrap(),
            unit_rate(&scn, 0, 0, 0, 4.0).unwrap(),
            epsilon = 1e-15
        );
        let wrong = PowerSplit {
            p_down: vec![(Triple::new(1, 0, 0), 1.0)],
        };
        assert!(sum_rate(&scn, &asg, &wrong).is_err());
    }
}
