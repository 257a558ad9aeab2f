//! Bidirectional antenna-link selection for a two-node full-duplex MIMO
//! link.
//!
//! Each node has one transmit chain and one receive chain, so a
//! configuration picks a distinct TX and RX antenna at both ends. Node A's
//! choice of TX antenna sets the forward link to B's RX antenna, and B's own
//! TX antenna leaks into that same RX antenna through `rsi_b`. The search
//! space has `N_A (N_A - 1) N_B (N_B - 1)` elements and is enumerated
//! exhaustively.

use crate::channel::{rate, ser, sinr_from_powers, ChannelGain, Modulation};
use crate::error::{check_nonneg, Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut T {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.data[r * self.cols + c]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

/// Channel and power state of one two-node FD-MIMO realization.
///
/// `h_ab[t][r]` is A's antenna `t` to B's antenna `r`; `rsi_a[t][r]` is the
/// self-interference power gain from A's TX antenna `t` into A's RX antenna
/// `r`. Indices inside the matrices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoScenario {
    pub h_ab: Matrix<ChannelGain>,
    pub h_ba: Matrix<ChannelGain>,
    pub rsi_a: Matrix<f64>,
    pub rsi_b: Matrix<f64>,
    pub p_a: f64,
    pub p_b: f64,
    pub noise: f64,
}

impl MimoScenario {
    pub fn n_a(&self) -> usize {
        self.h_ab.rows()
    }

    pub fn n_b(&self) -> usize {
        self.h_ab.cols()
    }

    pub fn validate(&self) -> Result<()> {
        let (n_a, n_b) = (self.n_a(), self.n_b());
        if n_a < 2 || n_b < 2 {
            return Err(Error::domain(format!(
                "each node needs at least 2 antennas, got N_A={n_a}, N_B={n_b}"
            )));
        }
        let dims_ok = self.h_ba.rows() == n_b
            && self.h_ba.cols() == n_a
            && self.rsi_a.rows() == n_a
            && self.rsi_a.cols() == n_a
            && self.rsi_b.rows() == n_b
            && self.rsi_b.cols() == n_b;
        if !dims_ok {
            return Err(Error::domain("matrix dimensions do not match antenna counts"));
        }
        check_nonneg("p_a", self.p_a)?;
        check_nonneg("p_b", self.p_b)?;
        check_nonneg("noise", self.noise)?;
        for &g in self.rsi_a.iter().chain(self.rsi_b.iter()) {
            check_nonneg("RSI gain", g)?;
        }
        Ok(())
    }
}

/// A bidirectional link choice, antenna indices 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkSelection {
    pub a_tx: usize,
    pub a_rx: usize,
    pub b_tx: usize,
    pub b_rx: usize,
}

impl LinkSelection {
    pub fn new(a_tx: usize, a_rx: usize, b_tx: usize, b_rx: usize) -> Self {
        Self {
            a_tx,
            a_rx,
            b_tx,
            b_rx,
        }
    }

    fn check(&self, n_a: usize, n_b: usize) -> Result<()> {
        let in_range = |i: usize, n: usize| (1..=n).contains(&i);
        if !(in_range(self.a_tx, n_a)
            && in_range(self.a_rx, n_a)
            && in_range(self.b_tx, n_b)
            && in_range(self.b_rx, n_b))
        {
            return Err(Error::domain(format!(
                "selection {self:?} out of range for N_A={n_a}, N_B={n_b}"
            )));
        }
        if self.a_tx == self.a_rx || self.b_tx == self.b_rx {
            return Err(Error::domain(format!(
                "selection {self:?} reuses an antenna for TX and RX"
            )));
        }
        Ok(())
    }
}

/// All valid selections in lexicographic `(a_tx, a_rx, b_tx, b_rx)` order.
pub fn enumerate_configs(scn: &MimoScenario) -> Result<Vec<LinkSelection>> {
    let (n_a, n_b) = (scn.n_a(), scn.n_b());
    if n_a < 2 || n_b < 2 {
        return Err(Error::domain(format!(
            "each node needs at least 2 antennas, got N_A={n_a}, N_B={n_b}"
        )));
    }
    let mut out = Vec::with_capacity(n_a * (n_a - 1) * n_b * (n_b - 1));
    for a_tx in 1..=n_a {
        for a_rx in (1..=n_a).filter(|&r| r != a_tx) {
            for b_tx in 1..=n_b {
                for b_rx in (1..=n_b).filter(|&r| r != b_tx) {
                    out.push(LinkSelection::new(a_tx, a_rx, b_tx, b_rx));
                }
            }
        }
    }
    Ok(out)
}

/// SINR at B (for the A to B link) and at A (for B to A) under `sel`.
pub fn bidirectional_sinrs(scn: &MimoScenario, sel: &LinkSelection) -> Result<(f64, f64)> {
    sel.check(scn.n_a(), scn.n_b())?;
    let (at, ar, bt, br) = (sel.a_tx - 1, sel.a_rx - 1, sel.b_tx - 1, sel.b_rx - 1);
    let at_b = sinr_from_powers(
        scn.h_ab.get(at, br).power_gain() * scn.p_a,
        scn.rsi_b.get(bt, br) * scn.p_b,
        scn.noise,
    )?;
    let at_a = sinr_from_powers(
        scn.h_ba.get(bt, ar).power_gain() * scn.p_b,
        scn.rsi_a.get(at, ar) * scn.p_a,
        scn.noise,
    )?;
    Ok((at_b, at_a))
}

/// Maximizes `rate(sinr at B) + rate(sinr at A)`; earliest selection wins ties.
pub fn select_max_sr(scn: &MimoScenario) -> Result<(LinkSelection, f64)> {
    scn.validate()?;
    best_by(scn, |b, a| Ok(rate(b)? + rate(a)?), |cand, best| cand > best)
}

/// Minimizes `ser(sinr at B) + ser(sinr at A)`; earliest selection wins ties.
pub fn select_min_ser(scn: &MimoScenario, modulation: Modulation) -> Result<(LinkSelection, f64)> {
    scn.validate()?;
    best_by(
        scn,
        |b, a| Ok(ser(b, modulation)? + ser(a, modulation)?),
        |cand, best| cand < best,
    )
}

fn best_by(
    scn: &MimoScenario,
    metric: impl Fn(f64, f64) -> Result<f64>,
    better: impl Fn(f64, f64) -> bool,
) -> Result<(LinkSelection, f64)> {
    let mut best: Option<(LinkSelection, f64)> = None;
    for sel in enumerate_configs(scn)? {
        let (b, a) = bidirectional_sinrs(scn, &sel)?;
        let value = metric(b, a)?;
        match best {
            Some((_, v)) if !better(value, v) => {}
            _ => best = Some((sel, value)),
        }
    }
    // enumerate_configs never returns an empty list for a validated scenario
    Ok(best.expect("non-empty configuration space"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, gain: f64, rsi: f64) -> MimoScenario {
        MimoScenario {
            h_ab: Matrix::filled(n, n, ChannelGain::from_power(gain)),
            h_ba: Matrix::filled(n, n, ChannelGain::from_power(gain)),
            rsi_a: Matrix::filled(n, n, rsi),
            rsi_b: Matrix::filled(n, n, rsi),
            p_a: 1.0,
            p_b: 1.0,
            noise: 1.0,
        }
    }

    #[test]
    fn config_counts() {
        assert_eq!(enumerate_configs(&uniform(2, 1.0, 0.0)).unwrap().len(), 4);
        assert_eq!(enumerate_configs(&uniform(3, 1.0, 0.0)).unwrap().len(), 36);
        assert_eq!(enumerate_configs(&uniform(5, 1.0, 0.0)).unwrap().len(), 400);
    }

    #[test]
    fn config_order_starts_lexicographically() {
        let configs = enumerate_configs(&uniform(3, 1.0, 0.0)).unwrap();
        assert_eq!(configs[0], LinkSelection::new(1, 2, 1, 2));
        assert_eq!(configs[1], LinkSelection::new(1, 2, 1, 3));
        assert!(configs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_antenna_rejected() {
        let mut scn = uniform(2, 1.0, 0.0);
        scn.h_ab = Matrix::filled(1, 2, ChannelGain::UNIT);
        assert!(enumerate_configs(&scn).is_err());
    }

    #[test]
    fn rsi_free_reduces_to_snr() {
        let mut scn = uniform(3, 2.0, 0.0);
        scn.noise = 0.5;
        let (b, a) = bidirectional_sinrs(&scn, &LinkSelection::new(1, 2, 3, 1)).unwrap();
        assert!((b - 4.0).abs() < 1e-12 && (a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn silent_b_node() {
        let mut scn = uniform(3, 1.0, 0.5);
        scn.p_b = 0.0;
        let (b, a) = bidirectional_sinrs(&scn, &LinkSelection::new(1, 2, 1, 2)).unwrap();
        // no RSI at B, and A hears nothing
        assert_eq!(b, 1.0);
        assert_eq!(a, 0.0);
    }

    #[test]
    fn invalid_selection_rejected() {
        let scn = uniform(3, 1.0, 0.0);
        assert!(bidirectional_sinrs(&scn, &LinkSelection::new(1, 1, 1, 2)).is_err());
        assert!(bidirectional_sinrs(&scn, &LinkSelection::new(1, 4, 1, 2)).is_err());
        assert!(bidirectional_sinrs(&scn, &LinkSelection::new(0, 2, 1, 2)).is_err());
    }

    #[test]
    fn symmetric_instance_ties_to_first() {
        let scn = uniform(4, 1.0, 0.01);
        assert_eq!(select_max_sr(&scn).unwrap().0, LinkSelection::new(1, 2, 1, 2));
        assert_eq!(
            select_min_ser(&scn, Modulation::Bpsk).unwrap().0,
            LinkSelection::new(1, 2, 1, 2)
        );
    }

    #[test]
    fn dominant_cross_link_is_used() {
        let mut scn = uniform(3, 1.0, 0.0);
        *scn.h_ab.get_mut(1, 2) = ChannelGain::from_power(10.0);
        let (sel, _) = select_max_sr(&scn).unwrap();
        assert_eq!((sel.a_tx, sel.b_rx), (2, 3));
        let (sel_ser, _) = select_min_ser(&scn, Modulation::Bpsk).unwrap();
        assert_eq!(sel, sel_ser);
    }

    #[test]
    fn hand_evaluated_sinrs() {
        let mut scn = uniform(3, 1.0, 0.0);
        *scn.h_ab.get_mut(2, 0) = ChannelGain::new(1.0, 1.0); // |h|^2 = 2
        *scn.h_ba.get_mut(1, 0) = ChannelGain::new(0.0, 3.0); // |h|^2 = 9
        *scn.rsi_b.get_mut(1, 0) = 0.25;
        *scn.rsi_a.get_mut(2, 0) = 0.5;
        scn.p_a = 2.0;
        scn.p_b = 4.0;
        let (b, a) = bidirectional_sinrs(&scn, &LinkSelection::new(3, 1, 2, 1)).unwrap();
        assert!((b - 2.0 * 2.0 / (0.25 * 4.0 + 1.0)).abs() < 1e-12);
        assert!((a - 9.0 * 4.0 / (0.5 * 2.0 + 1.0)).abs() < 1e-12);
    }
}
