//! Flat-fading channel draws, residual self-interference (RSI), the
//! full-duplex receive SINR, and the rate / symbol-error link metrics that
//! every allocation algorithm in this crate is built on.
//!
//! A full-duplex receiver sees the far-end signal, leakage from its own
//! transmitter and thermal noise:
//!
//! ```text
//! sinr = |h_desired|^2 * p_far / (|h_self|^2 * p_self + noise)
//! ```
//!
//! Symbols never appear explicitly; everything is expressed through powers.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{check_nonneg, Error, Result};

/// The generator behind every [`RngStream`].
pub type SimRng = ChaCha8Rng;

/// Identity of an independent random stream.
///
/// Identical `(seed, stream_id)` pairs always reproduce the same draw
/// sequence, so trial `t` of an experiment can be replayed in isolation and
/// in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> SimRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Complex flat-fading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelGain {
    pub re: f64,
    pub im: f64,
}

impl ChannelGain {
    pub const ZERO: ChannelGain = ChannelGain { re: 0.0, im: 0.0 };
    pub const UNIT: ChannelGain = ChannelGain { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// A real coefficient whose power gain is `power`.
    pub fn from_power(power: f64) -> Self {
        Self {
            re: power.max(0.0).sqrt(),
            im: 0.0,
        }
    }

    /// `|h|^2`.
    #[inline]
    pub fn power_gain(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// Statistics of the residual self-interference left after cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RsiModel {
    /// Fixed interference power in watts, independent of own transmit power.
    ConstantPower(f64),
    /// Rayleigh-faded leakage channel; `mean_power` is `E|h_self|^2`.
    RayleighFaded { mean_power: f64 },
    /// Rician-faded leakage channel with line-of-sight factor `k_factor`.
    RicianFaded { k_factor: f64, mean_power: f64 },
}

impl RsiModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RsiModel::ConstantPower(p) => check_nonneg("RSI power", p),
            RsiModel::RayleighFaded { mean_power } => check_nonneg("RSI mean power", mean_power),
            RsiModel::RicianFaded {
                k_factor,
                mean_power,
            } => {
                check_nonneg("RSI k-factor", k_factor)?;
                check_nonneg("RSI mean power", mean_power)
            }
        }
    }
}

/// Residual self-interference power relative to transmit power for a given
/// cancellation depth: `10^(-cancel_db / 10)`.
pub fn cancellation_gain(cancel_db: f64) -> f64 {
    10f64.powf(-cancel_db / 10.0)
}

/// Decibels to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Draws a flat-fading coefficient with `E|h|^2 = mean_power`.
///
/// `k_factor = 0` gives Rayleigh fading; a positive factor adds a
/// deterministic line-of-sight component carrying `K/(K+1)` of the power.
pub fn draw_fading<R: Rng + ?Sized>(rng: &mut R, mean_power: f64, k_factor: f64) -> Result<ChannelGain> {
    check_nonneg("mean power", mean_power)?;
    check_nonneg("k-factor", k_factor)?;
    if mean_power == 0.0 {
        return Ok(ChannelGain::ZERO);
    }
    let los = (k_factor / (k_factor + 1.0) * mean_power).sqrt();
    let scatter_sd = (mean_power / (k_factor + 1.0) / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Ok(ChannelGain {
        re: los + scatter_sd * re,
        im: scatter_sd * im,
    })
}

/// Instantaneous RSI power for a node transmitting at `p_tx_self` watts.
///
/// Faded models draw a leakage channel and scale it by the transmit power;
/// the constant model returns its fixed power.
pub fn rsi_power<R: Rng + ?Sized>(model: &RsiModel, p_tx_self: f64, rng: &mut R) -> Result<f64> {
    model.validate()?;
    check_nonneg("self transmit power", p_tx_self)?;
    match *model {
        RsiModel::ConstantPower(p) => Ok(p),
        RsiModel::RayleighFaded { mean_power } => {
            Ok(draw_fading(rng, mean_power, 0.0)?.power_gain() * p_tx_self)
        }
        RsiModel::RicianFaded {
            k_factor,
            mean_power,
        } => Ok(draw_fading(rng, mean_power, k_factor)?.power_gain() * p_tx_self),
    }
}

/// Everything that enters a single full-duplex SINR evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrInputs {
    pub p_tx_far: f64,
    pub p_tx_self: f64,
    pub h_desired: ChannelGain,
    pub h_self: ChannelGain,
    pub noise_power: f64,
}

/// Full-duplex receive SINR.
pub fn sinr(inputs: &SinrInputs) -> Result<f64> {
    sinr_from_powers(
        inputs.h_desired.power_gain() * inputs.p_tx_far,
        inputs.h_self.power_gain() * inputs.p_tx_self,
        inputs.noise_power,
    )
}

/// `signal / (interference + noise)` with argument checks.
pub fn sinr_from_powers(signal: f64, interference: f64, noise: f64) -> Result<f64> {
    check_nonneg("signal power", signal)?;
    check_nonneg("interference power", interference)?;
    check_nonneg("noise power", noise)?;
    let denom = interference + noise;
    if denom <= 0.0 {
        return Err(Error::domain("interference plus noise is zero"));
    }
    Ok(signal / denom)
}

/// Shannon rate `log2(1 + sinr)` in bits/s/Hz.
pub fn rate(sinr: f64) -> Result<f64> {
    check_nonneg("sinr", sinr)?;
    Ok(sinr.ln_1p() / std::f64::consts::LN_2)
}

/// Gaussian tail function `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Modulation {
    Bpsk,
    Qpsk,
    /// Square M-QAM with `order` a power of four, at least 16.
    SquareQam(u32),
}

impl Modulation {
    pub fn square_qam(order: u32) -> Result<Self> {
        if order >= 16 && order.is_power_of_two() && order.trailing_zeros().is_multiple_of(2) {
            Ok(Modulation::SquareQam(order))
        } else if order == 4 {
            Ok(Modulation::Qpsk)
        } else {
            Err(Error::domain(format!(
                "QAM order must be a power of 4, got {order}"
            )))
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulation::Bpsk => f.write_str("bpsk"),
            Modulation::Qpsk => f.write_str("qpsk"),
            Modulation::SquareQam(m) => write!(f, "qam{m}"),
        }
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            other => match other.strip_prefix("qam").map(str::parse::<u32>) {
                Some(Ok(order)) => Modulation::square_qam(order),
                _ => Err(Error::domain(format!("unknown modulation `{s}`"))),
            },
        }
    }
}

impl TryFrom<String> for Modulation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Modulation> for String {
    fn from(m: Modulation) -> String {
        m.to_string()
    }
}

/// Symbol error probability at symbol SNR `sinr`.
///
/// BPSK uses `Q(sqrt(2 sinr))`. QPSK and square QAM use the exact
/// Gray-independent square-constellation expression
/// `1 - (1 - a Q(sqrt(3 sinr / (M - 1))))^2` with `a = 2 (1 - 1/sqrt(M))`.
pub fn ser(sinr: f64, modulation: Modulation) -> Result<f64> {
    check_nonneg("sinr", sinr)?;
    Ok(match modulation {
        Modulation::Bpsk => q_function((2.0 * sinr).sqrt()),
        Modulation::Qpsk => square_qam_ser(sinr, 4),
        Modulation::SquareQam(order) => square_qam_ser(sinr, order),
    })
}

fn square_qam_ser(sinr: f64, order: u32) -> f64 {
    let m = f64::from(order);
    let a = 2.0 * (1.0 - 1.0 / m.sqrt());
    let per_rail = a * q_function((3.0 * sinr / (m - 1.0)).sqrt());
    per_rail * (2.0 - per_rail)
}
