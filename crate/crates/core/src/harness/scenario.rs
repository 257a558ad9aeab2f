//! Random scenario generation for each experiment kind.

use rand::Rng;

use crate::channel::{cancellation_gain, db_to_linear, draw_fading, rsi_power, ChannelGain, RsiModel};
use crate::config::{ChannelParams, ExperimentConfig, ExperimentKind, FadingKind, RsiKind};
use crate::error::Result;
use crate::mimo::{Matrix, MimoScenario};
use crate::ofdma::OfdmaScenario;
use crate::relay::{Relay, RelayScenario};

/// Symmetric single-antenna-per-direction full-duplex link for mode switching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplexLink {
    /// `|h_ab|^2`, `|h_ba|^2`.
    pub g_ab: f64,
    pub g_ba: f64,
    /// RSI power gains at A and B.
    pub rsi_a: f64,
    pub rsi_b: f64,
    pub p: f64,
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Mimo(MimoScenario),
    Ofdma(OfdmaScenario),
    Relay(RelayScenario),
    Duplex(DuplexLink),
}

/// RSI model implied by the channel parameters.
pub fn rsi_model(ch: &ChannelParams) -> RsiModel {
    let mean_power = cancellation_gain(ch.cancellation_db);
    match ch.rsi_model {
        RsiKind::Constant => RsiModel::ConstantPower(mean_power),
        RsiKind::Rayleigh => RsiModel::RayleighFaded { mean_power },
        RsiKind::Rician => RsiModel::RicianFaded {
            k_factor: ch.rsi_k_factor,
            mean_power,
        },
    }
}

fn cross<R: Rng + ?Sized>(ch: &ChannelParams, rng: &mut R) -> Result<ChannelGain> {
    match ch.fading {
        FadingKind::Rayleigh => draw_fading(rng, 1.0, 0.0),
        FadingKind::None => Ok(ChannelGain::UNIT),
    }
}

/// Leakage power gain per watt of own transmit power.
fn leakage<R: Rng + ?Sized>(model: &RsiModel, rng: &mut R) -> Result<f64> {
    rsi_power(model, 1.0, rng)
}

fn matrix<T, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> Result<T>,
) -> Result<Matrix<T>> {
    let mut cells = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        cells.push(draw(rng)?);
    }
    let mut it = cells.into_iter();
    Ok(Matrix::from_fn(rows, cols, |_, _| it.next().expect("sized")))
}

/// Draws one scenario of `kind` from `rng`. All draws come from the
/// supplied stream, in a fixed order.
pub fn generate_scenario<R: Rng + ?Sized>(kind: ExperimentKind, cfg: &ExperimentConfig, rng: &mut R) -> Result<Scenario> {
    let ch = &cfg.channel;
    let model = rsi_model(ch);
    model.validate()?;
    match kind {
        ExperimentKind::MimoSelection | ExperimentKind::PowerSweep => {
            let (n, snr_db) = if kind == ExperimentKind::MimoSelection {
                (cfg.mimo.antennas, cfg.mimo.snr_db)
            } else {
                (cfg.power.antennas, cfg.power.snr_db)
            };
            let p = ch.noise * db_to_linear(snr_db);
            let scn = MimoScenario {
                h_ab: matrix(n, n, rng, |r| cross(ch, r))?,
                h_ba: matrix(n, n, rng, |r| cross(ch, r))?,
                rsi_a: matrix(n, n, rng, |r| leakage(&model, r))?,
                rsi_b: matrix(n, n, rng, |r| leakage(&model, r))?,
                p_a: p,
                p_b: p,
                noise: ch.noise,
            };
            scn.validate()?;
            Ok(Scenario::Mimo(scn))
        }
        ExperimentKind::OfdmaMatching => {
            let o = &cfg.ofdma;
            let (m, k) = (o.users, o.subcarriers);
            let power = |r: &mut R| cross(ch, r).map(|h| h.power_gain());
            let g_up = (0..m * k).map(|_| power(rng)).collect::<Result<Vec<_>>>()?;
            let g_down = (0..m * k).map(|_| power(rng)).collect::<Result<Vec<_>>>()?;
            let g_cross = (0..m * m * k).map(|_| power(rng)).collect::<Result<Vec<_>>>()?;
            let p_bs = ch.noise * db_to_linear(o.bs_power_db);
            let rsi_bs = (0..k)
                .map(|_| rsi_power(&model, p_bs / m as f64, rng))
                .collect::<Result<Vec<_>>>()?;
            let scn = OfdmaScenario::new(
                m,
                k,
                g_up,
                g_down,
                g_cross,
                rsi_bs,
                ch.noise * db_to_linear(o.user_power_db),
                p_bs,
                ch.noise,
            )?;
            Ok(Scenario::Ofdma(scn))
        }
        ExperimentKind::RelaySelection => {
            let r = &cfg.relay;
            let mut relays = Vec::with_capacity(r.relays);
            for _ in 0..r.relays {
                let h_sr = (0..r.antennas).map(|_| cross(ch, rng)).collect::<Result<Vec<_>>>()?;
                let h_rd = (0..r.antennas).map(|_| cross(ch, rng)).collect::<Result<Vec<_>>>()?;
                let rsi = leakage(&model, rng)?;
                relays.push(Relay { h_sr, h_rd, rsi });
            }
            let h_sd = if r.direct_link { Some(cross(ch, rng)?) } else { None };
            let scn = RelayScenario {
                relays,
                h_sd,
                p_s: ch.noise * db_to_linear(r.source_power_db),
                p_r_max: ch.noise * db_to_linear(r.relay_power_db),
                noise: ch.noise,
            };
            scn.validate()?;
            Ok(Scenario::Relay(scn))
        }
        ExperimentKind::ModeSwitch => {
            let g = cross(ch, rng)?.power_gain();
            Ok(Scenario::Duplex(DuplexLink {
                g_ab: g,
                g_ba: g,
                rsi_a: leakage(&model, rng)?,
                rsi_b: leakage(&model, rng)?,
                p: ch.noise * db_to_linear(cfg.mode_switch.snr_db),
                noise: ch.noise,
            }))
        }
    }
}
