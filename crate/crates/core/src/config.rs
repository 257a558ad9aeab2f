//! Experiment configuration files.
//!
//! A configuration is a TOML document: top-level `kind`, `trials`, `seed`
//! and `name`, a `[sweep]` table, and one table per parameter group
//! (`[channel]`, `[mimo]`, `[ofdma]`, `[relay]`, `[mode_switch]`,
//! `[power]`). Every key is optional except `kind`; unknown keys are
//! rejected.
//!
//! ```toml
//! kind = "mimo_selection"
//! trials = 10000
//!
//! [sweep]
//! param = "antennas"
//! values = [3, 4, 5]
//!
//! [channel]
//! cancellation_db = 80
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::Modulation;
use crate::ofdma::{SplitRule, CENTRALIZED_MAX_SUBCARRIERS, CENTRALIZED_MAX_USERS};
use crate::relay::Protocol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid value for `{key}`: {message}")]
    Semantic { key: String, message: String },
}

impl ConfigError {
    fn semantic(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Semantic {
            key: key.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MimoSelection,
    OfdmaMatching,
    RelaySelection,
    ModeSwitch,
    PowerSweep,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::MimoSelection,
        ExperimentKind::OfdmaMatching,
        ExperimentKind::RelaySelection,
        ExperimentKind::ModeSwitch,
        ExperimentKind::PowerSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MimoSelection => "mimo_selection",
            ExperimentKind::OfdmaMatching => "ofdma_matching",
            ExperimentKind::RelaySelection => "relay_selection",
            ExperimentKind::ModeSwitch => "mode_switch",
            ExperimentKind::PowerSweep => "power_sweep",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::MimoSelection => {
                "FD-MIMO bidirectional antenna selection, Max-SR and Min-SER criteria"
            }
            ExperimentKind::OfdmaMatching => {
                "FD-OFDMA user pairing and subcarrier assignment: price matching vs centralized vs random"
            }
            ExperimentKind::RelaySelection => {
                "FD relay and antenna selection with optional relay power optimization"
            }
            ExperimentKind::ModeSwitch => "adaptive full-/half-duplex mode switching",
            ExperimentKind::PowerSweep => "FD-MIMO coupled water-filling vs uniform power",
        }
    }

    pub fn default_trials(self) -> u64 {
        match self {
            ExperimentKind::OfdmaMatching => 1_000,
            ExperimentKind::PowerSweep => 2_000,
            _ => 10_000,
        }
    }

    pub fn default_sweep(self) -> Sweep {
        let (param, values) = match self {
            ExperimentKind::MimoSelection => (SweepParam::Antennas, vec![3.0, 4.0, 5.0]),
            ExperimentKind::OfdmaMatching => (SweepParam::UserPowerDb, vec![0.0, 5.0, 10.0, 15.0, 20.0]),
            ExperimentKind::RelaySelection => (SweepParam::Relays, vec![1.0, 2.0, 4.0, 8.0]),
            ExperimentKind::ModeSwitch => (
                SweepParam::CancellationDb,
                (0..=11).rev().map(|d| f64::from(d) * 10.0).collect(),
            ),
            ExperimentKind::PowerSweep => (SweepParam::SnrDb, vec![0.0, 5.0, 10.0, 15.0, 20.0]),
        };
        Sweep { param, values }
    }

    /// Sweep parameters that make sense for this kind.
    pub fn sweep_params(self) -> &'static [SweepParam] {
        use SweepParam::*;
        match self {
            ExperimentKind::MimoSelection => &[Antennas, SnrDb, CancellationDb],
            ExperimentKind::OfdmaMatching => &[UserPowerDb, BsPowerDb, CancellationDb, Users, Subcarriers],
            ExperimentKind::RelaySelection => &[Relays, Antennas, SourcePowerDb, RelayPowerDb, CancellationDb],
            ExperimentKind::ModeSwitch => &[SnrDb, CancellationDb],
            ExperimentKind::PowerSweep => &[SnrDb, Antennas, CancellationDb],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Antennas,
    SnrDb,
    CancellationDb,
    UserPowerDb,
    BsPowerDb,
    Users,
    Subcarriers,
    Relays,
    SourcePowerDb,
    RelayPowerDb,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Antennas => "antennas",
            SweepParam::SnrDb => "snr_db",
            SweepParam::CancellationDb => "cancellation_db",
            SweepParam::UserPowerDb => "user_power_db",
            SweepParam::BsPowerDb => "bs_power_db",
            SweepParam::Users => "users",
            SweepParam::Subcarriers => "subcarriers",
            SweepParam::Relays => "relays",
            SweepParam::SourcePowerDb => "source_power_db",
            SweepParam::RelayPowerDb => "relay_power_db",
        }
    }

    fn is_count(self) -> bool {
        matches!(
            self,
            SweepParam::Antennas | SweepParam::Users | SweepParam::Subcarriers | SweepParam::Relays
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RsiKind {
    /// Leakage gain fixed at its mean.
    Constant,
    Rayleigh,
    Rician,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingKind {
    /// Unit-mean Rayleigh cross channels.
    Rayleigh,
    /// Every cross channel has unit gain.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// Noise power in watts; all `*_db` powers are relative to 1 W.
    pub noise: f64,
    /// Transmit-to-RSI power ratio after cancellation.
    pub cancellation_db: f64,
    pub rsi_model: RsiKind,
    pub rsi_k_factor: f64,
    pub fading: FadingKind,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            noise: 1.0,
            cancellation_db: 80.0,
            rsi_model: RsiKind::Rayleigh,
            rsi_k_factor: 0.0,
            fading: FadingKind::Rayleigh,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MimoParams {
    pub antennas: usize,
    pub snr_db: f64,
    pub modulation: Modulation,
}

impl Default for MimoParams {
    fn default() -> Self {
        Self {
            antennas: 3,
            snr_db: 10.0,
            modulation: Modulation::Bpsk,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmaParams {
    pub users: usize,
    pub subcarriers: usize,
    pub user_power_db: f64,
    pub bs_power_db: f64,
    /// Absolute price step; defaults to `1e-3` of the largest unit rate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub split_rule: SplitRule,
    /// Also run the exhaustive search (limited to small `M`, `K`).
    pub centralized: bool,
}

impl Default for OfdmaParams {
    fn default() -> Self {
        Self {
            users: 5,
            subcarriers: 7,
            user_power_db: 10.0,
            bs_power_db: 20.0,
            epsilon: None,
            split_rule: SplitRule::Uniform,
            centralized: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelayParams {
    pub relays: usize,
    pub antennas: usize,
    pub source_power_db: f64,
    pub relay_power_db: f64,
    pub protocol: Protocol,
    pub direct_link: bool,
}

impl Default for RelayParams {
    fn default() -> Self {
        Self {
            relays: 4,
            antennas: 2,
            source_power_db: 10.0,
            relay_power_db: 10.0,
            protocol: Protocol::DecodeForward,
            direct_link: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeSwitchParams {
    pub snr_db: f64,
}

impl Default for ModeSwitchParams {
    fn default() -> Self {
        Self { snr_db: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerParams {
    pub antennas: usize,
    pub snr_db: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PowerParams {
    fn default() -> Self {
        Self {
            antennas: 4,
            snr_db: 10.0,
            tol: 1e-6,
            max_iters: 100,
        }
    }
}

/// A fully resolved experiment: every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub name: String,
    pub trials: u64,
    pub seed: u64,
    pub sweep: Sweep,
    pub channel: ChannelParams,
    pub mimo: MimoParams,
    pub ofdma: OfdmaParams,
    pub relay: RelayParams,
    pub mode_switch: ModeSwitchParams,
    pub power: PowerParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: ExperimentKind,
    name: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    sweep: Option<RawSweep>,
    #[serde(default)]
    channel: ChannelParams,
    #[serde(default)]
    mimo: MimoParams,
    #[serde(default)]
    ofdma: OfdmaParams,
    #[serde(default)]
    relay: RelayParams,
    #[serde(default)]
    mode_switch: ModeSwitchParams,
    #[serde(default)]
    power: PowerParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    param: Option<SweepParam>,
    values: Option<Vec<f64>>,
}

pub const DEFAULT_SEED: u64 = 1;
/// TOML integers are signed 64-bit.
pub const MAX_SEED: u64 = i64::MAX as u64;

impl ExperimentConfig {
    /// Default configuration of `kind`.
    pub fn defaults(kind: ExperimentKind) -> Self {
        Self {
            kind,
            name: kind.name().to_string(),
            trials: kind.default_trials(),
            seed: DEFAULT_SEED,
            sweep: kind.default_sweep(),
            channel: ChannelParams::default(),
            mimo: MimoParams::default(),
            ofdma: OfdmaParams::default(),
            relay: RelayParams::default(),
            mode_switch: ModeSwitchParams::default(),
            power: PowerParams::default(),
        }
    }

    /// Canonical TOML form; parsing it yields an equal configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes to TOML")
    }

    /// Copy with the swept parameter set to `value`.
    pub fn at_sweep_value(&self, value: f64) -> ExperimentConfig {
        let mut cfg = self.clone();
        let count = value.round().max(0.0) as usize;
        match (self.sweep.param, self.kind) {
            (SweepParam::Antennas, ExperimentKind::PowerSweep) => cfg.power.antennas = count,
            (SweepParam::Antennas, ExperimentKind::RelaySelection) => cfg.relay.antennas = count,
            (SweepParam::Antennas, _) => cfg.mimo.antennas = count,
            (SweepParam::SnrDb, ExperimentKind::ModeSwitch) => cfg.mode_switch.snr_db = value,
            (SweepParam::SnrDb, ExperimentKind::PowerSweep) => cfg.power.snr_db = value,
            (SweepParam::SnrDb, _) => cfg.mimo.snr_db = value,
            (SweepParam::CancellationDb, _) => cfg.channel.cancellation_db = value,
            (SweepParam::UserPowerDb, _) => cfg.ofdma.user_power_db = value,
            (SweepParam::BsPowerDb, _) => cfg.ofdma.bs_power_db = value,
            (SweepParam::Users, _) => cfg.ofdma.users = count,
            (SweepParam::Subcarriers, _) => cfg.ofdma.subcarriers = count,
            (SweepParam::Relays, _) => cfg.relay.relays = count,
            (SweepParam::SourcePowerDb, _) => cfg.relay.source_power_db = value,
            (SweepParam::RelayPowerDb, _) => cfg.relay.relay_power_db = value,
        }
        cfg
    }

    /// Checks every cross-field constraint, including those of each sweep point.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::semantic("trials", "must be at least 1"));
        }
        if self.seed > MAX_SEED {
            return Err(ConfigError::semantic("seed", format!("must be at most {MAX_SEED}")));
        }
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        {
            return Err(ConfigError::semantic(
                "name",
                "must be non-empty and use only letters, digits, `_`, `-`, `.`",
            ));
        }
        if !self.kind.sweep_params().contains(&self.sweep.param) {
            let allowed: Vec<_> = self.kind.sweep_params().iter().map(|p| p.name()).collect();
            return Err(ConfigError::semantic(
                "sweep.param",
                format!(
                    "`{}` cannot be swept for {}; expected one of {}",
                    self.sweep.param.name(),
                    self.kind,
                    allowed.join(", ")
                ),
            ));
        }
        let values = &self.sweep.values;
        if values.is_empty() {
            return Err(ConfigError::semantic("sweep.values", "needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::semantic("sweep.values", "values must be finite"));
        }
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(ConfigError::semantic(
                "sweep.values",
                "values must be distinct and sorted (ascending or descending)",
            ));
        }
        if self.sweep.param.is_count() && values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(ConfigError::semantic(
                "sweep.values",
                format!("`{}` takes nonnegative integers", self.sweep.param.name()),
            ));
        }
        for &v in values {
            self.at_sweep_value(v).validate_point()?;
        }
        Ok(())
    }

    fn validate_point(&self) -> Result<(), ConfigError> {
        let finite = |key: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::semantic(key, "must be finite"))
            }
        };
        let ch = &self.channel;
        if !(ch.noise > 0.0 && ch.noise.is_finite()) {
            return Err(ConfigError::semantic("channel.noise", "must be > 0"));
        }
        finite("channel.cancellation_db", ch.cancellation_db)?;
        if !(ch.rsi_k_factor >= 0.0 && ch.rsi_k_factor.is_finite()) {
            return Err(ConfigError::semantic("channel.rsi_k_factor", "must be >= 0"));
        }

        match self.kind {
            ExperimentKind::MimoSelection => {
                if self.mimo.antennas < 2 {
                    return Err(ConfigError::semantic("mimo.antennas", "needs at least 2 antennas"));
                }
                finite("mimo.snr_db", self.mimo.snr_db)?;
            }
            ExperimentKind::OfdmaMatching => {
                let o = &self.ofdma;
                if o.users == 0 {
                    return Err(ConfigError::semantic("ofdma.users", "must be at least 1"));
                }
                if o.subcarriers < o.users {
                    return Err(ConfigError::semantic(
                        "ofdma.subcarriers",
                        format!("must be >= users ({})", o.users),
                    ));
                }
                if o.centralized && o.users > CENTRALIZED_MAX_USERS {
                    return Err(ConfigError::semantic(
                        "ofdma.users",
                        format!("centralized search supports at most {CENTRALIZED_MAX_USERS} users"),
                    ));
                }
                if o.centralized && o.subcarriers > CENTRALIZED_MAX_SUBCARRIERS {
                    return Err(ConfigError::semantic(
                        "ofdma.subcarriers",
                        format!("centralized search supports at most {CENTRALIZED_MAX_SUBCARRIERS} subcarriers"),
                    ));
                }
                if let Some(eps) = o.epsilon {
                    if !(eps > 0.0 && eps.is_finite()) {
                        return Err(ConfigError::semantic("ofdma.epsilon", "must be > 0"));
                    }
                }
                finite("ofdma.user_power_db", o.user_power_db)?;
                finite("ofdma.bs_power_db", o.bs_power_db)?;
            }
            ExperimentKind::RelaySelection => {
                let r = &self.relay;
                if r.relays == 0 {
                    return Err(ConfigError::semantic("relay.relays", "must be at least 1"));
                }
                if r.antennas == 0 {
                    return Err(ConfigError::semantic("relay.antennas", "must be at least 1"));
                }
                finite("relay.source_power_db", r.source_power_db)?;
                finite("relay.relay_power_db", r.relay_power_db)?;
            }
            ExperimentKind::ModeSwitch => finite("mode_switch.snr_db", self.mode_switch.snr_db)?,
            ExperimentKind::PowerSweep => {
                let p = &self.power;
                if p.antennas < 2 {
                    return Err(ConfigError::semantic("power.antennas", "needs at least 2 antennas"));
                }
                if !(p.tol > 0.0 && p.tol.is_finite()) {
                    return Err(ConfigError::semantic("power.tol", "must be > 0"));
                }
                if p.max_iters == 0 {
                    return Err(ConfigError::semantic("power.max_iters", "must be at least 1"));
                }
                finite("power.snr_db", p.snr_db)?;
            }
        }
        Ok(())
    }
}

/// Parses and validates a configuration document, filling defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    if let Err(e) = toml::from_str::<toml::Table>(text) {
        let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
        return Err(ConfigError::Syntax {
            line,
            column,
            message: e.message().trim().to_string(),
        });
    }
    let raw: RawConfig = toml::from_str(text).map_err(|e| semantic_from_toml(text, &e))?;

    let default_sweep = raw.kind.default_sweep();
    let sweep = match raw.sweep {
        None => default_sweep,
        Some(RawSweep { param: None, values: None }) => default_sweep,
        Some(RawSweep {
            param: Some(param),
            values: Some(values),
        }) => Sweep { param, values },
        Some(RawSweep {
            param: Some(param),
            values: None,
        }) if param == default_sweep.param => default_sweep,
        Some(RawSweep { param: None, .. }) => {
            return Err(ConfigError::semantic("sweep.param", "required when sweep.values is given"))
        }
        Some(RawSweep { values: None, .. }) => {
            return Err(ConfigError::semantic(
                "sweep.values",
                "required when sweeping a non-default parameter",
            ))
        }
    };

    let cfg = ExperimentConfig {
        kind: raw.kind,
        name: raw.name.unwrap_or_else(|| raw.kind.name().to_string()),
        trials: raw.trials.unwrap_or_else(|| raw.kind.default_trials()),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        sweep,
        channel: raw.channel,
        mimo: raw.mimo,
        ofdma: raw.ofdma,
        relay: raw.relay,
        mode_switch: raw.mode_switch,
        power: raw.power,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

/// Dotted path of the key on the line where a deserialization error
/// points, e.g. `mimo.antenas`.
fn semantic_from_toml(text: &str, err: &toml::de::Error) -> ConfigError {
    let message = err.message().trim().to_string();
    let key = err
        .span()
        .map(|span| key_at(text, span.start))
        .unwrap_or_default();
    ConfigError::Semantic { key, message }
}

fn key_at(text: &str, offset: usize) -> String {
    let mut section = String::new();
    let mut consumed = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        let at_error = offset < consumed + line.len();
        if let Some(header) = trimmed.strip_prefix('[').and_then(|h| h.split(']').next()) {
            section = header.trim().to_string();
            if at_error {
                return section;
            }
        } else if at_error {
            let key = trimmed.split('=').next().unwrap_or("").trim().trim_matches('"');
            return if section.is_empty() || key.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
        }
        consumed += line.len();
    }
    section
}
