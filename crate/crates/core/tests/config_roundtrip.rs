use fdnet_core::channel::Modulation;
use fdnet_core::config::{parse_config, ConfigError, ExperimentConfig, ExperimentKind, FadingKind, RsiKind};
use fdnet_core::ofdma::SplitRule;
use fdnet_core::relay::Protocol;
use proptest::prelude::*;

fn config() -> impl Strategy<Value = ExperimentConfig> {
    let kind = prop::sample::select(ExperimentKind::ALL.to_vec());
    (
        kind,
        1u64..100_000,
        0..=fdnet_core::config::MAX_SEED,
        (0.0..110.0f64, prop::sample::select(vec![RsiKind::Constant, RsiKind::Rayleigh, RsiKind::Rician]), 0.0..10.0f64, any::<bool>()),
        (2usize..6, -10.0..30.0f64, prop::sample::select(vec![Modulation::Bpsk, Modulation::Qpsk, Modulation::SquareQam(16)])),
        (1usize..5, 0usize..3, prop::option::of(1e-5..1.0f64), any::<bool>(), any::<bool>()),
        (1usize..6, 1usize..4, any::<bool>(), any::<bool>()),
        (1e-9..1e-3f64, 1usize..500),
    )
        .prop_map(|(kind, trials, seed, ch, mimo, ofdma, relay, power)| {
            let mut c = ExperimentConfig::defaults(kind);
            c.trials = trials;
            c.seed = seed;
            c.channel.cancellation_db = ch.0;
            c.channel.rsi_model = ch.1;
            c.channel.rsi_k_factor = ch.2;
            c.channel.fading = if ch.3 { FadingKind::Rayleigh } else { FadingKind::None };
            c.mimo.snr_db = mimo.1;
            c.mimo.modulation = mimo.2;
            c.power.antennas = mimo.0;
            c.ofdma.users = ofdma.0;
            c.ofdma.subcarriers = ofdma.0 + ofdma.1;
            c.ofdma.epsilon = ofdma.2;
            c.ofdma.split_rule = if ofdma.3 { SplitRule::Uniform } else { SplitRule::WaterFilling };
            c.ofdma.centralized = ofdma.4;
            c.relay.relays = relay.0;
            c.relay.antennas = relay.1;
            c.relay.protocol = if relay.2 { Protocol::DecodeForward } else { Protocol::AmplifyForward };
            c.relay.direct_link = relay.3;
            c.power.tol = power.0;
            c.power.max_iters = power.1;
            c.name = format!("{kind}_{trials}");
            c
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(cfg in config()) {
        prop_assume!(cfg.validate().is_ok());
        let text = cfg.to_toml();
        prop_assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}

#[test]
fn full_example_parses() {
    let text = r#"
kind = "ofdma_matching"
name = "matching-study"
trials = 250
seed = 99

[sweep]
param = "bs_power_db"
values = [10, 20, 30]

[channel]
noise = 0.5
cancellation_db = 70
rsi_model = "rician"
rsi_k_factor = 3.0

[ofdma]
users = 3
subcarriers = 4
user_power_db = 5
epsilon = 0.01
split_rule = "water_filling"
"#;
    let cfg = parse_config(text).unwrap();
    assert_eq!(cfg.name, "matching-study");
    assert_eq!(cfg.sweep.values, vec![10.0, 20.0, 30.0]);
    assert_eq!(cfg.ofdma.split_rule, SplitRule::WaterFilling);
    assert_eq!(cfg.ofdma.epsilon, Some(0.01));
    assert_eq!(cfg.channel.rsi_model, RsiKind::Rician);
    assert_eq!(cfg.at_sweep_value(30.0).ofdma.bs_power_db, 30.0);
}

#[test]
fn errors_name_the_problem() {
    let syntax = parse_config("kind = \"mode_switch\"\n[channel\nnoise = 1\n").unwrap_err();
    assert!(matches!(syntax, ConfigError::Syntax { line: 2, .. }), "{syntax:?}");
    let text = syntax.to_string();
    assert!(text.contains("line 2"), "{text}");

    let unknown = parse_config("kind = \"relay_selection\"\n\n[relay]\nrelays = 2\nhops = 3\n").unwrap_err();
    assert!(matches!(unknown, ConfigError::Semantic { ref key, .. } if key == "relay.hops"), "{unknown:?}");

    let missing = parse_config("trials = 4\n").unwrap_err();
    assert!(matches!(missing, ConfigError::Semantic { .. }), "{missing:?}");
    assert!(missing.to_string().contains("kind"), "{missing}");
}
