use fdnet_core::channel::{draw_fading, ChannelGain, RngStream};
use fdnet_core::mimo::{enumerate_configs, select_max_sr, LinkSelection, Matrix, MimoScenario};
use fdnet_core::relay::{end_to_end_sinr, select_relay_antenna, Protocol, Relay, RelayScenario};
use rand::Rng;

#[test]
fn config_space_size() {
    for n in 2..=5 {
        let scn = MimoScenario {
            h_ab: Matrix::filled(n, n, ChannelGain::UNIT),
            h_ba: Matrix::filled(n, n, ChannelGain::UNIT),
            rsi_a: Matrix::filled(n, n, 0.0),
            rsi_b: Matrix::filled(n, n, 0.0),
            p_a: 1.0,
            p_b: 1.0,
            noise: 1.0,
        };
        let configs = enumerate_configs(&scn).unwrap();
        assert_eq!(configs.len(), (n * (n - 1)).pow(2));
        assert!(configs.windows(2).all(|w| w[0] < w[1]));
    }
}

fn relay_brute_force(scn: &RelayScenario, p_r: f64) -> (usize, (usize, usize), f64) {
    let mut best = (0, (0, 0), f64::NEG_INFINITY);
    for (i, r) in scn.relays.iter().enumerate() {
        let n = r.h_sr.len();
        for t in 0..n {
            for rx in (0..n).filter(|&x| x != t) {
                let g1 = r.h_sr[rx].power_gain() * scn.p_s / (r.rsi * p_r + scn.noise);
                let g2 = r.h_rd[t].power_gain() * p_r / scn.noise;
                let v = g1.min(g2);
                if v > best.2 {
                    best = (i, (t, rx), v);
                }
            }
        }
    }
    best
}

#[test]
fn relay_selection_matches_brute_force() {
    for t in 0..100 {
        let mut rng = RngStream::new(77, t).generator();
        let relays = (0..4)
            .map(|_| Relay {
                h_sr: (0..2).map(|_| draw_fading(&mut rng, 1.0, 0.0).unwrap()).collect(),
                h_rd: (0..2).map(|_| draw_fading(&mut rng, 1.0, 0.0).unwrap()).collect(),
                rsi: rng.random_range(0.0..0.5),
            })
            .collect();
        let scn = RelayScenario {
            relays,
            h_sd: None,
            p_s: 10.0,
            p_r_max: 10.0,
            noise: 1.0,
        };
        let choice = select_relay_antenna(&scn, 10.0, Protocol::DecodeForward).unwrap();
        let (relay, pair, value) = relay_brute_force(&scn, 10.0);
        assert_eq!(choice.relay, relay, "instance {t}");
        assert_eq!(scn.relays[relay].configs()[choice.config], pair, "instance {t}");
        assert!((choice.sinr - value).abs() <= 1e-12 * value.max(1.0));
        assert_eq!(
            end_to_end_sinr(&scn, choice.relay, choice.config, 10.0, Protocol::DecodeForward).unwrap(),
            choice.sinr
        );
    }
}

/// A common power scale can change the Max-SR choice: a balanced pair of
/// moderate links beats one strong link only at high SNR.
#[test]
fn common_power_scaling_can_change_max_sr_choice() {
    let mut h_ab = Matrix::filled(2, 2, ChannelGain::from_power(1e-6));
    let mut h_ba = Matrix::filled(2, 2, ChannelGain::from_power(1e-6));
    *h_ab.get_mut(0, 1) = ChannelGain::from_power(10.0);
    *h_ba.get_mut(0, 1) = ChannelGain::from_power(10.0);
    *h_ab.get_mut(1, 0) = ChannelGain::from_power(1000.0);
    *h_ba.get_mut(1, 0) = ChannelGain::from_power(1e-12);
    let at = |p: f64| {
        select_max_sr(&MimoScenario {
            h_ab: h_ab.clone(),
            h_ba: h_ba.clone(),
            rsi_a: Matrix::filled(2, 2, 0.0),
            rsi_b: Matrix::filled(2, 2, 0.0),
            p_a: p,
            p_b: p,
            noise: 1.0,
        })
        .unwrap()
        .0
    };
    assert_eq!(at(1.0), LinkSelection::new(2, 1, 2, 1));
    assert_eq!(at(1000.0), LinkSelection::new(1, 2, 1, 2));
}
