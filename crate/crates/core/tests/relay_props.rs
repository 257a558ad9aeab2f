use fdnet_core::channel::ChannelGain;
use fdnet_core::relay::{end_to_end_sinr, mode_switch, optimal_relay_power, two_way_sinrs, DuplexMode, Protocol, Relay, RelayScenario};
use proptest::prelude::*;

fn scenario(g_sr: f64, g_rd: f64, rsi: f64, p_s: f64, p_r_max: f64) -> RelayScenario {
    RelayScenario {
        relays: vec![Relay {
            h_sr: vec![ChannelGain::from_power(g_sr)],
            h_rd: vec![ChannelGain::from_power(g_rd)],
            rsi,
        }],
        h_sd: None,
        p_s,
        p_r_max,
        noise: 1.0,
    }
}

proptest! {
    #[test]
    fn df_sinr_monotone_in_rsi_and_source_power(
        g_sr in 0.01..10.0f64,
        g_rd in 0.01..10.0f64,
        r1 in 0.0..2.0f64,
        r2 in 0.0..2.0f64,
        p1 in 0.1..100.0f64,
        p2 in 0.1..100.0f64,
        frac in 0.0..=1.0f64,
    ) {
        let p_r = 10.0 * frac;
        let df = |rsi: f64, p_s: f64| {
            end_to_end_sinr(&scenario(g_sr, g_rd, rsi, p_s, 10.0), 0, 0, p_r, Protocol::DecodeForward).unwrap()
        };
        let (r_lo, r_hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let (p_lo, p_hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(df(r_lo, 1.0) >= df(r_hi, 1.0));
        prop_assert!(df(0.5, p_lo) <= df(0.5, p_hi));
    }

    #[test]
    fn optimal_power_beats_every_grid_point(
        g_sr in 0.01..10.0f64,
        g_rd in 0.01..10.0f64,
        rsi in 1e-4..10.0f64,
        p_max in 0.5..500.0f64,
        af in any::<bool>(),
    ) {
        let protocol = if af { Protocol::AmplifyForward } else { Protocol::DecodeForward };
        let scn = scenario(g_sr, g_rd, rsi, 10.0, p_max);
        let (p, v) = optimal_relay_power(&scn, 0, 0, protocol).unwrap();
        prop_assert!((0.0..=p_max).contains(&p));
        for i in 0..=200 {
            let q = (p_max * i as f64 / 200.0).min(p_max);
            prop_assert!(v >= end_to_end_sinr(&scn, 0, 0, q, protocol).unwrap() * (1.0 - 1e-6));
        }
    }

    #[test]
    fn mode_switch_flips_once_as_rsi_grows(g in 0.1..10.0f64, p in 0.1..100.0f64) {
        let hd = g * p;
        let modes: Vec<DuplexMode> = (0..400)
            .map(|i| {
                let rsi = 10f64.powf(-12.0 + i as f64 * 0.04);
                let fd = g * p / (rsi * p + 1.0);
                mode_switch(fd, fd, hd, hd).unwrap().chosen
            })
            .collect();
        prop_assert_eq!(modes[0], DuplexMode::Full);
        prop_assert_eq!(modes.windows(2).filter(|w| w[0] != w[1]).count(), 1);
    }
}

#[test]
fn two_way_end_node_rsi_hurts_both_directions() {
    let scn = scenario(2.0, 3.0, 0.1, 5.0, 5.0);
    let clean = two_way_sinrs(&scn, 0, 0, 5.0, 0.0, Protocol::DecodeForward).unwrap();
    let dirty = two_way_sinrs(&scn, 0, 0, 5.0, 0.5, Protocol::DecodeForward).unwrap();
    assert!(dirty.0 <= clean.0 && dirty.1 <= clean.1);
    assert!(dirty.0 < clean.0 || dirty.1 < clean.1);
}
