mod common;

use common::{random_connected_multiplex, Dense};
use multispread_core::diffusion::run;
use multispread_core::metrics::{extract_trace, peak};
use multispread_core::{LayerSelector, LayerView, Recording, SimulationConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn path_network(n: usize) -> multispread_core::MultiplexNetwork {
    let mut m = vec![vec![false; n]; n];
    for i in 1..n {
        m[i - 1][i] = true;
        m[i][i - 1] = true;
    }
    Dense { n, adj: vec![m] }.to_network()
}

#[test]
fn path_peaks_do_not_move_closer_with_distance() {
    let net = path_network(6);
    for r in [0.2, 0.5, 0.8] {
        let cfg =
            SimulationConfig::new(r, 50).with_seed("n0", LayerSelector::Named("L0".into()), 1.0);
        let out = run(&net, &cfg, &Recording::All).unwrap();
        let t_m: Vec<usize> = (0..6)
            .map(|i| {
                extract_trace(&out, &format!("n{i}"), &LayerView::Named("L0".into()))
                    .unwrap()
                    .t_m
            })
            .collect();
        assert!(t_m.windows(2).all(|w| w[0] <= w[1]), "R={r}: {t_m:?}");
        assert_eq!(t_m[0], 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stored_peak_is_reproducible_and_horizon_consistent(
        seed in any::<u64>(),
        n in 3usize..=10,
        retention in 0.0f64..1.0,
        short in 2usize..20,
        extra in 1usize..20,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_multiplex(&mut rng, n, 2, 0.2);
        let net = g.to_network();
        let cfg = |t| SimulationConfig::new(retention, t)
            .with_coupling(1.0)
            .with_seed("n0", LayerSelector::Named("L0".into()), 1.0);
        let a = run(&net, &cfg(short), &Recording::All).unwrap();
        let b = run(&net, &cfg(short + extra), &Recording::All).unwrap();
        for view in [LayerView::Named("L1".into()), LayerView::Aggregate] {
            for i in 0..n {
                let label = format!("n{i}");
                let ta = extract_trace(&a, &label, &view).unwrap();
                let tb = extract_trace(&b, &label, &view).unwrap();
                prop_assert_eq!(peak(&ta.series), (ta.t_m, ta.alpha_m));
                prop_assert!(tb.alpha_m >= ta.alpha_m);
                if ta.t_m < short && tb.alpha_m == ta.alpha_m {
                    prop_assert_eq!(tb.t_m, ta.t_m);
                }
                prop_assert!(ta.series.iter().all(|&x| x >= 0.0));
            }
        }
    }
}
