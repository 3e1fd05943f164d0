//! Statistics checked against values frozen from scipy (see
//! `data/gen_stats_reference.py`) and against brute-force definitions.

use multispread_core::stats::{cohens_d, kendall_tau, kruskal_wallis};
use multispread_core::Error;
use proptest::prelude::*;
use serde_json::Value;

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn matches_reference_datasets() {
    let data: Vec<Value> = serde_json::from_str(include_str!("data/stats_reference.json")).unwrap();
    assert_eq!(data.len(), 100);
    for (i, case) in data.iter().enumerate() {
        let groups: Vec<Vec<f64>> = case["groups"]
            .as_array()
            .unwrap()
            .iter()
            .map(floats)
            .collect();
        let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();

        match case["cohens_d"].as_f64() {
            Some(want) => {
                let got = cohens_d(&groups[0], &groups[1]).unwrap();
                assert!((got - want).abs() < 1e-9, "case {i}: d {got} vs {want}");
            }
            None => assert!(cohens_d(&groups[0], &groups[1]).is_err()),
        }

        let kw = kruskal_wallis(&refs).unwrap();
        let (h, p) = (
            case["kw_h"].as_f64().unwrap(),
            case["kw_p"].as_f64().unwrap(),
        );
        assert!(
            (kw.h - h).abs() < 1e-9 * h.max(1.0),
            "case {i}: H {} vs {h}",
            kw.h
        );
        assert!((kw.p - p).abs() < 1e-6, "case {i}: p {} vs {p}", kw.p);

        let (x, y) = (floats(&case["x"]), floats(&case["y"]));
        match case["kendall_tau"].as_f64() {
            Some(want) => {
                let got = kendall_tau(&x, &y).unwrap();
                assert!((got - want).abs() < 1e-9, "case {i}: tau {got} vs {want}");
            }
            None => assert!(matches!(kendall_tau(&x, &y), Err(Error::Undefined(_)))),
        }
    }
}

/// H from the textbook definition: explicit average ranks by counting.
fn naive_h(groups: &[Vec<f64>]) -> f64 {
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = pooled.len() as f64;
    let rank = |x: f64| {
        let below = pooled.iter().filter(|&&y| y < x).count() as f64;
        let equal = pooled.iter().filter(|&&y| y == x).count() as f64;
        below + (equal + 1.0) / 2.0
    };
    let mut h = 0.0;
    for g in groups {
        let mean_rank = g.iter().map(|&x| rank(x)).sum::<f64>() / g.len() as f64;
        h += g.len() as f64 * (mean_rank - (n + 1.0) / 2.0).powi(2);
    }
    h *= 12.0 / (n * (n + 1.0));
    let mut seen = Vec::new();
    let mut ties = 0.0;
    for &x in &pooled {
        if !seen.contains(&x) {
            seen.push(x);
            let t = pooled.iter().filter(|&&y| y == x).count() as f64;
            ties += t * t * t - t;
        }
    }
    h / (1.0 - ties / (n * n * n - n))
}

/// Tau-b by explicit pair classification.
fn naive_tau(x: &[f64], y: &[f64]) -> f64 {
    let (mut c, mut d, mut tx, mut ty) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..i {
            let (a, b) = (x[i] - x[j], y[i] - y[j]);
            if a == 0.0 {
                tx += 1.0;
            }
            if b == 0.0 {
                ty += 1.0;
            }
            if a * b > 0.0 {
                c += 1.0;
            } else if a * b < 0.0 {
                d += 1.0;
            }
        }
    }
    let n0 = (x.len() * (x.len() - 1) / 2) as f64;
    (c - d) / ((n0 - tx) * (n0 - ty)).sqrt()
}

fn small_ints(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..6).prop_map(f64::from), 2..max_len)
}

proptest! {
    #[test]
    fn kw_matches_definition(groups in prop::collection::vec(small_ints(10), 2..4)) {
        let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
        let kw = kruskal_wallis(&refs).unwrap();
        let all_equal = groups.iter().flatten().all(|&x| x == groups[0][0]);
        if all_equal {
            prop_assert_eq!((kw.h, kw.p), (0.0, 1.0));
        } else {
            prop_assert!((kw.h - naive_h(&groups)).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&kw.p));
        }
    }

    #[test]
    fn kw_invariances(
        groups in prop::collection::vec(prop::collection::vec(-50.0f64..50.0, 1..8), 2..4),
        shuffle in any::<u64>(),
    ) {
        let refs: Vec<&[f64]> = groups.iter().map(Vec::as_slice).collect();
        let base = kruskal_wallis(&refs).unwrap();
        let transformed: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|x| x.powi(3) + x).collect()).collect();
        let t_refs: Vec<&[f64]> = transformed.iter().map(Vec::as_slice).collect();
        let t = kruskal_wallis(&t_refs).unwrap();
        prop_assert!((base.h - t.h).abs() < 1e-9 && (base.p - t.p).abs() < 1e-12);
        let rotated: Vec<Vec<f64>> = groups.iter().map(|g| {
            let mut g = g.clone();
            let k = (shuffle as usize) % g.len();
            g.rotate_left(k);
            g
        }).collect();
        let r_refs: Vec<&[f64]> = rotated.iter().map(Vec::as_slice).collect();
        prop_assert_eq!(kruskal_wallis(&r_refs).unwrap(), base);
    }

    #[test]
    fn tau_matches_pair_counting(x in small_ints(20), seed in any::<u64>()) {
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| ((seed >> (i % 60)) & 3) as f64 - v).collect();
        match kendall_tau(&x, &y) {
            Ok(tau) => {
                prop_assert!((tau - naive_tau(&x, &y)).abs() < 1e-12);
                let x2: Vec<f64> = x.iter().map(|v| v * v * v + 2.0).collect();
                let y2: Vec<f64> = y.iter().map(|v| (-v).exp()).collect();
                // Decreasing transform of y flips the sign.
                prop_assert!((kendall_tau(&x2, &y2).unwrap() + tau).abs() < 1e-12);
            }
            Err(_) => prop_assert!(naive_tau(&x, &y).is_nan()),
        }
    }

    #[test]
    fn cohens_d_symmetry_shift_and_scale(
        a in prop::collection::vec(-10.0f64..10.0, 2..15),
        b in prop::collection::vec(-10.0f64..10.0, 2..15),
        shift in -100.0f64..100.0,
        scale in 0.1f64..10.0,
    ) {
        let d = cohens_d(&a, &b).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!((cohens_d(&b, &a).unwrap() - d).abs() < 1e-12);
        let shifted = |s: &[f64]| s.iter().map(|x| x + shift).collect::<Vec<_>>();
        prop_assert!((cohens_d(&shifted(&a), &shifted(&b)).unwrap() - d).abs() < 1e-7 * d.max(1.0));
        let scaled = |s: &[f64]| s.iter().map(|x| -x * scale).collect::<Vec<_>>();
        prop_assert!((cohens_d(&scaled(&a), &scaled(&b)).unwrap() - d).abs() < 1e-9 * d.max(1.0));
    }
}
