mod support;

use align_core::stats::{cliffs_delta, kruskal_wallis, mann_whitney_u, spearman};
use proptest::prelude::*;
use support::configs::{grid, splits, two_sample_configs};
use support::oracle::{self, permutations};

const TOL: f64 = 1e-9;

#[test]
fn u_and_delta_match_pair_counts() {
    let configs = two_sample_configs();
    assert!(configs.len() > 4_000);
    for (x, y) in &configs {
        let u = mann_whitney_u(x, y).unwrap();
        assert!((u.statistic - oracle::u_statistic(x, y)).abs() < TOL, "{x:?} {y:?}");
        let d = cliffs_delta(x, y).unwrap();
        assert!((d - oracle::delta(x, y)).abs() < TOL, "{x:?} {y:?}");
    }
}

#[test]
fn h_matches_definition() {
    let mut checked = 0;
    for n in 3..=8usize {
        let distinct: Vec<f64> = (1..=n as u32).map(f64::from).collect();
        // two groups
        for m in 1..n {
            for (a, b) in splits(&distinct, m) {
                let h = kruskal_wallis(&[&a, &b]).unwrap().statistic;
                assert!((h - oracle::h_statistic(&[a.clone(), b.clone()]).unwrap()).abs() < TOL);
                checked += 1;
            }
        }
        // three groups
        for m in 1..n - 1 {
            for (a, rest) in splits(&distinct, m) {
                for k in 1..rest.len() {
                    for (b, c) in splits(&rest, k) {
                        let h = kruskal_wallis(&[&a, &b, &c]).unwrap().statistic;
                        let o = oracle::h_statistic(&[a.clone(), b.clone(), c.clone()]).unwrap();
                        assert!((h - o).abs() < TOL);
                        checked += 1;
                    }
                }
            }
        }
    }
    // ties over two levels
    for n in 3..=6 {
        for m in 1..n {
            for a in grid(m, 2) {
                for b in grid(n - m, 2) {
                    let h = kruskal_wallis(&[&a, &b]).unwrap().statistic;
                    let o = oracle::h_statistic(&[a.clone(), b.clone()]).unwrap_or(0.0);
                    assert!((h - o).abs() < TOL, "{a:?} {b:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn rho_matches_rank_pearson() {
    for n in 3..=8usize {
        let x: Vec<f64> = (1..=n as u32).map(f64::from).collect();
        for order in permutations(n) {
            let y: Vec<f64> = order.iter().map(|&i| i as f64).collect();
            let r = spearman(&x, &y).unwrap().statistic;
            assert!((r - oracle::rho(&x, &y)).abs() < TOL);
        }
    }
    for n in 3..=6 {
        for x in grid(n, 3) {
            for y in grid(n, 2) {
                let constant = |v: &[f64]| v.iter().all(|a| *a == v[0]);
                if constant(&x) || constant(&y) {
                    assert!(spearman(&x, &y).is_err());
                    continue;
                }
                let r = spearman(&x, &y).unwrap().statistic;
                assert!((r - oracle::rho(&x, &y)).abs() < TOL, "{x:?} {y:?}");
            }
        }
    }
}

fn samples() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0u8..12, 1..15),
        prop::collection::vec(0u8..12, 1..15),
    )
        .prop_map(|(x, y)| {
            (
                x.into_iter().map(f64::from).collect(),
                y.into_iter().map(f64::from).collect(),
            )
        })
}

fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((0u8..12, 0u8..12), 3..20).prop_map(|v| {
        v.into_iter()
            .map(|(a, b)| (f64::from(a), f64::from(b)))
            .unzip()
    })
}

fn monotone(v: &[f64]) -> Vec<f64> {
    v.iter().map(|a| a.powi(3) + (a / 3.0).exp()).collect()
}

fn shifted(v: &[f64], c: f64) -> Vec<f64> {
    v.iter().map(|a| a + c).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn two_sample_antisymmetry((x, y) in samples()) {
        let mn = (x.len() * y.len()) as f64;
        let uxy = mann_whitney_u(&x, &y).unwrap();
        let uyx = mann_whitney_u(&y, &x).unwrap();
        prop_assert!((uxy.statistic + uyx.statistic - mn).abs() < TOL);
        prop_assert!((uxy.p() - uyx.p()).abs() < 1e-12);
        prop_assert!((0.0..=mn).contains(&uxy.statistic));
        prop_assert!((0.0..=1.0).contains(&uxy.p()));
        let d = cliffs_delta(&x, &y).unwrap();
        prop_assert!((d + cliffs_delta(&y, &x).unwrap()).abs() < TOL);
        prop_assert!((-1.0..=1.0).contains(&d));
        // delta and U carry the same information
        prop_assert!((d - (2.0 * uxy.statistic / mn - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn two_sample_invariance((x, y) in samples(), c in -50.0f64..50.0) {
        let u = mann_whitney_u(&x, &y).unwrap();
        let d = cliffs_delta(&x, &y).unwrap();
        let h = kruskal_wallis(&[&x, &y]).ok();
        for (a, b) in [(shifted(&x, c), shifted(&y, c)), (monotone(&x), monotone(&y))] {
            prop_assert!((mann_whitney_u(&a, &b).unwrap().statistic - u.statistic).abs() < TOL);
            prop_assert!((cliffs_delta(&a, &b).unwrap() - d).abs() < TOL);
            if let Some(h) = &h {
                let h2 = kruskal_wallis(&[&a, &b]).unwrap();
                prop_assert!((h2.statistic - h.statistic).abs() < 1e-9);
                prop_assert!(h2.statistic >= 0.0);
            }
        }
    }

    #[test]
    fn rho_invariance((x, y) in pairs(), c in -50.0f64..50.0) {
        if let Ok(r) = spearman(&x, &y) {
            prop_assert!((-1.0..=1.0).contains(&r.statistic));
            prop_assert!((0.0..=1.0).contains(&r.p()));
            let shifted = spearman(&shifted(&x, c), &shifted(&y, c)).unwrap();
            prop_assert!((shifted.statistic - r.statistic).abs() < 1e-9);
            let mono = spearman(&monotone(&x), &monotone(&y)).unwrap();
            prop_assert!((mono.statistic - r.statistic).abs() < 1e-9);
            let swapped = spearman(&y, &x).unwrap();
            prop_assert!((swapped.statistic - r.statistic).abs() < 1e-12);
        }
    }
}
