use std::collections::BTreeMap;

use railyard_core::railyard::{covering_weight, enumerate_coverings, DimerCovering};
use railyard_core::sampler::{draw_rng, sample, GrowthSampler, TransferSampler};
use railyard_core::schur_process::pair_product;
use railyard_core::{Letter::*, Partition, RailYardSpec, Sign::*};

/// Upper 0.1% point of χ²(df), Wilson–Hilferty.
fn chi2_critical(df: usize) -> f64 {
    let d = df as f64;
    let z = 3.090232;
    let h = 2.0 / (9.0 * d);
    d * (1.0 - h + z * h.sqrt()).powi(3)
}

/// χ² statistic and degrees of freedom of `draws` against the exact law,
/// lumping coverings with expected count < 5 into one bin.
fn chi2(spec: &RailYardSpec, draws: &[DimerCovering], max_size: u32) -> (f64, usize) {
    let z = pair_product(spec);
    let n = draws.len() as f64;
    let exact: BTreeMap<Vec<Partition>, f64> =
        enumerate_coverings(spec, &Partition::empty(), &Partition::empty(), max_size)
            .into_iter()
            .map(|c| {
                let p = covering_weight(spec, &c) / z;
                (c.into_partitions(), p)
            })
            .collect();
    let mut observed: BTreeMap<Vec<Partition>, f64> = BTreeMap::new();
    for d in draws {
        *observed.entry(d.partitions().to_vec()).or_default() += 1.0;
    }
    let (mut stat, mut bins) = (0.0, 0);
    let (mut rest_e, mut rest_o) = (n, n);
    for (k, p) in &exact {
        let e = p * n;
        if e < 5.0 {
            continue;
        }
        let o = observed.get(k).copied().unwrap_or(0.0);
        stat += (o - e).powi(2) / e;
        bins += 1;
        rest_e -= e;
        rest_o -= o;
    }
    stat += (rest_o - rest_e).powi(2) / rest_e;
    (stat, bins)
}

fn spec() -> RailYardSpec {
    RailYardSpec::build(
        1,
        4,
        &[L, R, R, L],
        &[Plus, Plus, Minus, Minus],
        &[0.3, 0.2, 0.4, 0.5],
    )
    .unwrap()
}

#[test]
fn transfer_sampler_matches_exact_law() {
    let spec = spec();
    let draws = sample(&spec, &Partition::empty(), 2024, 20_000, 30).unwrap();
    let (stat, df) = chi2(&spec, &draws, 6);
    assert!(stat < chi2_critical(df), "χ² = {stat} on {df} df");
}

#[test]
fn growth_sampler_matches_exact_law() {
    let specs = [
        spec(),
        RailYardSpec::build(
            1,
            5,
            &[R, L, R, R, L],
            &[Plus, Plus, Minus, Minus, Minus],
            &[0.5, 0.4, 0.6, 0.5, 0.3],
        )
        .unwrap(),
        RailYardSpec::build(
            1,
            5,
            &[L, R, L, R, L],
            &[Plus, Minus, Plus, Minus, Minus],
            &[0.6, 0.5, 0.4, 0.7, 0.5],
        )
        .unwrap(),
    ];
    for spec in &specs {
        let g = GrowthSampler::new(spec);
        let draws: Vec<_> = (0..20_000).map(|i| g.draw(&mut draw_rng(77, i))).collect();
        let (stat, df) = chi2(spec, &draws, 7);
        assert!(stat < chi2_critical(df), "{spec:?}: χ² = {stat} on {df} df");
    }
}

#[test]
fn column_draw_agrees_with_transfer_law() {
    let spec = RailYardSpec::build(
        1,
        6,
        &[L, R, L, R, L, L],
        &[Plus, Plus, Minus, Plus, Minus, Minus],
        &[0.5; 6],
    )
    .unwrap();
    let g = GrowthSampler::new(&spec);
    for s in 0..50 {
        assert!(g.draw_column(&mut draw_rng(9, s), 0).is_empty());
        assert!(g.draw_column(&mut draw_rng(9, s), 6).is_empty());
    }
    // distributional check on the middle column: mean size
    let t = TransferSampler::new(&spec, &Partition::empty(), 40).unwrap();
    let (mut a, mut b) = (0.0, 0.0);
    let n = 20_000;
    for s in 0..n {
        a += g.draw_column(&mut draw_rng(3, s), 3).size() as f64;
        b += t.draw(&mut draw_rng(4, s)).partitions()[3].size() as f64;
    }
    let (a, b) = (a / n as f64, b / n as f64);
    assert!((a - b).abs() < 0.05 * a.max(b), "{a} vs {b}");
}
