//! The verification suite behind `railyard verify` and the acceptance tests.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use railyard_core::fock::{gamma_apply, FockVector};
use railyard_core::frozenboundary::{
    default_grid, double_dual, double_root_at, singular_parameters, tangency_report,
    trace_double_root, trace_m1, winding_check,
};
use railyard_core::limitshape::{
    density_at_offset, f_pole_sum, f_split, mass, moment, support_bounds, AsymptoticModel,
    ObservationPoint,
};
use railyard_core::piecewise::{
    band_measure, component_grid, component_rank, coset_schur, density_piecewise_at_offset,
    group_function, group_weights, j_function, nonreal_pairs, occupancy, support_piecewise,
    trace_component, CosetMode, PiecewiseBoundary, WeightGroups,
};
use railyard_core::railyard::{covering_weight, enumerate_coverings};
use railyard_core::sampler::{draw_rng, GrowthSampler, TransferSampler};
use railyard_core::schur_process::{
    pair_product, partition_function_product, partition_function_transfer, BoundaryPair,
    ProductVariant,
};
use railyard_core::symfunc::schur;
use railyard_core::{Letter, Partition, RailYardSpec, Sign, Slot};

use crate::commands::curve_distance;
use crate::quad::integrate;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} [{}] {} ({:.1} s): {}",
            self.id, self.name, self.seconds, self.detail
        )
    }
}

fn report(
    id: u8,
    name: &'static str,
    start: Instant,
    checks: Vec<(bool, String)>,
) -> CriterionReport {
    let passed = checks.iter().all(|c| c.0);
    let detail = checks
        .iter()
        .map(|(ok, s)| {
            if *ok {
                s.clone()
            } else {
                format!("FAILED {s}")
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    CriterionReport {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        partition_function_oracles(),
        commutation(),
        sampler_exactness(),
        staircase_moments(),
        frozen_boundary_three_slot(),
        dual_involution(),
        slope_two_staircase(),
        coset_formula(),
        piecewise_frozen_boundary(),
        density_sanity(),
    ]
}

/// Models shared by the criteria and the CLI tests.
pub mod models {
    use super::*;

    /// Four columns L+, R+, R−, L− with weights 0.3, 0.2, 0.4, 0.5.
    pub fn reference_spec() -> RailYardSpec {
        RailYardSpec::build(
            1,
            4,
            &[Letter::L, Letter::R, Letter::R, Letter::L],
            &[Sign::Plus, Sign::Plus, Sign::Minus, Sign::Minus],
            &[0.3, 0.2, 0.4, 0.5],
        )
        .expect("reference spec is admissible")
    }

    pub fn three_slot_period() -> Vec<Slot> {
        vec![
            Slot::new(Letter::L, Sign::Minus, 1.0 / 3.0),
            Slot::new(Letter::R, Sign::Plus, 0.5),
            Slot::new(Letter::L, Sign::Plus, 1.0),
        ]
    }

    /// One segment, period (L−, 1/3), (R+, 1/2), (L+, 1).
    pub fn three_slot_model() -> AsymptoticModel {
        AsymptoticModel::periodic(vec![0.0, 1.0], vec![three_slot_period()]).expect("admissible")
    }

    /// The three-slot period repeated over `n` columns.
    pub fn three_slot_graph(n: usize) -> RailYardSpec {
        let p = three_slot_period();
        RailYardSpec::from_slots(1, (0..n).map(|i| p[i % 3]).collect()).expect("admissible")
    }

    pub fn two_segment_model() -> AsymptoticModel {
        AsymptoticModel::periodic(
            vec![0.0, 0.3, 1.0],
            vec![
                vec![
                    Slot::new(Letter::L, Sign::Minus, 1.0 / 3.0),
                    Slot::new(Letter::R, Sign::Plus, 0.5),
                ],
                vec![
                    Slot::new(Letter::L, Sign::Minus, 1.0),
                    Slot::new(Letter::R, Sign::Plus, 1.0 / 6.0),
                    Slot::new(Letter::L, Sign::Plus, 0.2),
                ],
            ],
        )
        .expect("admissible")
    }

    /// Vanishing (L,−) weight of the lighter group, as used by samplers.
    pub const TINY_WEIGHT: f64 = 1e-8;

    /// Four slots (L−, 1), (R+, 1/2), (L+, 1/3), (L−, tiny) over five
    /// blocks at levels 6N, 5N, 2N, N, 0 with N = 120 rows.
    pub fn two_group_model() -> (AsymptoticModel, PiecewiseBoundary, WeightGroups) {
        let model = AsymptoticModel::periodic(
            vec![0.0, 1.0],
            vec![vec![
                Slot::new(Letter::L, Sign::Minus, 1.0),
                Slot::new(Letter::R, Sign::Plus, 0.5),
                Slot::new(Letter::L, Sign::Plus, 1.0 / 3.0),
                Slot::new(Letter::L, Sign::Minus, TINY_WEIGHT),
            ]],
        )
        .expect("admissible");
        let n = 120u32;
        let b = PiecewiseBoundary::from_blocks(
            vec![6 * n, 5 * n, 2 * n, n, 0],
            vec![30, 30, 20, 20, 20],
        )
        .expect("valid blocks");
        let g = group_weights(&model, &b).expect("groups align with blocks");
        (model, b, g)
    }

    /// Closed form of the three-slot frozen boundary over the slope-`m`
    /// staircase, m ∈ {1, 2}.
    pub fn three_slot_closed(u: f64, m: u32) -> (f64, f64) {
        let extra = if m == 2 {
            1.0 / (3.0 * u + 1.0).powi(2)
        } else {
            0.0
        };
        let a = 1.0 / (3.0 * u - 1.0).powi(2);
        let den = a + 2.0 / (3.0 * (u + 2.0).powi(2)) + 1.0 / (3.0 * (1.0 - u).powi(2));
        let chi = (a - extra) / den;
        let mut kappa = (1.0 - chi) * u / (3.0 * u - 1.0)
            + chi * (u / (3.0 * (u + 2.0)) + u / (3.0 * (1.0 - u)));
        if m == 2 {
            kappa += u / (3.0 * u + 1.0);
        }
        (chi, kappa)
    }
}

use models::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

// --------------------------------------------------------------------- 1

/// Random spec with `cols` columns admitting the given product form.
fn random_spec(rng: &mut ChaCha8Rng, variant: ProductVariant) -> RailYardSpec {
    let cols = rng.gen_range(1..=5);
    let forbidden = match variant {
        ProductVariant::LeftMinus => Letter::R,
        ProductVariant::RightMinus => Letter::L,
    };
    let slots = (0..cols)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let letter = if sign == Sign::Minus {
                if forbidden == Letter::R {
                    Letter::L
                } else {
                    Letter::R
                }
            } else if rng.gen_bool(0.5) {
                Letter::L
            } else {
                Letter::R
            };
            Slot::new(letter, sign, rng.gen_range(0.05..0.5))
        })
        .collect();
    RailYardSpec::from_slots(rng.gen_range(-3..3), slots).expect("weights ≤ 0.5 satisfy the bound")
}

pub fn partition_function_oracles() -> CriterionReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let small: Vec<Partition> = Partition::all_up_to(4);
    let mut cases = Vec::new();
    for k in 0..30 {
        let variant = if k % 2 == 0 {
            ProductVariant::LeftMinus
        } else {
            ProductVariant::RightMinus
        };
        let spec = random_spec(&mut rng, variant);
        let carriers = spec
            .slots()
            .iter()
            .filter(|s| s.sign == Sign::Minus)
            .count();
        // the boundary must fit the carrying − slots (λ rows, or λ′ rows)
        let fits: Vec<&Partition> = small
            .iter()
            .filter(|p| match variant {
                ProductVariant::LeftMinus => p.len() <= carriers,
                ProductVariant::RightMinus => p.part(0) as usize <= carriers,
            })
            .collect();
        let left = fits[rng.gen_range(0..fits.len())].clone();
        cases.push((spec, left, variant));
    }
    let results: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|(spec, left, variant)| {
            let t = partition_function_transfer(
                spec,
                &BoundaryPair::new(left.clone(), Partition::empty()),
                40,
            );
            let p = partition_function_product(spec, left, *variant)
                .expect("variant matches the slot pattern");
            (t, p)
        })
        .collect();
    let worst = results.iter().map(|&(t, p)| rel(t, p)).fold(0.0, f64::max);
    let nonempty = cases.iter().filter(|c| !c.1.is_empty()).count();
    let spec = reference_spec();
    let t = partition_function_transfer(&spec, &BoundaryPair::empty(), 40);
    let p = pair_product(&spec);
    let closed = 1.12 * 1.10 / (0.85 * 0.92);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "partition-function oracle equivalence",
        start,
        vec![
            (worst < 1e-8, format!("{} random specs ({nonempty} with nonempty boundary), worst relative gap {worst:.2e}", cases.len())),
            (
                rel(t, p) < 1e-8 && rel(p, closed) < 1e-14 && (p - 1.575448).abs() < 5e-7,
                format!("reference spec transfer {t:.9}, product {p:.9}"),
            ),
            (elapsed < 10.0, format!("runtime {elapsed:.2} s")),
        ],
    )
}

// --------------------------------------------------------------------- 2

pub fn commutation() -> CriterionReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let cap = 40;
    let horizon = 16;
    let basis: Vec<Partition> = Partition::all_up_to(3);
    let mut worst = 0.0f64;
    let mut worst_same_sign = 0.0f64;
    let mut checks = 0;
    for a1 in [Letter::L, Letter::R] {
        for a2 in [Letter::L, Letter::R] {
            for _ in 0..10 {
                let (x1, x2): (f64, f64) = (rng.gen_range(0.05..0.5), rng.gen_range(0.05..0.5));
                let factor = if a1 == a2 {
                    1.0 / (1.0 - x1 * x2)
                } else {
                    1.0 + x1 * x2
                };
                for lam in &basis {
                    let v = FockVector::basis(lam.clone(), cap);
                    let left =
                        gamma_apply(a1, Sign::Plus, x1, &gamma_apply(a2, Sign::Minus, x2, &v));
                    let mut right =
                        gamma_apply(a2, Sign::Minus, x2, &gamma_apply(a1, Sign::Plus, x1, &v));
                    right.scale(factor);
                    worst = worst.max(left.max_diff_below(&right, horizon));
                    // same-sign products move size one way only, so the
                    // coefficients below the horizon are exact at cap = horizon
                    let w = FockVector::basis(lam.clone(), horizon);
                    for s in [Sign::Plus, Sign::Minus] {
                        let v = &w;
                        let ab = gamma_apply(a1, s, x1, &gamma_apply(a2, s, x2, v));
                        let ba = gamma_apply(a2, s, x2, &gamma_apply(a1, s, x1, v));
                        worst_same_sign = worst_same_sign.max(ab.max_diff_below(&ba, horizon));
                    }
                    checks += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "commutation relations",
        start,
        vec![
            (worst < 1e-12, format!("{checks} (letter pair, weights, basis vector) cases, worst coefficient gap {worst:.2e} below size {horizon}")),
            (worst_same_sign < 1e-12, format!("same-sign gap {worst_same_sign:.2e}")),
            (elapsed < 5.0, format!("runtime {elapsed:.2} s")),
        ],
    )
}

// --------------------------------------------------------------------- 3

/// χ² statistic and degrees of freedom of sampled coverings against the
/// exact law on coverings with every |λ| ≤ `max_size`; coverings with
/// expected count < 5 and everything outside the enumeration share one bin.
pub fn chi_square(spec: &RailYardSpec, draws: &[Vec<Partition>], max_size: u32) -> (f64, usize) {
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
    let mut observed: BTreeMap<&[Partition], f64> = BTreeMap::new();
    for d in draws {
        *observed.entry(d.as_slice()).or_default() += 1.0;
    }
    let (mut stat, mut bins) = (0.0, 0);
    let (mut rest_e, mut rest_o) = (n, n);
    for (k, p) in &exact {
        let e = p * n;
        if e < 5.0 {
            continue;
        }
        let o = observed.get(k.as_slice()).copied().unwrap_or(0.0);
        stat += (o - e).powi(2) / e;
        bins += 1;
        rest_e -= e;
        rest_o -= o;
    }
    stat += (rest_o - rest_e).powi(2) / rest_e;
    (stat, bins)
}

pub fn sampler_exactness() -> CriterionReport {
    let start = Instant::now();
    let spec = reference_spec();
    let sampler =
        TransferSampler::new(&spec, &Partition::empty(), 40).expect("empty boundary fits");
    let n = 100_000u64;
    let draws: Vec<Vec<Partition>> = (0..n)
        .into_par_iter()
        .map(|i| {
            sampler
                .draw(&mut draw_rng(0x5eed_0003, i))
                .into_partitions()
        })
        .collect();
    let (stat, df) = chi_square(&spec, &draws, 6);
    let critical = ChiSquared::new(df as f64)
        .expect("df > 0")
        .inverse_cdf(0.99);
    // conditional laws along the first draws sum to one
    let mut worst_sum = 0.0f64;
    for d in draws.iter().take(2000) {
        for (i, lam) in d.iter().take(spec.len()).enumerate() {
            let s: f64 = sampler.step_probabilities(i, lam).iter().map(|p| p.1).sum();
            worst_sum = worst_sum.max((s - 1.0).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        "sampler exactness",
        start,
        vec![
            (
                stat < critical,
                format!("χ² = {stat:.2} on {df} df, 0.01 critical value {critical:.2}, {n} draws"),
            ),
            (
                worst_sum < 1e-12,
                format!("step probabilities sum to 1 within {worst_sum:.1e}"),
            ),
            (elapsed < 60.0, format!("runtime {elapsed:.1} s")),
        ],
    )
}

// --------------------------------------------------------------------- 4

/// Moments of the atoms (λ_j + n − j + ½)/N, j ≤ n, each of mass 1/N.
fn shifted_moments(lambda: &Partition, n: usize, big_n: f64, ks: &[u32]) -> Vec<f64> {
    ks.iter()
        .map(|&k| {
            (1..=n)
                .map(|j| {
                    ((lambda.part(j - 1) as f64 + (n - j) as f64 + 0.5) / big_n).powi(k as i32)
                })
                .sum::<f64>()
                / big_n
        })
        .collect()
}

pub fn staircase_moments() -> CriterionReport {
    let start = Instant::now();
    let n_slots = 80;
    let spec = three_slot_graph(n_slots);
    let sampler = GrowthSampler::new(&spec);
    let ks = [1u32, 2, 3];
    let draws = 10_000u64;
    let mut checks = Vec::new();
    for left in [20usize, 40, 60] {
        let t = spec.l() + left as i64;
        let (model, pt) = AsymptoticModel::from_finite(&spec, t).expect("column inside the graph");
        let n = spec.slots()[left..]
            .iter()
            .filter(|s| s.letter == Letter::L && s.sign == Sign::Minus)
            .count();
        let samples: Vec<Vec<f64>> = (0..draws)
            .into_par_iter()
            .map(|d| {
                shifted_moments(
                    &sampler.draw_column(&mut draw_rng(0x5eed_0004 + left as u64, d), left),
                    n,
                    n_slots as f64,
                    &ks,
                )
            })
            .collect();
        for (i, &k) in ks.iter().enumerate() {
            let mean = samples.iter().map(|v| v[i]).sum::<f64>() / draws as f64;
            let var =
                samples.iter().map(|v| (v[i] - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
            let se = (var / draws as f64).sqrt();
            match moment(&model, pt, 1, k) {
                Ok(exact) => {
                    let z = (mean - exact.value) / se;
                    checks.push((
                        z.abs() <= 3.0 && exact.self_error < 1e-9,
                        format!("χ={:.2} k={k}: {mean:.6}±{se:.1e} vs {:.6} (z={z:.2}, self-error {:.1e})", pt.chi(&model), exact.value, exact.self_error),
                    ));
                }
                Err(e) => checks.push((false, format!("χ={:.2} k={k}: {e}", pt.chi(&model)))),
            }
        }
    }
    report(4, "staircase limit moments", start, checks)
}

// --------------------------------------------------------------------- 5

pub fn frozen_boundary_three_slot() -> CriterionReport {
    let start = Instant::now();
    let model = three_slot_model();
    let mut checks = Vec::new();
    let (chi_c, kappa_c) = three_slot_closed(2.0, 1);
    match trace_m1(&model, &[2.0]) {
        Ok(c) if c.samples.len() == 1 => {
            let s = c.samples[0];
            let ok = (s.chi - chi_c).abs() < 1e-9
                && (s.kappa - kappa_c).abs() < 1e-9
                && (s.chi - 0.096386).abs() < 5e-7
                && (s.kappa - 0.313253).abs() < 5e-7;
            checks.push((
                ok,
                format!(
                    "(χ(2), κ(2)) = ({:.9}, {:.9}), closed form ({chi_c:.9}, {kappa_c:.9})",
                    s.chi, s.kappa
                ),
            ));
        }
        other => checks.push((false, format!("trace at u = 2 gave {other:?}"))),
    }
    // the traced curve agrees with the closed form at every sample
    let grid = default_grid(&singular_parameters(&model, 1).unwrap_or_default(), 400);
    match trace_m1(&model, &grid) {
        Ok(c) => {
            let worst = c
                .samples
                .iter()
                .map(|s| {
                    let (x, y) = three_slot_closed(s.u, 1);
                    ((s.chi - x).abs() + (s.kappa - y).abs()) / (1.0 + y.abs())
                })
                .fold(0.0, f64::max);
            checks.push((
                worst < 1e-9,
                format!(
                    "{} traced samples, worst closed-form gap {worst:.1e}",
                    c.samples.len()
                ),
            ));
        }
        Err(e) => checks.push((false, format!("trace failed: {e}"))),
    }
    match tangency_report(&model) {
        Ok(t) => checks.push((
            (t.chi0, t.chi1, t.rank) == (2, 1, 3),
            format!(
                "tangency ({} on χ=0, {} on χ=1, rank {})",
                t.chi0, t.chi1, t.rank
            ),
        )),
        Err(e) => checks.push((false, format!("tangency: {e}"))),
    }
    match winding_check(&model, 200, 0x5eed_0005) {
        Ok(w) => checks.push((
            w.passed,
            format!(
                "winding on {} lines: min {} finite intersections, rank {}",
                w.lines, w.min_finite, w.rank
            ),
        )),
        Err(e) => checks.push((false, format!("winding: {e}"))),
    }
    let elapsed = start.elapsed().as_secs_f64();
    checks.push((elapsed < 10.0, format!("runtime {elapsed:.2} s")));
    report(5, "three-slot frozen boundary", start, checks)
}

// --------------------------------------------------------------------- 6

pub fn dual_involution() -> CriterionReport {
    let start = Instant::now();
    let model = three_slot_model();
    let mut checks = Vec::new();
    for m in [1u32, 2] {
        let (base, slope) = f_split(&model, 1, m).expect("single segment");
        let sing = singular_parameters(&model, m).unwrap_or_default();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006 + m as u64);
        let (mut checked, mut worst, mut tries) = (0, 0.0f64, 0);
        while checked < 1000 && tries < 100_000 {
            tries += 1;
            let u: f64 = rng.gen_range(-10.0..10.0);
            if sing.iter().any(|p| (p - u).abs() < 1e-3) {
                continue;
            }
            let Ok(d) = double_root_at(&model, 1, &base, &slope, u) else {
                continue;
            };
            if !(0.0..=1.0).contains(&d.alpha) {
                continue;
            }
            let Ok((chi, kappa)) = double_dual(&d.jet) else {
                continue;
            };
            let scale = 1.0 + d.jet.chi[0].abs() + d.jet.kappa[0].abs();
            worst =
                worst.max(((chi - d.jet.chi[0]).abs()).max((kappa - d.jet.kappa[0]).abs()) / scale);
            checked += 1;
        }
        checks.push((
            checked == 1000 && worst < 1e-8,
            format!("slope {m}: {checked} samples, worst gap {worst:.1e}"),
        ));
    }
    report(6, "dual-curve involution", start, checks)
}

// --------------------------------------------------------------------- 7

pub fn slope_two_staircase() -> CriterionReport {
    let start = Instant::now();
    let model = three_slot_model();
    let mut checks = Vec::new();
    let (base, slope) = f_split(&model, 1, 2).expect("single segment");
    let grid = default_grid(&singular_parameters(&model, 2).unwrap_or_default(), 400);
    match trace_double_root(&model, &grid, 2) {
        Ok(curve) => {
            let mut worst = 0.0f64;
            for s in &curve.samples {
                let z = Complex64::new(s.u, 0.0);
                let f = base.eval(z).re + s.chi * slope.eval(z).re;
                let df = base.derivative(1, z).re + s.chi * slope.derivative(1, z).re;
                let r = ((f - s.kappa).abs() / (1.0 + s.kappa.abs()))
                    .max(df.abs() / (1.0 + base.derivative(1, z).norm()));
                worst = worst.max(r);
            }
            checks.push((
                worst < 1e-8,
                format!(
                    "{} traced samples, worst double-root residual {worst:.1e}",
                    curve.samples.len()
                ),
            ));
        }
        Err(e) => checks.push((false, format!("trace failed: {e}"))),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut checked, mut worst, mut tries) = (0, 0.0f64, 0);
    while checked < 100 && tries < 100_000 {
        tries += 1;
        let u: f64 = rng.gen_range(-8.0..8.0);
        let Ok(d) = double_root_at(&model, 1, &base, &slope, u) else {
            continue;
        };
        if !(0.0..=1.0).contains(&d.alpha) {
            continue;
        }
        let (chi, kappa) = three_slot_closed(u, 2);
        let scale = 1.0 + chi.abs().max(kappa.abs());
        worst = worst.max(
            (d.jet.chi[0] - chi)
                .abs()
                .max((d.jet.kappa[0] - kappa).abs())
                / scale,
        );
        checked += 1;
    }
    checks.push((
        checked == 100 && worst < 1e-8,
        format!("closed form at {checked} random u, worst gap {worst:.1e}"),
    ));
    report(7, "slope-two staircase", start, checks)
}

// --------------------------------------------------------------------- 8

/// Class label of each of `n` variables: `k` consecutive classes of sizes
/// as even as possible, heaviest first.
fn classes(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|j| j * k / n).collect()
}

pub fn coset_formula() -> CriterionReport {
    let start = Instant::now();
    let all = Partition::all_up_to(10);
    let mut checks = Vec::new();
    // full sum against Jacobi–Trudi
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=6usize {
        for k in 2..=3usize.min(n) {
            let values: &[f64] = if k == 2 {
                &[0.7, 0.3]
            } else {
                &[0.9, 0.5, 0.2]
            };
            let cls = classes(n, k);
            let x: Vec<f64> = cls.iter().map(|&c| values[c]).collect();
            let u: Vec<f64> = (0..n)
                .map(|j| 1.0 + 0.013 * (j as f64 + 1.0) * if j % 2 == 0 { 1.0 } else { -1.0 })
                .collect();
            let w: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a * b).collect();
            for lam in all.iter().filter(|l| l.len() <= n) {
                let want = schur(lam, &w);
                match coset_schur(lam, &x, &u, CosetMode::Full) {
                    Ok(got) => worst = worst.max(rel(got, want)),
                    Err(_) => worst = f64::INFINITY,
                }
                count += 1;
            }
        }
    }
    checks.push((
        worst < 1e-10,
        format!("{count} (λ, N, classes) cases, worst relative gap to Jacobi–Trudi {worst:.1e}"),
    ));
    // dominant term at weight ratio 1e4, on λ with a drop at each class
    // boundary (without one the neglected terms are only 1/ratio smaller)
    let mut worst_dom = 0.0f64;
    let mut dom_count = 0;
    for n in 2..=6usize {
        for k in 2..=3usize.min(n) {
            let cls = classes(n, k);
            let x: Vec<f64> = cls.iter().map(|&c| 1e-4f64.powi(c as i32)).collect();
            let u: Vec<f64> = (0..n).map(|j| 1.0 + 0.011 * (j as f64 + 1.0)).collect();
            for lam in all.iter().filter(|l| l.len() <= n) {
                let drops = (1..n)
                    .filter(|&j| cls[j] != cls[j - 1])
                    .all(|j| lam.part(j - 1) > lam.part(j));
                if !drops {
                    continue;
                }
                let (Ok(full), Ok(dom)) = (
                    coset_schur(lam, &x, &u, CosetMode::Full),
                    coset_schur(lam, &x, &u, CosetMode::Dominant),
                ) else {
                    worst_dom = f64::INFINITY;
                    continue;
                };
                worst_dom = worst_dom.max(rel(dom, full));
                dom_count += 1;
            }
        }
    }
    checks.push((
        worst_dom < 1e-6,
        format!("dominant term on {dom_count} cases, worst relative gap {worst_dom:.1e}"),
    ));
    report(8, "coset Schur formula", start, checks)
}

// --------------------------------------------------------------------- 9

/// Displayed Φ of the two groups.
fn displayed_phi(i: usize, t: f64) -> f64 {
    if i == 0 {
        (t - 11.0) * (t - 13.5) / ((t - 11.5) * (t - 14.0))
    } else {
        t * (t - 7.0 / 3.0) * (t - 14.0 / 3.0) / ((t - 1.0 / 3.0) * (t - 8.0 / 3.0) * (t - 5.0))
    }
}

/// Displayed J of the two groups, written in terms of the displayed Φ.
fn displayed_j(i: usize, t: f64) -> f64 {
    let p = displayed_phi(i, t);
    if i == 0 {
        p / 4.0 * (2.0 / (2.0 + p) + 3.0 / (3.0 - p) - 1.0 / (p - 1.0)) - 0.25
    } else {
        -p / (4.0 * (p - 1.0)) - 0.25
    }
}

pub fn piecewise_frozen_boundary() -> CriterionReport {
    let start = Instant::now();
    let (model, boundary, groups) = two_group_model();
    let mut checks = Vec::new();
    let ts = [-3.0, 0.2, 1.7, 3.9, 7.0, 11.2, 12.0, 13.8, 20.0];
    // band measures against the displayed rational functions
    let mut phi_gap = 0.0f64;
    for i in 0..2 {
        match band_measure(&boundary, &groups, i) {
            Ok(b) => {
                for &t in &ts {
                    let v = b
                        .phi(Complex64::new(t, 0.0))
                        .map(|z| z.re)
                        .unwrap_or(f64::NAN);
                    phi_gap = phi_gap.max(rel(v, displayed_phi(i, t)));
                }
            }
            Err(_) => phi_gap = f64::INFINITY,
        }
    }
    checks.push((
        phi_gap < 1e-12,
        format!("Φ₁, Φ₂ match the displayed factors, worst relative gap {phi_gap:.1e}"),
    ));
    let mut j_gap = [0.0f64; 2];
    for (i, gap) in j_gap.iter_mut().enumerate() {
        for &t in &ts {
            let v = j_function(&model, &groups, &boundary, i, t)
                .map(|j| j.0)
                .unwrap_or(f64::NAN);
            *gap = gap.max(rel(v, displayed_j(i, t)));
        }
    }
    checks.push((
        j_gap[0] < 1e-12 && j_gap[1] < 1e-12,
        format!(
            "J₁, J₂ from the general group formula vs the displayed J₁, J₂: worst relative gaps {:.1e}, {:.1e} (the displays carry numerators 2, 3 and an extra −1/4 that the general formula does not produce)",
            j_gap[0], j_gap[1]
        ),
    ));
    // components: bounded, apart, ranks
    let mut curves = Vec::new();
    for i in 0..groups.len() {
        let traced = component_grid(&model, &groups, &boundary, i, 200)
            .and_then(|g| trace_component(&model, &groups, &boundary, i, &g));
        match traced {
            Ok(c) => {
                let bx = c.bounding_box();
                let bounded = c
                    .samples
                    .iter()
                    .all(|s| s.kappa.abs() <= 1e6 && s.kappa.is_finite());
                checks.push((
                    bounded && !c.samples.is_empty(),
                    format!(
                        "component {}: {} samples in box χ∈[{:.3}, {:.3}], κ∈[{:.3}, {:.3}]",
                        i + 1,
                        c.samples.len(),
                        bx.0,
                        bx.1,
                        bx.2,
                        bx.3
                    ),
                ));
                curves.push(c);
            }
            Err(e) => checks.push((false, format!("component {}: {e}", i + 1))),
        }
        match component_rank(&model, &groups, &boundary, i) {
            Ok((p, c)) => checks.push((
                p == c,
                format!("component {} rank predicted {p}, counted {c}", i + 1),
            )),
            Err(e) => checks.push((false, format!("rank {}: {e}", i + 1))),
        }
    }
    if curves.len() == 2 {
        let d = curve_distance(&curves[0], &curves[1]);
        checks.push((d > 0.0, format!("components disjoint, min distance {d:.4}")));
    }
    // at most one nonreal pair per group on a κ grid
    let mut worst_pairs = 0;
    let mut grid_points = 0;
    for alpha in [0.1, 0.5, 0.9] {
        let pt = ObservationPoint { p_t: 1, alpha };
        let Ok((lo, hi)) = support_piecewise(&model, pt, &groups, &boundary) else {
            worst_pairs = usize::MAX;
            continue;
        };
        for i in 0..groups.len() {
            let Ok(gf) = group_function(&model, &groups, &boundary, i, 1) else {
                worst_pairs = usize::MAX;
                continue;
            };
            for k in 0..1000 {
                let kappa = lo - 0.5 + (hi - lo + 1.0) * k as f64 / 999.0;
                worst_pairs =
                    worst_pairs.max(nonreal_pairs(&gf, alpha, kappa).unwrap_or(usize::MAX));
                grid_points += 1;
            }
        }
    }
    checks.push((
        worst_pairs <= 1,
        format!("at most {worst_pairs} nonreal pair over {grid_points} (α, group, κ) points"),
    ));
    if let Some(g) = boundary.min_level_gap() {
        checks.push((true, format!("min level gap {g:.3}")));
    }
    let elapsed = start.elapsed().as_secs_f64();
    checks.push((elapsed < 60.0, format!("runtime {elapsed:.1} s")));
    report(9, "piecewise frozen boundary", start, checks)
}

// -------------------------------------------------------------------- 10

/// A limit model at one column, with its density before clamping.
struct DensityCase {
    name: String,
    model: AsymptoticModel,
    pt: ObservationPoint,
    slope: u32,
    piecewise: Option<(PiecewiseBoundary, WeightGroups)>,
}

impl DensityCase {
    fn raw_at(&self, kappa: f64, delta: f64) -> Result<f64, railyard_core::Error> {
        match &self.piecewise {
            Some((b, g)) => density_piecewise_at_offset(&self.model, self.pt, g, b, kappa, delta),
            None => density_at_offset(&self.model, self.pt, self.slope, kappa, delta),
        }
    }

    /// Richardson limit δ → 0, unclamped.
    fn raw(&self, kappa: f64) -> Result<f64, railyard_core::Error> {
        let d = 1e-6 * (1.0 + kappa.abs());
        let g1 = self.raw_at(kappa, d)?;
        let g2 = self.raw_at(kappa, d / 2.0)?;
        let g4 = self.raw_at(kappa, d / 4.0)?;
        Ok((8.0 * g4 - 6.0 * g2 + g1) / 3.0)
    }

    fn support(&self) -> Result<(f64, f64), railyard_core::Error> {
        match &self.piecewise {
            Some((b, g)) => support_piecewise(&self.model, self.pt, g, b),
            None => support_bounds(&self.model, self.pt, self.slope),
        }
    }

    fn mass(&self) -> Result<f64, railyard_core::Error> {
        match &self.piecewise {
            Some((_, g)) => (0..g.len())
                .map(|i| occupancy(&self.model, self.pt, g, i).map(|o| o.gamma))
                .sum(),
            None => mass(&self.model, self.pt),
        }
    }

    /// Whether some root of the column equation at κ is nonreal.
    fn liquid(&self, kappa: f64) -> bool {
        match &self.piecewise {
            Some((b, g)) => (0..g.len()).any(|i| {
                occupancy(&self.model, self.pt, g, i).is_ok_and(|o| o.gamma > 1e-14)
                    && group_function(&self.model, g, b, i, self.pt.p_t)
                        .and_then(|gf| nonreal_pairs(&gf, self.pt.alpha, kappa))
                        .is_ok_and(|n| n > 0)
            }),
            None => f_pole_sum(&self.model, self.pt, self.slope)
                .and_then(|f| f.solve(Complex64::new(kappa, 0.0)))
                .is_ok_and(|r| r.iter().any(|z| z.im.abs() > 1e-6 * (1.0 + z.re.abs()))),
        }
    }

    /// κ where the traced frozen boundary crosses the column.
    fn crossings(&self) -> Vec<f64> {
        let chi0 = self.pt.chi(&self.model);
        let mut out = Vec::new();
        let mut scan = |point: &dyn Fn(f64) -> Option<(f64, f64)>, sing: &[f64]| {
            let grid = default_grid(sing, 400);
            for w in grid.windows(2) {
                if sing.iter().any(|&p| w[0] < p && p < w[1]) {
                    continue;
                }
                let (Some(a), Some(b)) = (point(w[0]), point(w[1])) else {
                    continue;
                };
                if (a.0 - chi0).signum() == (b.0 - chi0).signum() || (a.1 - b.1).abs() > 0.5 {
                    continue;
                }
                let (mut lo, mut hi, sa) = (w[0], w[1], (a.0 - chi0).signum());
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    match point(mid) {
                        Some(p) if (p.0 - chi0).signum() == sa => lo = mid,
                        Some(_) => hi = mid,
                        None => break,
                    }
                }
                if let Some(p) = point(0.5 * (lo + hi)) {
                    out.push(p.1);
                }
            }
        };
        match &self.piecewise {
            Some((b, g)) => {
                for i in 0..g.len() {
                    let Ok(gf) = group_function(&self.model, g, b, i, self.pt.p_t) else {
                        continue;
                    };
                    let sing = gf.singular_parameters().unwrap_or_default();
                    let rt = gf.rho_theta;
                    scan(
                        &|t| {
                            let (_, j) = gf.jets(t).ok()?;
                            let chi = -rt / j[1];
                            ((0.0..=1.0).contains(&chi)).then(|| (chi, rt * t - rt * j[0] / j[1]))
                        },
                        &sing,
                    );
                }
            }
            None => {
                let p_t = self.pt.p_t;
                let Ok((base, slope)) = f_split(&self.model, p_t, self.slope) else {
                    return out;
                };
                let sing = singular_parameters(&self.model, self.slope).unwrap_or_default();
                scan(
                    &|u| {
                        let d = double_root_at(&self.model, p_t, &base, &slope, u).ok()?;
                        ((0.0..=1.0).contains(&d.alpha)).then(|| (d.jet.chi[0], d.jet.kappa[0]))
                    },
                    &sing,
                );
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

fn density_cases() -> Vec<DensityCase> {
    let mut cases = Vec::new();
    let three = three_slot_model();
    for (chi, m) in [(0.25, 1), (0.5, 1), (0.75, 1), (0.5, 2)] {
        cases.push(DensityCase {
            name: format!("three-slot χ={chi} slope {m}"),
            pt: ObservationPoint::from_chi(&three, chi).expect("inside"),
            model: three.clone(),
            slope: m,
            piecewise: None,
        });
    }
    let two = two_segment_model();
    for chi in [0.15, 0.6] {
        cases.push(DensityCase {
            name: format!("two-segment χ={chi}"),
            pt: ObservationPoint::from_chi(&two, chi).expect("inside"),
            model: two.clone(),
            slope: 1,
            piecewise: None,
        });
    }
    let (model, b, g) = two_group_model();
    for alpha in [0.1, 0.5, 0.9] {
        cases.push(DensityCase {
            name: format!("two-group piecewise χ={alpha}"),
            pt: ObservationPoint { p_t: 1, alpha },
            model: model.clone(),
            slope: 1,
            piecewise: Some((b.clone(), g.clone())),
        });
    }
    cases
}

pub fn density_sanity() -> CriterionReport {
    let start = Instant::now();
    let cases = density_cases();
    let checks: Vec<(bool, String)> = cases
        .par_iter()
        .map(|c| {
            let Ok((lo, hi)) = c.support() else { return (false, format!("{}: no support", c.name)) };
            let pad = 0.1 * (hi - lo);
            let grid: Vec<f64> = (0..1000).map(|j| lo - pad + (hi - lo + 2.0 * pad) * j as f64 / 999.0).collect();
            let (mut below, mut above) = (0.0f64, 0.0f64);
            for &k in &grid {
                match c.raw(k) {
                    Ok(v) => {
                        below = below.min(v);
                        above = above.max(v);
                    }
                    Err(e) => return (false, format!("{}: density failed at κ = {k}: {e}", c.name)),
                }
            }
            let in_range = below > -1e-6 && above < 1.0 + 1e-6;
            let failed = std::sync::atomic::AtomicBool::new(false);
            let total = integrate(
                |k| {
                    c.raw(k).map(|v| v.clamp(0.0, 1.0)).unwrap_or_else(|_| {
                        failed.store(true, std::sync::atomic::Ordering::Relaxed);
                        0.0
                    })
                },
                lo,
                hi,
                64,
                1e-6,
            );
            let mass = c.mass().unwrap_or(f64::NAN);
            let ratio = total / mass;
            let integral_ok = !failed.into_inner() && (ratio - 1.0).abs() < 1e-3;
            // one-sided values at the traced crossings: the side without
            // nonreal roots is frozen and must sit at 0 or 1
            let offset = 1e-3;
            let (mut worst_frozen, mut worst_liquid, mut resolved, mut unresolved) = (0.0f64, 0.0f64, 0, 0);
            let crossings = c.crossings();
            for &k in &crossings {
                let (ll, rl) = (c.liquid(k - offset), c.liquid(k + offset));
                if ll == rl {
                    // same phase on both sides: a sliver thinner than the offset, as near a cusp
                    unresolved += 1;
                    continue;
                }
                let (frozen_at, liquid_at) = if ll { (k + offset, k - offset) } else { (k - offset, k + offset) };
                let (Ok(fv), Ok(lv)) = (c.raw(frozen_at), c.raw(liquid_at)) else {
                    worst_frozen = f64::INFINITY;
                    continue;
                };
                let target = fv.round().clamp(0.0, 1.0);
                worst_frozen = worst_frozen.max((fv - target).abs());
                worst_liquid = worst_liquid.max((lv - target).abs());
                resolved += 1;
            }
            let sides_ok = resolved > 0 && worst_frozen <= 0.02;
            (
                in_range && integral_ok && sides_ok,
                format!(
                    "{}: range [{below:.1e}, {:.6}], ∫f/mass = {ratio:.7}, {resolved} crossings with frozen side within {worst_frozen:.1e} of 0/1 (liquid side within {worst_liquid:.3}), {unresolved} unresolved at offset {offset}",
                    c.name, above
                ),
            )
        })
        .collect();
    report(10, "density sanity", start, checks)
}
