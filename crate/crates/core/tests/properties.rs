use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use railyard_core::fock::{gamma_apply, FockVector};
use railyard_core::limitshape::{density, f_pole_sum, AsymptoticModel, ObservationPoint};
use railyard_core::partitions::interlaces;
use railyard_core::piecewise::{coset_schur, BandMeasure, CosetMode, TBranch};
use railyard_core::railyard::{column_partition, DimerCovering};
use railyard_core::sampler::GrowthSampler;
use railyard_core::symfunc::{schur, skew_schur, staircase_schur};
use railyard_core::{Letter, Partition, RailYardSpec, Sign, Slot};

fn partition(max_size: u32, max_len: usize) -> impl Strategy<Value = Partition> {
    let all: Vec<Partition> = Partition::all_up_to(max_size)
        .into_iter()
        .filter(|p| p.len() <= max_len)
        .collect();
    proptest::sample::select(all)
}

/// Σ over semistandard fillings of λ/μ with entries ≤ n of ∏ x_entry.
fn tableau_sum(lambda: &Partition, mu: &Partition, xs: &[f64]) -> f64 {
    let cells: Vec<(usize, usize)> = (0..lambda.len())
        .flat_map(|r| (mu.part(r) as usize..lambda.part(r) as usize).map(move |c| (r, c)))
        .collect();
    let mut filling = vec![0usize; cells.len()];
    fn go(k: usize, cells: &[(usize, usize)], filling: &mut [usize], xs: &[f64]) -> f64 {
        if k == cells.len() {
            return filling.iter().map(|&v| xs[v]).product();
        }
        let (r, c) = cells[k];
        let mut lo = 0;
        // left neighbour in the same row
        if k > 0 && cells[k - 1] == (r, c.wrapping_sub(1)) {
            lo = filling[k - 1];
        }
        // the cell above must be strictly smaller
        if let Some(j) = cells.iter().position(|&p| p == (r.wrapping_sub(1), c)) {
            lo = lo.max(filling[j] + 1);
        }
        let mut acc = 0.0;
        for v in lo..xs.len() {
            filling[k] = v;
            acc += go(k + 1, cells, filling, xs);
        }
        acc
    }
    go(0, &cells, &mut filling, xs)
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::L), Just(Letter::R)]
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_trudi_matches_tableaux(lambda in partition(6, 3), pick in 0usize..64, which in 0usize..2) {
        let inside: Vec<Partition> = Partition::all_up_to(lambda.size() as u32).into_iter().filter(|m| lambda.contains(m)).collect();
        let mu = &inside[pick % inside.len()];
        let xs: &[f64] = if which == 0 { &[1.0, 1.0, 1.0] } else { &[0.5, 0.7, 0.9] };
        let jt = skew_schur(&lambda, mu, xs);
        let brute = tableau_sum(&lambda, mu, xs);
        prop_assert!((jt - brute).abs() <= 1e-12 * brute.abs().max(1.0), "{lambda:?}/{mu:?}: {jt} vs {brute}");
    }

    #[test]
    fn staircase_is_a_schur_polynomial(m in 1u32..=3, xs in proptest::collection::vec(0.1f64..2.0, 1..=4)) {
        let stair = Partition::staircase(m, xs.len());
        let a = staircase_schur(m, &xs);
        let b = schur(&stair, &xs);
        prop_assert!((a - b).abs() <= 1e-10 * b.abs());
    }

    #[test]
    fn interlacing_bounds_length_and_size(lambda in partition(8, 8), mu in partition(8, 8), conj in any::<bool>()) {
        if interlaces(&lambda, &mu, conj) {
            prop_assert!(mu.size() <= lambda.size());
            if !conj {
                prop_assert!(mu.len() + 1 >= lambda.len());
            }
        }
    }

    #[test]
    fn conjugation_is_an_involution(lambda in partition(12, 12)) {
        prop_assert_eq!(lambda.conjugate().conjugate(), lambda.clone());
        prop_assert_eq!(lambda.conjugate().size(), lambda.size());
    }

    #[test]
    fn coset_sum_is_jacobi_trudi(
        lambda in partition(10, 6),
        classes in proptest::collection::vec(0usize..3, 1..=6),
        base in 0.2f64..0.6,
        ratios in proptest::collection::vec(1.5f64..3.0, 2),
        u in proptest::collection::vec(0.95f64..1.05, 6),
    ) {
        prop_assume!(lambda.len() <= classes.len());
        // the cross-class factors 1/(w_a − w_b) cancel badly when two class
        // weights nearly coincide, so the classes are kept apart
        let values = [base, base * ratios[0], base * ratios[0] * ratios[1]];
        let x: Vec<f64> = classes.iter().map(|&c| values[c]).collect();
        let u = &u[..x.len()];
        let w: Vec<f64> = x.iter().zip(u).map(|(a, b)| a * b).collect();
        let want = schur(&lambda, &w);
        let got = coset_schur(&lambda, &x, u, CosetMode::Full).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn log_phi_is_the_band_stieltjes_transform(
        cuts in proptest::collection::vec(0.05f64..1.0, 2..=8),
        t_off in 0.5f64..5.0,
        side in any::<bool>(),
    ) {
        // alternating band/gap lengths, bands rescaled to total length 1
        let band_len: f64 = cuts.iter().step_by(2).sum();
        let mut bands = Vec::new();
        let mut pos = 0.0;
        for (k, c) in cuts.iter().enumerate() {
            if k % 2 == 0 {
                bands.push((pos, pos + c / band_len));
                pos += c / band_len;
            } else {
                pos += c;
            }
        }
        bands.reverse();
        let m = BandMeasure { group: 0, bands: bands.clone() };
        let t = if side { pos + t_off } else { -t_off };
        let log_phi = m.phi(Complex64::new(t, 0.0)).unwrap().re.ln();
        // Gauss–Legendre on every band
        let nodes = [(-0.906179845938664, 0.236926885056189), (-0.538469310105683, 0.478628670499366),
            (0.0, 0.568888888888889), (0.538469310105683, 0.478628670499366), (0.906179845938664, 0.236926885056189)];
        let mut quad = 0.0;
        for &(b, g) in &bands {
            let pieces = 200;
            let h = (g - b) / pieces as f64;
            for j in 0..pieces {
                let mid = b + (j as f64 + 0.5) * h;
                for &(x, wgt) in &nodes {
                    quad += 0.5 * h * wgt / (t - (mid + 0.5 * h * x));
                }
            }
        }
        prop_assert!((log_phi - quad).abs() < 1e-8, "{log_phi} vs {quad}");
    }

    #[test]
    fn real_roots_of_phi_interleave_band_ends(
        cuts in proptest::collection::vec(0.05f64..1.0, 1..=7),
        z in -20.0f64..20.0,
    ) {
        prop_assume!((z - 1.0).abs() > 1e-3);
        let band_len: f64 = cuts.iter().step_by(2).sum();
        let mut bands = Vec::new();
        let mut pos = 0.0;
        for (k, c) in cuts.iter().enumerate() {
            if k % 2 == 0 {
                bands.push((pos, pos + c / band_len));
                pos += c / band_len;
            } else {
                pos += c;
            }
        }
        let m = BandMeasure { group: 0, bands };
        let ends = m.poles();
        let d = ends.len();
        let mut found = 0;
        for k in 0..=d {
            if (k == 0 && z >= 1.0) || (k == d && z <= 1.0) {
                continue;
            }
            let t = m.solve_t(Complex64::new(z, 0.0), TBranch::Interval(k)).unwrap().re;
            prop_assert!(k == 0 || t > ends[k - 1]);
            prop_assert!(k == d || t < ends[k]);
            let v = m.phi(Complex64::new(t, 0.0)).unwrap().re;
            prop_assert!((v - z).abs() < 1e-9 * (1.0 + z.abs()), "k = {k}: Φ = {v}, z = {z}");
            found += 1;
        }
        prop_assert_eq!(found, d);
    }

    #[test]
    fn raising_and_lowering_commute_up_to_a_factor(
        a1 in letter(), a2 in letter(),
        x1 in 0.05f64..0.5, x2 in 0.05f64..0.5,
        lambda in partition(3, 3),
    ) {
        let cap = 40;
        let v = FockVector::basis(lambda.clone(), cap);
        let left = gamma_apply(a1, Sign::Plus, x1, &gamma_apply(a2, Sign::Minus, x2, &v));
        let right = gamma_apply(a2, Sign::Minus, x2, &gamma_apply(a1, Sign::Plus, x1, &v));
        let factor = if a1 == a2 { 1.0 / (1.0 - x1 * x2) } else { 1.0 + x1 * x2 };
        let horizon = 12;
        let diff = left.max_diff_below(&{ let mut r = right.clone(); r.scale(factor); r }, horizon);
        prop_assert!(diff < 1e-12, "{a1:?}{a2:?}: {diff}");
        // operators of the same sign commute exactly
        for s in [Sign::Plus, Sign::Minus] {
            let ab = gamma_apply(a1, s, x1, &gamma_apply(a2, s, x2, &v));
            let ba = gamma_apply(a2, s, x2, &gamma_apply(a1, s, x1, &v));
            prop_assert!(ab.max_diff_below(&ba, horizon) < 1e-12);
        }
    }

    #[test]
    fn covering_round_trips_through_edges(
        cols in proptest::collection::vec((letter(), sign(), 0.05f64..0.5), 1..=4),
        seed in any::<u64>(),
    ) {
        let slots: Vec<Slot> = cols.iter().map(|&(a, b, x)| Slot::new(a, b, x)).collect();
        let spec = RailYardSpec::from_slots(0, slots).unwrap();
        let cov = GrowthSampler::new(&spec).draw(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(cov.edges(&spec).validate(true).is_ok());
        let back: Vec<Partition> = (spec.l()..=spec.r() + 1).map(|m| column_partition(&spec, &cov, m).unwrap()).collect();
        let again = DimerCovering::from_partitions(&spec, back).unwrap();
        prop_assert_eq!(again, cov);
    }

    #[test]
    fn single_segment_density_stays_in_unit_interval(
        slots in proptest::collection::vec((prop_oneof![Just((Letter::L, Sign::Minus)), Just((Letter::R, Sign::Plus)), Just((Letter::L, Sign::Plus))], 0.1f64..0.9), 1..=4),
        alpha in 0.0f64..0.95,
    ) {
        prop_assume!(slots.iter().any(|s| s.0 == (Letter::L, Sign::Minus)));
        let period: Vec<Slot> = slots.iter().map(|&((a, b), x)| Slot::new(a, b, x)).collect();
        let Ok(model) = AsymptoticModel::periodic(vec![0.0, 1.0], vec![period]) else { return Ok(()) };
        let pt = ObservationPoint { p_t: 1, alpha };
        let f = f_pole_sum(&model, pt, 1).unwrap();
        for k in 0..50 {
            let kappa = -1.0 + 4.0 * k as f64 / 49.0;
            let d = density(&model, pt, 1, kappa).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
            // at most one nonreal conjugate pair among the roots of F(z) = κ
            let roots = f.solve(Complex64::new(kappa, 0.0)).unwrap();
            let nonreal = roots.iter().filter(|r| r.im.abs() > 1e-6 * (1.0 + r.re.abs())).count();
            prop_assert!(nonreal <= 2, "κ = {kappa}: {roots:?}");
        }
    }
}
