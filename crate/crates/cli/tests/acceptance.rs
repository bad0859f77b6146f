//! The ten acceptance criteria, one test each. Every test prints a single
//! PASS or FAIL line with the measured figures.

use railyard_cli::criteria::{self, CriterionReport};

fn check(r: CriterionReport) {
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_01_partition_function_oracles() {
    check(criteria::partition_function_oracles());
}

#[test]
fn criterion_02_commutation() {
    check(criteria::commutation());
}

#[test]
fn criterion_03_sampler_exactness() {
    check(criteria::sampler_exactness());
}

#[test]
fn criterion_04_staircase_moments() {
    check(criteria::staircase_moments());
}

#[test]
fn criterion_05_three_slot_frozen_boundary() {
    check(criteria::frozen_boundary_three_slot());
}

#[test]
fn criterion_06_dual_involution() {
    check(criteria::dual_involution());
}

#[test]
fn criterion_07_slope_two_staircase() {
    check(criteria::slope_two_staircase());
}

#[test]
fn criterion_08_coset_formula() {
    check(criteria::coset_formula());
}

#[test]
fn criterion_09_piecewise_frozen_boundary() {
    check(criteria::piecewise_frozen_boundary());
}

#[test]
fn criterion_10_density_sanity() {
    check(criteria::density_sanity());
}
