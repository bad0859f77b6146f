//! Partition functions of dimer coverings and the Schur generating
//! function of a column.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fock::{gamma_apply, FockVector};
use crate::partitions::Partition;
use crate::railyard::{Letter, RailYardSpec, Sign};
use crate::symfunc::schur;

pub const DEFAULT_CAP: u64 = 40;
/// Relative change below which cap doubling stops.
pub const CAP_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPair {
    pub left: Partition,
    pub right: Partition,
}

impl BoundaryPair {
    pub fn new(left: Partition, right: Partition) -> Self {
        BoundaryPair { left, right }
    }

    pub fn empty() -> Self {
        Self::new(Partition::empty(), Partition::empty())
    }
}

/// Vectors `Γ_m ⋯ Γ_r |right⟩` for m = l..=r+1, indexed from 0.
pub fn suffix_vectors(spec: &RailYardSpec, right: &Partition, cap: u64) -> Vec<FockVector> {
    let n = spec.len();
    let mut out = Vec::with_capacity(n + 1);
    out.push(FockVector::basis(right.clone(), cap));
    for s in spec.slots().iter().rev() {
        let next = gamma_apply(s.letter, s.sign, s.x, out.last().unwrap());
        out.push(next);
    }
    out.reverse();
    out
}

/// `⟨left| Γ_l ⋯ Γ_r |right⟩` with every intermediate vector truncated
/// at |λ| ≤ cap. Nondecreasing in the cap.
pub fn partition_function_transfer(spec: &RailYardSpec, boundary: &BoundaryPair, cap: u64) -> f64 {
    let mut v = FockVector::basis(boundary.right.clone(), cap);
    for s in spec.slots().iter().rev() {
        v = gamma_apply(s.letter, s.sign, s.x, &v);
    }
    v.get(&boundary.left)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferValue {
    pub value: f64,
    /// Cap of the last evaluation.
    pub cap: u64,
    /// Relative change of the last doubling.
    pub rel_change: f64,
    pub converged: bool,
}

/// Transfer evaluation starting at `start_cap` and doubling until the
/// relative change drops below [`CAP_TOLERANCE`] or `max_cap` is reached.
pub fn partition_function_auto(
    spec: &RailYardSpec,
    boundary: &BoundaryPair,
    start_cap: u64,
    max_cap: u64,
) -> TransferValue {
    let mut cap = start_cap
        .max(boundary.left.size())
        .max(boundary.right.size())
        .max(1);
    let mut prev = partition_function_transfer(spec, boundary, cap);
    loop {
        if cap * 2 > max_cap {
            return TransferValue {
                value: prev,
                cap,
                rel_change: f64::INFINITY,
                converged: false,
            };
        }
        cap *= 2;
        let next = partition_function_transfer(spec, boundary, cap);
        let rel = if next == 0.0 {
            0.0
        } else {
            (next - prev).abs() / next.abs()
        };
        if rel < CAP_TOLERANCE {
            return TransferValue {
                value: next,
                cap,
                rel_change: rel,
                converged: true,
            };
        }
        prev = next;
    }
}

/// Commutation factor for a + slot i to the left of a − slot j.
pub fn pair_factor(letter_i: Letter, xi: f64, letter_j: Letter, xj: f64) -> f64 {
    if letter_i == letter_j {
        1.0 / (1.0 - xi * xj)
    } else {
        1.0 + xi * xj
    }
}

/// ∏ over i < j with b_i = +, b_j = − of the commutation factors.
pub fn pair_product(spec: &RailYardSpec) -> f64 {
    let s = spec.slots();
    let mut acc = 1.0;
    for i in 0..s.len() {
        if s[i].sign != Sign::Plus {
            continue;
        }
        for j in i + 1..s.len() {
            if s[j].sign == Sign::Minus {
                acc *= pair_factor(s[i].letter, s[i].x, s[j].letter, s[j].x);
            }
        }
    }
    acc
}

/// Which family of − slots carries the left boundary in the product form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductVariant {
    /// No (R,−) slots; s_λ over the (L,−) weights.
    LeftMinus,
    /// No (L,−) slots; s_{λ′} over the (R,−) weights.
    RightMinus,
}

fn weights_of(spec: &RailYardSpec, letter: Letter, sign: Sign) -> Vec<f64> {
    spec.slots()
        .iter()
        .filter(|s| s.letter == letter && s.sign == sign)
        .map(|s| s.x)
        .collect()
}

/// Closed form for the partition function with right boundary ∅.
pub fn partition_function_product(
    spec: &RailYardSpec,
    left: &Partition,
    variant: ProductVariant,
) -> Result<f64> {
    let (forbidden, carrier, lam) = match variant {
        ProductVariant::LeftMinus => (Letter::R, Letter::L, left.clone()),
        ProductVariant::RightMinus => (Letter::L, Letter::R, left.conjugate()),
    };
    if let Some(i) = spec
        .slots()
        .iter()
        .position(|s| s.letter == forbidden && s.sign == Sign::Minus)
    {
        return Err(Error::SlotCondition(format!(
            "slot {} is ({forbidden:?},-), not allowed for this product form",
            spec.l() + i as i64
        )));
    }
    let xs = weights_of(spec, carrier, Sign::Minus);
    if lam.len() > xs.len() {
        return Err(Error::TooLong {
            len: lam.len(),
            bound: xs.len(),
        });
    }
    Ok(schur(&lam, &xs) * pair_product(spec))
}

/// Schur generating function of the partition on odd column `2t−1`,
/// i.e. of λ^(t) with slots l..t−1 on its left and t..r on its right.
///
/// `u` assigns new values to some (L,−) slots in `t..=r` (absolute slot
/// indices); every other slot keeps its weight. Requires no (R,−) slots.
pub fn schur_generating_fn(
    spec: &RailYardSpec,
    left: &Partition,
    t: i64,
    u: &[(i64, f64)],
) -> Result<f64> {
    if t < spec.l() || t > spec.r() + 1 {
        return Err(Error::OutOfRange(format!("column {t}")));
    }
    if let Some(i) = spec
        .slots()
        .iter()
        .position(|s| s.letter == Letter::R && s.sign == Sign::Minus)
    {
        return Err(Error::SlotCondition(format!(
            "slot {} is (R,-)",
            spec.l() + i as i64
        )));
    }
    let mut w: Vec<f64> = spec.slots().iter().map(|s| s.x).collect();
    for &(j, uj) in u {
        if j < t || j > spec.r() {
            return Err(Error::OutOfRange(format!(
                "slot {j} is not to the right of column {t}"
            )));
        }
        let s = spec.slot(j);
        if (s.letter, s.sign) != (Letter::L, Sign::Minus) {
            return Err(Error::Invalid(format!("slot {j} is not an (L,-) slot")));
        }
        w[(j - spec.l()) as usize] = uj;
    }
    let slots = spec.slots();
    let lminus: Vec<usize> = (0..slots.len())
        .filter(|&i| slots[i].letter == Letter::L && slots[i].sign == Sign::Minus)
        .collect();
    let xs: Vec<f64> = lminus.iter().map(|&i| slots[i].x).collect();
    let ws: Vec<f64> = lminus.iter().map(|&i| w[i]).collect();
    if left.len() > xs.len() {
        return Err(Error::TooLong {
            len: left.len(),
            bound: xs.len(),
        });
    }
    let mut value = if left.is_empty() {
        1.0
    } else {
        schur(left, &ws) / schur(left, &xs)
    };
    let first_right = (t - spec.l()) as usize;
    for i in 0..first_right.min(slots.len()) {
        if slots[i].sign != Sign::Plus {
            continue;
        }
        for &j in lminus.iter().filter(|&&j| j >= first_right) {
            value *= pair_factor(slots[i].letter, slots[i].x, Letter::L, w[j])
                / pair_factor(slots[i].letter, slots[i].x, Letter::L, slots[j].x);
        }
    }
    Ok(value)
}
