//! Truncated bosonic Fock space and the four vertex operators.
//!
//! `Γ_{L+}(x)|λ⟩ = Σ_{μ≺λ} x^{|λ|−|μ|}|μ⟩`, `Γ_{L−}(x)|λ⟩ = Σ_{μ≻λ} x^{|μ|−|λ|}|μ⟩`,
//! and the R versions use the conjugate relations.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::partitions::Partition;
use crate::railyard::{Letter, Sign};

/// Finite linear combination of basis vectors, all of size ≤ `cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: BTreeMap<Partition, f64>,
    cap: u64,
}

impl FockVector {
    pub fn zero(cap: u64) -> Self {
        FockVector {
            coeffs: BTreeMap::new(),
            cap,
        }
    }

    /// `|λ⟩`; zero if λ exceeds the cap.
    pub fn basis(lambda: Partition, cap: u64) -> Self {
        let mut v = Self::zero(cap);
        v.add(lambda, 1.0);
        v
    }

    pub fn vacuum(cap: u64) -> Self {
        Self::basis(Partition::empty(), cap)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Adds `c|λ⟩`, silently dropping partitions above the cap.
    pub fn add(&mut self, lambda: Partition, c: f64) {
        if lambda.size() <= self.cap && c != 0.0 {
            *self.coeffs.entry(lambda).or_insert(0.0) += c;
        }
    }

    pub fn get(&self, lambda: &Partition) -> f64 {
        self.coeffs.get(lambda).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &f64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&mut self, c: f64) {
        for v in self.coeffs.values_mut() {
            *v *= c;
        }
    }

    /// Largest coefficient gap over the union of supports, restricted to
    /// partitions of size ≤ `horizon`.
    pub fn max_diff_below(&self, other: &FockVector, horizon: u64) -> f64 {
        let mut worst = 0.0f64;
        for k in self.coeffs.keys().chain(other.coeffs.keys()) {
            if k.size() <= horizon {
                worst = worst.max((self.get(k) - other.get(k)).abs());
            }
        }
        worst
    }
}

/// Every μ with λ/μ a horizontal strip (μ ≺ λ).
pub fn strip_below(lambda: &Partition) -> Vec<Partition> {
    let n = lambda.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(lambda: &Partition, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == lambda.len() {
            out.push(Partition::from_sorted(cur.clone()));
            return;
        }
        for v in lambda.part(i + 1)..=lambda.part(i) {
            cur.push(v);
            rec(lambda, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(lambda, 0, &mut cur, &mut out);
    out
}

/// Every μ with μ/λ a horizontal strip (μ ≻ λ) and |μ| ≤ cap.
pub fn strip_above(lambda: &Partition, cap: u64) -> Vec<Partition> {
    let base = lambda.size();
    if base > cap {
        return Vec::new();
    }
    let n = lambda.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n + 1);
    // rows 2..=n+1 are boxed in by the row above; do those first so the
    // remaining budget bounds row 1
    fn rec(
        lambda: &Partition,
        i: usize,
        budget: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        let n = lambda.len();
        if i == n + 1 {
            let mut parts = Vec::with_capacity(n + 1);
            parts.push(0);
            parts.extend_from_slice(cur);
            let extra = budget;
            for add in 0..=extra {
                parts[0] = lambda.part(0) + add as u32;
                out.push(Partition::from_sorted(parts.clone()));
            }
            return;
        }
        let lo = lambda.part(i);
        let hi = lambda.part(i - 1);
        for v in lo..=hi {
            let used = (v - lo) as u64;
            if used > budget {
                break;
            }
            cur.push(v);
            rec(lambda, i + 1, budget - used, cur, out);
            cur.pop();
        }
    }
    rec(lambda, 1, cap - base, &mut cur, &mut out);
    out
}

/// Partitions reached from λ by one operator, with |λ| − |μ| signs folded
/// into the returned exponent. Results above the cap are omitted.
pub fn neighbors(
    letter: Letter,
    sign: Sign,
    lambda: &Partition,
    cap: u64,
) -> Vec<(Partition, u64)> {
    let conj = letter == Letter::R;
    let start = if conj {
        lambda.conjugate()
    } else {
        lambda.clone()
    };
    let raw = match sign {
        Sign::Plus => strip_below(&start),
        Sign::Minus => strip_above(&start, cap),
    };
    raw.into_iter()
        .filter(|mu| mu.size() <= cap)
        .map(|mu| {
            let d = mu.size().abs_diff(lambda.size());
            (if conj { mu.conjugate() } else { mu }, d)
        })
        .collect()
}

/// Partitions ν with `⟨λ|Γ|ν⟩ ≠ 0`, i.e. the transposed action.
pub fn co_neighbors(
    letter: Letter,
    sign: Sign,
    lambda: &Partition,
    cap: u64,
) -> Vec<(Partition, u64)> {
    let flipped = match sign {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    };
    neighbors(letter, flipped, lambda, cap)
}

/// Matrix element `⟨μ|Γ_{letter,sign}(x)|λ⟩`.
pub fn matrix_element(
    letter: Letter,
    sign: Sign,
    x: f64,
    mu: &Partition,
    lambda: &Partition,
) -> f64 {
    let conj = letter == Letter::R;
    let ok = match sign {
        Sign::Plus => crate::partitions::interlaces(lambda, mu, conj),
        Sign::Minus => crate::partitions::interlaces(mu, lambda, conj),
    };
    if ok {
        x.powi(mu.size().abs_diff(lambda.size()) as i32)
    } else {
        0.0
    }
}

/// `Γ_{letter,sign}(x) v`, truncated to the cap of `v`.
pub fn gamma_apply(letter: Letter, sign: Sign, x: f64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.cap);
    for (lambda, &c) in v.iter() {
        for (mu, d) in neighbors(letter, sign, lambda, v.cap) {
            out.add(mu, c * x.powi(d as i32));
        }
    }
    out
}

/// `v^T Γ`: the row vector `⟨v|Γ` written as a column vector.
pub fn gamma_apply_dual(letter: Letter, sign: Sign, x: f64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.cap);
    for (lambda, &c) in v.iter() {
        for (nu, d) in co_neighbors(letter, sign, lambda, v.cap) {
            out.add(nu, c * x.powi(d as i32));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = 0.3;
        let v = gamma_apply(Letter::L, Sign::Plus, x, &FockVector::basis(p(&[1]), 10));
        assert_eq!(v.len(), 2);
        assert!((v.get(&p(&[])) - x).abs() < 1e-15);
        assert_eq!(v.get(&p(&[1])), 1.0);

        let v = gamma_apply(Letter::L, Sign::Minus, x, &FockVector::vacuum(3));
        assert_eq!(v.len(), 4);
        for n in 0..=3u32 {
            assert!((v.get(&Partition::from_sorted(vec![n])) - x.powi(n as i32)).abs() < 1e-15);
        }

        let v = gamma_apply(Letter::R, Sign::Plus, x, &FockVector::vacuum(10));
        assert_eq!(v, FockVector::vacuum(10));

        let v = gamma_apply(Letter::R, Sign::Minus, x, &FockVector::vacuum(2));
        assert!((v.get(&p(&[1, 1])) - x * x).abs() < 1e-15);
        assert_eq!(v.get(&p(&[2])), 0.0);
    }

    #[test]
    fn strips_match_interlacing() {
        for lam in Partition::all_up_to(7) {
            let below = strip_below(&lam);
            for mu in Partition::all_up_to(7) {
                let want = crate::partitions::interlaces(&lam, &mu, false);
                assert_eq!(below.contains(&mu), want, "{lam:?} {mu:?}");
            }
            let above = strip_above(&lam, 9);
            for mu in Partition::all_up_to(9) {
                let want = crate::partitions::interlaces(&mu, &lam, false);
                assert_eq!(above.contains(&mu), want, "{lam:?} {mu:?}");
            }
            let mut sorted = above.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), above.len());
        }
    }

    #[test]
    fn matrix_elements_agree_with_apply() {
        for (letter, sign) in [
            (Letter::L, Sign::Plus),
            (Letter::L, Sign::Minus),
            (Letter::R, Sign::Plus),
            (Letter::R, Sign::Minus),
        ] {
            for lam in Partition::all_up_to(5) {
                let v = gamma_apply(letter, sign, 0.7, &FockVector::basis(lam.clone(), 8));
                for mu in Partition::all_up_to(8) {
                    let m = matrix_element(letter, sign, 0.7, &mu, &lam);
                    assert!((v.get(&mu) - m).abs() < 1e-15);
                }
            }
        }
    }
}
