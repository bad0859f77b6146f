//! Integer partitions, interlacing and counting measures.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of nonnegative integers, stored without
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Builds a partition, dropping trailing zeros. Fails if `parts` is not
    /// weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(alloc::format!(
                "parts are not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self::from_sorted(parts))
    }

    /// Caller guarantees the parts are weakly decreasing.
    pub(crate) fn from_sorted(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0) as usize;
        let mut out = Vec::with_capacity(first);
        for i in 1..=first as u32 {
            out.push(self.0.iter().take_while(|&&p| p >= i).count() as u32);
        }
        Partition(out)
    }

    /// `self ⊇ other` as Young diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Staircase ((M−1)(N−1), …, M−1, 0).
    pub fn staircase(m: u32, n: usize) -> Partition {
        Partition::from_sorted(
            (0..n)
                .map(|i| m.saturating_sub(1) * (n - 1 - i) as u32)
                .collect(),
        )
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions with size at most `n`, ordered by size.
    pub fn all_up_to(n: u32) -> Vec<Partition> {
        (0..=n).flat_map(Partition::all_of_size).collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&[u32]> for Partition {
    /// Sorts the input decreasingly first.
    fn from(parts: &[u32]) -> Self {
        let mut v = parts.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_sorted(v)
    }
}

/// `λ ≻ μ`: λ_1 ≥ μ_1 ≥ λ_2 ≥ μ_2 ≥ …, i.e. λ/μ is a horizontal strip.
/// With `conjugated`, the same test on conjugates (λ/μ a vertical strip).
pub fn interlaces(lambda: &Partition, mu: &Partition, conjugated: bool) -> bool {
    if conjugated {
        return interlaces(&lambda.conjugate(), &mu.conjugate(), false);
    }
    if mu.len() > lambda.len() {
        return false;
    }
    (0..lambda.len()).all(|i| lambda.part(i) >= mu.part(i) && mu.part(i) >= lambda.part(i + 1))
}

/// Atoms (λ_i + N − i)/N, each carrying mass 1/N.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingMeasure {
    pub atoms: Vec<f64>,
    pub n: usize,
}

impl CountingMeasure {
    pub fn moment(&self, k: u32) -> f64 {
        self.atoms.iter().map(|a| a.powi(k as i32)).sum::<f64>() / self.n as f64
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.len() as f64 / self.n as f64
    }
}

pub fn counting_measure(lambda: &Partition, n: usize) -> Result<CountingMeasure> {
    if n == 0 || lambda.len() > n {
        return Err(Error::TooLong {
            len: lambda.len(),
            bound: n,
        });
    }
    let atoms = (1..=n)
        .map(|i| (lambda.part(i - 1) as f64 + (n - i) as f64) / n as f64)
        .collect();
    Ok(CountingMeasure { atoms, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[3, 1, 1]).conjugate(), p(&[3, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[2, 0]).conjugate(), p(&[1, 1]));
        assert_eq!(p(&[4, 2, 1]).conjugate(), p(&[3, 2, 1, 1]));
    }

    #[test]
    fn trailing_zeros_are_ignored() {
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlaces(&p(&[2]), &Partition::empty(), false));
        assert!(interlaces(&p(&[3, 1, 1]), &p(&[2]), true));
        assert!(!interlaces(&p(&[3, 1, 1]), &p(&[2]), false));
        assert!(interlaces(&p(&[3, 1]), &p(&[1, 1]), false));
        assert!(!interlaces(&p(&[3, 1]), &p(&[1, 1, 1]), false));
    }

    #[test]
    fn counting_measure_examples() {
        let m = counting_measure(&Partition::empty(), 4).unwrap();
        assert_eq!(m.atoms, vec![0.75, 0.5, 0.25, 0.0]);
        let m = counting_measure(&p(&[2, 1]), 2).unwrap();
        assert_eq!(m.atoms, vec![1.5, 0.5]);
        for n in 1..20 {
            let m = counting_measure(&Partition::empty(), n).unwrap();
            let want = (n as f64 - 1.0) / (2.0 * n as f64);
            assert!((m.moment(1) - want).abs() < 1e-15);
        }
        assert!(counting_measure(&p(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // p(0..=7) = 1 1 2 3 5 7 11 15
        let counts: Vec<usize> = (0..8).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn staircase_shape() {
        assert_eq!(Partition::staircase(3, 3), p(&[4, 2]));
        assert_eq!(Partition::staircase(1, 5), Partition::empty());
    }
}
