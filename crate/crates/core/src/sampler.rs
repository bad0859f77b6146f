//! Exact samplers for the dimer measure `w(M)/Z`.
//!
//! [`TransferSampler`] walks left to right and draws each partition from
//! its conditional law given the prefix, using truncated suffix vectors.
//! [`GrowthSampler`] handles empty boundaries without truncation by filling
//! a growth diagram one commutation at a time; it is what makes long
//! graphs affordable.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fock::{co_neighbors, FockVector};
use crate::partitions::Partition;
use crate::railyard::{DimerCovering, Letter, RailYardSpec, Sign, Slot};
use crate::schur_process::suffix_vectors;

/// Generator for draw number `index` under `seed`: one ChaCha stream per
/// draw, so parallel and sequential runs agree.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub struct TransferSampler {
    spec: RailYardSpec,
    left: Partition,
    suffix: Vec<FockVector>,
    cap: u64,
}

impl TransferSampler {
    /// Right boundary ∅.
    pub fn new(spec: &RailYardSpec, left: &Partition, cap: u64) -> Result<Self> {
        if left.size() > cap {
            return Err(Error::Invalid(format!(
                "cap {cap} is below the boundary size {}",
                left.size()
            )));
        }
        let suffix = suffix_vectors(spec, &Partition::empty(), cap);
        if suffix[0].get(left) <= 0.0 {
            return Err(Error::Invalid(format!(
                "no covering with left boundary {left:?} fits under cap {cap}"
            )));
        }
        Ok(TransferSampler {
            spec: spec.clone(),
            left: left.clone(),
            suffix,
            cap,
        })
    }

    /// Truncated partition function.
    pub fn partition_function(&self) -> f64 {
        self.suffix[0].get(&self.left)
    }

    /// Conditional law of λ^(m+1) given λ^(m) = `lambda`, where `i = m − l`.
    pub fn step_probabilities(&self, i: usize, lambda: &Partition) -> Vec<(Partition, f64)> {
        let slot = self.spec.slots()[i];
        let total = self.suffix[i].get(lambda);
        if total <= 0.0 {
            return Vec::new();
        }
        co_neighbors(slot.letter, slot.sign, lambda, self.cap)
            .into_iter()
            .filter_map(|(nu, d)| {
                let w = slot.x.powi(d as i32) * self.suffix[i + 1].get(&nu);
                (w > 0.0).then(|| (nu, w / total))
            })
            .collect()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> DimerCovering {
        let mut parts = vec![self.left.clone()];
        for i in 0..self.spec.len() {
            let probs = self.step_probabilities(i, &parts[i]);
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = probs.len() - 1;
            for (k, (_, p)) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    pick = k;
                    break;
                }
            }
            parts.push(probs[pick].0.clone());
        }
        DimerCovering::from_partitions(&self.spec, parts).expect("sampled sequence interlaces")
    }
}

/// `count` draws from `Pr(M | left, ∅)`; draw i uses stream i of `seed`.
pub fn sample(
    spec: &RailYardSpec,
    left: &Partition,
    seed: u64,
    count: usize,
    cap: u64,
) -> Result<Vec<DimerCovering>> {
    let s = TransferSampler::new(spec, left, cap)?;
    Ok((0..count)
        .map(|i| s.draw(&mut draw_rng(seed, i as u64)))
        .collect())
}

/// k ∈ {0..=n} (or unbounded when `n` is None) with P(k) ∝ q^k.
pub fn truncated_geometric<R: Rng + ?Sized>(rng: &mut R, q: f64, n: Option<u32>) -> u32 {
    if q <= 0.0 || n == Some(0) {
        return 0;
    }
    let u: f64 = rng.gen();
    match n {
        None => {
            debug_assert!(q < 1.0);
            ((1.0 - u).ln() / q.ln()).floor() as u32
        }
        Some(n) if (q - 1.0).abs() < 1e-15 => ((u * (n + 1) as f64).floor() as u32).min(n),
        Some(n) => {
            let total = 1.0 - q.powi(n as i32 + 1);
            let k = ((1.0 - u * total).ln() / q.ln()).floor();
            (k.max(0.0) as u32).min(n)
        }
    }
}

/// Draws λ given μ (one fewer + slot) and ν (one fewer − slot), with
/// weight (x_+ x_−)^{|λ|} over the partitions compatible with both.
pub fn grow_cell<R: Rng + ?Sized>(
    rng: &mut R,
    plus: Slot,
    minus: Slot,
    mu: &Partition,
    nu: &Partition,
) -> Partition {
    let q = plus.x * minus.x;
    if plus.letter == Letter::R && minus.letter == Letter::R {
        let l = Slot {
            letter: Letter::L,
            ..plus
        };
        let m = Slot {
            letter: Letter::L,
            ..minus
        };
        return grow_cell(rng, l, m, &mu.conjugate(), &nu.conjugate()).conjugate();
    }
    let rows = mu.len().max(nu.len()) + 1;
    let mut parts = Vec::with_capacity(rows);
    for i in 0..rows {
        let above = |p: &Partition| if i == 0 { None } else { Some(p.part(i - 1)) };
        let lo = mu.part(i).max(nu.part(i));
        let hi = match (plus.letter, minus.letter) {
            (Letter::L, Letter::L) => above(mu).map(|a| a.min(nu.part(i - 1))),
            (Letter::L, Letter::R) => {
                Some(above(mu).map_or(nu.part(i) + 1, |a| a.min(nu.part(i) + 1)))
            }
            (Letter::R, Letter::L) => {
                Some(above(nu).map_or(mu.part(i) + 1, |a| a.min(mu.part(i) + 1)))
            }
            (Letter::R, Letter::R) => unreachable!(),
        };
        debug_assert!(
            hi.is_none_or(|h| h >= lo),
            "empty range at row {i}: {mu:?} {nu:?}"
        );
        parts.push(lo + truncated_geometric(rng, q, hi.map(|h| h - lo)));
    }
    Partition::new(parts).expect("rows are ordered by construction")
}

/// Exact sampler for empty left and right boundaries.
pub struct GrowthSampler {
    spec: RailYardSpec,
    /// Indices (0-based) of + and − slots, left to right.
    plus: Vec<usize>,
    minus: Vec<usize>,
}

impl GrowthSampler {
    pub fn new(spec: &RailYardSpec) -> Self {
        let s = spec.slots();
        GrowthSampler {
            spec: spec.clone(),
            plus: (0..s.len()).filter(|&i| s[i].sign == Sign::Plus).collect(),
            minus: (0..s.len()).filter(|&i| s[i].sign == Sign::Minus).collect(),
        }
    }

    /// Grid coordinates of the partition λ^(m) with `i = m − l` slots to
    /// its left: (+ slots on the left, − slots on the right).
    fn coords(&self, i: usize) -> (usize, usize) {
        let a = self.plus.iter().filter(|&&p| p < i).count();
        let c = self.minus.iter().filter(|&&p| p >= i).count();
        (a, c)
    }

    /// Fills the grid up to (amax, cmax); entry [a][c].
    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, amax: usize, cmax: usize) -> Vec<Vec<Partition>> {
        let cn = self.minus.len();
        let slots = self.spec.slots();
        let mut grid = vec![vec![Partition::empty(); cmax + 1]; amax + 1];
        for a in 1..=amax {
            let p = self.plus[a - 1];
            for c in 1..=cmax {
                let m = self.minus[cn - c];
                if p > m {
                    // the + slot is right of the − slot: not under the path
                    continue;
                }
                let lam = grow_cell(rng, slots[p], slots[m], &grid[a - 1][c], &grid[a][c - 1]);
                grid[a][c] = lam;
            }
        }
        grid
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> DimerCovering {
        let grid = self.fill(rng, self.plus.len(), self.minus.len());
        let parts = (0..=self.spec.len())
            .map(|i| {
                let (a, c) = self.coords(i);
                grid[a][c].clone()
            })
            .collect();
        DimerCovering::from_partitions(&self.spec, parts).expect("growth diagram yields a covering")
    }

    /// Only λ^(m) for `i = m − l`, filling just the cells it depends on.
    pub fn draw_column<R: Rng + ?Sized>(&self, rng: &mut R, i: usize) -> Partition {
        let (a, c) = self.coords(i);
        let mut grid = self.fill(rng, a, c);
        core::mem::take(&mut grid[a][c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::railyard::Letter::*;
    use crate::railyard::Sign::*;

    #[test]
    fn trivial_column() {
        let spec = RailYardSpec::build(1, 1, &[L], &[Plus], &[0.5]).unwrap();
        let draws = sample(&spec, &Partition::empty(), 7, 50, 10).unwrap();
        assert!(draws
            .iter()
            .all(|d| d.partitions().iter().all(Partition::is_empty)));
    }

    #[test]
    fn middle_partition_is_empty_with_prob_one_minus_product() {
        let spec = RailYardSpec::build(1, 2, &[L, L], &[Plus, Minus], &[0.5, 0.5]).unwrap();
        let s = TransferSampler::new(&spec, &Partition::empty(), 60).unwrap();
        let probs = s.step_probabilities(0, &Partition::empty());
        let p_empty = probs.iter().find(|(p, _)| p.is_empty()).unwrap().1;
        assert!((p_empty - 0.75).abs() < 1e-12);
    }

    #[test]
    fn step_probabilities_sum_to_one() {
        let spec = RailYardSpec::build(
            1,
            4,
            &[L, R, R, L],
            &[Plus, Plus, Minus, Minus],
            &[0.3, 0.2, 0.4, 0.5],
        )
        .unwrap();
        let s = TransferSampler::new(&spec, &Partition::empty(), 30).unwrap();
        let mut rng = draw_rng(3, 0);
        for _ in 0..200 {
            let cov = s.draw(&mut rng);
            for (i, lam) in cov.partitions().iter().take(4).enumerate() {
                let total: f64 = s.step_probabilities(i, lam).iter().map(|p| p.1).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let spec =
            RailYardSpec::build(1, 3, &[L, R, L], &[Plus, Minus, Minus], &[0.4, 0.4, 0.4]).unwrap();
        let a = sample(&spec, &Partition::empty(), 11, 20, 20).unwrap();
        let b = sample(&spec, &Partition::empty(), 11, 20, 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncated_geometric_bounds() {
        let mut rng = draw_rng(1, 0);
        for _ in 0..1000 {
            assert!(truncated_geometric(&mut rng, 0.9, Some(3)) <= 3);
            assert!(truncated_geometric(&mut rng, 2.0, Some(1)) <= 1);
            assert_eq!(truncated_geometric(&mut rng, 0.0, None), 0);
        }
    }

    #[test]
    fn growth_draws_are_coverings() {
        let spec = RailYardSpec::build(
            1,
            8,
            &[L, R, L, R, L, R, L, R],
            &[Plus, Plus, Minus, Plus, Minus, Minus, Plus, Minus],
            &[0.5; 8],
        )
        .unwrap();
        let g = GrowthSampler::new(&spec);
        let mut rng = draw_rng(5, 0);
        for _ in 0..200 {
            let cov = g.draw(&mut rng);
            assert!(cov.is_pure());
        }
    }
}
