//! Left boundaries made of a few constant blocks of parts: the coset
//! expansion of Schur polynomials over grouped weights, weight groups,
//! the 0/1 band measures of each group, and the per-group functions whose
//! roots give the density and whose double roots give the frozen boundary.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::frozenboundary::{
    default_grid, double_root_from_jets, CurveSample, ParametricCurve, ALPHA_TOLERANCE,
};
use crate::limitshape::{AsymptoticModel, ObservationPoint};
use crate::partitions::Partition;
use crate::poly::{PoleSum, Poly};
use crate::railyard::{Letter, Sign};
use crate::symfunc::schur;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn same_weight(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

// ---------------------------------------------------------------------
// coset expansion

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetMode {
    /// Only the coset that puts the largest weights on the longest rows.
    Dominant,
    /// Every coset of the weight-preserving subgroup.
    Full,
}

/// s_λ(u_1x_1, …, u_Nx_N) expanded over cosets of the permutations that
/// preserve the weights x. Each coset contributes
/// ∏ x_i^{|φ_i|} s_{φ_i}(u of class i) / ∏ (w_a − w_b) over cross-class
/// pairs, where φ_i collects λ_j + #{k > j in another class} over the
/// rows j assigned to class i.
pub fn coset_schur(lambda: &Partition, x: &[f64], u: &[f64], mode: CosetMode) -> Result<f64> {
    let n = x.len();
    if u.len() != n {
        return Err(Error::Shape(format!(
            "{} weights but {} multipliers",
            n,
            u.len()
        )));
    }
    if lambda.len() > n {
        return Err(Error::TooLong {
            len: lambda.len(),
            bound: n,
        });
    }
    // classes of equal weight, largest first
    let mut values: Vec<f64> = Vec::new();
    for &v in x {
        if !values.iter().any(|&w| same_weight(v, w)) {
            values.push(v);
        }
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let members: Vec<Vec<usize>> = values
        .iter()
        .map(|&v| (0..n).filter(|&j| same_weight(x[j], v)).collect())
        .collect();
    let w: Vec<f64> = (0..n).map(|j| u[j] * x[j]).collect();
    let class_u: Vec<Vec<f64>> = members
        .iter()
        .map(|m| m.iter().map(|&j| u[j]).collect())
        .collect();

    let term = |labels: &[usize]| -> f64 {
        let mut rank = vec![0usize; members.len()];
        let mut var = vec![0usize; n];
        let mut parts: Vec<Vec<u32>> = vec![Vec::new(); members.len()];
        for j in 0..n {
            let cl = labels[j];
            var[j] = members[cl][rank[cl]];
            rank[cl] += 1;
            let later_other = labels[j + 1..].iter().filter(|&&k| k != cl).count() as u32;
            parts[cl].push(lambda.part(j) + later_other);
        }
        let mut acc = 1.0;
        for (cl, p) in parts.into_iter().enumerate() {
            let size: u32 = p.iter().sum();
            let phi = Partition::from_sorted(p);
            acc *= values[cl].powi(size as i32) * schur(&phi, &class_u[cl]);
        }
        for j in 0..n {
            for k in j + 1..n {
                if labels[j] != labels[k] {
                    acc /= w[var[j]] - w[var[k]];
                }
            }
        }
        acc
    };

    let mut labels: Vec<usize> = Vec::with_capacity(n);
    for (cl, m) in members.iter().enumerate() {
        labels.extend(core::iter::repeat_n(cl, m.len()));
    }
    match mode {
        CosetMode::Dominant => Ok(term(&labels)),
        CosetMode::Full => {
            // labels start sorted; walk all distinct rearrangements
            let mut total = 0.0;
            loop {
                total += term(&labels);
                if !next_permutation(&mut labels) {
                    return Ok(total);
                }
            }
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

// ---------------------------------------------------------------------
// boundary, groups, bands

/// A left boundary whose parts take finitely many values, described by
/// the scaled row blocks (a_j, b_j), lowest block first.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseBoundary {
    bands: Vec<(f64, f64)>,
    blocks: Option<(Vec<u32>, Vec<usize>)>,
}

impl PiecewiseBoundary {
    /// `levels` strictly decreasing, `lengths[t]` rows equal to `levels[t]`.
    /// Block j covers the shifted positions λ_q − q of its rows, scaled by
    /// the row count N and closed to length K/N.
    pub fn from_blocks(levels: Vec<u32>, lengths: Vec<usize>) -> Result<Self> {
        if levels.is_empty() || levels.len() != lengths.len() {
            return Err(Error::Shape(format!(
                "{} levels, {} block lengths",
                levels.len(),
                lengths.len()
            )));
        }
        if levels.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid(format!(
                "levels must strictly decrease: {levels:?}"
            )));
        }
        if lengths.contains(&0) {
            return Err(Error::Invalid("every block needs at least one row".into()));
        }
        let n: usize = lengths.iter().sum();
        let nf = n as f64;
        let mut bands = Vec::with_capacity(levels.len());
        let mut q = 0usize;
        for (&mu, &k) in levels.iter().zip(&lengths) {
            let (q0, q1) = (q + 1, q + k);
            let a = (mu as f64 - q1 as f64) / nf;
            let b = (mu as f64 - q0 as f64 + 1.0) / nf;
            bands.push((a, b));
            q = q1;
        }
        bands.reverse();
        Ok(PiecewiseBoundary {
            bands,
            blocks: Some((levels, lengths)),
        })
    }

    /// Scaled blocks directly; they must increase and have total length 1.
    pub fn from_bands(bands: Vec<(f64, f64)>) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::Shape("no blocks".into()));
        }
        if bands.iter().any(|&(a, b)| !(a < b)) || bands.windows(2).any(|w| !(w[0].1 < w[1].0)) {
            return Err(Error::Invalid(format!(
                "blocks must be increasing and disjoint: {bands:?}"
            )));
        }
        let total: f64 = bands.iter().map(|(a, b)| b - a).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "block lengths sum to {total}, not 1"
            )));
        }
        Ok(PiecewiseBoundary {
            bands,
            blocks: None,
        })
    }

    /// (a_j, b_j), lowest block first.
    pub fn bands(&self) -> &[(f64, f64)] {
        &self.bands
    }

    pub fn level_count(&self) -> usize {
        self.bands.len()
    }

    /// Share of rows on level `t`, 1-based from the highest level.
    pub fn level_fraction(&self, t: usize) -> f64 {
        let (a, b) = self.bands[self.bands.len() - t];
        b - a
    }

    /// The boundary partition, when built from blocks.
    pub fn partition(&self) -> Option<Partition> {
        let (levels, lengths) = self.blocks.as_ref()?;
        let mut parts = Vec::with_capacity(lengths.iter().sum());
        for (&mu, &k) in levels.iter().zip(lengths) {
            parts.extend(core::iter::repeat_n(mu, k));
        }
        Some(Partition::from_sorted(parts))
    }

    /// Smallest gap between consecutive levels divided by the row count.
    /// The asymptotics assume this is large; it is reported, not enforced.
    pub fn min_level_gap(&self) -> Option<f64> {
        let (levels, lengths) = self.blocks.as_ref()?;
        let n: usize = lengths.iter().sum();
        levels
            .windows(2)
            .map(|w| (w[0] - w[1]) as f64 / n as f64)
            .reduce(f64::min)
    }
}

/// (L,−) weights grouped by value, largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGroups {
    pub weights: Vec<f64>,
    /// Share of (L,−) slots in each group.
    pub theta: Vec<f64>,
    /// Share of (L,−) slots among all slots.
    pub rho: f64,
    /// First level (1-based, from the highest) of each group, followed by
    /// level count + 1.
    pub starts: Vec<usize>,
    /// Group of every slot, per segment; `None` for slots that are not (L,−).
    pub slot_group: Vec<Vec<Option<usize>>>,
    /// Σζ of the group's slots in each segment, `[group][segment]`.
    pub segment_density: Vec<Vec<f64>>,
}

impl WeightGroups {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Number of levels carried by group `i`.
    pub fn level_span(&self, i: usize) -> usize {
        self.starts[i + 1] - self.starts[i]
    }
}

/// Groups the (L,−) slots of `model` by weight and matches the groups to
/// consecutive levels of `boundary`: the heaviest group holds the highest
/// levels, and group boundaries must fall on level boundaries.
pub fn group_weights(
    model: &AsymptoticModel,
    boundary: &PiecewiseBoundary,
) -> Result<WeightGroups> {
    let mut weights: Vec<f64> = Vec::new();
    for seg in model.segments() {
        for s in seg
            .slots
            .iter()
            .filter(|s| s.letter == Letter::L && s.sign == Sign::Minus)
        {
            if !weights.iter().any(|&w| same_weight(w, s.x)) {
                weights.push(s.x);
            }
        }
    }
    if weights.is_empty() {
        return Err(Error::Invalid("model has no (L,-) slots".into()));
    }
    weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let m = model.segment_count();
    let mut slot_group = Vec::with_capacity(m);
    let mut segment_density = vec![vec![0.0; m]; weights.len()];
    for (p, seg) in model.segments().iter().enumerate() {
        let mut row = Vec::with_capacity(seg.slots.len());
        for (s, &z) in seg.slots.iter().zip(&seg.zeta) {
            let g = if s.letter == Letter::L && s.sign == Sign::Minus {
                weights.iter().position(|&w| same_weight(w, s.x))
            } else {
                None
            };
            if let Some(g) = g {
                segment_density[g][p] += z;
            }
            row.push(g);
        }
        slot_group.push(row);
    }
    let mass: Vec<f64> = segment_density
        .iter()
        .map(|d| {
            d.iter()
                .enumerate()
                .map(|(p, z)| model.segment_weight(p + 1) * z)
                .sum()
        })
        .collect();
    let rho: f64 = mass.iter().sum();
    if rho <= 0.0 {
        return Err(Error::Invalid("(L,-) slots have zero density".into()));
    }
    let theta: Vec<f64> = mass.iter().map(|x| x / rho).collect();
    // level runs: cumulative level shares must hit every cumulative θ
    let s = boundary.level_count();
    let mut starts = vec![1usize];
    let (mut cum_level, mut cum_theta, mut t) = (0.0, 0.0, 0usize);
    for (i, th) in theta.iter().enumerate() {
        cum_theta += th;
        let begin = t;
        while t < s && cum_level < cum_theta - 1e-9 {
            t += 1;
            cum_level += boundary.level_fraction(t);
        }
        if t == begin || (cum_level - cum_theta).abs() > 1e-9 {
            return Err(Error::Invalid(format!(
                "group {} (share {th}) does not cover a whole run of levels",
                i + 1
            )));
        }
        starts.push(t + 1);
    }
    if t != s {
        return Err(Error::Invalid(
            "levels left over after the last group".into(),
        ));
    }
    Ok(WeightGroups {
        weights,
        theta,
        rho,
        starts,
        slot_group,
        segment_density,
    })
}

/// Limit row measure of one group: density 1 on each [β_k, γ_k].
#[derive(Debug, Clone, PartialEq)]
pub struct BandMeasure {
    pub group: usize,
    /// (β_k, γ_k) for k = 0, 1, …; k = 0 is the highest band.
    pub bands: Vec<(f64, f64)>,
}

/// Bands of group `i` (0-based): level d_i + k sits in block s − d_i − k + 1,
/// measured from the lowest block's start and stretched by 1/θ_i.
pub fn band_measure(
    boundary: &PiecewiseBoundary,
    groups: &WeightGroups,
    i: usize,
) -> Result<BandMeasure> {
    if i >= groups.len() {
        return Err(Error::OutOfRange(format!("group {i} of {}", groups.len())));
    }
    let s = boundary.level_count();
    let blocks = boundary.bands();
    let a1 = blocks[0].0;
    let th = groups.theta[i];
    let d = groups.starts[i];
    let bands = (0..groups.level_span(i))
        .map(|k| {
            let (a, b) = blocks[s - d - k];
            ((a - a1) / th, (b - a1) / th)
        })
        .collect();
    Ok(BandMeasure { group: i, bands })
}

/// Branch of t ↦ Φ(t) = z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TBranch {
    /// The root that runs off to infinity as z → 1.
    Principal,
    /// Real root in the k-th interval cut out by the band ends γ, counted
    /// from the left; Φ is monotone there.
    Interval(usize),
}

impl BandMeasure {
    pub fn mass(&self) -> f64 {
        self.bands.iter().map(|(b, g)| g - b).sum()
    }

    /// (min β, max γ).
    pub fn support(&self) -> (f64, f64) {
        let lo = self.bands.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let hi = self
            .bands
            .iter()
            .map(|b| b.1)
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    fn numerator(&self) -> Poly {
        Poly::from_roots(&self.bands.iter().map(|b| c(b.0)).collect::<Vec<_>>())
    }

    fn denominator(&self) -> Poly {
        Poly::from_roots(&self.bands.iter().map(|b| c(b.1)).collect::<Vec<_>>())
    }

    /// Band ends γ, increasing.
    pub fn poles(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self.bands.iter().map(|b| b.1).collect();
        g.sort_by(|a, b| a.partial_cmp(b).unwrap());
        g
    }

    /// Φ(t) = ∏ (t − β_k)/(t − γ_k), the exponential of the Stieltjes
    /// transform of the measure.
    pub fn phi(&self, t: Complex64) -> Result<Complex64> {
        let mut acc = c(1.0);
        for &(b, g) in &self.bands {
            if t == c(g) {
                return Err(Error::Singular(format!("t = {g} is a pole of Φ")));
            }
            acc *= (t - b) / (t - g);
        }
        Ok(acc)
    }

    /// Φ and its first three derivatives at t.
    pub fn phi_jet(&self, t: Complex64) -> Result<[Complex64; 4]> {
        let p = self.numerator();
        let q = self.denominator();
        let pd = [
            p.eval(t),
            p.derivative().eval(t),
            p.derivative().derivative().eval(t),
            p.derivative().derivative().derivative().eval(t),
        ];
        let qd = [
            q.eval(t),
            q.derivative().eval(t),
            q.derivative().derivative().eval(t),
            q.derivative().derivative().derivative().eval(t),
        ];
        if qd[0].norm() == 0.0 {
            return Err(Error::Singular(format!("t = {t} is a pole of Φ")));
        }
        // differentiate Q·Φ = P
        let r0 = pd[0] / qd[0];
        let r1 = (pd[1] - qd[1] * r0) / qd[0];
        let r2 = (pd[2] - qd[2] * r0 - 2.0 * qd[1] * r1) / qd[0];
        let r3 = (pd[3] - qd[3] * r0 - 3.0 * qd[2] * r1 - 3.0 * qd[1] * r2) / qd[0];
        Ok([r0, r1, r2, r3])
    }

    /// Solves Φ(t) = z on the requested branch.
    pub fn solve_t(&self, z: Complex64, branch: TBranch) -> Result<Complex64> {
        match branch {
            TBranch::Interval(k) => {
                if z.im != 0.0 {
                    return Err(Error::Invalid("interval branches need real z".into()));
                }
                self.solve_interval(z.re, k).map(c)
            }
            TBranch::Principal => {
                if z.im == 0.0 && z.re != 1.0 {
                    let k = if z.re > 1.0 { self.bands.len() } else { 0 };
                    return self.solve_interval(z.re, k).map(c);
                }
                self.solve_principal(z)
            }
        }
    }

    fn solve_interval(&self, z: f64, k: usize) -> Result<f64> {
        let g = self.poles();
        let d = g.len();
        if k > d {
            return Err(Error::OutOfRange(format!("interval {k} of {}", d + 1)));
        }
        let f = |t: f64| self.phi(c(t)).map(|v| v.re - z);
        let span = 1.0 + g[d - 1] - g[0];
        // Φ decreases on every interval
        let (mut lo, mut hi) = if k == 0 {
            if z >= 1.0 {
                return Err(Error::Invalid(format!("Φ < 1 left of all bands; z = {z}")));
            }
            let hi = g[0] - 1e-12 * span;
            let mut lo = g[0] - span;
            while f(lo)? < 0.0 {
                lo = g[0] - 2.0 * (g[0] - lo);
                if !lo.is_finite() {
                    return Err(Error::NoConvergence(format!("no bracket for z = {z}")));
                }
            }
            (lo, hi)
        } else if k == d {
            if z <= 1.0 {
                return Err(Error::Invalid(format!("Φ > 1 right of all bands; z = {z}")));
            }
            let lo = g[d - 1] + 1e-12 * span;
            let mut hi = g[d - 1] + span;
            while f(hi)? > 0.0 {
                hi = g[d - 1] + 2.0 * (hi - g[d - 1]);
                if !hi.is_finite() {
                    return Err(Error::NoConvergence(format!("no bracket for z = {z}")));
                }
            }
            (lo, hi)
        } else {
            let w = g[k] - g[k - 1];
            (g[k - 1] + 1e-14 * w, g[k] - 1e-14 * w)
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn solve_principal(&self, z: Complex64) -> Result<Complex64> {
        let dz = z - c(1.0);
        if dz.norm() == 0.0 {
            return Err(Error::Singular("z = 1 corresponds to t = ∞".into()));
        }
        let p = self.numerator();
        let q = self.denominator();
        let roots_at = |s: f64| p.add(&q.scale(-(c(1.0) + dz * s))).trimmed(1e-14).roots();
        let (lo, hi) = self.support();
        let mut s = (1e-6 / dz.norm()).min(1.0) * (1.0 / (1.0 + hi.abs() + lo.abs()));
        let start = roots_at(s)?;
        let mut t = start
            .into_iter()
            .fold(c(0.0), |a, b| if b.norm() > a.norm() { b } else { a });
        let mut ratio: f64 = 2.0;
        while s < 1.0 {
            let next = (s * ratio).min(1.0);
            let roots = roots_at(next)?;
            let mut d: Vec<f64> = roots.iter().map(|r| (r - t).norm()).collect();
            let i = (0..d.len()).fold(0, |a, b| if d[b] < d[a] { b } else { a });
            let best = d[i];
            d[i] = f64::INFINITY;
            let second = d.iter().copied().fold(f64::INFINITY, f64::min);
            if best > 0.3 * second {
                if ratio < 1.0 + 1e-9 {
                    return Err(Error::NoConvergence(format!(
                        "principal branch lost near z = {z}"
                    )));
                }
                ratio = 1.0 + (ratio - 1.0) * 0.5;
                continue;
            }
            t = roots[i];
            s = next;
            ratio = (1.0 + (ratio - 1.0) * 1.5).min(2.0);
        }
        Ok(t)
    }
}

// ---------------------------------------------------------------------
// per-group functions

/// Right-of-column shares entering a group's function: `gamma` for the
/// group itself, `eta` for all lighter groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancy {
    pub gamma: f64,
    pub eta: f64,
}

fn left_share(model: &AsymptoticModel, dens: &[f64], pt: ObservationPoint) -> f64 {
    let mut acc = 0.0;
    for p in 1..pt.p_t {
        acc += model.segment_weight(p) * dens[p - 1];
    }
    acc + pt.alpha * model.segment_weight(pt.p_t) * dens[pt.p_t - 1]
}

/// Shares of group `i` and of the lighter groups among the slots right of
/// the column, from the model's slot densities.
pub fn occupancy(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    groups: &WeightGroups,
    i: usize,
) -> Result<Occupancy> {
    if i >= groups.len() {
        return Err(Error::OutOfRange(format!("group {i} of {}", groups.len())));
    }
    let total =
        |g: usize| groups.rho * groups.theta[g] - left_share(model, &groups.segment_density[g], pt);
    Ok(Occupancy {
        gamma: total(i),
        eta: (i + 1..groups.len()).map(total).sum(),
    })
}

/// The function of group `i` in the column segment `p_t`, written as
/// H(t) = ρθ_i t + G0(Φ(t)) + α G1(Φ(t)) with G0, G1 rational in z = Φ(t).
/// F^{(i)}(z) is H at the t with Φ(t) = z.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    pub band: BandMeasure,
    pub rho_theta: f64,
    pub base: PoleSum,
    pub slope: PoleSum,
}

/// Builds the split group function. Only the heaviest group feels the
/// (R,+) and (L,+) slots; for the others their interaction vanishes in
/// the limit.
pub fn group_function(
    model: &AsymptoticModel,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    i: usize,
    p_t: usize,
) -> Result<GroupFunction> {
    let band = band_measure(boundary, groups, i)?;
    if p_t == 0 || p_t > model.segment_count() {
        return Err(Error::OutOfRange(format!("segment {p_t}")));
    }
    let mut base = PoleSum::zero();
    let mut slope = PoleSum::zero();
    for p in 1..=p_t {
        let target = if p < p_t { &mut base } else { &mut slope };
        let w = model.segment_weight(p);
        // (γ_i − ρθ_i) z/(z − 1): minus the group's share left of the column
        let own = w * groups.segment_density[i][p - 1];
        target.constant -= own;
        target.add_pole(c(-own), c(1.0));
        // η_i − ρΣθ_g: minus the lighter groups' share left of the column
        let lighter: f64 = (i + 1..groups.len())
            .map(|g| w * groups.segment_density[g][p - 1])
            .sum();
        target.constant -= lighter;
        if i != 0 {
            continue;
        }
        let top = groups.weights[0];
        let seg = &model.segments()[p - 1];
        for (s, &z) in seg.slots.iter().zip(&seg.zeta) {
            let cz = w * z;
            if cz == 0.0 {
                continue;
            }
            let y = top * s.x;
            match (s.letter, s.sign) {
                // z c y/(1 + z y) = c − (c/y)/(z + 1/y)
                (Letter::R, Sign::Plus) => {
                    target.constant += cz;
                    target.add_pole(c(-cz / y), c(-1.0 / y));
                }
                // z c y/(1 − z y) = −c − (c/y)/(z − 1/y)
                (Letter::L, Sign::Plus) => {
                    target.constant -= cz;
                    target.add_pole(c(-cz / y), c(1.0 / y));
                }
                (Letter::R, Sign::Minus) => {
                    return Err(Error::SlotCondition(format!(
                        "segment {p} has an (R,-) slot"
                    )));
                }
                (Letter::L, Sign::Minus) => {}
            }
        }
    }
    let rho_theta = groups.rho * groups.theta[i];
    Ok(GroupFunction {
        band,
        rho_theta,
        base: base.pruned(0.0),
        slope: slope.pruned(0.0),
    })
}

impl GroupFunction {
    /// G0 + αG1 as one rational function of z.
    pub fn combined(&self, alpha: f64) -> PoleSum {
        let mut g = self.base.clone();
        g.add(&self.slope.scaled(alpha));
        g.pruned(0.0)
    }

    /// H(t) at column fraction α.
    pub fn h(&self, t: Complex64, alpha: f64) -> Result<Complex64> {
        let z = self.band.phi(t)?;
        let g = self.combined(alpha);
        if let Some(p) = g.near_pole(z, 1e-14) {
            return Err(Error::Singular(format!("Φ(t) = {z} hits the pole {p}")));
        }
        Ok(self.rho_theta * t + g.eval(z))
    }

    /// H′(t) at column fraction α.
    pub fn h_prime(&self, t: Complex64, alpha: f64) -> Result<Complex64> {
        let j = self.band.phi_jet(t)?;
        let g = self.combined(alpha);
        Ok(self.rho_theta + g.derivative(1, j[0]) * j[1])
    }

    /// Value and three derivatives of ρθ t + G0(Φ(t)) and of G1(Φ(t)).
    pub fn jets(&self, t: f64) -> Result<([f64; 4], [f64; 4])> {
        let j = self.band.phi_jet(c(t))?;
        let compose = |g: &PoleSum| -> Result<[f64; 4]> {
            if let Some(p) = g.near_pole(j[0], 1e-14) {
                return Err(Error::Singular(format!("Φ({t}) hits the pole {p}")));
            }
            let g0 = g.eval(j[0]);
            if g.terms.is_empty() {
                return Ok([g0.re, 0.0, 0.0, 0.0]);
            }
            let (g1, g2, g3) = (
                g.derivative(1, j[0]),
                g.derivative(2, j[0]),
                g.derivative(3, j[0]),
            );
            Ok([
                g0.re,
                (g1 * j[1]).re,
                (g2 * j[1] * j[1] + g1 * j[2]).re,
                (g3 * j[1] * j[1] * j[1] + 3.0 * g2 * j[1] * j[2] + g1 * j[3]).re,
            ])
        };
        let mut base = compose(&self.base)?;
        base[0] += self.rho_theta * t;
        base[1] += self.rho_theta;
        Ok((base, compose(&self.slope)?))
    }

    /// Numerator of H(t) − w over ∏_k (P − p_k Q), where Φ = P/Q and p_k
    /// runs over the poles of G.
    pub fn cleared_minus(&self, alpha: f64, w: Complex64) -> Poly {
        let g = self.combined(alpha);
        let p = self.band.numerator();
        let q = self.band.denominator();
        let dens: Vec<Poly> = g
            .terms
            .iter()
            .map(|&(_, pole)| p.add(&q.scale(-pole)).trimmed(1e-14))
            .collect();
        let prod = |skip: Option<usize>| {
            let mut acc = Poly::constant(c(1.0));
            for (k, d) in dens.iter().enumerate() {
                if Some(k) != skip {
                    acc = poly_mul(&acc, d);
                }
            }
            acc
        };
        let linear = Poly(vec![g.constant - w, c(self.rho_theta)]);
        let mut num = poly_mul(&linear, &prod(None));
        for (k, &(a, _)) in g.terms.iter().enumerate() {
            num = num.add(&poly_mul(&q, &prod(Some(k))).scale(a));
        }
        num
    }

    /// All solutions t of H(t) = w.
    pub fn solve(&self, alpha: f64, w: Complex64) -> Result<Vec<Complex64>> {
        self.cleared_minus(alpha, w).trimmed(1e-14).roots()
    }

    /// Real parameters where H is singular or Φ(t) ∈ {0, ∞}: the band ends
    /// and every t with Φ(t) at a pole of G.
    pub fn singular_parameters(&self) -> Result<Vec<f64>> {
        let mut out: Vec<f64> = self.band.bands.iter().flat_map(|&(b, g)| [b, g]).collect();
        let p = self.band.numerator();
        let q = self.band.denominator();
        for &(_, pole) in self.base.terms.iter().chain(self.slope.terms.iter()) {
            for r in p.add(&q.scale(-pole)).trimmed(1e-14).roots()? {
                if r.im.abs() <= 1e-9 * (1.0 + r.re.abs()) {
                    out.push(r.re);
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
        Ok(out)
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![c(0.0); a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        for (j, y) in b.0.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Poly(out)
}

/// F^{(i)}(z) = (γ − ρθ_i) z/(z − 1) + η − ρΣ_{g>i}θ_g + ρθ_i t(z) + [i = 0] zR(z),
/// with t(z) on the principal branch of Φ(t) = z and the occupancy
/// supplied by the caller.
pub fn f_piecewise(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    i: usize,
    z: Complex64,
    occ: Occupancy,
) -> Result<Complex64> {
    let gf = group_function(model, groups, boundary, i, pt.p_t)?;
    let t = gf.band.solve_t(z, TBranch::Principal)?;
    // the interaction part of the split function, without the occupancy terms
    let mut inter = gf.combined(pt.alpha);
    let default = occupancy(model, pt, groups, i)?;
    // remove the occupancy part computed from the model and add the caller's
    inter.constant -= default.gamma - gf.rho_theta + default.eta - lighter_total(groups, i);
    inter.add_pole(c(-(default.gamma - gf.rho_theta)), c(1.0));
    let inter = inter.pruned(1e-15);
    let lighter = lighter_total(groups, i);
    Ok(
        (occ.gamma - gf.rho_theta) * z / (z - 1.0) + occ.eta - lighter
            + gf.rho_theta * t
            + inter.eval(z),
    )
}

fn lighter_total(groups: &WeightGroups, i: usize) -> f64 {
    (i + 1..groups.len())
        .map(|g| groups.rho * groups.theta[g])
        .sum()
}

// ---------------------------------------------------------------------
// frozen boundary

/// m = 1 only: J_i(t) = G1(Φ(t)) and J_i′(t), so that the component is
/// χ = −ρθ_i/J′, κ = ρθ_i t − ρθ_i J/J′.
pub fn j_function(
    model: &AsymptoticModel,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    i: usize,
    t: f64,
) -> Result<(f64, f64)> {
    if model.segment_count() != 1 {
        return Err(Error::Invalid(
            "the closed form needs a single segment".into(),
        ));
    }
    let gf = group_function(model, groups, boundary, i, 1)?;
    let (_, slope) = gf.jets(t)?;
    Ok((slope[0], slope[1]))
}

/// Frozen-boundary component of group `i` over the parameter grid `grid`
/// (in t). One segment uses the closed form in J; more segments solve the
/// double-root system segment by segment.
pub fn trace_component(
    model: &AsymptoticModel,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    i: usize,
    grid: &[f64],
) -> Result<ParametricCurve> {
    let mut curve = ParametricCurve::default();
    let mut branch = 0;
    let v = model.breakpoints();
    for p_t in 1..=model.segment_count() {
        let gf = group_function(model, groups, boundary, i, p_t)?;
        let sing = gf.singular_parameters()?;
        let rt = gf.rho_theta;
        let mut gap = true;
        for (n, &t) in grid.iter().enumerate() {
            let point = if model.segment_count() == 1 {
                gf.jets(t).ok().and_then(|(_, j)| {
                    let chi = -rt / j[1];
                    let kappa = rt * t - rt * j[0] / j[1];
                    ((-ALPHA_TOLERANCE..=1.0 + ALPHA_TOLERANCE).contains(&chi) && kappa.is_finite())
                        .then_some((chi, kappa))
                })
            } else {
                gf.jets(t)
                    .and_then(|(b, s)| double_root_from_jets(v, p_t, b, s, t))
                    .ok()
                    .filter(|d| {
                        d.alpha >= -ALPHA_TOLERANCE
                            && d.alpha <= 1.0 + ALPHA_TOLERANCE
                            && d.jet.kappa[0].is_finite()
                    })
                    .map(|d| (d.jet.chi[0], d.jet.kappa[0]))
            };
            match point {
                Some((chi, kappa)) => {
                    if gap && !curve.samples.is_empty() {
                        branch += 1;
                    }
                    gap = false;
                    curve.samples.push(CurveSample {
                        u: t,
                        chi,
                        kappa,
                        branch,
                    });
                }
                None => gap = true,
            }
            if let Some(&next) = grid.get(n + 1) {
                gap |= sing.iter().any(|&s| t < s && s < next);
            }
        }
    }
    if curve.samples.is_empty() {
        return Err(Error::Invalid(format!(
            "group {i}: no admissible χ on the grid"
        )));
    }
    Ok(curve)
}

/// Default t-grid for group `i`, refined towards its singular parameters
/// over all column segments.
pub fn component_grid(
    model: &AsymptoticModel,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    i: usize,
    per_interval: usize,
) -> Result<Vec<f64>> {
    let mut sing = Vec::new();
    for p_t in 1..=model.segment_count() {
        sing.extend(group_function(model, groups, boundary, i, p_t)?.singular_parameters()?);
    }
    Ok(default_grid(&sing, per_interval))
}

/// Predicted and counted rank of component `i`. The prediction is
/// |J_i|·|Ξ| for the heaviest group and |J_i| otherwise, Ξ being the poles
/// of its function in z; the count is the number of distinct parameters
/// t ∈ Φ⁻¹(Ξ) ∪ {∞}.
pub fn component_rank(
    model: &AsymptoticModel,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    i: usize,
) -> Result<(usize, usize)> {
    let gf = group_function(model, groups, boundary, i, model.segment_count())?;
    let mut xi = gf.base.clone();
    xi.add(&gf.slope);
    let xi = xi.pruned(0.0);
    let span = groups.level_span(i);
    let predicted = if i == 0 { span * xi.terms.len() } else { span };
    let p = gf.band.numerator();
    let q = gf.band.denominator();
    let mut ts: Vec<Complex64> = Vec::new();
    for &(_, pole) in &xi.terms {
        for r in p.add(&q.scale(-pole)).trimmed(1e-14).roots()? {
            if !ts.iter().any(|s| (s - r).norm() <= 1e-9 * (1.0 + r.norm())) {
                ts.push(r);
            }
        }
    }
    Ok((predicted, ts.len() + 1))
}

/// Number of nonreal conjugate pairs among the solutions of H_i(t) = κ.
pub fn nonreal_pairs(gf: &GroupFunction, alpha: f64, kappa: f64) -> Result<usize> {
    let roots = gf.solve(alpha, c(kappa))?;
    Ok(roots
        .iter()
        .filter(|r| r.im.abs() > 1e-6 * (1.0 + r.re.abs()))
        .count()
        / 2)
}

// ---------------------------------------------------------------------
// density

/// arg Φ(t(κ + iδ)) for the root that behaves like w/γ at large w,
/// followed down from a large imaginary part with the argument unwrapped.
/// H in the cleared form ρθ t + c + Σ r_k Q/(P − p_k Q), which keeps its
/// precision at large t where Φ − 1 is small.
struct ClearedH {
    rho_theta: f64,
    constant: Complex64,
    terms: Vec<(Complex64, Poly)>,
    q: Poly,
    // Q′P − QP′, common to all terms of H′
    wronskian: Poly,
}

impl ClearedH {
    fn new(gf: &GroupFunction, alpha: f64) -> Self {
        let g = gf.combined(alpha);
        let p = gf.band.numerator();
        let q = gf.band.denominator();
        let terms = g
            .terms
            .iter()
            .map(|&(r, pole)| (r, p.add(&q.scale(-pole))))
            .collect();
        let wronskian =
            poly_mul(&q.derivative(), &p).add(&poly_mul(&q, &p.derivative()).scale(c(-1.0)));
        ClearedH {
            rho_theta: gf.rho_theta,
            constant: g.constant,
            terms,
            q,
            wronskian,
        }
    }

    fn value_and_slope(&self, t: Complex64) -> Option<(Complex64, Complex64)> {
        let qt = self.q.eval(t);
        let wt = self.wronskian.eval(t);
        let (mut v, mut d) = (self.rho_theta * t + self.constant, c(self.rho_theta));
        for (r, den) in &self.terms {
            let dt = den.eval(t);
            if dt.norm() == 0.0 {
                return None;
            }
            v += r * qt / dt;
            d += r * wt / (dt * dt);
        }
        Some((v, d))
    }
}

fn group_argument(
    gf: &GroupFunction,
    alpha: f64,
    gamma: f64,
    kappa: f64,
    delta: f64,
) -> Result<f64> {
    let hc = ClearedH::new(gf, alpha);
    let (lo, hi) = gf.band.support();
    let g = gf.combined(alpha);
    let scale = 1.0
        + kappa.abs()
        + lo.abs()
        + hi.abs()
        + g.constant.norm()
        + g.terms
            .iter()
            .map(|t| t.0.norm() * (1.0 + t.1.norm()))
            .sum::<f64>();
    let s0 = 50.0 * scale;
    let w0 = Complex64::new(kappa, s0);
    let roots = gf.solve(alpha, w0)?;
    let guess = w0 / gamma;
    let mut t = roots[nearest(&roots, guess)];
    let mut arg = gf.band.phi(t)?.arg();
    let mut s = s0;
    let mut ratio: f64 = 0.7;
    // predictor-corrector in s: dt/ds = i/H′(t), then Newton on H(t) = κ + is
    while s > delta {
        let next_s = (s * ratio).max(delta);
        let w = Complex64::new(kappa, next_s);
        let slope = hc
            .value_and_slope(t)
            .ok_or_else(|| Error::Singular(format!("H has a pole at t = {t}")))?
            .1;
        let step = Complex64::new(0.0, next_s - s) / slope;
        let predicted = t + step;
        let mut t_new = predicted;
        let mut ok = false;
        for _ in 0..12 {
            let Some((hv, dh)) = hc.value_and_slope(t_new) else {
                break;
            };
            let corr = (hv - w) / dh;
            t_new -= corr;
            if corr.norm() <= 1e-12 * (1.0 + t_new.norm()) {
                ok = true;
                break;
            }
        }
        if !ok || (t_new - predicted).norm() > 0.5 * step.norm() + 1e-12 * (1.0 + t.norm()) {
            if ratio > 1.0 - 1e-9 {
                return Err(Error::NoConvergence(format!(
                    "group root lost at κ = {kappa}, Im = {s}, t = {t}"
                )));
            }
            ratio = 1.0 - (1.0 - ratio) * 0.5;
            continue;
        }
        arg += (gf.band.phi(t_new)? / gf.band.phi(t)?).arg();
        t = t_new;
        s = next_s;
        ratio = (1.0 - (1.0 - ratio) * 1.5).max(0.5);
    }
    Ok(arg)
}

fn nearest(roots: &[Complex64], z: Complex64) -> usize {
    (0..roots.len()).fold(0, |a, b| {
        if (roots[b] - z).norm() < (roots[a] - z).norm() {
            b
        } else {
            a
        }
    })
}

/// Unclamped −(1/π) Σ_i arg z_i(κ + iδ) over groups with slots right of
/// the column.
pub fn density_piecewise_at_offset(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    kappa: f64,
    delta: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..groups.len() {
        let occ = occupancy(model, pt, groups, i)?;
        if occ.gamma <= 1e-14 {
            continue;
        }
        let gf = group_function(model, groups, boundary, i, pt.p_t)?;
        acc += group_argument(&gf, pt.alpha, occ.gamma, kappa, delta)?;
    }
    Ok(-acc / PI)
}

/// Density at κ, extrapolated to δ → 0 from δ, δ/2, δ/4 and clamped to [0, 1].
pub fn density_piecewise(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
    kappa: f64,
) -> Result<f64> {
    let d = 1e-6 * (1.0 + kappa.abs());
    let g1 = density_piecewise_at_offset(model, pt, groups, boundary, kappa, d)?;
    let g2 = density_piecewise_at_offset(model, pt, groups, boundary, kappa, d / 2.0)?;
    let g4 = density_piecewise_at_offset(model, pt, groups, boundary, kappa, d / 4.0)?;
    Ok(((8.0 * g4 - 6.0 * g2 + g1) / 3.0).clamp(0.0, 1.0))
}

/// Interval outside which the density vanishes: spanned by the values of
/// H_i at the band ends (where a root passes through z = 0 or ∞) and at
/// its real critical points.
pub fn support_piecewise(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    groups: &WeightGroups,
    boundary: &PiecewiseBoundary,
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..groups.len() {
        if occupancy(model, pt, groups, i)?.gamma <= 1e-14 {
            continue;
        }
        let gf = group_function(model, groups, boundary, i, pt.p_t)?;
        let mut push = |k: f64| {
            if k.is_finite() {
                lo = lo.min(k);
                hi = hi.max(k);
            }
        };
        let g = gf.combined(pt.alpha);
        for &(b, gm) in &gf.band.bands {
            push(gf.rho_theta * b + g.eval(c(0.0)).re);
            // Φ → ∞ at γ, where G tends to its constant
            push(gf.rho_theta * gm + g.constant.re);
        }
        let sing = gf.singular_parameters()?;
        let grid = default_grid(&sing, 400);
        let dh = |t: f64| gf.h_prime(c(t), pt.alpha).map(|v| v.re).ok();
        for w in grid.windows(2) {
            if sing.iter().any(|&s| w[0] < s && s < w[1]) {
                continue;
            }
            let (Some(a), Some(b)) = (dh(w[0]), dh(w[1])) else {
                continue;
            };
            if a.signum() == b.signum() {
                continue;
            }
            let (mut l, mut r, mut fl) = (w[0], w[1], a);
            for _ in 0..100 {
                let m = 0.5 * (l + r);
                let Some(fm) = dh(m) else { break };
                if fm.signum() == fl.signum() {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            if let Ok(v) = gf.h(c(0.5 * (l + r)), pt.alpha) {
                push(v.re);
            }
        }
    }
    if !lo.is_finite() {
        return Ok((0.0, 0.0));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limitshape::Segment;
    use crate::railyard::Letter::*;
    use crate::railyard::Sign::*;
    use crate::railyard::Slot;

    /// Four slots (L−, 1), (R+, 1/2), (L+, 1/3), (L−, tiny) and five
    /// levels 6N, 5N, 2N, N, 0 on quarter, quarter and three sixths of the rows.
    pub(crate) fn two_group_setup() -> (AsymptoticModel, PiecewiseBoundary) {
        let model = AsymptoticModel::periodic(
            vec![0.0, 1.0],
            vec![vec![
                Slot::new(L, Minus, 1.0),
                Slot::new(R, Plus, 0.5),
                Slot::new(L, Plus, 1.0 / 3.0),
                Slot::new(L, Minus, 1e-8),
            ]],
        )
        .unwrap();
        let n = 120u32;
        let b = PiecewiseBoundary::from_blocks(
            vec![6 * n, 5 * n, 2 * n, n, 0],
            vec![30, 30, 20, 20, 20],
        )
        .unwrap();
        (model, b)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn blocks_scale_to_bands() {
        let (_, b) = two_group_setup();
        let want = [
            (-1.0, -5.0 / 6.0),
            (1.0 / 6.0, 1.0 / 3.0),
            (4.0 / 3.0, 1.5),
            (4.5, 4.75),
            (5.75, 6.0),
        ];
        for (g, w) in b.bands().iter().zip(want) {
            assert!(close(g.0, w.0) && close(g.1, w.1), "{g:?} vs {w:?}");
        }
        // the twenty rows on level 0 are trailing zeros
        assert_eq!(b.partition().unwrap().len(), 100);
        assert!(close(b.min_level_gap().unwrap(), 1.0));
        assert!(PiecewiseBoundary::from_bands(vec![(0.0, 0.5), (0.4, 0.9)]).is_err());
        assert!(PiecewiseBoundary::from_blocks(vec![3, 3], vec![1, 1]).is_err());
    }

    #[test]
    fn groups_of_two_weights() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        assert_eq!(g.len(), 2);
        assert!(close(g.theta[0], 0.5) && close(g.theta[1], 0.5) && close(g.rho, 0.5));
        assert_eq!(g.starts, vec![1, 3, 6]);
        assert_eq!(g.slot_group[0], vec![Some(0), None, None, Some(1)]);
    }

    #[test]
    fn equal_weights_share_a_group() {
        let m = AsymptoticModel::periodic(
            vec![0.0, 0.5, 1.0],
            vec![
                vec![Slot::new(L, Minus, 0.5)],
                vec![Slot::new(L, Minus, 0.5), Slot::new(R, Plus, 0.5)],
            ],
        )
        .unwrap();
        let b = PiecewiseBoundary::from_bands(vec![(0.0, 1.0)]).unwrap();
        let g = group_weights(&m, &b).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.slot_group, vec![vec![Some(0)], vec![Some(0), None]]);
        assert!(close(g.rho, 0.75));
        let band = band_measure(&b, &g, 0).unwrap();
        assert_eq!(band.bands, vec![(0.0, 1.0)]);
    }

    #[test]
    fn misaligned_groups_are_rejected() {
        let (m, _) = two_group_setup();
        let b = PiecewiseBoundary::from_bands(vec![(0.0, 0.3), (1.0, 1.7)]).unwrap();
        assert!(group_weights(&m, &b).is_err());
    }

    #[test]
    fn bands_of_both_groups() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        let top = band_measure(&b, &g, 0).unwrap();
        let want = [(13.5, 14.0), (11.0, 11.5)];
        for (x, w) in top.bands.iter().zip(want) {
            assert!(close(x.0, w.0) && close(x.1, w.1));
        }
        let low = band_measure(&b, &g, 1).unwrap();
        let want = [(14.0 / 3.0, 5.0), (7.0 / 3.0, 8.0 / 3.0), (0.0, 1.0 / 3.0)];
        for (x, w) in low.bands.iter().zip(want) {
            assert!(close(x.0, w.0) && close(x.1, w.1));
        }
        assert!(close(top.mass(), 1.0) && close(low.mass(), 1.0));
        assert!(close(top.phi(c(12.0)).unwrap().re, 1.5));
        assert!(band_measure(&b, &g, 2).is_err());
    }

    #[test]
    fn single_band_phi_and_inverse() {
        let band = BandMeasure {
            group: 0,
            bands: vec![(0.0, 1.0)],
        };
        assert!(close(band.phi(c(2.0)).unwrap().re, 2.0));
        assert!((band.phi(c(1e9)).unwrap() - 1.0).norm() < 1e-8);
        let t = band.solve_t(c(2.0), TBranch::Principal).unwrap();
        assert!((t - 2.0).norm() < 1e-12);
        let t = band.solve_t(c(0.5), TBranch::Interval(0)).unwrap();
        assert!((t + 1.0).norm() < 1e-12);
        let t = band
            .solve_t(Complex64::new(1.0 + 1e-7, 1e-7), TBranch::Principal)
            .unwrap();
        assert!(t.norm() > 1e6);
        let z = Complex64::new(0.3, -0.8);
        let t = band.solve_t(z, TBranch::Principal).unwrap();
        assert!((band.phi(t).unwrap() - z).norm() < 1e-10);
    }

    #[test]
    fn every_interval_has_one_root() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        let low = band_measure(&b, &g, 1).unwrap();
        for z in [-3.0, 0.2, 0.9, 1.7, 40.0] {
            for k in 1..3 {
                let t = low.solve_t(c(z), TBranch::Interval(k)).unwrap();
                assert!(
                    (low.phi(t).unwrap().re - z).abs() < 1e-9 * (1.0 + z.abs()),
                    "z={z} k={k}"
                );
            }
        }
    }

    #[test]
    fn phi_jet_matches_differences() {
        let band = BandMeasure {
            group: 0,
            bands: vec![(0.0, 0.5), (2.0, 2.5)],
        };
        let t = c(1.3);
        let j = band.phi_jet(t).unwrap();
        let h = 1e-4;
        let f = |x: f64| band.phi(c(x)).unwrap().re;
        assert!((j[1].re - (f(1.3 + h) - f(1.3 - h)) / (2.0 * h)).abs() < 1e-6);
        assert!((j[2].re - (f(1.3 + h) - 2.0 * f(1.3) + f(1.3 - h)) / (h * h)).abs() < 1e-4);
    }

    #[test]
    fn coset_sum_equals_jacobi_trudi() {
        let lam = Partition::new(vec![3, 3, 1, 0]).unwrap();
        let x = [5.0, 5.0, 1.0, 1.0];
        let u = [1.0; 4];
        let full = coset_schur(&lam, &x, &u, CosetMode::Full).unwrap();
        let jt = schur(&lam, &x);
        assert!((full - jt).abs() <= 1e-10 * jt.abs());
        let u = [1.1, 0.9, 1.05, 1.0];
        let w: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a * b).collect();
        let full = coset_schur(&lam, &x, &u, CosetMode::Full).unwrap();
        assert!((full - schur(&lam, &w)).abs() <= 1e-10 * full.abs());
    }

    #[test]
    fn one_class_is_principal_scaling() {
        let lam = Partition::new(vec![4, 2, 1]).unwrap();
        let x = [0.7; 4];
        let got = coset_schur(&lam, &x, &[1.0; 4], CosetMode::Full).unwrap();
        let want = 0.7f64.powi(7) * crate::symfunc::schur_principal(&lam, 4).unwrap();
        assert!((got - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn dominant_coset_at_large_ratio() {
        let lam = Partition::new(vec![3, 3, 1, 0]).unwrap();
        let t = 1e4;
        let x = [t, t, 1.0, 1.0];
        let full = coset_schur(&lam, &x, &[1.0; 4], CosetMode::Full).unwrap();
        let dom = coset_schur(&lam, &x, &[1.0; 4], CosetMode::Dominant).unwrap();
        assert!(((dom - full) / full).abs() < 1e-6);
    }

    #[test]
    fn lighter_group_has_no_interaction_poles() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        let low = group_function(&m, &g, &b, 1, 1).unwrap();
        assert!(low.base.terms.is_empty());
        assert_eq!(low.slope.poles(), vec![c(1.0)]);
        let top = group_function(&m, &g, &b, 0, 1).unwrap();
        let mut poles: Vec<f64> = top.slope.poles().iter().map(|p| p.re).collect();
        poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(poles.len(), 3);
        assert!(close(poles[0], -2.0) && close(poles[1], 1.0) && close(poles[2], 3.0));
    }

    #[test]
    fn j_functions_of_two_groups() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        for t in [-3.0, 0.5, 2.0, 7.0, 12.2, 20.0] {
            let p1 = (t - 11.0) * (t - 13.5) / ((t - 11.5) * (t - 14.0));
            let want1 = p1 / 4.0 * (1.0 / (2.0 + p1) + 1.0 / (3.0 - p1) - 1.0 / (p1 - 1.0)) - 0.25;
            let (j1, _) = j_function(&m, &g, &b, 0, t).unwrap();
            assert!(close(j1, want1), "t = {t}: {j1} vs {want1}");
            let p2 = t * (t - 7.0 / 3.0) * (t - 14.0 / 3.0)
                / ((t - 1.0 / 3.0) * (t - 8.0 / 3.0) * (t - 5.0));
            let want2 = -p2 / (4.0 * (p2 - 1.0));
            let (j2, dj2) = j_function(&m, &g, &b, 1, t).unwrap();
            assert!(close(j2, want2), "t = {t}: {j2} vs {want2}");
            let h = 1e-5;
            let fd = (j_function(&m, &g, &b, 1, t + h).unwrap().0
                - j_function(&m, &g, &b, 1, t - h).unwrap().0)
                / (2.0 * h);
            assert!((dj2 - fd).abs() < 1e-5 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn f_at_phi_is_h() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        let pt = ObservationPoint { p_t: 1, alpha: 0.4 };
        for i in 0..2 {
            let gf = group_function(&m, &g, &b, i, 1).unwrap();
            let occ = occupancy(&m, pt, &g, i).unwrap();
            for t in [Complex64::new(30.0, 2.0), Complex64::new(-4.0, 1.0)] {
                let z = gf.band.phi(t).unwrap();
                let via_f = f_piecewise(&m, pt, &g, &b, i, z, occ).unwrap();
                let via_h = gf.h(t, pt.alpha).unwrap();
                assert!(
                    (via_f - via_h).norm() < 1e-9,
                    "group {i}: {via_f} vs {via_h}"
                );
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_double_root_system() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        // same model split at χ = 0.4 into two identical segments
        let seg = m.segments()[0].clone();
        let split = AsymptoticModel::new(vec![0.0, 0.4, 1.0], vec![seg.clone(), Segment { ..seg }])
            .unwrap();
        let gs = group_weights(&split, &b).unwrap();
        for i in 0..2 {
            let grid = component_grid(&m, &g, &b, i, 60).unwrap();
            let one = trace_component(&m, &g, &b, i, &grid).unwrap();
            let two = trace_component(&split, &gs, &b, i, &grid).unwrap();
            for s in &one.samples {
                let Some(o) = two
                    .samples
                    .iter()
                    .find(|o| o.u == s.u && (o.chi - s.chi).abs() < 1e-7)
                else {
                    continue;
                };
                assert!((o.kappa - s.kappa).abs() < 1e-8 * (1.0 + s.kappa.abs()));
            }
            assert!(two.samples.len() >= one.samples.len());
        }
    }

    #[test]
    fn nothing_outside_the_support() {
        let (m, b) = two_group_setup();
        let g = group_weights(&m, &b).unwrap();
        let pt = ObservationPoint { p_t: 1, alpha: 0.3 };
        let (lo, hi) = support_piecewise(&m, pt, &g, &b).unwrap();
        assert!(density_piecewise(&m, pt, &g, &b, hi + 1.0).unwrap() < 1e-9);
        assert!(density_piecewise(&m, pt, &g, &b, lo - 1.0).unwrap() < 1e-9);
    }
}
