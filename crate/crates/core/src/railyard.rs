//! Rail-yard graphs, their dimer coverings and height functions.
//!
//! Vertices sit at `(x, k + 1/2)`; throughout this module a vertex is named
//! by its integer `k`. Odd abscissae `2m−1` carry a particle–hole profile:
//! a vertex matched to its left is a particle, one matched to its right is
//! a hole. For the profile of a partition λ the particles are at
//! `k = λ_i − i` (i ≥ 1) and the holes at `k = j − 1 − λ'_j` (j ≥ 1).
//!
//! Coverings are stored as the sequence of column partitions; the edge set
//! is rebuilt on a finite window outside of which every covering looks like
//! the all-empty one.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::partitions::{interlaces, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// Letter, sign and diagonal weight of one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slot {
    pub letter: Letter,
    pub sign: Sign,
    pub x: f64,
}

impl Slot {
    pub fn new(letter: Letter, sign: Sign, x: f64) -> Self {
        Slot { letter, sign, x }
    }
}

/// Validated graph data for columns `l..=r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RailYardSpec {
    l: i64,
    slots: Vec<Slot>,
}

impl RailYardSpec {
    /// Checks lengths, positivity of weights and that x_i·x_j < 1 whenever
    /// i < j share a letter with b_i = + and b_j = −.
    pub fn build(l: i64, r: i64, a: &[Letter], b: &[Sign], x: &[f64]) -> Result<Self> {
        if r < l {
            return Err(Error::Shape(format!("r = {r} < l = {l}")));
        }
        let n = (r - l + 1) as usize;
        if a.len() != n || b.len() != n || x.len() != n {
            return Err(Error::Shape(format!(
                "expected {n} slots, got |a| = {}, |b| = {}, |x| = {}",
                a.len(),
                b.len(),
                x.len()
            )));
        }
        let slots: Vec<Slot> = (0..n).map(|i| Slot::new(a[i], b[i], x[i])).collect();
        Self::from_slots(l, slots)
    }

    pub fn from_slots(l: i64, slots: Vec<Slot>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Shape("no columns".into()));
        }
        for (i, s) in slots.iter().enumerate() {
            if !(s.x.is_finite() && s.x >= 0.0) {
                return Err(Error::Invalid(format!(
                    "weight x_{} = {} is not a nonnegative number",
                    l + i as i64,
                    s.x
                )));
            }
        }
        for i in 0..slots.len() {
            for j in i + 1..slots.len() {
                let (si, sj) = (slots[i], slots[j]);
                if si.letter == sj.letter && si.sign == Sign::Plus && sj.sign == Sign::Minus {
                    let product = si.x * sj.x;
                    if product >= 1.0 {
                        return Err(Error::Convergence {
                            i: l + i as i64,
                            j: l + j as i64,
                            product,
                        });
                    }
                }
            }
        }
        Ok(RailYardSpec { l, slots })
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn r(&self) -> i64 {
        self.l + self.slots.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Slot of column `m` (absolute index in `l..=r`).
    pub fn slot(&self, m: i64) -> Slot {
        self.slots[(m - self.l) as usize]
    }
}

/// Does the pair (λ^(m), λ^(m+1)) fit the slot of column m?
pub fn transition_allowed(slot: Slot, before: &Partition, after: &Partition) -> bool {
    match (slot.letter, slot.sign) {
        (Letter::L, Sign::Plus) => interlaces(after, before, false),
        (Letter::L, Sign::Minus) => interlaces(before, after, false),
        (Letter::R, Sign::Plus) => interlaces(after, before, true),
        (Letter::R, Sign::Minus) => interlaces(before, after, true),
    }
}

/// Number of diagonal edges in a column with the given neighbouring
/// partitions.
pub fn diagonal_count(before: &Partition, after: &Partition) -> u64 {
    before.size().abs_diff(after.size())
}

/// Particle positions of the first `count` rows.
pub fn particles(lambda: &Partition, count: usize) -> Vec<i64> {
    (1..=count)
        .map(|i| lambda.part(i - 1) as i64 - i as i64)
        .collect()
}

/// Hole positions of the first `count` columns.
pub fn holes(lambda: &Partition, count: usize) -> Vec<i64> {
    let c = lambda.conjugate();
    (1..=count)
        .map(|j| j as i64 - 1 - c.part(j - 1) as i64)
        .collect()
}

/// Particle/hole indicators of one odd column on the window `[-k, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnProfile {
    pub window: i64,
    /// `occupied[k + window]` is true for a particle at `k`.
    pub occupied: Vec<bool>,
}

impl ColumnProfile {
    pub fn from_partition(lambda: &Partition, window: i64) -> Self {
        let mut occupied = vec![false; 2 * window as usize];
        // every row i > window sits below the window
        for p in particles(lambda, window as usize + lambda.len()) {
            if (-window..window).contains(&p) {
                occupied[(p + window) as usize] = true;
            }
        }
        ColumnProfile { window, occupied }
    }

    pub fn is_particle(&self, k: i64) -> bool {
        if k < -self.window {
            true
        } else if k >= self.window {
            false
        } else {
            self.occupied[(k + self.window) as usize]
        }
    }

    /// Particles at k ≥ 0 minus holes at k < 0.
    pub fn charge(&self) -> i64 {
        let up = (0..self.window).filter(|&k| self.is_particle(k)).count() as i64;
        let down = (-self.window..0).filter(|&k| !self.is_particle(k)).count() as i64;
        up - down
    }

    /// λ_i = number of holes below the i-th highest particle.
    pub fn to_partition(&self) -> Result<Partition> {
        if self.charge() != 0 {
            return Err(Error::InvalidCovering(format!(
                "profile has charge {}",
                self.charge()
            )));
        }
        let mut parts = Vec::new();
        let mut holes_below = 0u32;
        let mut counts = Vec::new();
        for k in -self.window..self.window {
            if self.is_particle(k) {
                counts.push(holes_below);
            } else {
                holes_below += 1;
            }
        }
        // counts are listed bottom to top
        for &c in counts.iter().rev() {
            if c == 0 {
                break;
            }
            parts.push(c);
        }
        Ok(Partition::from_sorted(parts))
    }
}

/// How the even vertex `(2m, k)` is matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenMatch {
    /// Horizontal edge to `(2m−1, k)`.
    Left,
    /// Horizontal edge to `(2m+1, k)`.
    Right,
    /// Diagonal edge to the odd vertex at height `k ± 1`.
    Diagonal,
}

/// A dimer covering in sequence encoding: λ^(l), …, λ^(r+1).
#[derive(Debug, Clone, PartialEq)]
pub struct DimerCovering {
    partitions: Vec<Partition>,
}

impl DimerCovering {
    /// Validates the interlacing pattern against the slots.
    pub fn from_partitions(spec: &RailYardSpec, partitions: Vec<Partition>) -> Result<Self> {
        if partitions.len() != spec.len() + 1 {
            return Err(Error::Shape(format!(
                "expected {} partitions, got {}",
                spec.len() + 1,
                partitions.len()
            )));
        }
        for (i, s) in spec.slots().iter().enumerate() {
            if !transition_allowed(*s, &partitions[i], &partitions[i + 1]) {
                return Err(Error::InvalidCovering(format!(
                    "column {}: {:?} -> {:?} does not fit ({:?},{:?})",
                    spec.l() + i as i64,
                    partitions[i],
                    partitions[i + 1],
                    s.letter,
                    s.sign
                )));
            }
        }
        Ok(DimerCovering { partitions })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn into_partitions(self) -> Vec<Partition> {
        self.partitions
    }

    pub fn is_pure(&self) -> bool {
        self.partitions.first().is_some_and(Partition::is_empty)
            && self.partitions.last().is_some_and(Partition::is_empty)
    }

    /// Smallest window that contains every non-trivial vertex, plus a margin.
    pub fn default_window(&self) -> i64 {
        self.partitions
            .iter()
            .map(|p| (p.part(0) as usize + p.len()) as i64)
            .max()
            .unwrap_or(0)
            + 2
    }

    pub fn edges(&self, spec: &RailYardSpec) -> EdgeSet {
        EdgeSet::build(spec, self, self.default_window())
    }

    /// (column, even k, odd k) for every present diagonal edge.
    pub fn diagonal_edges(&self, spec: &RailYardSpec) -> Vec<(i64, i64, i64)> {
        let e = self.edges(spec);
        let mut out = Vec::new();
        for m in spec.l()..=spec.r() {
            let s = spec.slot(m);
            let step = if s.sign == Sign::Plus { 1 } else { -1 };
            for k in -e.window..e.window {
                if e.even(m, k) == EvenMatch::Diagonal {
                    out.push((m, k, k + step));
                }
            }
        }
        out
    }
}

/// The all-empty pure covering: no diagonals, weight 1, height 0.
pub fn base_covering(spec: &RailYardSpec) -> DimerCovering {
    DimerCovering {
        partitions: vec![Partition::empty(); spec.len() + 1],
    }
}

/// w(M) = ∏ x_m^{d_m}.
pub fn covering_weight(spec: &RailYardSpec, cov: &DimerCovering) -> f64 {
    spec.slots()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.x.powi(diagonal_count(&cov.partitions[i], &cov.partitions[i + 1]) as i32)
        })
        .product()
}

/// Explicit matching of all even vertices on the window `[-window, window)`.
#[derive(Debug, Clone)]
pub struct EdgeSet {
    l: i64,
    window: i64,
    letters: Vec<Slot>,
    /// `cols[m − l][k + window]`
    cols: Vec<Vec<EvenMatch>>,
    left_boundary: ColumnProfile,
}

impl EdgeSet {
    pub fn build(spec: &RailYardSpec, cov: &DimerCovering, window: i64) -> Self {
        let w = window as usize;
        let mut cols = Vec::with_capacity(spec.len());
        for (i, s) in spec.slots().iter().enumerate() {
            let before = &cov.partitions[i];
            let after = &cov.partitions[i + 1];
            let mut col = vec![EvenMatch::Left; 2 * w];
            let idx = |k: i64| (k + window) as usize;
            match s.letter {
                Letter::L => {
                    // particles of `after` go right; holes pair up in order
                    let cnt = 2 * w + before.len() + after.len();
                    let next = ColumnProfile::from_partition(after, window);
                    for k in -window..window {
                        if next.is_particle(k) {
                            col[idx(k)] = EvenMatch::Right;
                        }
                    }
                    for (qa, qb) in holes(after, cnt).into_iter().zip(holes(before, cnt)) {
                        if (-window..window).contains(&qa) && qa != qb {
                            col[idx(qa)] = EvenMatch::Diagonal;
                        }
                    }
                }
                Letter::R => {
                    let cnt = 2 * w + before.len() + after.len();
                    let prev = ColumnProfile::from_partition(before, window);
                    for k in -window..window {
                        if prev.is_particle(k) {
                            col[idx(k)] = EvenMatch::Right;
                        }
                    }
                    for (pb, pa) in particles(before, cnt)
                        .into_iter()
                        .zip(particles(after, cnt))
                    {
                        if (-window..window).contains(&pb) && pb != pa {
                            col[idx(pb)] = EvenMatch::Diagonal;
                        }
                    }
                }
            }
            cols.push(col);
        }
        EdgeSet {
            l: spec.l(),
            window,
            letters: spec.slots().to_vec(),
            cols,
            left_boundary: ColumnProfile::from_partition(&cov.partitions[0], window),
        }
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    fn r(&self) -> i64 {
        self.l + self.cols.len() as i64 - 1
    }

    /// Match of the even vertex `(2m, k)`; outside the window the all-empty
    /// pattern applies.
    pub fn even(&self, m: i64, k: i64) -> EvenMatch {
        if k < -self.window {
            return EvenMatch::Right;
        }
        if k >= self.window {
            return EvenMatch::Left;
        }
        self.cols[(m - self.l) as usize][(k + self.window) as usize]
    }

    fn diag_target(&self, m: i64, k: i64) -> i64 {
        let s = self.letters[(m - self.l) as usize];
        if s.sign == Sign::Plus {
            k + 1
        } else {
            k - 1
        }
    }

    /// Even neighbours of column m that use the odd vertex `(2m−1, k)`
    /// from the right (through column m).
    fn odd_right_uses(&self, m: i64, k: i64) -> u32 {
        if m > self.r() {
            return 0;
        }
        let mut n = (self.even(m, k) == EvenMatch::Left) as u32;
        if self.letters[(m - self.l) as usize].letter == Letter::L {
            for kk in [k - 1, k + 1] {
                if self.even(m, kk) == EvenMatch::Diagonal && self.diag_target(m, kk) == k {
                    n += 1;
                }
            }
        }
        n
    }

    /// Uses of the odd vertex `(2m−1, k)` from the left (through column m−1).
    fn odd_left_uses(&self, m: i64, k: i64) -> u32 {
        let c = m - 1;
        if c < self.l {
            return 0;
        }
        let mut n = (self.even(c, k) == EvenMatch::Right) as u32;
        if self.letters[(c - self.l) as usize].letter == Letter::R {
            for kk in [k - 1, k + 1] {
                if self.even(c, kk) == EvenMatch::Diagonal && self.diag_target(c, kk) == k {
                    n += 1;
                }
            }
        }
        n
    }

    /// Checks every inner vertex in the window is covered exactly once, the
    /// boundary vertices at most once, and (for `pure`) the boundary rules.
    pub fn validate(&self, pure: bool) -> Result<()> {
        for m in self.l..=self.r() + 1 {
            for k in -self.window..self.window {
                let total = self.odd_left_uses(m, k) + self.odd_right_uses(m, k);
                let boundary = m == self.l || m == self.r() + 1;
                if (!boundary && total != 1) || (boundary && total > 1) {
                    return Err(Error::InvalidCovering(format!(
                        "odd vertex ({}, {k}) covered {total} times",
                        2 * m - 1
                    )));
                }
                if m == self.l && !pure && total != (!self.left_boundary.is_particle(k)) as u32 {
                    return Err(Error::InvalidCovering(format!(
                        "left boundary vertex {k} disagrees with the boundary partition"
                    )));
                }
                if pure && boundary {
                    let want = if m == self.l { k >= 0 } else { k < 0 };
                    if (total == 1) != want {
                        return Err(Error::InvalidCovering(format!(
                            "boundary vertex ({}, {k}) breaks the pure boundary rule",
                            2 * m - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Profile of odd column `2m−1`, read from the edges.
    pub fn profile(&self, m: i64) -> ColumnProfile {
        let w = self.window;
        let occupied = (-w..w)
            .map(|k| {
                if m == self.l {
                    self.odd_right_uses(m, k) == 0
                } else {
                    self.odd_left_uses(m, k) == 1
                }
            })
            .collect();
        ColumnProfile {
            window: w,
            occupied,
        }
    }

    /// Raw count formula on the line `2m − 1/2` (odd vertex on the left):
    /// 2·(present horizontals + present diagonals) crossed below `y`.
    pub fn odd_line_count(&self, m: i64, y: f64) -> i64 {
        let mut total = 0;
        // horizontals at heights k + 1/2
        let kmax = (y - 0.5).ceil() as i64 - 1;
        // below the window every odd-left horizontal is absent
        for k in -self.window..=kmax {
            total += (self.even(m, k) == EvenMatch::Left) as i64;
        }
        if self.letters[(m - self.l) as usize].letter == Letter::L {
            for k in -self.window..self.window {
                if self.even(m, k) == EvenMatch::Diagonal {
                    let cross = k.max(self.diag_target(m, k)) as f64;
                    if cross < y {
                        total += 1;
                    }
                }
            }
        }
        2 * total
    }

    /// Raw count formula on the line `2m + 1/2` (even vertex on the left):
    /// 2·(absent horizontals − present diagonals) crossed below `y`.
    /// Horizontals below the window are present, so the count starts there.
    pub fn even_line_count(&self, m: i64, y: f64) -> i64 {
        let mut total = 0;
        let kmax = (y - 0.5).ceil() as i64 - 1;
        for k in -self.window..=kmax {
            total += (self.even(m, k) != EvenMatch::Right) as i64;
        }
        if self.letters[(m - self.l) as usize].letter == Letter::R {
            for k in -self.window..self.window {
                if self.even(m, k) == EvenMatch::Diagonal {
                    let cross = k.max(self.diag_target(m, k)) as f64;
                    if cross < y {
                        total -= 1;
                    }
                }
            }
        }
        2 * total
    }
}

/// Which of the two vertical lines inside column m a face point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    /// `x = 2m − 1/2`, crossing odd-left edges.
    OddLeft,
    /// `x = 2m + 1/2`, crossing even-left edges.
    EvenLeft,
}

fn check_face_y(y: f64) -> Result<()> {
    if !y.is_finite() || (y - y.floor() - 0.5).abs() < 1e-12 || (y - y.round()).abs() < 1e-12 {
        return Err(Error::Invalid(format!("y = {y} lies on an edge crossing")));
    }
    Ok(())
}

/// Height at `(2m ∓ 1/2, y)`, relative to [`base_covering`], accumulated
/// crossing by crossing from the bottom of the window.
pub fn height(spec: &RailYardSpec, cov: &DimerCovering, m: i64, line: Line, y: f64) -> Result<i64> {
    check_face_y(y)?;
    if m < spec.l() || m > spec.r() {
        return Err(Error::OutOfRange(format!("column {m}")));
    }
    let e = cov.edges(spec);
    let base = base_covering(spec).edges_with_window(spec, e.window);
    Ok(height_increments(&e, m, line, y) - height_increments(&base, m, line, y))
}

impl DimerCovering {
    fn edges_with_window(&self, spec: &RailYardSpec, window: i64) -> EdgeSet {
        EdgeSet::build(spec, self, window)
    }
}

/// Preliminary height: upward crossings from the window bottom.
fn height_increments(e: &EdgeSet, m: i64, line: Line, y: f64) -> i64 {
    let slot = e.letters[(m - e.l) as usize];
    let mut h = 0;
    let kmax = (y - 0.5).ceil() as i64 - 1;
    for k in -e.window..=kmax {
        let em = e.even(m, k);
        h += match line {
            Line::OddLeft => {
                if em == EvenMatch::Left {
                    1
                } else {
                    -1
                }
            }
            Line::EvenLeft => {
                if em == EvenMatch::Right {
                    -1
                } else {
                    1
                }
            }
        };
    }
    let diag_here = matches!(
        (line, slot.letter),
        (Line::OddLeft, Letter::L) | (Line::EvenLeft, Letter::R)
    );
    if diag_here {
        for k in -e.window..e.window {
            if e.even(m, k) == EvenMatch::Diagonal {
                let cross = k.max(e.diag_target(m, k)) as f64;
                if cross < y {
                    h += if line == Line::OddLeft { 2 } else { -2 };
                }
            }
        }
    }
    h
}

/// Height from the closed counting formulas, shifted by the base covering.
pub fn height_by_counts(
    spec: &RailYardSpec,
    cov: &DimerCovering,
    m: i64,
    line: Line,
    y: f64,
) -> Result<i64> {
    check_face_y(y)?;
    let e = cov.edges(spec);
    let base = base_covering(spec).edges_with_window(spec, e.window);
    Ok(match line {
        Line::OddLeft => e.odd_line_count(m, y) - base.odd_line_count(m, y),
        Line::EvenLeft => e.even_line_count(m, y) - base.even_line_count(m, y),
    })
}

/// Change of height moving right at height `y` from line `from` of column
/// m to the next line (the even-left line of m, or the odd-left line of
/// m + 1). Only diagonals can be crossed on such a path.
pub fn horizontal_step(
    spec: &RailYardSpec,
    cov: &DimerCovering,
    m: i64,
    from: Line,
    y: f64,
) -> i64 {
    let e = cov.edges(spec);
    let base = base_covering(spec).edges_with_window(spec, e.window);
    horizontal_increment(&e, m, from, y) - horizontal_increment(&base, m, from, y)
}

fn horizontal_increment(e: &EdgeSet, m: i64, from: Line, y: f64) -> i64 {
    // x-range of the path and the column whose diagonals live there
    let (col, lo, hi) = match from {
        Line::OddLeft => (m, 2.0 * m as f64 - 0.5, 2.0 * m as f64 + 0.5),
        Line::EvenLeft => (m, 2.0 * m as f64 + 0.5, 2.0 * m as f64 + 1.5),
    };
    let mut h = 0;
    for c in [col, col + 1] {
        if c < e.l || c > e.r() {
            continue;
        }
        let s = e.letters[(c - e.l) as usize];
        for k in -e.window..e.window {
            if e.even(c, k) != EvenMatch::Diagonal {
                continue;
            }
            let t = e.diag_target(c, k);
            let (x0, y0) = (2.0 * c as f64, k as f64 + 0.5);
            let x1 = if s.letter == Letter::L {
                x0 - 1.0
            } else {
                x0 + 1.0
            };
            let y1 = t as f64 + 0.5;
            // the diagonal's height at the path's x, if the path meets it
            let (xa, xb) = (x0.min(x1), x0.max(x1));
            let (xl, xr) = (xa.max(lo), xb.min(hi));
            if xl >= xr {
                continue;
            }
            let at = |x: f64| y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            let (ya, yb) = (at(xl), at(xr));
            if y > ya.min(yb) && y < ya.max(yb) {
                // odd vertex north of an eastward path means it is on the left
                h += if y1 > y0 { 2 } else { -2 };
            }
        }
    }
    h
}

/// Column partition λ^(m) read back from the edges.
pub fn column_partition(spec: &RailYardSpec, cov: &DimerCovering, m: i64) -> Result<Partition> {
    if m < spec.l() || m > spec.r() + 1 {
        return Err(Error::OutOfRange(format!(
            "column {m} outside [{}..{}]",
            spec.l(),
            spec.r() + 1
        )));
    }
    cov.edges(spec).profile(m).to_partition()
}

/// Charge of odd column `2m−1`, read from the edges.
pub fn charge(spec: &RailYardSpec, cov: &DimerCovering, m: i64) -> Result<i64> {
    if m < spec.l() || m > spec.r() + 1 {
        return Err(Error::OutOfRange(format!("column {m}")));
    }
    Ok(cov.edges(spec).profile(m).charge())
}

/// All coverings with given boundaries whose partitions have size ≤ `max_size`.
pub fn enumerate_coverings(
    spec: &RailYardSpec,
    left: &Partition,
    right: &Partition,
    max_size: u32,
) -> Vec<DimerCovering> {
    let pool = Partition::all_up_to(max_size);
    let mut out = Vec::new();
    let mut cur = vec![left.clone()];
    fn rec(
        spec: &RailYardSpec,
        pool: &[Partition],
        right: &Partition,
        cur: &mut Vec<Partition>,
        out: &mut Vec<DimerCovering>,
    ) {
        let i = cur.len() - 1;
        let slot = spec.slots()[i];
        let last = i + 1 == spec.len();
        for nu in pool {
            if last && nu != right {
                continue;
            }
            if transition_allowed(slot, &cur[i], nu) {
                cur.push(nu.clone());
                if last {
                    out.push(DimerCovering {
                        partitions: cur.clone(),
                    });
                } else {
                    rec(spec, pool, right, cur, out);
                }
                cur.pop();
            }
        }
    }
    if left.size() <= max_size as u64 {
        rec(spec, &pool, right, &mut cur, &mut out);
    }
    out
}

/// Set of distinct partitions visited along a covering, handy for reports.
pub fn visited(cov: &DimerCovering) -> BTreeSet<Partition> {
    cov.partitions.iter().cloned().collect()
}
