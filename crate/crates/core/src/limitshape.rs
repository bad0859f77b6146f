//! Limit shape of a column under a staircase left boundary: the functions
//! Q′, W and F(z) = z(Q′(z) + W(z)), contour-integral moments and the
//! limit density.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::poly::PoleSum;
use crate::railyard::{Letter, RailYardSpec, Sign, Slot};

/// One periodic segment: its slot pattern and the density ζ of each slot.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub slots: Vec<Slot>,
    pub zeta: Vec<f64>,
}

impl Segment {
    /// ζ = 1/n on every slot of the period.
    pub fn periodic(slots: Vec<Slot>) -> Self {
        let n = slots.len() as f64;
        let zeta = vec![1.0 / n; slots.len()];
        Segment { slots, zeta }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticModel {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl AsymptoticModel {
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Segment>) -> Result<Self> {
        if breakpoints.len() != segments.len() + 1 || segments.is_empty() {
            return Err(Error::Shape(format!(
                "{} breakpoints for {} segments",
                breakpoints.len(),
                segments.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Invalid(format!(
                "breakpoints must increase: {breakpoints:?}"
            )));
        }
        for (p, seg) in segments.iter().enumerate() {
            if seg.slots.is_empty() || seg.slots.len() != seg.zeta.len() {
                return Err(Error::Shape(format!(
                    "segment {}: slot and density counts differ or are zero",
                    p + 1
                )));
            }
            if let Some(s) = seg.slots.iter().find(|s| !(s.x > 0.0) || !s.x.is_finite()) {
                return Err(Error::Invalid(format!(
                    "segment {}: weight {} is not positive",
                    p + 1,
                    s.x
                )));
            }
            if seg.zeta.iter().any(|z| !(0.0..=1.0).contains(z)) {
                return Err(Error::Invalid(format!(
                    "segment {}: densities must lie in [0,1]",
                    p + 1
                )));
            }
        }
        // a + slot may precede a − slot of the same letter whenever its
        // segment is not to the right
        for (p, sp) in segments.iter().enumerate() {
            for a in &sp.slots {
                if a.sign != Sign::Plus {
                    continue;
                }
                for sq in &segments[p..] {
                    for b in sq
                        .slots
                        .iter()
                        .filter(|b| b.sign == Sign::Minus && b.letter == a.letter)
                    {
                        if a.x * b.x >= 1.0 {
                            return Err(Error::Invalid(format!(
                                "weights {} and {} of letter {:?} have product ≥ 1",
                                a.x, b.x, a.letter
                            )));
                        }
                    }
                }
            }
        }
        Ok(AsymptoticModel {
            breakpoints,
            segments,
        })
    }

    /// Canonical periodic model, ζ = 1/n_p.
    pub fn periodic(breakpoints: Vec<f64>, periods: Vec<Vec<Slot>>) -> Result<Self> {
        Self::new(
            breakpoints,
            periods.into_iter().map(Segment::periodic).collect(),
        )
    }

    /// Exact-frequency model of a finite graph seen from the column with
    /// slots `l..t-1` on its left: one segment per side, each slot
    /// carrying density 1/(segment length), breakpoints at slot fractions.
    pub fn from_finite(spec: &RailYardSpec, t: i64) -> Result<(Self, ObservationPoint)> {
        if t < spec.l() || t > spec.r() + 1 {
            return Err(Error::OutOfRange(format!("column {t}")));
        }
        let k = (t - spec.l()) as usize;
        let n = spec.len();
        let (left, right) = spec.slots().split_at(k);
        let frac = k as f64 / n as f64;
        let seg = |s: &[Slot]| Segment {
            slots: s.to_vec(),
            zeta: vec![1.0 / s.len() as f64; s.len()],
        };
        if left.is_empty() {
            return Ok((
                Self::new(vec![0.0, 1.0], vec![seg(right)])?,
                ObservationPoint { p_t: 1, alpha: 0.0 },
            ));
        }
        if right.is_empty() {
            return Ok((
                Self::new(vec![0.0, 1.0], vec![seg(left)])?,
                ObservationPoint { p_t: 1, alpha: 1.0 },
            ));
        }
        let model = Self::new(vec![0.0, frac, 1.0], vec![seg(left), seg(right)])?;
        Ok((model, ObservationPoint { p_t: 2, alpha: 0.0 }))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// (V_p − V_{p−1})/(V_m − V_0) for 1-based p.
    pub fn segment_weight(&self, p: usize) -> f64 {
        let v = &self.breakpoints;
        (v[p] - v[p - 1]) / (v[v.len() - 1] - v[0])
    }
}

/// Column position: segment `p_t` (1-based) and fraction `alpha` of it
/// lying to the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationPoint {
    pub p_t: usize,
    pub alpha: f64,
}

impl ObservationPoint {
    pub fn chi(&self, model: &AsymptoticModel) -> f64 {
        let v = model.breakpoints();
        v[self.p_t - 1] + self.alpha * (v[self.p_t] - v[self.p_t - 1])
    }

    pub fn from_chi(model: &AsymptoticModel, chi: f64) -> Result<Self> {
        let v = model.breakpoints();
        let m = v.len() - 1;
        if !(v[0]..=v[m]).contains(&chi) {
            return Err(Error::OutOfRange(format!(
                "χ = {chi} outside [{}, {}]",
                v[0], v[m]
            )));
        }
        let p = (1..=m).find(|&p| chi <= v[p]).unwrap_or(m);
        Ok(ObservationPoint {
            p_t: p,
            alpha: (chi - v[p - 1]) / (v[p] - v[p - 1]),
        })
    }

    fn validate(&self, model: &AsymptoticModel) -> Result<()> {
        if self.p_t == 0 || self.p_t > model.segment_count() || !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::OutOfRange(format!("observation point {self:?}")));
        }
        Ok(())
    }
}

/// Which part of F a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Q,
    W,
}

/// How a term scales with α.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaScale {
    One,
    Alpha,
    OneMinusAlpha,
}

/// Contribution `c·z/(z − pole)` to F.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTerm {
    pub c: f64,
    pub pole: Complex64,
    pub part: Part,
    pub scale: AlphaScale,
}

impl FTerm {
    fn coef(&self, alpha: f64) -> f64 {
        match self.scale {
            AlphaScale::One => self.c,
            AlphaScale::Alpha => alpha * self.c,
            AlphaScale::OneMinusAlpha => (1.0 - alpha) * self.c,
        }
    }
}

/// Every term of F for column segment `p_t` and staircase slope `m_stair`.
pub fn f_terms(model: &AsymptoticModel, p_t: usize, m_stair: u32) -> Result<Vec<FTerm>> {
    if m_stair == 0 {
        return Err(Error::Invalid("staircase slope must be ≥ 1".into()));
    }
    let mut out = Vec::new();
    for (pi, seg) in model.segments().iter().enumerate() {
        let p = pi + 1;
        let w = model.segment_weight(p);
        for (s, &z) in seg.slots.iter().zip(&seg.zeta) {
            let c = w * z;
            if c == 0.0 {
                continue;
            }
            let x = s.x;
            let left_scale = match p.cmp(&p_t) {
                core::cmp::Ordering::Less => Some(AlphaScale::One),
                core::cmp::Ordering::Equal => Some(AlphaScale::Alpha),
                core::cmp::Ordering::Greater => None,
            };
            match (s.letter, s.sign) {
                (Letter::L, Sign::Minus) => {
                    for k in 1..m_stair {
                        let omega =
                            Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m_stair as f64);
                        out.push(FTerm {
                            c,
                            pole: omega * x,
                            part: Part::Q,
                            scale: AlphaScale::One,
                        });
                    }
                    let scale = match p.cmp(&p_t) {
                        core::cmp::Ordering::Less => None,
                        core::cmp::Ordering::Equal => Some(AlphaScale::OneMinusAlpha),
                        core::cmp::Ordering::Greater => Some(AlphaScale::One),
                    };
                    if let Some(scale) = scale {
                        out.push(FTerm {
                            c,
                            pole: Complex64::new(x, 0.0),
                            part: Part::W,
                            scale,
                        });
                    }
                }
                (Letter::R, Sign::Plus) => {
                    if let Some(scale) = left_scale {
                        out.push(FTerm {
                            c,
                            pole: Complex64::new(-1.0 / x, 0.0),
                            part: Part::Q,
                            scale,
                        });
                    }
                }
                (Letter::L, Sign::Plus) => {
                    if let Some(scale) = left_scale {
                        out.push(FTerm {
                            c: -c,
                            pole: Complex64::new(1.0 / x, 0.0),
                            part: Part::Q,
                            scale,
                        });
                    }
                }
                (Letter::R, Sign::Minus) => {
                    return Err(Error::SlotCondition(format!(
                        "segment {p} has an (R,-) slot"
                    )));
                }
            }
        }
    }
    Ok(out)
}

fn pole_sum<'a>(terms: impl Iterator<Item = &'a FTerm>, coef: impl Fn(&FTerm) -> f64) -> PoleSum {
    let mut f = PoleSum::zero();
    for t in terms {
        let c = coef(t);
        if c != 0.0 {
            f.constant += c;
            f.add_pole(t.pole * c, t.pole);
        }
    }
    f.pruned(1e-300)
}

/// F as a sum of simple poles at the given α.
pub fn f_pole_sum(model: &AsymptoticModel, pt: ObservationPoint, m_stair: u32) -> Result<PoleSum> {
    pt.validate(model)?;
    let terms = f_terms(model, pt.p_t, m_stair)?;
    Ok(pole_sum(terms.iter(), |t| t.coef(pt.alpha)))
}

/// F = base + α·slope for the column segment `p_t`.
pub fn f_split(model: &AsymptoticModel, p_t: usize, m_stair: u32) -> Result<(PoleSum, PoleSum)> {
    let terms = f_terms(model, p_t, m_stair)?;
    let base = pole_sum(terms.iter(), |t| match t.scale {
        AlphaScale::Alpha => 0.0,
        _ => t.c,
    });
    let slope = pole_sum(terms.iter(), |t| match t.scale {
        AlphaScale::One => 0.0,
        AlphaScale::Alpha => t.c,
        AlphaScale::OneMinusAlpha => -t.c,
    });
    Ok((base, slope))
}

fn part_eval(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
    part: Part,
    u: Complex64,
) -> Result<Complex64> {
    pt.validate(model)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for t in f_terms(model, pt.p_t, m_stair)?
        .iter()
        .filter(|t| t.part == part)
    {
        let c = t.coef(pt.alpha);
        if c == 0.0 {
            continue;
        }
        if (u - t.pole).norm() <= 1e-14 * (1.0 + t.pole.norm()) {
            return Err(Error::Singular(format!("u = {u} is a pole")));
        }
        acc += c / (u - t.pole);
    }
    Ok(acc)
}

/// Q′(u).
pub fn q_prime(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
    u: Complex64,
) -> Result<Complex64> {
    part_eval(model, pt, m_stair, Part::Q, u)
}

/// W(u).
pub fn w_eval(model: &AsymptoticModel, pt: ObservationPoint, u: Complex64) -> Result<Complex64> {
    part_eval(model, pt, 1, Part::W, u)
}

pub fn f_eval(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
    z: Complex64,
) -> Result<Complex64> {
    let f = f_pole_sum(model, pt, m_stair)?;
    if let Some(p) = f.near_pole(z, 1e-14) {
        return Err(Error::Singular(format!("z = {z} is the pole {p}")));
    }
    Ok(f.eval(z))
}

/// Distinct poles of F.
pub fn poles(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
) -> Result<Vec<Complex64>> {
    Ok(f_pole_sum(model, pt, m_stair)?.poles())
}

/// Distinct poles enclosed by the moment contour: the (L,−) weights from
/// the column segment onward, with their F-residues.
pub fn contour_poles(model: &AsymptoticModel, pt: ObservationPoint) -> Result<Vec<(f64, f64)>> {
    pt.validate(model)?;
    let mut w = PoleSum::zero();
    for t in f_terms(model, pt.p_t, 1)?
        .iter()
        .filter(|t| t.part == Part::W)
    {
        let c = t.coef(pt.alpha);
        w.add_pole(t.pole * c, t.pole);
    }
    Ok(w.pruned(1e-300)
        .terms
        .iter()
        .map(|&(a, p)| (p.re, a.re))
        .collect())
}

/// Total mass of the limit measure: the (L,−) fraction to the right of
/// the column.
pub fn mass(model: &AsymptoticModel, pt: ObservationPoint) -> Result<f64> {
    Ok(contour_poles(model, pt)?.iter().map(|&(x, a)| a / x).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue {
    pub value: f64,
    /// Change of the last node doubling.
    pub self_error: f64,
    pub nodes: usize,
}

/// `(1/(2πi(k+1))) ∮ F(z)^{k+1} dz/z` around the contour poles, by the
/// trapezoid rule on one circle per pole, doubling the node count until
/// the change drops below 1e-13.
pub fn moment(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
    k: u32,
) -> Result<MomentValue> {
    if k == 0 {
        return Err(Error::Invalid("moment order must be positive".into()));
    }
    let f = f_pole_sum(model, pt, m_stair)?;
    let centers: Vec<f64> = contour_poles(model, pt)?.iter().map(|c| c.0).collect();
    if centers.is_empty() {
        return Ok(MomentValue {
            value: 0.0,
            self_error: 0.0,
            nodes: 0,
        });
    }
    let mut singular: Vec<Complex64> = f.poles();
    singular.push(Complex64::new(0.0, 0.0));
    let mut circles = Vec::with_capacity(centers.len());
    for &c in &centers {
        let cz = Complex64::new(c, 0.0);
        let d = singular
            .iter()
            .map(|&s| (s - cz).norm())
            .filter(|&d| d > 1e-13 * (1.0 + c.abs()))
            .fold(f64::INFINITY, f64::min);
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::Singular(format!(
                "cannot isolate pole {c}; singularities {singular:?}"
            )));
        }
        circles.push((cz, 0.5 * d));
    }
    let integrand = |z: Complex64| f.eval(z).powu(k + 1) / z;
    let total = |n: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, r) in &circles {
            for j in 0..n {
                let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                acc += integrand(c + e * r) * e * r;
            }
        }
        // dz = i r e^{iθ} dθ, and the i cancels against 1/(2πi)
        acc / n as f64
    };
    let mut n = 64;
    let mut prev = total(n);
    loop {
        n *= 2;
        let next = total(n);
        let change = (next - prev).norm() / (k + 1) as f64;
        if change < 1e-13 || n >= 1 << 18 {
            return Ok(MomentValue {
                value: next.re / (k + 1) as f64,
                self_error: change,
                nodes: n,
            });
        }
        prev = next;
    }
}

/// Σ over branches of arg z_j(κ + iδ), each branch followed from near its
/// pole at large imaginary part down to δ with the argument unwrapped.
fn branch_argument(f: &PoleSum, anchors: &[(f64, f64)], kappa: f64, delta: f64) -> Result<f64> {
    let scale: f64 =
        1.0 + kappa.abs() + f.constant.norm() + f.terms.iter().map(|t| t.0.norm()).sum::<f64>();
    let mut sep = f64::INFINITY;
    let ps = f.poles();
    for (i, a) in ps.iter().enumerate() {
        for b in &ps[i + 1..] {
            sep = sep.min((a - b).norm());
        }
        sep = sep.min(a.norm());
    }
    let s0 = 1e4 * scale / sep.min(1.0);
    // start each branch on its pole: F ≈ a/(z − p) + O(1) gives z ≈ p + a/w
    let w0 = Complex64::new(kappa, s0);
    let mut tracked: Vec<Complex64> = anchors
        .iter()
        .map(|&(x, _)| {
            let a = f
                .terms
                .iter()
                .find(|t| (t.1.re - x).abs() <= 1e-13 * (1.0 + x))
                .map(|t| t.0)
                .unwrap();
            Complex64::new(x, 0.0) + a / (w0 - f.constant)
        })
        .collect();
    let roots0 = f.solve(w0)?;
    for z in tracked.iter_mut() {
        *z = nearest(&roots0, *z);
    }
    let mut args: Vec<f64> = tracked.iter().map(|z| z.arg()).collect();
    let mut s = s0;
    let mut ratio: f64 = 0.7;
    while s > delta {
        let next_s = (s * ratio).max(delta);
        let roots = f.solve(Complex64::new(kappa, next_s))?;
        let picks: Vec<usize> = tracked.iter().map(|&z| nearest_index(&roots, z)).collect();
        let mut distinct = picks.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < picks.len() {
            if ratio > 0.999 {
                return Err(Error::NoConvergence(format!(
                    "branch tracking collided at κ = {kappa}"
                )));
            }
            ratio = 1.0 - (1.0 - ratio) * 0.5;
            continue;
        }
        for (j, &i) in picks.iter().enumerate() {
            let z = roots[i];
            args[j] += (z / tracked[j]).arg();
            tracked[j] = z;
        }
        s = next_s;
        ratio = (1.0 - (1.0 - ratio) * 1.5).max(0.5);
    }
    Ok(args.iter().sum())
}

fn nearest_index(roots: &[Complex64], z: Complex64) -> usize {
    let mut best = 0;
    for (i, r) in roots.iter().enumerate() {
        if (r - z).norm() < (roots[best] - z).norm() {
            best = i;
        }
    }
    best
}

fn nearest(roots: &[Complex64], z: Complex64) -> Complex64 {
    roots[nearest_index(roots, z)]
}

/// Unclamped −(1/π) Σ arg z_j(κ + iδ).
pub fn density_at_offset(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
    kappa: f64,
    delta: f64,
) -> Result<f64> {
    let f = f_pole_sum(model, pt, m_stair)?;
    let anchors = contour_poles(model, pt)?;
    if anchors.is_empty() {
        return Ok(0.0);
    }
    Ok(-branch_argument(&f, &anchors, kappa, delta)? / PI)
}

/// Density of the limit measure at κ, extrapolated to δ → 0 from
/// δ, δ/2, δ/4 with δ = 1e-6(1+|κ|), clamped to [0, 1].
pub fn density(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
    kappa: f64,
) -> Result<f64> {
    let d = 1e-6 * (1.0 + kappa.abs());
    let g1 = density_at_offset(model, pt, m_stair, kappa, d)?;
    let g2 = density_at_offset(model, pt, m_stair, kappa, d / 2.0)?;
    let g4 = density_at_offset(model, pt, m_stair, kappa, d / 4.0)?;
    let v = (8.0 * g4 - 6.0 * g2 + g1) / 3.0;
    Ok(v.clamp(0.0, 1.0))
}

/// Real critical points u of F with their values F(u).
pub fn critical_points(f: &PoleSum) -> Result<Vec<(f64, f64)>> {
    let roots = f.cleared_derivative().roots()?;
    let mut out: Vec<(f64, f64)> = roots
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
        .filter(|z| f.near_pole(Complex64::new(z.re, 0.0), 1e-10).is_none())
        .map(|z| (z.re, f.eval(Complex64::new(z.re, 0.0)).re))
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}

/// Interval outside which the density vanishes: it can only change where
/// two roots collide or a branch passes through 0 or ∞, so the support is
/// spanned by F(0) = 0, F(∞) and the real critical values.
pub fn support_bounds(
    model: &AsymptoticModel,
    pt: ObservationPoint,
    m_stair: u32,
) -> Result<(f64, f64)> {
    let f = f_pole_sum(model, pt, m_stair)?;
    let mut lo = 0.0f64.min(f.constant.re);
    let mut hi = 0.0f64.max(f.constant.re);
    for (_, k) in critical_points(&f)? {
        lo = lo.min(k);
        hi = hi.max(k);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::railyard::Letter::*;
    use crate::railyard::Sign::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    pub(crate) fn three_slot_model() -> AsymptoticModel {
        AsymptoticModel::periodic(
            vec![0.0, 1.0],
            vec![vec![
                Slot::new(L, Minus, 1.0 / 3.0),
                Slot::new(R, Plus, 0.5),
                Slot::new(L, Plus, 1.0),
            ]],
        )
        .unwrap()
    }

    #[test]
    fn empty_model_parts_vanish() {
        let m = AsymptoticModel::new(
            vec![0.0, 1.0],
            vec![Segment {
                slots: vec![Slot::new(L, Plus, 0.5)],
                zeta: vec![0.0],
            }],
        )
        .unwrap();
        let pt = ObservationPoint { p_t: 1, alpha: 0.3 };
        assert_eq!(q_prime(&m, pt, 1, c(2.0)).unwrap(), c(0.0));
        assert_eq!(w_eval(&m, pt, c(2.0)).unwrap(), c(0.0));
    }

    #[test]
    fn w_of_three_slot_model() {
        let m = three_slot_model();
        for alpha in [0.0, 0.25, 1.0] {
            let pt = ObservationPoint { p_t: 1, alpha };
            for u in [2.0, -1.5, 0.7] {
                let want = (1.0 - alpha) / (3.0 * (u - 1.0 / 3.0));
                assert!((w_eval(&m, pt, c(u)).unwrap().re - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn f_matches_uv_form() {
        let m = three_slot_model();
        for chi in [0.1, 0.5, 0.9] {
            let pt = ObservationPoint { p_t: 1, alpha: chi };
            for u in [2.0, -0.5, 0.2, 5.0] {
                let v = u / (3.0 * u - 1.0);
                let uf = u / (3.0 * (u + 2.0)) + u / (3.0 * (1.0 - u));
                let want = (1.0 - chi) * v + chi * uf;
                assert!((f_eval(&m, pt, 1, c(u)).unwrap().re - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pole_set() {
        let m = three_slot_model();
        let pt = ObservationPoint { p_t: 1, alpha: 0.5 };
        let mut ps: Vec<f64> = poles(&m, pt, 1).unwrap().iter().map(|p| p.re).collect();
        ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(ps.len(), 3);
        for (a, b) in ps.iter().zip([-2.0, 1.0 / 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let mut ps: Vec<f64> = poles(&m, pt, 2).unwrap().iter().map(|p| p.re).collect();
        ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ps[1] + 1.0 / 3.0).abs() < 1e-14 && ps.len() == 4);
    }

    #[test]
    fn residue_at_contour_pole() {
        let m = three_slot_model();
        let alpha = 0.4;
        let pt = ObservationPoint { p_t: 1, alpha };
        let x = 1.0 / 3.0;
        let eps = 1e-7;
        let got = f_eval(&m, pt, 1, c(x + eps)).unwrap().re * eps;
        let want = x * (1.0 / 3.0) * (1.0 - alpha);
        assert!((got - want).abs() < 1e-6);
    }

    #[test]
    fn uniform_first_moment_is_half() {
        let m = AsymptoticModel::periodic(vec![0.0, 1.0], vec![vec![Slot::new(L, Minus, 0.4)]])
            .unwrap();
        let pt = ObservationPoint { p_t: 1, alpha: 0.0 };
        let v = moment(&m, pt, 1, 1).unwrap();
        assert!((v.value - 0.5).abs() < 1e-12, "{v:?}");
        assert!(v.self_error < 1e-9);
        // uniform on [0,1]: k-th moment 1/(k+1)
        for k in 2..5 {
            assert!((moment(&m, pt, 1, k).unwrap().value - 1.0 / (k + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn density_of_uniform() {
        let m = AsymptoticModel::periodic(vec![0.0, 1.0], vec![vec![Slot::new(L, Minus, 0.4)]])
            .unwrap();
        let pt = ObservationPoint { p_t: 1, alpha: 0.0 };
        assert!((density(&m, pt, 1, 0.5).unwrap() - 1.0).abs() < 1e-6);
        assert!(density(&m, pt, 1, 1.5).unwrap() < 1e-6);
        assert!(density(&m, pt, 1, -0.5).unwrap() < 1e-6);
        let (lo, hi) = support_bounds(&m, pt, 1).unwrap();
        assert!((lo - 0.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn from_chi_round_trip() {
        let m = AsymptoticModel::periodic(
            vec![0.0, 0.3, 1.0],
            vec![
                vec![Slot::new(L, Minus, 1.0 / 3.0)],
                vec![Slot::new(L, Minus, 1.0)],
            ],
        )
        .unwrap();
        for chi in [0.0, 0.1, 0.3, 0.65, 1.0] {
            let pt = ObservationPoint::from_chi(&m, chi).unwrap();
            assert!((pt.chi(&m) - chi).abs() < 1e-15);
        }
        assert!(ObservationPoint::from_chi(&m, 1.5).is_err());
    }
}
