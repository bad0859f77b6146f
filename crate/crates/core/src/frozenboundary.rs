//! Frozen boundaries for staircase boundaries: the U/V parametrisation,
//! the dual curve, double-root tracing for any slope and the cloud-curve
//! checks (tangency counts, winding).

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::limitshape::{f_split, AsymptoticModel};
use crate::poly::PoleSum;
use crate::railyard::{Letter, Sign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub u: f64,
    pub chi: f64,
    pub kappa: f64,
    /// Consecutive samples with the same tag form one smooth piece.
    pub branch: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParametricCurve {
    pub samples: Vec<CurveSample>,
}

impl ParametricCurve {
    /// Samples grouped by branch tag, in order.
    pub fn branches(&self) -> Vec<&[CurveSample]> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.samples.len() {
            if i == self.samples.len() || self.samples[i].branch != self.samples[start].branch {
                if i > start {
                    out.push(&self.samples[start..i]);
                }
                start = i;
            }
        }
        out
    }

    /// (χ_min, χ_max, κ_min, κ_max).
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut b = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for s in &self.samples {
            b.0 = b.0.min(s.chi);
            b.1 = b.1.max(s.chi);
            b.2 = b.2.min(s.kappa);
            b.3 = b.3.max(s.kappa);
        }
        b
    }
}

/// Tangent line `χ^∨ χ + κ^∨ κ + 1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint {
    pub chi: f64,
    pub kappa: f64,
}

/// A curve point with its first two parameter derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub chi: [f64; 3],
    pub kappa: [f64; 3],
}

/// Tangent line at a point with velocity (dχ, dκ).
pub fn tangent_dual(chi: f64, kappa: f64, dchi: f64, dkappa: f64) -> Result<DualPoint> {
    let d = chi * dkappa - kappa * dchi;
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Singular(
            "tangent line passes through the origin".into(),
        ));
    }
    Ok(DualPoint {
        chi: -dkappa / d,
        kappa: dchi / d,
    })
}

/// The dual of a jet, as a jet of order one.
pub fn dual_jet(j: &Jet) -> Result<(DualPoint, DualPoint)> {
    let [x, x1, x2] = j.chi;
    let [y, y1, y2] = j.kappa;
    let d = x * y1 - y * x1;
    let d1 = x * y2 - y * x2;
    let p = tangent_dual(x, y, x1, y1)?;
    let da = (-y2 * d + y1 * d1) / (d * d);
    let db = (x2 * d - x1 * d1) / (d * d);
    Ok((p, DualPoint { chi: da, kappa: db }))
}

/// Tangent line of the dual curve: recovers the primal point.
pub fn double_dual(j: &Jet) -> Result<(f64, f64)> {
    let (p, dp) = dual_jet(j)?;
    let q = tangent_dual(p.chi, p.kappa, dp.chi, dp.kappa)?;
    Ok((q.chi, q.kappa))
}

fn single_segment(model: &AsymptoticModel) -> Result<()> {
    if model.segment_count() != 1 {
        return Err(Error::Invalid(format!(
            "needs one segment, got {}",
            model.segment_count()
        )));
    }
    Ok(())
}

/// U and V as pole sums in u.
pub fn uv_pole_sums(model: &AsymptoticModel) -> Result<(PoleSum, PoleSum)> {
    single_segment(model)?;
    let seg = &model.segments()[0];
    let (mut u, mut v) = (PoleSum::zero(), PoleSum::zero());
    // ζ·u/(u − p) = ζ + ζp/(u − p)
    let push = |f: &mut PoleSum, c: f64, p: f64| {
        f.constant += c;
        f.add_pole(Complex64::new(c * p, 0.0), Complex64::new(p, 0.0));
    };
    for (s, &z) in seg.slots.iter().zip(&seg.zeta) {
        if z == 0.0 {
            continue;
        }
        match (s.letter, s.sign) {
            (Letter::R, Sign::Plus) => push(&mut u, z, -1.0 / s.x),
            (Letter::L, Sign::Plus) => push(&mut u, -z, 1.0 / s.x),
            (Letter::L, Sign::Minus) => push(&mut v, z, s.x),
            (Letter::R, Sign::Minus) => {
                return Err(Error::SlotCondition("(R,-) slot in the period".into()))
            }
        }
    }
    Ok((u, v))
}

fn real_eval(f: &PoleSum, u: f64, order: u32) -> Result<f64> {
    let z = Complex64::new(u, 0.0);
    if let Some(p) = f.near_pole(z, 1e-14) {
        return Err(Error::Singular(format!("u = {u} is the pole {p}")));
    }
    Ok(if order == 0 {
        f.eval(z).re
    } else {
        f.derivative(order, z).re
    })
}

/// (U(u), V(u)).
pub fn uv_functions(model: &AsymptoticModel, u: f64) -> Result<(f64, f64)> {
    let (uf, vf) = uv_pole_sums(model)?;
    Ok((real_eval(&uf, u, 0)?, real_eval(&vf, u, 0)?))
}

/// Point of the m = 1, M = 1 boundary at parameter u.
pub fn point_m1(model: &AsymptoticModel, u: f64) -> Result<(f64, f64)> {
    let (uf, vf) = uv_pole_sums(model)?;
    let (uu, vv) = (real_eval(&uf, u, 0)?, real_eval(&vf, u, 0)?);
    let (du, dv) = (real_eval(&uf, u, 1)?, real_eval(&vf, u, 1)?);
    if dv == du {
        return Err(Error::Singular(format!("V′ = U′ at u = {u}")));
    }
    let chi = dv / (dv - du);
    Ok((chi, chi * uu + (1.0 - chi) * vv))
}

/// Parameter grid refined logarithmically towards every singular point,
/// with both unbounded tails; `per_interval` points per piece.
pub fn default_grid(singular: &[f64], per_interval: usize) -> Vec<f64> {
    let mut s: Vec<f64> = singular.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + a.abs()));
    let half = (per_interval / 2).max(2);
    let offset = |j: usize, n: usize, lo: f64, hi: f64| {
        10f64.powf(lo + (hi - lo) * j as f64 / (n - 1) as f64)
    };
    let mut out = Vec::new();
    if s.is_empty() {
        for j in 0..per_interval.max(2) {
            out.push(-1e3 + 2e3 * j as f64 / (per_interval.max(2) - 1) as f64);
        }
        return out;
    }
    for j in (0..half).rev() {
        out.push(s[0] - offset(j, half, -6.0, 6.0));
    }
    for w in s.windows(2) {
        let h = 0.5 * (w[1] - w[0]);
        let lo = (1e-6 * h.max(1e-300)).log10();
        for j in 0..half {
            out.push(w[0] + offset(j, half, lo, h.log10()));
        }
        for j in (0..half - 1).rev() {
            out.push(w[1] - offset(j, half, lo, h.log10()));
        }
    }
    for j in 0..half {
        out.push(s[s.len() - 1] + offset(j, half, -6.0, 6.0));
    }
    out
}

/// Real poles of F over all column segments.
pub fn singular_parameters(model: &AsymptoticModel, m_stair: u32) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for p in 1..=model.segment_count() {
        let (b, s) = f_split(model, p, m_stair)?;
        for z in b.poles().into_iter().chain(s.poles()) {
            if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
                out.push(z.re);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + a.abs()));
    Ok(out)
}

/// Curve of the m = 1, M = 1 boundary, χ = V′/(V′ − U′), κ = χU + (1−χ)V.
pub fn trace_m1(model: &AsymptoticModel, grid: &[f64]) -> Result<ParametricCurve> {
    let (uf, vf) = uv_pole_sums(model)?;
    let mut curve = ParametricCurve::default();
    let mut branch = 0;
    let mut gap = false;
    for (i, &u) in grid.iter().enumerate() {
        match point_m1(model, u) {
            Ok((chi, kappa)) if chi.is_finite() && kappa.is_finite() => {
                if gap && !curve.samples.is_empty() {
                    branch += 1;
                }
                gap = false;
                curve.samples.push(CurveSample {
                    u,
                    chi,
                    kappa,
                    branch,
                });
            }
            _ => gap = true,
        }
        // a new branch starts after every pole of U or V
        if let Some(&next) = grid.get(i + 1) {
            let crosses = uf
                .poles()
                .iter()
                .chain(vf.poles().iter())
                .any(|p| u < p.re && p.re < next);
            gap |= crosses;
        }
    }
    if curve.samples.is_empty() {
        return Err(Error::Invalid("no usable parameter in the grid".into()));
    }
    Ok(curve)
}

/// Dual curve point ((U − V)/V, −1/V).
pub fn dual(model: &AsymptoticModel, u: f64) -> Result<DualPoint> {
    let (uu, vv) = uv_functions(model, u)?;
    if vv == 0.0 {
        return Err(Error::Singular(format!("V vanishes at u = {u}")));
    }
    Ok(DualPoint {
        chi: (uu - vv) / vv,
        kappa: -1.0 / vv,
    })
}

/// Jet of the dual curve ((U − V)/V, −1/V) at u.
pub fn dual_m1_jet(model: &AsymptoticModel, u: f64) -> Result<(DualPoint, DualPoint)> {
    let (uf, vf) = uv_pole_sums(model)?;
    let (uu, vv) = (real_eval(&uf, u, 0)?, real_eval(&vf, u, 0)?);
    let (du, dv) = (real_eval(&uf, u, 1)?, real_eval(&vf, u, 1)?);
    if vv == 0.0 {
        return Err(Error::Singular(format!("V vanishes at u = {u}")));
    }
    Ok((
        DualPoint {
            chi: (uu - vv) / vv,
            kappa: -1.0 / vv,
        },
        DualPoint {
            chi: (du * vv - uu * dv) / (vv * vv),
            kappa: dv / (vv * vv),
        },
    ))
}

/// Double root of F = F0 + αF1 at a real parameter u, with its jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleRoot {
    pub alpha: f64,
    pub jet: Jet,
    /// |F′(u)| at the returned α, relative to the size of F0′.
    pub residual: f64,
}

/// Solves F′(u) = 0 for α and differentiates the resulting curve twice.
pub fn double_root_at(
    model: &AsymptoticModel,
    p_t: usize,
    base: &PoleSum,
    slope: &PoleSum,
    u: f64,
) -> Result<DoubleRoot> {
    let base_jet = [
        real_eval(base, u, 0)?,
        real_eval(base, u, 1)?,
        real_eval(base, u, 2)?,
        real_eval(base, u, 3)?,
    ];
    let slope_jet = [
        real_eval(slope, u, 0)?,
        real_eval(slope, u, 1)?,
        real_eval(slope, u, 2)?,
        real_eval(slope, u, 3)?,
    ];
    double_root_from_jets(model.breakpoints(), p_t, base_jet, slope_jet, u)
}

/// Same as [`double_root_at`] for any F = F0 + αF1 given the value and
/// first three derivatives of F0 and F1 at the parameter.
pub fn double_root_from_jets(
    breakpoints: &[f64],
    p_t: usize,
    base: [f64; 4],
    slope: [f64; 4],
    u: f64,
) -> Result<DoubleRoot> {
    let a = [base[1], base[2], base[3]];
    let b = [slope[1], slope[2], slope[3]];
    let f1 = slope[0];
    if b[0] == 0.0 {
        return Err(Error::Singular(format!("∂F/∂α′ vanishes at u = {u}")));
    }
    let alpha = -a[0] / b[0];
    let n = a[1] * b[0] - a[0] * b[1];
    let n1 = a[2] * b[0] - a[0] * b[2];
    let alpha1 = -n / (b[0] * b[0]);
    let alpha2 = -(n1 * b[0] - 2.0 * n * b[1]) / (b[0] * b[0] * b[0]);
    let v = breakpoints;
    let width = v[p_t] - v[p_t - 1];
    let kappa = base[0] + alpha * f1;
    let jet = Jet {
        chi: [v[p_t - 1] + alpha * width, alpha1 * width, alpha2 * width],
        kappa: [kappa, alpha1 * f1, alpha2 * f1 + alpha1 * b[0]],
    };
    let residual = (a[0] + alpha * b[0]).abs() / (1.0 + a[0].abs());
    Ok(DoubleRoot {
        alpha,
        jet,
        residual,
    })
}

/// Admissible α range. Samples inside the tolerance band are kept as
/// computed, so χ may overshoot a breakpoint by at most this much.
pub const ALPHA_TOLERANCE: f64 = 1e-9;

/// Frozen boundary by the double-root system, one family per segment.
pub fn trace_double_root(
    model: &AsymptoticModel,
    grid: &[f64],
    m_stair: u32,
) -> Result<ParametricCurve> {
    let mut curve = ParametricCurve::default();
    let mut branch = 0;
    for p_t in 1..=model.segment_count() {
        let (base, slope) = f_split(model, p_t, m_stair)?;
        let mut gap = true;
        for (i, &u) in grid.iter().enumerate() {
            let hit = double_root_at(model, p_t, &base, &slope, u)
                .ok()
                .filter(|d| d.alpha >= -ALPHA_TOLERANCE && d.alpha <= 1.0 + ALPHA_TOLERANCE)
                .filter(|d| d.jet.kappa[0].is_finite());
            match hit {
                Some(d) => {
                    if gap && !curve.samples.is_empty() {
                        branch += 1;
                    }
                    gap = false;
                    curve.samples.push(CurveSample {
                        u,
                        chi: d.jet.chi[0],
                        kappa: d.jet.kappa[0],
                        branch,
                    });
                }
                None => gap = true,
            }
            if let Some(&next) = grid.get(i + 1) {
                gap |= base
                    .poles()
                    .iter()
                    .chain(slope.poles().iter())
                    .any(|p| p.im == 0.0 && u < p.re && p.re < next);
            }
        }
    }
    if curve.samples.is_empty() {
        return Err(Error::Invalid("no admissible α on the grid".into()));
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangencyReport {
    /// Tangent points on χ = 0: distinct poles of U.
    pub chi0: usize,
    /// Tangent points on χ = 1: distinct poles of V.
    pub chi1: usize,
    /// Distinct singular parameters overall.
    pub rank: usize,
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    v
}

pub fn tangency_report(model: &AsymptoticModel) -> Result<TangencyReport> {
    let (uf, vf) = uv_pole_sums(model)?;
    let up: Vec<f64> = uf.poles().iter().map(|p| p.re).collect();
    let vp: Vec<f64> = vf.poles().iter().map(|p| p.re).collect();
    let all: Vec<f64> = up.iter().chain(vp.iter()).copied().collect();
    Ok(TangencyReport {
        chi0: distinct(up).len(),
        chi1: distinct(vp).len(),
        rank: distinct(all).len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindingReport {
    pub lines: usize,
    pub rank: usize,
    /// Fewest finite real intersections over the random lines.
    pub min_finite: usize,
    /// Finite intersections of the line with c = ξ_∞.
    pub at_infinity: usize,
    pub passed: bool,
}

/// Real roots of g on (a, b), counted by sign changes on a refined grid.
fn count_roots(g: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> usize {
    let grid = default_grid(&[a, b], n);
    let pts: Vec<f64> = grid.into_iter().filter(|&x| x > a && x < b).collect();
    let mut count = 0;
    let mut prev: Option<f64> = None;
    for x in pts {
        let v = g(x);
        if !v.is_finite() {
            continue;
        }
        if let Some(p) = prev {
            if (p < 0.0) != (v < 0.0) && p != 0.0 {
                count += 1;
            }
        }
        prev = Some(v);
    }
    count
}

fn count_all_roots(g: &dyn Fn(f64) -> f64, singular: &[f64]) -> usize {
    let mut edges = Vec::with_capacity(singular.len() + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(singular);
    edges.push(f64::INFINITY);
    let mut count = 0;
    for w in edges.windows(2) {
        let (a, b) = match (w[0].is_finite(), w[1].is_finite()) {
            (true, true) => (w[0], w[1]),
            (false, true) => (w[1] - 1e9, w[1]),
            (true, false) => (w[0], w[0] + 1e9),
            (false, false) => (-1e9, 1e9),
        };
        count += count_roots(g, a, b, 600);
    }
    count
}

/// Intersections of the dual curve with random lines χ^∨ = cκ^∨ + d,
/// i.e. real solutions of c = (d+1)V(u) − U(u). Lines are drawn with
/// d > −1, where the right side decreases between singularities.
pub fn winding_check(
    model: &AsymptoticModel,
    line_samples: usize,
    seed: u64,
) -> Result<WindingReport> {
    let (uf, vf) = uv_pole_sums(model)?;
    let rep = tangency_report(model)?;
    let singular = distinct(
        uf.poles()
            .iter()
            .chain(vf.poles().iter())
            .map(|p| p.re)
            .collect(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_finite = usize::MAX;
    let eval = |d: f64, c: f64, u: f64| {
        let z = Complex64::new(u, 0.0);
        (d + 1.0) * vf.eval(z).re - uf.eval(z).re - c
    };
    for _ in 0..line_samples {
        let c: f64 = rng.gen_range(-5.0..5.0);
        let d: f64 = rng.gen_range(-0.99..4.0);
        let n = count_all_roots(&|u| eval(d, c, u), &singular);
        min_finite = min_finite.min(n);
    }
    let d = 0.5;
    let xi_inf = (d + 1.0) * vf.constant.re - uf.constant.re;
    let at_infinity = count_all_roots(&|u| eval(d, xi_inf, u), &singular);
    let need = rep.rank.saturating_sub(1);
    if line_samples == 0 {
        min_finite = need;
    }
    Ok(WindingReport {
        lines: line_samples,
        rank: rep.rank,
        min_finite,
        at_infinity,
        passed: min_finite >= need && at_infinity == need,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::railyard::Letter::*;
    use crate::railyard::Sign::*;
    use crate::railyard::Slot;
    use alloc::vec;

    fn three_slot_model() -> AsymptoticModel {
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
    fn uv_at_two() {
        let (u, v) = uv_functions(&three_slot_model(), 2.0).unwrap();
        assert!((u + 0.5).abs() < 1e-15);
        assert!((v - 0.4).abs() < 1e-15);
    }

    #[test]
    fn uv_limits() {
        let m = three_slot_model();
        let (_, v) = uv_functions(&m, 1e9).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-8);
        let only_minus =
            AsymptoticModel::periodic(vec![0.0, 1.0], vec![vec![Slot::new(L, Minus, 0.5)]])
                .unwrap();
        for u in [-3.0, 0.1, 2.0] {
            assert_eq!(uv_functions(&only_minus, u).unwrap().0, 0.0);
        }
    }

    #[test]
    fn point_at_two() {
        let (chi, kappa) = point_m1(&three_slot_model(), 2.0).unwrap();
        let want_chi = (1.0 / 25.0) / (1.0 / 25.0 + 2.0 / 48.0 + 1.0 / 3.0);
        assert!((chi - want_chi).abs() < 1e-15);
        assert!((chi - 0.0963855).abs() < 1e-7);
        assert!((kappa - 0.313253).abs() < 1e-6);
    }

    #[test]
    fn tangencies() {
        let m = three_slot_model();
        let r = tangency_report(&m).unwrap();
        assert_eq!((r.chi0, r.chi1, r.rank), (2, 1, 3));
        for (pole, want) in [(-2.0, 0.0), (1.0, 0.0), (1.0 / 3.0, 1.0)] {
            let (chi, _) = point_m1(&m, pole + 1e-6).unwrap();
            assert!((chi - want).abs() < 1e-6, "pole {pole}: χ = {chi}");
        }
        let repeated = AsymptoticModel::periodic(
            vec![0.0, 1.0],
            vec![vec![
                Slot::new(L, Minus, 0.3),
                Slot::new(L, Minus, 0.3),
                Slot::new(R, Plus, 0.5),
                Slot::new(R, Plus, 0.5),
            ]],
        )
        .unwrap();
        let r = tangency_report(&repeated).unwrap();
        assert_eq!((r.chi0, r.chi1, r.rank), (1, 1, 2));
    }

    #[test]
    fn dual_points() {
        let m = three_slot_model();
        let d = dual(&m, 1.0 / 3.0 + 1e-9).unwrap();
        assert!((d.chi + 1.0).abs() < 1e-6 && d.kappa.abs() < 1e-6);
        for u in [2.0, -1.0, 0.6, 7.0] {
            let (chi, kappa) = point_m1(&m, u).unwrap();
            let d = dual(&m, u).unwrap();
            assert!((chi * d.chi + kappa * d.kappa + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_agrees_with_uv_form() {
        let m = three_slot_model();
        let grid = default_grid(&singular_parameters(&m, 1).unwrap(), 200);
        let a = trace_m1(&m, &grid).unwrap();
        let b = trace_double_root(&m, &grid, 1).unwrap();
        let mut matched = 0;
        for s in &b.samples {
            if let Some(t) = a.samples.iter().find(|t| t.u == s.u) {
                assert!(
                    (t.chi - s.chi).abs() < 1e-8
                        && (t.kappa - s.kappa).abs() < 1e-8 * (1.0 + t.kappa.abs())
                );
                matched += 1;
            }
        }
        assert!(matched > 100);
    }

    #[test]
    fn winding_on_three_slot_model() {
        let r = winding_check(&three_slot_model(), 50, 1).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.at_infinity, 2);
        let single =
            AsymptoticModel::periodic(vec![0.0, 1.0], vec![vec![Slot::new(L, Minus, 0.5)]])
                .unwrap();
        assert!(winding_check(&single, 10, 2).unwrap().passed);
    }

    #[test]
    fn grid_accumulates_at_singularities() {
        let g = default_grid(&[0.0, 1.0], 100);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.iter().any(|&u| u > 0.0 && u < 1e-5));
        assert!(g.iter().any(|&u| u < 1.0 && u > 1.0 - 1e-5));
        assert!(g[0] < -1e5 && *g.last().unwrap() > 1e5);
    }
}
