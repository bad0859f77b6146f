//! Dense complex polynomials, root finding and sums of simple poles.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    /// ∏ (z − r).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Poly::constant(Complex64::new(1.0, 0.0));
        for &r in roots {
            p = p.mul_linear(r);
        }
        p
    }

    /// `self · (z − r)`.
    pub fn mul_linear(&self, r: Complex64) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + 1];
        for (i, &c) in self.0.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * r;
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly(
            (0..n)
                .map(|i| *self.0.get(i).unwrap_or(&zero) + *other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Poly(self.0.iter().map(|&a| a * c).collect())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Poly::constant(Complex64::new(0.0, 0.0));
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Drops leading coefficients below `tol` times the largest one.
    pub fn trimmed(&self, tol: f64) -> Self {
        let big = self.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut v = self.0.clone();
        while v.len() > 1 && v.last().unwrap().norm() <= tol * big {
            v.pop();
        }
        Poly(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// All roots: companion eigenvalues polished by Newton, with an Aberth
    /// iteration as fallback when polishing does not reach `1e-12`.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let p = self.trimmed(1e-15);
        let n = p.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = p.0[n];
        let mut c = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            c[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            c[(i, n - 1)] = -p.0[i] / lead;
        }
        let mut roots: Vec<Complex64> = match c.clone().try_schur(1e-14, 10_000) {
            Some(s) => s
                .eigenvalues()
                .map(|e| e.iter().copied().collect())
                .unwrap_or_default(),
            None => Vec::new(),
        };
        if roots.len() != n {
            roots = aberth(&p)?;
        }
        let dp = p.derivative();
        let mut ok = true;
        for r in roots.iter_mut() {
            ok &= newton_polish(&p, &dp, r);
        }
        if !ok {
            let mut alt = aberth(&p)?;
            let mut alt_ok = true;
            for r in alt.iter_mut() {
                alt_ok &= newton_polish(&p, &dp, r);
            }
            if alt_ok {
                roots = alt;
            }
        }
        Ok(roots)
    }
}

/// Scale of |p(z)| at z, for relative residuals.
fn magnitude(p: &Poly, z: Complex64) -> f64 {
    let az = z.norm();
    p.0.iter().rev().fold(0.0, |acc, c| acc * az + c.norm())
}

/// Newton steps on `r`; true when the relative residual drops below 1e-12.
/// Steps that increase the residual are rejected, so multiple roots stay put.
fn newton_polish(p: &Poly, dp: &Poly, r: &mut Complex64) -> bool {
    let mut res = p.eval(*r).norm();
    for _ in 0..50 {
        if res <= 1e-12 * magnitude(p, *r) {
            return true;
        }
        let d = dp.eval(*r);
        if d.norm() == 0.0 {
            break;
        }
        let next = *r - p.eval(*r) / d;
        let nres = p.eval(next).norm();
        if !(nres < res) {
            break;
        }
        *r = next;
        res = nres;
    }
    res <= 1e-8 * magnitude(p, *r).max(f64::MIN_POSITIVE)
}

/// Aberth–Ehrlich simultaneous iteration.
pub fn aberth(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let dp = p.derivative();
    let lead = p.0[n].norm();
    // Cauchy bound for the initial circle
    let radius = 1.0 + p.0[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                0.4 + 2.0 * core::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let ratio = p.eval(z[i]) / dp.eval(z[i]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter()
        .all(|&r| p.eval(r).norm() <= 1e-8 * magnitude(p, r))
    {
        Ok(z)
    } else {
        Err(Error::NoConvergence(alloc::format!(
            "Aberth iteration on a degree-{n} polynomial"
        )))
    }
}

/// `c + Σ a_i/(z − p_i)` with distinct poles.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSum {
    pub constant: Complex64,
    pub terms: Vec<(Complex64, Complex64)>,
}

impl PoleSum {
    pub fn zero() -> Self {
        PoleSum {
            constant: Complex64::new(0.0, 0.0),
            terms: Vec::new(),
        }
    }

    /// Adds `a/(z − p)`, merging with an existing pole within 1e-13
    /// relative distance; zero residues are dropped at the end.
    pub fn add_pole(&mut self, a: Complex64, p: Complex64) {
        for t in self.terms.iter_mut() {
            if (t.1 - p).norm() <= 1e-13 * (1.0 + p.norm()) {
                t.0 += a;
                return;
            }
        }
        self.terms.push((a, p));
    }

    pub fn add(&mut self, other: &PoleSum) {
        self.constant += other.constant;
        for &(a, p) in &other.terms {
            self.add_pole(a, p);
        }
    }

    pub fn scaled(&self, s: f64) -> PoleSum {
        PoleSum {
            constant: self.constant * s,
            terms: self.terms.iter().map(|&(a, p)| (a * s, p)).collect(),
        }
    }

    /// Removes poles whose residue is below `tol`.
    pub fn pruned(&self, tol: f64) -> PoleSum {
        PoleSum {
            constant: self.constant,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.0.norm() > tol)
                .collect(),
        }
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.1).collect()
    }

    /// Relative distance from `z` to the nearest pole.
    pub fn near_pole(&self, z: Complex64, tol: f64) -> Option<Complex64> {
        self.terms
            .iter()
            .map(|t| t.1)
            .find(|&p| (z - p).norm() <= tol * (1.0 + p.norm()))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|&(a, p)| a / (z - p))
                .sum::<Complex64>()
    }

    /// n-th derivative, n ≥ 1.
    pub fn derivative(&self, n: u32, z: Complex64) -> Complex64 {
        let mut fact = 1.0;
        for k in 2..=n {
            fact *= k as f64;
        }
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        self.terms
            .iter()
            .map(|&(a, p)| a * sign * fact / (z - p).powu(n + 1))
            .sum()
    }

    /// Numerator of `self(z) − w` over `∏(z − p_i)`.
    pub fn cleared_minus(&self, w: Complex64) -> Poly {
        let poles = self.poles();
        let mut num = Poly::from_roots(&poles).scale(self.constant - w);
        for (i, &(a, _)) in self.terms.iter().enumerate() {
            let others: Vec<Complex64> = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| p)
                .collect();
            num = num.add(&Poly::from_roots(&others).scale(a));
        }
        num
    }

    /// Numerator of the first derivative over `∏(z − p_i)²`.
    pub fn cleared_derivative(&self) -> Poly {
        let poles = self.poles();
        let mut num = Poly::constant(Complex64::new(0.0, 0.0));
        for (i, &(a, _)) in self.terms.iter().enumerate() {
            let mut others = Vec::with_capacity(2 * poles.len());
            for (j, &p) in poles.iter().enumerate() {
                if j != i {
                    others.push(p);
                    others.push(p);
                }
            }
            num = num.add(&Poly::from_roots(&others).scale(-a));
        }
        num
    }

    /// Solutions of `self(z) = w`.
    pub fn solve(&self, w: Complex64) -> Result<Vec<Complex64>> {
        self.cleared_minus(w).roots()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn recovers_known_roots() {
        let want = [
            c(1.0, 0.0),
            c(-2.0, 0.5),
            c(-2.0, -0.5),
            c(0.25, 0.0),
            c(3.0, 1.0),
        ];
        let p = Poly::from_roots(&want);
        let mut got = p.roots().unwrap();
        for w in want {
            let (i, d) = got
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - w).norm()))
                .fold((0, f64::MAX), |a, b| if b.1 < a.1 { b } else { a });
            assert!(d < 1e-10, "{w} missing: {got:?}");
            got.remove(i);
        }
    }

    #[test]
    fn aberth_agrees() {
        let p = Poly::from_roots(&[c(0.5, 0.0), c(-1.5, 0.0), c(0.0, 2.0)]);
        for r in aberth(&p).unwrap() {
            assert!(p.eval(r).norm() < 1e-10);
        }
    }

    #[test]
    fn pole_sum_clearing() {
        let mut f = PoleSum::zero();
        f.constant = c(0.7, 0.0);
        f.add_pole(c(0.3, 0.0), c(1.0 / 3.0, 0.0));
        f.add_pole(c(-0.2, 0.0), c(-2.0, 0.0));
        f.add_pole(c(0.5, 0.0), c(1.0, 0.0));
        let w = c(0.4, 0.1);
        let roots = f.solve(w).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((f.eval(r) - w).norm() < 1e-9);
        }
        let z = c(0.2, 0.7);
        let d = f.cleared_derivative().eval(z) / Poly::from_roots(&f.poles()).eval(z).powu(2);
        assert!((d - f.derivative(1, z)).norm() < 1e-12);
        let h = 1e-5;
        let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
        assert!((fd - f.derivative(1, z)).norm() < 1e-8);
    }
}
