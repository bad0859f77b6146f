//! Adaptive Simpson quadrature.

#[allow(clippy::too_many_arguments)]
fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1)
}

/// ∫_a^b f, split into `cells` equal pieces each refined to `tol / cells`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cells: usize, tol: f64) -> f64 {
    let h = (b - a) / cells as f64;
    (0..cells)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            simpson(
                &f,
                x0,
                x1,
                f(x0),
                f(0.5 * (x0 + x1)),
                f(x1),
                tol / cells as f64,
                30,
            )
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_kink() {
        assert!((integrate(|x| x * x * x, 0.0, 2.0, 4, 1e-12) - 4.0).abs() < 1e-12);
        let v = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 8, 1e-10);
        assert!((v - 0.29).abs() < 1e-9);
    }
}
