//! Small numerical helpers shared by the rate formulas.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Unnormalized sinc: `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Evenly spaced grid of `steps` points from `min` to `max` inclusive.
/// A single step yields `[min]`.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..steps)
            .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

const MAX_ROMBERG_LEVEL: usize = 22;

/// Romberg integration of a smooth complex integrand over `[a, b]`.
///
/// `abs_tol` bounds the change between successive diagonal extrapolants at
/// acceptance. `max_freq` is the highest angular frequency present in the
/// integrand; refinement continues until the step resolves it before any
/// convergence test is trusted, which keeps oscillatory integrands from
/// passing spuriously on coarse grids. Fully deterministic.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, abs_tol: f64, max_freq: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::argument(format!("bad integration range [{a}, {b}]")));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let span = b - a;

    // require step <= (pi/4) / max_freq before testing convergence
    let mut min_level = 3usize;
    if max_freq > 0.0 {
        let needed = (span * max_freq * 4.0 / PI).log2().ceil();
        if needed.is_finite() && needed > 0.0 {
            min_level = min_level.max((needed as usize).min(MAX_ROMBERG_LEVEL - 1));
        }
    }

    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(MAX_ROMBERG_LEVEL + 1);
    let mut trapezoid = (f(a) + f(b)) * (0.5 * span);
    rows.push(vec![trapezoid]);

    for level in 1..=MAX_ROMBERG_LEVEL {
        let new_points = 1usize << (level - 1);
        let h = span / (1u64 << level) as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..new_points {
            sum += f(a + h * (2 * i + 1) as f64);
        }
        trapezoid = trapezoid * 0.5 + sum * h;

        let prev = &rows[level - 1];
        let mut row = Vec::with_capacity(level + 1);
        row.push(trapezoid);
        let mut pow4 = 1.0;
        for m in 1..=level {
            pow4 *= 4.0;
            let extrap = (row[m - 1] * pow4 - prev[m - 1]) / (pow4 - 1.0);
            row.push(extrap);
        }

        let diff = (row[level] - prev[level - 1]).norm();
        let value = row[level];
        rows.push(row);
        if level >= min_level && diff <= abs_tol {
            return Ok(value);
        }
    }

    let last = rows[MAX_ROMBERG_LEVEL][MAX_ROMBERG_LEVEL];
    let prev = rows[MAX_ROMBERG_LEVEL - 1][MAX_ROMBERG_LEVEL - 1];
    Err(Error::NonConvergence {
        iterations: MAX_ROMBERG_LEVEL,
        residual: (last - prev).norm(),
    })
}
