//! Cantor-type self-similar functions.
//!
//! A function `P` on `[0, 1]` with `P(0) = 0`, `P(1) = 1`, constant on the
//! `κ - 1` plateaus `(α_{2k-1}, α_{2k})` and such that `κ P(α_{2k} + a x) - k`
//! coincides with `P` on every copy interval `[α_{2k}, α_{2k+1}]`.

use crate::error::{domain, Result};

/// Parameters of a Cantor-type self-similar function.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorParams {
    /// Number of scaled copies.
    pub kappa: usize,
    /// Length of each copy interval.
    pub a: f64,
    /// Length of each plateau, `(1 - κa) / (κ - 1)`.
    pub b: f64,
    /// Breakpoints `α_0 .. α_{2κ-1}`.
    pub alphas: Vec<f64>,
    /// Self-similarity step `ln(κ/a)`.
    pub nu: f64,
    /// Spectral order `ln κ / ν`.
    pub d_order: f64,
}

/// Builds the parameter set for `κ` copies of length `a`.
pub fn make_params(kappa: usize, a: f64) -> Result<CantorParams> {
    if kappa < 2 {
        return domain(format!("kappa must be at least 2, got {kappa}"));
    }
    let upper = 1.0 / kappa as f64;
    if !(a > 0.0) {
        return domain(format!("a must be > 0, got {a}"));
    }
    if !(a < upper) {
        return domain(format!("a must be < 1/kappa = {upper}, got {a}"));
    }
    let k = kappa as f64;
    let b = (1.0 - k * a) / (k - 1.0);
    let mut alphas = Vec::with_capacity(2 * kappa);
    for i in 0..kappa {
        let left = i as f64 * (a + b);
        alphas.push(left);
        alphas.push(left + a);
    }
    let nu = (k / a).ln();
    let d_order = k.ln() / nu;
    Ok(CantorParams {
        kappa,
        a,
        b,
        alphas,
        nu,
        d_order,
    })
}

impl CantorParams {
    /// Left end `α_{2k}` of copy interval `k`.
    pub fn copy_start(&self, k: usize) -> f64 {
        self.alphas[2 * k]
    }

    /// `κ/a`, the eigenvalue scaling factor between generations.
    pub fn scale(&self) -> f64 {
        self.kappa as f64 / self.a
    }

    /// Checks the stored invariants up to `ulps` units in the last place.
    pub fn check_invariants(&self, ulps: f64) -> bool {
        let tol = ulps * f64::EPSILON;
        let k = self.kappa as f64;
        let b_ok = (self.b - (1.0 - k * self.a) / (k - 1.0)).abs() <= tol;
        let last = *self.alphas.last().unwrap_or(&f64::NAN);
        let ends_ok = self.alphas[0] == 0.0 && (last - 1.0).abs() <= tol;
        let alphas_ok = (0..self.kappa).all(|i| {
            let left = i as f64 * (self.a + self.b);
            (self.alphas[2 * i] - left).abs() <= tol
                && (self.alphas[2 * i + 1] - left - self.a).abs() <= tol
        });
        let order_ok = self.d_order > 0.0 && self.d_order < 0.5;
        b_ok && ends_ok && alphas_ok && order_ok
    }
}

/// Evaluates `P(x)` to within `κ^{-depth}`.
///
/// Unresolved cells at the final depth return the midpoint of their value
/// range, which keeps the result monotone in `x`.
pub fn eval_p(params: &CantorParams, x: f64, depth: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("x must lie in [0, 1], got {x}"));
    }
    let kappa = params.kappa as f64;
    let period = params.a + params.b;
    let mut base = 0.0;
    let mut width = 1.0;
    let mut x = x;
    for _ in 0..depth {
        if x <= 0.0 {
            return Ok(base);
        }
        if x >= 1.0 {
            return Ok(base + width);
        }
        let k = ((x / period).floor() as usize).min(params.kappa - 1);
        let offset = x - k as f64 * period;
        if offset > params.a {
            // plateau between copies k and k + 1
            return Ok(base + width * (k + 1) as f64 / kappa);
        }
        base += width * k as f64 / kappa;
        width /= kappa;
        x = (offset / params.a).clamp(0.0, 1.0);
    }
    if x <= 0.0 {
        Ok(base)
    } else if x >= 1.0 {
        Ok(base + width)
    } else {
        Ok(base + 0.5 * width)
    }
}
