//! Rescaled counting-function snapshots `σ_k(t) = κ^{-k} N(e^{kν+t})` on
//! `[0, ν]` and the periodic coefficient `s(t) = e^{-Dt} σ(t)`.
//!
//! Here `N(λ)` counts every eigenvalue below `λ`, the Neumann zero mode
//! included. With that count `λ_{κn} = (κ/a) λ_n` makes `σ_k` and `σ_{k+1}`
//! agree whenever `e^{(k+1)ν+t}` lies in a gap `(λ_{κ(n+1)-1}, λ_{κ(n+1)})`;
//! dropping the zero mode would shift the two by `(1 - 1/κ) κ^{-k}` everywhere.

use crate::error::{domain, Result};
use crate::selfsimilar::CantorParams;
use crate::spectral::eigenvalues_below;
use crate::step::StepFunction;
use crate::string::{assemble_pencil, build_string, BoundaryCondition};

/// Generations beyond `k` required to resolve the window `[e^{kν}, e^{(k+1)ν}]`.
pub const LEVEL_MARGIN: usize = 3;

const SWEEP_REL_TOL: f64 = 1e-10;

/// Smallest admissible discretization level for `σ_k`.
pub fn min_level(k: usize) -> usize {
    k + LEVEL_MARGIN
}

/// Exact step function of `σ_k` on `[0, ν]`.
pub fn sigma_k(
    params: &CantorParams,
    k: usize,
    level: usize,
    bc: BoundaryCondition,
) -> Result<StepFunction> {
    if level < min_level(k) {
        return domain(format!(
            "sigma_{k} needs level >= {} (k + {LEVEL_MARGIN}), got {level}",
            min_level(k)
        ));
    }
    let pencil = assemble_pencil(&build_string(params, level)?, bc);
    let nu = params.nu;
    let shift = k as f64 * nu;
    let window_lo = shift.exp();
    let window_hi = (shift + nu).exp();
    let unit = (params.kappa as f64).powi(-(k as i32));

    let mut below = 0usize;
    let mut breaks: Vec<f64> = Vec::new();
    let mut jumps: Vec<usize> = Vec::new();
    for (_, lambda) in eigenvalues_below(&pencil, window_hi, SWEEP_REL_TOL)? {
        if lambda < window_lo {
            below += 1;
            continue;
        }
        let t = (lambda.ln() - shift).clamp(0.0, nu);
        match breaks.last() {
            Some(&last) if t <= last => *jumps.last_mut().unwrap() += 1,
            _ => {
                breaks.push(t);
                jumps.push(1);
            }
        }
    }
    let mut values = Vec::with_capacity(breaks.len() + 1);
    let mut count = below;
    values.push(count as f64 * unit);
    for j in &jumps {
        count += j;
        values.push(count as f64 * unit);
    }
    StepFunction::new(breaks, values, (0.0, nu))
}

/// Samples `s(t) = e^{-Dt} σ(t)` at `grid` equally spaced points of the domain.
pub fn s_of_t(sigma: &StepFunction, d_order: f64, grid: usize) -> Result<Vec<(f64, f64)>> {
    if grid < 2 {
        return domain(format!("grid must have at least 2 points, got {grid}"));
    }
    let (lo, hi) = sigma.domain;
    let step = (hi - lo) / (grid - 1) as f64;
    Ok((0..grid)
        .map(|i| {
            let t = if i == grid - 1 {
                hi
            } else {
                lo + i as f64 * step
            };
            (t, (-d_order * t).exp() * sigma.eval(t))
        })
        .collect())
}

/// `max s - min s` over the samples.
pub fn s_range(samples: &[(f64, f64)]) -> f64 {
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, s)| {
            (lo.min(s), hi.max(s))
        });
    max - min
}

/// `κ^k ‖σ_{k+1} - σ_k‖_{L2[0,ν]}` with `σ_k` at `level` and `σ_{k+1}` at
/// `level + 1`, so both snapshots resolve their windows equally well.
pub fn sigma_cauchy_diagnostic(
    params: &CantorParams,
    k: usize,
    level: usize,
    bc: BoundaryCondition,
) -> Result<f64> {
    let next = sigma_k(params, k + 1, level + 1, bc)?;
    let current = sigma_k(params, k, level, bc)?;
    let scale = (params.kappa as f64).powi(k as i32);
    Ok(scale * next.l2_distance(&current)?)
}
