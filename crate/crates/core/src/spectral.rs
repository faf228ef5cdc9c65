//! Eigenvalue counting by inertia, bisection, and eigenfunctions.
//!
//! `count_below` counts the negative pivots of the symmetric triangular
//! factorization of `A - λM`. Because `A` is a string stiffness, each pivot
//! can be written as `d_i = 1/gap_i + q_i` where `q_i` obeys
//!
//! ```text
//! q_0     = left_coef - λ m_0
//! q_{i+1} = q_i / (1 + gap_i q_i) - λ m_{i+1}
//! d_last  = q_last + right_coef
//! ```
//!
//! which produces the same pivots as eliminating `A - λM` directly, without
//! subtracting the large diagonal and off-diagonal stiffness entries from
//! each other. The zero mode of the Neumann problem is therefore resolved
//! exactly: `q` stays identically zero at `λ = 0`.

use crate::error::{domain, Error, Result};
use crate::string::{BoundaryCondition, Pencil};

/// Pivots smaller than this in magnitude trigger a perturbed retry.
const PIVOT_GUARD: f64 = 1e-300;
const MAX_PERTURBATIONS: usize = 3;
const MAX_BISECTION_STEPS: usize = 4096;

/// Increasing eigenvalues of one boundary problem at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bc: BoundaryCondition,
    pub level: usize,
    pub eigenvalues: Vec<f64>,
    /// Relative bisection tolerance used for every eigenvalue.
    pub tol: f64,
}

/// Nodal values of one eigenvector of the pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    pub node_positions: Vec<f64>,
    /// Normalized to max-abs 1, first non-negligible value positive.
    pub node_values: Vec<f64>,
    /// Slope on each gap between consecutive nodes.
    pub derivative_values: Vec<f64>,
    pub eigen_index: usize,
    pub sign_changes: usize,
}

fn negative_pivots(pencil: &Pencil, lambda: f64) -> Option<usize> {
    let n = pencil.nodes();
    let m = &pencil.massdiag;
    let mut q = pencil.left_coef - lambda * m[0];
    let mut negatives = 0;
    for i in 0..n - 1 {
        let g = pencil.gaps[i];
        let t = 1.0 + g * q;
        if !q.is_finite() || (t / g).abs() < PIVOT_GUARD {
            return None;
        }
        if t < 0.0 {
            negatives += 1;
        }
        q = q / t - lambda * m[i + 1];
    }
    let last = q + pencil.right_coef;
    if !last.is_finite() || last.abs() < PIVOT_GUARD {
        return None;
    }
    if last < 0.0 {
        negatives += 1;
    }
    Some(negatives)
}

/// Number of pencil eigenvalues strictly below `lambda`.
///
/// A vanishing pivot means `lambda` is (numerically) an eigenvalue; the query
/// is then moved down by `|λ|·1e-13 + 1e-300`, growing eightfold per retry,
/// so that the eigenvalue itself is not counted.
pub fn count_below(pencil: &Pencil, lambda: f64) -> Result<usize> {
    // the form is non-negative for γ ≥ 0, so nothing lies below zero
    if lambda <= 0.0 {
        return Ok(0);
    }
    if let Some(c) = negative_pivots(pencil, lambda) {
        return Ok(c);
    }
    let mut delta = lambda.abs() * 1e-13 + 1e-300;
    for _ in 0..MAX_PERTURBATIONS {
        if let Some(c) = negative_pivots(pencil, lambda - delta) {
            return Ok(c);
        }
        delta *= 8.0;
    }
    Err(Error::Internal(format!(
        "zero pivot persisted after {MAX_PERTURBATIONS} perturbations at lambda = {lambda}"
    )))
}

/// `N(λ)`: eigenvalues in `(0, λ)`, excluding the Neumann zero mode.
pub fn counting_function(pencil: &Pencil, lambda: f64) -> Result<usize> {
    if !(lambda > 0.0) {
        return domain(format!("counting function needs lambda > 0, got {lambda}"));
    }
    let below = count_below(pencil, lambda)?;
    Ok(if pencil.bc.is_neumann() {
        below.saturating_sub(1)
    } else {
        below
    })
}

/// The `n`-th eigenvalue (0-based) with `|λ̂ - λ_n| ≤ rel_tol·max(λ_n, 1)`.
pub fn eigenvalue(pencil: &Pencil, n: usize, rel_tol: f64) -> Result<f64> {
    let total = pencil.finite_eigenvalues();
    if n >= total {
        return domain(format!(
            "eigenvalue index {n} out of range, the pencil has {total} finite eigenvalues"
        ));
    }
    if !(rel_tol >= 1e-14) {
        return domain(format!("rel_tol must be at least 1e-14, got {rel_tol}"));
    }
    let mut lo = -1e-12;
    let mut hi = 1.0;
    while count_below(pencil, hi)? <= n {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Numerical(format!(
                "no upper bracket found for eigenvalue {n}"
            )));
        }
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if 0.5 * (hi - lo) <= rel_tol * lo.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(pencil, mid)? <= n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The first `count` eigenvalues.
pub fn spectrum(pencil: &Pencil, count: usize, rel_tol: f64) -> Result<Spectrum> {
    let eigenvalues = (0..count)
        .map(|n| eigenvalue(pencil, n, rel_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        bc: pencil.bc,
        level: pencil.level,
        eigenvalues,
        tol: rel_tol,
    })
}

/// All eigenvalues strictly below `upper`, with their indices.
pub fn eigenvalues_below(pencil: &Pencil, upper: f64, rel_tol: f64) -> Result<Vec<(usize, f64)>> {
    let count = count_below(pencil, upper)?;
    (0..count)
        .map(|n| eigenvalue(pencil, n, rel_tol).map(|v| (n, v)))
        .collect()
}

/// Counts strict sign alternations, skipping entries below `1e-12` in magnitude.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut changes = 0;
    let mut last_sign = 0.0;
    for &v in values {
        if v.abs() < 1e-12 {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            changes += 1;
        }
        last_sign = s;
    }
    changes
}

/// Deterministic start vector in `(-1, 1)` from a 64-bit LCG.
fn seed_vector(len: usize) -> Vec<f64> {
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    (0..len)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

/// Gaussian elimination with partial pivoting on a tridiagonal system.
///
/// Exactly zero pivots are replaced by a tiny multiple of the matrix scale,
/// as is customary for inverse iteration where the shift makes the system
/// nearly singular on purpose.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        let d = if diag[0] == 0.0 {
            f64::MIN_POSITIVE
        } else {
            diag[0]
        };
        return vec![rhs[0] / d];
    }
    let scale = diag
        .iter()
        .chain(sub)
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // rows carry up to two super-diagonals after pivoting
    let mut d = diag.to_vec();
    let mut u1 = sup.to_vec();
    u1.push(0.0);
    let mut u2 = vec![0.0; n];
    let mut l = sub.to_vec();
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        if l[i].abs() > d[i].abs() {
            // swap rows i and i + 1
            let (ri_d, ri_u1, ri_u2) = (d[i], u1[i], u2[i]);
            d[i] = l[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            l[i] = ri_d;
            d[i + 1] = ri_u1;
            u1[i + 1] = ri_u2;
            b.swap(i, i + 1);
        }
        if d[i] == 0.0 {
            d[i] = f64::EPSILON * scale;
        }
        let f = l[i] / d[i];
        d[i + 1] -= f * u1[i];
        if i + 1 < n - 1 {
            u1[i + 1] -= f * u2[i];
        }
        b[i + 1] -= f * b[i];
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = f64::EPSILON * scale;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    x
}

fn normalize_max(v: &mut [f64]) {
    let m = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if m > 0.0 {
        v.iter_mut().for_each(|x| *x /= m);
    }
}

/// Offset of the inverse-iteration shift above eigenvalue `n`.
///
/// Mirror-symmetric strings have nearly degenerate pairs (relative gaps of
/// `1e-9` occur at level 10), so the offset is capped by the distance to the
/// neighbouring eigenvalues.
fn shift_offset(pencil: &Pencil, n: usize) -> Result<(f64, f64)> {
    const TIGHT: f64 = 1e-14;
    let centre = eigenvalue(pencil, n, TIGHT)?;
    let mut gap = f64::INFINITY;
    if n > 0 {
        gap = gap.min(centre - eigenvalue(pencil, n - 1, TIGHT)?);
    }
    if n + 1 < pencil.finite_eigenvalues() {
        gap = gap.min(eigenvalue(pencil, n + 1, TIGHT)? - centre);
    }
    Ok((centre, (1e-8 * centre.abs().max(1.0)).min(1e-3 * gap)))
}

/// Eigenvector for `lambda_n` by shifted inverse iteration.
pub fn eigenfunction(pencil: &Pencil, lambda_n: f64, n: usize) -> Result<Eigenfunction> {
    const ITERATIONS: usize = 5;
    const MAX_RESIDUAL: f64 = 1e-6;

    let size = pencil.nodes();
    if n >= pencil.finite_eigenvalues() {
        return domain(format!(
            "eigenfunction index {n} out of range, the pencil has {} eigenvalues",
            pencil.finite_eigenvalues()
        ));
    }
    let (centre, offset) = shift_offset(pencil, n)?;
    let shift = centre + offset;
    let shifted: Vec<f64> = pencil
        .diag
        .iter()
        .zip(&pencil.massdiag)
        .map(|(d, m)| d - shift * m)
        .collect();
    let mut v = seed_vector(size);
    for _ in 0..ITERATIONS {
        let rhs: Vec<f64> = v.iter().zip(&pencil.massdiag).map(|(x, m)| x * m).collect();
        v = solve_tridiagonal(&pencil.offdiag, &shifted, &pencil.offdiag, &rhs);
        normalize_max(&mut v);
    }
    if let Some(first) = v.iter().find(|x| x.abs() >= 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }

    let r = pencil.apply_shifted(lambda_n, &v);
    let r_norm = r.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let a_norm = (0..size)
        .map(|i| {
            let mut s = pencil.diag[i].abs() + lambda_n.abs() * pencil.massdiag[i];
            if i > 0 {
                s += pencil.offdiag[i - 1].abs();
            }
            if i + 1 < size {
                s += pencil.offdiag[i].abs();
            }
            s
        })
        .fold(0.0, f64::max);
    let residual = r_norm / a_norm;
    if !(residual <= MAX_RESIDUAL) {
        return Err(Error::Numerical(format!(
            "inverse iteration for eigenfunction {n} did not converge (residual {residual:e})"
        )));
    }

    let derivative_values = v
        .windows(2)
        .zip(&pencil.gaps)
        .map(|(w, g)| (w[1] - w[0]) / g)
        .collect();
    Ok(Eigenfunction {
        node_positions: pencil.node_positions.clone(),
        sign_changes: sign_changes(&v),
        node_values: v,
        derivative_values,
        eigen_index: n,
    })
}
