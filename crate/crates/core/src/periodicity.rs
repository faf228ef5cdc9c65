//! Spectral periodicity identities checked across consecutive levels.
//!
//! The level-`m` string consists of `κ` copies of the level-`m-1` string
//! scaled by `a` with masses divided by `κ`. Gluing copies of a level-`m-1`
//! eigenfunction (flat segments across plateaus for Neumann, segments through
//! the plateau midpoints for the Robin pair, alternating for the mixed pair)
//! gives an eigenfunction at level `m` with eigenvalue scaled by `κ/a`, so the
//! identities hold exactly for the discretization and the residuals measure
//! only bisection error.

use crate::error::{domain, Result};
use crate::selfsimilar::CantorParams;
use crate::spectral::{eigenvalue, spectrum};
use crate::string::{assemble_pencil, atom_count, build_string, BoundaryCondition, Pencil};

/// Bisection tolerance used by the Robin and mixed checks.
pub const DEFAULT_REL_TOL: f64 = 1e-11;

/// One row of a periodicity report: `lhs` at level `m`, `rhs = (κ/a)·μ` at level `m-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityRow {
    pub n: usize,
    pub lhs_index: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / (1 + lhs)`.
    pub residual: f64,
}

fn check_levels(params: &CantorParams, level: usize, n_max: usize) -> Result<()> {
    if level < 2 {
        return domain(format!("periodicity checks need level >= 2, got {level}"));
    }
    if atom_count(params.kappa, level).is_none() {
        return domain(format!(
            "kappa^level = {}^{level} exceeds the atom cap",
            params.kappa
        ));
    }
    let coarse = params.kappa.pow(level as u32 - 1);
    if n_max >= coarse {
        return domain(format!(
            "n_max must be below kappa^(level-1) = {coarse}, got {n_max}"
        ));
    }
    Ok(())
}

fn pencils(
    params: &CantorParams,
    level: usize,
    fine_bc: BoundaryCondition,
    coarse_bc: BoundaryCondition,
) -> Result<(Pencil, Pencil)> {
    let fine = assemble_pencil(&build_string(params, level)?, fine_bc);
    let coarse = assemble_pencil(&build_string(params, level - 1)?, coarse_bc);
    Ok((fine, coarse))
}

fn rows(
    params: &CantorParams,
    fine: &Pencil,
    coarse: &Pencil,
    n_max: usize,
    rel_tol: f64,
    fine_index: impl Fn(usize) -> usize,
) -> Result<Vec<PeriodicityRow>> {
    let scale = params.scale();
    (0..=n_max)
        .map(|n| {
            let lhs_index = fine_index(n);
            let lhs = eigenvalue(fine, lhs_index, rel_tol)?;
            let rhs = scale * eigenvalue(coarse, n, rel_tol)?;
            Ok(PeriodicityRow {
                n,
                lhs_index,
                lhs,
                rhs,
                residual: (lhs - rhs).abs() / (1.0 + lhs),
            })
        })
        .collect()
}

/// Neumann: `λ_{κn} = (κ/a) λ_n`.
pub fn check_neumann_periodicity(
    params: &CantorParams,
    level: usize,
    n_max: usize,
    rel_tol: f64,
) -> Result<Vec<PeriodicityRow>> {
    check_levels(params, level, n_max)?;
    let bc = BoundaryCondition::neumann();
    let (fine, coarse) = pencils(params, level, bc, bc)?;
    let kappa = params.kappa;
    rows(params, &fine, &coarse, n_max, rel_tol, |n| kappa * n)
}

/// Robin pair `γ = 2/b` against `γ = 2a/b`: `λ_{κ(n+1)-1} = (κ/a) μ_n`.
pub fn check_robin_periodicity(
    params: &CantorParams,
    level: usize,
    n_max: usize,
) -> Result<Vec<PeriodicityRow>> {
    check_levels(params, level, n_max)?;
    let outer = 2.0 / params.b;
    let inner = 2.0 * params.a / params.b;
    let (fine, coarse) = pencils(
        params,
        level,
        BoundaryCondition::robin(outer, outer)?,
        BoundaryCondition::robin(inner, inner)?,
    )?;
    let kappa = params.kappa;
    rows(params, &fine, &coarse, n_max, DEFAULT_REL_TOL, |n| {
        kappa * (n + 1) - 1
    })
}

/// Even `κ`: Neumann `λ_{κ(n+1/2)}` against `μ_n` for `γ0 = 0, γ1 = 2a/b`.
pub fn check_mixed_periodicity(
    params: &CantorParams,
    level: usize,
    n_max: usize,
) -> Result<Vec<PeriodicityRow>> {
    if !params.kappa.is_multiple_of(2) {
        return domain(format!(
            "the mixed identity needs an even kappa, got {}",
            params.kappa
        ));
    }
    check_levels(params, level, n_max)?;
    let (fine, coarse) = pencils(
        params,
        level,
        BoundaryCondition::neumann(),
        BoundaryCondition::robin(0.0, 2.0 * params.a / params.b)?,
    )?;
    let kappa = params.kappa;
    rows(params, &fine, &coarse, n_max, DEFAULT_REL_TOL, |n| {
        kappa * n + kappa / 2
    })
}

/// Partial sums `S_k = Σ_{n=1..k} |ln μ_n - ln λ_n|` for `k = 1..=n_max`,
/// where `λ` is the Neumann spectrum and `μ` that of `bc_b`.
pub fn log_gap_partial_sums(
    params: &CantorParams,
    level: usize,
    bc_a: BoundaryCondition,
    bc_b: BoundaryCondition,
    n_max: usize,
) -> Result<Vec<f64>> {
    if !bc_a.is_neumann() {
        return domain("the reference spectrum must be the Neumann one");
    }
    if bc_b.is_dirichlet() {
        return domain("the compared spectrum must be a Robin problem");
    }
    let string = build_string(params, level)?;
    if n_max >= string.len() {
        return domain(format!(
            "n_max must be below the number of atoms {}, got {n_max}",
            string.len()
        ));
    }
    let lambdas = spectrum(&assemble_pencil(&string, bc_a), n_max + 1, DEFAULT_REL_TOL)?;
    let mus = spectrum(&assemble_pencil(&string, bc_b), n_max + 1, DEFAULT_REL_TOL)?;
    let mut total = 0.0;
    Ok((1..=n_max)
        .map(|n| {
            total += (mus.eigenvalues[n].ln() - lambdas.eigenvalues[n].ln()).abs();
            total
        })
        .collect())
}
