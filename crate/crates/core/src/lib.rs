//! Spectra of the string equation `-y'' = λ ρ y` on `[0, 1]` where `ρ` is the
//! distributional derivative of a Cantor-type self-similar function.
//!
//! The weight is approximated at generation `m` by a Stieltjes string with
//! `κ^m` equal point masses. For such a string the eigenvalue problem is a
//! finite tridiagonal pencil, so eigenvalues are counted exactly by inertia
//! and located by bisection. On top of that sit checks of the spectral
//! periodicity identities, the rescaled counting-function snapshots `σ_k`,
//! and a step-approximation based singularity diagnostic.

// `!(x > y)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod error;
pub mod format;
pub mod periodicity;
pub mod selfsimilar;
pub mod sigma;
pub mod singularity;
pub mod spectral;
pub mod step;
pub mod string;

pub use error::{Error, Result};
pub use periodicity::{
    check_mixed_periodicity, check_neumann_periodicity, check_robin_periodicity,
    log_gap_partial_sums, PeriodicityRow,
};
pub use selfsimilar::{eval_p, make_params, CantorParams};
pub use sigma::{s_of_t, s_range, sigma_cauchy_diagnostic, sigma_k};
pub use singularity::{criterion_products, step_approximate, MonotoneSamples};
pub use spectral::{
    count_below, counting_function, eigenfunction, eigenvalue, spectrum, Eigenfunction, Spectrum,
};
pub use step::StepFunction;
pub use string::{assemble_pencil, build_string, BoundaryCondition, Pencil, StieltjesString};
