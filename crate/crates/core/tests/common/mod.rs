//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

/// Atom positions and masses of the level-`level` string, enumerated from
/// the base-`kappa` addresses of the copy intervals.
pub fn atoms(kappa: usize, a: f64, level: usize) -> (Vec<f64>, Vec<f64>) {
    let b = (1.0 - kappa as f64 * a) / (kappa as f64 - 1.0);
    let count = kappa.pow(level as u32);
    let mut xs = Vec::with_capacity(count);
    for index in 0..count {
        let mut digits = index;
        let mut start = 0.0;
        let mut scale = a.powi(level as i32 - 1);
        // least significant digit is the deepest generation
        for _ in 0..level {
            start += (digits % kappa) as f64 * (a + b) * scale;
            digits /= kappa;
            scale /= a;
        }
        xs.push(start + 0.5 * a.powi(level as i32));
    }
    xs.sort_by(f64::total_cmp);
    let mass = (kappa as f64).powi(-(level as i32));
    (xs, vec![mass; count])
}

/// All eigenvalues of the string problem by dense symmetric eigensolve.
///
/// `gammas = None` is the Dirichlet problem. Otherwise the massless end
/// nodes are eliminated through a Schur complement of the stiffness matrix.
pub fn dense_spectrum(xs: &[f64], masses: &[f64], gammas: Option<(f64, f64)>) -> Vec<f64> {
    let n = xs.len();
    let mut nodes = vec![0.0];
    nodes.extend_from_slice(xs);
    nodes.push(1.0);
    let total = n + 2;
    let mut k = DMatrix::<f64>::zeros(total, total);
    for i in 0..total - 1 {
        let w = 1.0 / (nodes[i + 1] - nodes[i]);
        k[(i, i)] += w;
        k[(i + 1, i + 1)] += w;
        k[(i, i + 1)] -= w;
        k[(i + 1, i)] -= w;
    }
    let interior: Vec<usize> = (1..=n).collect();
    let kii = k.select_rows(&interior).select_columns(&interior);
    let reduced = match gammas {
        None => kii,
        Some((g0, g1)) => {
            k[(0, 0)] += g0;
            k[(total - 1, total - 1)] += g1;
            let ends = [0, total - 1];
            let kbb = k.select_rows(&ends).select_columns(&ends);
            let kib = k.select_rows(&interior).select_columns(&ends);
            let inv = kbb.try_inverse().expect("end block invertible");
            &kii - &kib * inv * kib.transpose()
        }
    };
    let scale: Vec<f64> = masses.iter().map(|m| 1.0 / m.sqrt()).collect();
    let c = DMatrix::from_fn(n, n, |i, j| scale[i] * reduced[(i, j)] * scale[j]);
    let mut values: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `|x - y| <= tol · max(|y|, 1)`.
pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * y.abs().max(1.0)
}

pub fn rel_err(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}
