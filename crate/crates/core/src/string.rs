//! Stieltjes-string discretization of the self-similar measure and the
//! tridiagonal stiffness/mass pencil of the resulting boundary problem.

use crate::error::{domain, Error, Result};
use crate::selfsimilar::CantorParams;

/// Upper bound on the number of atoms in a string.
pub const MAX_ATOMS: usize = 1 << 24;

/// Generation-`level` point-mass approximation of `dP`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesString {
    pub params: CantorParams,
    pub level: usize,
    /// Midpoints of the `κ^level` copy intervals, increasing.
    pub positions: Vec<f64>,
    /// All equal to `κ^{-level}`.
    pub masses: Vec<f64>,
}

/// Places one atom of mass `κ^{-level}` at the midpoint of every
/// generation-`level` copy interval.
pub fn build_string(params: &CantorParams, level: usize) -> Result<StieltjesString> {
    let atoms = atom_count(params.kappa, level).ok_or_else(|| {
        Error::Resource(format!(
            "kappa^level = {}^{level} exceeds the cap of {MAX_ATOMS} atoms",
            params.kappa
        ))
    })?;
    let mut positions = vec![0.5];
    for _ in 0..level {
        let mut next = Vec::with_capacity(positions.len() * params.kappa);
        for k in 0..params.kappa {
            let start = params.copy_start(k);
            next.extend(positions.iter().map(|&x| start + params.a * x));
        }
        positions = next;
    }
    debug_assert_eq!(positions.len(), atoms);
    let mass = (params.kappa as f64).powi(-(level as i32));
    Ok(StieltjesString {
        params: params.clone(),
        level,
        positions,
        masses: vec![mass; atoms],
    })
}

/// `κ^level`, or `None` when it would exceed [`MAX_ATOMS`].
pub fn atom_count(kappa: usize, level: usize) -> Option<usize> {
    let level = u32::try_from(level).ok()?;
    kappa.checked_pow(level).filter(|&n| n <= MAX_ATOMS)
}

impl StieltjesString {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Compensated sum of the masses.
    pub fn total_mass(&self) -> f64 {
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for &m in &self.masses {
            let t = sum + m;
            carry += if sum.abs() >= m.abs() {
                (sum - t) + m
            } else {
                (m - t) + sum
            };
            sum = t;
        }
        sum + carry
    }

    /// Mirror image under `x ↦ 1 - x`.
    pub fn reversed(&self) -> StieltjesString {
        StieltjesString {
            params: self.params.clone(),
            level: self.level,
            positions: self.positions.iter().rev().map(|x| 1.0 - x).collect(),
            masses: self.masses.iter().rev().copied().collect(),
        }
    }
}

/// Boundary conditions `y'(0) = γ0 y(0)`, `y'(1) = -γ1 y(1)`, or Dirichlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Robin { gamma0: f64, gamma1: f64 },
}

impl BoundaryCondition {
    pub fn neumann() -> Self {
        BoundaryCondition::Robin {
            gamma0: 0.0,
            gamma1: 0.0,
        }
    }

    pub fn robin(gamma0: f64, gamma1: f64) -> Result<Self> {
        for (name, g) in [("gamma0", gamma0), ("gamma1", gamma1)] {
            if !g.is_finite() || g < 0.0 {
                return domain(format!("{name} must be finite and non-negative, got {g}"));
            }
        }
        Ok(BoundaryCondition::Robin { gamma0, gamma1 })
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, BoundaryCondition::Robin { gamma0, gamma1 } if *gamma0 == 0.0 && *gamma1 == 0.0)
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet)
    }

    /// The same condition seen from the mirrored interval.
    pub fn swapped(&self) -> Self {
        match *self {
            BoundaryCondition::Dirichlet => BoundaryCondition::Dirichlet,
            BoundaryCondition::Robin { gamma0, gamma1 } => BoundaryCondition::Robin {
                gamma0: gamma1,
                gamma1: gamma0,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Robin { .. } if self.is_neumann() => "neumann",
            BoundaryCondition::Robin { .. } => "robin",
        }
    }

    /// `(γ0, γ1)`; zero for Dirichlet, where they are unused.
    pub fn gammas(&self) -> (f64, f64) {
        match *self {
            BoundaryCondition::Dirichlet => (0.0, 0.0),
            BoundaryCondition::Robin { gamma0, gamma1 } => (gamma0, gamma1),
        }
    }
}

/// Stiffness/mass pair `(A, M)` of the string with its boundary condition.
///
/// Nodes are `0`, the atoms and `1` for Robin conditions and the atoms alone
/// for Dirichlet. The stiffness is the piecewise-linear form
/// `Σ (y_{i+1} - y_i)^2 / gap_i` plus the boundary terms `left_coef y_0^2`
/// and `right_coef y_last^2`: `γ0`, `γ1` for Robin, and the eliminated
/// springs to the clamped ends for Dirichlet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub bc: BoundaryCondition,
    /// Generation of the string the pencil was assembled from.
    pub level: usize,
    pub node_positions: Vec<f64>,
    /// Consecutive node distances, one fewer than nodes.
    pub gaps: Vec<f64>,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub massdiag: Vec<f64>,
    pub left_coef: f64,
    pub right_coef: f64,
}

pub fn assemble_pencil(string: &StieltjesString, bc: BoundaryCondition) -> Pencil {
    let (node_positions, massdiag, left_coef, right_coef) = match bc {
        BoundaryCondition::Robin { gamma0, gamma1 } => {
            let mut nodes = Vec::with_capacity(string.len() + 2);
            nodes.push(0.0);
            nodes.extend_from_slice(&string.positions);
            nodes.push(1.0);
            let mut mass = Vec::with_capacity(nodes.len());
            mass.push(0.0);
            mass.extend_from_slice(&string.masses);
            mass.push(0.0);
            (nodes, mass, gamma0, gamma1)
        }
        BoundaryCondition::Dirichlet => {
            let first = string.positions[0];
            let last = string.positions[string.len() - 1];
            (
                string.positions.clone(),
                string.masses.clone(),
                1.0 / first,
                1.0 / (1.0 - last),
            )
        }
    };
    let gaps: Vec<f64> = node_positions.windows(2).map(|w| w[1] - w[0]).collect();
    let n = node_positions.len();
    let mut diag = vec![0.0; n];
    diag[0] += left_coef;
    diag[n - 1] += right_coef;
    for (i, g) in gaps.iter().enumerate() {
        diag[i] += 1.0 / g;
        diag[i + 1] += 1.0 / g;
    }
    let offdiag = gaps.iter().map(|g| -1.0 / g).collect();
    Pencil {
        bc,
        level: string.level,
        node_positions,
        gaps,
        diag,
        offdiag,
        massdiag,
        left_coef,
        right_coef,
    }
}

impl Pencil {
    pub fn nodes(&self) -> usize {
        self.node_positions.len()
    }

    /// Number of finite eigenvalues, one per atom.
    pub fn finite_eigenvalues(&self) -> usize {
        self.massdiag.iter().filter(|&&m| m > 0.0).count()
    }

    /// `(A - λM) x` for the full node vector `x`.
    pub fn apply_shifted(&self, lambda: f64, x: &[f64]) -> Vec<f64> {
        let n = self.nodes();
        (0..n)
            .map(|i| {
                let mut v = (self.diag[i] - lambda * self.massdiag[i]) * x[i];
                if i > 0 {
                    v += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.offdiag[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsimilar::make_params;

    fn cantor() -> CantorParams {
        make_params(2, 1.0 / 3.0).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn small_strings() {
        let s1 = build_string(&cantor(), 1).unwrap();
        assert!(close(&s1.positions, &[1.0 / 6.0, 5.0 / 6.0], 1e-15));
        assert_eq!(s1.masses, vec![0.5, 0.5]);

        let s2 = build_string(&cantor(), 2).unwrap();
        let expected = [1.0 / 18.0, 5.0 / 18.0, 13.0 / 18.0, 17.0 / 18.0];
        assert!(close(&s2.positions, &expected, 1e-15));
        assert_eq!(s2.masses, vec![0.25; 4]);

        let s3 = build_string(&make_params(3, 0.2).unwrap(), 1).unwrap();
        assert!(close(&s3.positions, &[0.1, 0.5, 0.9], 1e-15));
        assert!(close(&s3.masses, &[1.0 / 3.0; 3], 0.0));
    }

    #[test]
    fn level_cap() {
        assert!(matches!(
            build_string(&cantor(), 25),
            Err(Error::Resource(_))
        ));
        assert!(atom_count(2, 24).is_some());
        assert!(atom_count(3, 16).is_none());
        assert!(atom_count(2, usize::MAX).is_none());
    }

    #[test]
    fn string_invariants() {
        for (kappa, a, level) in [(2, 1.0 / 3.0, 10), (3, 0.2, 6), (4, 0.15, 5)] {
            let p = make_params(kappa, a).unwrap();
            let s = build_string(&p, level).unwrap();
            assert_eq!(s.len(), kappa.pow(level as u32));
            assert!(s.positions.windows(2).all(|w| w[0] < w[1]));
            assert!(s.positions[0] > 0.0 && s.positions[s.len() - 1] < 1.0);
            assert!((s.total_mass() - 1.0).abs() <= 16.0 * f64::EPSILON);
            let r = s.reversed();
            assert!(close(&r.positions, &s.positions, 1e-14));

            // copy k of level m is the affine image of level m-1
            let prev = build_string(&p, level - 1).unwrap();
            for k in 0..kappa {
                let block = &s.positions[k * prev.len()..(k + 1) * prev.len()];
                let image: Vec<f64> = prev
                    .positions
                    .iter()
                    .map(|x| p.copy_start(k) + a * x)
                    .collect();
                assert_eq!(block, &image[..]);
            }
        }
    }

    #[test]
    fn robin_pencil_layout() {
        let s = build_string(&cantor(), 1).unwrap();
        let pen = assemble_pencil(&s, BoundaryCondition::robin(2.0, 3.0).unwrap());
        assert_eq!(pen.nodes(), 4);
        assert_eq!(pen.massdiag, vec![0.0, 0.5, 0.5, 0.0]);
        assert!(close(&pen.offdiag, &[-6.0, -1.5, -6.0], 1e-12));
        assert!(close(&pen.diag, &[8.0, 7.5, 7.5, 9.0], 1e-12));
        assert_eq!(pen.finite_eigenvalues(), 2);
    }

    #[test]
    fn dirichlet_pencil_layout() {
        let s = build_string(&cantor(), 1).unwrap();
        let pen = assemble_pencil(&s, BoundaryCondition::Dirichlet);
        assert_eq!(pen.nodes(), 2);
        assert!(close(&pen.diag, &[7.5, 7.5], 1e-12));
        assert!(close(&pen.offdiag, &[-1.5], 1e-12));
        assert_eq!(pen.massdiag, vec![0.5, 0.5]);

        let s0 = build_string(&cantor(), 0).unwrap();
        let pen0 = assemble_pencil(&s0, BoundaryCondition::Dirichlet);
        assert_eq!(pen0.diag, vec![4.0]);
        assert!(pen0.offdiag.is_empty());
    }

    #[test]
    fn boundary_condition_validation() {
        assert!(BoundaryCondition::robin(-1.0, 0.0).is_err());
        assert!(BoundaryCondition::robin(0.0, f64::INFINITY).is_err());
        assert!(BoundaryCondition::neumann().is_neumann());
        assert!(!BoundaryCondition::robin(0.0, 2.0).unwrap().is_neumann());
        assert_eq!(
            BoundaryCondition::robin(1.0, 2.0).unwrap().swapped(),
            BoundaryCondition::robin(2.0, 1.0).unwrap()
        );
        assert_eq!(BoundaryCondition::Dirichlet.kind(), "dirichlet");
        assert_eq!(BoundaryCondition::neumann().kind(), "neumann");
    }
}
