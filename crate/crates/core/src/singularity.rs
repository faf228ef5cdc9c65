//! Monotone step approximation with at most `2^n` jumps and the product
//! criterion `(#jumps + 2)·‖f - f_n‖_{L2}` for pure singularity.
//!
//! A monotone function is held as samples joined by straight lines. The
//! approximation recursively splits `[a, b]` at a point `ζ` where `f` takes
//! the middle value `(A + B)/2` of its current bounds, with the tolerance
//! `ε` shrinking to `δ = (sqrt(1+ε) - 1)/2` at each level. When no interior
//! point attains the middle value, the whole interval is approximated one
//! level deeper with the tighter bound `f(a)` (or `f(b)`) and the boundary
//! value is restored on a short patch next to the end.

use crate::error::{domain, Result};
use crate::selfsimilar::CantorParams;
use crate::step::StepFunction;

/// Samples of a non-decreasing function, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneSamples {
    pub xs: Vec<f64>,
    pub fs: Vec<f64>,
    /// Lower and upper bounds `(A, B)` of the function.
    pub bounds: (f64, f64),
}

/// Index of the first sample smaller than its predecessor.
pub fn first_monotonicity_violation(fs: &[f64]) -> Option<usize> {
    fs.windows(2).position(|w| !(w[0] <= w[1])).map(|i| i + 1)
}

impl MonotoneSamples {
    /// Samples with bounds taken from the first and last value.
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        let bounds = match (fs.first(), fs.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return domain("at least 2 samples are required"),
        };
        Self::with_bounds(xs, fs, bounds)
    }

    pub fn with_bounds(xs: Vec<f64>, fs: Vec<f64>, bounds: (f64, f64)) -> Result<Self> {
        if xs.len() < 2 {
            return domain(format!("at least 2 samples are required, got {}", xs.len()));
        }
        if xs.len() != fs.len() {
            return domain(format!("{} abscissae for {} values", xs.len(), fs.len()));
        }
        if let Some(i) = xs.windows(2).position(|w| !(w[0] < w[1])) {
            return domain(format!(
                "abscissae not strictly increasing at index {}",
                i + 1
            ));
        }
        if let Some(i) = first_monotonicity_violation(&fs) {
            return domain(format!("values decrease at index {i}"));
        }
        let (lo, hi) = bounds;
        if !(lo <= fs[0] && fs[fs.len() - 1] <= hi) {
            return domain(format!("values leave the bounds [{lo}, {hi}]"));
        }
        Ok(MonotoneSamples { xs, fs, bounds })
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo(), self.hi())
    }

    /// Linear interpolant, clamped outside the sample range.
    pub fn eval(&self, x: f64) -> f64 {
        let j = self.xs.partition_point(|&v| v <= x);
        if j == 0 {
            return self.fs[0];
        }
        if j == self.xs.len() {
            return self.fs[j - 1];
        }
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let (f0, f1) = (self.fs[j - 1], self.fs[j]);
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }

    /// Smallest `x ≥ a` with `f(x) ≥ y`, if it lies in `[a, b]`.
    fn crossing(&self, y: f64, a: f64, b: f64) -> Option<f64> {
        if self.eval(a) >= y {
            return Some(a);
        }
        let j = self.fs.partition_point(|&v| v < y);
        if j == self.fs.len() {
            return None;
        }
        // f(a) < y guarantees xs[j] > a and j > 0
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let (f0, f1) = (self.fs[j - 1], self.fs[j]);
        let x = (x0 + (y - f0) / (f1 - f0) * (x1 - x0)).clamp(x0, x1).max(a);
        (x <= b).then_some(x)
    }

    /// Distance from `x` to the nearest sample strictly to its right.
    fn gap_after(&self, x: f64) -> f64 {
        let j = self.xs.partition_point(|&v| v <= x);
        self.xs.get(j).map_or(f64::INFINITY, |v| v - x)
    }

    /// Distance from `x` to the nearest sample strictly to its left.
    fn gap_before(&self, x: f64) -> f64 {
        let j = self.xs.partition_point(|&v| v < x);
        if j == 0 {
            f64::INFINITY
        } else {
            x - self.xs[j - 1]
        }
    }

    /// Exact `∫_a^b (f - g)^2` for a step function `g` given by its evaluator.
    fn l2_sq_on(&self, a: f64, b: f64, breaks: &[f64], g: impl Fn(f64) -> f64) -> f64 {
        let mut cuts: Vec<f64> = self
            .xs
            .iter()
            .chain(breaks)
            .copied()
            .filter(|&x| x > a && x < b)
            .chain([a, b])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2)
            .map(|w| {
                let (x0, x1) = (w[0], w[1]);
                let c = g(0.5 * (x0 + x1));
                let u0 = self.eval(x0) - c;
                let u1 = self.eval(x1) - c;
                (x1 - x0) * (u0 * u0 + u0 * u1 + u1 * u1) / 3.0
            })
            .sum()
    }

    /// Exact `L2` distance to a step function on the sample domain.
    pub fn l2_distance(&self, step: &StepFunction) -> Result<f64> {
        if step.domain != self.domain() {
            return domain(format!(
                "domain mismatch: samples on {:?}, step function on {:?}",
                self.domain(),
                step.domain
            ));
        }
        Ok(self
            .l2_sq_on(self.lo(), self.hi(), &step.breaks, |t| step.eval(t))
            .sqrt())
    }
}

/// A step function on `[a, b]` under construction: `start` then jumps.
#[derive(Debug, Clone)]
struct Pieces {
    start: f64,
    jumps: Vec<(f64, f64)>,
}

impl Pieces {
    fn constant(v: f64) -> Self {
        Pieces {
            start: v,
            jumps: Vec::new(),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let j = self.jumps.partition_point(|&(b, _)| b <= t);
        if j == 0 {
            self.start
        } else {
            self.jumps[j - 1].1
        }
    }

    fn breaks(&self) -> Vec<f64> {
        self.jumps.iter().map(|&(b, _)| b).collect()
    }
}

fn shrink(eps: f64) -> f64 {
    0.5 * ((1.0 + eps).sqrt() - 1.0)
}

fn approximate(
    f: &MonotoneSamples,
    (a, b): (f64, f64),
    (lower, upper): (f64, f64),
    n: u32,
    eps: f64,
) -> Pieces {
    if !(upper > lower) {
        return Pieces::constant(lower);
    }
    if n == 0 {
        return Pieces {
            start: lower,
            jumps: vec![(0.5 * (a + b), upper)],
        };
    }
    let delta = shrink(eps);
    let middle = 0.5 * (lower + upper);
    let slack = delta * 0.5 * (upper - lower);

    if let Some(zeta) = f.crossing(middle, a, b) {
        let f_zeta = f.eval(zeta);
        if zeta > a && zeta < b && (f_zeta - middle).abs() < slack {
            let left = approximate(f, (a, zeta), (lower, f_zeta), n - 1, delta);
            let right = approximate(f, (zeta, b), (f_zeta, upper), n - 1, delta);
            let mut jumps = left.jumps;
            if right.start != f_zeta {
                jumps.push((zeta, right.start));
            }
            jumps.extend(right.jumps);
            return Pieces {
                start: lower,
                jumps,
            };
        }
    }

    let bound_sq = {
        let scale = 0.5f64.powi(n as i32) * (1.0 + eps) * (upper - lower);
        scale * scale * (b - a)
    };
    let f_a = f.eval(a);
    if f_a > middle - slack {
        // raise the lower bound to f(a), then restore `lower` next to a
        let inner = approximate(f, (a, b), (f_a.min(upper), upper), n - 1, delta);
        if inner.start == lower {
            return inner;
        }
        let first_break = inner.jumps.first().map_or(b, |&(t, _)| t);
        let inner_sq = f.l2_sq_on(a, b, &inner.breaks(), |t| inner.eval(t));
        let room = (bound_sq - inner_sq) / (2.0 * (upper - lower).powi(2));
        let h = f.gap_after(a).min(0.5 * (first_break - a)).min(room);
        let mut jumps = vec![(a + h, inner.start)];
        jumps.extend(inner.jumps);
        return Pieces {
            start: lower,
            jumps,
        };
    }

    // f(b) is below the middle band: lower the upper bound to f(b)
    let f_b = f.eval(b).max(lower);
    let inner = approximate(f, (a, b), (lower, f_b), n - 1, delta);
    let last_value = inner.jumps.last().map_or(inner.start, |&(_, v)| v);
    if last_value == upper {
        return inner;
    }
    let last_break = inner.jumps.last().map_or(a, |&(t, _)| t);
    let inner_sq = f.l2_sq_on(a, b, &inner.breaks(), |t| inner.eval(t));
    let room = (bound_sq - inner_sq) / (2.0 * (upper - lower).powi(2));
    let h = f.gap_before(b).min(0.5 * (b - last_break)).min(room);
    let mut jumps = inner.jumps;
    jumps.push((b - h, upper));
    Pieces {
        start: inner.start,
        jumps,
    }
}

/// Step function with at most `2^n` jumps, equal to `A` near the left end
/// and `B` near the right end, and
/// `‖f - f_n‖ < 2^{-n} (1 + eps) (B - A) sqrt(hi - lo)`.
pub fn step_approximate(f: &MonotoneSamples, n: u32, eps: f64) -> Result<StepFunction> {
    if !(eps > 0.0) {
        return domain(format!("eps must be positive, got {eps}"));
    }
    if n > 30 {
        return domain(format!("n must be at most 30, got {n}"));
    }
    let pieces = approximate(f, f.domain(), f.bounds, n, eps);
    let mut breaks: Vec<f64> = Vec::with_capacity(pieces.jumps.len());
    let mut values = vec![pieces.start];
    for (t, v) in pieces.jumps {
        // jumps that collapsed onto the previous one under rounding
        if breaks.last().is_some_and(|&last| t <= last) {
            *values.last_mut().unwrap() = v;
            continue;
        }
        breaks.push(t);
        values.push(v);
    }
    Ok(StepFunction::new(breaks, values, f.domain())?.merged())
}

/// `c_n = (#jumps_n + 2)·‖f - f_n‖_{L2}` for each approximant.
pub fn criterion_products(f: &MonotoneSamples, approximants: &[StepFunction]) -> Result<Vec<f64>> {
    approximants
        .iter()
        .map(|g| Ok((g.n_breaks() as f64 + 2.0) * f.l2_distance(g)?))
        .collect()
}

/// Exact values of `P` at the endpoints of every generation-`depth` copy interval.
pub fn cantor_samples(params: &CantorParams, depth: usize) -> Result<MonotoneSamples> {
    let mut cells = vec![(0.0f64, 0.0f64)];
    let kappa = params.kappa as f64;
    let mut length = 1.0;
    let mut rise = 1.0;
    for _ in 0..depth {
        let mut next = Vec::with_capacity(cells.len() * params.kappa);
        for &(x, v) in &cells {
            for k in 0..params.kappa {
                next.push((
                    x + length * params.copy_start(k),
                    v + rise * k as f64 / kappa,
                ));
            }
        }
        cells = next;
        length *= params.a;
        rise /= kappa;
    }
    let mut xs = Vec::with_capacity(2 * cells.len());
    let mut fs = Vec::with_capacity(2 * cells.len());
    for &(x, v) in &cells {
        xs.push(x);
        fs.push(v);
        xs.push(x + length);
        fs.push(v + rise);
    }
    MonotoneSamples::with_bounds(xs, fs, (0.0, 1.0))
}

/// The generation-`n` staircase of `P`: exact on every plateau, with one
/// jump of `κ^{-n}` at the midpoint of each generation-`n` copy interval.
pub fn canonical_staircase(params: &CantorParams, n: usize) -> Result<StepFunction> {
    let samples = cantor_samples(params, n)?;
    let rise = (params.kappa as f64).powi(-(n as i32));
    let mut breaks = Vec::new();
    let mut values = vec![0.0];
    for pair in samples.xs.chunks(2).zip(samples.fs.chunks(2)) {
        let (xs, fs) = pair;
        breaks.push(0.5 * (xs[0] + xs[1]));
        values.push(fs[0] + rise);
    }
    StepFunction::new(breaks, values, (0.0, 1.0))
}
