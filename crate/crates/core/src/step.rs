//! Right-continuous piecewise-constant functions on a closed interval.

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    /// Strictly increasing jump locations inside `[lo, hi]`.
    pub breaks: Vec<f64>,
    /// `values[j]` holds on `[breaks[j-1], breaks[j])`; one more than `breaks`.
    pub values: Vec<f64>,
    pub domain: (f64, f64),
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo < hi) {
            return domain_err(format!("empty domain [{lo}, {hi}]"));
        }
        if values.len() != breaks.len() + 1 {
            return domain_err(format!(
                "{} values for {} breaks",
                values.len(),
                breaks.len()
            ));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return domain_err("breaks must be strictly increasing");
        }
        if breaks.iter().any(|&b| !(lo..=hi).contains(&b)) {
            return domain_err(format!("breaks must lie in [{lo}, {hi}]"));
        }
        Ok(StepFunction {
            breaks,
            values,
            domain,
        })
    }

    pub fn constant(value: f64, domain: (f64, f64)) -> Result<Self> {
        Self::new(Vec::new(), vec![value], domain)
    }

    pub fn lo(&self) -> f64 {
        self.domain.0
    }

    pub fn hi(&self) -> f64 {
        self.domain.1
    }

    pub fn n_breaks(&self) -> usize {
        self.breaks.len()
    }

    /// Right-continuous evaluation; arguments outside the domain are clamped.
    pub fn eval(&self, t: f64) -> f64 {
        let j = self.breaks.partition_point(|&b| b <= t);
        self.values[j]
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Constant pieces as `(left, right, value)` covering the domain.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.breaks.len();
        (0..=n).map(move |j| {
            let left = if j == 0 {
                self.lo()
            } else {
                self.breaks[j - 1]
            };
            let right = if j == n { self.hi() } else { self.breaks[j] };
            (left, right, self.values[j])
        })
    }

    /// Exact `L2` distance between two step functions on the same domain.
    pub fn l2_distance(&self, other: &StepFunction) -> Result<f64> {
        if self.domain != other.domain {
            return domain_err(format!(
                "domain mismatch: {:?} vs {:?}",
                self.domain, other.domain
            ));
        }
        let mut cuts: Vec<f64> = self
            .breaks
            .iter()
            .chain(&other.breaks)
            .copied()
            .chain([self.lo(), self.hi()])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let sum: f64 = cuts
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let d = self.eval(mid) - other.eval(mid);
                d * d * (w[1] - w[0])
            })
            .sum();
        Ok(sum.sqrt())
    }

    /// Drops breaks whose neighbouring values coincide.
    pub fn merged(&self) -> StepFunction {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut values = vec![self.values[0]];
        for (b, v) in self.breaks.iter().zip(&self.values[1..]) {
            if *v != *values.last().unwrap() {
                breaks.push(*b);
                values.push(*v);
            }
        }
        StepFunction {
            breaks,
            values,
            domain: self.domain,
        }
    }
}

fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    domain(msg)
}
