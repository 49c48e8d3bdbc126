//! Symmetric tridiagonal eigensolver built on Sturm-sequence counting.
//!
//! The primitive is [`SymTridiagonal::sturm_count`]: the number of negative
//! pivots in the LDLᵀ recurrence of `T - x·I` equals the number of
//! eigenvalues strictly below `x`. Interval counts and full eigenvalue
//! lists are both derived from it, so the counting statistics and the
//! eigenvalue lists can never disagree about inertia. Bisection on the
//! count function extracts eigenvalues by index; the bisections for
//! distinct indices are independent and run in parallel.

use crate::error::{Error, Result};
use crate::par;

/// A real symmetric tridiagonal matrix, stored as diagonal and
/// off-diagonal vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    max_abs_entry: f64,
}

impl SymTridiagonal {
    /// `diag` has length n >= 1, `offdiag` length n-1; all entries finite.
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if offdiag.len() != diag.len() - 1 {
            return Err(Error::BandLengthMismatch {
                dim: diag.len(),
                got: offdiag.len(),
                expected: diag.len() - 1,
            });
        }
        if !diag.iter().chain(offdiag.iter()).all(|v| v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let max_abs_entry = diag
            .iter()
            .chain(offdiag.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            diag,
            offdiag,
            max_abs_entry,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Largest absolute row sum: every eigenvalue lies in `[-R, R]`.
    pub fn gershgorin_bound(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0f64, f64::max)
    }

    /// Bisection tolerance used when none is given: `1e-10 * max(1, R)`.
    pub fn default_tol(&self) -> f64 {
        1e-10 * self.gershgorin_bound().max(1.0)
    }

    /// Number of eigenvalues strictly less than `x`.
    ///
    /// LDLᵀ pivot recurrence: `q_1 = d_1 - x`, `q_i = d_i - x - e_{i-1}^2 / q_{i-1}`;
    /// the negative pivots are counted. A pivot that is exactly zero is
    /// replaced by `-eps * scale` (`scale` = largest absolute entry + |x|),
    /// which keeps the count backward stable across breakdowns.
    pub fn sturm_count(&self, x: f64) -> usize {
        debug_assert!(x.is_finite());
        let scale = (self.max_abs_entry + x.abs()).max(f64::MIN_POSITIVE);
        let breakdown = -f64::EPSILON * scale;
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q == 0.0 {
            q = breakdown;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let e = self.offdiag[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q == 0.0 {
                q = breakdown;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Number of eigenvalues `<= x` (one-ulp upward nudge of the strict count).
    fn count_le(&self, x: f64) -> usize {
        self.sturm_count(x.next_up())
    }

    /// Eigenvalue count for the half-open interval `(a, b]`, multiplicity
    /// included. Adjacent intervals `(a, b]`, `(b, c]` partition exactly.
    pub fn count_in_interval(&self, a: f64, b: f64) -> Result<usize> {
        if a > b {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(self.count_le(b) - self.count_le(a))
    }

    /// All eigenvalues in ascending order, multiplicity included.
    ///
    /// Each eigenvalue is bracketed by bisection on [`Self::sturm_count`],
    /// starting from the Gershgorin interval `[-R, R]`, until the bracket
    /// width is at most `tol`.
    pub fn eigenvalues(&self, tol: f64) -> EigenvalueList {
        assert!(tol > 0.0, "bisection tolerance must be positive");
        let n = self.dim();
        let r = self.gershgorin_bound();
        let mut values = par::map_range(n, |k| {
            let mut lo = -r;
            let mut hi = r;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.sturm_count(mid) <= k {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        });
        // Per-index bisections are already sorted up to tol; make it exact.
        values.sort_by(f64::total_cmp);
        EigenvalueList { values, tol }
    }
}

/// Sorted eigenvalue sample together with the bisection tolerance that
/// produced it.
#[derive(Clone, Debug)]
pub struct EigenvalueList {
    values: Vec<f64>,
    tol: f64,
}

impl EigenvalueList {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Count of sample values in `(a, b]`.
    pub fn count_in_interval(&self, a: f64, b: f64) -> usize {
        let hi = self.values.partition_point(|v| *v <= b);
        let lo = self.values.partition_point(|v| *v <= a);
        hi - lo
    }

    /// Distance from `x` to the nearest sample value.
    pub fn nearest_distance(&self, x: f64) -> f64 {
        if self.values.is_empty() {
            return f64::INFINITY;
        }
        let i = self.values.partition_point(|v| *v < x);
        let mut best = f64::INFINITY;
        if i < self.values.len() {
            best = best.min((self.values[i] - x).abs());
        }
        if i > 0 {
            best = best.min((self.values[i - 1] - x).abs());
        }
        best
    }
}
