//! Discretized one-dimensional Schrödinger operators.
//!
//! Replacing position and momentum by the bounded difference operators
//! with symbols `sin(sigma x) / sigma` and `sin(sigma p) / sigma` turns
//! the Hamiltonian `H = p^2/2 + phi(q)` into a bounded self-adjoint
//! operator `H_sigma` that is unitarily an affine image `a T + b` of a
//! tridiagonal operator `T` with unit off-diagonals and diagonal
//! `d_n = 8 sigma^2 phi(sin(2 n sigma^2) / sigma)`. Spectra of `H_sigma`
//! are therefore computed on `T` and mapped back affinely.
//!
//! Sign convention: with `a = 1/(8 sigma^2)` the constant is
//! `b = +1/(4 sigma^2)`. This is forced by positivity — for `phi = 0`
//! the kinetic symbol ranges over `[0, 1/(2 sigma^2)]` while `T` is the
//! free operator with spectrum `[-2, 2]`, so only the positive constant
//! maps one onto the other. The zero-potential check pinning this lives
//! in the test suite.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    essential_spectrum_estimate, ClassificationReport, Interval, Schedule,
};
use crate::error::{Error, Result};
use crate::operator::{BandOperatorSpec, DiagonalSequence, Filtration, Potential};

/// Step size and potential of the discretization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationParams {
    sigma: f64,
    potential: Potential,
}

impl DiscretizationParams {
    pub fn new(sigma: f64, potential: Potential) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::NonPositiveSigma(sigma));
        }
        Ok(Self { sigma, potential })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    /// Rational approximation `p/q` of `sigma^2 / pi` with `q <= max_den`
    /// and error at most `tol`, if one exists.
    pub fn rational_sigma_sq_over_pi(&self, max_den: u64, tol: f64) -> Option<(i64, u64)> {
        let x = self.sigma * self.sigma / std::f64::consts::PI;
        for q in 1..=max_den {
            let p = (x * q as f64).round();
            if (x - p / q as f64).abs() <= tol {
                return Some((p as i64, q));
            }
        }
        None
    }

    /// True when `sigma^2 / pi` is within 1e-9 of a rational with
    /// denominator at most 64 — the regime where the diagonal sequence
    /// is periodic rather than merely almost periodic.
    pub fn is_periodicity_regime(&self) -> bool {
        self.rational_sigma_sq_over_pi(64, 1e-9).is_some()
    }
}

/// The affine map `x -> a x + b` with `a > 0`, relating the tridiagonal
/// realization back to the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineForm {
    pub a: f64,
    pub b: f64,
}

impl AffineForm {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a <= 0.0 {
            return Err(Error::NonPositiveScale(a));
        }
        Ok(Self { a, b })
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.a * x + self.b
    }

    pub fn apply_interval(&self, iv: Interval) -> Interval {
        Interval::new(self.apply(iv.lo), self.apply(iv.hi))
    }

    pub fn inverse(&self) -> AffineForm {
        AffineForm {
            a: 1.0 / self.a,
            b: -self.b / self.a,
        }
    }
}

/// The tridiagonal realization `T` of the discretized Hamiltonian and
/// the affine form with `H_sigma = a T + b`.
pub fn build_hamiltonian(params: &DiscretizationParams) -> (BandOperatorSpec, AffineForm) {
    let sigma = params.sigma();
    let s2 = sigma * sigma;
    let diagonal = DiagonalSequence::schrodinger(params.potential().clone(), sigma)
        .expect("params hold a positive sigma");
    let spec = BandOperatorSpec::tridiagonal(diagonal);
    let form = AffineForm {
        a: 1.0 / (8.0 * s2),
        b: 1.0 / (4.0 * s2),
    };
    (spec, form)
}

/// Symbol of the discretized momentum operator: `sin(sigma p) / sigma`.
pub fn momentum_symbol(sigma: f64, p: f64) -> f64 {
    (sigma * p).sin() / sigma
}

/// Symbol of the discretized position operator: `sin(sigma x) / sigma`.
pub fn position_symbol(sigma: f64, x: f64) -> f64 {
    (sigma * x).sin() / sigma
}

/// Map a set of points by the affine form.
pub fn map_points(form: &AffineForm, points: &[f64]) -> Vec<f64> {
    points.iter().map(|&x| form.apply(x)).collect()
}

/// Map a set of intervals by the affine form (orientation preserved
/// since `a > 0`).
pub fn map_spectrum(form: &AffineForm, intervals: &[Interval]) -> Vec<Interval> {
    intervals.iter().map(|&iv| form.apply_interval(iv)).collect()
}

/// Map an entire classification report into Hamiltonian coordinates.
pub fn map_report(form: &AffineForm, mut report: ClassificationReport) -> ClassificationReport {
    report.grid_interval = form.apply_interval(report.grid_interval);
    report.essential_support = map_spectrum(form, &report.essential_support);
    report.grid_resolution *= form.a;
    for pv in &mut report.grid {
        pv.lambda = form.apply(pv.lambda);
        pv.window_width *= form.a;
    }
    report
}

/// Essential-spectrum estimate of the Hamiltonian: classify the
/// tridiagonal realization, then map the report by the affine form.
/// The grid resolution applies on the tridiagonal side; the mapped grid
/// step is `a * grid_resolution`.
pub fn hamiltonian_spectrum(
    params: &DiscretizationParams,
    filt: Filtration,
    grid_resolution: f64,
    sched: &Schedule,
) -> Result<ClassificationReport> {
    let (spec, form) = build_hamiltonian(params);
    let report = essential_spectrum_estimate(&spec, filt, grid_resolution, sched)?;
    Ok(map_report(&form, report))
}

/// JSON document for a discretization:
/// `{"potential": [{"poly": [c0, c1, ...]}, {"cos": {"amp": .., "freq": .., "phase": ..}}],
///   "sigma": .., "filtration": "unilateral"}` (filtration optional,
/// unilateral by default).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchrodingerDocument {
    pub potential: Potential,
    pub sigma: f64,
    #[serde(default = "default_filtration")]
    pub filtration: Filtration,
}

fn default_filtration() -> Filtration {
    Filtration::Unilateral
}

impl SchrodingerDocument {
    pub fn params(&self) -> Result<DiscretizationParams> {
        DiscretizationParams::new(self.sigma, self.potential.clone())
    }
}

/// Moments of `a X + b` from the moments of `X`:
/// `m'_k = sum_i C(k, i) a^i b^(k-i) m_i`. Input must contain the
/// moments `m_0..=m_K`; the output has the same length.
pub fn affine_moment_transform(moments: &[f64], form: &AffineForm) -> Vec<f64> {
    (0..moments.len())
        .map(|k| {
            (0..=k)
                .map(|i| {
                    binomial(k, i)
                        * form.a.powi(i as i32)
                        * form.b.powi((k - i) as i32)
                        * moments[i]
                })
                .sum()
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
