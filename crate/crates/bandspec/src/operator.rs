//! Doubly infinite self-adjoint band operators given by per-band entry
//! generators, and their finite sections along unilateral or bilateral
//! filtrations.
//!
//! The tridiagonal case with unit off-diagonals,
//! `A e_n = e_{n-1} + d_n e_n + e_{n+1}`, is the primary citizen: it is
//! the class for which the section statistics in [`crate::analysis`]
//! recover the essential spectrum. The general band data model is
//! supported for diagnostics (degree, norm bound) but carries no
//! classification guarantee.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::eigen::SymTridiagonal;
use crate::error::{Error, Result};

/// Sample count for potential sup-norm estimation (equispaced points,
/// endpoints included).
const SUP_SAMPLES: usize = 10_000;
/// Slack factor applied to sampled sup-norms; the bound is a diagnostic
/// upper estimate, not an exact norm.
const SUP_SLACK: f64 = 1.01;

/// Default window half-width for [`periodicity_diagnostic`].
pub const DEFAULT_PERIODICITY_WINDOW: usize = 512;
/// Default entrywise tolerance for [`periodicity_diagnostic`].
pub const DEFAULT_PERIODICITY_TOL: f64 = 1e-9;

/// A continuous real potential: a sum of polynomial and cosine terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Potential {
    terms: Vec<PotentialTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PotentialTerm {
    /// Polynomial with coefficients in ascending degree order.
    #[serde(rename = "poly")]
    Polynomial(Vec<f64>),
    /// `amp * cos(freq * x + phase)`.
    #[serde(rename = "cos")]
    Cosine { amp: f64, freq: f64, phase: f64 },
}

impl PotentialTerm {
    fn eval(&self, x: f64) -> f64 {
        match self {
            PotentialTerm::Polynomial(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            PotentialTerm::Cosine { amp, freq, phase } => amp * (freq * x + phase).cos(),
        }
    }
}

impl Potential {
    pub fn new(terms: Vec<PotentialTerm>) -> Self {
        Self { terms }
    }

    /// The zero potential.
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Polynomial potential with ascending coefficients.
    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        Self {
            terms: vec![PotentialTerm::Polynomial(coefficients)],
        }
    }

    /// The identity potential `x`.
    pub fn identity() -> Self {
        Self::polynomial(vec![0.0, 1.0])
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Sampled sup of |phi| over `[lo, hi]` with a 1% slack factor.
    pub fn max_abs_on(&self, lo: f64, hi: f64) -> f64 {
        let step = (hi - lo) / SUP_SAMPLES as f64;
        let mut sup = 0.0f64;
        for t in 0..=SUP_SAMPLES {
            let x = lo + step * t as f64;
            sup = sup.max(self.eval(x).abs());
        }
        sup * SUP_SLACK
    }
}

/// Generator of a bounded real sequence `d_n`, `n` ranging over the
/// integers. Evaluation is total and deterministic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagonalSequence {
    Constant { value: f64 },
    /// Cyclic repetition, aligned so that a unilateral section starting
    /// at basis index 1 reads the values in order.
    Periodic { values: Vec<f64> },
    /// `amplitude * cos(frequency * n + phase)`.
    Cosine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// Diagonal of the discretized Schrödinger operator:
    /// `8 sigma^2 * phi(sin(2 n sigma^2) / sigma)`.
    Schrodinger { potential: Potential, sigma: f64 },
    /// Explicit values for indices `start .. start + values.len()`,
    /// `default` elsewhere.
    Table {
        start: i64,
        values: Vec<f64>,
        default: f64,
    },
}

impl DiagonalSequence {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn periodic(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Self::Periodic { values })
    }

    pub fn cosine(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Self::Cosine {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn schrodinger(potential: Potential, sigma: f64) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::NonPositiveSigma(sigma));
        }
        Ok(Self::Schrodinger { potential, sigma })
    }

    pub fn table(start: i64, values: Vec<f64>, default: f64) -> Self {
        Self::Table {
            start,
            values,
            default,
        }
    }

    /// Value of `d_n`.
    pub fn eval(&self, n: i64) -> f64 {
        match self {
            DiagonalSequence::Constant { value } => *value,
            DiagonalSequence::Periodic { values } => {
                let len = values.len() as i64;
                values[(n - 1).rem_euclid(len) as usize]
            }
            DiagonalSequence::Cosine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (frequency * n as f64 + phase).cos(),
            DiagonalSequence::Schrodinger { potential, sigma } => {
                let s2 = sigma * sigma;
                8.0 * s2 * potential.eval((2.0 * n as f64 * s2).sin() / sigma)
            }
            DiagonalSequence::Table {
                start,
                values,
                default,
            } => {
                let offset = n - start;
                if offset >= 0 && (offset as usize) < values.len() {
                    values[offset as usize]
                } else {
                    *default
                }
            }
        }
    }

    /// Check the constructor invariants on a value built elsewhere
    /// (for instance deserialized from JSON).
    pub fn validate(&self) -> Result<()> {
        match self {
            DiagonalSequence::Periodic { values } if values.is_empty() => {
                Err(Error::EmptyPeriod)
            }
            DiagonalSequence::Schrodinger { sigma, .. } if *sigma <= 0.0 => {
                Err(Error::NonPositiveSigma(*sigma))
            }
            _ => Ok(()),
        }
    }

    /// Upper estimate of `sup_n |d_n|`, analytic per kind; the
    /// Schrödinger kind samples the potential over the range of its
    /// argument.
    pub fn sup_abs(&self) -> f64 {
        match self {
            DiagonalSequence::Constant { value } => value.abs(),
            DiagonalSequence::Periodic { values } => {
                values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }
            DiagonalSequence::Cosine { amplitude, .. } => amplitude.abs(),
            DiagonalSequence::Schrodinger { potential, sigma } => {
                8.0 * sigma * sigma * potential.max_abs_on(-1.0 / sigma, 1.0 / sigma)
            }
            DiagonalSequence::Table {
                values, default, ..
            } => values
                .iter()
                .fold(default.abs(), |m, v| m.max(v.abs())),
        }
    }
}

/// Which family of finite-dimensional subspaces the sections are cut
/// along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filtration {
    /// Section `n` spans basis indices `1..=n` (dimension n).
    Unilateral,
    /// Section `n` spans basis indices `-n..=n` (dimension 2n+1).
    Bilateral,
}

impl Filtration {
    pub fn dimension(self, n: usize) -> usize {
        match self {
            Filtration::Unilateral => n,
            Filtration::Bilateral => 2 * n + 1,
        }
    }

    pub fn first_index(self, n: usize) -> i64 {
        match self {
            Filtration::Unilateral => 1,
            Filtration::Bilateral => -(n as i64),
        }
    }
}

impl std::fmt::Display for Filtration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Filtration::Unilateral => write!(f, "unilateral"),
            Filtration::Bilateral => write!(f, "bilateral"),
        }
    }
}

/// A self-adjoint band operator: a diagonal generator plus generators
/// for the bands at positive offsets (band `-k` mirrors band `+k`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandOperatorSpec {
    diagonal: DiagonalSequence,
    bands: BTreeMap<u32, DiagonalSequence>,
}

impl BandOperatorSpec {
    /// Tridiagonal operator with unit off-diagonals.
    pub fn tridiagonal(diagonal: DiagonalSequence) -> Self {
        let mut bands = BTreeMap::new();
        bands.insert(1, DiagonalSequence::constant(1.0));
        Self { diagonal, bands }
    }

    /// Zero diagonal, unit off-diagonals: spectrum `[-2, 2]`.
    pub fn free_jacobi() -> Self {
        Self::tridiagonal(DiagonalSequence::constant(0.0))
    }

    /// General band operator; offsets must be >= 1.
    pub fn with_bands(
        diagonal: DiagonalSequence,
        bands: BTreeMap<u32, DiagonalSequence>,
    ) -> Result<Self> {
        if bands.contains_key(&0) {
            return Err(Error::ZeroBandOffset);
        }
        diagonal.validate()?;
        for gen in bands.values() {
            gen.validate()?;
        }
        Ok(Self { diagonal, bands })
    }

    pub fn diagonal(&self) -> &DiagonalSequence {
        &self.diagonal
    }

    pub fn bands(&self) -> &BTreeMap<u32, DiagonalSequence> {
        &self.bands
    }

    /// Largest band offset (0 for a pure diagonal operator).
    pub fn bandwidth(&self) -> u32 {
        self.bands.keys().max().copied().unwrap_or(0)
    }

    /// True when the only band is the first off-diagonal.
    pub fn is_tridiagonal(&self) -> bool {
        self.bandwidth() <= 1
    }

    /// Matrix entry at absolute basis indices `(i, j)`. Entries beyond
    /// the bandwidth are zero; `(i, i+k)` is generated by band `k`
    /// evaluated at the row index of the upper entry.
    pub fn entry(&self, i: i64, j: i64) -> f64 {
        if i == j {
            return self.diagonal.eval(i);
        }
        let (row, offset) = if j > i {
            (i, (j - i) as u32)
        } else {
            (j, (i - j) as u32)
        };
        match self.bands.get(&offset) {
            Some(gen) => gen.eval(row),
            None => 0.0,
        }
    }

    /// The finite section of the operator along `filt` at index `n >= 1`.
    pub fn section(&self, filt: Filtration, n: usize) -> Section {
        assert!(n >= 1, "section index must be at least 1");
        let dim = filt.dimension(n);
        let first = filt.first_index(n);
        let diag: Vec<f64> = (0..dim).map(|t| self.diagonal.eval(first + t as i64)).collect();
        let mut bands = BTreeMap::new();
        for (&k, gen) in &self.bands {
            let k_us = k as usize;
            if k_us >= dim {
                continue;
            }
            let values: Vec<f64> = (0..dim - k_us)
                .map(|t| gen.eval(first + t as i64))
                .collect();
            bands.insert(k, values);
        }
        Section {
            filtration: filt,
            n,
            first_index: first,
            diag,
            bands,
        }
    }
}

/// A concrete symmetric band matrix cut from a [`BandOperatorSpec`]
/// along a filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    filtration: Filtration,
    n: usize,
    first_index: i64,
    diag: Vec<f64>,
    bands: BTreeMap<u32, Vec<f64>>,
}

impl Section {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn filtration(&self) -> Filtration {
        self.filtration
    }

    /// Filtration index this section was cut at.
    pub fn index(&self) -> usize {
        self.n
    }

    /// Absolute basis index of local row 0.
    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Entry at local indices `(r, c)`, both in `0..dim`.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        if r == c {
            return self.diag[r];
        }
        let (lo, hi) = if r < c { (r, c) } else { (c, r) };
        let offset = (hi - lo) as u32;
        match self.bands.get(&offset) {
            Some(values) => values[lo],
            None => 0.0,
        }
    }

    /// View as a symmetric tridiagonal matrix. Fails if any band beyond
    /// the first off-diagonal carries a nonzero entry.
    pub fn to_tridiagonal(&self) -> Result<SymTridiagonal> {
        for (&k, values) in &self.bands {
            if k > 1 && values.iter().any(|v| *v != 0.0) {
                return Err(Error::NotTridiagonal);
            }
        }
        let offdiag = match self.bands.get(&1) {
            Some(values) => values.clone(),
            None => vec![0.0; self.dim() - 1],
        };
        SymTridiagonal::new(self.diag.clone(), offdiag)
    }
}

/// Abstract bandwidth of the operator relative to the filtration: the
/// largest rank, over cut positions up to `n_max`, of the off-corner
/// block that couples a section to its complement. Zero for diagonal
/// operators, 1 for tridiagonal ones, at most the bandwidth in general;
/// the value stabilizes once the cut clears the bandwidth.
pub fn degree_estimate(spec: &BandOperatorSpec, filt: Filtration, n_max: usize) -> usize {
    assert!(n_max >= 1, "n_max must be at least 1");
    let k = spec.bandwidth();
    if k == 0 {
        return 0;
    }
    let mut deg = 0;
    for n in 1..=n_max {
        let cuts: &[i64] = match filt {
            Filtration::Unilateral => &[n as i64],
            Filtration::Bilateral => &[n as i64, -(n as i64) - 1],
        };
        for &c in cuts {
            deg = deg.max(cut_rank(spec, c, k));
        }
    }
    deg
}

/// Rank of the block `A[c-k+1 ..= c, c+1 ..= c+k]` coupling the two
/// sides of the cut between absolute indices `c` and `c+1`.
fn cut_rank(spec: &BandOperatorSpec, c: i64, k: u32) -> usize {
    let k = k as usize;
    let mut block: Vec<Vec<f64>> = (0..k)
        .map(|r| {
            let i = c - k as i64 + 1 + r as i64;
            (0..k).map(|s| spec.entry(i, c + 1 + s as i64)).collect()
        })
        .collect();
    matrix_rank(&mut block)
}

/// Rank by Gaussian elimination with partial pivoting; entries below
/// `1e-12` of the largest magnitude count as zero.
fn matrix_rank(m: &mut [Vec<f64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let max_abs = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    if max_abs == 0.0 {
        return 0;
    }
    let tol = max_abs * 1e-12;
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).max_by(|&a, &b| {
            m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap()
        });
        let Some(p) = pivot else { break };
        if m[p][col].abs() <= tol {
            continue;
        }
        m.swap(row, p);
        let pivot_row = m[row].clone();
        for r in m.iter_mut().skip(row + 1) {
            let factor = r[col] / pivot_row[col];
            for (c, p) in pivot_row.iter().enumerate().skip(col) {
                r[c] -= factor * p;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Upper bound `sum_k (1 + sqrt(2|k|)) d_k` on the filtration norm of
/// the operator, where `d_k` is the sup-norm of band `k`. It dominates
/// the operator norm of every finite section.
pub fn filtration_norm_bound(spec: &BandOperatorSpec) -> f64 {
    let mut bound = spec.diagonal().sup_abs();
    for (&k, gen) in spec.bands() {
        bound += 2.0 * (1.0 + (2.0 * k as f64).sqrt()) * gen.sup_abs();
    }
    bound
}

/// Outcome of the finite-window periodicity scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PeriodicityReport {
    Periodic { period: usize },
    Aperiodic,
    Inconclusive,
}

/// Finite-window periodicity heuristic over `n` in `[-n_window, n_window]`.
///
/// Reports `Periodic(p)` for the smallest candidate `p <= n_window / 4`
/// with `max_n |d_{n+p} - d_n| <= tol`, `Aperiodic` when every candidate
/// misses by a factor of 10, and `Inconclusive` otherwise. A heuristic,
/// not a proof: an almost periodic sequence can have near-periods that
/// only fail beyond the window.
pub fn periodicity_diagnostic(
    seq: &DiagonalSequence,
    n_window: usize,
    tol: f64,
) -> PeriodicityReport {
    assert!(n_window >= 16, "periodicity window must be at least 16");
    assert!(tol > 0.0, "tolerance must be positive");
    let w = n_window as i64;
    let values: Vec<f64> = (-w..=w).map(|n| seq.eval(n)).collect();
    let len = values.len();
    let mut worst_candidate = f64::INFINITY;
    for p in 1..=n_window / 4 {
        let mut max_diff = 0.0f64;
        for n in 0..len - p {
            max_diff = max_diff.max((values[n + p] - values[n]).abs());
        }
        if max_diff <= tol {
            return PeriodicityReport::Periodic { period: p };
        }
        worst_candidate = worst_candidate.min(max_diff);
    }
    if worst_candidate > 10.0 * tol {
        PeriodicityReport::Aperiodic
    } else {
        PeriodicityReport::Inconclusive
    }
}

/// JSON document describing an operator together with the filtration to
/// section it along:
/// `{"diagonal": {...}, "bands": {...}, "filtration": "unilateral"}`.
/// When `bands` is omitted it defaults to the single unit off-diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    pub diagonal: DiagonalSequence,
    #[serde(default = "default_bands")]
    pub bands: BTreeMap<u32, DiagonalSequence>,
    pub filtration: Filtration,
}

fn default_bands() -> BTreeMap<u32, DiagonalSequence> {
    let mut bands = BTreeMap::new();
    bands.insert(1, DiagonalSequence::constant(1.0));
    bands
}

impl OperatorDocument {
    pub fn new(spec: &BandOperatorSpec, filtration: Filtration) -> Self {
        Self {
            diagonal: spec.diagonal().clone(),
            bands: spec.bands().clone(),
            filtration,
        }
    }

    pub fn spec(&self) -> Result<BandOperatorSpec> {
        BandOperatorSpec::with_bands(self.diagonal.clone(), self.bands.clone())
    }
}
