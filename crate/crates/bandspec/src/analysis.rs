//! Asymptotic spectral statistics of finite sections.
//!
//! A point of the real line is probed through the counts `N_n(U)` of
//! section eigenvalues in a small window `U` around it, along a schedule
//! of growing section sizes. Windows whose counts grow with the section
//! size witness essential spectrum; windows whose counts stay bounded
//! witness at most isolated eigenvalues of finite multiplicity; windows
//! with no eigenvalues at all lie outside. The classifier turns this
//! asymptotic dichotomy into a finite-data decision rule with an honest
//! `indeterminate` third verdict.
//!
//! The limiting eigenvalue distribution is estimated two independent
//! ways: from eigenvalue samples of the sections (moments and empirical
//! CDF), and from an eigensolver-free Birkhoff average of diagonal
//! matrix elements `<T^k e_j, e_j>` computed by exact weighted-path
//! summation. Agreement of the two is a cross-check, not an assumption.

use serde::{Deserialize, Serialize};

use crate::eigen::{EigenvalueList, SymTridiagonal};
use crate::error::{Error, Result};
use crate::operator::{BandOperatorSpec, Filtration};
use crate::par;

/// Default doubling schedule of section sizes.
pub const DEFAULT_SCHEDULE: [usize; 6] = [250, 500, 1000, 2000, 4000, 8000];

/// A window whose counts ever exceed this cap cannot be transient.
pub const TRANSIENT_COUNT_CAP: usize = 16;
/// Required count ratio per doubling, over the last two doublings, for
/// the essential verdict. Growth proportional to n gives ratio 2; the
/// slack tolerates boundary windows.
pub const ESSENTIAL_GROWTH_RATIO: f64 = 1.6;
/// Minimum final count for the essential verdict.
pub const ESSENTIAL_MIN_FINAL: usize = 8;
/// Largest eigenvalue-moment order (conditioning guard).
pub const MAX_MOMENT_ORDER: usize = 12;
/// Largest walk-sum moment order.
pub const MAX_WALK_ORDER: usize = 16;

/// Strictly increasing list of section sizes `n_1 < ... < n_K`, `K >= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    sizes: Vec<usize>,
}

impl Schedule {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 3
            || sizes[0] == 0
            || sizes.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidSchedule);
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn largest(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// Index of the first entry of the "late" half (the last ceil(K/2)
    /// entries).
    pub(crate) fn late_start(&self) -> usize {
        self.len() - self.len().div_ceil(2)
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            sizes: DEFAULT_SCHEDULE.to_vec(),
        }
    }
}

/// Classification of one point of the real line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Window counts grow with the section size.
    Essential,
    /// Window counts stay bounded; `p`/`q` are the min of the late
    /// counts and the max of all counts.
    Transient { p: usize, q: usize },
    /// Neither growth nor boundedness established on this schedule.
    Indeterminate,
    /// No section eigenvalue ever entered the window.
    Outside,
}

/// Verdict for one grid point, with the underlying count sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointVerdict {
    pub lambda: f64,
    pub window_width: f64,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Pairs `(n_k, N_{n_k}(U))` over the schedule.
    pub counts: Vec<(usize, usize)>,
}

impl PointVerdict {
    pub fn is_essential(&self) -> bool {
        self.verdict == Verdict::Essential
    }
}

/// Closed interval `[lo, hi]` (degenerate when `lo == hi`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Grid classification over the Gershgorin interval of the largest
/// section, with essential runs merged into support intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub filtration: Filtration,
    pub schedule: Vec<usize>,
    pub grid_resolution: f64,
    /// Interval the grid covers (the Gershgorin interval of the largest
    /// section, possibly affinely mapped).
    pub grid_interval: Interval,
    pub essential_support: Vec<Interval>,
    pub grid: Vec<PointVerdict>,
}

/// Build the scheduled sections once and view them as tridiagonal
/// matrices.
fn scheduled_tridiagonals(
    spec: &BandOperatorSpec,
    filt: Filtration,
    sched: &Schedule,
) -> Result<Vec<SymTridiagonal>> {
    sched
        .sizes()
        .iter()
        .map(|&n| spec.section(filt, n).to_tridiagonal())
        .collect()
}

fn growth_ratio(denom: usize, num: usize) -> f64 {
    if denom == 0 {
        f64::INFINITY
    } else {
        num as f64 / denom as f64
    }
}

/// Decision rule applied to a count sequence. Exactly one verdict fires.
fn verdict_from_counts(counts: &[usize], late_start: usize) -> Verdict {
    if counts.iter().all(|&c| c == 0) {
        return Verdict::Outside;
    }
    let q = *counts.iter().max().unwrap();
    if q <= TRANSIENT_COUNT_CAP {
        let p = *counts[late_start..].iter().min().unwrap();
        return Verdict::Transient { p, q };
    }
    let k = counts.len();
    let final_count = counts[k - 1];
    if final_count >= ESSENTIAL_MIN_FINAL
        && growth_ratio(counts[k - 2], counts[k - 1]) >= ESSENTIAL_GROWTH_RATIO
        && growth_ratio(counts[k - 3], counts[k - 2]) >= ESSENTIAL_GROWTH_RATIO
    {
        return Verdict::Essential;
    }
    Verdict::Indeterminate
}

fn classify_against(
    sched: &Schedule,
    mats: &[SymTridiagonal],
    lambda: f64,
    width: f64,
) -> PointVerdict {
    let a = lambda - 0.5 * width;
    let b = lambda + 0.5 * width;
    let counts: Vec<usize> = mats
        .iter()
        .map(|m| m.count_in_interval(a, b).expect("width is positive"))
        .collect();
    let verdict = verdict_from_counts(&counts, sched.late_start());
    PointVerdict {
        lambda,
        window_width: width,
        verdict,
        counts: sched.sizes().iter().copied().zip(counts).collect(),
    }
}

/// Classify the window `(lambda - width/2, lambda + width/2]` from the
/// counts `N_{n_k}` over the schedule.
pub fn classify_point(
    spec: &BandOperatorSpec,
    filt: Filtration,
    lambda: f64,
    width: f64,
    sched: &Schedule,
) -> Result<PointVerdict> {
    if width <= 0.0 {
        return Err(Error::NonPositiveWidth(width));
    }
    let mats = scheduled_tridiagonals(spec, filt, sched)?;
    Ok(classify_against(sched, &mats, lambda, width))
}

/// Classify a uniform grid over the Gershgorin interval of the largest
/// section (window width = grid step) and merge the essential runs.
pub fn essential_spectrum_estimate(
    spec: &BandOperatorSpec,
    filt: Filtration,
    grid_resolution: f64,
    sched: &Schedule,
) -> Result<ClassificationReport> {
    if grid_resolution <= 0.0 {
        return Err(Error::NonPositiveResolution(grid_resolution));
    }
    let mats = scheduled_tridiagonals(spec, filt, sched)?;
    let r = mats.last().unwrap().gershgorin_bound();
    let steps = (2.0 * r / grid_resolution + 1e-9).floor() as usize;
    let grid_points: Vec<f64> = (0..=steps)
        .map(|j| -r + grid_resolution * j as f64)
        .collect();
    let grid = par::map_slice(&grid_points, |&lambda| {
        classify_against(sched, &mats, lambda, grid_resolution)
    });
    let essential_support = merge_essential_runs(&grid);
    Ok(ClassificationReport {
        filtration: filt,
        schedule: sched.sizes().to_vec(),
        grid_resolution,
        grid_interval: Interval::new(-r, r),
        essential_support,
        grid,
    })
}

/// Merge maximal runs of consecutive essential grid points into closed
/// intervals (a lone essential point becomes a degenerate interval).
fn merge_essential_runs(grid: &[PointVerdict]) -> Vec<Interval> {
    let mut intervals = Vec::new();
    let mut run_start: Option<f64> = None;
    let mut run_end = 0.0;
    for pv in grid {
        if pv.is_essential() {
            if run_start.is_none() {
                run_start = Some(pv.lambda);
            }
            run_end = pv.lambda;
        } else if let Some(lo) = run_start.take() {
            intervals.push(Interval::new(lo, run_end));
        }
    }
    if let Some(lo) = run_start {
        intervals.push(Interval::new(lo, run_end));
    }
    intervals
}

/// Retain the grid points that stay within `eps` of the section spectra
/// for every size in the late half of the schedule.
pub fn lambda_set_estimate(
    spec: &BandOperatorSpec,
    filt: Filtration,
    grid: &[f64],
    sched: &Schedule,
    eps: f64,
) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    assert!(eps > 0.0, "eps must be positive");
    let mats = scheduled_tridiagonals(spec, filt, sched)?;
    let late = &mats[sched.late_start()..];
    let spectra: Vec<EigenvalueList> = late
        .iter()
        .map(|m| m.eigenvalues(m.default_tol()))
        .collect();
    Ok(grid
        .iter()
        .copied()
        .filter(|&lambda| spectra.iter().all(|s| s.nearest_distance(lambda) <= eps))
        .collect())
}

/// Eigenvalue sample of one section, exposed as an empirical spectral
/// distribution.
#[derive(Clone, Debug)]
pub struct SpectralDistribution {
    sample: EigenvalueList,
    dim: usize,
}

impl SpectralDistribution {
    pub fn sample(&self) -> &EigenvalueList {
        &self.sample
    }

    /// Dimension of the sampled section.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Right-continuous empirical CDF.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sample.values().partition_point(|v| *v <= x) as f64 / self.dim as f64
    }

    /// `(1/n) sum lambda_i^k`.
    pub fn moment(&self, k: usize) -> f64 {
        let sum: f64 = self
            .sample
            .values()
            .iter()
            .map(|v| v.powi(k as i32))
            .sum();
        sum / self.dim as f64
    }
}

/// Eigenvalue sample of the section at filtration index `n`.
pub fn empirical_distribution(
    spec: &BandOperatorSpec,
    filt: Filtration,
    n: usize,
) -> Result<SpectralDistribution> {
    assert!(n >= 1, "section index must be at least 1");
    let m = spec.section(filt, n).to_tridiagonal()?;
    let sample = m.eigenvalues(m.default_tol());
    Ok(SpectralDistribution {
        dim: m.dim(),
        sample,
    })
}

/// Moment estimate across the schedule; `estimate` is the value at the
/// largest size, `per_schedule` documents the convergence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub k: usize,
    pub estimate: f64,
    pub per_schedule: Vec<f64>,
}

/// Eigenvalue moments `(1/n) sum lambda_i^k` for `k = 0..=moments_up_to`
/// over the schedule.
pub fn distribution_limit(
    spec: &BandOperatorSpec,
    filt: Filtration,
    sched: &Schedule,
    moments_up_to: usize,
) -> Result<Vec<MomentEstimate>> {
    if moments_up_to > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge {
            got: moments_up_to,
            max: MAX_MOMENT_ORDER,
        });
    }
    let mut distributions = Vec::with_capacity(sched.len());
    for &n in sched.sizes() {
        distributions.push(empirical_distribution(spec, filt, n)?);
    }
    Ok((0..=moments_up_to)
        .map(|k| {
            let per_schedule: Vec<f64> =
                distributions.iter().map(|d| d.moment(k)).collect();
            MomentEstimate {
                k,
                estimate: *per_schedule.last().unwrap(),
                per_schedule,
            }
        })
        .collect())
}

/// Eigensolver-free estimate of the k-th limit moment: the Birkhoff
/// average of `<T^k e_j, e_j>` over `j` in `[-n_window, n_window]`, each
/// term an exact weighted sum over length-k walks on the integers
/// returning to `j` (off-diagonal steps weighted by the band entries,
/// stay-steps by the diagonal entries).
pub fn trace_moment_oracle(
    spec: &BandOperatorSpec,
    k: usize,
    n_window: usize,
) -> Result<f64> {
    if k > MAX_WALK_ORDER {
        return Err(Error::MomentOrderTooLarge {
            got: k,
            max: MAX_WALK_ORDER,
        });
    }
    assert!(n_window >= 1, "window must be at least 1");
    let radius = k * spec.bandwidth() as usize;
    let w = n_window as i64;
    let centers: Vec<i64> = (-w..=w).collect();
    let terms = par::map_slice(&centers, |&j| diagonal_walk_sum(spec, j, k, radius));
    Ok(terms.iter().sum::<f64>() / centers.len() as f64)
}

/// `<T^k e_j, e_j>` by k applications of the band matrix restricted to
/// the reachable window around j.
fn diagonal_walk_sum(spec: &BandOperatorSpec, j: i64, k: usize, radius: usize) -> f64 {
    let len = 2 * radius + 1;
    let mut v = vec![0.0f64; len];
    let mut next = vec![0.0f64; len];
    v[radius] = 1.0;
    for _ in 0..k {
        for (t, slot) in next.iter_mut().enumerate() {
            let pos = j + t as i64 - radius as i64;
            let mut acc = spec.diagonal().eval(pos) * v[t];
            for (&m, gen) in spec.bands() {
                let m_us = m as usize;
                if t + m_us < len {
                    acc += gen.eval(pos) * v[t + m_us];
                }
                if t >= m_us {
                    acc += gen.eval(pos - m_us as i64) * v[t - m_us];
                }
            }
            *slot = acc;
        }
        std::mem::swap(&mut v, &mut next);
    }
    v[radius]
}

/// Result of the accumulation-rate check over an open interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccumulationCheck {
    pub alpha: f64,
    pub beta: f64,
    pub pass: bool,
    /// `(dimension, count)` per schedule entry.
    pub counts: Vec<(usize, usize)>,
}

/// Estimate the limit measure of `(a, b)` from the largest section and
/// check `alpha * n <= N_n <= beta * n` (n = section dimension) for all
/// scheduled sizes from the second one on, with `alpha`/`beta` set 10%
/// below/above the estimate.
pub fn accumulation_rate_check(
    spec: &BandOperatorSpec,
    filt: Filtration,
    interval: (f64, f64),
    sched: &Schedule,
) -> Result<AccumulationCheck> {
    let (a, b) = interval;
    if a >= b {
        return Err(Error::DegenerateInterval { a, b });
    }
    let mats = scheduled_tridiagonals(spec, filt, sched)?;
    let counts: Vec<(usize, usize)> = mats
        .iter()
        .map(|m| Ok((m.dim(), m.count_in_interval(a, b)?)))
        .collect::<Result<_>>()?;
    let (last_dim, last_count) = *counts.last().unwrap();
    let estimate = last_count as f64 / last_dim as f64;
    let alpha = 0.9 * estimate;
    let beta = 1.1 * estimate;
    let pass = counts[1..].iter().all(|&(dim, count)| {
        let c = count as f64;
        alpha * dim as f64 <= c && c <= beta * dim as f64
    });
    Ok(AccumulationCheck {
        alpha,
        beta,
        pass,
        counts,
    })
}

/// Hausdorff distance between two finite unions of closed intervals
/// (both sorted and disjoint). Empty vs nonempty is infinite.
pub fn hausdorff_distance(a: &[Interval], b: &[Interval]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed_hausdorff(a, b).max(directed_hausdorff(b, a)),
    }
}

fn point_distance(x: f64, set: &[Interval]) -> f64 {
    set.iter()
        .map(|iv| {
            if x < iv.lo {
                iv.lo - x
            } else if x > iv.hi {
                x - iv.hi
            } else {
                0.0
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// `sup_{x in a} dist(x, b)`; the sup is attained at an endpoint of `a`
/// or at a gap midpoint of `b` interior to `a`.
fn directed_hausdorff(a: &[Interval], b: &[Interval]) -> f64 {
    let mut worst = 0.0f64;
    for iv in a {
        worst = worst.max(point_distance(iv.lo, b));
        worst = worst.max(point_distance(iv.hi, b));
    }
    for gap in b.windows(2) {
        let mid = 0.5 * (gap[0].hi + gap[1].lo);
        if a.iter().any(|iv| iv.contains(mid)) {
            worst = worst.max(point_distance(mid, b));
        }
    }
    worst
}
