//! Spectral approximation of self-adjoint band operators by finite
//! sections.
//!
//! The operators are doubly infinite band matrices, chiefly tridiagonal
//! ones `A e_n = e_{n-1} + d_n e_n + e_{n+1}` with a bounded diagonal
//! sequence. Cutting the operator along a filtration (basis indices
//! `1..=n` or `-n..=n`) gives finite symmetric matrices whose eigenvalue
//! statistics, taken along a schedule of growing sizes, recover the
//! essential spectrum and the limiting eigenvalue distribution:
//!
//! * [`operator`] — diagonal-sequence generators, band operator specs,
//!   filtrations, sections, and the degree / norm-bound / periodicity
//!   diagnostics;
//! * [`eigen`] — Sturm-sequence counting and bisection eigensolver for
//!   symmetric tridiagonal matrices;
//! * [`analysis`] — essential/transient classification of spectral
//!   points, empirical spectral distributions, moment limits, and the
//!   walk-sum trace oracle;
//! * [`schrodinger`] — the discretized Schrödinger pipeline producing
//!   such operators from a potential and a step size.
//!
//! All types are immutable after construction and all operations are
//! pure; with the default `parallel` feature the grid and per-eigenvalue
//! work is distributed with rayon, with results independent of the
//! thread count.

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod operator;
pub mod schrodinger;

mod par;

pub use analysis::{
    accumulation_rate_check, classify_point, distribution_limit, empirical_distribution,
    essential_spectrum_estimate, hausdorff_distance, lambda_set_estimate, trace_moment_oracle,
    AccumulationCheck, ClassificationReport, Interval, MomentEstimate, PointVerdict, Schedule,
    SpectralDistribution, Verdict,
};
pub use eigen::{EigenvalueList, SymTridiagonal};
pub use error::Error;
pub use operator::{
    degree_estimate, filtration_norm_bound, periodicity_diagnostic, BandOperatorSpec,
    DiagonalSequence, Filtration, OperatorDocument, PeriodicityReport, Potential, PotentialTerm,
    Section,
};
pub use schrodinger::{
    build_hamiltonian, hamiltonian_spectrum, map_spectrum, momentum_symbol, position_symbol,
    AffineForm, DiscretizationParams, SchrodingerDocument,
};
