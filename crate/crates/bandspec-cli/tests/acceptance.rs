//! Acceptance suite: one test per numbered criterion. Each test pins the
//! tolerance it was specified with and prints a PASS line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bandspec::analysis::{
    accumulation_rate_check, classify_point, distribution_limit, essential_spectrum_estimate,
    hausdorff_distance, trace_moment_oracle, Interval, Schedule, Verdict,
};
use bandspec::eigen::SymTridiagonal;
use bandspec::operator::{
    periodicity_diagnostic, BandOperatorSpec, DiagonalSequence, Filtration, PeriodicityReport,
    Potential, DEFAULT_PERIODICITY_TOL, DEFAULT_PERIODICITY_WINDOW,
};
use bandspec::schrodinger::{build_hamiltonian, hamiltonian_spectrum, DiscretizationParams};

fn pass(id: usize, detail: impl std::fmt::Display) {
    println!("acceptance criterion {id}: PASS - {detail}");
}

/// The criteria with runtime budgets hold this lock while they run, so
/// wall-clock measurements are not distorted by the other tests
/// competing for the same cores.
static HEAVY: Mutex<()> = Mutex::new(());

fn exclusive() -> MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn golden_mean() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

/// 1. Eigensolver exactness on the free section, n = 1000, tol = 1e-10:
///    every eigenvalue within 1e-9 of 2 cos(k pi / 1001). Under 5 s.
#[test]
fn criterion_01_eigensolver_exactness() {
    let _guard = exclusive();
    let start = Instant::now();
    let m = BandOperatorSpec::free_jacobi()
        .section(Filtration::Unilateral, 1000)
        .to_tridiagonal()
        .unwrap();
    let list = m.eigenvalues(1e-10);
    let elapsed = start.elapsed();

    let mut exact: Vec<f64> = (1..=1000)
        .map(|k| 2.0 * (k as f64 * PI / 1001.0).cos())
        .collect();
    exact.sort_by(f64::total_cmp);
    let mut worst = 0.0f64;
    for (got, want) in list.values().iter().zip(&exact) {
        worst = worst.max((got - want).abs());
    }
    assert!(worst <= 1e-9, "worst deviation {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:.2?}");
    pass(1, format!("max |dev| = {worst:.2e}, {elapsed:.2?}"));
}

/// 2. Sturm counts agree with eigenvalue-list counts on 200 random
///    tridiagonal matrices (n <= 500), away from interval boundaries.
///    Under 30 s.
#[test]
fn criterion_02_count_consistency() {
    let _guard = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for _ in 0..200 {
        let n: usize = rng.random_range(1..=500);
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let offdiag: Vec<f64> = (0..n.saturating_sub(1))
            .map(|_| {
                if rng.random_range(0.0..1.0) < 0.1 {
                    0.0
                } else {
                    rng.random_range(-2.0..2.0)
                }
            })
            .collect();
        let m = SymTridiagonal::new(diag, offdiag).unwrap();
        let r = m.gershgorin_bound();
        let tol = m.default_tol();
        let list = m.eigenvalues(tol);

        let a = rng.random_range(-r - 1.0..r + 1.0);
        let b = a + rng.random_range(0.0..r.max(0.5));
        let boundary = list
            .values()
            .iter()
            .any(|v| (v - a).abs() <= 100.0 * tol || (v - b).abs() <= 100.0 * tol);
        if boundary {
            skipped += 1;
            continue;
        }
        assert_eq!(
            m.count_in_interval(a, b).unwrap(),
            list.count_in_interval(a, b),
            "disagreement on ({a}, {b}] at n = {n}"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(checked >= 150, "only {checked} non-boundary cases");
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:.2?}");
    pass(2, format!("{checked} checked, {skipped} boundary-skipped, {elapsed:.2?}"));
}

/// 3. Free operator: essential support within Hausdorff 0.1 of [-2, 2]
///    at resolution 0.05 on the default schedule; no essential verdict
///    outside (-2.05, 2.05).
#[test]
fn criterion_03_free_essential_spectrum() {
    let spec = BandOperatorSpec::free_jacobi();
    let report = essential_spectrum_estimate(
        &spec,
        Filtration::Unilateral,
        0.05,
        &Schedule::default(),
    )
    .unwrap();
    let h = hausdorff_distance(&report.essential_support, &[Interval::new(-2.0, 2.0)]);
    assert!(h <= 0.1, "support {:?}", report.essential_support);
    for pv in &report.grid {
        if pv.lambda <= -2.05 || pv.lambda >= 2.05 {
            assert!(
                matches!(pv.verdict, Verdict::Outside | Verdict::Transient { .. }),
                "verdict {:?} at {}",
                pv.verdict,
                pv.lambda
            );
        }
    }
    pass(3, format!("Hausdorff to [-2, 2] = {h:.3}"));
}

/// 4. A single large diagonal entry produces one persistent isolated
///    eigenvalue (transient(1,1) at 10.1); the band (-2, 2) stays
///    essential.
#[test]
fn criterion_04_transient_detection() {
    let _guard = exclusive();
    let spec = BandOperatorSpec::tridiagonal(DiagonalSequence::table(1, vec![10.0], 0.0));

    // Locate the isolated eigenvalue with a brute-force solve first.
    let m = spec
        .section(Filtration::Unilateral, 2000)
        .to_tridiagonal()
        .unwrap();
    let list = m.eigenvalues(m.default_tol());
    let isolated = *list.values().last().unwrap();
    assert!(
        (isolated - 10.1).abs() < 1e-6,
        "isolated eigenvalue at {isolated}"
    );

    let pv = classify_point(
        &spec,
        Filtration::Unilateral,
        isolated,
        0.1,
        &Schedule::default(),
    )
    .unwrap();
    assert_eq!(pv.verdict, Verdict::Transient { p: 1, q: 1 }, "counts {:?}", pv.counts);

    let report = essential_spectrum_estimate(
        &spec,
        Filtration::Unilateral,
        0.05,
        &Schedule::default(),
    )
    .unwrap();
    for pv in &report.grid {
        if pv.lambda > -2.0 + 1e-9 && pv.lambda < 2.0 - 1e-9 {
            assert_eq!(
                pv.verdict,
                Verdict::Essential,
                "at {} counts {:?}",
                pv.lambda,
                pv.counts
            );
        }
    }
    let transient_near_peak = report.grid.iter().any(|pv| {
        (pv.lambda - 10.1).abs() <= 0.05 && pv.verdict == (Verdict::Transient { p: 1, q: 1 })
    });
    assert!(transient_near_peak, "no transient(1,1) window near 10.1");
    pass(4, format!("isolated eigenvalue {isolated:.6}, band essential"));
}

/// 5. Limit moments: even moments match the central binomial
///    coefficients within 2%, odd moments vanish within 0.01, and the
///    walk-sum oracle agrees with the eigenvalue route within 2%
///    relative for k <= 8. Under 60 s.
#[test]
fn criterion_05_limit_moments() {
    let _guard = exclusive();
    let start = Instant::now();
    let spec = BandOperatorSpec::free_jacobi();
    let moments =
        distribution_limit(&spec, Filtration::Unilateral, &Schedule::default(), 8).unwrap();

    for (m, central) in [(1usize, 2.0f64), (2, 6.0), (3, 20.0), (4, 70.0)] {
        let got = moments[2 * m].estimate;
        let rel = (got - central).abs() / central;
        assert!(rel <= 0.02, "moment {}: {got} vs {central}", 2 * m);
    }
    for k in [1usize, 3, 5, 7] {
        assert!(moments[k].estimate.abs() <= 0.01, "odd moment {k}");
    }

    let mut worst_rel = 0.0f64;
    for (k, eigen) in moments.iter().map(|m| m.estimate).enumerate() {
        let oracle = trace_moment_oracle(&spec, k, 2000).unwrap();
        if oracle.abs() > 1e-9 {
            worst_rel = worst_rel.max((eigen - oracle).abs() / oracle.abs());
        } else {
            assert!(eigen.abs() <= 0.01, "k = {k}");
        }
    }
    assert!(worst_rel <= 0.02, "worst relative gap {worst_rel:.4}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:.2?}");
    pass(5, format!("worst oracle gap {worst_rel:.2e}, {elapsed:.2?}"));
}

/// 6. Accumulation rate on (-1, 1): the arcsine measure is 1/3, and
///    0.30 n <= N_n <= 0.37 n for every scheduled n from the second on.
#[test]
fn criterion_06_accumulation_bounds() {
    let spec = BandOperatorSpec::free_jacobi();
    let check = accumulation_rate_check(
        &spec,
        Filtration::Unilateral,
        (-1.0, 1.0),
        &Schedule::default(),
    )
    .unwrap();
    assert!(check.pass, "counts {:?}", check.counts);
    for &(dim, count) in &check.counts[1..] {
        let c = count as f64;
        assert!(
            0.30 * dim as f64 <= c && c <= 0.37 * dim as f64,
            "N_{dim} = {count}"
        );
    }
    pass(
        6,
        format!("alpha = {:.4}, beta = {:.4}", check.alpha, check.beta),
    );
}

/// 7. Almost Mathieu diagonal (coupling 1/2, golden-mean frequency):
///    unilateral and bilateral sections agree on the essential support
///    within Hausdorff 0.1 at resolution 0.05, sizes up to 8000.
#[test]
fn criterion_07_unilateral_bilateral_agreement() {
    let _guard = exclusive();
    let spec = BandOperatorSpec::tridiagonal(DiagonalSequence::cosine(
        1.0,
        std::f64::consts::TAU * golden_mean(),
        0.0,
    ));
    let sched = Schedule::default();
    let uni = essential_spectrum_estimate(&spec, Filtration::Unilateral, 0.05, &sched).unwrap();
    let bi = essential_spectrum_estimate(&spec, Filtration::Bilateral, 0.05, &sched).unwrap();
    let h = hausdorff_distance(&uni.essential_support, &bi.essential_support);
    assert!(
        h <= 0.1,
        "unilateral {:?} vs bilateral {:?}",
        uni.essential_support,
        bi.essential_support
    );
    pass(7, format!("Hausdorff = {h:.3}"));
}

/// 8. Zero-potential discretization at sigma = 1/2: the mapped support
///    reproduces the kinetic symbol range [0, 1/(2 sigma^2)] = [0, 2]
///    within Hausdorff 0.1. This pins b = +1/(4 sigma^2).
#[test]
fn criterion_08_schrodinger_sign_oracle() {
    let params = DiscretizationParams::new(0.5, Potential::zero()).unwrap();
    let (_, form) = build_hamiltonian(&params);
    assert!((form.a - 0.5).abs() < 1e-15);
    assert!((form.b - 1.0).abs() < 1e-15, "b must be +1/(4 sigma^2)");

    let report =
        hamiltonian_spectrum(&params, Filtration::Unilateral, 0.05, &Schedule::default())
            .unwrap();
    let h = hausdorff_distance(&report.essential_support, &[Interval::new(0.0, 2.0)]);
    assert!(h <= 0.1, "support {:?}", report.essential_support);
    pass(8, format!("a = {}, b = {}, Hausdorff = {h:.3}", form.a, form.b));
}

/// 9. Periodicity scan of the discretized diagonal: aperiodic at
///    sigma = 1/2 with a non-constant potential, periodic at
///    sigma^2 = pi/4.
#[test]
fn criterion_09_periodicity_regimes() {
    let aperiodic = DiagonalSequence::schrodinger(Potential::identity(), 0.5).unwrap();
    assert_eq!(
        periodicity_diagnostic(&aperiodic, DEFAULT_PERIODICITY_WINDOW, DEFAULT_PERIODICITY_TOL),
        PeriodicityReport::Aperiodic
    );
    let periodic =
        DiagonalSequence::schrodinger(Potential::identity(), (PI / 4.0).sqrt()).unwrap();
    assert_eq!(
        periodicity_diagnostic(&periodic, DEFAULT_PERIODICITY_WINDOW, DEFAULT_PERIODICITY_TOL),
        PeriodicityReport::Periodic { period: 4 }
    );
    pass(9, "aperiodic at sigma=0.5, period 4 at sigma^2=pi/4");
}

/// 10. Determinism: identical configs produce byte-identical output,
///     independent of the worker count.
#[test]
fn criterion_10_determinism() {
    let _guard = exclusive();
    let dir = tempfile_dir();
    let operator_cfg = dir.join("op.json");
    std::fs::write(
        &operator_cfg,
        format!(
            r#"{{"diagonal": {{"kind": "cosine", "amplitude": 1.0,
                 "frequency": {}, "phase": 0.0}},
                 "filtration": "unilateral"}}"#,
            std::f64::consts::TAU * golden_mean()
        ),
    )
    .unwrap();
    let schrodinger_cfg = dir.join("sch.json");
    std::fs::write(
        &schrodinger_cfg,
        r#"{"potential": [{"poly": [0.0, 0.0, 1.0]}], "sigma": 0.5}"#,
    )
    .unwrap();

    let spectrum_args = vec![
        "spectrum".to_string(),
        "--config".into(),
        operator_cfg.display().to_string(),
        "--schedule".into(),
        "100,200,400".into(),
        "--resolution".into(),
        "0.1".into(),
    ];
    let sweep_args = vec![
        "sweep".to_string(),
        "--config".into(),
        schrodinger_cfg.display().to_string(),
        "--sigmas".into(),
        "0.5,0.3".into(),
        "--schedule".into(),
        "100,200,400".into(),
        "--resolution".into(),
        "0.2".into(),
        "--format".into(),
        "csv".into(),
    ];

    for args in [&spectrum_args, &sweep_args] {
        let mut outputs = Vec::new();
        for jobs in [None, Some("1"), Some("8"), Some("1")] {
            let mut full = args.clone();
            if let Some(j) = jobs {
                full.push("--jobs".into());
                full.push(j.into());
            }
            let out = Command::new(env!("CARGO_BIN_EXE_bandspec"))
                .args(&full)
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "{:?}", out.status);
            outputs.push(out.stdout);
        }
        for other in &outputs[1..] {
            assert_eq!(&outputs[0], other, "outputs differ across jobs settings");
        }
    }
    pass(10, "byte-identical across repeated runs and jobs 1/8");
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
