//! Property tests for the section/eigensolver invariants.

use proptest::prelude::*;

use bandspec::analysis::empirical_distribution;
use bandspec::eigen::SymTridiagonal;
use bandspec::operator::{
    degree_estimate, filtration_norm_bound, BandOperatorSpec, DiagonalSequence, Filtration,
};

fn arb_diagonal_sequence() -> impl Strategy<Value = DiagonalSequence> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(DiagonalSequence::constant),
        prop::collection::vec(-3.0..3.0f64, 1..6)
            .prop_map(|v| DiagonalSequence::periodic(v).unwrap()),
        (-2.0..2.0f64, 0.0..3.0f64, 0.0..6.3f64)
            .prop_map(|(a, f, p)| DiagonalSequence::cosine(a, f, p)),
        (
            -5i64..5,
            prop::collection::vec(-3.0..3.0f64, 1..8),
            -1.0..1.0f64
        )
            .prop_map(|(s, v, d)| DiagonalSequence::table(s, v, d)),
    ]
}

fn arb_tridiagonal_spec() -> impl Strategy<Value = BandOperatorSpec> {
    arb_diagonal_sequence().prop_map(BandOperatorSpec::tridiagonal)
}

fn arb_band_spec() -> impl Strategy<Value = BandOperatorSpec> {
    (
        arb_diagonal_sequence(),
        prop::collection::btree_map(1u32..4, arb_diagonal_sequence(), 0..3),
    )
        .prop_map(|(diag, bands)| BandOperatorSpec::with_bands(diag, bands).unwrap())
}

fn arb_matrix() -> impl Strategy<Value = SymTridiagonal> {
    (1usize..40)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-5.0..5.0f64, n),
                prop::collection::vec(-3.0..3.0f64, n - 1),
            )
        })
        .prop_map(|(d, e)| SymTridiagonal::new(d, e).unwrap())
}

proptest! {
    #[test]
    fn sturm_count_is_monotone(m in arb_matrix(), x in -8.0..8.0f64, dx in 0.0..4.0f64) {
        prop_assert!(m.sturm_count(x) <= m.sturm_count(x + dx));
    }

    #[test]
    fn sturm_count_saturates_outside_gershgorin(m in arb_matrix()) {
        let r = m.gershgorin_bound();
        prop_assert_eq!(m.sturm_count(-r - 1.0), 0);
        prop_assert_eq!(m.sturm_count(r + 1.0), m.dim());
    }

    #[test]
    fn adjacent_intervals_partition(m in arb_matrix(), a in -6.0..6.0f64,
                                    s in 0.0..3.0f64, t in 0.0..3.0f64) {
        let b = a + s;
        let c = b + t;
        let left = m.count_in_interval(a, b).unwrap();
        let right = m.count_in_interval(b, c).unwrap();
        let whole = m.count_in_interval(a, c).unwrap();
        prop_assert_eq!(left + right, whole);
    }

    #[test]
    fn eigenvalues_sorted_and_inside_gershgorin(m in arb_matrix()) {
        let r = m.gershgorin_bound();
        let tol = 1e-11;
        let list = m.eigenvalues(tol);
        prop_assert_eq!(list.len(), m.dim());
        for w in list.values().windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for v in list.values() {
            prop_assert!(v.abs() <= r + tol);
        }
    }

    #[test]
    fn interval_counts_match_eigenvalue_list(m in arb_matrix(), a in -8.0..8.0f64, w in 0.0..6.0f64) {
        let tol = 1e-11;
        let list = m.eigenvalues(tol);
        let b = a + w;
        // Boundary cases are genuinely ambiguous at tol scale; skip them.
        let boundary = list.values().iter().any(|v| (v - a).abs() <= 10.0 * tol || (v - b).abs() <= 10.0 * tol);
        prop_assume!(!boundary);
        prop_assert_eq!(
            m.count_in_interval(a, b).unwrap(),
            list.count_in_interval(a, b)
        );
    }

    #[test]
    fn cauchy_interlacing(m in arb_matrix()) {
        prop_assume!(m.dim() >= 2);
        let tol = 1e-12;
        let slack = 1e-9;
        let outer = m.eigenvalues(tol);
        let leading = SymTridiagonal::new(
            m.diag()[..m.dim() - 1].to_vec(),
            m.offdiag()[..m.dim() - 2].to_vec(),
        ).unwrap();
        let inner = leading.eigenvalues(tol);
        for k in 0..inner.len() {
            prop_assert!(outer.values()[k] <= inner.values()[k] + slack);
            prop_assert!(inner.values()[k] <= outer.values()[k + 1] + slack);
        }
    }

    #[test]
    fn sections_nest_entrywise(spec in arb_band_spec(), n in 1usize..8, extra in 1usize..8,
                               bilateral in any::<bool>()) {
        let filt = if bilateral { Filtration::Bilateral } else { Filtration::Unilateral };
        let small = spec.section(filt, n);
        let large = spec.section(filt, n + extra);
        let shift = (small.first_index() - large.first_index()) as usize;
        for r in 0..small.dim() {
            for c in 0..small.dim() {
                prop_assert_eq!(small.entry(r, c), large.entry(r + shift, c + shift));
            }
        }
    }

    #[test]
    fn norm_bound_dominates_section_norm(spec in arb_tridiagonal_spec(), bilateral in any::<bool>()) {
        let filt = if bilateral { Filtration::Bilateral } else { Filtration::Unilateral };
        let bound = filtration_norm_bound(&spec);
        for n in [3usize, 17, 40] {
            let m = spec.section(filt, n).to_tridiagonal().unwrap();
            let list = m.eigenvalues(1e-10);
            let norm = list.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
            prop_assert!(norm <= bound + 1e-8, "norm {} vs bound {}", norm, bound);
        }
    }

    #[test]
    fn degree_bounded_by_bandwidth_and_stable(spec in arb_band_spec(), bilateral in any::<bool>()) {
        let filt = if bilateral { Filtration::Bilateral } else { Filtration::Unilateral };
        let k = spec.bandwidth() as usize;
        let stable = degree_estimate(&spec, filt, 2 * k + 2);
        prop_assert!(stable <= k);
        for extra in 1..4 {
            prop_assert_eq!(degree_estimate(&spec, filt, 2 * k + 2 + extra), stable);
        }
    }

    #[test]
    fn cdf_is_a_distribution_function(spec in arb_tridiagonal_spec(), n in 1usize..60,
                                      x in -8.0..8.0f64, dx in 0.0..4.0f64) {
        let d = empirical_distribution(&spec, Filtration::Unilateral, n).unwrap();
        let r = filtration_norm_bound(&spec);
        prop_assert_eq!(d.cdf(-r - 1.0), 0.0);
        prop_assert_eq!(d.cdf(r + 1.0), 1.0);
        prop_assert!(d.cdf(x) <= d.cdf(x + dx));
    }
}

/// Dense product bandwidth never exceeds the sum of the factors'
/// bandwidths, mirroring subadditivity of the operator degree.
#[test]
fn product_bandwidth_is_subadditive() {
    let dim = 12;
    let specs = [
        {
            let mut bands = std::collections::BTreeMap::new();
            bands.insert(1, DiagonalSequence::cosine(1.0, 0.9, 0.2));
            bands.insert(2, DiagonalSequence::constant(0.5));
            BandOperatorSpec::with_bands(DiagonalSequence::constant(1.0), bands).unwrap()
        },
        BandOperatorSpec::free_jacobi(),
        BandOperatorSpec::with_bands(
            DiagonalSequence::periodic(vec![1.0, -1.0]).unwrap(),
            std::collections::BTreeMap::new(),
        )
        .unwrap(),
    ];
    for a_spec in &specs {
        for b_spec in &specs {
            let a = a_spec.section(Filtration::Unilateral, dim);
            let b = b_spec.section(Filtration::Unilateral, dim);
            let mut product = vec![vec![0.0f64; dim]; dim];
            for (r, row) in product.iter_mut().enumerate() {
                for (c, slot) in row.iter_mut().enumerate() {
                    *slot = (0..dim).map(|t| a.entry(r, t) * b.entry(t, c)).sum();
                }
            }
            let mut bw = 0usize;
            for (r, row) in product.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if *v != 0.0 {
                        bw = bw.max(r.abs_diff(c));
                    }
                }
            }
            let limit = (a_spec.bandwidth() + b_spec.bandwidth()) as usize;
            assert!(
                bw <= limit,
                "product bandwidth {bw} exceeds {limit}"
            );
        }
    }
}
