use hamcomm::commutator::{build_commutator, eigenvalue, predicted_dimension, spectrum};
use hamcomm::hamming::{binomial, build_hamming, decode};
use hamcomm::linalg::{RMatrix, Rational, Subspace};
use hamcomm::split::SplitDecomposition;
use hamcomm::tmodule::{expected_pattern, TAction};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

/// Krawtchouk polynomial `K_i(x)` for `H(D, r)`.
fn krawtchouk(d: u32, r: u32, i: u32, x: u32) -> BigInt {
    (0..=i)
        .map(|j| {
            let sign = if j % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            let term = BigInt::from(binomial(x as u64, j as u64))
                * BigInt::from(binomial((d - x) as u64, (i - j) as u64))
                * BigInt::from(r - 1).pow(i - j);
            sign * term
        })
        .sum()
}

#[test]
fn dual_distance_is_krawtchouk() {
    for (d, r) in [(1, 3), (2, 3), (2, 4), (3, 3), (3, 4)] {
        let ctx = build_hamming(d, r).unwrap();
        for i in 0..=d {
            let a = &ctx.dual_distance[i as usize];
            for y in 0..ctx.num_vertices() {
                let h = ctx.distance_from_base(y) as u32;
                let want = Rational::from(krawtchouk(d, r, i, h));
                assert_eq!(a.get(y, y), &want, "H({d},{r}) A*_{i} at {y}");
            }
        }
    }
}

#[test]
fn idempotents_are_eigenprojections() {
    // A E_i = ((r-1)D - r i) E_i
    for (d, r) in [(2, 3), (3, 4), (2, 5)] {
        let ctx = build_hamming(d, r).unwrap();
        for (i, e) in ctx.idempotents.iter().enumerate() {
            let theta = Rational::from_integer((r as i64 - 1) * d as i64 - r as i64 * i as i64);
            assert_eq!(&(ctx.adjacency() * e), &e.scale(&theta));
        }
    }
}

#[test]
fn distance_matrices_match_coordinates() {
    let ctx = build_hamming(3, 3).unwrap();
    let n = ctx.num_vertices();
    for x in 0..n {
        for y in 0..n {
            let dist = decode(x, 3, 3).iter().zip(decode(y, 3, 3)).filter(|(a, b)| *a != b).count();
            for (i, a) in ctx.distance.iter().enumerate() {
                assert_eq!(a.get(x, y).is_one(), i == dist);
            }
        }
    }
}

#[test]
fn commutator_trace_and_determinant() {
    for (d, r) in [(1, 4), (2, 3), (2, 4), (3, 3)] {
        let ctx = build_hamming(d, r).unwrap();
        let c = build_commutator(&ctx).unwrap();
        let predicted: Rational = (-(d as i64)..=d as i64)
            .map(|s| {
                let dim = predicted_dimension(d, r, s).unwrap();
                eigenvalue(r, s) * Rational::from(BigInt::from(dim))
            })
            .sum();
        assert_eq!(c.trace(), predicted, "H({d},{r})");
        assert!(c.determinant().unwrap().is_one(), "H({d},{r})");
    }
}

#[test]
fn v_eta_decomposes_standard_module() {
    let ctx = build_hamming(3, 3).unwrap();
    let split = SplitDecomposition::new(&ctx);
    let parts: Vec<Subspace> = (0..=3).map(|e| split.v_eta(e).unwrap()).collect();
    let sum = Subspace::sum_all(27, &parts).unwrap();
    assert_eq!(sum.dim(), 27);
    assert_eq!(parts.iter().map(Subspace::dim).sum::<usize>(), 27);
    // η = 0 part has dimension 2^D
    assert_eq!(parts[0].dim(), 8);
}

#[test]
fn h24_projections() {
    let ctx = build_hamming(2, 4).unwrap();
    let spec = spectrum(&ctx).unwrap();
    assert!(spec.checks.all_pass(), "{:?}", spec.checks);
    for e in &spec.eigendata {
        let f = spec.projection(e.s).unwrap();
        assert_eq!(f.rank(), e.computed_dim);
        assert_eq!(f.trace(), Rational::from(e.computed_dim));
    }
}

proptest! {
    #[test]
    fn dimension_formula_complete(d in 1u32..25, r in 3u32..20) {
        let dims: Vec<BigUint> = (-(d as i64)..=d as i64).map(|s| predicted_dimension(d, r, s).unwrap()).collect();
        let total: BigUint = dims.iter().sum();
        prop_assert_eq!(total, BigUint::from(r).pow(d));
        let mut rev = dims.clone();
        rev.reverse();
        prop_assert_eq!(&dims, &rev);
        prop_assert_eq!(&dims[2 * d as usize], &BigUint::from(1u32));
    }

    #[test]
    fn eigenvalues_invert_pairwise(r in 3u32..40, s in -12i64..12) {
        prop_assert!((eigenvalue(r, s) * eigenvalue(r, -s)).is_one());
    }

    #[test]
    fn predicted_dimension_rejects_out_of_range(d in 1u32..10, excess in 1i64..5) {
        prop_assert!(predicted_dimension(d, 3, d as i64 + excess).is_err());
        prop_assert!(predicted_dimension(d, 3, -(d as i64) - excess).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_closures_are_modules(entries in prop::collection::vec(-3i64..4, 16)) {
        prop_assume!(entries.iter().any(|&x| x != 0));
        let ctx = build_hamming(2, 4).unwrap();
        let action = TAction::new(&ctx);
        let v = RMatrix::column_vector(entries.iter().map(|&x| Rational::from(x)).collect());
        let w = action.cyclic_module(&v).unwrap();
        prop_assert!(w.space.contains_vector(&v).unwrap());
        prop_assert!(w.space.is_invariant_under(ctx.adjacency()).unwrap());
        prop_assert!(w.space.is_invariant_under(ctx.dual_adjacency()).unwrap());
        if w.irreducible {
            let spec = spectrum(&ctx).unwrap();
            let cert = action.certify(&spec, &w).unwrap();
            prop_assert!(cert.pass);
            prop_assert_eq!(cert.f_dims, expected_pattern(2, w.profile.diameter));
        }
    }

    #[test]
    fn endpoint_seeds_generate_irreducibles(d in 1u32..4, r in 3u32..5) {
        prop_assume!(r.pow(d) <= 64);
        let ctx = build_hamming(d, r).unwrap();
        let action = TAction::new(&ctx);
        for seed in action.endpoint_seeds().unwrap() {
            let w = action.cyclic_module(&seed).unwrap();
            prop_assert!(w.irreducible);
            prop_assert!(w.profile.thin);
            prop_assert_eq!(w.dim(), w.profile.diameter + 1);
        }
    }
}
