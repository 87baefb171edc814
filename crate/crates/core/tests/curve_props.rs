//! Point-count invariants against the all-(x,y)-pairs oracle.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use weilscan_core::{
    evaluate_predicate, is_squarefree, primes_in_range, weil_guarantee_threshold, CurveEquation,
    FieldPoly, PrimeField,
};

fn curve(genus: u32, coeffs: &[u64], field: &Arc<PrimeField>) -> CurveEquation {
    CurveEquation::new(genus, coeffs.to_vec(), field.clone()).unwrap()
}

/// Oracle: count solutions of y^2 = f(x) by testing every pair.
fn pair_count(coeffs: &[u64], field: &PrimeField) -> u64 {
    let p = field.modulus();
    let mut full = vec![1u64];
    full.extend_from_slice(coeffs);
    let poly = FieldPoly::new(&full, field);
    let mut count = 0;
    for x in 0..p {
        let fx = poly.eval(x, field);
        for y in 0..p {
            if y * y % p == fx {
                count += 1;
            }
        }
    }
    count
}

fn all_vectors(len: u32, p: u64) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(len)).map(move |idx| {
        let mut v = idx;
        let mut coeffs = vec![0u64; len as usize];
        for slot in coeffs.iter_mut().rev() {
            *slot = v % p;
            v /= p;
        }
        coeffs
    })
}

#[test]
fn counts_match_pair_oracle_exhaustively() {
    for genus in [1u32, 2] {
        for p in [3u64, 5, 7] {
            let field = Arc::new(PrimeField::new(p).unwrap());
            for coeffs in all_vectors(2 * genus + 1, p) {
                let eq = curve(genus, &coeffs, &field);
                let got = eq.affine_point_count();
                let oracle = pair_count(&coeffs, &field);
                assert_eq!(got.count, oracle, "g={genus} p={p} coeffs={coeffs:?}");
                assert_eq!(
                    eq.has_affine_point(),
                    oracle > 0,
                    "g={genus} p={p} coeffs={coeffs:?}"
                );

                // decomposition: count = #roots + 2 * #square values
                let poly = eq.poly();
                let roots = (0..p).filter(|&x| poly.eval(x, &field) == 0).count() as u64;
                let squares = (0..p)
                    .filter(|&x| field.legendre(poly.eval(x, &field)) == 1)
                    .count() as u64;
                assert_eq!(got.count, roots + 2 * squares);
            }
        }
    }
}

#[test]
fn translation_leaves_the_count_invariant() {
    let mut rng = StdRng::seed_from_u64(17);
    for p in primes_in_range(3, 13) {
        let field = Arc::new(PrimeField::new(p).unwrap());
        for _ in 0..50 {
            let genus = rng.gen_range(1..=3u32);
            let coeffs: Vec<u64> = (0..2 * genus + 1).map(|_| rng.gen_range(0..p)).collect();
            let eq = curve(genus, &coeffs, &field);
            let reference = eq.affine_point_count().count;
            let poly = eq.poly();
            for t in 0..p {
                let shifted = poly.shift(t, &field);
                let shifted_eq = curve(genus, &shifted.coeffs()[1..], &field);
                assert_eq!(
                    shifted_eq.affine_point_count().count,
                    reference,
                    "g={genus} p={p} t={t}"
                );
            }
        }
    }
}

#[test]
fn weil_bound_exhaustive_genus1() {
    for p in primes_in_range(3, 13) {
        let field = Arc::new(PrimeField::new(p).unwrap());
        for coeffs in all_vectors(3, p) {
            let eq = curve(1, &coeffs, &field);
            if eq.is_squarefree() {
                assert!(eq.affine_point_count().weil_ok, "p={p} coeffs={coeffs:?}");
            }
        }
    }
}

#[test]
fn weil_bound_sampled_genus2_and_3() {
    let mut rng = StdRng::seed_from_u64(19);
    for p in primes_in_range(3, 31) {
        let field = Arc::new(PrimeField::new(p).unwrap());
        for _ in 0..200 {
            let genus = rng.gen_range(2..=3u32);
            let coeffs: Vec<u64> = (0..2 * genus + 1).map(|_| rng.gen_range(0..p)).collect();
            let eq = curve(genus, &coeffs, &field);
            if eq.is_squarefree() {
                assert!(eq.affine_point_count().weil_ok, "g={genus} p={p}");
            }
        }
    }
}

#[test]
fn existence_flag_agrees_with_count_on_random_curves() {
    let mut rng = StdRng::seed_from_u64(23);
    let primes = primes_in_range(3, 97);
    for _ in 0..10_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let field = Arc::new(PrimeField::new(p).unwrap());
        let genus = rng.gen_range(1..=3u32);
        let coeffs: Vec<u64> = (0..2 * genus + 1).map(|_| rng.gen_range(0..p)).collect();
        let eq = curve(genus, &coeffs, &field);
        assert_eq!(eq.has_affine_point(), eq.affine_point_count().count > 0);
    }
}

#[test]
fn squarefree_genus3_curves_above_weil_threshold_have_points() {
    assert_eq!(weil_guarantee_threshold(3), 37);
    let mut rng = StdRng::seed_from_u64(29);
    let field = Arc::new(PrimeField::new(37).unwrap());
    let mut tested = 0;
    while tested < 500 {
        let coeffs: Vec<u64> = (0..7).map(|_| rng.gen_range(0..37)).collect();
        let eq = curve(3, &coeffs, &field);
        if !eq.is_squarefree() {
            continue;
        }
        tested += 1;
        assert!(evaluate_predicate(&eq).unwrap(), "coeffs={coeffs:?}");
    }
}

#[test]
fn family_size_formula_matches_census() {
    // The number of monic squarefree polynomials of degree n >= 2 over F_p
    // is p^n - p^(n-1); this backs SearchReport.squarefree_count.
    for genus in [1u32, 2] {
        for p in [3u64, 5, 7] {
            let field = PrimeField::new(p).unwrap();
            let n = 2 * genus + 1;
            let mut census = 0u64;
            for coeffs in all_vectors(n, p) {
                let mut full = vec![1u64];
                full.extend_from_slice(&coeffs);
                if is_squarefree(&FieldPoly::new(&full, &field), &field).unwrap() {
                    census += 1;
                }
            }
            assert_eq!(census, p.pow(n) - p.pow(n - 1), "g={genus} p={p}");
        }
    }
}
