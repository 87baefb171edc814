//! field invariants checked against independent oracles: Euler's criterion,
//! trial-division factorization, naive polynomial evaluation.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use weilscan_core::{is_squarefree, poly_gcd, primes_in_range, FieldPoly, PrimeField};

/// Square-and-multiply, independent of the library.
fn modpow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

#[test]
fn legendre_matches_euler_criterion_below_200() {
    for p in primes_in_range(3, 200) {
        let field = PrimeField::new(p).unwrap();
        let mut sum: i64 = 0;
        let mut plus = 0u64;
        for a in 0..p {
            let chi = field.legendre(a);
            let euler = modpow(a, (p - 1) / 2, p);
            let expected: i8 = if euler == 0 {
                0
            } else if euler == 1 {
                1
            } else {
                assert_eq!(euler, p - 1, "p={p} a={a}");
                -1
            };
            assert_eq!(chi, expected, "p={p} a={a}");
            sum += chi as i64;
            if chi == 1 {
                plus += 1;
            }
        }
        assert_eq!(sum, 0, "character sums to zero, p={p}");
        assert_eq!(plus, (p - 1) / 2, "square count, p={p}");
    }
}

#[test]
fn legendre_is_multiplicative_below_100() {
    for p in primes_in_range(3, 100) {
        let field = PrimeField::new(p).unwrap();
        for a in 1..p {
            for b in 1..p {
                assert_eq!(
                    field.legendre(a * b % p),
                    field.legendre(a) * field.legendre(b),
                    "p={p} a={a} b={b}"
                );
            }
        }
    }
}

#[test]
fn inverse_table_is_exact() {
    for p in primes_in_range(3, 500) {
        let field = PrimeField::new(p).unwrap();
        for a in 1..p {
            assert_eq!(field.inv(a) * a % p, 1, "p={p} a={a}");
        }
    }
}

/// All monic irreducibles of degree <= 3 over F_p. For degrees 2 and 3,
/// reducible means a linear factor, so irreducible == no roots.
fn irreducibles_up_to_cubic(field: &PrimeField) -> Vec<FieldPoly> {
    let p = field.modulus();
    let mut out = Vec::new();
    for a in 0..p {
        out.push(FieldPoly::new(&[1, a], field));
    }
    for deg in 2..=3u32 {
        let count = p.pow(deg);
        for idx in 0..count {
            let mut coeffs = vec![1u64];
            let mut v = idx;
            for _ in 0..deg {
                coeffs.push(v % p);
                v /= p;
            }
            let poly = FieldPoly::new(&coeffs, field);
            if (0..p).all(|x| poly.eval(x, field) != 0) {
                out.push(poly);
            }
        }
    }
    out
}

fn divides(d: &FieldPoly, f: &FieldPoly, field: &PrimeField) -> bool {
    f.rem(d, field).is_zero()
}

/// Oracle: f (deg <= 7) is squarefree iff no irreducible q of degree <= 3
/// has q^2 | f. A repeated factor of a degree-7 polynomial has degree <= 3.
fn squarefree_oracle(f: &FieldPoly, field: &PrimeField) -> bool {
    for q in irreducibles_up_to_cubic(field) {
        let q2 = poly_mul(&q, &q, field);
        if q2.degree() <= f.degree() && divides(&q2, f, field) {
            return false;
        }
    }
    true
}

fn poly_mul(a: &FieldPoly, b: &FieldPoly, field: &PrimeField) -> FieldPoly {
    let p = field.modulus();
    let (ca, cb) = (a.coeffs(), b.coeffs());
    let mut out = vec![0u64; ca.len() + cb.len() - 1];
    for (i, &x) in ca.iter().enumerate() {
        for (j, &y) in cb.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    FieldPoly::new(&out, field)
}

#[test]
fn squarefree_matches_factorization_oracle_exhaustive_p3() {
    let field = PrimeField::new(3).unwrap();
    for deg in 1..=7u32 {
        for idx in 0..3u64.pow(deg) {
            let mut coeffs = vec![1u64];
            let mut v = idx;
            for _ in 0..deg {
                coeffs.push(v % 3);
                v /= 3;
            }
            let poly = FieldPoly::new(&coeffs, &field);
            assert_eq!(
                is_squarefree(&poly, &field).unwrap(),
                squarefree_oracle(&poly, &field),
                "p=3 coeffs={coeffs:?}"
            );
        }
    }
}

#[test]
fn squarefree_matches_factorization_oracle_sampled() {
    let mut rng = StdRng::seed_from_u64(7);
    for &p in &[5u64, 7, 11] {
        let field = PrimeField::new(p).unwrap();
        for _ in 0..400 {
            let deg = rng.gen_range(1..=7);
            let mut coeffs = vec![1u64];
            for _ in 0..deg {
                coeffs.push(rng.gen_range(0..p));
            }
            let poly = FieldPoly::new(&coeffs, &field);
            assert_eq!(
                is_squarefree(&poly, &field).unwrap(),
                squarefree_oracle(&poly, &field),
                "p={p} coeffs={coeffs:?}"
            );
        }
    }
}

#[test]
fn horner_matches_naive_power_summation() {
    let mut rng = StdRng::seed_from_u64(11);
    let primes = primes_in_range(3, 1000);
    for _ in 0..1000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let field = PrimeField::new(p).unwrap();
        let deg = rng.gen_range(0..=9);
        let coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
        let poly = FieldPoly::new(&coeffs, &field);
        let x = rng.gen_range(0..p);
        // naive: sum of c_i * x^(deg-i) via modpow
        let mut naive = 0u64;
        let n = coeffs.len() - 1;
        for (i, &c) in coeffs.iter().enumerate() {
            naive = (naive + c * modpow(x, (n - i) as u64, p)) % p;
        }
        assert_eq!(poly.eval(x, &field), naive, "p={p} x={x} coeffs={coeffs:?}");
    }
}

#[test]
fn gcd_divides_both_inputs() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..300 {
        let p = [3u64, 5, 7, 13][rng.gen_range(0..4)];
        let field = PrimeField::new(p).unwrap();
        let rand_poly = |rng: &mut StdRng| {
            let deg = rng.gen_range(0..=6);
            let coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
            FieldPoly::new(&coeffs, &field)
        };
        let f = rand_poly(&mut rng);
        let g = rand_poly(&mut rng);
        if f.is_zero() && g.is_zero() {
            continue;
        }
        let h = poly_gcd(&f, &g, &field).unwrap();
        assert!(!h.is_zero());
        assert_eq!(h.coeffs()[0], 1, "gcd is monic");
        if !f.is_zero() {
            assert!(divides(&h, &f, &field));
        }
        if !g.is_zero() {
            assert!(divides(&h, &g, &field));
        }
    }
}

#[test]
fn sieve_matches_trial_division() {
    let by_trial: Vec<u64> = (2..=300)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect();
    assert_eq!(primes_in_range(2, 300), by_trial);
    assert_eq!(primes_in_range(2, 100).len(), 25);
    // segmented ranges agree with the full sieve
    assert_eq!(
        primes_in_range(150, 300),
        by_trial
            .iter()
            .copied()
            .filter(|&p| p >= 150)
            .collect::<Vec<_>>()
    );
}
