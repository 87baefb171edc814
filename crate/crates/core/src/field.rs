//! Exact arithmetic in the prime field F_p for odd p.
//!
//! A [`PrimeField`] owns two O(p) tables built once at construction: the
//! quadratic-character table and the inverse table. Everything downstream
//! (point counting, the pointless-curve scan, Kloosterman sums) reduces to
//! table lookups, so the inner loops never divide or exponentiate.

use crate::error::{Error, Result};

/// Largest modulus the table-backed representation accepts. Products of two
/// residues must fit in u64 and the two tables must stay affordable.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// An odd prime p together with its precomputed quadratic-character and
/// inverse tables.
#[derive(Debug)]
pub struct PrimeField {
    p: u64,
    qr_table: Vec<i8>,
    inv_table: Vec<u32>,
}

impl PrimeField {
    /// Builds the field context for an odd prime `p >= 3`.
    ///
    /// Primality is checked by trial division, which is exact for every
    /// modulus in range.
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }

        let n = p as usize;
        let mut qr_table = vec![-1i8; n];
        qr_table[0] = 0;
        for a in 1..p {
            qr_table[(a * a % p) as usize] = 1;
        }

        // inv[a] = -(p/a) * inv[p mod a] mod p, the linear-time recurrence.
        let mut inv_table = vec![0u32; n];
        inv_table[1] = 1;
        for a in 2..p {
            let r = (p % a) as usize;
            inv_table[a as usize] = ((p - (p / a) * inv_table[r] as u64 % p) % p) as u32;
        }

        Ok(PrimeField {
            p,
            qr_table,
            inv_table,
        })
    }

    /// The modulus p.
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Quadratic character of `a`: 0 for a = 0, +1 for nonzero squares,
    /// -1 for non-squares. Agrees with Euler's criterion a^((p-1)/2).
    #[inline]
    pub fn legendre(&self, a: u64) -> i8 {
        debug_assert!(a < self.p);
        self.qr_table[a as usize]
    }

    /// Multiplicative inverse of a nonzero residue.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.p);
        self.inv_table[a as usize] as u64
    }

    /// The character table indexed by residue; hot loops borrow it directly.
    #[inline]
    pub(crate) fn qr_table(&self) -> &[i8] {
        &self.qr_table
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    /// Checks `0 <= a < p`, for validating external inputs.
    pub fn check_residue(&self, a: u64) -> Result<u64> {
        if a < self.p {
            Ok(a)
        } else {
            Err(Error::ResidueOutOfRange {
                residue: a,
                modulus: self.p,
            })
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in `[lo, hi]`, ascending. An inverted range yields an empty
/// list rather than an error.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }

    // Base primes up to sqrt(hi), then mark the [lo, hi] segment.
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut base_sieve = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if base_sieve[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                base_sieve[j as usize] = false;
                j += i;
            }
        }
    }

    let len = (hi - lo + 1) as usize;
    let mut seg = vec![true; len];
    for &b in &base {
        let start = lo.div_ceil(b).max(2) * b;
        let mut j = start;
        while j <= hi {
            seg[(j - lo) as usize] = false;
            j += b;
        }
    }
    (lo..=hi).filter(|&n| seg[(n - lo) as usize]).collect()
}

/// A polynomial over F_p, coefficients highest degree first with no leading
/// zeros. The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldPoly {
    coeffs: Vec<u64>,
}

impl FieldPoly {
    /// Builds a polynomial from highest-degree-first coefficients, reducing
    /// mod p and stripping leading zeros.
    pub fn new(coeffs: &[u64], field: &PrimeField) -> Self {
        let p = field.modulus();
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
        let mut poly = FieldPoly { coeffs: reduced };
        poly.normalize();
        poly
    }

    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
            }
            None => self.coeffs.clear(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficients, highest degree first. Empty for the zero polynomial.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Evaluates at `x` by nested multiplication.
    pub fn eval(&self, x: u64, field: &PrimeField) -> u64 {
        debug_assert!(x < field.modulus());
        let mut acc = 0u64;
        for &c in &self.coeffs {
            acc = field.add(field.mul(acc, x), c);
        }
        acc
    }

    /// Formal derivative (exponents reduce mod p, so it can vanish).
    pub fn derivative(&self, field: &PrimeField) -> FieldPoly {
        if self.coeffs.len() <= 1 {
            return FieldPoly::zero();
        }
        let n = self.degree() as u64;
        let coeffs: Vec<u64> = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .enumerate()
            .map(|(i, &c)| field.mul(c, (n - i as u64) % field.modulus()))
            .collect();
        let mut poly = FieldPoly { coeffs };
        poly.normalize();
        poly
    }

    /// Scales so the leading coefficient is 1. No-op on the zero polynomial.
    pub fn into_monic(mut self, field: &PrimeField) -> FieldPoly {
        if let Some(&lead) = self.coeffs.first() {
            if lead != 1 {
                let s = field.inv(lead);
                for c in &mut self.coeffs {
                    *c = field.mul(*c, s);
                }
            }
        }
        self
    }

    /// Remainder of `self` divided by `divisor` (which must be nonzero).
    pub fn rem(&self, divisor: &FieldPoly, field: &PrimeField) -> FieldPoly {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let d = divisor.coeffs.len();
        let lead_inv = field.inv(divisor.coeffs[0]);
        let mut start = 0;
        while r.len() - start >= d {
            let q = field.mul(r[start], lead_inv);
            if q != 0 {
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    r[start + i] = field.sub(r[start + i], field.mul(q, dc));
                }
            }
            start += 1;
        }
        let mut rem = FieldPoly {
            coeffs: r[start..].to_vec(),
        };
        rem.normalize();
        rem
    }

    /// Taylor shift: the polynomial `x -> self(x + t)`.
    pub fn shift(&self, t: u64, field: &PrimeField) -> FieldPoly {
        // Synthetic division by (x - (-t)) repeatedly: O(deg^2), exact.
        if self.is_zero() || t == 0 {
            return self.clone();
        }
        let mut work = self.coeffs.clone();
        let n = work.len();
        for k in (1..n).rev() {
            for i in 1..=k {
                let prev = work[i - 1];
                work[i] = field.add(work[i], field.mul(prev, t));
            }
        }
        let mut poly = FieldPoly { coeffs: work };
        poly.normalize();
        poly
    }
}

/// Monic greatest common divisor via the Euclidean algorithm.
pub fn poly_gcd(f: &FieldPoly, g: &FieldPoly, field: &PrimeField) -> Result<FieldPoly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::GcdOfZero);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = a.rem(&b, field);
        a = b;
        b = r;
    }
    Ok(a.into_monic(field))
}

/// True iff `f` has no repeated factor over F_p.
///
/// Tests gcd(f, f') = 1, with the characteristic-p degeneracy handled
/// explicitly: a vanishing formal derivative means f is a p-th power, hence
/// not squarefree.
pub fn is_squarefree(f: &FieldPoly, field: &PrimeField) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::DegenerateSquarefreeInput("zero"));
    }
    if f.degree() == 0 {
        return Err(Error::DegenerateSquarefreeInput("constant"));
    }
    let df = f.derivative(field);
    if df.is_zero() {
        return Ok(false);
    }
    let g = poly_gcd(f, &df, field)?;
    Ok(g.degree() == 0)
}
