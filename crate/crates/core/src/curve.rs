//! Hyperelliptic curve equations y^2 = f(x) and their affine point counts.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{is_squarefree, FieldPoly, PrimeField};

/// One curve equation y^2 = f(x) with f monic of degree 2g+1.
///
/// `coeffs` holds (a_1, ..., a_{2g+1}), the coefficients below the implicit
/// leading 1, highest degree first.
#[derive(Debug, Clone)]
pub struct CurveEquation {
    genus: u32,
    coeffs: Vec<u64>,
    field: Arc<PrimeField>,
}

/// Affine point count of one curve, with the Weil-bound check evaluated in
/// exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub count: u64,
    pub weil_ok: bool,
    pub genus: u32,
    pub p: u64,
}

impl CurveEquation {
    /// Builds a curve of the given genus from the 2g+1 sub-leading
    /// coefficients.
    pub fn new(genus: u32, coeffs: Vec<u64>, field: Arc<PrimeField>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidPlan("genus must be >= 1".into()));
        }
        let expected = 2 * genus as usize + 1;
        if coeffs.len() != expected {
            return Err(Error::InvalidPlan(format!(
                "genus {genus} needs exactly {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        for &c in &coeffs {
            field.check_residue(c)?;
        }
        Ok(CurveEquation {
            genus,
            coeffs,
            field,
        })
    }

    /// Constructor for vectors the enumeration has already validated.
    pub(crate) fn from_parts(genus: u32, coeffs: Vec<u64>, field: Arc<PrimeField>) -> Self {
        debug_assert_eq!(coeffs.len(), 2 * genus as usize + 1);
        CurveEquation {
            genus,
            coeffs,
            field,
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// The sub-leading coefficients (a_1, ..., a_{2g+1}).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    /// The defining polynomial f as a [`FieldPoly`].
    pub fn poly(&self) -> FieldPoly {
        let mut full = Vec::with_capacity(self.coeffs.len() + 1);
        full.push(1);
        full.extend_from_slice(&self.coeffs);
        FieldPoly::new(&full, &self.field)
    }

    /// Whether f is squarefree, i.e. the equation lies in the moduli family.
    pub fn is_squarefree(&self) -> bool {
        // Degree 2g+1 >= 3, so the degenerate inputs cannot occur.
        is_squarefree(&self.poly(), &self.field).expect("degree >= 3")
    }

    /// Counts affine points: each x contributes 1 + chi(f(x)), so a root of
    /// f gives one point and a nonzero square gives two.
    pub fn affine_point_count(&self) -> CountResult {
        let field = &*self.field;
        let p = field.modulus();
        let poly = self.poly();
        let mut count = 0u64;
        for x in 0..p {
            // 1 + chi(f(x)) is 1 for a root, 2 for a square, 0 otherwise.
            count += (1 + field.legendre(poly.eval(x, field)) as i64) as u64;
        }
        let g = self.genus as i64;
        let diff = count as i64 - p as i64;
        CountResult {
            count,
            weil_ok: diff * diff <= 4 * g * g * p as i64,
            genus: self.genus,
            p,
        }
    }

    /// True iff the curve has at least one affine point. Returns at the
    /// first witness x with f(x) a square (zero included).
    pub fn has_affine_point(&self) -> bool {
        let field = &*self.field;
        let p = field.modulus();
        let poly = self.poly();
        (0..p).any(|x| field.legendre(poly.eval(x, field)) >= 0)
    }
}

/// Truth of "this curve has an affine point" for a member of the moduli
/// family; rejects equations with vanishing discriminant.
pub fn evaluate_predicate(curve: &CurveEquation) -> Result<bool> {
    if !curve.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    Ok(curve.has_affine_point())
}

/// Least prime p with p > 4g^2; beyond it the affine Weil bound alone forces
/// every smooth curve of genus g to have points.
pub fn weil_guarantee_threshold(genus: u32) -> u64 {
    let bound = 4 * genus as u64 * genus as u64;
    *crate::field::primes_in_range(bound + 1, 2 * bound + 2)
        .first()
        .expect("a prime exists in (n, 2n+2]")
}

/// Point-existence threshold from the sharper Mit'kin bound, known for
/// genus 1 through 4 only.
pub fn mitkin_threshold(genus: u32) -> Option<u64> {
    match genus {
        1 => Some(5),
        2 => Some(17),
        3 => Some(31),
        4 => Some(53),
        _ => None,
    }
}
