//! Kloosterman sums, their Weil angles, and the two sample families.
//!
//! A sum is evaluated against a per-prime table of the p-th roots of unity
//! indexed by the exact integer residue (c*x + d/x) mod p, so accuracy is
//! limited by table precision rather than argument reduction. Terms pair up
//! under x -> -x into conjugates, so the imaginary part must cancel; it is
//! accumulated anyway and checked against 1e-6 * sqrt(p).

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{primes_in_range, PrimeField};
use crate::Real;

/// One observation: the sum T_p(c,d) and its Weil angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSample<R: Real> {
    pub p: u64,
    pub c: u64,
    pub d: u64,
    pub t_value: R,
    pub theta: R,
}

/// Which family a sample set was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// Fixed p, (c,d) ranging over the group.
    Vertical { p: u64, full_grid: bool },
    /// Fixed (c,d), p ranging over primes coprime to both.
    Horizontal {
        c: u64,
        d: u64,
        p_min: u64,
        p_max: u64,
    },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Vertical { p, full_grid: false } => {
                write!(f, "vertical p={p} diagonal (c,d)=(1,a)")
            }
            FamilySpec::Vertical { p, full_grid: true } => write!(f, "vertical p={p} full-grid"),
            FamilySpec::Horizontal { c, d, p_min, p_max } => {
                write!(f, "horizontal c={c} d={d} primes {p_min}..{p_max}")
            }
        }
    }
}

fn as_f64<R: Real>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Neumaier-compensated accumulator; keeps per-sum rounding error near one
/// ulp of the running total regardless of length.
#[derive(Clone, Copy)]
struct Compensated<R: Real> {
    sum: R,
    correction: R,
}

impl<R: Real> Compensated<R> {
    fn new() -> Self {
        Compensated {
            sum: R::zero(),
            correction: R::zero(),
        }
    }

    fn add(&mut self, v: R) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.correction = self.correction + ((self.sum - t) + v);
        } else {
            self.correction = self.correction + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(self) -> R {
        self.sum + self.correction
    }
}

/// Maps |t| <= 2*sqrt(p) into the Weil angle arccos(t / 2*sqrt(p)),
/// clamped into [0, pi]. Values beyond the bound by more than 1e-6 * p
/// signal a summation bug and are rejected.
pub fn angle_of<R: Real>(t: R, p: u64) -> Result<R> {
    let pr = R::from_u64(p).expect("prime fits the scalar");
    let bound = (R::one() + R::one()) * pr.sqrt();
    let allowance = R::from_f64(1e-6).unwrap() * pr;
    if t.abs() > bound + allowance {
        return Err(Error::WeilBoundExceeded {
            t: as_f64(t),
            bound: as_f64(bound),
            p,
        });
    }
    let ratio = (t / bound).min(R::one()).max(-R::one());
    Ok(ratio.acos())
}

/// Per-prime evaluator holding the cosine/sine tables of the p-th roots of
/// unity; build once, then each sum is p-1 table lookups.
pub struct KloostermanEvaluator<'f, R: Real> {
    field: &'f PrimeField,
    cos: Vec<R>,
    sin: Vec<R>,
}

impl<'f, R: Real> KloostermanEvaluator<'f, R> {
    pub fn new(field: &'f PrimeField) -> Self {
        let p = field.modulus();
        let step = 2.0 * std::f64::consts::PI / p as f64;
        let mut cos = Vec::with_capacity(p as usize);
        let mut sin = Vec::with_capacity(p as usize);
        for k in 0..p {
            let (s, c) = (k as f64 * step).sin_cos();
            cos.push(R::from_f64(c).unwrap());
            sin.push(R::from_f64(s).unwrap());
        }
        KloostermanEvaluator { field, cos, sin }
    }

    /// T_p(c,d) = sum over x in F_p^* of e((c*x + d/x)/p), a real number.
    pub fn sum(&self, c: u64, d: u64) -> Result<R> {
        let p = self.field.modulus();
        for (value, name) in [(c, "c"), (d, "d")] {
            self.field.check_residue(value)?;
            if value == 0 {
                return Err(Error::ZeroKloostermanParameter { name, modulus: p });
            }
        }
        let mut re = Compensated::new();
        let mut im = Compensated::new();
        for x in 1..p {
            let e = (c * x + d * self.field.inv(x)) % p;
            re.add(self.cos[e as usize]);
            im.add(self.sin[e as usize]);
        }
        let imag = im.value();
        let bound = R::from_f64(1e-6).unwrap() * R::from_u64(p).unwrap().sqrt();
        if imag.abs() >= bound {
            return Err(Error::ImaginaryResidual {
                imag: as_f64(imag),
                bound: as_f64(bound),
                p,
            });
        }
        Ok(re.value())
    }

    pub fn sample(&self, c: u64, d: u64) -> Result<AngleSample<R>> {
        let t_value = self.sum(c, d)?;
        let theta = angle_of(t_value, self.field.modulus())?;
        Ok(AngleSample {
            p: self.field.modulus(),
            c,
            d,
            t_value,
            theta,
        })
    }
}

/// One-off sum; build a [`KloostermanEvaluator`] to amortize the table.
pub fn kloosterman_sum<R: Real>(field: &PrimeField, c: u64, d: u64) -> Result<R> {
    KloostermanEvaluator::new(field).sum(c, d)
}

/// Fixed-p family. The sum depends only on c*d (substitute x -> c^{-1} x),
/// so the diagonal (1, a) carries the full empirical distribution: each of
/// its p-1 values occurs exactly p-1 times on the grid. `full_grid`
/// enumerates all (p-1)^2 pairs instead.
pub fn vertical_family<R: Real>(field: &PrimeField, full_grid: bool) -> Result<Vec<AngleSample<R>>> {
    let evaluator = KloostermanEvaluator::new(field);
    let p = field.modulus();
    if full_grid {
        (1..p)
            .into_par_iter()
            .flat_map(|c| (1..p).into_par_iter().map(move |d| (c, d)))
            .map(|(c, d)| evaluator.sample(c, d))
            .collect()
    } else {
        (1..p)
            .into_par_iter()
            .map(|a| evaluator.sample(1, a))
            .collect()
    }
}

/// Fixed-(c,d) family over the primes in [p_min, p_max].
#[derive(Debug, Clone)]
pub struct HorizontalFamily<R: Real> {
    pub samples: Vec<AngleSample<R>>,
    /// Primes in range that were excluded: divisors of c or d, and primes
    /// below 3.
    pub skipped: Vec<u64>,
}

pub fn horizontal_family<R: Real>(
    c: u64,
    d: u64,
    p_min: u64,
    p_max: u64,
) -> Result<HorizontalFamily<R>> {
    if c == 0 || d == 0 {
        return Err(Error::InvalidPlan(
            "horizontal family needs c >= 1 and d >= 1".into(),
        ));
    }
    enum Row<R: Real> {
        Kept(AngleSample<R>),
        Skipped(u64),
    }
    let rows: Vec<Row<R>> = primes_in_range(p_min, p_max)
        .into_par_iter()
        .map(|p| -> Result<Row<R>> {
            if p < 3 || c.is_multiple_of(p) || d.is_multiple_of(p) {
                return Ok(Row::Skipped(p));
            }
            let field = PrimeField::new(p)?;
            let evaluator = KloostermanEvaluator::new(&field);
            Ok(Row::Kept(evaluator.sample(c % p, d % p)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut family = HorizontalFamily {
        samples: Vec::new(),
        skipped: Vec::new(),
    };
    for row in rows {
        match row {
            Row::Kept(sample) => family.samples.push(sample),
            Row::Skipped(p) => family.skipped.push(p),
        }
    }
    Ok(family)
}
