//! Goodness of fit of empirical Weil angles against the Sato-Tate measure.
//!
//! The reference law has density (2/pi) sin^2 t on [0, pi]; its CDF
//! integrates in closed form, the quantile function does not and is found
//! by bisection. The report pairs a Kolmogorov-Smirnov statistic with an
//! equal-probability chi-square and the first two cosine moments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::Real;

fn check_angle<R: Real>(theta: R) -> Result<()> {
    if theta >= R::zero() && theta <= R::PI() {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange(theta.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Sato-Tate CDF: F(theta) = (theta - sin(theta) cos(theta)) / pi.
pub fn sato_tate_cdf<R: Real>(theta: R) -> Result<R> {
    check_angle(theta)?;
    Ok((theta - theta.sin() * theta.cos()) / R::PI())
}

/// Inverse CDF by bisection on [0, pi]; the CDF is strictly increasing, so
/// this converges unconditionally. Stops near 1e-12 interval width or when
/// the scalar runs out of precision.
pub fn sato_tate_quantile<R: Real>(q: R) -> Result<R> {
    if !(q >= R::zero() && q <= R::one()) {
        return Err(Error::AngleOutOfRange(q.to_f64().unwrap_or(f64::NAN)));
    }
    let tol = R::from_f64(1e-12).unwrap();
    let mut lo = R::zero();
    let mut hi = R::PI();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / (R::one() + R::one());
        if mid <= lo || mid >= hi {
            break;
        }
        if sato_tate_cdf(mid)? < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / (R::one() + R::one()))
}

/// Kolmogorov-Smirnov distance between the sample and the Sato-Tate CDF:
/// D_N = max_i max(i/N - F(x_i), F(x_i) - (i-1)/N) over the sorted sample.
pub fn ks_statistic<R: Real>(angles: &[R]) -> Result<R> {
    if angles.is_empty() {
        return Err(Error::EmptySample);
    }
    for &theta in angles {
        check_angle(theta)?;
    }
    let mut sorted = angles.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("range-checked angles"));
    let n = R::from_usize(sorted.len()).unwrap();
    let mut d = R::zero();
    for (i, &theta) in sorted.iter().enumerate() {
        let f = sato_tate_cdf(theta)?;
        let hi = R::from_usize(i + 1).unwrap() / n - f;
        let lo = f - R::from_usize(i).unwrap() / n;
        d = d.max(hi).max(lo);
    }
    Ok(d)
}

/// Chi-square against equal-probability Sato-Tate bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chi2Result<R: Real> {
    pub statistic: R,
    pub bins: usize,
    pub dof: usize,
}

/// Bin edges at the Sato-Tate quantiles k/bins, k = 0..=bins.
pub fn sato_tate_bin_edges<R: Real>(bins: usize) -> Result<Vec<R>> {
    let mut edges = Vec::with_capacity(bins + 1);
    edges.push(R::zero());
    let b = R::from_usize(bins).unwrap();
    for k in 1..bins {
        edges.push(sato_tate_quantile(R::from_usize(k).unwrap() / b)?);
    }
    edges.push(R::PI());
    Ok(edges)
}

/// Requires N >= 5 per expected bin count. Angles exactly at pi land in the
/// final bin.
pub fn chi_square<R: Real>(angles: &[R], bins: usize) -> Result<Chi2Result<R>> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    if angles.len() < 5 * bins {
        return Err(Error::SampleTooSmall {
            needed: 5 * bins,
            bins,
            got: angles.len(),
        });
    }
    for &theta in angles {
        check_angle(theta)?;
    }
    let edges = sato_tate_bin_edges::<R>(bins)?;
    let mut observed = vec![0u64; bins];
    for &theta in angles {
        // Bin k covers [edges[k], edges[k+1]); the top edge closes the last.
        let k = edges[1..bins].partition_point(|e| *e <= theta);
        observed[k] += 1;
    }
    let expected = R::from_usize(angles.len()).unwrap() / R::from_usize(bins).unwrap();
    let mut statistic = R::zero();
    for &count in &observed {
        let diff = R::from_u64(count).unwrap() - expected;
        statistic = statistic + diff * diff / expected;
    }
    Ok(Chi2Result {
        statistic,
        bins,
        dof: bins - 1,
    })
}

/// First and second cosine moments next to their Sato-Tate limits
/// (E cos = 0, E cos^2 = 1/4).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport<R: Real> {
    pub mean_cos: R,
    pub mean_cos_sq: R,
    pub expected_mean_cos: R,
    pub expected_mean_cos_sq: R,
}

pub fn moment_checks<R: Real>(angles: &[R]) -> Result<MomentReport<R>> {
    if angles.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sum = R::zero();
    let mut sum_sq = R::zero();
    for &theta in angles {
        check_angle(theta)?;
        let c = theta.cos();
        sum = sum + c;
        sum_sq = sum_sq + c * c;
    }
    let n = R::from_usize(angles.len()).unwrap();
    let four = R::from_u64(4).unwrap();
    Ok(MomentReport {
        mean_cos: sum / n,
        mean_cos_sq: sum_sq / n,
        expected_mean_cos: R::zero(),
        expected_mean_cos_sq: R::one() / four,
    })
}

/// Which optional tests a report carries; the KS statistic is always
/// computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestSelection {
    pub chi2: bool,
    pub moments: bool,
}

impl Default for TestSelection {
    fn default() -> Self {
        TestSelection {
            chi2: true,
            moments: true,
        }
    }
}

/// Goodness-of-fit summary for one angle family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport<R: Real> {
    pub family: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub ks: R,
    /// D_N * sqrt(N), the scale on which families of different size compare.
    pub ks_normalized: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi2: Option<Chi2Result<R>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentReport<R>>,
}

pub fn gof_report<R: Real>(
    family: &str,
    angles: &[R],
    bins: usize,
    tests: &TestSelection,
) -> Result<GofReport<R>> {
    let ks = ks_statistic(angles)?;
    Ok(GofReport {
        family: family.to_string(),
        n: angles.len(),
        ks,
        ks_normalized: ks * R::from_usize(angles.len()).unwrap().sqrt(),
        chi2: if tests.chi2 {
            Some(chi_square(angles, bins)?)
        } else {
            None
        },
        moments: if tests.moments {
            Some(moment_checks(angles)?)
        } else {
            None
        },
    })
}

/// Side-by-side verdict for the fixed-p and fixed-(c,d) families. States
/// only the computed numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyComparison<R: Real> {
    pub vertical: GofReport<R>,
    pub horizontal: GofReport<R>,
    /// horizontal ks_normalized / vertical ks_normalized.
    pub ks_normalized_ratio: R,
    pub verdict: String,
}

pub fn compare_families<R: Real>(
    vertical: &GofReport<R>,
    horizontal: &GofReport<R>,
) -> FamilyComparison<R> {
    let ratio = horizontal.ks_normalized / vertical.ks_normalized;
    let mut verdict = format!(
        "sqrt(N)-normalized KS: vertical {:.6} (N={}), horizontal {:.6} (N={}), ratio {:.4}",
        vertical.ks_normalized, vertical.n, horizontal.ks_normalized, horizontal.n, ratio,
    );
    if horizontal.ks_normalized > vertical.ks_normalized {
        verdict.push_str("; the vertical family lies closer to the Sato-Tate law");
    } else if horizontal.ks_normalized < vertical.ks_normalized {
        verdict.push_str("; the horizontal family lies closer to the Sato-Tate law");
    } else {
        verdict.push_str("; the families fit equally well");
    }
    if vertical.n < 30 || horizontal.n < 30 {
        verdict.push_str("; sample too small (N < 30) for a stable comparison");
    }
    FamilyComparison {
        vertical: vertical.clone(),
        horizontal: horizontal.clone(),
        ks_normalized_ratio: ratio,
        verdict,
    }
}
