//! The angle file format: `p,c,d,t_value,theta` rows under a mandatory
//! header, floats printed to 12 significant digits, `#`-prefixed comment
//! lines before the header for provenance.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::kloosterman::{angle_of, AngleSample};

pub const ANGLE_CSV_HEADER: &str = "p,c,d,t_value,theta";

/// 12 significant digits, scientific notation.
pub fn format_sig12(value: f64) -> String {
    format!("{value:.11e}")
}

pub fn write_angle_csv<W: Write>(
    mut w: W,
    samples: &[AngleSample<f64>],
    comments: &[String],
) -> Result<()> {
    for line in comments {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{ANGLE_CSV_HEADER}")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.p,
            s.c,
            s.d,
            format_sig12(s.t_value),
            format_sig12(s.theta)
        )?;
    }
    Ok(())
}

/// An angle file plus the family descriptor recovered from its comments.
#[derive(Debug, Clone)]
pub struct AngleFile {
    pub samples: Vec<AngleSample<f64>>,
    pub family: Option<String>,
}

/// Parses and validates an angle file. Every row must satisfy the Weil
/// bound within the numerical allowance and carry a consistent angle;
/// failures name the offending line.
pub fn read_angle_csv<R: BufRead>(reader: R) -> Result<AngleFile> {
    let mut family = None;
    let mut samples = Vec::new();
    let mut seen_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let bad = |reason: String| Error::MalformedAngleRow {
            line: lineno,
            reason,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("family:") {
                family = Some(value.trim().to_string());
            }
            continue;
        }
        if !seen_header {
            if trimmed != ANGLE_CSV_HEADER {
                return Err(bad(format!("expected header '{ANGLE_CSV_HEADER}'")));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(bad(format!("expected 5 fields, got {}", fields.len())));
        }
        let p: u64 = fields[0]
            .parse()
            .map_err(|e| bad(format!("bad p: {e}")))?;
        let c: u64 = fields[1]
            .parse()
            .map_err(|e| bad(format!("bad c: {e}")))?;
        let d: u64 = fields[2]
            .parse()
            .map_err(|e| bad(format!("bad d: {e}")))?;
        let t_value: f64 = fields[3]
            .parse()
            .map_err(|e| bad(format!("bad t_value: {e}")))?;
        let theta: f64 = fields[4]
            .parse()
            .map_err(|e| bad(format!("bad theta: {e}")))?;

        if p < 3 {
            return Err(bad(format!("p = {p} is below 3")));
        }
        if c == 0 || c >= p || d == 0 || d >= p {
            return Err(bad(format!("c = {c}, d = {d} not in 1..{p}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(bad(format!("theta = {theta} outside [0, pi]")));
        }
        let expected = angle_of(t_value, p)
            .map_err(|e| bad(format!("Weil bound violated: {e}")))?;
        if (expected - theta).abs() > 1e-6 {
            return Err(bad(format!(
                "theta = {theta} inconsistent with t_value (expected {expected})"
            )));
        }
        samples.push(AngleSample {
            p,
            c,
            d,
            t_value,
            theta,
        });
    }
    if !seen_header {
        return Err(Error::MalformedAngleRow {
            line: 0,
            reason: format!("missing header '{ANGLE_CSV_HEADER}'"),
        });
    }
    Ok(AngleFile { samples, family })
}
