//! Streaming enumeration of the curve family, with optional reduction by the
//! affine substitutions that preserve pointlessness.
//!
//! Candidates are the coefficient vectors of monic f of degree 2g+1, walked
//! in lexicographic order and indexed globally, so the space splits into
//! fixed-size blocks that can be scanned independently and merged in block
//! order. Three modes:
//!
//! * `none` — every vector, orbit size 1.
//! * `translate` — only depressed vectors (a_1 = 0); x -> x + t acts freely
//!   when p does not divide 2g+1, so each orbit has size p.
//! * `translate-scale` — additionally quotients by a_i -> u^i a_i for u a
//!   quadratic residue (the coefficient action of x -> ux up to the square
//!   y-rescaling). One lexicographically-least representative per orbit,
//!   with the exact orbit size p * (p-1)/2 / |stabilizer|.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::CurveEquation;
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Orbit reduction applied to the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    None,
    Translate,
    TranslateScale,
}

impl Reduction {
    pub fn as_str(self) -> &'static str {
        match self {
            Reduction::None => "none",
            Reduction::Translate => "translate",
            Reduction::TranslateScale => "translate-scale",
        }
    }

    fn needs_depression(self) -> bool {
        !matches!(self, Reduction::None)
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Reduction::None),
            "translate" => Ok(Reduction::Translate),
            "translate-scale" | "translate_scale" => Ok(Reduction::TranslateScale),
            other => Err(Error::InvalidPlan(format!("unknown reduction '{other}'"))),
        }
    }
}

/// Deterministic shard assignment: worker w streams blocks w, w+W, w+2W, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    pub worker_index: u32,
    pub worker_count: u32,
}

impl Default for Partition {
    fn default() -> Self {
        Partition {
            worker_index: 0,
            worker_count: 1,
        }
    }
}

pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 20;

/// Everything needed to enumerate one family: genus, field, reduction mode,
/// worker shard and block granularity.
#[derive(Debug, Clone)]
pub struct EnumerationPlan {
    pub genus: u32,
    pub field: Arc<PrimeField>,
    pub reduction: Reduction,
    pub partition: Partition,
    pub block_size: u64,
}

impl EnumerationPlan {
    pub fn new(genus: u32, field: Arc<PrimeField>, reduction: Reduction) -> Self {
        EnumerationPlan {
            genus,
            field,
            reduction,
            partition: Partition::default(),
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus == 0 {
            return Err(Error::InvalidPlan("genus must be >= 1".into()));
        }
        if self.block_size == 0 {
            return Err(Error::InvalidPlan("block size must be >= 1".into()));
        }
        if self.partition.worker_count == 0 || self.partition.worker_index >= self.partition.worker_count {
            return Err(Error::InvalidPlan(format!(
                "worker index {} out of range for {} workers",
                self.partition.worker_index, self.partition.worker_count
            )));
        }
        let degree = 2 * self.genus as u64 + 1;
        if self.reduction.needs_depression() && self.field.modulus().is_multiple_of(degree) {
            // x -> x - a_1/(2g+1) needs 2g+1 invertible.
            return Err(Error::ReductionUnavailable {
                reduction: self.reduction.as_str(),
                p: self.field.modulus(),
                degree,
            });
        }
        self.context()?;
        Ok(())
    }

    pub(crate) fn context(&self) -> Result<EnumContext> {
        EnumContext::new(self)
    }
}

/// Precomputed scaling tables: one row per nontrivial quadratic residue u,
/// holding u^2 .. u^{2g+1}.
struct ScaleTables {
    group_order: u64,
    row_len: usize,
    rows: Vec<u64>,
}

/// Resolved enumeration geometry shared by the block scanner and the
/// public iterator.
pub(crate) struct EnumContext {
    pub p: u64,
    pub coords: usize,
    pub head_len: usize,
    pub candidates: u64,
    pub family_equations: u64,
    pub block_size: u64,
    orbit_unit: u64,
    scale: Option<ScaleTables>,
}

impl EnumContext {
    fn new(plan: &EnumerationPlan) -> Result<Self> {
        let p = plan.field.modulus();
        let g = plan.genus;
        let head_len = 2 * g as usize;
        let coords = match plan.reduction {
            Reduction::None => head_len + 1,
            _ => head_len,
        };
        let too_large = || Error::FamilyTooLarge {
            genus: g,
            p,
            exponent: 2 * g + 1,
        };
        let family_equations = p.checked_pow(2 * g + 1).ok_or_else(too_large)?;
        let candidates = p.checked_pow(coords as u32).ok_or_else(too_large)?;

        let scale = match plan.reduction {
            Reduction::TranslateScale => {
                let row_len = head_len;
                let mut rows = Vec::new();
                let mut seen = vec![false; p as usize];
                for x in 1..p {
                    let u = x * x % p;
                    if seen[u as usize] || u == 1 {
                        seen[u as usize] = true;
                        continue;
                    }
                    seen[u as usize] = true;
                    let mut pow = u * u % p;
                    for _ in 0..row_len {
                        rows.push(pow);
                        pow = pow * u % p;
                    }
                }
                Some(ScaleTables {
                    group_order: (p - 1) / 2,
                    row_len,
                    rows,
                })
            }
            _ => None,
        };

        Ok(EnumContext {
            p,
            coords,
            head_len,
            candidates,
            family_equations,
            block_size: plan.block_size,
            orbit_unit: match plan.reduction {
                Reduction::None => 1,
                _ => p,
            },
            scale,
        })
    }

    pub fn blocks_total(&self) -> u64 {
        self.candidates.div_ceil(self.block_size)
    }

    /// Checks whether a head (everything but the constant term) can contain
    /// canonical representatives, collecting the tail scale factors of the
    /// residues that fix it.
    fn classify_head(&self, head: &[u64], stab_out: &mut Vec<u64>) -> bool {
        stab_out.clear();
        let Some(scale) = &self.scale else {
            return true;
        };
        // The scaled coordinates are a_2..a_{2g}, i.e. head minus the a_1 slot.
        let prefix = &head[1..];
        'rows: for row in scale.rows.chunks_exact(scale.row_len) {
            for (j, &digit) in prefix.iter().enumerate() {
                let scaled = row[j] * digit % self.p;
                if scaled < digit {
                    return false;
                }
                if scaled > digit {
                    continue 'rows;
                }
            }
            stab_out.push(row[scale.row_len - 1]);
        }
        true
    }

    /// Orbit size of (head, tail) given the head stabilizer, or None when the
    /// tail makes the vector non-canonical.
    fn orbit_of(&self, tail: u64, head_stab: &[u64]) -> Option<u64> {
        let Some(scale) = &self.scale else {
            return Some(self.orbit_unit);
        };
        let mut stab = 1u64;
        for &s in head_stab {
            let v = s * tail % self.p;
            if v < tail {
                return None;
            }
            if v == tail {
                stab += 1;
            }
        }
        Some(self.p * scale.group_order / stab)
    }

    fn block_range(&self, block: u64) -> (u64, u64) {
        let start = block * self.block_size;
        (start, (start + self.block_size).min(self.candidates))
    }
}

/// Receives the representative stream of one candidate range.
pub(crate) trait RepVisitor {
    /// A new run of candidates sharing all coefficients but the constant
    /// term. `head` is (a_1, ..., a_{2g}), including the implicit a_1 = 0
    /// of the reduced modes. Only heads that can hold canonical
    /// representatives are announced.
    fn enter_head(&mut self, head: &[u64]);
    /// One canonical representative: constant term plus exact orbit size.
    fn representative(&mut self, tail: u64, orbit_size: u64);
}

/// Walks candidates with global indices in [start, end), invoking the
/// visitor on every canonical representative.
pub(crate) fn scan_range<V: RepVisitor>(ctx: &EnumContext, start: u64, end: u64, visitor: &mut V) {
    let p = ctx.p;
    let digit_offset = ctx.head_len + 1 - ctx.coords;
    let mut head = vec![0u64; ctx.head_len];
    let mut stab: Vec<u64> = Vec::new();
    let mut idx = start;
    while idx < end {
        let head_index = idx / p;
        let tail_start = idx % p;
        let span = (end - idx).min(p - tail_start);
        let mut v = head_index;
        for slot in head[digit_offset..].iter_mut().rev() {
            *slot = v % p;
            v /= p;
        }
        if ctx.classify_head(&head, &mut stab) {
            visitor.enter_head(&head);
            for tail in tail_start..tail_start + span {
                if let Some(orbit_size) = ctx.orbit_of(tail, &stab) {
                    visitor.representative(tail, orbit_size);
                }
            }
        }
        idx += span;
    }
}

pub(crate) fn scan_block<V: RepVisitor>(ctx: &EnumContext, block: u64, visitor: &mut V) {
    let (start, end) = ctx.block_range(block);
    scan_range(ctx, start, end, visitor);
}

/// Iterator over this plan's shard of the representative stream, yielding
/// each canonical curve once together with its orbit size.
pub fn enumerate_representatives(plan: &EnumerationPlan) -> Result<Representatives> {
    plan.validate()?;
    let ctx = plan.context()?;
    Ok(Representatives {
        field: plan.field.clone(),
        genus: plan.genus,
        partition: plan.partition,
        next_block: plan.partition.worker_index as u64,
        cursor: 0,
        block_end: 0,
        buffer: Vec::new(),
        buffered: 0,
        ctx,
    })
}

pub struct Representatives {
    field: Arc<PrimeField>,
    genus: u32,
    partition: Partition,
    ctx: EnumContext,
    next_block: u64,
    cursor: u64,
    block_end: u64,
    buffer: Vec<(Vec<u64>, u64)>,
    buffered: usize,
}

struct Collect<'a> {
    head: Vec<u64>,
    out: &'a mut Vec<(Vec<u64>, u64)>,
}

impl RepVisitor for Collect<'_> {
    fn enter_head(&mut self, head: &[u64]) {
        self.head.clear();
        self.head.extend_from_slice(head);
    }

    fn representative(&mut self, tail: u64, orbit_size: u64) {
        let mut coeffs = Vec::with_capacity(self.head.len() + 1);
        coeffs.extend_from_slice(&self.head);
        coeffs.push(tail);
        self.out.push((coeffs, orbit_size));
    }
}

impl Iterator for Representatives {
    type Item = (CurveEquation, u64);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.buffered < self.buffer.len() {
                let (coeffs, orbit) = self.buffer[self.buffered].clone();
                self.buffered += 1;
                let curve = CurveEquation::from_parts(self.genus, coeffs, self.field.clone());
                return Some((curve, orbit));
            }
            self.buffer.clear();
            self.buffered = 0;

            if self.cursor >= self.block_end {
                if self.next_block >= self.ctx.blocks_total() {
                    return None;
                }
                let (start, end) = self.ctx.block_range(self.next_block);
                self.cursor = start;
                self.block_end = end;
                self.next_block += self.partition.worker_count as u64;
            }

            // One head group at a time keeps the buffer at most p entries.
            let span = (self.block_end - self.cursor).min(self.ctx.p - self.cursor % self.ctx.p);
            let mut collect = Collect {
                head: Vec::new(),
                out: &mut self.buffer,
            };
            scan_range(&self.ctx, self.cursor, self.cursor + span, &mut collect);
            self.cursor += span;
        }
    }
}
