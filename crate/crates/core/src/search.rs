//! Exhaustive pointless-curve search and the precise-bound sweep.
//!
//! Each representative is tested for pointlessness first — an early-exit
//! scan over x that on average inspects about two values, since each value
//! is a square with probability near 1/2 — and only the rare pointless
//! candidates pay for the squarefreeness gcd. Blocks are scanned in
//! parallel but folded in index order, so reports are identical for any
//! worker count.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::checkpoint::Checkpoint;
use crate::curve::mitkin_threshold;
use crate::enumerate::{scan_block, EnumerationPlan, RepVisitor, Reduction, DEFAULT_BLOCK_SIZE};
use crate::error::{Error, Result};
use crate::field::{is_squarefree, primes_in_range, FieldPoly, PrimeField};

/// Knobs for one search run. Parallelism comes from the ambient rayon pool.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Orbit reduction; `None` picks translate-scale when p permits it.
    pub reduction: Option<Reduction>,
    /// Candidates per block.
    pub block_size: u64,
    /// Blocks per checkpointable chunk.
    pub chunk_blocks: u64,
    /// Where to persist resumable state, if anywhere.
    pub checkpoint_path: Option<PathBuf>,
    /// Stop after this many newly scanned blocks, leaving a partial verdict.
    pub max_blocks: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            reduction: None,
            block_size: DEFAULT_BLOCK_SIZE,
            chunk_blocks: 256,
            checkpoint_path: None,
            max_blocks: None,
        }
    }
}

/// The reduction used when the caller does not insist on one.
pub fn auto_reduction(genus: u32, p: u64) -> Reduction {
    if p.is_multiple_of(2 * genus as u64 + 1) {
        Reduction::None
    } else {
        Reduction::TranslateScale
    }
}

/// Block accounting carried by every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockAccounting {
    pub block_size: u64,
    pub total: u64,
    pub completed: u64,
}

/// Outcome of one enumeration run.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub genus: u32,
    pub p: u64,
    pub reduction: Reduction,
    /// Whether every block was scanned; partial scans never assert verdicts.
    pub complete: bool,
    /// Complete scan with an empty witness list.
    pub all_have_points: bool,
    /// Equations covered so far, counted with orbit multiplicity; equals
    /// p^(2g+1) exactly when complete.
    pub total_equations_examined: u64,
    /// Size of the moduli family: the number of squarefree equations,
    /// p^(2g+1) - p^(2g).
    pub squarefree_count: u64,
    /// Canonical representatives streamed.
    pub representatives_scanned: u64,
    /// Representatives with no square value, before the squarefree filter.
    pub pointless_candidates: u64,
    /// Canonical coefficient vectors (a_1..a_{2g+1}) of the squarefree
    /// pointless curves, in lexicographic order.
    pub pointless_found: Vec<Vec<u64>>,
    pub blocks: BlockAccounting,
}

#[derive(Debug, Default, Clone)]
struct BlockOutcome {
    representatives: u64,
    equations: u64,
    pointless_candidates: u64,
    witnesses: Vec<Vec<u64>>,
}

/// Per-block scanner: precomputes base[x] = f(x) - a_{2g+1} once per head,
/// so each candidate costs one table lookup per inspected x.
struct ScanVisitor<'a> {
    p: u64,
    qr: &'a [i8],
    field: &'a PrimeField,
    head: Vec<u64>,
    base: Vec<u64>,
    out: BlockOutcome,
}

impl<'a> ScanVisitor<'a> {
    fn new(field: &'a PrimeField, head_len: usize) -> Self {
        let p = field.modulus();
        ScanVisitor {
            p,
            qr: field.qr_table(),
            field,
            head: vec![0; head_len],
            base: vec![0; p as usize],
            out: BlockOutcome::default(),
        }
    }
}

impl RepVisitor for ScanVisitor<'_> {
    fn enter_head(&mut self, head: &[u64]) {
        self.head.copy_from_slice(head);
        let p = self.p;
        for x in 0..p {
            let mut acc = 1u64;
            for &c in head {
                acc = (acc * x + c) % p;
            }
            self.base[x as usize] = acc * x % p;
        }
    }

    fn representative(&mut self, tail: u64, orbit_size: u64) {
        self.out.representatives += 1;
        self.out.equations += orbit_size;

        for &b in &self.base {
            let mut v = b + tail;
            if v >= self.p {
                v -= self.p;
            }
            if self.qr[v as usize] >= 0 {
                return; // has an affine point
            }
        }
        self.out.pointless_candidates += 1;

        // Rare: check membership in the family (nonzero discriminant).
        let mut coeffs = Vec::with_capacity(self.head.len() + 2);
        coeffs.push(1);
        coeffs.extend_from_slice(&self.head);
        coeffs.push(tail);
        let poly = FieldPoly::new(&coeffs, self.field);
        if is_squarefree(&poly, self.field).expect("degree >= 3") {
            self.out.witnesses.push(coeffs[1..].to_vec());
        }
    }
}

#[derive(Debug, Default)]
struct RunningTallies {
    blocks_completed: u64,
    representatives: u64,
    equations: u64,
    pointless_candidates: u64,
    witnesses: Vec<Vec<u64>>,
}

impl RunningTallies {
    fn fold(&mut self, outcome: BlockOutcome) {
        self.representatives += outcome.representatives;
        self.equations += outcome.equations;
        self.pointless_candidates += outcome.pointless_candidates;
        self.witnesses.extend(outcome.witnesses);
    }

    fn from_checkpoint(ck: Checkpoint) -> Self {
        RunningTallies {
            blocks_completed: ck.blocks_completed,
            representatives: ck.representatives,
            equations: ck.equations,
            pointless_candidates: ck.pointless_candidates,
            witnesses: ck.witnesses,
        }
    }
}

fn load_or_start(
    path: &Path,
    genus: u32,
    p: u64,
    reduction: Reduction,
    block_size: u64,
    blocks_total: u64,
) -> Result<RunningTallies> {
    if !path.exists() {
        return Ok(RunningTallies::default());
    }
    let ck = Checkpoint::read(path)?;
    let expect = |ok: bool, what: &str, got: String, want: String| {
        if ok {
            Ok(())
        } else {
            Err(Error::CheckpointMismatch(format!(
                "{what} is {got}, run wants {want}"
            )))
        }
    };
    expect(ck.genus == genus, "genus", ck.genus.to_string(), genus.to_string())?;
    expect(ck.p == p, "prime", ck.p.to_string(), p.to_string())?;
    expect(
        ck.reduction == reduction,
        "reduction",
        ck.reduction.to_string(),
        reduction.to_string(),
    )?;
    expect(
        ck.block_size == block_size,
        "block size",
        ck.block_size.to_string(),
        block_size.to_string(),
    )?;
    expect(
        ck.blocks_total == blocks_total,
        "total blocks",
        ck.blocks_total.to_string(),
        blocks_total.to_string(),
    )?;
    Ok(RunningTallies::from_checkpoint(ck))
}

/// Scans the family at (genus, p) for squarefree curves with no affine
/// point. Resumes from `opts.checkpoint_path` when the file exists.
pub fn find_pointless(genus: u32, p: u64, opts: &SearchOptions) -> Result<SearchReport> {
    let field = Arc::new(PrimeField::new(p)?);
    let reduction = opts.reduction.unwrap_or_else(|| auto_reduction(genus, p));
    let mut plan = EnumerationPlan::new(genus, field.clone(), reduction);
    plan.block_size = opts.block_size;
    plan.validate()?;
    let ctx = plan.context()?;
    let blocks_total = ctx.blocks_total();

    let mut tallies = match &opts.checkpoint_path {
        Some(path) => load_or_start(path, genus, p, reduction, opts.block_size, blocks_total)?,
        None => RunningTallies::default(),
    };

    let limit = match opts.max_blocks {
        Some(m) => (tallies.blocks_completed + m).min(blocks_total),
        None => blocks_total,
    };
    let chunk_blocks = opts.chunk_blocks.max(1);

    while tallies.blocks_completed < limit {
        let chunk_start = tallies.blocks_completed;
        let chunk_end = (chunk_start + chunk_blocks).min(limit);
        let outcomes: Vec<BlockOutcome> = (chunk_start..chunk_end)
            .into_par_iter()
            .map(|block| {
                let mut visitor = ScanVisitor::new(&field, ctx.head_len);
                scan_block(&ctx, block, &mut visitor);
                visitor.out
            })
            .collect();
        for outcome in outcomes {
            tallies.fold(outcome);
        }
        tallies.blocks_completed = chunk_end;

        if let Some(path) = &opts.checkpoint_path {
            make_checkpoint(&tallies, genus, p, reduction, opts.block_size, blocks_total)
                .write_atomic(path)?;
        }
    }

    let complete = tallies.blocks_completed == blocks_total;
    Ok(SearchReport {
        genus,
        p,
        reduction,
        complete,
        all_have_points: complete && tallies.witnesses.is_empty(),
        total_equations_examined: tallies.equations,
        squarefree_count: ctx.family_equations - ctx.family_equations / p,
        representatives_scanned: tallies.representatives,
        pointless_candidates: tallies.pointless_candidates,
        pointless_found: tallies.witnesses,
        blocks: BlockAccounting {
            block_size: opts.block_size,
            total: blocks_total,
            completed: tallies.blocks_completed,
        },
    })
}

fn make_checkpoint(
    tallies: &RunningTallies,
    genus: u32,
    p: u64,
    reduction: Reduction,
    block_size: u64,
    blocks_total: u64,
) -> Checkpoint {
    Checkpoint {
        genus,
        p,
        reduction,
        block_size,
        blocks_total,
        workers: rayon::current_num_threads() as u64,
        blocks_completed: tallies.blocks_completed,
        representatives: tallies.representatives,
        equations: tallies.equations,
        pointless_candidates: tallies.pointless_candidates,
        witnesses: tallies.witnesses.clone(),
    }
}

/// Verdict for a single prime within a precise-bound sweep.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeVerdict {
    pub p: u64,
    /// False both for interrupted scans and for primes never attempted.
    pub complete: bool,
    pub has_pointless: bool,
    /// Number of pointless orbits found (canonical representatives).
    pub pointless_orbits: u64,
    /// Lexicographically least witness, when any exists.
    pub witness: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    /// Every prime below the Mit'kin threshold scanned exhaustively.
    VerifiedToMitkin,
    Partial,
}

/// Result of sweeping every prime in [3, scan_limit) and combining with the
/// Mit'kin point-existence guarantee above it.
#[derive(Debug, Clone, Serialize)]
pub struct PreciseBoundResult {
    pub genus: u32,
    /// Exclusive upper end of the scanned prime range.
    pub scan_limit: u64,
    pub mitkin_threshold: Option<u64>,
    pub verdicts: Vec<PrimeVerdict>,
    /// Least prime with no pointless curve at it or at any larger prime.
    /// Asserted only for a complete sweep reaching the Mit'kin threshold.
    pub p0: Option<u64>,
    pub status: BoundStatus,
}

/// Runs `find_pointless` for every prime in [3, max_prime), defaulting the
/// cap to the Mit'kin threshold for the genus.
pub fn verify_precise_bound(
    genus: u32,
    max_prime: Option<u64>,
    opts: &SearchOptions,
) -> Result<PreciseBoundResult> {
    let mitkin = mitkin_threshold(genus);
    let scan_limit = match max_prime.or(mitkin) {
        Some(cap) => cap,
        None => {
            return Err(Error::InvalidPlan(format!(
                "no Mit'kin threshold is known for genus {genus}; pass an explicit prime cap"
            )))
        }
    };

    let primes = primes_in_range(3, scan_limit.saturating_sub(1));
    let mut verdicts = Vec::with_capacity(primes.len());
    let mut all_complete = true;
    let mut interrupted = false;
    for &p in &primes {
        if interrupted {
            verdicts.push(PrimeVerdict {
                p,
                complete: false,
                has_pointless: false,
                pointless_orbits: 0,
                witness: None,
            });
            all_complete = false;
            continue;
        }
        let mut per_prime = opts.clone();
        per_prime.checkpoint_path = opts
            .checkpoint_path
            .as_ref()
            .map(|stem| per_prime_checkpoint(stem, genus, p));
        let report = find_pointless(genus, p, &per_prime)?;
        all_complete &= report.complete;
        interrupted |= !report.complete;
        verdicts.push(PrimeVerdict {
            p,
            complete: report.complete,
            has_pointless: !report.pointless_found.is_empty(),
            pointless_orbits: report.pointless_found.len() as u64,
            witness: report.pointless_found.first().cloned(),
        });
    }

    let covered = mitkin.is_some_and(|m| scan_limit >= m);
    let status = if all_complete && covered {
        BoundStatus::VerifiedToMitkin
    } else {
        BoundStatus::Partial
    };
    let p0 = (status == BoundStatus::VerifiedToMitkin).then(|| {
        match verdicts.iter().filter(|v| v.has_pointless).map(|v| v.p).max() {
            None => 3,
            Some(last_witness) => verdicts
                .iter()
                .map(|v| v.p)
                .find(|&p| p > last_witness)
                .unwrap_or_else(|| mitkin.expect("covered implies known threshold")),
        }
    });

    Ok(PreciseBoundResult {
        genus,
        scan_limit,
        mitkin_threshold: mitkin,
        verdicts,
        p0,
        status,
    })
}

fn per_prime_checkpoint(stem: &Path, genus: u32, p: u64) -> PathBuf {
    let mut name = stem.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".g{genus}.p{p}.ckpt"));
    stem.with_file_name(name)
}
