//! Resumable search state as human-readable key/value text.
//!
//! Blocks complete strictly in index order, so the state is a contiguous
//! completed prefix plus its aggregated tallies and the witnesses found so
//! far. Files are written atomically and end with a trailer line so a
//! truncated write is detected on load.

use std::fs;
use std::path::Path;

use crate::enumerate::Reduction;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "weilscan-checkpoint";
pub const CHECKPOINT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub genus: u32,
    pub p: u64,
    pub reduction: Reduction,
    pub block_size: u64,
    pub blocks_total: u64,
    pub workers: u64,
    pub blocks_completed: u64,
    pub representatives: u64,
    pub equations: u64,
    pub pointless_candidates: u64,
    pub witnesses: Vec<Vec<u64>>,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{CHECKPOINT_FORMAT}: {CHECKPOINT_VERSION}\n"));
        out.push_str(&format!("genus: {}\n", self.genus));
        out.push_str(&format!("prime: {}\n", self.p));
        out.push_str(&format!("reduction: {}\n", self.reduction));
        out.push_str(&format!("block-size: {}\n", self.block_size));
        out.push_str(&format!("blocks-total: {}\n", self.blocks_total));
        out.push_str(&format!("workers: {}\n", self.workers));
        out.push_str(&format!("blocks-completed: {}\n", self.blocks_completed));
        out.push_str(&format!("representatives: {}\n", self.representatives));
        out.push_str(&format!("equations-examined: {}\n", self.equations));
        out.push_str(&format!("pointless-candidates: {}\n", self.pointless_candidates));
        for w in &self.witnesses {
            let joined: Vec<String> = w.iter().map(u64::to_string).collect();
            out.push_str(&format!("witness: {}\n", joined.join(",")));
        }
        out.push_str("end: ok\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Checkpoint(msg);
        let mut lines = text.lines();
        let mut fields: Vec<(String, String)> = Vec::new();
        let mut witnesses = Vec::new();
        let mut ended = false;
        for (no, line) in lines.by_ref().enumerate() {
            let (key, value) = line
                .split_once(": ")
                .ok_or_else(|| bad(format!("line {}: expected 'key: value'", no + 1)))?;
            match key {
                "witness" => {
                    let coeffs: std::result::Result<Vec<u64>, _> =
                        value.split(',').map(str::parse).collect();
                    witnesses.push(coeffs.map_err(|e| {
                        bad(format!("line {}: bad witness coefficients: {e}", no + 1))
                    })?);
                }
                "end" => {
                    if value != "ok" {
                        return Err(bad("unexpected end marker".into()));
                    }
                    ended = true;
                    break;
                }
                _ => fields.push((key.to_string(), value.to_string())),
            }
        }
        if !ended {
            return Err(bad("missing end marker; file truncated?".into()));
        }
        if lines.next().is_some() {
            return Err(bad("trailing content after end marker".into()));
        }

        let get = |key: &str| -> Result<String> {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Checkpoint(format!("missing field '{key}'")))
        };
        let version = get(CHECKPOINT_FORMAT)?;
        if version != CHECKPOINT_VERSION {
            return Err(bad(format!("unsupported version '{version}'")));
        }
        let parse_u64 = |key: &str, v: String| -> Result<u64> {
            v.parse()
                .map_err(|e| Error::Checkpoint(format!("field '{key}': {e}")))
        };
        Ok(Checkpoint {
            genus: parse_u64("genus", get("genus")?)? as u32,
            p: parse_u64("prime", get("prime")?)?,
            reduction: get("reduction")?.parse()?,
            block_size: parse_u64("block-size", get("block-size")?)?,
            blocks_total: parse_u64("blocks-total", get("blocks-total")?)?,
            workers: parse_u64("workers", get("workers")?)?,
            blocks_completed: parse_u64("blocks-completed", get("blocks-completed")?)?,
            representatives: parse_u64("representatives", get("representatives")?)?,
            equations: parse_u64("equations-examined", get("equations-examined")?)?,
            pointless_candidates: parse_u64(
                "pointless-candidates",
                get("pointless-candidates")?,
            )?,
            witnesses,
        })
    }

    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_text())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        Checkpoint {
            genus: 2,
            p: 7,
            reduction: Reduction::TranslateScale,
            block_size: 256,
            blocks_total: 10,
            workers: 2,
            blocks_completed: 4,
            representatives: 921,
            equations: 9604,
            pointless_candidates: 1,
            witnesses: vec![vec![0, 1, 5, 5, 5], vec![0, 2, 5, 6, 3]],
        }
    }

    #[test]
    fn round_trips_exactly() {
        let ck = sample();
        let text = ck.to_text();
        let back = Checkpoint::from_text(&text).unwrap();
        assert_eq!(back, ck);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn detects_truncation() {
        let text = sample().to_text();
        let cut = &text[..text.len() - 8];
        assert!(Checkpoint::from_text(cut).is_err());
    }
}
