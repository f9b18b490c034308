use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::polycore::Monomial;

/// One per-prime event of a modular run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub class: String,
    pub micros: u64,
    pub prime: u64,
    pub sig: String,
    pub stage: String,
}

/// Shared, append-only log of per-prime events; clones share storage.
#[derive(Debug, Clone, Default)]
pub struct RunLog(Arc<Mutex<Vec<RunRecord>>>);

impl RunLog {
    pub fn new() -> Self {
        RunLog::default()
    }

    pub fn push(&self, rec: RunRecord) {
        self.0.lock().unwrap().push(rec);
    }

    pub fn records(&self) -> Vec<RunRecord> {
        self.0.lock().unwrap().clone()
    }

    /// One JSON object per line, keys sorted.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in self.0.lock().unwrap().iter() {
            out.push_str(&serde_json::to_string(r).expect("plain record serializes"));
            out.push('\n');
        }
        out
    }
}

/// Stable 64-bit FNV-1a hash of `bytes`, as hex.
pub fn stable_hash(bytes: impl IntoIterator<Item = u8>) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

/// [`stable_hash`] of a leading-monomial signature.
pub fn signature_hash(sig: &[Monomial]) -> String {
    let words = sig
        .iter()
        .flat_map(|m| std::iter::once(m.arity() as u32).chain(m.exps().iter().copied()));
    stable_hash(words.flat_map(u32::to_le_bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_has_sorted_keys_and_one_line_per_record() {
        let log = RunLog::new();
        let sig = [Monomial::new(&[1, 0]).unwrap()];
        log.push(RunRecord {
            class: "effectively_lucky".into(),
            micros: 12,
            prime: 7,
            sig: signature_hash(&sig),
            stage: "quotient".into(),
        });
        log.clone().push(log.records()[0].clone());
        let text = log.to_jsonl();
        assert_eq!(text.lines().count(), 2);
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("{\"class\":\"effectively_lucky\",\"micros\":12,\"prime\":7,\"sig\":\""));
        assert_ne!(signature_hash(&sig), signature_hash(&[Monomial::new(&[0, 1]).unwrap()]));
        assert_eq!(signature_hash(&sig), signature_hash(&sig));
    }
}
