//! Checkpoint files: `AQCK`, format version, payload length, CRC-32 of the
//! payload, payload. Each write goes to a temporary file that is renamed over
//! the current checkpoint after the old one is kept as `.prev`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::HarnessError;

const MAGIC: &[u8; 4] = b"AQCK";
const VERSION: u32 = 1;

pub struct CheckpointFile {
    path: PathBuf,
}

fn io(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

impl CheckpointFile {
    pub fn new(dir: &Path, task_id: &str) -> Self {
        let name: String = task_id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        let tag = crc32fast::hash(task_id.as_bytes());
        CheckpointFile {
            path: dir.join(format!("{name}-{tag:08x}.ckpt")),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn prev(&self) -> PathBuf {
        self.path.with_extension("ckpt.prev")
    }

    pub fn write(&self, payload: &[u8]) -> Result<(), HarnessError> {
        let mut buf = Vec::with_capacity(payload.len() + 20);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        buf.extend_from_slice(&crc32fast::hash(payload).to_le_bytes());
        buf.extend_from_slice(payload);

        let tmp = self.path.with_extension("ckpt.tmp");
        let mut f = fs::File::create(&tmp).map_err(|e| io(&tmp, e))?;
        f.write_all(&buf).map_err(|e| io(&tmp, e))?;
        f.sync_all().map_err(|e| io(&tmp, e))?;
        if self.path.exists() {
            fs::rename(&self.path, self.prev()).map_err(|e| io(&self.path, e))?;
        }
        fs::rename(&tmp, &self.path).map_err(|e| io(&tmp, e))
    }

    fn decode(bytes: &[u8]) -> Option<Vec<u8>> {
        if bytes.len() < 20 || &bytes[..4] != MAGIC {
            return None;
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().ok()?);
        let len = u64::from_le_bytes(bytes[8..16].try_into().ok()?);
        let crc = u32::from_le_bytes(bytes[16..20].try_into().ok()?);
        let payload = &bytes[20..];
        (version == VERSION && payload.len() as u64 == len && crc32fast::hash(payload) == crc).then(|| payload.to_vec())
    }

    /// Payloads of the current and previous checkpoint that pass the
    /// checksum, newest first.
    pub fn candidates(&self) -> Vec<Vec<u8>> {
        [self.path.clone(), self.prev()]
            .iter()
            .filter_map(|p| fs::read(p).ok())
            .filter_map(|b| Self::decode(&b))
            .collect()
    }

    pub fn remove(&self) {
        for p in [self.path.clone(), self.prev(), self.path.with_extension("ckpt.tmp")] {
            let _ = fs::remove_file(p);
        }
    }
}
