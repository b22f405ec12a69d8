use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::generate::mixture_file_name;
use super::mix::MixtureRecord;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const SPEC_FILE: &str = "corpus.json";

/// Ordered mixture records of one corpus directory. Record paths are
/// relative to `root`; mixtures live at `root/mix_NNNN.wav`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub records: Vec<MixtureRecord>,
    pub sample_rate_hz: u32,
    pub seed: Option<u64>,
    root: PathBuf,
}

impl CorpusManifest {
    pub fn new(
        records: Vec<MixtureRecord>,
        sample_rate_hz: u32,
        seed: Option<u64>,
        root: impl Into<PathBuf>,
    ) -> Result<Self> {
        let manifest = Self {
            records,
            sample_rate_hz,
            seed,
            root: root.into(),
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.records {
            r.validate().map_err(|e| Error::Record {
                index: r.index,
                source: Box::new(e),
            })?;
            if r.sample_rate_hz != self.sample_rate_hz {
                return Err(Error::Record {
                    index: r.index,
                    source: Box::new(Error::invalid(format!(
                        "sample rate {} differs from corpus rate {}",
                        r.sample_rate_hz, self.sample_rate_hz
                    ))),
                });
            }
        }
        Ok(())
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join(MANIFEST_FILE)
    }

    pub fn mixture_path(&self, record: &MixtureRecord) -> PathBuf {
        self.root.join(mixture_file_name(record.index))
    }

    pub fn background_path(&self, record: &MixtureRecord) -> PathBuf {
        self.root.join(&record.background_path)
    }

    pub fn event_path(&self, record: &MixtureRecord) -> PathBuf {
        self.root.join(&record.event_path)
    }

    /// Record count per EBR label, keyed by the label's decimal rendering.
    pub fn counts_by_ebr(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(format!("{}", r.ebr_db)).or_insert(0) += 1;
        }
        out
    }

    /// Distinct EBR labels in first-seen order.
    pub fn ebr_levels(&self) -> Vec<f64> {
        let mut levels: Vec<f64> = Vec::new();
        for r in &self.records {
            if !levels.contains(&r.ebr_db) {
                levels.push(r.ebr_db);
            }
        }
        levels
    }

    /// Writes one JSON object per line to `root/manifest.jsonl`.
    pub fn save(&self) -> Result<()> {
        let path = self.manifest_path();
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        for r in &self.records {
            let line = serde_json::to_string(r).expect("record serializes");
            writeln!(w, "{line}").map_err(|e| Error::io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))
    }

    /// Loads a manifest from its file or from the corpus directory holding it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file_path = if path.is_dir() {
            path.join(MANIFEST_FILE)
        } else {
            path.to_path_buf()
        };
        let root = file_path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        let file = std::fs::File::open(&file_path).map_err(|e| Error::io(&file_path, e))?;
        let mut records = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(&file_path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let record: MixtureRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                what: "manifest line",
                reason: format!("{}:{}: {e}", file_path.display(), lineno + 1),
            })?;
            records.push(record);
        }
        let sample_rate_hz = records.first().map_or(crate::DEFAULT_SAMPLE_RATE_HZ, |r| r.sample_rate_hz);
        let seed = read_seed(&root.join(SPEC_FILE));
        Self::new(records, sample_rate_hz, seed, root)
    }
}

fn read_seed(spec_path: &Path) -> Option<u64> {
    let text = std::fs::read_to_string(spec_path).ok()?;
    let value: serde_json::Value = serde_json::from_str(&text).ok()?;
    value.get("seed")?.as_u64()
}
