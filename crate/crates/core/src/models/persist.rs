//! JSON persistence of knowledge bases.

use crate::belief::Belief;
use crate::error::{BprError, Result};
use crate::kb::{KnowledgeBase, ModelPair, PolicyInfo, TypeInfo};
use crate::models::ObservationModel;
use crate::signal::{Signal, SignalKind};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: &str = "bpr-kb-1";

#[derive(Serialize, Deserialize)]
struct KbFile {
    schema_version: String,
    signal_kind: SignalKind,
    types: Vec<TypeInfo>,
    policies: Vec<PolicyInfo>,
    prior: Belief,
    models: Vec<Vec<ModelPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signal_support: Option<Vec<Vec<Signal>>>,
}

impl KbFile {
    fn from_kb(kb: &KnowledgeBase) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            signal_kind: kb.signal_kind(),
            types: kb.types().to_vec(),
            policies: kb.policies().to_vec(),
            prior: kb.prior().clone(),
            models: kb.models().to_vec(),
            signal_support: kb.signal_support().map(|s| s.to_vec()),
        }
    }

    fn into_kb(self) -> Result<KnowledgeBase> {
        let kb = KnowledgeBase::new(
            self.signal_kind,
            self.types,
            self.policies,
            self.models,
            self.prior,
        )?;
        match self.signal_support {
            Some(s) => kb.with_signal_support(s),
            None => Ok(kb),
        }
    }
}

pub fn to_json(kb: &KnowledgeBase) -> String {
    serde_json::to_string_pretty(&KbFile::from_kb(kb)).expect("knowledge base serialises")
}

pub fn from_json(text: &str) -> Result<KnowledgeBase> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        BprError::SchemaVersionMismatch(format!("not a knowledge-base document: {e}"))
    })?;
    match value.get("schema_version").and_then(|v| v.as_str()) {
        Some(SCHEMA_VERSION) => {}
        Some(other) => {
            return Err(BprError::SchemaVersionMismatch(format!(
                "expected {SCHEMA_VERSION}, found {other}"
            )))
        }
        None => {
            return Err(BprError::SchemaVersionMismatch(
                "missing schema_version".into(),
            ))
        }
    }
    let file: KbFile = serde_json::from_value(value).map_err(|e| {
        BprError::SchemaVersionMismatch(format!("malformed {SCHEMA_VERSION} document: {e}"))
    })?;
    file.into_kb()
        .map_err(|e| BprError::SchemaVersionMismatch(format!("inconsistent document: {e}")))
}

pub fn save_kb(kb: &KnowledgeBase, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(kb))?;
    Ok(())
}

pub fn load_kb(path: impl AsRef<Path>) -> Result<KnowledgeBase> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text)
}

/// Serialised size of a knowledge base, split by model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorageReport {
    pub header_bytes: usize,
    pub performance_bytes: usize,
    pub observation_bytes: usize,
    /// Observation models are the performance models (episodic-return signals).
    pub shared_signal_model: bool,
}

impl StorageReport {
    /// Bytes needed to hold the models used for belief updates.
    pub fn signal_model_bytes(&self) -> usize {
        if self.shared_signal_model {
            self.performance_bytes
        } else {
            self.observation_bytes
        }
    }

    pub fn total_bytes(&self) -> usize {
        self.header_bytes + self.performance_bytes + self.observation_bytes
    }
}

/// Compact-JSON byte counts of the header, performance models and
/// observation models (including any stored trace support).
pub fn storage_size(kb: &KnowledgeBase) -> StorageReport {
    let mut header = KbFile::from_kb(kb);
    header.models = Vec::new();
    let support = header.signal_support.take();
    let header_bytes = json_len(&header);
    let mut performance_bytes = 0;
    let mut observation_bytes = support.as_ref().map_or(0, json_len);
    let mut shared = !kb.models().is_empty();
    for row in kb.models() {
        for pair in row {
            performance_bytes += json_len(&pair.performance);
            match pair.observation {
                ObservationModel::SameAsPerformance => {}
                ref obs => {
                    shared = false;
                    observation_bytes += json_len(obs);
                }
            }
        }
    }
    StorageReport {
        header_bytes,
        performance_bytes,
        observation_bytes,
        shared_signal_model: shared,
    }
}

fn json_len<T: Serialize + ?Sized>(value: &T) -> usize {
    serde_json::to_vec(value).expect("serialisable").len()
}
