//! Append-only record log, one newline-delimited JSON file per kind.
//!
//! Writers take a single mutex, append one line, fsync, and then publish a
//! new index snapshot. Readers clone the current snapshot `Arc` and never
//! wait on disk.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::catalog::{ScenarioGroup, ScenarioId};
use crate::scene::{decode_scene, encode_scene, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Scene,
    Submission,
    Assignment,
}

impl RecordKind {
    const ALL: [RecordKind; 3] = [
        RecordKind::Scene,
        RecordKind::Submission,
        RecordKind::Assignment,
    ];

    fn file_name(self) -> &'static str {
        match self {
            RecordKind::Scene => "scenes.ndjson",
            RecordKind::Submission => "submissions.ndjson",
            RecordKind::Assignment => "assignments.ndjson",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            RecordKind::Scene => "scn",
            RecordKind::Submission => "sub",
            RecordKind::Assignment => "asg",
        }
    }
}

/// One line of a log file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub id: String,
    pub kind: RecordKind,
    pub body: serde_json::Value,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub participant_id: String,
    pub group: ScenarioGroup,
    pub scenario_order: Vec<ScenarioId>,
    pub seed: u64,
    pub issued_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Submission {
    pub submission_id: String,
    pub participant_id: String,
    pub scenario_id: ScenarioId,
    pub scene_id: String,
    /// Client-captured image, base64 encoded, stored as received.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screenshot: Option<String>,
    /// Plan view rendered by the server at submission time.
    pub plan_svg: String,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone)]
pub struct StoredScene {
    pub scene: Scene,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Default)]
pub struct Index {
    pub scenes: BTreeMap<String, StoredScene>,
    pub submissions: BTreeMap<String, Submission>,
    /// Keyed by participant.
    pub assignments: BTreeMap<String, Assignment>,
    next: BTreeMap<RecordKind, u64>,
}

impl Index {
    pub fn group_counts(&self) -> BTreeMap<ScenarioGroup, usize> {
        let mut out: BTreeMap<ScenarioGroup, usize> =
            ScenarioGroup::ALL.iter().map(|g| (*g, 0)).collect();
        for a in self.assignments.values() {
            *out.entry(a.group).or_default() += 1;
        }
        out
    }

    fn apply(&mut self, record: &StoreRecord) -> Result<(), StoreError> {
        let bad = |e: String| StoreError::Corrupt(format!("record {}: {e}", record.id));
        match record.kind {
            RecordKind::Scene => {
                let text = serde_json::to_string(&record.body).map_err(|e| bad(e.to_string()))?;
                let scene = decode_scene(&text).map_err(|e| bad(e.to_string()))?;
                self.scenes.insert(
                    record.id.clone(),
                    StoredScene {
                        scene,
                        created_at: record.created_at,
                    },
                );
            }
            RecordKind::Submission => {
                let s: Submission =
                    serde_json::from_value(record.body.clone()).map_err(|e| bad(e.to_string()))?;
                self.submissions.insert(record.id.clone(), s);
            }
            RecordKind::Assignment => {
                let a: Assignment =
                    serde_json::from_value(record.body.clone()).map_err(|e| bad(e.to_string()))?;
                self.assignments.insert(a.participant_id.clone(), a);
            }
        }
        let seq = record
            .id
            .strip_prefix(record.kind.prefix())
            .and_then(|n| n.parse::<u64>().ok())
            .ok_or_else(|| bad("malformed id".into()))?;
        let next = self.next.entry(record.kind).or_insert(1);
        *next = (*next).max(seq + 1);
        Ok(())
    }

    fn next_id(&self, kind: RecordKind) -> String {
        let n = self.next.get(&kind).copied().unwrap_or(1);
        format!("{}{n:06}", kind.prefix())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("store i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt store: {0}")]
    Corrupt(String),
}

pub struct Store {
    dir: PathBuf,
    writer: Mutex<BTreeMap<RecordKind, File>>,
    index: RwLock<Arc<Index>>,
}

impl Store {
    /// Opens (creating if needed) the store under `dir` and replays the logs.
    /// A torn final line left by a crash mid-write is truncated away.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let mut index = Index::default();
        let mut files = BTreeMap::new();
        for kind in RecordKind::ALL {
            let path = dir.join(kind.file_name());
            let file = OpenOptions::new()
                .create(true)
                .read(true)
                .append(true)
                .open(&path)?;
            let mut good_len = 0u64;
            let mut reader = BufReader::new(File::open(&path)?);
            let mut line = String::new();
            let mut lineno = 0;
            loop {
                line.clear();
                let n = reader.read_line(&mut line)?;
                if n == 0 {
                    break;
                }
                lineno += 1;
                if !line.ends_with('\n') {
                    // unterminated tail: the write never completed
                    break;
                }
                let record: StoreRecord = serde_json::from_str(&line).map_err(|e| {
                    StoreError::Corrupt(format!("{}:{lineno}: {e}", kind.file_name()))
                })?;
                index.apply(&record)?;
                good_len += n as u64;
            }
            if file.metadata()?.len() > good_len {
                file.set_len(good_len)?;
            }
            files.insert(kind, file);
        }
        Ok(Self {
            dir,
            writer: Mutex::new(files),
            index: RwLock::new(Arc::new(index)),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Current immutable view of every record.
    pub fn snapshot(&self) -> Arc<Index> {
        self.index.read().expect("index lock").clone()
    }

    /// Runs `build` under the write lock with the latest snapshot. It returns
    /// either an existing value (nothing is written) or a new record body to
    /// append; the new id is passed to `build` up front.
    pub fn append_with<T>(
        &self,
        kind: RecordKind,
        build: impl FnOnce(&Index, &str) -> Result<Appended<T>, StoreError>,
    ) -> Result<(String, T), StoreError> {
        let mut files = self.writer.lock().expect("writer lock");
        let current = self.snapshot();
        let id = current.next_id(kind);
        let body = match build(&current, &id)? {
            Appended::Existing(id, value) => return Ok((id, value)),
            Appended::New(body, value) => (body, value),
        };
        let record = StoreRecord {
            id: id.clone(),
            kind,
            body: body.0 .0,
            created_at: Utc::now(),
        };
        let mut line =
            serde_json::to_string(&record).map_err(|e| StoreError::Corrupt(e.to_string()))?;
        line.push('\n');
        let file = files.get_mut(&kind).expect("log open for every kind");
        file.write_all(line.as_bytes())?;
        file.sync_data()?;
        let mut next = (*current).clone();
        next.apply(&record)?;
        *self.index.write().expect("index lock") = Arc::new(next);
        Ok((id, body.1))
    }

    pub fn save_scene(&self, scene: &Scene) -> Result<String, StoreError> {
        let body: serde_json::Value = serde_json::from_str(&encode_scene(scene))
            .map_err(|e| StoreError::Corrupt(e.to_string()))?;
        self.append_with(RecordKind::Scene, |_, _| {
            Ok(Appended::New(RecordBody(body), ()))
        })
        .map(|(id, _)| id)
    }
}

pub struct RecordBody(pub serde_json::Value);

pub enum Appended<T> {
    /// Nothing written; return this id and value.
    Existing(String, T),
    New(RecordBody, T),
}
