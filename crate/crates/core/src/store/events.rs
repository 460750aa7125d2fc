use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::color::BasicColor;
use crate::error::{Error, Result};
use crate::ids::UserId;
use crate::study::{Study, Trial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Event {
    UserCreated { user_id: UserId, name: String },
    /// Ratings normalized to `[0, 1]`.
    ColorRatingSubmitted {
        user_id: UserId,
        ratings: BTreeMap<BasicColor, f64>,
    },
    StudyCreated(Box<Study>),
    TrialRecorded(Trial),
}

#[derive(Serialize, Deserialize)]
struct UserCreatedPayload {
    user_id: UserId,
    name: String,
}

#[derive(Serialize, Deserialize)]
struct RatingPayload {
    user_id: UserId,
    ratings: BTreeMap<BasicColor, f64>,
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::UserCreated { .. } => "user-created",
            Event::ColorRatingSubmitted { .. } => "color-rating-submitted",
            Event::StudyCreated(_) => "study-created",
            Event::TrialRecorded(_) => "trial-recorded",
        }
    }

    fn payload(&self) -> serde_json::Result<String> {
        match self {
            Event::UserCreated { user_id, name } => serde_json::to_string(&UserCreatedPayload {
                user_id: user_id.clone(),
                name: name.clone(),
            }),
            Event::ColorRatingSubmitted { user_id, ratings } => serde_json::to_string(&RatingPayload {
                user_id: user_id.clone(),
                ratings: ratings.clone(),
            }),
            Event::StudyCreated(study) => serde_json::to_string(study),
            Event::TrialRecorded(trial) => serde_json::to_string(trial),
        }
    }

    fn parse(kind: &str, payload: &str) -> std::result::Result<Self, String> {
        let err = |e: serde_json::Error| e.to_string();
        Ok(match kind {
            "user-created" => {
                let p: UserCreatedPayload = serde_json::from_str(payload).map_err(err)?;
                Event::UserCreated {
                    user_id: p.user_id,
                    name: p.name,
                }
            }
            "color-rating-submitted" => {
                let p: RatingPayload = serde_json::from_str(payload).map_err(err)?;
                Event::ColorRatingSubmitted {
                    user_id: p.user_id,
                    ratings: p.ratings,
                }
            }
            "study-created" => Event::StudyCreated(serde_json::from_str(payload).map_err(err)?),
            "trial-recorded" => Event::TrialRecorded(serde_json::from_str(payload).map_err(err)?),
            other => return Err(format!("unknown event kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub seq: u64,
    pub timestamp: String,
    pub event: Event,
}

impl EventRecord {
    /// `seq<TAB>timestamp<TAB>kind<TAB>payload`
    pub fn to_line(&self) -> Result<String> {
        Ok(format!(
            "{}\t{}\t{}\t{}",
            self.seq,
            self.timestamp,
            self.event.kind(),
            self.event.payload()?
        ))
    }

    pub fn parse_line(line: &str, line_no: u64) -> Result<Self> {
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut fields = line.splitn(4, '\t');
        let (Some(seq), Some(timestamp), Some(kind), Some(payload)) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(parse_err("expected 4 tab-separated fields".into()));
        };
        let seq = seq
            .parse()
            .map_err(|e| parse_err(format!("bad sequence number `{seq}`: {e}")))?;
        let event = Event::parse(kind, payload).map_err(parse_err)?;
        Ok(Self {
            seq,
            timestamp: timestamp.to_string(),
            event,
        })
    }
}

/// Append-only event log with strictly increasing sequence numbers.
/// Without a backing file it lives in memory only.
#[derive(Debug)]
pub struct EventLog {
    path: Option<PathBuf>,
    file: Option<File>,
    records: Vec<EventRecord>,
}

impl EventLog {
    pub fn in_memory() -> Self {
        Self {
            path: None,
            file: None,
            records: Vec::new(),
        }
    }

    /// Opens (creating if needed) a log file and loads its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let records = if path.exists() {
            Self::read(&path)?
        } else {
            Vec::new()
        };
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        Ok(Self {
            path: Some(path),
            file: Some(file),
            records,
        })
    }

    /// Reads every record of a log file without opening it for writing.
    pub fn read(path: impl AsRef<Path>) -> Result<Vec<EventRecord>> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut records: Vec<EventRecord> = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let line_no = i as u64 + 1;
            let record = EventRecord::parse_line(&line, line_no)?;
            if let Some(prev) = records.last() {
                if record.seq <= prev.seq {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("sequence {} does not follow {}", record.seq, prev.seq),
                    });
                }
            }
            records.push(record);
        }
        Ok(records)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> &[EventRecord] {
        &self.records
    }

    pub fn append(&mut self, event: Event) -> Result<&EventRecord> {
        let record = EventRecord {
            seq: self.records.last().map_or(1, |r| r.seq + 1),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            event,
        };
        if let Some(file) = &mut self.file {
            let line = record.to_line()?;
            let path = self.path.as_deref().unwrap_or(Path::new("<log>"));
            writeln!(file, "{line}")
                .and_then(|_| file.flush())
                .map_err(|e| Error::io(path, e))?;
        }
        self.records.push(record);
        Ok(self.records.last().expect("just pushed"))
    }
}
