//! Append-only JSON-lines result cache.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::record::{Method, RunRecord, TOOL_VERSION};

/// Lookup key: everything that can change a stored value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheKey {
    pub method: Method,
    pub d: usize,
    pub g: usize,
    pub connected: bool,
    pub normalization_reading: Option<String>,
}

impl CacheKey {
    fn matches(&self, r: &RunRecord) -> bool {
        r.method == self.method
            && r.query.d == self.d
            && r.query.g == self.g
            && r.query.connected == self.connected
            && r.query.twisted
            && r.tool_version == TOOL_VERSION
            && r.normalization_reading == self.normalization_reading
    }
}

pub struct Cache {
    path: PathBuf,
}

/// Parsed cache contents; `corrupt` counts lines that could not be trusted.
pub struct Entries {
    pub records: Vec<RunRecord>,
    pub corrupt: usize,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn entries(&self) -> Entries {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => {
                eprintln!("warning: cache {} unreadable ({e}); ignoring it", self.path.display());
                String::new()
            }
        };
        let mut records = Vec::new();
        let mut corrupt = 0;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<RunRecord>(line) {
                Ok(r) if r.value().is_some() => records.push(r),
                _ => corrupt += 1,
            }
        }
        Entries { records, corrupt }
    }

    pub fn lookup(&self, key: &CacheKey) -> Option<RunRecord> {
        let entries = self.entries();
        if entries.corrupt > 0 {
            eprintln!(
                "warning: skipped {} corrupt line(s) in cache {}",
                entries.corrupt,
                self.path.display()
            );
        }
        entries.records.into_iter().rev().find(|r| key.matches(r))
    }

    pub fn append(&self, record: &RunRecord) -> io::Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        // a torn previous write must not swallow this record
        let needs_newline = fs::read(&self.path)
            .map(|b| b.last().is_some_and(|&c| c != b'\n'))
            .unwrap_or(false);
        let mut line = serde_json::to_string(record).map_err(io::Error::other)?;
        if needs_newline {
            line.insert(0, '\n');
        }
        line.push('\n');
        file.write_all(line.as_bytes())
    }

    pub fn clear(&self) -> io::Result<bool> {
        match fs::remove_file(&self.path) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(e),
        }
    }
}
