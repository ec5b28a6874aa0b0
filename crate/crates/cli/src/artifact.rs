use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// A named output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    /// Pretty JSON with a trailing newline. Key order follows struct field order.
    pub fn json(name: impl Into<String>, value: &impl Serialize) -> Result<Self, CliError> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        Ok(Self { name: name.into(), bytes })
    }

    /// CSV with a header row taken from the field names of `R`.
    pub fn csv<R: Serialize>(name: impl Into<String>, rows: &[R]) -> Result<Self, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(Self { name: name.into(), bytes })
    }

    pub fn text(name: impl Into<String>, text: String) -> Self {
        Self { name: name.into(), bytes: text.into_bytes() }
    }
}

/// One failed check, as listed in `failures.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub failures: Vec<Failure>,
}

#[derive(Serialize)]
struct FailureList<'a> {
    passed: bool,
    failures: &'a [Failure],
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records `check` as failed unless `ok`.
    pub fn require(&mut self, check: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(Failure { check: check.into(), detail: detail() });
        }
    }

    pub fn failure_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(&FailureList { passed: self.passed(), failures: &self.failures })?)
    }

    /// Writes every artifact plus `failures.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            fs::write(dir.join(&a.name), &a.bytes)?;
        }
        fs::write(dir.join("failures.json"), self.failure_json()? + "\n")?;
        Ok(())
    }
}
