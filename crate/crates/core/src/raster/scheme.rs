use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BACKGROUND: u8 = 0;
pub const SOIL: u8 = 1;
pub const STRAW: u8 = 2;

/// Ordered class labels; a label's position is its class id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemeFile", into = "SchemeFile")]
pub struct ClassScheme {
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    classes: Vec<String>,
}

impl TryFrom<SchemeFile> for ClassScheme {
    type Error = Error;

    fn try_from(file: SchemeFile) -> Result<Self> {
        ClassScheme::new(file.classes)
    }
}

impl From<ClassScheme> for SchemeFile {
    fn from(scheme: ClassScheme) -> Self {
        SchemeFile {
            classes: scheme.names,
        }
    }
}

impl Default for ClassScheme {
    fn default() -> Self {
        ClassScheme {
            names: vec!["background".into(), "soil".into(), "straw".into()],
        }
    }
}

impl ClassScheme {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::Scheme(format!(
                "need at least 2 classes, got {}",
                names.len()
            )));
        }
        if names.len() > 256 {
            return Err(Error::Scheme(format!(
                "class ids are 8-bit, {} classes do not fit",
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::Scheme("empty class name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Scheme(format!("duplicate class name {name:?}")));
            }
        }
        Ok(ClassScheme { names })
    }

    /// Reads a scheme file of the form `{"classes": ["background", ...]}`.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn class_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: u8) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn id_of(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }
}
