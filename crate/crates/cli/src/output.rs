use std::fmt;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// Stdout and stderr of one invocation.
pub struct Console<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl<'a> Console<'a> {
    pub fn new(out: &'a mut dyn Write, err: &'a mut dyn Write) -> Self {
        Self { out, err }
    }

    pub fn say(&mut self, args: fmt::Arguments<'_>) {
        let _ = writeln!(self.out, "{args}");
    }

    pub fn warn(&mut self, args: fmt::Arguments<'_>) {
        let _ = writeln!(self.err, "warning: {args}");
    }

    pub fn error(&mut self, args: fmt::Arguments<'_>) {
        let _ = writeln!(self.err, "error: {args}");
    }
}

/// A directory that command artifacts are written into.
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn sub(&self, name: &str) -> Result<Self> {
        Self::create(&self.root.join(name))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Buffers everything `fill` writes and stores it under `name`.
    pub fn write_with<F, E>(&self, name: &str, fill: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut Vec<u8>) -> std::result::Result<(), E>,
        E: fmt::Display,
    {
        let mut buf = Vec::new();
        let path = self.path(name);
        fill(&mut buf).map_err(|e| CliError::in_file(&path, e))?;
        fs::write(&path, buf).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

pub fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))
}
