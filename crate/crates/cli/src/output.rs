use std::fs;
use std::io::Write;

use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::CliError;

/// SHA-256 of the merged configuration and the command name.
pub fn config_hash(cfg: &Config, command: &str) -> String {
    let mut h = Sha256::new();
    h.update(cfg.canonical().as_bytes());
    h.update(format!("command={command}\n").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// CSV body plus a trailing `#` metadata block; no timestamps, LF endings.
pub struct CsvDoc {
    header: String,
    rows: Vec<String>,
    meta: Vec<(String, String)>,
}

impl CsvDoc {
    pub fn new(header: &str) -> Self {
        CsvDoc {
            header: header.to_string(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn row(&mut self, row: impl Into<String>) {
        self.rows.push(row.into());
    }

    /// Appends rows from a block that may repeat the header.
    pub fn rows_from(&mut self, csv: &str) {
        for line in csv.lines().filter(|l| *l != self.header) {
            self.rows.push(line.to_string());
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, cfg: &Config, command: &str, seed: u64) -> String {
        let mut s = String::new();
        s.push_str(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s.push_str(&format!("# tool: hscomp {}\n", env!("CARGO_PKG_VERSION")));
        s.push_str(&format!("# command: {command}\n"));
        s.push_str(&format!("# config_hash: {}\n", config_hash(cfg, command)));
        s.push_str(&format!("# seed: {seed}\n"));
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s
    }
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::new("io", format!("{p}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
