//! File formats of the command-line front end: JSON configs, CSV tables and run metadata.
//!
//! Every CSV starts with a metadata comment `# isofield format=1 command=... config_hash=...
//! seed=...`, followed by a header row and data rows. Floating-point values carry 17
//! significant digits so that they parse back to the same `f64`.

use crate::error::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Version tag written into every output.
pub const FORMAT_VERSION: u32 = 1;

/// Text of a float with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolved parameters of one invocation; its hash identifies the output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub format_version: u32,
    pub command: String,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
}

impl RunConfig {
    pub fn new(command: &str, seed: Option<u64>, params: impl Serialize) -> Result<Self> {
        Ok(RunConfig {
            format_version: FORMAT_VERSION,
            command: command.to_string(),
            seed,
            params: serde_json::to_value(params)?,
        })
    }

    /// SHA-256 of the compact JSON serialization, as lowercase hex.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("configs serialize");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }

    pub fn metadata_line(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "# isofield format={} command={} config_hash={} seed={}",
            self.format_version,
            self.command,
            self.hash(),
            seed
        )
    }
}

/// `key=value` fields of a metadata comment line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub fields: Vec<(String, String)>,
}

impl Metadata {
    pub fn parse(line: &str) -> Self {
        let body = line.trim_start_matches('#');
        Metadata {
            fields: body
                .split_whitespace()
                .filter_map(|t| t.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
                .collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Deserializes JSON text; errors name the path of the offending key.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::invalid(format!("{what}: {}", crate::tagged::prefix_path(&path, &e.into_inner().to_string())))
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// CSV table assembled in memory and written in one piece.
pub struct CsvTable {
    metadata: String,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(config: &RunConfig, header: &[&str]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(CsvTable { metadata: config.metadata_line(), writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    /// Metadata line, header and rows.
    pub fn into_bytes(self) -> Result<Vec<u8>> {
        let body = self.writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        let mut out = Vec::with_capacity(body.len() + self.metadata.len() + 1);
        out.extend_from_slice(self.metadata.as_bytes());
        out.push(b'\n');
        out.extend_from_slice(&body);
        Ok(out)
    }

    /// Writes to `path`, or to standard output for `-`.
    pub fn write_to(self, path: &Path) -> Result<()> {
        emit(path, &self.into_bytes()?)
    }
}

/// Writes bytes to `path`, or to standard output for `-`.
pub fn emit(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.as_os_str() == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
    } else {
        std::fs::write(path, bytes)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    }
    Ok(())
}

/// Rows of a CSV file written by this tool, with its metadata and header.
pub struct CsvInput {
    pub metadata: Metadata,
    pub header: Vec<String>,
    pub rows: Vec<csv::StringRecord>,
}

impl CsvInput {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        let metadata = text.lines().find(|l| l.starts_with('#')).map(Metadata::parse).unwrap_or_default();
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = reader.headers()?.iter().map(str::to_string).collect();
        let rows = reader.records().collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CsvInput { metadata, header, rows })
    }

    /// Position of a required column.
    pub fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| Error::invalid(format!("missing column `{name}`")))
    }
}

/// Parses field `col` of `row` (data row `index`, 0-based).
pub fn field<T: std::str::FromStr>(row: &csv::StringRecord, col: usize, index: usize, name: &str) -> Result<T> {
    let text = row.get(col).ok_or_else(|| Error::invalid(format!("row {index}: missing `{name}`")))?;
    text.trim().parse().map_err(|_| Error::invalid(format!("row {index}: cannot parse `{name}` value {text:?}")))
}
