//! Self-describing output documents.
//!
//! Every document echoes the full input under `input`, so
//! `spincollapse replay <doc>` reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use spincollapse_core::{EntropyBase, Mode};

use crate::CliError;

pub const TOOL: &str = "spincollapse";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: Value,
    pub entropy_base: EntropyBase,
    pub mode: Mode,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl OutputEnvelope {
    pub fn new<I: Serialize, R: Serialize>(
        command: &str,
        input: &I,
        entropy_base: EntropyBase,
        mode: Mode,
        results: &R,
    ) -> Result<Self, CliError> {
        let to_value =
            |v: serde_json::Result<Value>| v.map_err(|e| CliError::Document(e.to_string()));
        Ok(OutputEnvelope {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            input: to_value(serde_json::to_value(input))?,
            entropy_base,
            mode,
            results: to_value(serde_json::to_value(results))?,
            warnings: Vec::new(),
        })
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn render(&self, format: DocFormat) -> Result<String, CliError> {
        let text = match format {
            DocFormat::Json => serde_json::to_string_pretty(self),
            DocFormat::Compact => serde_json::to_string(self),
        }
        .map_err(|e| CliError::Document(e.to_string()))?;
        Ok(text + "\n")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocFormat {
    Json,
    Compact,
}

impl DocFormat {
    pub fn parse(flag: Option<&str>) -> Result<Self, CliError> {
        match flag {
            None | Some("json") => Ok(DocFormat::Json),
            Some("compact") => Ok(DocFormat::Compact),
            Some(other) => Err(CliError::Usage(format!(
                "--format for this command must be `json` or `compact`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
}

impl TableFormat {
    pub fn parse(flag: Option<&str>) -> Result<Self, CliError> {
        match flag {
            None | Some("csv") => Ok(TableFormat::Csv),
            Some("tsv") => Ok(TableFormat::Tsv),
            Some(other) => Err(CliError::Usage(format!(
                "--format for landscape must be `csv` or `tsv`, got `{other}`"
            ))),
        }
    }

    pub fn delimiter(self) -> char {
        match self {
            TableFormat::Csv => ',',
            TableFormat::Tsv => '\t',
        }
    }
}
