use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{Error, Result};

/// Provenance block written as `#` comment lines at the top of every output
/// file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub coefficient_table_order: usize,
    /// Seconds since the Unix epoch; omitted in reproducible runs.
    pub timestamp: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, coefficient_table_order: usize) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            coefficient_table_order,
            timestamp: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn stamped(mut self, reproducible: bool) -> Self {
        if !reproducible {
            self.timestamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs());
        }
        self
    }

    pub fn header(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# tool_version: {}", self.tool_version);
        let _ = writeln!(s, "# coefficient_table_order: {}", self.coefficient_table_order);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "# param.{k}: {v}");
        }
        if let Some(t) = self.timestamp {
            let _ = writeln!(s, "# timestamp: {t}");
        }
        s
    }

    /// Read the manifest back from the leading `#` lines of a file.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::InvalidArgument(format!("malformed manifest line '{line}'"));
        let mut command = None;
        let mut version = None;
        let mut order = None;
        let mut timestamp = None;
        let mut parameters = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line[1..].trim_start();
            let (key, value) = body.split_once(": ").ok_or_else(|| bad(line))?;
            match key {
                "command" => command = Some(value.to_string()),
                "tool_version" => version = Some(value.to_string()),
                "coefficient_table_order" => order = Some(value.parse().map_err(|_| bad(line))?),
                "timestamp" => timestamp = Some(value.parse().map_err(|_| bad(line))?),
                k => {
                    let name = k.strip_prefix("param.").ok_or_else(|| bad(line))?;
                    parameters.insert(name.to_string(), value.to_string());
                }
            }
        }
        let missing = |f: &str| Error::InvalidArgument(format!("manifest lacks '{f}'"));
        Ok(Self {
            command: command.ok_or_else(|| missing("command"))?,
            parameters,
            tool_version: version.ok_or_else(|| missing("tool_version"))?,
            coefficient_table_order: order.ok_or_else(|| missing("coefficient_table_order"))?,
            timestamp,
        })
    }
}
