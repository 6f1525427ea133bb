//! Versioned TOML description of a preparation pipeline.
//!
//! ```toml
//! format_version = 1
//! missing = "*"
//!
//! [[tables]]
//! name = "usnews"
//! header = false
//! delimiter = ","
//! columns = [{ name = "fice", kind = "key" }, { name = "name", kind = "label" }, ...]
//!
//! [join.rename]          # right-hand column -> new name
//!
//! [[imputation]]
//! kind = "sum-of-columns"
//! target = "room_board"
//! sources = ["room", "board"]
//!
//! [[derive]]
//! name = "selectivity"
//! expr = "complement(accepted / applications)"
//! kind = "ratio"
//! ```

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use super::derive::{Derivation, DerivationSpec};
use super::impute::ImputationRule;
use super::table::{ColumnSpec, TableFormat};
use crate::error::{Error, Result};

pub const PRESET_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSource {
    pub name: String,
    #[serde(default = "default_true")]
    pub header: bool,
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
    #[serde(default)]
    pub missing: Option<String>,
    #[serde(default)]
    pub columns: Vec<ColumnSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JoinConfig {
    #[serde(default)]
    pub rename: HashMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub format_version: u32,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default = "default_missing")]
    pub missing: String,
    pub tables: Vec<TableSource>,
    #[serde(default)]
    pub join: JoinConfig,
    #[serde(default)]
    pub imputation: Vec<ImputationRule>,
    pub derive: Vec<Derivation>,
    /// Map constant columns to 0.5 instead of failing.
    #[serde(default)]
    pub degenerate_midpoint: bool,
}

fn default_true() -> bool {
    true
}

fn default_delimiter() -> String {
    ",".into()
}

fn default_missing() -> String {
    "*".into()
}

impl Preset {
    pub fn from_toml(text: &str) -> Result<Self> {
        let p: Preset = toml::from_str(text)?;
        if p.format_version != PRESET_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported preset format_version {} (expected {PRESET_FORMAT_VERSION})",
                p.format_version
            )));
        }
        if p.tables.is_empty() {
            return Err(Error::Config("preset declares no tables".into()));
        }
        if p.derive.is_empty() {
            return Err(Error::Config("preset declares no derived attributes".into()));
        }
        for t in &p.tables {
            t.format(&p.missing)?;
        }
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn derivation_spec(&self) -> DerivationSpec {
        DerivationSpec {
            attributes: self.derive.clone(),
        }
    }
}

impl TableSource {
    pub fn format(&self, default_missing: &str) -> Result<TableFormat> {
        let delimiter = match self.delimiter.as_str() {
            "\\t" | "\t" | "tab" => b'\t',
            d if d.len() == 1 => d.as_bytes()[0],
            d => return Err(Error::Config(format!("table `{}`: bad delimiter `{d}`", self.name))),
        };
        Ok(TableFormat {
            delimiter,
            missing: self.missing.clone().unwrap_or_else(|| default_missing.to_string()),
            header: self.header,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::impute::RowSelector;

    const SAMPLE: &str = r#"
format_version = 1
[[tables]]
name = "t"
columns = [{ name = "id", kind = "key" }, { name = "x", kind = "number" }]

[[imputation]]
kind = "group-average"
target = "x"
group = { label-prefix = "University of California" }

[[imputation]]
kind = "manual-override"
target = "x"
row = { label = "Stanford University" }
value = 3.5

[[derive]]
name = "half"
expr = "x / 2"
kind = "ratio"
"#;

    #[test]
    fn parses_sample() {
        let p = Preset::from_toml(SAMPLE).unwrap();
        assert_eq!(p.tables.len(), 1);
        assert_eq!(p.missing, "*");
        assert_eq!(
            p.imputation[0],
            ImputationRule::GroupAverage {
                target: "x".into(),
                group: RowSelector::LabelPrefix("University of California".into())
            }
        );
        assert_eq!(p.derivation_spec().attributes[0].name, "half");
    }

    #[test]
    fn rejects_other_versions() {
        let text = SAMPLE.replace("format_version = 1", "format_version = 2");
        assert!(matches!(Preset::from_toml(&text), Err(Error::Config(_))));
    }

    #[test]
    fn bundled_college_preset_parses() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets/college.toml");
        let p = Preset::load(&path).unwrap();
        assert_eq!(p.tables.len(), 2);
        assert_eq!(p.derive.len(), 11);
    }
}
