use serde::Deserialize;

use super::table::RawTable;
use crate::error::{Error, Result};

/// Selects the rows an imputation rule applies to.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowSelector {
    Key(String),
    Label(String),
    LabelContains(String),
    LabelPrefix(String),
}

impl RowSelector {
    fn matches(&self, key: &str, label: &str) -> bool {
        match self {
            RowSelector::Key(k) => key == k,
            RowSelector::Label(l) => label == l,
            RowSelector::LabelContains(s) => label.contains(s.as_str()),
            RowSelector::LabelPrefix(p) => label.starts_with(p.as_str()),
        }
    }
}

/// A repair that fills missing cells of `target`. Present cells are never
/// overwritten.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ImputationRule {
    /// target := sum of `sources`, when every source is present.
    SumOfColumns { target: String, sources: Vec<String> },
    /// target := mean of the present target values among rows in `group`.
    GroupAverage { target: String, group: RowSelector },
    /// target := `value` for the rows picked by `row`.
    ManualOverride {
        target: String,
        row: RowSelector,
        value: f64,
    },
}

impl ImputationRule {
    pub fn target(&self) -> &str {
        match self {
            ImputationRule::SumOfColumns { target, .. }
            | ImputationRule::GroupAverage { target, .. }
            | ImputationRule::ManualOverride { target, .. } => target,
        }
    }
}

/// Applies `rules` in order and returns the repaired table.
pub fn impute(table: &RawTable, rules: &[ImputationRule]) -> Result<RawTable> {
    let mut out = table.clone();
    for rule in rules {
        apply(&mut out, rule)?;
    }
    Ok(out)
}

fn apply(table: &mut RawTable, rule: &ImputationRule) -> Result<()> {
    let t = table.column_index(rule.target())?;
    match rule {
        ImputationRule::SumOfColumns { sources, .. } => {
            let src = sources
                .iter()
                .map(|s| table.column_index(s))
                .collect::<Result<Vec<_>>>()?;
            if src.is_empty() {
                return Err(Error::Config("sum-of-columns needs at least one source".into()));
            }
            for rec in table.records_mut() {
                if rec.cells[t].is_some() {
                    continue;
                }
                let vals: Option<Vec<f64>> = src.iter().map(|&j| rec.cells[j]).collect();
                if let Some(v) = vals {
                    rec.cells[t] = Some(v.iter().sum());
                }
            }
        }
        ImputationRule::GroupAverage { group, .. } => {
            let present: Vec<f64> = table
                .records()
                .iter()
                .filter(|r| group.matches(&r.key, &r.label))
                .filter_map(|r| r.cells[t])
                .collect();
            if present.is_empty() {
                return Ok(());
            }
            let mean = present.iter().sum::<f64>() / present.len() as f64;
            for rec in table.records_mut() {
                if rec.cells[t].is_none() && group.matches(&rec.key, &rec.label) {
                    rec.cells[t] = Some(mean);
                }
            }
        }
        ImputationRule::ManualOverride { row, value, .. } => {
            if !value.is_finite() {
                return Err(Error::Config(format!("manual override value {value} is not finite")));
            }
            for rec in table.records_mut() {
                if rec.cells[t].is_none() && row.matches(&rec.key, &rec.label) {
                    rec.cells[t] = Some(*value);
                }
            }
        }
    }
    Ok(())
}
