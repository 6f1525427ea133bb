use std::collections::{HashMap, HashSet};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Role of one input column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnKind {
    /// Join identifier; exactly one per table.
    Key,
    /// Display name; at most one per table (defaults to the key).
    Label,
    /// Real-valued cell, possibly missing.
    Number,
    /// Free text that is read and discarded.
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
}

impl ColumnSpec {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

/// Lexical format of a delimiter-separated input.
#[derive(Debug, Clone)]
pub struct TableFormat {
    pub delimiter: u8,
    pub missing: String,
    pub header: bool,
}

impl Default for TableFormat {
    fn default() -> Self {
        Self {
            delimiter: b',',
            missing: "*".to_string(),
            header: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub key: String,
    pub label: String,
    pub cells: Vec<Option<f64>>,
}

/// Keyed table of optional numeric cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    columns: Vec<String>,
    records: Vec<Record>,
}

impl RawTable {
    pub fn new(columns: Vec<String>, records: Vec<Record>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::Schema(format!("duplicate column `{c}`")));
            }
        }
        let mut keys = HashSet::new();
        for r in &records {
            if r.cells.len() != columns.len() {
                return Err(Error::Schema(format!(
                    "record `{}` has {} cells for {} columns",
                    r.key,
                    r.cells.len(),
                    columns.len()
                )));
            }
            if !keys.insert(r.key.as_str()) {
                return Err(Error::DuplicateKey(r.key.clone()));
            }
        }
        Ok(Self { columns, records })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Cell lookup; an unknown column is an error, a missing cell is `Ok(None)`.
    pub fn get(&self, row: usize, column: &str) -> Result<Option<f64>> {
        let j = self.column_index(column)?;
        let rec = self.records.get(row).ok_or(Error::OutOfRange {
            index: row,
            len: self.records.len(),
        })?;
        Ok(rec.cells[j])
    }

    pub fn row_by_key(&self, key: &str) -> Option<usize> {
        self.records.iter().position(|r| r.key == key)
    }

    pub fn present_count(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.cells.iter().filter(|c| c.is_some()).count())
            .sum()
    }

    pub(crate) fn records_mut(&mut self) -> &mut [Record] {
        &mut self.records
    }
}

/// Parses delimiter-separated text into a [`RawTable`].
///
/// With `format.header` set, header names are matched against `schema` by
/// name; an empty schema then means "first column key, second label, rest
/// numeric". Without a header the schema is positional.
pub fn parse_table(text: &str, schema: &[ColumnSpec], format: &TableFormat) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = reader.records();

    let layout: Vec<ColumnSpec> = if format.header {
        let header = match rows.next() {
            Some(h) => h?,
            None => return Err(Error::Schema("missing header row".into())),
        };
        if schema.is_empty() {
            header
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    let kind = match i {
                        0 => ColumnKind::Key,
                        1 => ColumnKind::Label,
                        _ => ColumnKind::Number,
                    };
                    ColumnSpec::new(name, kind)
                })
                .collect()
        } else {
            let by_name: HashMap<&str, &ColumnSpec> =
                schema.iter().map(|c| (c.name.as_str(), c)).collect();
            header
                .iter()
                .map(|name| {
                    by_name
                        .get(name)
                        .map(|c| (*c).clone())
                        .ok_or_else(|| Error::UnknownColumn(name.to_string()))
                })
                .collect::<Result<_>>()?
        }
    } else {
        schema.to_vec()
    };

    let key_pos: Vec<usize> = positions(&layout, ColumnKind::Key);
    let label_pos: Vec<usize> = positions(&layout, ColumnKind::Label);
    if key_pos.len() != 1 {
        return Err(Error::Schema(format!(
            "expected exactly one key column, found {}",
            key_pos.len()
        )));
    }
    if label_pos.len() > 1 {
        return Err(Error::Schema("more than one label column".into()));
    }
    let numeric: Vec<usize> = positions(&layout, ColumnKind::Number);
    let columns: Vec<String> = numeric.iter().map(|&i| layout[i].name.clone()).collect();

    let mut records = Vec::new();
    let mut keys = HashSet::new();
    for (n, row) in rows.enumerate() {
        let row = row?;
        let line = n + 1 + usize::from(format.header);
        if row.len() == 1 && row.get(0).is_some_and(str::is_empty) {
            continue;
        }
        if row.len() != layout.len() {
            return Err(Error::RowLength {
                line,
                expected: layout.len(),
                found: row.len(),
            });
        }
        let key = row[key_pos[0]].to_string();
        if !keys.insert(key.clone()) {
            return Err(Error::DuplicateKey(key));
        }
        let label = label_pos
            .first()
            .map(|&i| row[i].to_string())
            .unwrap_or_else(|| key.clone());
        let cells = numeric
            .iter()
            .map(|&i| {
                let raw = &row[i];
                if raw == format.missing {
                    Ok(None)
                } else {
                    raw.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .map(Some)
                        .ok_or_else(|| Error::Unparseable {
                            line,
                            column: layout[i].name.clone(),
                            value: raw.to_string(),
                        })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(Record { key, label, cells });
    }
    RawTable::new(columns, records)
}

fn positions(layout: &[ColumnSpec], kind: ColumnKind) -> Vec<usize> {
    layout
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == kind)
        .map(|(i, _)| i)
        .collect()
}

/// Inner join on key. Labels come from `left`; right-hand columns may be
/// renamed to avoid collisions.
pub fn join_tables(
    left: &RawTable,
    right: &RawTable,
    rename: &HashMap<String, String>,
) -> Result<RawTable> {
    let right_cols: Vec<String> = right
        .columns
        .iter()
        .map(|c| rename.get(c).cloned().unwrap_or_else(|| c.clone()))
        .collect();
    for c in &right_cols {
        if left.columns.contains(c) {
            return Err(Error::ColumnCollision(c.clone()));
        }
    }
    let right_index: HashMap<&str, &Record> =
        right.records.iter().map(|r| (r.key.as_str(), r)).collect();

    let mut columns = left.columns.clone();
    columns.extend(right_cols);
    let records = left
        .records
        .iter()
        .filter_map(|l| {
            right_index.get(l.key.as_str()).map(|r| {
                let mut cells = l.cells.clone();
                cells.extend_from_slice(&r.cells);
                Record {
                    key: l.key.clone(),
                    label: l.label.clone(),
                    cells,
                }
            })
        })
        .collect();
    RawTable::new(columns, records)
}

/// Keeps exactly the rows whose `required` cells are all present.
pub fn drop_incomplete(table: &RawTable, required: &[String]) -> Result<RawTable> {
    let idx = required
        .iter()
        .map(|c| table.column_index(c))
        .collect::<Result<Vec<_>>>()?;
    let records = table
        .records
        .iter()
        .filter(|r| idx.iter().all(|&j| r.cells[j].is_some()))
        .cloned()
        .collect();
    RawTable::new(table.columns.clone(), records)
}
