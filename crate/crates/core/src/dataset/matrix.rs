use std::io::{Read, Write};

use super::table::RawTable;
use crate::error::{Error, Result};

/// Handling of a constant column during min-max normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegeneratePolicy {
    #[default]
    Error,
    /// Map every entry of the constant column to 0.5.
    Midpoint,
}

/// Dense n x m matrix of attribute values, one row per ranked object.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeMatrix {
    labels: Vec<String>,
    columns: Vec<String>,
    values: Vec<f64>,
}

impl AttributeMatrix {
    /// Row-major `values`; requires n >= 2, m >= 1 and finite entries.
    pub fn new(labels: Vec<String>, columns: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let (n, m) = (labels.len(), columns.len());
        if n < 2 {
            return Err(Error::InvalidMatrix(format!("need at least 2 rows, got {n}")));
        }
        if m < 1 {
            return Err(Error::InvalidMatrix("need at least 1 attribute".into()));
        }
        if values.len() != n * m {
            return Err(Error::Dimension {
                expected: n * m,
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at row {}, column `{}`",
                pos / m,
                columns[pos % m]
            )));
        }
        Ok(Self {
            labels,
            columns,
            values,
        })
    }

    pub fn from_rows(labels: Vec<String>, columns: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let m = columns.len();
        if let Some(r) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::Dimension {
                expected: m,
                found: r.len(),
            });
        }
        Self::new(labels, columns, rows.concat())
    }

    /// Unlabelled matrix; rows are named `r1..rn`, columns `a1..am`.
    pub fn from_values(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        let labels = (1..=rows.len()).map(|i| format!("r{i}")).collect();
        let columns = (1..=m).map(|j| format!("a{j}")).collect();
        Self::from_rows(labels, columns, rows)
    }

    /// Builds a matrix from a table with no missing cells.
    pub fn from_table(table: &RawTable) -> Result<Self> {
        let mut values = Vec::with_capacity(table.len() * table.columns().len());
        for rec in table.records() {
            for (j, c) in rec.cells.iter().enumerate() {
                values.push(c.ok_or_else(|| {
                    Error::InvalidMatrix(format!(
                        "row `{}` is missing `{}`",
                        rec.key,
                        table.columns()[j]
                    ))
                })?);
            }
        }
        let labels = table.records().iter().map(|r| r.label.clone()).collect();
        Self::new(labels, table.columns().to_vec(), values)
    }

    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.cols();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols() + j]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(j).step_by(self.cols()).copied()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn column_max(&self, j: usize) -> f64 {
        self.column(j).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn column_min(&self, j: usize) -> f64 {
        self.column(j).fold(f64::INFINITY, f64::min)
    }

    pub fn is_unit_range(&self) -> bool {
        self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }

    /// Sub-matrix with the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let n = self.rows();
        let mut values = Vec::with_capacity(rows.len() * self.cols());
        let mut labels = Vec::with_capacity(rows.len());
        for &i in rows {
            if i >= n {
                return Err(Error::OutOfRange { index: i, len: n });
            }
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i].clone());
        }
        Self::new(labels, self.columns.clone(), values)
    }

    pub fn without_column(&self, j: usize) -> Result<Self> {
        let m = self.cols();
        if j >= m {
            return Err(Error::OutOfRange { index: j, len: m });
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .filter(|(p, _)| p % m != j)
            .map(|(_, v)| *v)
            .collect();
        let mut columns = self.columns.clone();
        columns.remove(j);
        Self::new(self.labels.clone(), columns, values)
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        let m = self.cols();
        self.values[i * m + j] = v;
    }

    /// Writes `label,<attr>...` with full round-trip precision.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["label".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for i in 0..self.rows() {
            let mut rec = vec![self.labels[i].clone()];
            rec.extend(self.row(i).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the format produced by [`AttributeMatrix::write_csv`].
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 2 {
            return Err(Error::InvalidMatrix("header needs a label and one attribute".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for (n, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != header.len() {
                return Err(Error::RowLength {
                    line: n + 2,
                    expected: header.len(),
                    found: rec.len(),
                });
            }
            labels.push(rec[0].to_string());
            for (j, cell) in rec.iter().skip(1).enumerate() {
                values.push(cell.parse::<f64>().map_err(|_| Error::Unparseable {
                    line: n + 2,
                    column: columns[j].clone(),
                    value: cell.to_string(),
                })?);
            }
        }
        Self::new(labels, columns, values)
    }
}

/// Rescales `column` to span exactly [0, 1].
pub fn normalize_minmax(
    matrix: &AttributeMatrix,
    column: &str,
    policy: DegeneratePolicy,
) -> Result<AttributeMatrix> {
    let j = matrix.column_index(column)?;
    let (lo, hi) = (matrix.column_min(j), matrix.column_max(j));
    let mut out = matrix.clone();
    if hi <= lo {
        return match policy {
            DegeneratePolicy::Error => Err(Error::DegenerateColumn(column.to_string())),
            DegeneratePolicy::Midpoint => {
                for i in 0..out.rows() {
                    out.set(i, j, 0.5);
                }
                Ok(out)
            }
        };
    }
    let span = hi - lo;
    for i in 0..out.rows() {
        let v = (matrix.get(i, j) - lo) / span;
        out.set(i, j, v.clamp(0.0, 1.0));
    }
    Ok(out)
}

/// Min-max normalizes every column holding a value outside [0, 1]; other
/// columns are left as they are. Returns the matrix and the names of the
/// rescaled columns.
pub fn normalize_out_of_range(
    matrix: &AttributeMatrix,
    policy: DegeneratePolicy,
) -> Result<(AttributeMatrix, Vec<String>)> {
    let mut out = matrix.clone();
    let mut touched = Vec::new();
    for j in 0..matrix.cols() {
        if matrix.column(j).any(|v| !(0.0..=1.0).contains(&v)) {
            let name = matrix.columns()[j].clone();
            out = normalize_minmax(&out, &name, policy)?;
            touched.push(name);
        }
    }
    Ok((out, touched))
}
