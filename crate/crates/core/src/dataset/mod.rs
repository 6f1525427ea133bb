//! Raw table ingestion, joining, repair, derivation and normalization.

mod derive;
mod impute;
mod matrix;
mod preset;
mod table;

pub use derive::{derive, AttributeKind, Derivation, DerivationSpec, Derived, DivisionByZero, Expr};
pub use impute::{impute, ImputationRule, RowSelector};
pub use matrix::{normalize_minmax, normalize_out_of_range, AttributeMatrix, DegeneratePolicy};
pub use preset::{JoinConfig, Preset, TableSource, PRESET_FORMAT_VERSION};
pub use table::{
    drop_incomplete, join_tables, parse_table, ColumnKind, ColumnSpec, RawTable, Record, TableFormat,
};

use crate::error::{Error, Result};

/// Row counts at each stage of [`prepare`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub parsed: Vec<(String, usize)>,
    pub joined: usize,
    pub complete_without_imputation: usize,
    pub complete: usize,
    pub division_by_zero: usize,
    pub normalized_columns: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub matrix: AttributeMatrix,
    pub provenance: Provenance,
}

/// parse -> join -> impute -> derive -> drop incomplete -> normalize.
///
/// `inputs` are file contents in the order of `preset.tables`. The
/// unrepaired row count is computed by running the same pipeline without
/// the imputation rules.
pub fn prepare(preset: &Preset, inputs: &[String]) -> Result<Prepared> {
    if inputs.len() != preset.tables.len() {
        return Err(Error::Config(format!(
            "preset declares {} tables but {} inputs were given",
            preset.tables.len(),
            inputs.len()
        )));
    }
    let mut provenance = Provenance::default();
    let mut joined: Option<RawTable> = None;
    for (src, text) in preset.tables.iter().zip(inputs) {
        let t = parse_table(text, &src.columns, &src.format(&preset.missing)?)?;
        provenance.parsed.push((src.name.clone(), t.len()));
        joined = Some(match joined {
            None => t,
            Some(left) => join_tables(&left, &t, &preset.join.rename)?,
        });
    }
    let joined = joined.expect("at least one table");
    provenance.joined = joined.len();

    let spec = preset.derivation_spec();
    let required: Vec<String> = spec.attributes.iter().map(|d| d.name.clone()).collect();

    let raw_derived = derive(&joined, &spec)?;
    provenance.complete_without_imputation = drop_incomplete(&raw_derived.table, &required)?.len();

    let repaired = impute(&joined, &preset.imputation)?;
    let derived = derive(&repaired, &spec)?;
    provenance.division_by_zero = derived.division_by_zero.len();
    let complete = drop_incomplete(&derived.table, &required)?;
    provenance.complete = complete.len();

    let policy = if preset.degenerate_midpoint {
        DegeneratePolicy::Midpoint
    } else {
        DegeneratePolicy::Error
    };
    let (matrix, touched) = normalize_out_of_range(&AttributeMatrix::from_table(&complete)?, policy)?;
    provenance.normalized_columns = touched;
    Ok(Prepared { matrix, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRESET: &str = r#"
format_version = 1
[[tables]]
name = "left"
columns = [{ name = "id", kind = "key" }, { name = "name", kind = "label" },
           { name = "spend", kind = "number" }, { name = "cost", kind = "number" }]
[[tables]]
name = "right"
columns = [{ name = "id", kind = "key" }, { name = "name", kind = "text" },
           { name = "acc", kind = "number" }, { name = "apps", kind = "number" }]
[[imputation]]
kind = "manual-override"
target = "cost"
row = { label = "C" }
value = 4
[[derive]]
name = "value"
expr = "spend / cost"
kind = "ratio"
[[derive]]
name = "sel"
expr = "complement(acc / apps)"
kind = "ratio"
"#;

    #[test]
    fn end_to_end_counts() {
        let preset = Preset::from_toml(PRESET).unwrap();
        let left = "id,name,spend,cost\n1,A,10,5\n2,B,4,4\n3,C,8,*\n4,D,1,1\n".to_string();
        let right = "id,name,acc,apps\n1,A,1,10\n2,B,5,10\n3,C,2,10\n5,E,1,1\n".to_string();
        let out = prepare(&preset, &[left, right]).unwrap();
        let p = &out.provenance;
        assert_eq!(p.parsed, vec![("left".into(), 4), ("right".into(), 4)]);
        assert_eq!(p.joined, 3);
        assert_eq!(p.complete_without_imputation, 2);
        assert_eq!(p.complete, 3);
        assert_eq!(p.normalized_columns, vec!["value".to_string()]);
        assert!(out.matrix.is_unit_range());
        // value = 2, 1, 2 -> 1, 0, 1
        assert_eq!(out.matrix.column(0).collect::<Vec<_>>(), vec![1.0, 0.0, 1.0]);
        assert_eq!(out.matrix.labels()[2], "C");
    }

    #[test]
    fn input_count_must_match() {
        let preset = Preset::from_toml(PRESET).unwrap();
        assert!(matches!(prepare(&preset, &[String::new()]), Err(Error::Config(_))));
    }
}
