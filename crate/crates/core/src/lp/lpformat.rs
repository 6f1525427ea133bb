use std::fmt::Write;

use super::model::{LpModel, Sense, VarId, VarKind};

/// Renders the model in the lp_solve LP text dialect.
///
/// Constraints are always labelled (`c3: ...`) so single-variable rows are
/// not mistaken for bounds. Variables keep their declaration order.
pub fn emit_lp_format(model: &LpModel) -> String {
    let names: Vec<String> = model.variables().iter().map(|v| sanitize(&v.name)).collect();
    let mut out = String::new();

    let obj = model.objective();
    let sense = match obj.sense {
        Sense::Minimize => "min",
        Sense::Maximize => "max",
    };
    let mut line = format!("{sense}:");
    line.push_str(&terms(&obj.terms, &names));
    if obj.constant != 0.0 {
        let _ = write!(line, " {}", signed(obj.constant));
    }
    let _ = writeln!(out, "/* objective */\n{line};");

    if !model.constraints().is_empty() {
        out.push_str("\n/* constraints */\n");
    }
    for (i, c) in model.constraints().iter().enumerate() {
        let label = c.name.as_deref().map(sanitize).unwrap_or_else(|| format!("c{}", i + 1));
        let mut lhs = terms(&c.terms, &names);
        if lhs.is_empty() {
            lhs = match names.first() {
                Some(n) => format!(" 0 {n}"),
                None => " 0".into(),
            };
        }
        let _ = writeln!(out, "{label}:{lhs} {} {};", c.relation.symbol(), c.rhs);
    }

    let mut bounds = String::new();
    for (v, name) in model.variables().iter().zip(&names) {
        let (lo, hi) = match v.kind {
            VarKind::Binary => (0.0, 1.0),
            VarKind::Continuous => (v.lower, v.upper),
        };
        if lo == f64::NEG_INFINITY {
            let _ = writeln!(bounds, "{name} >= -1e30;");
        } else if lo != 0.0 {
            let _ = writeln!(bounds, "{name} >= {lo};");
        }
        if hi.is_finite() {
            let _ = writeln!(bounds, "{name} <= {hi};");
        }
    }
    if !bounds.is_empty() {
        out.push_str("\n/* bounds */\n");
        out.push_str(&bounds);
    }

    let ints: Vec<&str> = model
        .variables()
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == VarKind::Binary)
        .map(|(_, n)| n.as_str())
        .collect();
    if !ints.is_empty() {
        let _ = writeln!(out, "\nint {};", ints.join(","));
    }
    out
}

fn terms(terms: &[(VarId, f64)], names: &[String]) -> String {
    let mut s = String::new();
    for (v, c) in terms {
        let _ = write!(s, " {} {}", signed(*c), names[v.index()]);
    }
    s
}

fn signed(c: f64) -> String {
    if c < 0.0 {
        format!("{c}")
    } else {
        format!("+{c}")
    }
}

fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' })
        .collect();
    if !s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        s.insert(0, '_');
    }
    s
}
