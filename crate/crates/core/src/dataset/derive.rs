//! Derived attributes: small arithmetic expressions over table columns.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | atom
//! atom   := number | column | 'complement' '(' expr ')' | '(' expr ')'
//! column := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `complement(x)` is `1 - x`. A missing input makes the result missing;
//! a zero divisor makes it missing and is recorded.

use serde::Deserialize;

use super::table::{RawTable, Record};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Column(String),
    Neg(Box<Expr>),
    Complement(Box<Expr>),
    Bin(Box<Expr>, Op, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttributeKind {
    Percentage,
    Ratio,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Derivation {
    pub name: String,
    pub expr: String,
    pub kind: AttributeKind,
}

/// Ordered derived-attribute definitions. Every output is oriented so that
/// higher is better.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct DerivationSpec {
    pub attributes: Vec<Derivation>,
}

/// A cell that became missing because a divisor was zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionByZero {
    pub key: String,
    pub attribute: String,
}

#[derive(Debug, Clone)]
pub struct Derived {
    pub table: RawTable,
    pub division_by_zero: Vec<DivisionByZero>,
}

enum Eval {
    Value(f64),
    Missing,
    DivZero,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            src,
            tokens,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn columns(&self, out: &mut Vec<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Column(c) => {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
            Expr::Neg(e) | Expr::Complement(e) => e.columns(out),
            Expr::Bin(a, _, b) => {
                a.columns(out);
                b.columns(out);
            }
        }
    }

    fn bind(&self, table: &RawTable) -> Result<Bound> {
        Ok(match self {
            Expr::Const(v) => Bound::Const(*v),
            Expr::Column(c) => Bound::Column(table.column_index(c)?),
            Expr::Neg(e) => Bound::Neg(Box::new(e.bind(table)?)),
            Expr::Complement(e) => Bound::Complement(Box::new(e.bind(table)?)),
            Expr::Bin(a, op, b) => Bound::Bin(Box::new(a.bind(table)?), *op, Box::new(b.bind(table)?)),
        })
    }
}

enum Bound {
    Const(f64),
    Column(usize),
    Neg(Box<Bound>),
    Complement(Box<Bound>),
    Bin(Box<Bound>, Op, Box<Bound>),
}

impl Bound {
    fn eval(&self, rec: &Record) -> Eval {
        match self {
            Bound::Const(v) => Eval::Value(*v),
            Bound::Column(j) => rec.cells[*j].map_or(Eval::Missing, Eval::Value),
            Bound::Neg(e) => match e.eval(rec) {
                Eval::Value(v) => Eval::Value(-v),
                other => other,
            },
            Bound::Complement(e) => match e.eval(rec) {
                Eval::Value(v) => Eval::Value(1.0 - v),
                other => other,
            },
            Bound::Bin(a, op, b) => {
                let (x, y) = match (a.eval(rec), b.eval(rec)) {
                    (Eval::Value(x), Eval::Value(y)) => (x, y),
                    (Eval::Missing, _) | (_, Eval::Missing) => return Eval::Missing,
                    _ => return Eval::DivZero,
                };
                match op {
                    Op::Add => Eval::Value(x + y),
                    Op::Sub => Eval::Value(x - y),
                    Op::Mul => Eval::Value(x * y),
                    Op::Div if y == 0.0 => Eval::DivZero,
                    Op::Div => Eval::Value(x / y),
                }
            }
        }
    }
}

/// Evaluates `spec` row by row. The output holds exactly the derived
/// columns, in declaration order, plus key and label.
pub fn derive(table: &RawTable, spec: &DerivationSpec) -> Result<Derived> {
    let mut bound = Vec::with_capacity(spec.attributes.len());
    for d in &spec.attributes {
        let e = Expr::parse(&d.expr)?;
        bound.push(e.bind(table)?);
    }
    let mut division_by_zero = Vec::new();
    let records = table
        .records()
        .iter()
        .map(|rec| {
            let cells = bound
                .iter()
                .zip(&spec.attributes)
                .map(|(b, d)| match b.eval(rec) {
                    Eval::Value(v) if v.is_finite() => Some(v),
                    Eval::Value(_) | Eval::Missing => None,
                    Eval::DivZero => {
                        division_by_zero.push(DivisionByZero {
                            key: rec.key.clone(),
                            attribute: d.name.clone(),
                        });
                        None
                    }
                })
                .collect();
            Record {
                key: rec.key.clone(),
                label: rec.label.clone(),
                cells,
            }
        })
        .collect();
    let columns = spec.attributes.iter().map(|d| d.name.clone()).collect();
    Ok(Derived {
        table: RawTable::new(columns, records)?,
        division_by_zero,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let err = |m: String| Error::Expression {
        expr: src.to_string(),
        message: m,
    };
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| err(format!("bad number `{s}`")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Expression {
            expr: self.src.to_string(),
            message: m.to_string(),
        }
    }

    fn peek_sym(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Sym(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_sym() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Expr::Bin(Box::new(lhs), op, Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Expr::Bin(Box::new(lhs), op, Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_sym() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "complement" && self.peek_sym() == Some('(') {
                    self.pos += 1;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Complement(Box::new(inner)))
                } else {
                    Ok(Expr::Column(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.err("expected a number, column or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::table::{parse_table, TableFormat};

    fn table() -> RawTable {
        parse_table(
            "id,name,accepted,apps,x\n1,A,300,600,2\n2,B,*,600,2\n3,C,10,0,1\n",
            &[],
            &TableFormat::default(),
        )
        .unwrap()
    }

    fn spec(exprs: &[(&str, &str)]) -> DerivationSpec {
        DerivationSpec {
            attributes: exprs
                .iter()
                .map(|(n, e)| Derivation {
                    name: n.to_string(),
                    expr: e.to_string(),
                    kind: AttributeKind::Ratio,
                })
                .collect(),
        }
    }

    #[test]
    fn ratio_and_complement() {
        let out = derive(
            &table(),
            &spec(&[
                ("acc", "accepted / apps"),
                ("sel", "complement(accepted / apps)"),
                ("sel2", "1 - accepted/apps"),
            ]),
        )
        .unwrap();
        let t = out.table;
        assert_eq!(t.columns().len(), 3);
        assert_eq!(t.get(0, "acc").unwrap(), Some(0.5));
        assert_eq!(t.get(0, "sel").unwrap(), Some(0.5));
        assert_eq!(t.get(0, "sel2").unwrap(), Some(0.5));
    }

    #[test]
    fn missing_input_propagates() {
        let out = derive(&table(), &spec(&[("acc", "accepted / apps")])).unwrap();
        assert_eq!(out.table.get(1, "acc").unwrap(), None);
        assert!(out.division_by_zero.iter().all(|d| d.key != "2"));
    }

    #[test]
    fn division_by_zero_reported() {
        let out = derive(&table(), &spec(&[("acc", "accepted / apps")])).unwrap();
        assert_eq!(out.table.get(2, "acc").unwrap(), None);
        assert_eq!(
            out.division_by_zero,
            vec![DivisionByZero {
                key: "3".into(),
                attribute: "acc".into()
            }]
        );
    }

    #[test]
    fn precedence_and_negation() {
        let out = derive(&table(), &spec(&[("v", "-x + 2 * (x - 1) / 4 * 2")])).unwrap();
        assert_eq!(out.table.get(0, "v").unwrap(), Some(-2.0 + 1.0));
    }

    #[test]
    fn unknown_column_and_bad_syntax() {
        assert!(matches!(
            derive(&table(), &spec(&[("v", "nope / 2")])),
            Err(Error::UnknownColumn(_))
        ));
        assert!(matches!(
            derive(&table(), &spec(&[("v", "x +")])),
            Err(Error::Expression { .. })
        ));
        assert!(Expr::parse("(x").is_err());
        assert!(Expr::parse("x $ 2").is_err());
    }

    #[test]
    fn derivation_is_deterministic() {
        let s = spec(&[("a", "accepted / apps * x"), ("b", "complement(x / 3)")]);
        let a = derive(&table(), &s).unwrap().table;
        let b = derive(&table(), &s).unwrap().table;
        for (r1, r2) in a.records().iter().zip(b.records()) {
            let bits1: Vec<_> = r1.cells.iter().map(|c| c.map(f64::to_bits)).collect();
            let bits2: Vec<_> = r2.cells.iter().map(|c| c.map(f64::to_bits)).collect();
            assert_eq!(bits1, bits2);
        }
    }
}
