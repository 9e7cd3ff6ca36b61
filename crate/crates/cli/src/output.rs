use std::io::{self, Write};

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell. CSV renders everything bare, JSON keeps integers as numbers
/// of unbounded size.
#[derive(Debug, Clone)]
pub enum Field {
    Int(BigInt),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<BigInt> for Field {
    fn from(v: BigInt) -> Self {
        Field::Int(v)
    }
}

impl From<&BigInt> for Field {
    fn from(v: &BigInt) -> Self {
        Field::Int(v.clone())
    }
}

macro_rules! int_field {
    ($($t:ty),*) => {$(
        impl From<$t> for Field {
            fn from(v: $t) -> Self {
                Field::Int(BigInt::from(v))
            }
        }
    )*};
}
int_field!(i8, i64, u64, usize);

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Empty, Into::into)
    }
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Float(v) => format!("{v:.6}"),
            Field::Bool(v) => v.to_string(),
            // Free text never needs quoting if it has no separators.
            Field::Text(s) => s.replace([',', '\n'], ";"),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => Value::Number(v.to_string().parse::<Number>().expect("integer literal")),
            Field::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Field::Bool(v) => Value::Bool(*v),
            Field::Text(s) => Value::String(s.clone()),
            Field::Empty => Value::Null,
        }
    }
}

/// Everything a subcommand emits: scalar fields plus an optional table.
pub struct Report {
    pub command: &'static str,
    pub fields: Vec<(&'static str, Field)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    /// Name of the row array in JSON output.
    pub series: &'static str,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            fields: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            series: "rows",
        }
    }

    pub fn field(&mut self, name: &'static str, v: impl Into<Field>) -> &mut Self {
        self.fields.push((name, v.into()));
        self
    }

    pub fn table(&mut self, series: &'static str, columns: &[&'static str]) -> &mut Self {
        self.series = series;
        self.columns = columns.to_vec();
        self
    }

    pub fn row(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json())?;
                writeln!(out)
            }
        }
    }

    /// Tables print as-is; a report without a table prints its fields as one row.
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let (header, rows): (Vec<&str>, Vec<Vec<&Field>>) = if self.columns.is_empty() {
            (
                self.fields.iter().map(|(k, _)| *k).collect(),
                vec![self.fields.iter().map(|(_, v)| v).collect()],
            )
        } else {
            (self.columns.clone(), self.rows.iter().map(|r| r.iter().collect()).collect())
        };
        writeln!(out, "{}", header.join(","))?;
        for r in rows {
            let line: Vec<String> = r.iter().map(|f| f.csv()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::String(self.command.into()));
        for (k, v) in &self.fields {
            obj.insert((*k).into(), v.json());
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, f)| ((*c).to_string(), f.json())).collect();
                    Value::Object(m)
                })
                .collect();
            obj.insert(self.series.into(), Value::Array(rows));
        }
        Value::Object(obj)
    }
}
