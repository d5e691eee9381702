//! Tabular output with a versioned schema line.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub schema: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra fields for the JSON summary.
    pub summary: Map<String, Value>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&'static str]) -> Self {
        Table { schema: schema.to_string(), columns: columns.to_vec(), rows: Vec::new(), summary: Map::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# schema: {} v1", self.schema)?;
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format!("{v:e}"),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(v) => json!(v),
                            Cell::Text(s) => json!(s),
                        };
                        (k.to_string(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "schema": format!("{} v1", self.schema),
            "summary": self.summary,
            "rows": rows,
        })
    }
}
