//! Deterministic table output: CSV (RFC-4180-style quoting) or JSON
//! (array of records). Floats carry 12 significant digits so runs are
//! diffable; identical inputs produce byte-identical bytes.

use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 12 significant digits, scientific; negative zero normalized.
fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv(table: &Table, out: &mut dyn Write) -> std::io::Result<()> {
    let header: Vec<String> = table.columns.iter().map(|c| csv_escape(c)).collect();
    writeln!(out, "{}", header.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => fmt_float(*v),
            })
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_json(table: &Table, out: &mut dyn Write) -> std::io::Result<()> {
    let records: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (name, cell) in table.columns.iter().zip(row) {
                let value = match cell {
                    Cell::Int(v) => serde_json::Value::from(*v),
                    Cell::Float(v) => serde_json::Number::from_f64(*v)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null),
                };
                obj.insert((*name).to_string(), value);
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &records)?;
    writeln!(out)?;
    Ok(())
}
