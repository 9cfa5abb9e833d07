//! Tabular output shared by the subcommands.

use dirichlet_core::format::fmt_real;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json, md or csv)")),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Debug, Serialize)]
pub struct Document {
    pub command: String,
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Document {
    pub fn new(command: &str) -> Self {
        Document {
            command: command.into(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn table(mut self, table: Table) -> Self {
        self.tables.push(table);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("document serializes");
                s.push('\n');
                s
            }
            Format::Markdown => self.markdown(),
            Format::Csv => self.csv(),
        }
    }

    fn markdown(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        for t in &self.tables {
            out.push_str(&format!("\n## {}\n\n| {} |\n|", t.name, t.columns.join(" | ")));
            out.push_str(&"---|".repeat(t.columns.len()));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|v| cell_text(v).replace('|', "\\|")).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("\n{n}\n"));
        }
        out
    }

    /// Each table as its own CSV block, introduced by a `# name` line.
    fn csv(&self) -> String {
        let mut blocks = Vec::new();
        for t in &self.tables {
            let mut out = format!("# {}\n{}\n", t.name, t.columns.join(","));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|v| csv_escape(&cell_text(v))).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            blocks.push(out);
        }
        blocks.join("\n")
    }
}

/// 12 significant digits for floats; everything else verbatim.
pub fn cell_text(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt_real(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn re_im(z: Complex64) -> [Value; 2] {
    [num(z.re), num(z.im)]
}
