use serde_json::{json, Map, Value};

use crate::args::Format;

/// Command result: `{command, inputs, outputs, residuals, pass}` plus an
/// optional column table used for CSV output.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub residuals: Map<String, Value>,
    pub pass: bool,
    table: Vec<(&'static str, Vec<Value>)>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            outputs: Map::new(),
            residuals: Map::new(),
            pass: true,
            table: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.into(), value.into());
        self
    }

    pub fn residual(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.residuals.insert(key.into(), value.into());
        self
    }

    /// Adds a column; it also appears as an array under `outputs`.
    pub fn column(&mut self, name: &'static str, values: Vec<Value>) -> &mut Self {
        self.outputs.insert(name.into(), Value::Array(values.clone()));
        self.table.push((name, values));
        self
    }

    /// Adds a column to the CSV table only.
    pub fn csv_column(&mut self, name: &'static str, values: Vec<Value>) -> &mut Self {
        self.table.push((name, values));
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "residuals": self.residuals,
            "pass": self.pass,
        })
    }

    /// The column table when there is one, otherwise one wide row of every
    /// scalar field keyed `section.name`.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        if self.table.is_empty() {
            let mut header = Vec::new();
            let mut row = Vec::new();
            for (section, map) in [("inputs", &self.inputs), ("outputs", &self.outputs), ("residuals", &self.residuals)] {
                for (k, v) in map {
                    if !v.is_array() && !v.is_object() {
                        header.push(format!("{section}.{k}"));
                        row.push(cell(v));
                    }
                }
            }
            header.push("pass".into());
            row.push(self.pass.to_string());
            w.write_record(&header)?;
            w.write_record(&row)?;
        } else {
            w.write_record(self.table.iter().map(|(name, _)| *name))?;
            let rows = self.table.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
            for i in 0..rows {
                w.write_record(self.table.iter().map(|(_, c)| c.get(i).map(cell).unwrap_or_default()))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn render(&self, format: Format) -> Result<String, csv::Error> {
        Ok(match format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.to_json()).expect("serializable")),
            Format::Csv => self.to_csv()?,
        })
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// `{re, im}` object for a complex number.
pub fn complex(re: f64, im: f64) -> Value {
    json!({ "re": re, "im": im })
}
