use clap::ValueEnum;
use serde_json::Value;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One command's result in all three formats. The CSV rows carry the same
/// values as the JSON document, flattened.
pub struct Output {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("JSON values serialize") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("writing to memory");
                for row in &self.rows {
                    w.write_record(row).expect("writing to memory");
                }
                String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 fields")
            }
            Format::Text => self.text.clone(),
        }
    }
}

/// A JSON scalar as a CSV field: strings unquoted, null empty.
pub fn field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
