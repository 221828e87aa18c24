use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Writes one record per line and flushes after each, so partial sweeps
/// survive an aborted run.
pub struct Emitter {
    format: Format,
    out: Box<dyn Write>,
    header: Option<Vec<String>>,
}

impl Emitter {
    pub fn new(format: Format, path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout()),
        };
        Ok(Emitter {
            format,
            out,
            header: None,
        })
    }

    pub fn emit(&mut self, record: Map<String, Value>) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(record))?,
            Format::Text => {
                let parts: Vec<String> = record.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
                writeln!(self.out, "{}", parts.join(" "))?;
            }
            Format::Csv => {
                let keys: Vec<String> = record.keys().cloned().collect();
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                if self.header.as_ref() != Some(&keys) {
                    w.write_record(&keys)?;
                    self.header = Some(keys);
                }
                w.write_record(record.values().map(plain))?;
                let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
                self.out.write_all(&bytes)?;
            }
        }
        self.out.flush()
    }
}

/// Scalars without JSON quoting; arrays of numbers as `1,2,3`; anything
/// else as compact JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) if items.iter().all(Value::is_number) => {
            items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        other => other.to_string(),
    }
}
