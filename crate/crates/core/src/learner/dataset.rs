use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::identity::Verdict;

/// One labeled past interaction.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionRecord {
    pub features: Vec<f64>,
    pub label: Verdict,
}

impl InteractionRecord {
    pub fn new(features: Vec<f64>, label: Verdict) -> Self {
        Self { features, label }
    }
}

/// An advisor's interaction history under a fixed feature schema.
#[derive(Clone, Debug, PartialEq)]
pub struct AdvisorDataset {
    schema: Vec<String>,
    records: Vec<InteractionRecord>,
}

impl AdvisorDataset {
    pub fn new(schema: Vec<String>) -> Self {
        Self {
            schema,
            records: Vec::new(),
        }
    }

    pub fn from_records(schema: Vec<String>, records: Vec<InteractionRecord>) -> Result<Self> {
        let mut data = Self::new(schema);
        for r in records {
            data.push(r)?;
        }
        Ok(data)
    }

    pub fn push(&mut self, record: InteractionRecord) -> Result<()> {
        if record.features.len() != self.schema.len() {
            return Err(Error::SchemaMismatch {
                expected: self.schema.len(),
                actual: record.features.len(),
            });
        }
        if record.features.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRequest("non-finite feature value".into()));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn n_features(&self) -> usize {
        self.schema.len()
    }

    pub fn records(&self) -> &[InteractionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            schema: self.schema.clone(),
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
        }
    }

    /// Header is the schema followed by `label`; labels are `T` or `N`.
    pub fn write_delimited<W: Write>(&self, out: W, delimiter: u8) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(out);
        let mut header: Vec<&str> = self.schema.iter().map(String::as_str).collect();
        header.push("label");
        writer.write_record(&header)?;
        for r in &self.records {
            let mut row: Vec<String> = r.features.iter().map(|v| v.to_string()).collect();
            row.push(r.label.symbol().to_string());
            writer.write_record(&row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_delimited<R: Read>(input: R, delimiter: u8, origin: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .trim(csv::Trim::All)
            .from_reader(input);
        let header = reader.headers()?.clone();
        let columns: Vec<String> = header.iter().map(str::to_string).collect();
        match columns.last() {
            Some(last) if last == "label" => {}
            _ => {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: 1,
                    reason: "last header column must be `label`".into(),
                })
            }
        }
        let schema = columns[..columns.len() - 1].to_vec();
        let mut data = Self::new(schema);
        for (i, row) in reader.records().enumerate() {
            let row = row?;
            let line = i + 2;
            let bad = |reason: String| Error::Parse {
                path: origin.to_path_buf(),
                line,
                reason,
            };
            if row.len() != columns.len() {
                return Err(bad(format!(
                    "expected {} fields, got {}",
                    columns.len(),
                    row.len()
                )));
            }
            let features = row
                .iter()
                .take(columns.len() - 1)
                .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("missing or non-numeric feature".into()))?;
            let label = Verdict::from_symbol(&row[columns.len() - 1])
                .ok_or_else(|| bad(format!("label `{}` is not T or N", &row[columns.len() - 1])))?;
            data.push(InteractionRecord::new(features, label))?;
        }
        Ok(data)
    }

    /// Reads a dataset file, taking the delimiter from the header line
    /// (tab if present, comma otherwise).
    pub fn read_path(path: &Path) -> Result<Self> {
        let mut reader = BufReader::new(File::open(path)?);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        let delimiter = if first.contains('\t') { b'\t' } else { b',' };
        let rest = first.as_bytes().chain(reader);
        Self::read_delimited(rest, delimiter, path)
    }
}
