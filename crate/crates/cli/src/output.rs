//! Report envelopes and the three output formats.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use ffwaring::algebra::FieldSpec;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Fixed columns for csv and text output.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Table {
        Table { header, rows }
    }
}

/// Run metadata carried by every report.
#[derive(Serialize)]
pub struct Envelope<'a> {
    version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a FieldSpec>,
    budget: u64,
    time_limit: Option<u64>,
    seed: u64,
}

#[derive(Serialize)]
struct WithResult<'a, T: Serialize> {
    #[serde(flatten)]
    meta: &'a Envelope<'a>,
    result: &'a T,
}

impl<'a> Envelope<'a> {
    pub fn new(
        command: &'a str,
        field: Option<&'a FieldSpec>,
        budget: u64,
        time_limit: Option<u64>,
        seed: u64,
    ) -> Envelope<'a> {
        Envelope {
            version: ffwaring::VERSION,
            command,
            field,
            budget,
            time_limit,
            seed,
        }
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut v = vec![
            format!("# ffwaring {} {}", self.version, self.command),
            format!("# budget={} seed={}", self.budget, self.seed),
        ];
        if let Some(t) = self.time_limit {
            v.push(format!("# time_limit={t}s"));
        }
        if let Some(f) = self.field {
            let mut line = format!("# field p={} e={} q={}", f.p(), f.e(), f.q());
            if f.e() > 1 {
                line.push_str(&format!(" modulus={}", f.modulus_string()));
            }
            v.push(line);
        }
        v
    }

    pub fn emit<T: Serialize>(
        &self,
        format: Format,
        result: &T,
        table: &Table,
    ) -> anyhow::Result<()> {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &WithResult { meta: self, result })?;
                writeln!(out)?;
            }
            Format::Csv => {
                for line in self.comment_lines() {
                    writeln!(out, "{line}")?;
                }
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&table.header)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Format::Text => {
                for line in self.comment_lines() {
                    writeln!(out, "{line}")?;
                }
                let mut widths: Vec<usize> =
                    table.header.iter().map(|h| h.chars().count()).collect();
                for row in &table.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, &w)| format!("{c:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(&table.header))?;
                for row in &table.rows {
                    writeln!(out, "{}", line(row))?;
                }
            }
        }
        Ok(())
    }
}
