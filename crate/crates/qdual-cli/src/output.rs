use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use crate::config::RunConfig;
use crate::{CliError, Format};

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes `doc` as pretty JSON or `rows` as CSV, depending on the format.
pub fn emit<D: Serialize, R: Serialize>(cfg: &RunConfig, doc: &D, rows: &[R]) -> Result<(), CliError> {
    let mut out = sink(cfg)?;
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, doc).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out).map_err(|e| CliError::Io(e.to_string()))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Compact `name=value;...` rendering used in CSV cells.
pub fn point<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> String {
    pairs.into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}
