use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Header row plus one record per row.
pub fn write_csv<R: Serialize>(w: impl Write, rows: &[R]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(mut w: impl Write, doc: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Rows as CSV, or `{"summary": …, "<key>": [rows]}` as JSON.
pub fn write_table<S: Serialize, R: Serialize>(
    path: Option<&Path>,
    json: bool,
    summary: &S,
    key: &str,
    rows: &[R],
) -> Result<(), CliError> {
    let w = open(path)?;
    if json {
        let mut doc = serde_json::Map::new();
        doc.insert("summary".into(), serde_json::to_value(summary)?);
        doc.insert(key.into(), serde_json::to_value(rows)?);
        write_json(w, &doc)
    } else {
        write_csv(w, rows)
    }
}
